//! Electromagnetic mode spectra of a three-region planar dielectric system,
//! Lifshitz interaction energies and Casimir stresses.
//!
//! Regions I and III (`Z < 0`, `Z > 1`) carry a common permittivity law;
//! region II is vacuum. All internal quantities are dimensionless: lengths in
//! units of the gap `Lz`, frequencies as `Omega = omega Lz / c`.

// `!(x > 0.0)` is used on purpose so that NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cavity;
pub mod cli;
pub mod error;
pub mod lifshitz;
pub mod media;
pub mod numerics;
pub mod openmodes;
pub mod plasmon;
pub mod units;

pub use error::{Error, Result};
pub use media::{ModeClass, PermittivityModel, Polarization, Region};
