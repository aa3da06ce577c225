//! Lifshitz interaction between two half-spaces across a vacuum gap: the
//! imaginary-axis double integral, the real-axis spectral summation, their
//! contour identity, physical energies and the density of states.

mod cauchy;
mod dos;
mod energy;
mod imaginary;
mod spectral;

use serde::{Deserialize, Serialize};

use crate::media::{PermittivityModel, Polarization};

pub use cauchy::{
    cauchy_identity, endpoint_term, random_rectangles, rectangle_cauchy_zero, CauchyReport,
    Rectangle, RectangleCheck, CAUCHY_TOLERANCE,
};
pub use dos::{density_of_states, AtomKind, DensityOfStates, DosBin, PoleAtom};
pub use energy::{
    interaction_energy, EnergyReport, Material, PhysicalSetup, PolarizationEnergy, PRESSURE_STEP,
};
pub use imaginary::{
    i_imag, i_imag_by_parts, imag_axis_integrand, imag_axis_log_f, inner_imag, inner_imag_by_parts,
};
pub use spectral::{
    continuum_integrand, i_real, phase_density, spectral_inner, SpectralInner, SpectralSummation,
};

/// Value of a dimensionless Lifshitz double integral.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LifshitzResult {
    pub value: f64,
    pub polarization: Polarization,
    pub model: PermittivityModel,
    /// Transverse cutoff `R_0` (may be infinite).
    pub r0: f64,
    /// Frequency cutoff `rho` (may be infinite).
    pub rho: f64,
    pub error_estimate: f64,
}
