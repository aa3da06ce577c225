//! Open-domain mode structure: scattering amplitudes of the propagating
//! words, real generators of the evanescent words, pole scans, scattering
//! phases and loci tables.

mod dispersion;
mod generators;
mod poles;
mod scattering;

pub use dispersion::{
    expm1, f_deficit, f_local, f_value, f_with_derivative, g_log_derivative, Kernel, Sheet,
};
pub use generators::{cat_e_generator, nonretarded_tm_eee, parity_factor, surface_factor, Parity};
pub use poles::{
    ele_generator_at_branch, loci_table, phase_delta, pole_scan, LociKind, LociRow, LociTable,
    OpenPole, PoleScan, PoleScanOptions, WindowCheck, BRANCH_MARGIN, ELE_TOLERANCE,
};
pub use scattering::{closed_form_amplitudes, scattering, Direction, ScatteringAmplitudes};
