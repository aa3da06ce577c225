//! Physical constants (CODATA 2018 exact or recommended values).

/// Reduced Planck constant in J s.
pub const HBAR: f64 = 1.054_571_817e-34;

/// Speed of light in vacuum in m/s.
pub const C: f64 = 299_792_458.0;
