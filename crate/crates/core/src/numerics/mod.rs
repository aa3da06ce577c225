//! Numerical kernels: root scanning, adaptive quadrature and contour
//! integration.

pub mod contour;
pub mod quadrature;
pub mod roots;

pub use contour::{contour_integral, winding, winding_from_log_derivative, ContourPath, Winding};
pub use quadrature::{
    central_difference, derivative, integrate, integrate_2d, integrate_adaptive,
    integrate_segments, kronrod_nodes, QuadValue, QuadratureOptions, QuadratureResult, Tracked,
};
pub use roots::{refine_bracket, scan_roots};
