//! Test-function spaces on the circle and their line pictures.

pub mod cayley;
pub mod fourier;
pub mod line;
pub mod piecewise;
pub mod quadrature;

pub use cayley::{cayley, cayley_t_of_theta, jacobian, theta_of_t, LinePoint};
pub use fourier::{sigma, sobolev_half_sq, symplectic, CircleFourier, CCR_SCALE};
pub use line::{
    dilate_line, line_derivatives, line_integral, line_pairing, translate_line,
    vectorfield_line_integral_f3g, LineBump, LineObject, Projection, Transformed, Weight,
};
pub use piecewise::{g_limit, gn_family, PiecewiseLinearCircle};
pub use quadrature::{integrate_cut, CutIntegral, QuadratureSpec};
