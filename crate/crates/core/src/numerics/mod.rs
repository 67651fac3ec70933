//! Numerical building blocks: adaptive quadrature, an embedded Runge–Kutta
//! integrator and tridiagonal eigensolvers.

pub mod ode;
pub mod quadrature;
pub mod tridiag;

/// Observed convergence order from errors measured at spacings `h·factor`
/// (`coarse`) and `h` (`fine`).
pub fn convergence_order(coarse: f64, fine: f64, factor: f64) -> f64 {
    crate::math::ln(coarse / fine) / crate::math::ln(factor)
}

/// Richardson extrapolation of a quantity with leading error `O(h^order)`.
pub fn richardson(coarse: f64, fine: f64, factor: f64, order: f64) -> f64 {
    let r = crate::math::powf(factor, order);
    (r * fine - coarse) / (r - 1.0)
}
