//! Numerical kernel: quadrature, ODE integration, cumulative integrals,
//! interpolation and bracketing.

mod cumulative;
mod ode;
mod quadrature;
mod roots;
mod spline;

pub use cumulative::cumulative_integral;
pub use ode::{ode_solve, DenseSolution, OdeSpec};
pub use quadrature::{
    integrate, integrate_oscillatory, integrate_oscillatory_phase, Estimate, QuadratureSpec, TailPolicy,
};
pub use roots::{find_sign_change, golden_min, Bracket};
pub use spline::CubicSpline;

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum NumericsError {
    #[error("contract violation: {0}")]
    Contract(String),
    #[error("quadrature did not converge within {panels} panels (partial {partial:e}, error {error:e})")]
    QuadratureNonConvergence { partial: f64, error: f64, panels: usize },
    #[error("panel-series acceleration did not converge after {panels} panels (estimate {partial:e}, last increment {last_increment:e})")]
    AccelerationFailure { partial: f64, panels: usize, last_increment: f64 },
    #[error("integrand is not finite near {at}")]
    NonFinite { at: f64 },
    #[error("step size underflow at t = {t} (h = {h:e})")]
    StepUnderflow { t: f64, h: f64 },
    #[error("no sign change on [{lo}, {hi}]: g(lo) = {g_lo:e}, g(hi) = {g_hi:e}")]
    NoSignChange { lo: f64, hi: f64, g_lo: f64, g_hi: f64 },
}
