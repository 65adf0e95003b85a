use thiserror::Error;

use crate::numerics::NumericsError;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error("contract violation: {0}")]
    Contract(String),
    /// The map at `taubar` cannot be inverted reliably, so the intermediate
    /// map is undefined (divisibility only makes sense for bijective maps).
    #[error("dynamical map at τ̄ = {taubar} is not safely invertible (condition number {condition:e}); intermediate maps require a bijective map")]
    NotBijective { taubar: f64, condition: f64 },
    #[error("no sign change of the {what} witness on [{lo}, {hi}]; scanned grid: {grid:?}")]
    NoCrossing { what: &'static str, lo: f64, hi: f64, grid: Vec<(f64, f64)> },
}
