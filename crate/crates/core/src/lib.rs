//! Time-dependent decay rates and open-system diagnostics for a two-level
//! detector that switches on uniform acceleration at a finite time.
//!
//! All quantities are in scaled units where the inverse proper acceleration
//! is one. Rates are reported as `π·α·γᵢ` (see [`rates::RateTriple`]).

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// Quadrature node tables keep their published digits.
#![allow(clippy::excessive_precision)]

pub mod dynamics;
pub mod information;
pub mod numerics;
pub mod positivity;
pub mod rates;
pub mod worldline;

mod error;

pub use error::Error;
