//! Detector trajectories and the squared proper intervals that enter the
//! transition-rate integrand.
//!
//! Everything here is in scaled units: proper time `τ̄ = τ/α`, lag
//! `s̄ = s/α`, coordinates in units of `α`. Squared intervals use the
//! `(-, +, +, +)` sign so that timelike separations are negative.

use serde::Serialize;

use crate::Error;

/// How the inertial-segment interval of the decelerating path is signed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum IntervalConvention {
    /// `(Δx)²_< = +s̄²`, exactly as printed for the decelerating path. The
    /// integrand then diverges like `-2/s̄²` at its lower limit and the rates
    /// blow up as `τ̄ → 0⁺`.
    Literal,
    /// `(Δx)²_< = -s̄²`, the timelike-negative continuation of the forward
    /// path's bracket; finite at the lower limit.
    TimelikeNegative,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum WorldlineKind {
    Inertial,
    EternalAcceleration,
    /// At rest for `τ ≤ 0`, uniformly accelerated afterwards.
    SwitchOn,
    /// Time reflection of `SwitchOn`: decelerating for `τ < 0`, at rest for `τ ≥ 0`.
    ReversedStop(IntervalConvention),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Worldline {
    pub kind: WorldlineKind,
    /// Inverse proper acceleration.
    pub alpha: f64,
}

/// A Minkowski event `(t, x, y, z)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Event {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Worldline {
    pub fn new(kind: WorldlineKind, alpha: f64) -> Result<Self, Error> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::Contract(format!("alpha must be positive and finite, got {alpha}")));
        }
        Ok(Self { kind, alpha })
    }

    pub fn switch_on() -> Self {
        Self { kind: WorldlineKind::SwitchOn, alpha: 1.0 }
    }

    pub fn reversed(convention: IntervalConvention) -> Self {
        Self { kind: WorldlineKind::ReversedStop(convention), alpha: 1.0 }
    }

    /// Event at scaled proper time `τ̄`, in units of `α`.
    pub fn position(&self, taubar: f64) -> Event {
        let (t, x) = match self.kind {
            WorldlineKind::Inertial => (taubar, 1.0),
            WorldlineKind::EternalAcceleration => (taubar.sinh(), taubar.cosh()),
            WorldlineKind::SwitchOn => {
                if taubar <= 0.0 {
                    (taubar, 1.0)
                } else {
                    (taubar.sinh(), taubar.cosh())
                }
            }
            WorldlineKind::ReversedStop(_) => {
                if taubar >= 0.0 {
                    (taubar, 1.0)
                } else {
                    (taubar.sinh(), taubar.cosh())
                }
            }
        };
        Event { t, x, y: 0.0, z: 0.0 }
    }

    /// Four-velocity `(dt/dτ, dx/dτ)`; one-sided from the left at a kink.
    pub fn velocity(&self, taubar: f64) -> (f64, f64) {
        let accelerating = match self.kind {
            WorldlineKind::Inertial => false,
            WorldlineKind::EternalAcceleration => true,
            WorldlineKind::SwitchOn => taubar > 0.0,
            WorldlineKind::ReversedStop(_) => taubar < 0.0,
        };
        if accelerating {
            (taubar.cosh(), taubar.sinh())
        } else {
            (1.0, 0.0)
        }
    }

    /// Whether the rate integrand stays finite as `τ̄ → 0⁺`.
    pub fn finite_at_origin(&self) -> bool {
        !matches!(self.kind, WorldlineKind::ReversedStop(IntervalConvention::Literal))
    }
}

/// `cosh u - 1 - u²/2` without cancellation.
pub(crate) fn cosh_m1_m2(u: f64) -> f64 {
    if u.abs() < 1.0 {
        let u2 = u * u;
        let mut term = u2 * u2 / 24.0;
        let mut sum = term;
        let mut k = 2.0;
        while term.abs() > 1e-18 * sum.abs() {
            term *= u2 / ((2.0 * k + 1.0) * (2.0 * k + 2.0));
            sum += term;
            k += 1.0;
        }
        sum
    } else {
        u.cosh() - 1.0 - 0.5 * u * u
    }
}

/// `sinh u - u` without cancellation.
pub(crate) fn sinh_m1(u: f64) -> f64 {
    if u.abs() < 1.0 {
        let u2 = u * u;
        let mut term = u * u2 / 6.0;
        let mut sum = term;
        let mut k = 2.0;
        while term.abs() > 1e-18 * sum.abs() {
            term *= u2 / ((2.0 * k) * (2.0 * k + 1.0));
            sum += term;
            k += 1.0;
        }
        sum
    } else {
        u.sinh() - u
    }
}

fn check_branch(taubar: f64, sbar: f64) -> Result<(), Error> {
    if !(taubar > 0.0) || !(sbar >= taubar) || !sbar.is_finite() {
        return Err(Error::Contract(format!(
            "interval branch needs τ̄ > 0 and s̄ ≥ τ̄, got τ̄ = {taubar}, s̄ = {sbar}"
        )));
    }
    Ok(())
}

/// Squared interval between the accelerated event at `τ̄` and the inertial
/// event at `τ̄ - s̄ < 0` on the switch-on path.
pub fn dx2_greater(taubar: f64, sbar: f64) -> Result<f64, Error> {
    check_branch(taubar, sbar)?;
    Ok(forward_greater(taubar, sbar - taubar))
}

/// Squared interval between two events on the hyperbola separated by `s̄`.
pub fn dx2_less(sbar: f64) -> f64 {
    let h = (0.5 * sbar).sinh();
    -4.0 * h * h
}

/// Decelerating path, earlier event on the hyperbola.
pub fn dx2_reversed_greater(taubar: f64, sbar: f64) -> Result<f64, Error> {
    check_branch(taubar, sbar)?;
    Ok(reversed_greater(taubar, sbar - taubar))
}

/// Decelerating path, both events on the inertial segment.
pub fn dx2_reversed_less(sbar: f64, convention: IntervalConvention) -> f64 {
    match convention {
        IntervalConvention::Literal => sbar * sbar,
        IntervalConvention::TimelikeNegative => -sbar * sbar,
    }
}

// -[4 sinh²(τ̄/2) + 2 u sinh τ̄ + u²], u = s̄ - τ̄ ≥ 0
fn forward_greater(taubar: f64, u: f64) -> f64 {
    let h = (0.5 * taubar).sinh();
    -(4.0 * h * h + 2.0 * u * taubar.sinh() + u * u)
}

// -[τ̄² + 2 τ̄ sinh v + 2 (cosh v - 1)], v = s̄ - τ̄ ≥ 0
fn reversed_greater(taubar: f64, v: f64) -> f64 {
    let h = (0.5 * v).sinh();
    -(taubar * taubar + 2.0 * taubar * v.sinh() + 4.0 * h * h)
}

/// The bracket `1/(Δx)²_> - 1/(Δx)²_<` at lag `s̄ ≥ τ̄ ≥ 0`.
///
/// Close to the lower limit both terms are large and nearly equal; there
/// the difference is evaluated as one fraction whose numerator is written
/// in cancellation-free series form.
pub fn rate_bracket(kind: WorldlineKind, taubar: f64, sbar: f64) -> f64 {
    let u = sbar - taubar;
    match kind {
        WorldlineKind::SwitchOn => {
            if u < 1.0 && sbar < 30.0 {
                let half = (0.5 * taubar).sinh();
                let ch_m1 = 2.0 * half * half;
                // (Δx)²_< - (Δx)²_>
                let num = -u * u * ch_m1 - 2.0 * taubar.cosh() * cosh_m1_m2(u) - 2.0 * taubar.sinh() * sinh_m1(u);
                num / (forward_greater(taubar, u) * dx2_less(sbar))
            } else {
                1.0 / forward_greater(taubar, u) - inv_dx2_less(sbar)
            }
        }
        WorldlineKind::ReversedStop(IntervalConvention::TimelikeNegative) => {
            if u < 1.0 {
                let num = 2.0 * taubar * sinh_m1(u) + 2.0 * cosh_m1_m2(u);
                num / (reversed_greater(taubar, u) * -(sbar * sbar))
            } else {
                1.0 / reversed_greater(taubar, u) + 1.0 / (sbar * sbar)
            }
        }
        WorldlineKind::ReversedStop(IntervalConvention::Literal) => {
            1.0 / reversed_greater(taubar, u) - 1.0 / (sbar * sbar)
        }
        WorldlineKind::Inertial | WorldlineKind::EternalAcceleration => 0.0,
    }
}

// 1/(Δx)²_< = -1/(4 sinh²(s̄/2)), written to stay finite for large s̄.
fn inv_dx2_less(sbar: f64) -> f64 {
    let e = (-sbar).exp();
    let d = -(-sbar).exp_m1();
    -e / (d * d)
}
