//! Bracketed root finding and scalar minimization.

use serde::Serialize;

use super::NumericsError;

/// Final bracket of a sign change.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
    pub g_lo: f64,
    pub g_hi: f64,
    /// Secant estimate inside `[lo, hi]`.
    pub root: f64,
    pub evaluations: usize,
}

impl Bracket {
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

/// Locates a sign change of `g` in `[lo, hi]` to a bracket of width `<= tol`.
///
/// Illinois-modified regula falsi, falling back to bisection whenever a step
/// fails to halve the bracket. Candidates too close to an end are pushed
/// inward by `tol/2` so both ends keep moving.
pub fn find_sign_change<G>(mut g: G, lo: f64, hi: f64, tol: f64) -> Result<Bracket, NumericsError>
where
    G: FnMut(f64) -> Result<f64, NumericsError>,
{
    if !(lo < hi) || !(tol > 0.0) {
        return Err(NumericsError::Contract(format!("invalid bracket [{lo}, {hi}] with tol {tol}")));
    }
    let (mut a, mut b) = (lo, hi);
    let (mut ga, mut gb) = (g(a)?, g(b)?);
    let mut evaluations = 2;
    if ga == 0.0 {
        return Ok(Bracket { lo: a, hi: a, g_lo: ga, g_hi: ga, root: a, evaluations });
    }
    if gb == 0.0 {
        return Ok(Bracket { lo: b, hi: b, g_lo: gb, g_hi: gb, root: b, evaluations });
    }
    if ga.signum() == gb.signum() || !ga.is_finite() || !gb.is_finite() {
        return Err(NumericsError::NoSignChange { lo, hi, g_lo: ga, g_hi: gb });
    }
    // Illinois weights
    let (mut wa, mut wb) = (1.0, 1.0);
    let mut last_side = 0i8;
    let mut previous_width = b - a;
    let mut force_bisect = false;
    while b - a > tol {
        let mut x = if force_bisect {
            0.5 * (a + b)
        } else {
            let fa = ga * wa;
            let fb = gb * wb;
            (a * fb - b * fa) / (fb - fa)
        };
        let guard = 0.5 * tol;
        if !(x > a + guard) {
            x = (a + guard).min(0.5 * (a + b));
        } else if !(x < b - guard) {
            x = (b - guard).max(0.5 * (a + b));
        }
        let gx = g(x)?;
        evaluations += 1;
        if gx == 0.0 {
            return Ok(Bracket { lo: x, hi: x, g_lo: gx, g_hi: gx, root: x, evaluations });
        }
        if gx.signum() == ga.signum() {
            a = x;
            ga = gx;
            wa = 1.0;
            if last_side == -1 {
                wb *= 0.5;
            }
            last_side = -1;
        } else {
            b = x;
            gb = gx;
            wb = 1.0;
            if last_side == 1 {
                wa *= 0.5;
            }
            last_side = 1;
        }
        let width = b - a;
        force_bisect = width > 0.5 * previous_width;
        previous_width = width;
    }
    let root = if gb != ga { (a * gb - b * ga) / (gb - ga) } else { 0.5 * (a + b) };
    Ok(Bracket { lo: a, hi: b, g_lo: ga, g_hi: gb, root: root.clamp(a, b), evaluations })
}

/// Golden-section search for a local minimum of `f` on `[a, b]`.
/// Returns `(argmin, min)`.
pub fn golden_min<F: FnMut(f64) -> Result<f64, NumericsError>>(
    mut f: F,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<(f64, f64), NumericsError> {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let (mut a, mut b) = (a, b);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    while (b - a).abs() > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d)?;
        }
    }
    Ok(if fc < fd { (c, fc) } else { (d, fd) })
}
