//! Transition rate of the detector and the three decay rates built from it.
//!
//! `fdot` returns `2πα·Ḟ(ω̄)`: the Planckian equilibrium part plus a
//! transient correction given by a semi-infinite cosine integral over the
//! worldline's interval bracket. Decay rates are reported as `παγᵢ`.

use std::f64::consts::PI;

use nalgebra::Complex;
use rayon::prelude::*;
use serde::Serialize;

use crate::numerics::{
    integrate, integrate_oscillatory, integrate_oscillatory_phase, CubicSpline, Estimate, QuadratureSpec,
};
use crate::worldline::{rate_bracket, Worldline, WorldlineKind};
use crate::Error;

/// How scaled rates `παγᵢ` convert to rates per unit `τ̄` in the master
/// equation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
pub enum TimeScale {
    /// `aᵢ = παγᵢ / 2`, i.e. `a₂ = 2πα·Ḟ(ω̄)`. Puts the loss of complete
    /// positivity near `ω̄ ≈ 1.53`.
    #[default]
    Transition,
    /// `aᵢ = αγᵢ = παγᵢ / π`.
    Physical,
}

impl TimeScale {
    pub fn factor(self) -> f64 {
        match self {
            TimeScale::Transition => 0.5,
            TimeScale::Physical => 1.0 / PI,
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct RateParams {
    pub omegabar: f64,
    pub worldline: Worldline,
    pub quad: QuadratureSpec,
    /// Drop the transient correction so the rates keep their eternal values.
    pub markovian_baseline: bool,
    /// Keep only the dephasing channel; `ω̄ = 0` is then allowed.
    pub dephasing_only: bool,
}

impl RateParams {
    pub fn new(omegabar: f64, worldline: Worldline) -> Self {
        Self {
            omegabar,
            worldline,
            quad: QuadratureSpec::default(),
            markovian_baseline: false,
            dephasing_only: false,
        }
    }

    pub fn switch_on(omegabar: f64) -> Self {
        Self::new(omegabar, Worldline::switch_on())
    }

    pub fn validate(&self) -> Result<(), Error> {
        if !self.omegabar.is_finite() {
            return Err(Error::Contract(format!("omegabar must be finite, got {}", self.omegabar)));
        }
        if self.omegabar == 0.0 && !self.dephasing_only {
            return Err(Error::Contract(
                "absorption and emission rates are undefined at omegabar = 0 (use dephasing-only mode)".into(),
            ));
        }
        self.quad.validate()?;
        Ok(())
    }
}

/// Scaled rates `(παγ₁, παγ₂, παγ₃)` at `τ̄`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RateTriple {
    pub taubar: f64,
    pub g1: f64,
    pub g2: f64,
    pub g3: f64,
}

impl RateTriple {
    pub fn min(&self) -> f64 {
        self.g1.min(self.g2).min(self.g3)
    }
}

/// `ω̄ / (e^{2πω̄} - 1)`, equal to `1/(2π)` at `ω̄ = 0`.
pub fn planck_term(omegabar: f64) -> f64 {
    let x = 2.0 * PI * omegabar;
    if x.abs() < 2.0 * PI * 1e-4 {
        // x / (e^x - 1) = 1 - x/2 + x²/12 - x⁴/720
        let x2 = x * x;
        return (1.0 - x / 2.0 + x2 / 12.0 - x2 * x2 / 720.0) / (2.0 * PI);
    }
    omegabar / x.exp_m1()
}

/// Inertial response `-ω̄ θ(-ω̄)`.
pub fn inertial_fdot(omegabar: f64) -> f64 {
    if omegabar < 0.0 {
        -omegabar
    } else {
        0.0
    }
}

/// Transient correction `(1/π) ∫_τ̄^∞ cos(ω̄ s̄) [1/(Δx)²_> - 1/(Δx)²_<] ds̄`.
pub fn delta_fdot(taubar: f64, omegabar: f64, worldline: &Worldline, quad: &QuadratureSpec) -> Result<Estimate, Error> {
    if !matches!(worldline.kind, WorldlineKind::SwitchOn | WorldlineKind::ReversedStop(_)) {
        return Err(Error::Contract("the transient correction exists only for the switch-on and reversed paths".into()));
    }
    if !(taubar > 0.0) || !taubar.is_finite() {
        return Err(Error::Contract(format!("delta_fdot needs a finite τ̄ > 0, got {taubar}")));
    }
    let kind = worldline.kind;
    let bracket = move |s: f64| rate_bracket(kind, taubar, s);
    // For small τ̄ the bracket changes on the scale τ̄ just above the lower
    // limit; resolve that layer with geometric breakpoints first.
    let mut est = Estimate::ZERO;
    let mut lo = taubar;
    while lo < 1.0 {
        let hi = (2.0 * lo).min(1.0);
        est += integrate(|s| (omegabar * s).cos() * bracket(s), lo, hi, quad)?;
        lo = hi;
    }
    est += if omegabar == 0.0 {
        integrate(bracket, lo, f64::INFINITY, quad)?
    } else {
        integrate_oscillatory(bracket, omegabar, lo, quad)?
    };
    Ok(est * (1.0 / PI))
}

/// `2πα·Ḟ_τ̄(ω̄)` along `worldline`.
pub fn fdot(taubar: f64, omegabar: f64, worldline: &Worldline, quad: &QuadratureSpec) -> Result<f64, Error> {
    Ok(fdot_parts(taubar, omegabar, worldline, quad)?.0)
}

// (total, transient correction)
fn fdot_parts(taubar: f64, omegabar: f64, worldline: &Worldline, quad: &QuadratureSpec) -> Result<(f64, f64), Error> {
    match worldline.kind {
        WorldlineKind::Inertial => Ok((inertial_fdot(omegabar), 0.0)),
        WorldlineKind::EternalAcceleration => Ok((planck_term(omegabar), 0.0)),
        WorldlineKind::SwitchOn if taubar <= 0.0 => Ok((inertial_fdot(omegabar), 0.0)),
        WorldlineKind::ReversedStop(_) if taubar <= 0.0 => Ok((planck_term(omegabar), 0.0)),
        _ => {
            let d = delta_fdot(taubar, omegabar, worldline, quad)?.value;
            Ok((planck_term(omegabar) + d, d))
        }
    }
}

/// One rate sample with the corrections that produced it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RateSample {
    pub triple: RateTriple,
    /// `ΔḞ(τ̄, +ω̄)`.
    pub delta_plus: f64,
    /// `ΔḞ(τ̄, -ω̄)`.
    pub delta_minus: f64,
}

pub fn rate_sample(taubar: f64, params: &RateParams) -> Result<RateSample, Error> {
    params.validate()?;
    let w = params.omegabar;
    if params.markovian_baseline {
        let g1 = if params.dephasing_only { 0.0 } else { 2.0 * planck_term(-w) };
        let g2 = if params.dephasing_only { 0.0 } else { 2.0 * planck_term(w) };
        let triple = RateTriple { taubar, g1, g2, g3: planck_term(0.0) };
        return Ok(RateSample { triple, delta_plus: 0.0, delta_minus: 0.0 });
    }
    let (f0, _) = fdot_parts(taubar, 0.0, &params.worldline, &params.quad)?;
    if params.dephasing_only {
        let triple = RateTriple { taubar, g1: 0.0, g2: 0.0, g3: f0 };
        return Ok(RateSample { triple, delta_plus: 0.0, delta_minus: 0.0 });
    }
    let (fm, dm) = fdot_parts(taubar, -w, &params.worldline, &params.quad)?;
    let (fp, dp) = fdot_parts(taubar, w, &params.worldline, &params.quad)?;
    Ok(RateSample {
        triple: RateTriple { taubar, g1: 2.0 * fm, g2: 2.0 * fp, g3: f0 },
        delta_plus: dp,
        delta_minus: dm,
    })
}

/// `(παγ₁, παγ₂, παγ₃)` at `τ̄`. For the switch-on path `τ̄ = 0` gives the
/// one-sided limit, which coincides with the inertial values.
pub fn gamma_triple(taubar: f64, params: &RateParams) -> Result<RateTriple, Error> {
    Ok(rate_sample(taubar, params)?.triple)
}

/// Closed-form dephasing rate `παγ₃ = (1/2π)(τ̄ - sinh τ̄)/(1 - cosh τ̄)` of
/// the switch-on path.
pub fn gamma3_closed_form(taubar: f64) -> f64 {
    if taubar <= 0.0 {
        return 0.0;
    }
    if taubar < 1e-4 {
        let t2 = taubar * taubar;
        // (sinh t - t)/(cosh t - 1) = t/3 - t³/90 + ...
        return taubar * (1.0 / 3.0 - t2 / 90.0) / (2.0 * PI);
    }
    if taubar > 40.0 {
        // ratio → 1 with exponentially small corrections
        let e = (-taubar).exp();
        return (1.0 - 2.0 * taubar * e + 2.0 * e) / (2.0 * PI);
    }
    let half = (0.5 * taubar).sinh();
    (taubar.sinh() - taubar) / (2.0 * half * half) / (2.0 * PI)
}

// ----------------------------------------------------------------------
// Finite-size Wightman route

fn accelerating(kind: WorldlineKind, tau: f64) -> bool {
    match kind {
        WorldlineKind::Inertial => false,
        WorldlineKind::EternalAcceleration => true,
        WorldlineKind::SwitchOn => tau > 0.0,
        WorldlineKind::ReversedStop(_) => tau < 0.0,
    }
}

// x(τ̄) - x(τ̄ - s̄) as (Δt, Δx) without cancellation on a single segment.
fn separation(w: &Worldline, taubar: f64, sbar: f64) -> (f64, f64) {
    let earlier = taubar - sbar;
    match (accelerating(w.kind, taubar), accelerating(w.kind, earlier)) {
        (true, true) => {
            let mid = taubar - 0.5 * sbar;
            let k = 2.0 * (0.5 * sbar).sinh();
            (k * mid.cosh(), k * mid.sinh())
        }
        (false, false) => (sbar, 0.0),
        _ => {
            let (a, b) = (w.position(taubar), w.position(earlier));
            (a.t - b.t, a.x - b.x)
        }
    }
}

/// `2πα·Ḟ` computed directly from the Wightman function of a detector of
/// size `ε`, using the regulator `iε(ẋ(τ) + ẋ(τ'))`.
pub fn fdot_via_wightman(
    taubar: f64,
    omegabar: f64,
    epsilon: f64,
    worldline: &Worldline,
    quad: &QuadratureSpec,
) -> Result<f64, Error> {
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(Error::Contract(format!("detector size must be positive, got {epsilon}")));
    }
    if !taubar.is_finite() || !omegabar.is_finite() {
        return Err(Error::Contract("τ̄ and ω̄ must be finite".into()));
    }
    let w = *worldline;
    let (ut, ux) = w.velocity(taubar);
    let inv_q = move |s: f64| -> Complex<f64> {
        let (dt, dx) = separation(&w, taubar, s);
        let (vt, vx) = w.velocity(taubar - s);
        let a = Complex::new(dt, -epsilon * (ut + vt));
        let b = Complex::new(dx, -epsilon * (ux + vx));
        (b * b - a * a).inv()
    };

    let mut breaks = vec![0.0];
    let mut b = epsilon;
    while b < 1.0 {
        breaks.push(b);
        b *= 2.0;
    }
    breaks.push(1.0);
    if taubar > 0.0 {
        breaks.push(taubar);
    }
    let tail_start = taubar.max(0.0) + 2.0;
    breaks.push(tail_start);
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();

    let integrand = |s: f64| {
        let q = inv_q(s);
        (omegabar * s).cos() * q.re + (omegabar * s).sin() * q.im
    };
    let mut total = Estimate::ZERO;
    for win in breaks.windows(2) {
        total += integrate(integrand, win[0], win[1], quad)?;
    }
    if omegabar == 0.0 {
        total += integrate(|s| inv_q(s).re, tail_start, f64::INFINITY, quad)?;
    } else {
        total += integrate_oscillatory(|s| inv_q(s).re, omegabar, tail_start, quad)?;
        // sin(ω s) = cos(ω s - π/2)
        total += integrate_oscillatory_phase(|s| inv_q(s).im, omegabar, -0.5 * PI, tail_start, quad)?;
    }
    Ok(total.value / PI)
}

/// Wightman-route values at `ε`, `ε/2`, `ε/4` and their quadratic
/// extrapolation to a point-like detector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PointLimit {
    pub value: f64,
    pub epsilons: [f64; 3],
    pub samples: [f64; 3],
}

pub fn fdot_point_limit(
    taubar: f64,
    omegabar: f64,
    epsilon: f64,
    worldline: &Worldline,
    quad: &QuadratureSpec,
) -> Result<PointLimit, Error> {
    let epsilons = [epsilon, 0.5 * epsilon, 0.25 * epsilon];
    let mut samples = [0.0; 3];
    for (s, &e) in samples.iter_mut().zip(&epsilons) {
        *s = fdot_via_wightman(taubar, omegabar, e, worldline, quad)?;
    }
    let r1 = 2.0 * samples[1] - samples[0];
    let r2 = 2.0 * samples[2] - samples[1];
    let value = (4.0 * r2 - r1) / 3.0;
    Ok(PointLimit { value, epsilons, samples })
}

// ----------------------------------------------------------------------
// Tables

/// Rates sampled on a grid clustered near the start, with cubic
/// interpolation in between.
#[derive(Debug, Clone)]
pub struct RateTable {
    params: RateParams,
    time_scale: TimeScale,
    samples: Vec<RateSample>,
    splines: [CubicSpline; 3],
}

/// Geometric spacing from `first_step` up to where it matches the uniform
/// spacing, then uniform to `end`. Includes `start` itself.
pub fn clustered_grid(start: f64, end: f64, n: usize, first_step: f64) -> Result<Vec<f64>, Error> {
    if n < 4 || !(end > start) || !(first_step > 0.0) {
        return Err(Error::Contract(format!("bad grid request: [{start}, {end}] with {n} points")));
    }
    let ratio: f64 = 1.15;
    let mut geo = Vec::new();
    let mut uniform_step = (end - start) / (n - 1) as f64;
    for _ in 0..50 {
        geo.clear();
        let mut x = start + first_step;
        let mut step = first_step;
        while step * ratio < uniform_step && x < end && geo.len() + 2 < n {
            geo.push(x);
            step *= ratio;
            x += step;
        }
        let last = geo.last().copied().unwrap_or(start);
        let remaining = n - 1 - geo.len();
        let next = (end - last) / remaining as f64;
        if (next - uniform_step).abs() <= 1e-12 * uniform_step {
            break;
        }
        uniform_step = next;
    }
    let mut grid = Vec::with_capacity(n);
    grid.push(start);
    grid.extend_from_slice(&geo);
    let last = *grid.last().unwrap();
    let remaining = n - grid.len();
    let step = (end - last) / remaining as f64;
    for i in 1..=remaining {
        grid.push(if i == remaining { end } else { last + step * i as f64 });
    }
    Ok(grid)
}

impl RateTable {
    /// Samples on `[0, taubar_max]` (or from `taubar_min` when the rates are
    /// singular at the origin) with `n_samples` points.
    pub fn build(params: RateParams, taubar_max: f64, n_samples: usize) -> Result<Self, Error> {
        let start = if params.worldline.finite_at_origin() || params.markovian_baseline { 0.0 } else { 1e-4 };
        Self::build_from(params, start, taubar_max, n_samples)
    }

    pub fn build_from(params: RateParams, taubar_min: f64, taubar_max: f64, n_samples: usize) -> Result<Self, Error> {
        params.validate()?;
        if n_samples < 16 {
            return Err(Error::Contract(format!("a rate table needs at least 16 samples, got {n_samples}")));
        }
        if !(taubar_min >= 0.0) {
            return Err(Error::Contract(format!("table start must be ≥ 0, got {taubar_min}")));
        }
        if taubar_min == 0.0 && !params.worldline.finite_at_origin() && !params.markovian_baseline {
            return Err(Error::Contract("rates diverge at τ̄ = 0 on this path; start the table at τ̄ > 0".into()));
        }
        let first_step = if taubar_min == 0.0 { 1e-3 } else { taubar_min.max(1e-3) };
        let grid = clustered_grid(taubar_min, taubar_max, n_samples, first_step)?;
        Self::from_grid(params, &grid)
    }

    pub fn from_grid(params: RateParams, grid: &[f64]) -> Result<Self, Error> {
        params.validate()?;
        let samples = grid.par_iter().map(|&t| rate_sample(t, &params)).collect::<Result<Vec<_>, _>>()?;
        Self::from_samples(params, samples)
    }

    /// Assembles a table from precomputed samples (useful for synthetic
    /// rate profiles in tests).
    pub fn from_samples(params: RateParams, samples: Vec<RateSample>) -> Result<Self, Error> {
        let xs: Vec<f64> = samples.iter().map(|s| s.triple.taubar).collect();
        let col = |f: fn(&RateTriple) -> f64| samples.iter().map(|s| f(&s.triple)).collect::<Vec<f64>>();
        let splines = [
            CubicSpline::new(xs.clone(), col(|t| t.g1))?,
            CubicSpline::new(xs.clone(), col(|t| t.g2))?,
            CubicSpline::new(xs, col(|t| t.g3))?,
        ];
        Ok(Self { params, time_scale: TimeScale::default(), samples, splines })
    }

    pub fn with_time_scale(mut self, time_scale: TimeScale) -> Self {
        self.time_scale = time_scale;
        self
    }

    pub fn params(&self) -> &RateParams {
        &self.params
    }

    pub fn time_scale(&self) -> TimeScale {
        self.time_scale
    }

    pub fn samples(&self) -> &[RateSample] {
        &self.samples
    }

    pub fn grid(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.triple.taubar).collect()
    }

    pub fn span(&self) -> (f64, f64) {
        (self.samples[0].triple.taubar, self.samples[self.samples.len() - 1].triple.taubar)
    }

    /// Interpolated scaled rates; clamped to the table span.
    pub fn triple_at(&self, taubar: f64) -> RateTriple {
        let (lo, hi) = self.span();
        let t = taubar.clamp(lo, hi);
        RateTriple { taubar: t, g1: self.splines[0].eval(t), g2: self.splines[1].eval(t), g3: self.splines[2].eval(t) }
    }

    /// Rates per unit `τ̄` entering the master equation.
    pub fn generator_rates(&self, taubar: f64) -> [f64; 3] {
        let k = self.time_scale.factor();
        let t = self.triple_at(taubar);
        [k * t.g1, k * t.g2, k * t.g3]
    }
}

/// Everything needed to build a table for a given `ω̄` and path.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct TableOptions {
    pub taubar_max: f64,
    pub samples: usize,
    pub quad: QuadratureSpec,
    pub time_scale: TimeScale,
    pub markovian_baseline: bool,
}

impl Default for TableOptions {
    fn default() -> Self {
        Self {
            taubar_max: 15.0,
            samples: 241,
            quad: QuadratureSpec::default(),
            time_scale: TimeScale::default(),
            markovian_baseline: false,
        }
    }
}

impl TableOptions {
    pub fn params(&self, omegabar: f64, worldline: Worldline) -> RateParams {
        RateParams { quad: self.quad, markovian_baseline: self.markovian_baseline, ..RateParams::new(omegabar, worldline) }
    }

    pub fn build(&self, omegabar: f64, worldline: Worldline) -> Result<RateTable, Error> {
        let table = RateTable::build(self.params(omegabar, worldline), self.taubar_max, self.samples)?;
        Ok(table.with_time_scale(self.time_scale))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::worldline::IntervalConvention;

    fn sw() -> Worldline {
        Worldline::switch_on()
    }

    #[test]
    fn planck_examples() {
        assert!((planck_term(0.0) - 1.0 / (2.0 * PI)).abs() < 1e-15);
        assert!((planck_term(1.0) - 1.870_936_598_660_644_6e-3).abs() < 1e-16);
        assert!((planck_term(-1.0) - 1.001_870_936_598_660_7).abs() < 1e-14);
        // series branch joins the direct branch smoothly
        let (a, b) = (planck_term(0.999_99e-4), planck_term(1.000_01e-4));
        assert!((a - b).abs() < 1e-9);
    }

    #[test]
    fn detailed_balance() {
        for &w in &[0.1, 0.5, 1.0, 2.0] {
            let r = planck_term(-w) / planck_term(w) / (2.0 * PI * w).exp();
            assert!((r - 1.0).abs() < 1e-12, "{w}: {r}");
        }
    }

    #[test]
    fn dephasing_closed_form_examples() {
        let v = gamma3_closed_form(2.0);
        let direct = (2.0 - 2f64.sinh()) / (1.0 - 2f64.cosh()) / (2.0 * PI);
        assert!((v - direct).abs() < 1e-15);
        assert!((v - 9.3738e-2).abs() < 5e-6);
        assert!((gamma3_closed_form(60.0) - 1.0 / (2.0 * PI)).abs() < 1e-15);
        let tiny = gamma3_closed_form(1e-6);
        assert!(tiny > 0.0 && (tiny - 1e-6 / 3.0 / (2.0 * PI)).abs() < 1e-18);
        for &t in &[0.99e-4_f64, 1.01e-4, 39.9, 40.1] {
            let half = (0.5 * t).sinh();
            let direct = (t.sinh() - t) / (2.0 * half * half) / (2.0 * PI);
            assert!((gamma3_closed_form(t) - direct).abs() < 1e-12);
        }
    }

    #[test]
    fn correction_at_zero_frequency_matches_closed_form() {
        let q = QuadratureSpec::default();
        for &t in &[0.05, 1.0, 5.0] {
            let d = delta_fdot(t, 0.0, &sw(), &q).unwrap().value;
            let expected = gamma3_closed_form(t) - 1.0 / (2.0 * PI);
            assert!((d - expected).abs() < 1e-9, "{t}: {d} vs {expected}");
        }
    }

    #[test]
    fn correction_against_brute_force_cutoff() {
        let accelerated = delta_fdot(1.0, 1.0, &sw(), &QuadratureSpec::default()).unwrap().value;
        let brute = QuadratureSpec { rel_tol: 1e-10, abs_tol: 1e-12, ..QuadratureSpec::hard_cutoff(1e4) };
        let reference = delta_fdot(1.0, 1.0, &sw(), &brute).unwrap().value;
        assert!((accelerated - reference).abs() < 1e-8, "{accelerated} vs {reference}");
        assert!((accelerated - 0.017_832).abs() < 1e-5);
    }

    #[test]
    fn correction_decays() {
        let q = QuadratureSpec::default();
        assert!(delta_fdot(20.0, 1.0, &sw(), &q).unwrap().value.abs() < 1e-3);
        for &w in &[0.05, 0.5, 1.0, 4.0] {
            let a = delta_fdot(10.0, w, &sw(), &q).unwrap().value.abs();
            let b = delta_fdot(20.0, w, &sw(), &q).unwrap().value.abs();
            assert!(b < a, "{w}: {a} {b}");
        }
    }

    #[test]
    fn inertial_segment_values() {
        let q = QuadratureSpec::default();
        assert_eq!(fdot(-1.0, 2.0, &sw(), &q).unwrap(), 0.0);
        assert_eq!(fdot(-1.0, -2.0, &sw(), &q).unwrap(), 2.0);
        assert!((fdot(20.0, 0.5, &sw(), &q).unwrap() - planck_term(0.5)).abs() < 1e-3);
    }

    #[test]
    fn rate_continuity_at_switch_on() {
        let p = RateParams::switch_on(0.7);
        let at0 = gamma_triple(0.0, &p).unwrap();
        let near = gamma_triple(1e-5, &p).unwrap();
        assert!((at0.g1 - 1.4).abs() < 1e-15 && at0.g2 == 0.0 && at0.g3 == 0.0);
        assert!((near.g1 - at0.g1).abs() < 1e-4 && (near.g2 - at0.g2).abs() < 1e-4);
        assert!((near.g3 - gamma3_closed_form(1e-5)).abs() < 1e-9, "{} {}", near.g3, gamma3_closed_form(1e-5));
    }

    #[test]
    fn zero_frequency_requires_dephasing_mode() {
        assert!(gamma_triple(1.0, &RateParams::switch_on(0.0)).is_err());
        let p = RateParams { dephasing_only: true, ..RateParams::switch_on(0.0) };
        let t = gamma_triple(1.0, &p).unwrap();
        assert_eq!((t.g1, t.g2), (0.0, 0.0));
        assert!((t.g3 - gamma3_closed_form(1.0)).abs() < 1e-9);
    }

    #[test]
    fn markovian_baseline_is_constant() {
        let p = RateParams { markovian_baseline: true, ..RateParams::switch_on(1.0) };
        let a = gamma_triple(0.3, &p).unwrap();
        let b = gamma_triple(7.0, &p).unwrap();
        assert_eq!((a.g1, a.g2, a.g3), (b.g1, b.g2, b.g3));
        assert_eq!(a.g2, 2.0 * planck_term(1.0));
    }

    #[test]
    fn reversed_literal_diverges_towards_origin() {
        let q = QuadratureSpec::default();
        let w = Worldline::reversed(IntervalConvention::Literal);
        let a = delta_fdot(0.01, 1.0, &w, &q).unwrap().value;
        let b = delta_fdot(0.001, 1.0, &w, &q).unwrap().value;
        assert!(b < a && b < -50.0, "{a} {b}");
        let tl = Worldline::reversed(IntervalConvention::TimelikeNegative);
        assert!(delta_fdot(0.001, 1.0, &tl, &q).unwrap().value.abs() < 1.0);
    }

    #[test]
    fn wightman_finite_size_is_regular() {
        let v = fdot_via_wightman(1.0, 0.0, 1e-2, &sw(), &QuadratureSpec::default()).unwrap();
        assert!(v.is_finite());
        assert!(fdot_via_wightman(1.0, 0.0, 0.0, &sw(), &QuadratureSpec::default()).is_err());
    }

    #[test]
    fn wightman_inertial_limit() {
        let lim = fdot_point_limit(-1.0, -2.0, 1e-2, &sw(), &QuadratureSpec::default()).unwrap();
        assert!((lim.value - 2.0).abs() < 1e-4, "{lim:?}");
    }

    #[test]
    fn grid_shape() {
        let g = clustered_grid(0.0, 10.0, 200, 1e-3).unwrap();
        assert_eq!(g.len(), 200);
        assert_eq!((g[0], g[1], g[199]), (0.0, 1e-3, 10.0));
        assert!(g.windows(2).all(|w| w[1] > w[0]));
        let steps: Vec<f64> = g.windows(2).map(|w| w[1] - w[0]).collect();
        let max = steps.iter().cloned().fold(0.0, f64::max);
        assert!(max < 1.2 * 10.0 / 199.0);
    }
}
