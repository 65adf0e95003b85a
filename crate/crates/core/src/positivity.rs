//! Complete-positivity conditions for the switch-on dynamics.
//!
//! With a nonnegative dephasing rate the CP conditions reduce to confinement
//! of two solutions of the ground-population equation
//! `P' = a₂/2 - P (a₁ + a₂)/2`, started from `P = 0` and `P = 1`, to `[0, 1]`.
//! Closed form: with `Γ = ½∫(a₁ + a₂)` and `G = ½∫e^Γ a₂`,
//! `P₀ = e^{-Γ} G` and `P₁ = e^{-Γ}(G + 1)`.

use rayon::prelude::*;
use serde::Serialize;

use crate::numerics::{cumulative_integral, find_sign_change, ode_solve, DenseSolution, NumericsError, OdeSpec};
use crate::rates::{RateTable, TableOptions};
use crate::worldline::{IntervalConvention, Worldline};
use crate::Error;

/// Dense evaluation grid: each table interval split into this many pieces.
const REFINE: usize = 4;

/// Below this `min P₀` counts as a violation.
pub const VIOLATION_TOL: f64 = 1e-6;
/// Above this `min P₀` (and below `1 + tol` for `max P₁`) counts as satisfied.
pub const SATISFIED_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Serialize)]
pub struct PositivityCurves {
    pub grid: Vec<f64>,
    /// `Γ(τ̄)`.
    pub decay: Vec<f64>,
    /// `G(τ̄)`.
    pub feed: Vec<f64>,
    pub p0: Vec<f64>,
    pub p1: Vec<f64>,
    pub min_p0: f64,
    pub argmin_taubar: f64,
    pub max_p1: f64,
}

fn refined_grid(knots: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(REFINE * knots.len());
    for w in knots.windows(2) {
        for k in 0..REFINE {
            out.push(w[0] + (w[1] - w[0]) * k as f64 / REFINE as f64);
        }
    }
    out.push(*knots.last().unwrap());
    out
}

/// `Γ` and `G` on a refinement of the table grid. Rates enter per unit `τ̄`.
pub fn gamma_g_curves(table: &RateTable) -> Result<(Vec<f64>, Vec<f64>, Vec<f64>), Error> {
    let grid = refined_grid(&table.grid());
    let rates: Vec<[f64; 3]> = grid.iter().map(|&t| table.generator_rates(t)).collect();
    let half_sum: Vec<f64> = rates.iter().map(|a| 0.5 * (a[0] + a[1])).collect();
    let decay = cumulative_integral(&grid, &half_sum)?;
    let weighted: Vec<f64> = rates.iter().zip(&decay).map(|(a, g)| 0.5 * g.exp() * a[1]).collect();
    let feed = cumulative_integral(&grid, &weighted)?;
    Ok((grid, decay, feed))
}

/// `(P₀, P₁)` from `Γ` and `G`.
pub fn ground_probs_closed(decay: &[f64], feed: &[f64]) -> (Vec<f64>, Vec<f64>) {
    decay
        .iter()
        .zip(feed)
        .map(|(g, f)| {
            let e = (-g).exp();
            (e * f, e * (f + 1.0))
        })
        .unzip()
}

pub fn positivity_curves(table: &RateTable) -> Result<PositivityCurves, Error> {
    let (grid, decay, feed) = gamma_g_curves(table)?;
    let (p0, p1) = ground_probs_closed(&decay, &feed);
    let (imin, &min_p0) = p0.iter().enumerate().min_by(|a, b| a.1.total_cmp(b.1)).unwrap();
    let max_p1 = p1.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    Ok(PositivityCurves { argmin_taubar: grid[imin], grid, decay, feed, p0, p1, min_p0, max_p1 })
}

/// Both populations integrated directly; component 0 starts at 0,
/// component 1 at 1.
pub fn ground_probs_ode(table: &RateTable, ode: &OdeSpec) -> Result<DenseSolution<2>, Error> {
    let rhs = |t: f64, p: &[f64; 2]| {
        let [a1, a2, _] = table.generator_rates(t);
        let k = 0.5 * (a1 + a2);
        [0.5 * a2 - k * p[0], 0.5 * a2 - k * p[1]]
    };
    Ok(ode_solve(rhs, [0.0, 1.0], table.span(), ode)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CpVerdict {
    Satisfied,
    Violated,
    /// Excursions between the noise floor and the violation threshold.
    Indeterminate,
}

#[derive(Debug, Clone, Serialize)]
pub struct CpReport {
    pub omegabar: f64,
    pub verdict: CpVerdict,
    pub curves: PositivityCurves,
}

pub fn verdict(min_p0: f64, max_p1: f64) -> CpVerdict {
    if min_p0 < -VIOLATION_TOL || max_p1 > 1.0 + VIOLATION_TOL {
        CpVerdict::Violated
    } else if min_p0 >= -SATISFIED_TOL && max_p1 <= 1.0 + SATISFIED_TOL {
        CpVerdict::Satisfied
    } else {
        CpVerdict::Indeterminate
    }
}

pub fn cp_check(table: &RateTable) -> Result<CpReport, Error> {
    let curves = positivity_curves(table)?;
    Ok(CpReport { omegabar: table.params().omegabar, verdict: verdict(curves.min_p0, curves.max_p1), curves })
}

fn min_p0_at(omegabar: f64, options: &TableOptions) -> Result<(f64, f64), Error> {
    let table = options.build(omegabar, Worldline::switch_on())?;
    let c = positivity_curves(&table)?;
    Ok((c.min_p0, c.argmin_taubar))
}

#[derive(Debug, Clone, Serialize)]
pub struct CpScanResult {
    pub omegabar_grid: Vec<f64>,
    pub min_p0: Vec<f64>,
    pub threshold: f64,
    pub bracket_lo: f64,
    pub bracket_hi: f64,
    pub resolution: f64,
    /// `min P₀` and its location at the reported threshold.
    pub min_witness: f64,
    pub argmin_taubar: f64,
}

/// Number of coarse `ω̄` samples used to locate the first crossing.
pub const SCAN_POINTS: usize = 9;

/// Locates the smallest `ω̄` in `range` where `min P₀` drops below
/// `-VIOLATION_TOL`, to within `resolution`.
pub fn cp_threshold_scan(range: (f64, f64), resolution: f64, options: &TableOptions) -> Result<CpScanResult, Error> {
    let (lo, hi) = range;
    if !(lo < hi) || !(resolution > 0.0) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::Contract(format!("scan needs lo < hi and a positive resolution, got [{lo}, {hi}], {resolution}")));
    }
    let grid: Vec<f64> = (0..SCAN_POINTS).map(|i| lo + (hi - lo) * i as f64 / (SCAN_POINTS - 1) as f64).collect();
    let values = grid.par_iter().map(|&w| min_p0_at(w, options).map(|v| v.0)).collect::<Result<Vec<_>, _>>()?;
    let witness = |v: f64| v + VIOLATION_TOL;
    let idx = (0..grid.len() - 1).find(|&i| witness(values[i]) >= 0.0 && witness(values[i + 1]) < 0.0);
    let Some(i) = idx else {
        return Err(Error::NoCrossing {
            what: "min P0",
            lo,
            hi,
            grid: grid.iter().cloned().zip(values.iter().cloned()).collect(),
        });
    };
    let bracket = find_sign_change(
        |w| min_p0_at(w, options).map(|v| witness(v.0)).map_err(to_numerics),
        grid[i],
        grid[i + 1],
        resolution,
    )
    .map_err(from_numerics)?;
    let (min_witness, argmin_taubar) = min_p0_at(bracket.hi, options)?;
    Ok(CpScanResult {
        omegabar_grid: grid,
        min_p0: values,
        threshold: bracket.root,
        bracket_lo: bracket.lo,
        bracket_hi: bracket.hi,
        resolution,
        min_witness,
        argmin_taubar,
    })
}

// The root finder speaks NumericsError; carry other failures through as text.
fn to_numerics(e: Error) -> NumericsError {
    match e {
        Error::Numerics(n) => n,
        other => NumericsError::Contract(other.to_string()),
    }
}

fn from_numerics(e: NumericsError) -> Error {
    Error::Numerics(e)
}

#[derive(Debug, Clone, Serialize)]
pub struct ProbeValue {
    pub taubar: f64,
    pub p0: f64,
    pub p1: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReversedReport {
    pub omegabar: f64,
    pub convention: IntervalConvention,
    /// Where the table, and `P₀ = 0`, start.
    pub taubar_start: f64,
    pub probes: Vec<ProbeValue>,
    pub all_negative: bool,
    /// `|P₀|` at the earliest probe.
    pub earliest_magnitude: f64,
}

/// Start of the reversed-path table. With the literal interval sign the
/// rates diverge like `1/τ̄` at the origin, so `P₀` is pinned to zero here.
pub const REVERSED_START: f64 = 1e-4;

/// Ground population `P₀` of the decelerating path at the probe times.
pub fn reversed_path_check(
    omegabar: f64,
    probes: &[f64],
    convention: IntervalConvention,
    options: &TableOptions,
) -> Result<ReversedReport, Error> {
    if probes.is_empty() || probes.iter().any(|&p| !(p >= REVERSED_START) || !p.is_finite()) {
        return Err(Error::Contract(format!("probes must be finite and ≥ {REVERSED_START}")));
    }
    let end = probes.iter().cloned().fold(0.0, f64::max) * 1.05 + 0.1;
    let params = options.params(omegabar, Worldline::reversed(convention));
    let table = RateTable::build_from(params, REVERSED_START, end, options.samples)?.with_time_scale(options.time_scale);
    let ode = OdeSpec { abs_tol: 1e-12, rel_tol: 1e-10, initial_step: Some(1e-7), max_step: Some(0.02) };
    let sol = ground_probs_ode(&table, &ode)?;
    let values: Vec<ProbeValue> = probes
        .iter()
        .map(|&t| {
            let [p0, p1] = sol.eval(t);
            ProbeValue { taubar: t, p0, p1 }
        })
        .collect();
    let earliest = values.iter().min_by(|a, b| a.taubar.total_cmp(&b.taubar)).unwrap();
    Ok(ReversedReport {
        omegabar,
        convention,
        taubar_start: REVERSED_START,
        all_negative: values.iter().all(|v| v.p0 < -SATISFIED_TOL),
        earliest_magnitude: earliest.p0.abs(),
        probes: values,
    })
}
