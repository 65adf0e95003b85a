//! Distinguishability diagnostics: trace distance and its flow, Helstrom
//! norms of system-ancilla pairs, sampled BLP measure, divisibility tables
//! and the emission-rate sign scan.

use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::dynamics::{
    choi, intermediate_map_given, is_cp, Evolution, MapTrajectory, QubitState, TransferMap, C64,
};
use crate::numerics::{find_sign_change, golden_min, NumericsError, OdeSpec, QuadratureSpec};
use crate::rates::{gamma_triple, RateParams, RateTable};
use crate::Error;

/// Half the Euclidean distance of the Bloch vectors.
pub fn trace_distance(a: &QubitState, b: &QubitState) -> f64 {
    let d: f64 = (0..3).map(|i| (a.bloch[i] - b.bloch[i]).powi(2)).sum();
    0.5 * d.sqrt()
}

/// Probability of guessing correctly which of two equiprobable states was
/// prepared.
pub fn distinguishability(distance: f64) -> f64 {
    0.5 * (1.0 + distance)
}

/// Sum of absolute eigenvalues of a Hermitian matrix.
pub fn trace_norm(m: &DMatrix<C64>) -> f64 {
    let herm = (m + m.adjoint()) * C64::new(0.5, 0.0);
    SymmetricEigen::new(herm).eigenvalues.iter().map(|v| v.abs()).sum()
}

/// Derivative step used for the information flow.
pub const FLOW_STEP: f64 = 1e-3;

/// `σ(τ̄) = dD/dτ̄` by central differences with one Richardson step;
/// second-order one-sided differences at the ends of `span`.
pub fn info_flow(distance: impl Fn(f64) -> f64, taubar: f64, span: (f64, f64)) -> f64 {
    let h = FLOW_STEP;
    let (lo, hi) = span;
    if taubar - 2.0 * h < lo {
        let t = taubar.max(lo);
        return (-3.0 * distance(t) + 4.0 * distance(t + h) - distance(t + 2.0 * h)) / (2.0 * h);
    }
    if taubar + 2.0 * h > hi {
        let t = taubar.min(hi);
        return (3.0 * distance(t) - 4.0 * distance(t - h) + distance(t - 2.0 * h)) / (2.0 * h);
    }
    let c = |k: f64| (distance(taubar + k) - distance(taubar - k)) / (2.0 * k);
    (4.0 * c(h) - c(2.0 * h)) / 3.0
}

/// State of system ⊗ ancilla, system index major.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtendedState {
    pub matrix: DMatrix<C64>,
    pub ancilla_dim: usize,
}

impl ExtendedState {
    pub fn pure(amplitudes: &[C64], ancilla_dim: usize) -> Result<Self, Error> {
        if !(2..=3).contains(&ancilla_dim) || amplitudes.len() != 2 * ancilla_dim {
            return Err(Error::Contract(format!("need 2·d amplitudes with d ∈ {{2, 3}}, got {} for d = {ancilla_dim}", amplitudes.len())));
        }
        let n: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        let v = DMatrix::from_iterator(2 * ancilla_dim, 1, amplitudes.iter().map(|a| a / n));
        Ok(Self { matrix: &v * v.adjoint(), ancilla_dim })
    }

    /// Product state `ρ ⊗ |0⟩⟨0|`.
    pub fn product(state: &QubitState, ancilla_dim: usize) -> Self {
        let r = state.to_matrix();
        let mut m = DMatrix::zeros(2 * ancilla_dim, 2 * ancilla_dim);
        for a in 0..2 {
            for b in 0..2 {
                m[(a * ancilla_dim, b * ancilla_dim)] = r[(a, b)];
            }
        }
        Self { matrix: m, ancilla_dim }
    }
}

/// Applies `Φ ⊗ id` to an operator on system ⊗ ancilla.
pub fn extend_map(map: &TransferMap, op: &DMatrix<C64>, ancilla_dim: usize) -> DMatrix<C64> {
    let d = ancilla_dim;
    let mut out = DMatrix::zeros(2 * d, 2 * d);
    for i in 0..d {
        for j in 0..d {
            let block = nalgebra::Matrix2::new(op[(i, j)], op[(i, d + j)], op[(d + i, j)], op[(d + i, d + j)]);
            let img = map.apply_operator(&block);
            for a in 0..2 {
                for b in 0..2 {
                    out[(a * d + i, b * d + j)] = img[(a, b)];
                }
            }
        }
    }
    out
}

/// Two extended states with their priors.
#[derive(Debug, Clone, PartialEq)]
pub struct HelstromInput {
    pub rho1: ExtendedState,
    pub rho2: ExtendedState,
    pub p1: f64,
}

fn amp(v: &[f64]) -> Vec<C64> {
    v.iter().map(|&x| C64::new(x, 0.0)).collect()
}

impl HelstromInput {
    pub fn new(rho1: ExtendedState, rho2: ExtendedState, p1: f64) -> Result<Self, Error> {
        if rho1.ancilla_dim != rho2.ancilla_dim || !(0.0..=1.0).contains(&p1) {
            return Err(Error::Contract("states must share the ancilla and priors must lie in [0, 1]".into()));
        }
        Ok(Self { rho1, rho2, p1 })
    }

    /// `(|e0⟩ + |g1⟩)/√2` against `(|e1⟩ + |g0⟩)/√2`, equal priors. Their
    /// Helstrom matrix has no component along the system identity, so it
    /// only sees the contracting part of the map.
    pub fn bell_pair() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let a = ExtendedState::pure(&amp(&[s, 0.0, 0.0, s]), 2).unwrap();
        let b = ExtendedState::pure(&amp(&[0.0, s, s, 0.0]), 2).unwrap();
        Self { rho1: a, rho2: b, p1: 0.5 }
    }

    /// `(|e0⟩ + |g1⟩)/√2` against `(|e2⟩ + |g0⟩)/√2` with a three-level
    /// ancilla and equal priors. Both are maximally entangled and mutually
    /// orthogonal, but their ancilla marginals differ, which exposes the
    /// population transfer of the map.
    pub fn shifted_pair() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let a = ExtendedState::pure(&amp(&[s, 0.0, 0.0, 0.0, s, 0.0]), 3).unwrap();
        let b = ExtendedState::pure(&amp(&[0.0, 0.0, s, s, 0.0, 0.0]), 3).unwrap();
        Self { rho1: a, rho2: b, p1: 0.5 }
    }

    /// The excited state tagged by orthogonal levels of a three-level
    /// ancilla, equal priors. `E` equals `max(1, |z|)` of the evolved
    /// excited state, so it rises only while the map fails to be positive.
    pub fn flagged_excited() -> Self {
        let a = ExtendedState::product(&QubitState::excited(), 3);
        let mut b = a.clone();
        b.matrix.fill(C64::new(0.0, 0.0));
        b.matrix[(2, 2)] = C64::new(1.0, 0.0);
        Self { rho1: a, rho2: b, p1: 0.5 }
    }

    pub fn ancilla_dim(&self) -> usize {
        self.rho1.ancilla_dim
    }

    fn helstrom_matrix(&self) -> DMatrix<C64> {
        &self.rho1.matrix * C64::new(self.p1, 0.0) - &self.rho2.matrix * C64::new(1.0 - self.p1, 0.0)
    }
}

/// `E = ‖(Φ ⊗ id)(p₁ρ̃₁ - p₂ρ̃₂)‖₁`.
pub fn helstrom_norm(input: &HelstromInput, map: &TransferMap) -> f64 {
    trace_norm(&extend_map(map, &input.helstrom_matrix(), input.ancilla_dim()))
}

/// Tighter integration for quantities that are differentiated numerically.
pub fn fine_evolution(hamiltonian: bool) -> Evolution {
    Evolution {
        hamiltonian,
        ode: OdeSpec { abs_tol: 1e-13, rel_tol: 1e-12, initial_step: None, max_step: Some(0.02) },
    }
}

/// `E(τ̄)` along `grid`.
pub fn helstrom_curve(input: &HelstromInput, maps: &MapTrajectory, grid: &[f64]) -> Vec<f64> {
    grid.par_iter().map(|&t| helstrom_norm(input, &maps.at(t))).collect()
}

/// Largest rise of a curve above its running minimum, with the abscissa
/// where it occurs.
pub fn max_increase(grid: &[f64], values: &[f64]) -> (f64, f64) {
    let mut low = f64::INFINITY;
    let mut best = (0.0, grid.first().copied().unwrap_or(0.0));
    for (&t, &v) in grid.iter().zip(values) {
        low = low.min(v);
        if v - low > best.0 {
            best = (v - low, t);
        }
    }
    best
}

#[derive(Debug, Clone, PartialEq)]
pub struct HelstromSample {
    pub increase: f64,
    pub at_taubar: f64,
    pub witness: HelstromInput,
    pub pairs: usize,
}

/// Equal-prior search over pure system-ancilla pairs with a three-level
/// ancilla: the flagged excited pair first, then seeded random pairs.
pub fn helstrom_sample(maps: &MapTrajectory, grid: &[f64], n_pairs: usize, seed: u64) -> Result<HelstromSample, Error> {
    if n_pairs == 0 {
        return Err(Error::Contract("need at least one pair".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = || -> Vec<C64> { (0..6).map(|_| C64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)).collect() };
    let mut inputs = vec![HelstromInput::flagged_excited()];
    while inputs.len() < n_pairs {
        let (a, b) = (draw(), draw());
        inputs.push(HelstromInput { rho1: ExtendedState::pure(&a, 3)?, rho2: ExtendedState::pure(&b, 3)?, p1: 0.5 });
    }
    let scored: Vec<(f64, f64)> = inputs
        .par_iter()
        .map(|inp| {
            let e: Vec<f64> = grid.iter().map(|&t| helstrom_norm(inp, &maps.at(t))).collect();
            max_increase(grid, &e)
        })
        .collect();
    let (i, &(increase, at_taubar)) = scored.iter().enumerate().max_by(|a, b| a.1 .0.total_cmp(&b.1 .0)).unwrap();
    Ok(HelstromSample { increase, at_taubar, witness: inputs[i].clone(), pairs: n_pairs })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BlpWitness {
    pub first: [f64; 3],
    pub second: [f64; 3],
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BlpResult {
    /// Largest `∫ max(σ, 0) dτ̄` over the sampled pairs.
    pub measure: f64,
    pub witness: BlpWitness,
    pub pairs: usize,
}

/// Number of deterministic antipodal pairs in every BLP sample.
pub const ANTIPODAL_AXES: usize = 20;

fn sphere_point(u: f64, v: f64) -> [f64; 3] {
    let z = 2.0 * u - 1.0;
    let r = (1.0 - z * z).max(0.0).sqrt();
    let phi = 2.0 * PI * v;
    [r * phi.cos(), r * phi.sin(), z]
}

/// Pure-state pairs: `ANTIPODAL_AXES` antipodal pairs on a Fibonacci
/// lattice, then seeded random pairs up to `n_pairs` in total.
pub fn sample_pairs(n_pairs: usize, seed: u64) -> Vec<BlpWitness> {
    let golden = 0.5 * (5f64.sqrt() - 1.0);
    let mut pairs: Vec<BlpWitness> = (0..ANTIPODAL_AXES.min(n_pairs))
        .map(|k| {
            let n = sphere_point((k as f64 + 0.5) / ANTIPODAL_AXES as f64, (k as f64 * golden).fract());
            BlpWitness { first: n, second: [-n[0], -n[1], -n[2]] }
        })
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    while pairs.len() < n_pairs {
        let a = sphere_point(rng.gen(), rng.gen());
        let b = sphere_point(rng.gen(), rng.gen());
        pairs.push(BlpWitness { first: a, second: b });
    }
    pairs
}

/// Grid spacing for the BLP integral.
pub const BLP_STEP: f64 = 0.01;

fn uniform_grid(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let n = ((hi - lo) / step).ceil().max(1.0) as usize;
    (0..=n).map(|i| lo + (hi - lo) * i as f64 / n as f64).collect()
}

/// Sampled BLP functional `max over pairs of ∫ max(σ, 0) dτ̄`.
pub fn blp_sample(table: &RateTable, n_pairs: usize, seed: u64, hamiltonian: bool) -> Result<BlpResult, Error> {
    if n_pairs == 0 {
        return Err(Error::Contract("need at least one pair".into()));
    }
    let maps = MapTrajectory::solve(table, &fine_evolution(hamiltonian))?;
    let span = table.span();
    let grid = uniform_grid(span.0, span.1, BLP_STEP);
    let pairs = sample_pairs(n_pairs, seed);
    let scores: Vec<f64> = pairs
        .par_iter()
        .map(|p| {
            let (a, b) = (QubitState { bloch: p.first }, QubitState { bloch: p.second });
            let dist = |t: f64| {
                let m = maps.at(t.clamp(span.0, span.1));
                trace_distance(&m.apply(&a), &m.apply(&b))
            };
            let flow: Vec<f64> = grid.iter().map(|&t| info_flow(dist, t, span).max(0.0)).collect();
            grid.windows(2).zip(flow.windows(2)).map(|(g, f)| 0.5 * (g[1] - g[0]) * (f[0] + f[1])).sum()
        })
        .collect();
    let (best, &measure) = scores.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).unwrap();
    Ok(BlpResult { measure, witness: pairs[best], pairs: n_pairs })
}

/// One interval `[s, t]` of a divisibility table.
#[derive(Debug, Clone, Serialize)]
pub struct DivisibilityRow {
    pub s: f64,
    pub t: f64,
    /// Smallest per-channel scaled rate seen on the interval.
    pub min_g1: f64,
    pub min_g2: f64,
    pub min_g3: f64,
    /// `None` when `Φ_s` is too ill-conditioned to define `V_{t,s}`.
    pub choi_min: Option<f64>,
    pub cp: Option<bool>,
    pub note: Option<String>,
}

impl DivisibilityRow {
    pub fn min_rate(&self) -> f64 {
        self.min_g1.min(self.min_g2).min(self.min_g3)
    }
}

/// Rate samples per interval used to find the interval's rate minima.
const RATE_PROBES: usize = 16;

/// Tolerance used to flag an intermediate map as not CP.
pub const DIVISIBILITY_TOL: f64 = 1e-8;

pub fn divisibility_report(table: &RateTable, grid: &[f64], evolution: &Evolution) -> Result<Vec<DivisibilityRow>, Error> {
    if grid.len() < 2 || grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Contract("divisibility grid must be strictly increasing with ≥ 2 points".into()));
    }
    let maps = MapTrajectory::solve(table, evolution)?;
    let rows = grid
        .par_windows(2)
        .map(|w| {
            let (s, t) = (w[0], w[1]);
            let mut mins = [f64::INFINITY; 3];
            for k in 0..=RATE_PROBES {
                let tr = table.triple_at(s + (t - s) * k as f64 / RATE_PROBES as f64);
                mins[0] = mins[0].min(tr.g1);
                mins[1] = mins[1].min(tr.g2);
                mins[2] = mins[2].min(tr.g3);
            }
            let mut phi_s = maps.at(s);
            phi_s.taubar = s;
            let (choi_min, cp, note) = match intermediate_map_given(table, &phi_s, t, evolution) {
                Ok(v) => {
                    let c = is_cp(&choi(&v), DIVISIBILITY_TOL);
                    (Some(c.min_eigenvalue), Some(c.cp), None)
                }
                Err(e @ Error::NotBijective { .. }) => (None, None, Some(e.to_string())),
                Err(e) => return Err(e),
            };
            Ok(DivisibilityRow { s, t, min_g1: mins[0], min_g2: mins[1], min_g3: mins[2], choi_min, cp, note })
        })
        .collect::<Result<Vec<_>, Error>>()?;
    Ok(rows)
}

/// Sign-change scan of `min over τ̄ ∈ (0, τ̄_max] of παγ₂` in `ω̄`.
#[derive(Debug, Clone, Serialize)]
pub struct Gamma2Scan {
    pub omegabar_grid: Vec<f64>,
    pub min_g2: Vec<f64>,
    pub threshold: f64,
    pub bracket_lo: f64,
    pub bracket_hi: f64,
    pub resolution: f64,
    pub min_witness: f64,
    pub argmin_taubar: f64,
}

/// Default window for the emission-rate minimum.
pub const GAMMA2_WINDOW: f64 = 10.0;
const GAMMA2_PROBES: usize = 200;

/// `(min παγ₂, argmin)` over `τ̄ ∈ (0, taubar_max]`: a uniform sweep then a
/// golden-section polish around the best sample.
pub fn min_gamma2(omegabar: f64, taubar_max: f64, quad: &QuadratureSpec) -> Result<(f64, f64), Error> {
    let params = RateParams { quad: *quad, ..RateParams::switch_on(omegabar) };
    let g2 = |t: f64| gamma_triple(t, &params).map(|r| r.g2);
    let step = taubar_max / GAMMA2_PROBES as f64;
    let grid: Vec<f64> = (1..=GAMMA2_PROBES).map(|i| step * i as f64).collect();
    let values = grid.par_iter().map(|&t| g2(t)).collect::<Result<Vec<_>, _>>()?;
    let (i, _) = values.iter().enumerate().min_by(|a, b| a.1.total_cmp(b.1)).unwrap();
    let lo = if i == 0 { 1e-9 } else { grid[i - 1] };
    let hi = grid[(i + 1).min(grid.len() - 1)];
    let (x, v) = golden_min(|t| g2(t).map_err(to_numerics), lo, hi, 1e-6).map_err(Error::Numerics)?;
    if v < values[i] {
        Ok((v, x))
    } else {
        Ok((values[i], grid[i]))
    }
}

fn to_numerics(e: Error) -> NumericsError {
    match e {
        Error::Numerics(n) => n,
        other => NumericsError::Contract(other.to_string()),
    }
}

const GAMMA2_SCAN_POINTS: usize = 16;

pub fn gamma2_threshold_scan(range: (f64, f64), resolution: f64, quad: &QuadratureSpec) -> Result<Gamma2Scan, Error> {
    let (lo, hi) = range;
    if !(lo < hi) || !(resolution > 0.0) || !(lo > 0.0) || !hi.is_finite() {
        return Err(Error::Contract(format!("scan needs 0 < lo < hi and a positive resolution, got [{lo}, {hi}], {resolution}")));
    }
    let grid: Vec<f64> = (0..GAMMA2_SCAN_POINTS).map(|i| lo + (hi - lo) * i as f64 / (GAMMA2_SCAN_POINTS - 1) as f64).collect();
    let values = grid.iter().map(|&w| min_gamma2(w, GAMMA2_WINDOW, quad).map(|v| v.0)).collect::<Result<Vec<_>, _>>()?;
    let idx = (0..grid.len() - 1).find(|&i| values[i] >= 0.0 && values[i + 1] < 0.0);
    let Some(i) = idx else {
        return Err(Error::NoCrossing { what: "min gamma2", lo, hi, grid: grid.into_iter().zip(values).collect() });
    };
    let b = find_sign_change(
        |w| min_gamma2(w, GAMMA2_WINDOW, quad).map(|v| v.0).map_err(to_numerics),
        grid[i],
        grid[i + 1],
        resolution,
    )?;
    let (min_witness, argmin_taubar) = min_gamma2(b.hi, GAMMA2_WINDOW, quad)?;
    Ok(Gamma2Scan {
        omegabar_grid: grid,
        min_g2: values,
        threshold: b.root,
        bracket_lo: b.lo,
        bracket_hi: b.hi,
        resolution,
        min_witness,
        argmin_taubar,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rates::{RateSample, RateTriple};
    use nalgebra::Matrix4;

    fn constant_table(g: [f64; 3], span: f64) -> RateTable {
        let samples = (0..=32)
            .map(|i| RateSample {
                triple: RateTriple { taubar: span * i as f64 / 32.0, g1: g[0], g2: g[1], g3: g[2] },
                delta_plus: 0.0,
                delta_minus: 0.0,
            })
            .collect();
        RateTable::from_samples(RateParams::switch_on(1.0), samples).unwrap()
    }

    #[test]
    fn trace_distance_examples() {
        let a = QubitState::new(0.3, 0.0, 0.0);
        assert_eq!(trace_distance(&a, &a), 0.0);
        assert_eq!(trace_distance(&QubitState::excited(), &QubitState::ground()), 1.0);
        let b = QubitState::new(0.0, 0.4, 0.0);
        assert!((trace_distance(&a, &b) - 0.25).abs() < 1e-15);
        // eigen-decomposition route
        let diff = a.to_matrix() - b.to_matrix();
        let m = DMatrix::from_fn(2, 2, |i, j| diff[(i, j)]);
        assert!((0.5 * trace_norm(&m) - 0.25).abs() < 1e-14);
        assert_eq!(distinguishability(1.0), 1.0);
    }

    #[test]
    fn flow_of_frozen_and_dephasing_dynamics() {
        assert_eq!(info_flow(|_| 0.4, 1.0, (0.0, 2.0)), 0.0);
        let table = constant_table([0.0, 0.0, 0.6], 4.0);
        let maps = MapTrajectory::solve(&table, &fine_evolution(false)).unwrap();
        let (a, b) = (QubitState::new(1.0, 0.0, 0.0), QubitState::new(-1.0, 0.0, 0.0));
        let d = |t: f64| trace_distance(&maps.at(t).apply(&a), &maps.at(t).apply(&b));
        for t in [0.0f64, 1.0, 2.5, 4.0] {
            // per-τ̄ dephasing rate a₃ = 0.3, so D = e^{-0.3 τ̄}
            let expect = -0.3 * (-0.3 * t).exp();
            assert!((info_flow(d, t, (0.0, 4.0)) - expect).abs() < 1e-7, "{t}");
        }
    }

    #[test]
    fn helstrom_initial_values() {
        let id = TransferMap::identity(0.0);
        assert!((helstrom_norm(&HelstromInput::bell_pair(), &id) - 1.0).abs() < 1e-12);
        assert!((helstrom_norm(&HelstromInput::shifted_pair(), &id) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn helstrom_reduces_to_trace_distance_for_products() {
        let m = TransferMap {
            matrix: Matrix4::new(1.0, 0.0, 0.0, 0.0, 0.0, 0.6, -0.1, 0.0, 0.0, 0.1, 0.6, 0.0, 0.2, 0.0, 0.0, 0.7),
            taubar: 1.0,
        };
        let (a, b) = (QubitState::new(0.3, -0.2, 0.5), QubitState::new(-0.1, 0.4, -0.6));
        for d in [2, 3] {
            let input = HelstromInput::new(ExtendedState::product(&a, d), ExtendedState::product(&b, d), 0.5).unwrap();
            let e = helstrom_norm(&input, &m);
            assert!((e - trace_distance(&m.apply(&a), &m.apply(&b))).abs() < 1e-10);
        }
    }

    #[test]
    fn running_increase() {
        let g = [0.0, 1.0, 2.0, 3.0, 4.0];
        assert_eq!(max_increase(&g, &[1.0, 0.5, 0.7, 0.2, 0.6]), (0.39999999999999997, 4.0));
        assert_eq!(max_increase(&g, &[3.0, 2.0, 1.0, 0.0, 0.0]).0, 0.0);
    }

    #[test]
    fn flagged_pair_tracks_excited_bloch_length() {
        // z slightly above one: a positive-trace-preserving violation
        let m = TransferMap {
            matrix: Matrix4::new(1.0, 0.0, 0.0, 0.0, 0.0, 0.1, 0.0, 0.0, 0.0, 0.0, 0.1, 0.0, 0.9, 0.0, 0.0, 0.102),
            taubar: 1.0,
        };
        let e = helstrom_norm(&HelstromInput::flagged_excited(), &m);
        assert!((e - 1.002).abs() < 1e-12);
    }

    #[test]
    fn extension_of_identity_is_identity() {
        let input = HelstromInput::shifted_pair();
        let out = extend_map(&TransferMap::identity(0.0), &input.rho1.matrix, 3);
        assert!((out - &input.rho1.matrix).norm() < 1e-15);
    }

    #[test]
    fn blp_of_frozen_dynamics_is_zero() {
        let table = constant_table([0.0; 3], 3.0);
        let r = blp_sample(&table, 30, 1, false).unwrap();
        assert!(r.measure.abs() < 1e-9);
    }

    #[test]
    fn pair_sampling_is_seeded() {
        assert_eq!(sample_pairs(50, 3), sample_pairs(50, 3));
        assert_ne!(sample_pairs(50, 3), sample_pairs(50, 4));
        let p = sample_pairs(50, 3);
        assert!(p.iter().all(|w| (w.first.iter().map(|v| v * v).sum::<f64>() - 1.0).abs() < 1e-12));
    }

    #[test]
    fn zero_rates_are_divisible() {
        let table = constant_table([0.0; 3], 2.0);
        let grid: Vec<f64> = (0..=10).map(|i| 0.2 * i as f64).collect();
        let rows = divisibility_report(&table, &grid, &Evolution::default()).unwrap();
        for r in rows {
            assert_eq!(r.cp, Some(true));
            assert!(r.choi_min.unwrap().abs() < 1e-12);
        }
    }
}
