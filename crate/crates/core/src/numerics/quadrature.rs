//! Adaptive Gauss-Kronrod quadrature with a semi-infinite, cosine-modulated
//! variant that sums integrals between consecutive zeros of the carrier and
//! accelerates the resulting alternating series.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;

use serde::Serialize;

use super::NumericsError;

/// How the part of a semi-infinite integral beyond the last finite panel is
/// treated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TailPolicy {
    /// Integrate panel by panel and accelerate the alternating panel series
    /// (oscillatory case) or map `[a, inf)` onto `[0, 1)` (non-oscillatory case).
    EulerPanels,
    /// Truncate at `a + s_max`. Debug mode.
    HardCutoff,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_panels: usize,
    pub tail_policy: TailPolicy,
    /// Cutoff length past the lower limit used by [`TailPolicy::HardCutoff`].
    pub s_max: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-8,
            max_panels: 1_000_000,
            tail_policy: TailPolicy::EulerPanels,
            s_max: 60.0,
        }
    }
}

impl QuadratureSpec {
    pub fn with_tolerances(abs_tol: f64, rel_tol: f64) -> Self {
        Self { abs_tol, rel_tol, ..Self::default() }
    }

    pub fn hard_cutoff(s_max: f64) -> Self {
        Self { tail_policy: TailPolicy::HardCutoff, s_max, ..Self::default() }
    }

    pub fn validate(&self) -> Result<(), NumericsError> {
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0) {
            return Err(NumericsError::Contract("quadrature tolerances must be positive".into()));
        }
        if !(self.s_max > 0.0) {
            return Err(NumericsError::Contract("s_max must be positive".into()));
        }
        if self.max_panels == 0 {
            return Err(NumericsError::Contract("max_panels must be at least 1".into()));
        }
        Ok(())
    }

    fn target(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

/// A quadrature result and its error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

impl Estimate {
    pub const ZERO: Estimate = Estimate { value: 0.0, error: 0.0 };
}

impl std::ops::Add for Estimate {
    type Output = Estimate;
    fn add(self, rhs: Estimate) -> Estimate {
        Estimate { value: self.value + rhs.value, error: self.error + rhs.error }
    }
}

impl std::ops::AddAssign for Estimate {
    fn add_assign(&mut self, rhs: Estimate) {
        *self = *self + rhs;
    }
}

impl std::ops::Mul<f64> for Estimate {
    type Output = Estimate;
    fn mul(self, k: f64) -> Estimate {
        Estimate { value: self.value * k, error: self.error * k.abs() }
    }
}

// 21-point Kronrod extension of the 10-point Gauss rule.
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_208_977_222_982,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

// Gauss weights for the odd-indexed Kronrod nodes XGK[1], XGK[3], ...
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

/// One application of the 21-point rule on `[a, b]`.
fn gk21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Estimate {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut res_k = fc * WGK[10];
    let mut res_g = 0.0;
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = res_k * half;
    let res_abs = res_abs * half.abs();
    let res_asc = res_asc * half.abs();
    let mut err = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    Estimate { value, error: err }
}

struct Segment {
    a: f64,
    b: f64,
    est: Estimate,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.est.error == other.est.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.est.error.total_cmp(&other.est.error)
    }
}

/// Globally adaptive bisection on a finite interval.
fn adaptive<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
    max_panels: usize,
) -> Result<Estimate, NumericsError> {
    if a == b {
        return Ok(Estimate::ZERO);
    }
    let first = gk21(f, a, b);
    if !first.value.is_finite() {
        return Err(NumericsError::NonFinite { at: 0.5 * (a + b) });
    }
    let mut heap = BinaryHeap::new();
    let mut frozen = Estimate::ZERO;
    let mut total = first;
    heap.push(Segment { a, b, est: first });
    let mut panels = 1usize;
    loop {
        let target = abs_tol.max(rel_tol * total.value.abs());
        if total.error <= target {
            break;
        }
        let Some(worst) = heap.pop() else {
            // Everything left is at the resolution limit.
            break;
        };
        let mid = 0.5 * (worst.a + worst.b);
        if (worst.b - worst.a).abs() <= 64.0 * f64::EPSILON * mid.abs().max(f64::MIN_POSITIVE) {
            frozen += worst.est;
            continue;
        }
        if panels >= max_panels {
            heap.push(worst);
            let partial = heap.iter().fold(frozen, |acc, s| acc + s.est);
            return Err(NumericsError::QuadratureNonConvergence {
                partial: partial.value,
                error: partial.error,
                panels,
            });
        }
        let left = gk21(f, worst.a, mid);
        let right = gk21(f, mid, worst.b);
        if !(left.value.is_finite() && right.value.is_finite()) {
            return Err(NumericsError::NonFinite { at: mid });
        }
        total.value += left.value + right.value - worst.est.value;
        total.error += left.error + right.error - worst.est.error;
        heap.push(Segment { a: worst.a, b: mid, est: left });
        heap.push(Segment { a: mid, b: worst.b, est: right });
        panels += 1;
        // Re-sum occasionally to stop drift in the running totals.
        if panels.is_multiple_of(64) {
            total = heap.iter().fold(frozen, |acc, s| acc + s.est);
        }
    }
    Ok(heap.iter().fold(frozen, |acc, s| acc + s.est))
}

/// Integrates `f` over `[a, b]`. `b` may be `f64::INFINITY`, in which case
/// the spec's tail policy decides between the map `s = a + t/(1-t)` and a
/// hard cutoff at `a + s_max`.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<Estimate, NumericsError> {
    spec.validate()?;
    if !(a <= b) || a.is_infinite() {
        return Err(NumericsError::Contract(format!("integrate requires a <= b, got [{a}, {b}]")));
    }
    if b.is_finite() {
        return adaptive(&f, a, b, spec.abs_tol, spec.rel_tol, spec.max_panels);
    }
    match spec.tail_policy {
        TailPolicy::HardCutoff => adaptive(&f, a, a + spec.s_max, spec.abs_tol, spec.rel_tol, spec.max_panels),
        TailPolicy::EulerPanels => {
            let g = |t: f64| {
                let u = 1.0 - t;
                f(a + t / u) / (u * u)
            };
            adaptive(&g, 0.0, 1.0, spec.abs_tol, spec.rel_tol, spec.max_panels)
        }
    }
}

/// `∫_a^∞ f(s) cos(ω s) ds`.
pub fn integrate_oscillatory<F: Fn(f64) -> f64>(
    f: F,
    omega: f64,
    a: f64,
    spec: &QuadratureSpec,
) -> Result<Estimate, NumericsError> {
    integrate_oscillatory_phase(f, omega, 0.0, a, spec)
}

const MIN_ACCELERATED_PANELS: usize = 8;
const EULER_WINDOW: usize = 16;

/// `∫_a^∞ f(s) cos(ω s + φ) ds` for `f` decaying at least like `1/s`.
///
/// With [`TailPolicy::EulerPanels`] the half line is cut at the zeros of the
/// carrier and the partial sums of the panel series are smoothed by repeated
/// binomial averaging over a sliding window (Euler transform). Convergence is
/// declared after two consecutive accelerated estimates agree to tolerance.
pub fn integrate_oscillatory_phase<F: Fn(f64) -> f64>(
    f: F,
    omega: f64,
    phase: f64,
    a: f64,
    spec: &QuadratureSpec,
) -> Result<Estimate, NumericsError> {
    spec.validate()?;
    if !a.is_finite() || !omega.is_finite() || !phase.is_finite() {
        return Err(NumericsError::Contract("oscillatory integral needs finite a, omega, phase".into()));
    }
    if omega.abs() < 1e-14 {
        let c = phase.cos();
        if c == 0.0 {
            return Ok(Estimate::ZERO);
        }
        return Ok(integrate(&f, a, f64::INFINITY, spec)? * c);
    }
    // cos(-w s + p) = cos(w s - p)
    let (w, p) = if omega < 0.0 { (-omega, -phase) } else { (omega, phase) };
    let carrier = |s: f64| (w * s + p).cos();
    let g = |s: f64| f(s) * carrier(s);
    // Zeros of cos(w s + p): s_k = ((k + 1/2) pi - p) / w.
    let zero = |k: f64| ((k + 0.5) * PI - p) / w;
    let mut k = ((w * a + p) / PI - 0.5).ceil();
    let mut z = zero(k);
    if z < a {
        k += 1.0;
        z = zero(k);
    }
    let panel_tol = |spec: &QuadratureSpec| (0.05 * spec.abs_tol, 0.05 * spec.rel_tol);
    let (pabs, prel) = panel_tol(spec);

    if let TailPolicy::HardCutoff = spec.tail_policy {
        let end = a + spec.s_max;
        let mut total = adaptive(&g, a, z.min(end), pabs, prel, spec.max_panels)?;
        let mut lo = z;
        while lo < end {
            k += 1.0;
            let hi = zero(k).min(end);
            total += adaptive(&g, lo, hi, pabs, prel, spec.max_panels)?;
            lo = hi;
        }
        return Ok(total);
    }

    let head = adaptive(&g, a, z, pabs, prel, spec.max_panels)?;
    let mut partial_sums: Vec<f64> = vec![head.value];
    let mut quad_error = head.error;
    let mut estimates: Vec<f64> = Vec::new();
    let mut lo = z;
    let mut panels = 0usize;
    loop {
        k += 1.0;
        let hi = zero(k);
        let piece = adaptive(&g, lo, hi, pabs, prel, spec.max_panels)?;
        quad_error += piece.error;
        let last = *partial_sums.last().unwrap();
        partial_sums.push(last + piece.value);
        lo = hi;
        panels += 1;

        let window = EULER_WINDOW.min(partial_sums.len() - 1);
        let mut avg: Vec<f64> = partial_sums[partial_sums.len() - 1 - window..].to_vec();
        for level in (1..avg.len()).rev() {
            for i in 0..level {
                avg[i] = 0.5 * (avg[i] + avg[i + 1]);
            }
        }
        estimates.push(avg[0]);

        let n = estimates.len();
        if panels >= MIN_ACCELERATED_PANELS && n >= 3 {
            let d1 = (estimates[n - 1] - estimates[n - 2]).abs();
            let d2 = (estimates[n - 2] - estimates[n - 3]).abs();
            let target = spec.target(estimates[n - 1]);
            if d1 <= target && d2 <= target {
                return Ok(Estimate { value: estimates[n - 1], error: d1.max(d2) + quad_error });
            }
        }
        if panels >= spec.max_panels {
            let last_increment = if n >= 2 { (estimates[n - 1] - estimates[n - 2]).abs() } else { f64::NAN };
            return Err(NumericsError::AccelerationFailure {
                partial: estimates[n - 1],
                panels,
                last_increment,
            });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kronrod_rule_is_exact_for_high_degree_polynomials() {
        for deg in 0..=31 {
            let est = gk21(&|x: f64| x.powi(deg), 0.0, 1.0);
            let exact = 1.0 / (deg as f64 + 1.0);
            assert!((est.value - exact).abs() < 1e-14, "degree {deg}: {}", est.value);
        }
    }

    #[test]
    fn gauss_weights_sum_to_interval_length() {
        let g: f64 = 2.0 * WG.iter().sum::<f64>();
        let k: f64 = 2.0 * WGK[..10].iter().sum::<f64>() + WGK[10];
        assert!((g - 2.0).abs() < 1e-14);
        assert!((k - 2.0).abs() < 1e-14);
    }

    #[test]
    fn finite_interval_examples() {
        let spec = QuadratureSpec::default();
        let cos = integrate(f64::cos, 0.0, PI, &spec).unwrap();
        assert!(cos.value.abs() < 1e-12);
        let sq = integrate(|s| s * s, 0.0, 1.0, &spec).unwrap();
        assert!((sq.value - 1.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn semi_infinite_exponential_via_tail_policy() {
        let spec = QuadratureSpec::default();
        let e = integrate(|s: f64| (-s).exp(), 0.0, f64::INFINITY, &spec).unwrap();
        assert!((e.value - 1.0).abs() < 1e-10);
        let cut = integrate(|s: f64| (-s).exp(), 0.0, f64::INFINITY, &QuadratureSpec::hard_cutoff(60.0)).unwrap();
        assert!((cut.value - 1.0).abs() < 1e-10);
    }

    #[test]
    fn reversed_bounds_are_a_contract_error() {
        let err = integrate(|s| s, 1.0, 0.0, &QuadratureSpec::default()).unwrap_err();
        assert!(matches!(err, NumericsError::Contract(_)));
    }

    #[test]
    fn panel_budget_exhaustion_reports_partial_estimate() {
        let spec = QuadratureSpec { max_panels: 3, ..QuadratureSpec::default() };
        let err = integrate(|s: f64| (1.0 / s).sin(), 1e-4, 1.0, &spec).unwrap_err();
        match err {
            NumericsError::QuadratureNonConvergence { partial, panels, .. } => {
                assert!(partial.is_finite());
                assert_eq!(panels, 3);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn oscillatory_zero_frequency_exponential() {
        let e = integrate_oscillatory(|s: f64| (-s).exp(), 0.0, 0.0, &QuadratureSpec::default()).unwrap();
        assert!((e.value - 1.0).abs() < 1e-10);
    }

    #[test]
    fn oscillatory_lorentzian_closed_form() {
        // ∫_0^∞ cos(s)/(1+s²) ds = π/(2e)
        let e = integrate_oscillatory(|s| 1.0 / (1.0 + s * s), 1.0, 0.0, &QuadratureSpec::default()).unwrap();
        let exact = PI / (2.0 * std::f64::consts::E);
        assert!((e.value - exact).abs() < 1e-9, "{} vs {exact}", e.value);
        // negative frequency is the same integral
        let n = integrate_oscillatory(|s| 1.0 / (1.0 + s * s), -1.0, 0.0, &QuadratureSpec::default()).unwrap();
        assert!((n.value - exact).abs() < 1e-9);
    }

    #[test]
    fn oscillatory_inverse_square_matches_long_cutoff() {
        let spec = QuadratureSpec::default();
        let acc = integrate_oscillatory(|s| 1.0 / (s * s), 1.0, 1.0, &spec).unwrap();
        let brute = integrate_oscillatory(
            |s| 1.0 / (s * s),
            1.0,
            1.0,
            &QuadratureSpec { abs_tol: 1e-13, rel_tol: 1e-12, ..QuadratureSpec::hard_cutoff(1e4) },
        )
        .unwrap();
        // The cutoff itself leaves a tail of order 1/S² ≈ 1e-8.
        assert!((acc.value - brute.value).abs() < 1e-8, "{} vs {}", acc.value, brute.value);
        // ∫_1^∞ cos s / s² ds = cos 1 - Si-type remainder: cos(1) - (π/2 - Si(1))
        let si1 = 0.946_083_070_367_183_1;
        let exact = 1f64.cos() - (PI / 2.0 - si1);
        assert!((acc.value - exact).abs() < 1e-9, "{} vs {exact}", acc.value);
    }

    #[test]
    fn phase_shift_gives_sine_transform() {
        // ∫_0^∞ e^{-s} sin(2s) ds = 2/5
        let e = integrate_oscillatory_phase(|s: f64| (-s).exp(), 2.0, -PI / 2.0, 0.0, &QuadratureSpec::default())
            .unwrap();
        assert!((e.value - 0.4).abs() < 1e-10, "{}", e.value);
    }

    #[test]
    fn acceleration_budget_failure_carries_diagnostics() {
        let spec = QuadratureSpec { max_panels: 4, ..QuadratureSpec::default() };
        let err = integrate_oscillatory(|s| 1.0 / s, 0.3, 1.0, &spec).unwrap_err();
        assert!(matches!(err, NumericsError::AccelerationFailure { panels: 4, .. }));
    }
}
