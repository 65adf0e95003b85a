//! Dormand-Prince 5(4) integrator with its fourth-order continuous extension.

use serde::Serialize;

use super::NumericsError;

#[derive(Debug, Clone, Copy, Serialize)]
pub struct OdeSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// `None` picks a starting step from the local derivative scale.
    pub initial_step: Option<f64>,
    pub max_step: Option<f64>,
}

impl Default for OdeSpec {
    fn default() -> Self {
        Self { abs_tol: 1e-10, rel_tol: 1e-8, initial_step: None, max_step: None }
    }
}

impl OdeSpec {
    pub fn with_tolerances(abs_tol: f64, rel_tol: f64) -> Self {
        Self { abs_tol, rel_tol, ..Self::default() }
    }

    pub fn validate(&self) -> Result<(), NumericsError> {
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0) {
            return Err(NumericsError::Contract("ODE tolerances must be positive".into()));
        }
        if matches!(self.initial_step, Some(h) if !(h > 0.0)) || matches!(self.max_step, Some(h) if !(h > 0.0)) {
            return Err(NumericsError::Contract("ODE step bounds must be positive".into()));
        }
        Ok(())
    }
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

#[derive(Debug, Clone)]
struct Step<const N: usize> {
    t: f64,
    h: f64,
    coeffs: [[f64; N]; 5],
}

impl<const N: usize> Step<N> {
    fn eval(&self, t: f64) -> [f64; N] {
        let theta = (t - self.t) / self.h;
        let theta1 = 1.0 - theta;
        let [r1, r2, r3, r4, r5] = &self.coeffs;
        std::array::from_fn(|i| r1[i] + theta * (r2[i] + theta1 * (r3[i] + theta * (r4[i] + theta1 * r5[i]))))
    }
}

/// Dense solution on `[t0, t1]`; query with [`DenseSolution::eval`].
#[derive(Debug, Clone)]
pub struct DenseSolution<const N: usize> {
    t0: f64,
    t1: f64,
    y0: [f64; N],
    y1: [f64; N],
    steps: Vec<Step<N>>,
}

impl<const N: usize> DenseSolution<N> {
    pub fn span(&self) -> (f64, f64) {
        (self.t0, self.t1)
    }

    pub fn initial(&self) -> [f64; N] {
        self.y0
    }

    pub fn last(&self) -> [f64; N] {
        self.y1
    }

    pub fn step_count(&self) -> usize {
        self.steps.len()
    }

    /// Accepted step start times followed by the final time.
    pub fn mesh(&self) -> Vec<f64> {
        let mut m: Vec<f64> = self.steps.iter().map(|s| s.t).collect();
        m.push(self.t1);
        m
    }

    /// State at `t`; `t` outside the span is clamped to the nearest end.
    pub fn eval(&self, t: f64) -> [f64; N] {
        if self.steps.is_empty() || t <= self.t0 {
            return self.y0;
        }
        if t >= self.t1 {
            return self.y1;
        }
        let idx = self.steps.partition_point(|s| s.t <= t).saturating_sub(1);
        self.steps[idx].eval(t)
    }
}

fn axpy<const N: usize>(y: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]) -> [f64; N] {
    std::array::from_fn(|i| y[i] + h * terms.iter().map(|(c, k)| c * k[i]).sum::<f64>())
}

fn error_norm<const N: usize>(err: &[f64; N], y0: &[f64; N], y1: &[f64; N], spec: &OdeSpec) -> f64 {
    if N == 0 {
        return 0.0;
    }
    let s: f64 = (0..N)
        .map(|i| {
            let sc = spec.abs_tol + spec.rel_tol * y0[i].abs().max(y1[i].abs());
            (err[i] / sc).powi(2)
        })
        .sum();
    (s / N as f64).sqrt()
}

/// Integrates `y' = rhs(t, y)` from `span.0` to `span.1` (forward only).
pub fn ode_solve<const N: usize, F>(
    rhs: F,
    y0: [f64; N],
    span: (f64, f64),
    spec: &OdeSpec,
) -> Result<DenseSolution<N>, NumericsError>
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    spec.validate()?;
    let (t0, t1) = span;
    if !(t0.is_finite() && t1.is_finite() && t0 <= t1) {
        return Err(NumericsError::Contract(format!("ODE span must be finite and ordered, got [{t0}, {t1}]")));
    }
    let mut sol = DenseSolution { t0, t1, y0, y1: y0, steps: Vec::new() };
    if t0 == t1 {
        return Ok(sol);
    }
    let length = t1 - t0;
    let max_step = spec.max_step.unwrap_or(length).min(length);

    let mut t = t0;
    let mut y = y0;
    let mut k1 = rhs(t, &y);
    let mut h = match spec.initial_step {
        Some(h) => h.min(max_step),
        None => initial_step(&rhs, t, &y, &k1, spec, max_step),
    };
    let mut rejected_last = false;

    loop {
        if t + h >= t1 || t + 1.01 * h >= t1 {
            h = t1 - t;
        }
        let min_h = 16.0 * f64::EPSILON * t.abs().max(length);
        if h < min_h {
            return Err(NumericsError::StepUnderflow { t, h });
        }
        let k2 = rhs(t + C2 * h, &axpy(&y, h, &[(A21, &k1)]));
        let k3 = rhs(t + C3 * h, &axpy(&y, h, &[(A31, &k1), (A32, &k2)]));
        let k4 = rhs(t + C4 * h, &axpy(&y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]));
        let k5 = rhs(t + C5 * h, &axpy(&y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]));
        let k6 = rhs(t + h, &axpy(&y, h, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]));
        let y_new = axpy(&y, h, &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)]);
        let k7 = rhs(t + h, &y_new);
        let err: [f64; N] = std::array::from_fn(|i| {
            h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i])
        });
        let norm = error_norm(&err, &y, &y_new, spec);
        if !norm.is_finite() || y_new.iter().any(|v| !v.is_finite()) {
            h *= 0.2;
            rejected_last = true;
            continue;
        }
        if norm <= 1.0 {
            let r2: [f64; N] = std::array::from_fn(|i| y_new[i] - y[i]);
            let r3: [f64; N] = std::array::from_fn(|i| h * k1[i] - r2[i]);
            let r4: [f64; N] = std::array::from_fn(|i| r2[i] - h * k7[i] - r3[i]);
            let r5: [f64; N] = std::array::from_fn(|i| {
                h * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i] + D7 * k7[i])
            });
            sol.steps.push(Step { t, h, coeffs: [y, r2, r3, r4, r5] });
            let done = t + h >= t1;
            t = if done { t1 } else { t + h };
            y = y_new;
            k1 = k7;
            if done {
                sol.y1 = y;
                return Ok(sol);
            }
            let mut factor = if norm == 0.0 { 5.0 } else { 0.9 * norm.powf(-0.2) };
            factor = factor.clamp(0.2, 5.0);
            if rejected_last {
                factor = factor.min(1.0);
            }
            h = (h * factor).min(max_step);
            rejected_last = false;
        } else {
            h *= (0.9 * norm.powf(-0.2)).max(0.2);
            rejected_last = true;
        }
    }
}

fn initial_step<const N: usize, F>(rhs: &F, t: f64, y: &[f64; N], f0: &[f64; N], spec: &OdeSpec, max_step: f64) -> f64
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    let scale = |i: usize| spec.abs_tol + spec.rel_tol * y[i].abs();
    let d0 = (0..N).map(|i| (y[i] / scale(i)).powi(2)).sum::<f64>().sqrt();
    let d1 = (0..N).map(|i| (f0[i] / scale(i)).powi(2)).sum::<f64>().sqrt();
    let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    let h0 = h0.min(max_step);
    let y1 = axpy(y, h0, &[(1.0, f0)]);
    let f1 = rhs(t + h0, &y1);
    let d2 = (0..N).map(|i| ((f1[i] - f0[i]) / scale(i)).powi(2)).sum::<f64>().sqrt() / h0;
    let h1 = if d1.max(d2) <= 1e-15 { (h0 * 1e-3).max(1e-6) } else { (0.01 / d1.max(d2)).powf(0.2) };
    (100.0 * h0).min(h1).min(max_step)
}
