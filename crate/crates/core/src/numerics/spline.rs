use super::NumericsError;

/// Clamped cubic spline. End slopes come from the cubic through the four
/// outermost samples, which keeps the interpolant fourth-order accurate up
/// to the ends.
#[derive(Debug, Clone)]
pub struct CubicSpline {
    xs: Vec<f64>,
    ys: Vec<f64>,
    // second derivatives at the knots
    m: Vec<f64>,
}

fn end_slope(xs: &[f64], ys: &[f64], at: f64) -> f64 {
    // derivative of the Lagrange interpolant through (xs, ys) evaluated at `at`
    let n = xs.len();
    let mut d = 0.0;
    for i in 0..n {
        let mut sum = 0.0;
        for k in 0..n {
            if k == i {
                continue;
            }
            let mut prod = 1.0 / (xs[i] - xs[k]);
            for j in 0..n {
                if j != i && j != k {
                    prod *= (at - xs[j]) / (xs[i] - xs[j]);
                }
            }
            sum += prod;
        }
        d += ys[i] * sum;
    }
    d
}

impl CubicSpline {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self, NumericsError> {
        let n = xs.len();
        if n != ys.len() || n < 2 {
            return Err(NumericsError::Contract("spline needs at least two matching samples".into()));
        }
        if xs.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(NumericsError::Contract("spline knots must be strictly increasing".into()));
        }
        if n < 4 {
            // piecewise linear
            return Ok(Self { m: vec![0.0; n], xs, ys });
        }
        let s0 = end_slope(&xs[..4], &ys[..4], xs[0]);
        let sn = end_slope(&xs[n - 4..], &ys[n - 4..], xs[n - 1]);
        // Tridiagonal system for the second derivatives (clamped ends).
        let h: Vec<f64> = xs.windows(2).map(|w| w[1] - w[0]).collect();
        let mut diag = vec![0.0; n];
        let mut upper = vec![0.0; n];
        let mut lower = vec![0.0; n];
        let mut rhs = vec![0.0; n];
        diag[0] = h[0] / 3.0;
        upper[0] = h[0] / 6.0;
        rhs[0] = (ys[1] - ys[0]) / h[0] - s0;
        for i in 1..n - 1 {
            lower[i] = h[i - 1] / 6.0;
            diag[i] = (h[i - 1] + h[i]) / 3.0;
            upper[i] = h[i] / 6.0;
            rhs[i] = (ys[i + 1] - ys[i]) / h[i] - (ys[i] - ys[i - 1]) / h[i - 1];
        }
        lower[n - 1] = h[n - 2] / 6.0;
        diag[n - 1] = h[n - 2] / 3.0;
        rhs[n - 1] = sn - (ys[n - 1] - ys[n - 2]) / h[n - 2];
        for i in 1..n {
            let w = lower[i] / diag[i - 1];
            diag[i] -= w * upper[i - 1];
            rhs[i] -= w * rhs[i - 1];
        }
        let mut m = vec![0.0; n];
        m[n - 1] = rhs[n - 1] / diag[n - 1];
        for i in (0..n - 1).rev() {
            m[i] = (rhs[i] - upper[i] * m[i + 1]) / diag[i];
        }
        Ok(Self { xs, ys, m })
    }

    pub fn knots(&self) -> &[f64] {
        &self.xs
    }

    pub fn values(&self) -> &[f64] {
        &self.ys
    }

    /// Interpolated value; outside the knot range the end cubic is extended.
    pub fn eval(&self, x: f64) -> f64 {
        let n = self.xs.len();
        let i = self.xs.partition_point(|&k| k <= x).clamp(1, n - 1) - 1;
        let h = self.xs[i + 1] - self.xs[i];
        let a = (self.xs[i + 1] - x) / h;
        let b = (x - self.xs[i]) / h;
        a * self.ys[i]
            + b * self.ys[i + 1]
            + ((a * a * a - a) * self.m[i] + (b * b * b - b) * self.m[i + 1]) * h * h / 6.0
    }
}
