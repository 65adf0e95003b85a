//! Running integrals of sampled functions.

use super::NumericsError;

const GAUSS2: f64 = 0.577_350_269_189_625_8; // 1/sqrt(3)

fn lagrange_cubic(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    let mut acc = 0.0;
    for i in 0..xs.len() {
        let mut w = 1.0;
        for j in 0..xs.len() {
            if i != j {
                w *= (x - xs[j]) / (xs[i] - xs[j]);
            }
        }
        acc += w * ys[i];
    }
    acc
}

/// Returns `∫_{x_0}^{x_i} y dx` at every grid point.
///
/// Each interval is integrated exactly against the cubic through the four
/// nearest samples (one-sided stencils at the ends), so the rule is fourth
/// order on smooth data and exact for cubics, also on non-uniform grids.
pub fn cumulative_integral(xs: &[f64], ys: &[f64]) -> Result<Vec<f64>, NumericsError> {
    if xs.len() != ys.len() {
        return Err(NumericsError::Contract("grid and values differ in length".into()));
    }
    if xs.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(NumericsError::Contract("cumulative_integral needs a strictly increasing grid".into()));
    }
    let n = xs.len();
    let mut out = Vec::with_capacity(n);
    if n == 0 {
        return Ok(out);
    }
    out.push(0.0);
    let mut acc = 0.0;
    for i in 0..n - 1 {
        let (a, b) = (xs[i], xs[i + 1]);
        let piece = if n < 4 {
            let lo = if n == 3 { 0 } else { i };
            let hi = if n == 3 { 3 } else { i + 2 };
            let (sx, sy) = (&xs[lo..hi], &ys[lo..hi]);
            gauss2(|x| lagrange_cubic(sx, sy, x), a, b)
        } else {
            let lo = i.saturating_sub(1).min(n - 4);
            let (sx, sy) = (&xs[lo..lo + 4], &ys[lo..lo + 4]);
            gauss2(|x| lagrange_cubic(sx, sy, x), a, b)
        };
        acc += piece;
        out.push(acc);
    }
    Ok(out)
}

fn gauss2<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> f64 {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    h * (f(c - h * GAUSS2) + f(c + h * GAUSS2))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn uniform(n: usize, a: f64, b: f64) -> Vec<f64> {
        (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
    }

    #[test]
    fn constant_integrates_to_length() {
        let xs = uniform(21, 0.0, 2.0);
        let ys = vec![1.0; 21];
        let c = cumulative_integral(&xs, &ys).unwrap();
        for (x, v) in xs.iter().zip(&c) {
            assert!((v - x).abs() < 1e-14);
        }
    }

    #[test]
    fn linear_function_on_thousand_points() {
        let xs = uniform(1000, 0.0, 3.0);
        let c = cumulative_integral(&xs, &xs).unwrap();
        for (x, v) in xs.iter().zip(&c) {
            assert!((v - x * x / 2.0).abs() < 1e-10);
        }
    }

    #[test]
    fn derivative_recovers_function() {
        let xs = uniform(1000, 0.0, 10.0);
        let ys: Vec<f64> = xs.iter().map(|x| x.cos() * (-0.1 * x).exp() - 0.1 * x.sin() * (-0.1 * x).exp()).collect();
        let c = cumulative_integral(&xs, &ys).unwrap();
        let worst = xs.iter().zip(&c).map(|(x, v)| (v - x.sin() * (-0.1 * x).exp()).abs()).fold(0.0, f64::max);
        assert!(worst < 1e-8, "{worst}");
    }

    #[test]
    fn cubic_exact_on_nonuniform_grid() {
        let xs: Vec<f64> = (0..30).map(|i| (i as f64 / 29.0).powi(2) * 3.0).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 2.0 * x * x * x - x + 1.0).collect();
        let c = cumulative_integral(&xs, &ys).unwrap();
        for (x, v) in xs.iter().zip(&c) {
            let exact = 0.5 * x.powi(4) - 0.5 * x * x + x;
            assert!((v - exact).abs() < 1e-12);
        }
    }

    #[test]
    fn short_grids() {
        let c = cumulative_integral(&[0.0, 1.0], &[1.0, 3.0]).unwrap();
        assert!((c[1] - 2.0).abs() < 1e-15);
        let c = cumulative_integral(&[0.0, 1.0, 2.0], &[0.0, 1.0, 4.0]).unwrap();
        assert!((c[2] - 8.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn unsorted_grid_rejected() {
        assert!(cumulative_integral(&[0.0, 2.0, 1.0], &[0.0; 3]).is_err());
    }
}
