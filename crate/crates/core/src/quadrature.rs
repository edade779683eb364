//! Composite quadrature rules.

use crate::error::{Error, Result};

/// Composite Simpson on uniformly spaced samples (even interval count).
pub fn simpson(values: &[f64], spacing: f64) -> Result<f64> {
    let n = values.len().saturating_sub(1);
    if n < 2 || !n.is_multiple_of(2) {
        return Err(Error::Domain(format!("Simpson needs an even number of intervals, got {n}")));
    }
    let mut odd = 0.0;
    let mut even = 0.0;
    for (i, v) in values.iter().enumerate().take(n).skip(1) {
        if i % 2 == 1 {
            odd += v;
        } else {
            even += v;
        }
    }
    Ok(spacing / 3.0 * (values[0] + values[n] + 4.0 * odd + 2.0 * even))
}

/// Simpson on the full grid and on every other sample, with the Richardson
/// error estimate `|S_h - S_2h| / 15`. Needs an interval count divisible by 4.
pub fn simpson_with_error(values: &[f64], spacing: f64) -> Result<(f64, f64)> {
    let n = values.len().saturating_sub(1);
    if n < 4 || !n.is_multiple_of(4) {
        return Err(Error::Domain(format!(
            "error estimate needs an interval count divisible by 4, got {n}"
        )));
    }
    let fine = simpson(values, spacing)?;
    let coarse: Vec<f64> = values.iter().step_by(2).copied().collect();
    let coarse = simpson(&coarse, 2.0 * spacing)?;
    Ok((fine, (fine - coarse).abs() / 15.0))
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "at least one node");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let p = if n == 1 { x } else { p1 };
            let pm1 = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (x * p - pm1) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        if n == 1 {
            dp = 1.0;
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Fixed-order Gauss-Legendre rule applied piecewise.
#[derive(Debug, Clone)]
pub struct GaussRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussRule {
    pub fn new(order: usize) -> Self {
        let (nodes, weights) = gauss_legendre(order);
        Self { nodes, weights }
    }

    pub fn interval(&self, a: f64, b: f64, f: &mut impl FnMut(f64) -> f64) -> f64 {
        let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
        let mut acc = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc += w * f(mid + half * x);
        }
        half * acc
    }

    /// Sum over consecutive pieces of sorted `breakpoints`.
    pub fn composite(&self, breakpoints: &[f64], mut f: impl FnMut(f64) -> f64) -> f64 {
        breakpoints
            .windows(2)
            .filter(|w| w[1] > w[0])
            .map(|w| self.interval(w[0], w[1], &mut f))
            .sum()
    }
}

/// `n` equal panels on `[a, b]` merged with any `extra` points inside.
pub fn breakpoints(a: f64, b: f64, n: usize, extra: &[f64]) -> Vec<f64> {
    let n = n.max(1);
    let mut pts: Vec<f64> = (0..=n).map(|i| a + (b - a) * i as f64 / n as f64).collect();
    pts.extend(extra.iter().copied().filter(|&x| x > a && x < b));
    pts.sort_by(f64::total_cmp);
    pts.dedup_by(|x, y| (*x - *y).abs() <= 1e-14 * (b - a).abs());
    pts
}
