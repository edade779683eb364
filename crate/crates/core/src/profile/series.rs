//! Power-series solution of the radial equation about the regular singular
//! point at the origin.
//!
//! Substituting `h = sum a_n r^n` into `r^2 h'' + 2 r h' - 6 h = r^2 G(h)` with
//! `G(h) = -h + (1 + k) h^3 - k h^2`, `k = 3 h_+ / t`, gives
//! `m (m + 5) a_{m+2} = [G(h)]_m`. The indicial roots are 2 and -3, so a
//! regular solution is fixed by `a_2` alone; `a_0 = a_1 = 0`.

use serde::{Deserialize, Serialize};

use crate::model::ModelParams;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesExpansion {
    pub a2: f64,
    pub t: f64,
    /// Highest power kept when evaluating the series.
    pub order: usize,
    /// `coeffs[n]` multiplies `r^n`; two extra powers beyond `order` are kept
    /// for the truncation estimate.
    pub coeffs: Vec<f64>,
}

/// Coefficients of the core series through power `order` (plus the next even one).
///
/// `order` is rounded up to an even number and clamped below at 4.
pub fn series_coefficients(a2: f64, m: &ModelParams, order: usize) -> SeriesExpansion {
    let order = order.max(4);
    let order = order + order % 2;
    let n = order + 2;
    let k = 3.0 * m.cubic_ratio();
    let mut a = vec![0.0; n + 1];
    a[2] = a2;
    // sq[j] = [h^2]_j, cube[j] = [h^3]_j, filled lazily as coefficients appear
    for next in 3..=n {
        let mm = next - 2;
        let sq_m: f64 = (0..=mm).map(|i| a[i] * a[mm - i]).sum();
        let mut cube_m = 0.0;
        for i in 0..=mm {
            let sq_rest: f64 = (0..=(mm - i)).map(|j| a[j] * a[mm - i - j]).sum();
            cube_m += a[i] * sq_rest;
        }
        let g = -a[mm] + (1.0 + k) * cube_m - k * sq_m;
        a[next] = g / (mm * (mm + 5)) as f64;
    }
    SeriesExpansion {
        a2,
        t: m.t,
        order,
        coeffs: a,
    }
}

/// State at a small launch radius together with the truncation estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LaunchState {
    pub r0: f64,
    pub h: f64,
    pub dh: f64,
    /// Magnitude of the first omitted term.
    pub truncation: f64,
    /// The omitted term exceeds `1e-12 * h(r0)`.
    pub warn: bool,
}

impl SeriesExpansion {
    /// Even-power coefficients `a_2, a_4, ...` through `order`.
    pub fn even(&self) -> Vec<f64> {
        (2..=self.order).step_by(2).map(|n| self.coeffs[n]).collect()
    }

    /// `(h, dh, d2h)` of the truncated series at `r`.
    pub fn eval(&self, r: f64) -> (f64, f64, f64) {
        let mut h = 0.0;
        let mut dh = 0.0;
        let mut d2h = 0.0;
        for n in (0..=self.order).rev() {
            let c = self.coeffs[n];
            h = h * r + c;
        }
        for n in (1..=self.order).rev() {
            dh = dh * r + n as f64 * self.coeffs[n];
        }
        for n in (2..=self.order).rev() {
            d2h = d2h * r + (n * (n - 1)) as f64 * self.coeffs[n];
        }
        (h, dh, d2h)
    }

    pub fn launch_state(&self, r0: f64) -> LaunchState {
        let (h, dh, _) = self.eval(r0);
        let next = self.order + 2;
        let truncation = (self.coeffs[next] * r0.powi(next as i32)).abs();
        LaunchState {
            r0,
            h,
            dh,
            truncation,
            warn: truncation > 1e-12 * h.abs(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quartic_coefficient_is_independent_of_t() {
        for &t in &[1.5, 5.0, 200.0, 1e5] {
            let m = ModelParams::new(t).unwrap();
            for &a2 in &[1e-3, 0.2, 3.0] {
                let s = series_coefficients(a2, &m, 6);
                assert!((s.coeffs[4] + a2 / 14.0).abs() <= 1e-16 * a2);
            }
        }
    }

    #[test]
    fn odd_coefficients_vanish() {
        let m = ModelParams::new(200.0).unwrap();
        let s = series_coefficients(0.25, &m, 12);
        for n in (1..=11).step_by(2) {
            assert_eq!(s.coeffs[n], 0.0);
        }
        assert_eq!(s.coeffs[0], 0.0);
        assert_eq!(s.even().len(), 6);
    }

    #[test]
    fn sixth_coefficient_closed_form() {
        let m = ModelParams::new(200.0).unwrap();
        let a2 = 0.21;
        let s = series_coefficients(a2, &m, 6);
        let k = 3.0 * m.h_plus / m.t;
        let expected = (a2 / 14.0 - k * a2 * a2) / 36.0;
        assert!((s.coeffs[6] - expected).abs() < 1e-16);
    }

    #[test]
    fn launch_examples() {
        let m = ModelParams::new(200.0).unwrap();
        let s = series_coefficients(0.1, &m, 6);
        let l = s.launch_state(1e-3);
        assert!((l.h - 1e-7 * (1.0 - 1e-6 / 14.0)).abs() < 1e-20);
        assert!(!l.warn);
        let zero = series_coefficients(0.0, &m, 6).launch_state(1e-3);
        assert_eq!((zero.h, zero.dh), (0.0, 0.0));
        for &r0 in &[1e-2, 1e-3, 1e-4] {
            let l = s.launch_state(r0);
            assert!((l.dh / (2.0 * 0.1 * r0) - 1.0).abs() < r0 * r0);
        }
        let far = s.launch_state(0.9);
        assert!(far.warn);
    }
}
