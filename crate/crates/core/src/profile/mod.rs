//! Hedgehog order-parameter profiles: the core series, single shots of the
//! radial equation, and the bisection solvers built on them.

mod series;
mod shooting;
mod solve;

use serde::Serialize;

pub use series::{series_coefficients, LaunchState, SeriesExpansion};
pub use shooting::{classify_shot, integrate, scan_classes, Shot, ShotClass, ShotOutcome, ShootingConfig};
pub use solve::{solve_finite_ball, solve_semi_infinite, RootCandidate, SolverOptions, StageRecord};

use crate::error::{Error, Result};
use crate::integrator::StepStats;
use crate::model::ModelParams;

/// Radial domain a profile was solved on.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Domain {
    /// Ball of radius `radius` with `h(radius) = 1`.
    FiniteBall { radius: f64 },
    /// Whole space, truncated at `r_max`; `h -> 1` at infinity.
    SemiInfinite { r_max: f64 },
}

impl Domain {
    pub fn end(&self) -> f64 {
        match *self {
            Domain::FiniteBall { radius } => radius,
            Domain::SemiInfinite { r_max } => r_max,
        }
    }
}

/// How a profile was produced.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct SolverMeta {
    pub integrator_tol: f64,
    pub bisection_tol: f64,
    pub launch_radius: f64,
    pub series_order: usize,
    pub launch_truncation: f64,
    pub grid_spacing: f64,
    /// Bracket width on `a2` when bisection stopped.
    pub a2_bracket: [f64; 2],
    pub stages: Vec<StageRecord>,
    pub candidates: Vec<RootCandidate>,
    pub stats: StepStats,
    pub warnings: Vec<String>,
}

/// Sampled order parameter on a radial grid starting at the origin.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Profile {
    pub t: f64,
    pub grid: Vec<f64>,
    pub h: Vec<f64>,
    pub dh: Vec<f64>,
    #[serde(skip)]
    d2h: Vec<f64>,
    pub a2: f64,
    pub domain: Domain,
    pub solver_meta: SolverMeta,
}

/// Anything that can report the order parameter near a given radius.
///
/// `center` lets piecewise representations pick one local branch for a whole
/// finite-difference stencil.
pub trait RadialField {
    fn value_near(&self, center: f64, r: f64) -> f64;
    /// Outer radius of validity.
    fn extent(&self) -> f64;
}

/// Closed-form profile used for checks and oracles.
pub struct AnalyticField<F: Fn(f64) -> f64> {
    pub f: F,
    pub extent: f64,
}

impl<F: Fn(f64) -> f64> RadialField for AnalyticField<F> {
    fn value_near(&self, _center: f64, r: f64) -> f64 {
        (self.f)(r)
    }
    fn extent(&self) -> f64 {
        self.extent
    }
}

/// Uniform grid on `[0, end]` with at least `min_intervals` intervals, spacing
/// at most `spacing`, and an interval count divisible by four.
pub fn uniform_grid(end: f64, spacing: f64, min_intervals: usize) -> Vec<f64> {
    let mut n = ((end / spacing).ceil() as usize).max(min_intervals).max(4);
    n = n.div_ceil(4) * 4;
    (0..=n).map(|i| end * i as f64 / n as f64).collect()
}

impl Profile {
    /// Profile from raw samples with the second derivative estimated by
    /// differencing `dh`.
    pub fn from_samples(
        t: f64,
        grid: Vec<f64>,
        h: Vec<f64>,
        dh: Vec<f64>,
        a2: f64,
        domain: Domain,
    ) -> Result<Self> {
        Self::check_shape(&grid, &h, &dh)?;
        let n = grid.len();
        let d2h = (0..n)
            .map(|i| {
                let (a, b) = if i == 0 {
                    (0, 1)
                } else if i == n - 1 {
                    (n - 2, n - 1)
                } else {
                    (i - 1, i + 1)
                };
                (dh[b] - dh[a]) / (grid[b] - grid[a])
            })
            .collect();
        Ok(Self {
            t,
            grid,
            h,
            dh,
            d2h,
            a2,
            domain,
            solver_meta: SolverMeta::default(),
        })
    }

    /// Profile whose samples satisfy the radial equation; second derivatives
    /// come from the equation itself (and `2 a2` at the origin).
    pub fn from_solution(
        m: &ModelParams,
        grid: Vec<f64>,
        h: Vec<f64>,
        dh: Vec<f64>,
        a2: f64,
        domain: Domain,
        solver_meta: SolverMeta,
    ) -> Result<Self> {
        Self::check_shape(&grid, &h, &dh)?;
        let d2h = grid
            .iter()
            .zip(h.iter().zip(&dh))
            .map(|(&r, (&hv, &dv))| {
                if r > 0.0 {
                    m.second_derivative(r, hv, dv)
                } else {
                    2.0 * a2
                }
            })
            .collect();
        Ok(Self {
            t: m.t,
            grid,
            h,
            dh,
            d2h,
            a2,
            domain,
            solver_meta,
        })
    }

    fn check_shape(grid: &[f64], h: &[f64], dh: &[f64]) -> Result<()> {
        if grid.len() < 2 || h.len() != grid.len() || dh.len() != grid.len() {
            return Err(Error::InvalidProfile(format!(
                "grid/h/dh lengths {}/{}/{} (need equal, at least 2)",
                grid.len(),
                h.len(),
                dh.len()
            )));
        }
        if grid[0] != 0.0 {
            return Err(Error::InvalidProfile("grid must start at r = 0".into()));
        }
        if grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidProfile("grid must be strictly increasing".into()));
        }
        Ok(())
    }

    pub fn end(&self) -> f64 {
        *self.grid.last().expect("non-empty grid")
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    pub fn d2h(&self) -> &[f64] {
        &self.d2h
    }

    fn cell(&self, r: f64) -> usize {
        let n = self.grid.len();
        match self.grid.binary_search_by(|g| g.partial_cmp(&r).expect("finite grid")) {
            Ok(i) => i.min(n - 2),
            Err(0) => 0,
            Err(i) => (i - 1).min(n - 2),
        }
    }

    fn eval_in_cell(&self, i: usize, r: f64) -> (f64, f64) {
        let (x0, x1) = (self.grid[i], self.grid[i + 1]);
        let d = x1 - x0;
        let s = (r - x0) / d;
        let (s2, s3) = (s * s, s * s * s);
        let (s4, s5) = (s3 * s, s3 * s2);
        let h0 = 1.0 - 10.0 * s3 + 15.0 * s4 - 6.0 * s5;
        let h1 = s - 6.0 * s3 + 8.0 * s4 - 3.0 * s5;
        let h2 = 0.5 * s2 - 1.5 * s3 + 1.5 * s4 - 0.5 * s5;
        let h3 = 10.0 * s3 - 15.0 * s4 + 6.0 * s5;
        let h4 = -4.0 * s3 + 7.0 * s4 - 3.0 * s5;
        let h5 = 0.5 * s3 - s4 + 0.5 * s5;
        let g0 = -30.0 * s2 + 60.0 * s3 - 30.0 * s4;
        let g1 = 1.0 - 18.0 * s2 + 32.0 * s3 - 15.0 * s4;
        let g2 = s - 4.5 * s2 + 6.0 * s3 - 2.5 * s4;
        let g3 = 30.0 * s2 - 60.0 * s3 + 30.0 * s4;
        let g4 = -12.0 * s2 + 28.0 * s3 - 15.0 * s4;
        let g5 = 1.5 * s2 - 4.0 * s3 + 2.5 * s4;
        let (ya, yb) = (self.h[i], self.h[i + 1]);
        let (da, db) = (self.dh[i], self.dh[i + 1]);
        let (ca, cb) = (self.d2h[i], self.d2h[i + 1]);
        let v = h0 * ya + h1 * d * da + h2 * d * d * ca + h3 * yb + h4 * d * db + h5 * d * d * cb;
        let dv = (g0 * ya + g1 * d * da + g2 * d * d * ca + g3 * yb + g4 * d * db + g5 * d * d * cb) / d;
        (v, dv)
    }

    /// `(h, dh)` at any radius in the grid range by quintic Hermite interpolation.
    pub fn eval(&self, r: f64) -> (f64, f64) {
        self.eval_in_cell(self.cell(r), r)
    }
}

impl RadialField for Profile {
    /// Evaluates the quintic of the cell holding `center`, so a stencil sees
    /// one smooth polynomial.
    fn value_near(&self, center: f64, r: f64) -> f64 {
        self.eval_in_cell(self.cell(center), r).0
    }
    fn extent(&self) -> f64 {
        self.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_has_quadruple_intervals() {
        let g = uniform_grid(0.3, 0.01, 200);
        assert_eq!((g.len() - 1) % 4, 0);
        assert!(g.len() > 200);
        assert_eq!(g[0], 0.0);
        assert_eq!(*g.last().unwrap(), 0.3);
        let g = uniform_grid(50.0, 0.01, 200);
        assert_eq!(g.len(), 5001);
    }

    #[test]
    fn quintic_interpolation_reproduces_polynomials() {
        let grid = uniform_grid(2.0, 0.25, 4);
        let f = |r: f64| 1.0 + r - 0.5 * r * r + 0.3 * r.powi(5);
        let df = |r: f64| 1.0 - r + 1.5 * r.powi(4);
        let h: Vec<f64> = grid.iter().map(|&r| f(r)).collect();
        let dh: Vec<f64> = grid.iter().map(|&r| df(r)).collect();
        let mut p = Profile::from_samples(5.0, grid.clone(), h, dh, 0.0, Domain::FiniteBall { radius: 2.0 }).unwrap();
        p.d2h = grid.iter().map(|&r| -1.0 + 6.0 * r.powi(3)).collect();
        for i in 0..=40 {
            let r = 0.05 * i as f64;
            let (v, d) = p.eval(r);
            assert!((v - f(r)).abs() < 1e-12);
            assert!((d - df(r)).abs() < 1e-11);
        }
    }

    #[test]
    fn rejects_bad_grids() {
        let d = Domain::FiniteBall { radius: 1.0 };
        assert!(Profile::from_samples(5.0, vec![0.0, 1.0], vec![0.0], vec![0.0, 0.0], 0.0, d).is_err());
        assert!(Profile::from_samples(5.0, vec![0.1, 1.0], vec![0.0; 2], vec![0.0; 2], 0.0, d).is_err());
        assert!(Profile::from_samples(5.0, vec![0.0, 0.0, 1.0], vec![0.0; 3], vec![0.0; 3], 0.0, d).is_err());
    }
}
