//! Bisection solvers for the hedgehog profile.
//!
//! A single shot cannot follow the separatrix far: near `h = 1` the linearised
//! equation has a mode growing like `exp(sqrt(2 + 3 h_+/t) r)`, so any error in
//! `a2` is amplified past double precision within ~20 length units. The
//! solvers therefore bisect in stages. Stage 0 bisects `a2`. When the two
//! bracketing trajectories separate, the state where they still agree becomes
//! a new launch point and the next stage bisects the slope there, keeping `h`
//! fixed. Stages repeat until the bracket pair agrees over the whole domain.

use serde::Serialize;

use super::shooting::{classify_shot, log_grid, outcome_from, pr_events, rhs, ShotClass, ShootingConfig};
use super::series::series_coefficients;
use super::{uniform_grid, Domain, Profile, SolverMeta};
use crate::analysis::reduced_energy;
use crate::error::{Error, Result};
use crate::integrator::{EventKind, EventSpec, StepStats, Trajectory};
use crate::model::ModelParams;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SolverOptions {
    pub shooting: ShootingConfig,
    /// Absolute bracket width on `a2` at which stage 0 stops.
    pub bisection_tol: f64,
    pub grid_spacing: f64,
    pub min_intervals: usize,
    /// Semi-infinite shots run this far past `r_max` before being classified.
    pub horizon_extension: f64,
    /// Largest difference in `h` or `dh` at which two bracketing trajectories
    /// still count as the same solution.
    pub separation_tol: f64,
    pub scan_points: usize,
    /// Override of the logarithmic `a2` scan range.
    pub scan_range: Option<(f64, f64)>,
    /// `|h(R) - 1|` above this rejects a finite-ball candidate.
    pub boundary_tol: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            shooting: ShootingConfig::default(),
            bisection_tol: 1e-12,
            grid_spacing: 0.01,
            min_intervals: 200,
            horizon_extension: 20.0,
            separation_tol: 1e-9,
            scan_points: 48,
            scan_range: None,
            boundary_tol: 1e-6,
        }
    }
}

/// One bisection stage of the continuation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StageRecord {
    pub r_start: f64,
    pub r_end: f64,
    /// `"a2"` for the core stage, `"slope"` for restarts.
    pub parameter: &'static str,
    pub bracket: [f64; 2],
    pub iterations: usize,
}

/// A finite-ball solution found from one scan transition.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RootCandidate {
    pub a2: f64,
    pub h_end: f64,
    pub min_h: f64,
    pub max_h: f64,
    pub energy: Option<f64>,
    pub accepted: bool,
    pub selected: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Side {
    Low,
    High,
}

#[derive(Debug, Clone, Copy)]
enum Mode {
    SemiInfinite,
    FiniteBall,
}

#[derive(Debug, Clone, Copy)]
enum Launch {
    Core(f64),
    Restart { idx: usize, h: f64, slope: f64 },
}

struct Engine<'a> {
    m: &'a ModelParams,
    opts: &'a SolverOptions,
    grid: &'a [f64],
    mode: Mode,
    horizon: f64,
    events: EventSpec,
}

struct Bracketed {
    lo: (f64, Trajectory),
    hi: (f64, Trajectory),
    iterations: usize,
}

struct StagedSolution {
    h: Vec<f64>,
    dh: Vec<f64>,
    a2: f64,
    a2_bracket: [f64; 2],
    stages: Vec<StageRecord>,
    stats: StepStats,
}

impl<'a> Engine<'a> {
    fn new(m: &'a ModelParams, opts: &'a SolverOptions, grid: &'a [f64], mode: Mode) -> Self {
        let end = *grid.last().expect("grid");
        let (horizon, events) = match mode {
            Mode::SemiInfinite => (end + opts.horizon_extension, pr_events(&opts.shooting)),
            Mode::FiniteBall => (
                end,
                EventSpec {
                    blowup: Some(1e6),
                    ..Default::default()
                },
            ),
        };
        Self {
            m,
            opts,
            grid,
            mode,
            horizon,
            events,
        }
    }

    fn side(&self, tr: &Trajectory) -> Side {
        match self.mode {
            Mode::SemiInfinite => {
                let o = outcome_from(0.0, tr.event, tr.end_r, tr.end_state);
                if o.class == ShotClass::R {
                    Side::High
                } else {
                    Side::Low
                }
            }
            Mode::FiniteBall => match tr.event {
                Some(hit) if hit.kind == EventKind::Blowup => {
                    if hit.state[0] > 0.0 {
                        Side::High
                    } else {
                        Side::Low
                    }
                }
                _ if tr.end_state[0] > 1.0 => Side::High,
                _ => Side::Low,
            },
        }
    }

    fn shoot(&self, launch: Launch, stats: &mut StepStats) -> Result<(Side, Trajectory)> {
        let solver = self.opts.shooting.solver();
        let tr = match launch {
            Launch::Core(a2) => {
                let l = series_coefficients(a2, self.m, self.opts.shooting.series_order)
                    .launch_state(self.opts.shooting.launch_radius);
                solver.integrate(rhs(self.m), l.r0, [l.h, l.dh], self.horizon, &self.grid[1..], &self.events)?
            }
            Launch::Restart { idx, h, slope } => solver.integrate(
                rhs(self.m),
                self.grid[idx],
                [h, slope],
                self.horizon,
                &self.grid[idx + 1..],
                &self.events,
            )?,
        };
        stats.absorb(&tr.stats);
        Ok((self.side(&tr), tr))
    }

    /// Bisect between parameters of opposite sides until `tol` (or until the
    /// midpoint is no longer representable).
    fn bisect(
        &self,
        a: (f64, Side, Trajectory),
        b: (f64, Side, Trajectory),
        tol: f64,
        make: impl Fn(f64) -> Launch,
        stats: &mut StepStats,
    ) -> Result<Bracketed> {
        let (mut lo, mut hi) = if a.1 == Side::Low { (a, b) } else { (b, a) };
        debug_assert!(lo.1 == Side::Low && hi.1 == Side::High);
        let mut iterations = 0;
        loop {
            let mid = 0.5 * (lo.0 + hi.0);
            if (hi.0 - lo.0).abs() <= tol || mid == lo.0 || mid == hi.0 || iterations >= 400 {
                break;
            }
            iterations += 1;
            let (side, tr) = self.shoot(make(mid), stats)?;
            match side {
                Side::Low => lo = (mid, side, tr),
                Side::High => hi = (mid, side, tr),
            }
        }
        Ok(Bracketed {
            lo: (lo.0, lo.2),
            hi: (hi.0, hi.2),
            iterations,
        })
    }

    fn run(&self, a_low: f64, a_high: f64) -> Result<StagedSolution> {
        let n = self.grid.len();
        let last = n - 1;
        let mut stats = StepStats::default();
        let mut h = vec![0.0; n];
        let mut dh = vec![0.0; n];
        let mut stages = Vec::new();

        let (sa, ta) = self.shoot(Launch::Core(a_low), &mut stats)?;
        let (sb, tb) = self.shoot(Launch::Core(a_high), &mut stats)?;
        if sa == sb {
            return Err(Error::BracketNotFound(format!(
                "a2 = {a_low} and a2 = {a_high} fall on the same side"
            )));
        }
        let mut br = self.bisect(
            (a_low, sa, ta),
            (a_high, sb, tb),
            self.opts.bisection_tol,
            Launch::Core,
            &mut stats,
        )?;
        let a2_bracket = [br.lo.0.min(br.hi.0), br.lo.0.max(br.hi.0)];
        let a2 = 0.5 * (br.lo.0 + br.hi.0);
        let mut start = 0usize;
        let mut parameter = "a2";
        let sep = self.opts.separation_tol;

        loop {
            let (lo_tr, hi_tr) = (&br.lo.1, &br.hi.1);
            let common = lo_tr.samples.len().min(hi_tr.samples.len());
            let mut agreed = start;
            for k in 0..common {
                let (p, q) = (lo_tr.samples[k], hi_tr.samples[k]);
                if (p[0] - q[0]).abs() > sep || (p[1] - q[1]).abs() > sep {
                    break;
                }
                let idx = start + 1 + k;
                h[idx] = 0.5 * (p[0] + q[0]);
                dh[idx] = 0.5 * (p[1] + q[1]);
                agreed = idx;
            }
            stages.push(StageRecord {
                r_start: self.grid[start],
                r_end: self.grid[agreed],
                parameter,
                bracket: [br.lo.0.min(br.hi.0), br.lo.0.max(br.hi.0)],
                iterations: br.iterations,
            });
            if agreed == last {
                break;
            }
            // a restart needs room to gain anything
            if agreed <= start {
                return Err(Error::ContinuationStalled {
                    r: self.grid[agreed],
                    end: self.grid[last],
                });
            }

            start = agreed;
            parameter = "slope";
            let h_k = h[start];
            let s0 = dh[start];
            let mut width = sep.max(1e-12 * s0.abs());
            let launch = |s: f64| Launch::Restart { idx: start, h: h_k, slope: s };
            let (mut s_a, mut s_b) = (s0 - width, s0 + width);
            let mut a = self.shoot(launch(s_a), &mut stats)?;
            let mut b = self.shoot(launch(s_b), &mut stats)?;
            let mut tries = 0;
            while !(a.0 == Side::Low && b.0 == Side::High) {
                tries += 1;
                if tries > 60 {
                    return Err(Error::ContinuationStalled {
                        r: self.grid[start],
                        end: self.grid[last],
                    });
                }
                width *= 2.0;
                if a.0 != Side::Low {
                    s_a -= width;
                    a = self.shoot(launch(s_a), &mut stats)?;
                }
                if b.0 != Side::High {
                    s_b += width;
                    b = self.shoot(launch(s_b), &mut stats)?;
                }
            }
            br = self.bisect((s_a, a.0, a.1), (s_b, b.0, b.1), 0.0, launch, &mut stats)?;
        }

        Ok(StagedSolution {
            h,
            dh,
            a2,
            a2_bracket,
            stages,
            stats,
        })
    }
}

fn meta_for(m: &ModelParams, opts: &SolverOptions, sol: &StagedSolution) -> SolverMeta {
    let launch = series_coefficients(sol.a2, m, opts.shooting.series_order).launch_state(opts.shooting.launch_radius);
    let mut warnings = Vec::new();
    if launch.warn {
        warnings.push(format!(
            "series truncation {:.3e} exceeds 1e-12 h(r0) at r0 = {}",
            launch.truncation, launch.r0
        ));
    }
    SolverMeta {
        integrator_tol: opts.shooting.tol,
        bisection_tol: opts.bisection_tol,
        launch_radius: opts.shooting.launch_radius,
        series_order: opts.shooting.series_order,
        launch_truncation: launch.truncation,
        grid_spacing: opts.grid_spacing,
        a2_bracket: sol.a2_bracket,
        stages: sol.stages.clone(),
        candidates: Vec::new(),
        stats: sol.stats,
        warnings,
    }
}

/// Hedgehog on the whole space, truncated at `r_max`.
///
/// Scans `a2` logarithmically for an adjacent P/R pair, then bisects.
pub fn solve_semi_infinite(m: &ModelParams, r_max: f64, opts: &SolverOptions) -> Result<Profile> {
    if !(r_max > 1.0) {
        return Err(Error::Domain(format!("r_max must exceed 1, got {r_max}")));
    }
    let mut opts = *opts;
    opts.shooting.launch_radius = opts.shooting.launch_radius.min(0.5 * opts.grid_spacing);
    let (a_min, a_max) = opts.scan_range.unwrap_or((1e-3, 1e2));
    let amps = log_grid(a_min, a_max, opts.scan_points);
    let mut classes = Vec::with_capacity(amps.len());
    for &a in &amps {
        classes.push(classify_shot(a, m, r_max, &opts.shooting)?.class);
    }
    let last_p = classes.iter().rposition(|c| *c == ShotClass::P);
    let pair = last_p.and_then(|i| {
        classes[i + 1..]
            .iter()
            .position(|c| *c == ShotClass::R)
            .map(|j| (amps[i], amps[i + 1 + j]))
    });
    let (a_low, a_high) = pair.ok_or_else(|| {
        Error::BracketNotFound(format!(
            "no P/R pair among {} amplitudes in [{a_min}, {a_max}] at t = {}",
            amps.len(),
            m.t
        ))
    })?;

    let grid = uniform_grid(r_max, opts.grid_spacing, opts.min_intervals);
    let engine = Engine::new(m, &opts, &grid, Mode::SemiInfinite);
    let sol = engine.run(a_low, a_high)?;
    let meta = meta_for(m, &opts, &sol);
    Profile::from_solution(m, grid, sol.h, sol.dh, sol.a2, Domain::SemiInfinite { r_max }, meta)
}

/// Hedgehog on the ball of radius `radius` with `h(radius) = 1`.
///
/// Every change of side in the amplitude scan is bisected; candidates that
/// meet the boundary condition and stay within `[0, 1]` are compared by
/// reduced energy and the smallest wins.
pub fn solve_finite_ball(m: &ModelParams, radius: f64, opts: &SolverOptions) -> Result<Profile> {
    if !(radius > 0.0) || !radius.is_finite() {
        return Err(Error::Domain(format!("ball radius must be positive, got {radius}")));
    }
    let mut opts = *opts;
    let grid = uniform_grid(radius, opts.grid_spacing, opts.min_intervals);
    let dr = grid[1];
    opts.shooting.launch_radius = opts.shooting.launch_radius.min(0.5 * dr);
    let engine = Engine::new(m, &opts, &grid, Mode::FiniteBall);
    let (a_min, a_max) = opts
        .scan_range
        .unwrap_or((1e-4, (1e4f64).max(100.0 / (radius * radius))));
    let amps = log_grid(a_min, a_max, opts.scan_points.max(64));
    let mut scratch = StepStats::default();
    let mut sides = Vec::with_capacity(amps.len());
    for &a in &amps {
        sides.push(engine.shoot(Launch::Core(a), &mut scratch)?.0);
    }
    let transitions: Vec<(f64, f64)> = sides
        .windows(2)
        .enumerate()
        .filter(|(_, w)| w[0] != w[1])
        .map(|(i, _)| (amps[i], amps[i + 1]))
        .collect();
    if transitions.is_empty() {
        return Err(Error::NoRoot(format!(
            "h(R) stays on one side of 1 for all {} amplitudes in [{a_min}, {a_max}] (R = {radius}, t = {})",
            amps.len(),
            m.t
        )));
    }

    let domain = Domain::FiniteBall { radius };
    let mut candidates = Vec::new();
    let mut profiles = Vec::new();
    for (a, b) in transitions {
        let sol = match engine.run(a, b) {
            Ok(s) => s,
            Err(Error::ContinuationStalled { .. }) => continue,
            Err(e) => return Err(e),
        };
        let meta = meta_for(m, &opts, &sol);
        let p = Profile::from_solution(m, grid.clone(), sol.h, sol.dh, sol.a2, domain, meta)?;
        let h_end = *p.h.last().unwrap();
        let min_h = p.h.iter().cloned().fold(f64::INFINITY, f64::min);
        let max_h = p.h.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let accepted = (h_end - 1.0).abs() <= opts.boundary_tol
            && min_h >= -10.0 * opts.shooting.tol
            && max_h <= 1.0 + 10.0 * opts.boundary_tol;
        let energy = accepted.then(|| reduced_energy(&p, m).i_h);
        candidates.push(RootCandidate {
            a2: p.a2,
            h_end,
            min_h,
            max_h,
            energy,
            accepted,
            selected: false,
        });
        profiles.push(p);
    }
    let best = candidates
        .iter()
        .enumerate()
        .filter_map(|(i, c)| c.energy.map(|e| (i, e)))
        .min_by(|x, y| x.1.total_cmp(&y.1))
        .map(|(i, _)| i)
        .ok_or_else(|| {
            Error::NoRoot(format!(
                "{} scan transitions, none met h(R) = 1 within {} with 0 <= h <= 1",
                candidates.len(),
                opts.boundary_tol
            ))
        })?;
    candidates[best].selected = true;
    let mut p = profiles.swap_remove(best);
    if candidates.len() > 1 {
        p.solver_meta.warnings.push(format!(
            "{} candidate solutions; kept the lowest-energy one (a2 = {})",
            candidates.len(),
            p.a2
        ));
    }
    p.solver_meta.candidates = candidates;
    Ok(p)
}
