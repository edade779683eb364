//! Dormand-Prince 5(4) integrator for the two-component radial system.
//!
//! Steps are clipped so that every requested output radius is hit exactly,
//! which keeps sampled values free of interpolation error. Events are located
//! inside an accepted step on the cubic Hermite interpolant built from the
//! step end points.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type State = [f64; 2];

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

// 5th minus embedded 4th order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

/// Adaptive step controller settings.
///
/// The local error estimate is controlled per unit step, so the global error
/// shrinks at least in proportion to the tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Dopri5 {
    pub rtol: f64,
    pub atol: f64,
    /// Upper bound on the step length.
    pub max_step: f64,
    pub max_steps: usize,
}

impl Dopri5 {
    pub fn new(tol: f64) -> Self {
        Self {
            rtol: tol,
            atol: tol,
            max_step: f64::INFINITY,
            max_steps: 5_000_000,
        }
    }
}

/// What should stop an integration early.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EventSpec {
    /// First zero of `dh` reached from above while `h < 1`.
    pub stationary: bool,
    /// First upward crossing of `h = 1 + margin`.
    pub overshoot: Option<f64>,
    /// First downward crossing of `h = 0`.
    pub negative: bool,
    /// `|h|` above this value stops the run (finite-time blow-up guard).
    pub blowup: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EventKind {
    Stationary,
    Overshoot,
    Negative,
    Blowup,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EventHit {
    pub kind: EventKind,
    pub r: f64,
    pub state: State,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct StepStats {
    pub accepted: u64,
    pub rejected: u64,
    pub rhs_evals: u64,
}

impl StepStats {
    pub fn absorb(&mut self, other: &StepStats) {
        self.accepted += other.accepted;
        self.rejected += other.rejected;
        self.rhs_evals += other.rhs_evals;
    }
}

/// Result of one integration run.
#[derive(Debug, Clone)]
pub struct Trajectory {
    /// States at the requested output radii, in order; shorter than the request
    /// when an event stopped the run first.
    pub samples: Vec<State>,
    pub end_r: f64,
    pub end_state: State,
    pub event: Option<EventHit>,
    pub stats: StepStats,
}

#[inline]
fn axpy(y: &State, h: f64, terms: &[(f64, &State)]) -> State {
    let mut out = *y;
    for (c, k) in terms {
        out[0] += h * c * k[0];
        out[1] += h * c * k[1];
    }
    out
}

/// Cubic Hermite value on `[ra, rb]` from end values and end slopes.
fn hermite(ra: f64, rb: f64, ya: f64, yb: f64, da: f64, db: f64, r: f64) -> f64 {
    let h = rb - ra;
    let s = (r - ra) / h;
    let s2 = s * s;
    let s3 = s2 * s;
    (2.0 * s3 - 3.0 * s2 + 1.0) * ya
        + (s3 - 2.0 * s2 + s) * h * da
        + (-2.0 * s3 + 3.0 * s2) * yb
        + (s3 - s2) * h * db
}

/// Root of `g` on `[a, b]` with `g(a) < 0 <= g(b)` (or the mirrored signs).
fn bisect_root(a: f64, b: f64, g: impl Fn(f64) -> f64) -> f64 {
    let (mut lo, mut hi) = (a, b);
    let neg_at_lo = g(lo) < 0.0;
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if (g(mid) < 0.0) == neg_at_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

struct Segment {
    ra: f64,
    rb: f64,
    ya: State,
    yb: State,
    fa: State,
    fb: State,
}

impl Segment {
    fn h(&self, r: f64) -> f64 {
        hermite(self.ra, self.rb, self.ya[0], self.yb[0], self.fa[0], self.fb[0], r)
    }
    fn dh(&self, r: f64) -> f64 {
        hermite(self.ra, self.rb, self.ya[1], self.yb[1], self.fa[1], self.fb[1], r)
    }
    fn state(&self, r: f64) -> State {
        [self.h(r), self.dh(r)]
    }
}

fn detect(spec: &EventSpec, seg: &Segment) -> Option<EventHit> {
    let mut best: Option<EventHit> = None;
    let mut consider = |kind: EventKind, r: f64| {
        if best.is_none_or(|b| r < b.r) {
            best = Some(EventHit {
                kind,
                r,
                state: seg.state(r),
            });
        }
    };
    if let Some(margin) = spec.overshoot {
        let level = 1.0 + margin;
        if seg.ya[0] <= level && seg.yb[0] > level {
            let r = bisect_root(seg.ra, seg.rb, |r| seg.h(r) - level);
            consider(EventKind::Overshoot, r);
        }
    }
    if spec.stationary && seg.ya[1] > 0.0 && seg.yb[1] <= 0.0 {
        let r = bisect_root(seg.ra, seg.rb, |r| seg.dh(r));
        if seg.h(r) < 1.0 {
            consider(EventKind::Stationary, r);
        }
    }
    if spec.negative && seg.ya[0] >= 0.0 && seg.yb[0] < 0.0 {
        let r = bisect_root(seg.ra, seg.rb, |r| seg.h(r));
        consider(EventKind::Negative, r);
    }
    if let Some(limit) = spec.blowup {
        if seg.yb[0].abs() > limit {
            consider(EventKind::Blowup, seg.rb);
        }
    }
    best
}

impl Dopri5 {
    fn error_norm(&self, y: &State, y_new: &State, err: &State) -> f64 {
        let mut acc = 0.0;
        for i in 0..2 {
            let sc = self.atol + self.rtol * y[i].abs().max(y_new[i].abs());
            let e = err[i] / sc;
            acc += e * e;
        }
        (acc / 2.0).sqrt()
    }

    /// Integrate `y' = rhs(r, y)` from `(r0, y0)` to `r_end`.
    ///
    /// `outputs` must be sorted and lie in `(r0, r_end]`; the trajectory records
    /// the state at each of them until an event in `events` stops the run.
    pub fn integrate<F>(
        &self,
        rhs: F,
        r0: f64,
        y0: State,
        r_end: f64,
        outputs: &[f64],
        events: &EventSpec,
    ) -> Result<Trajectory>
    where
        F: Fn(f64, &State) -> State,
    {
        // with a blow-up guard, a collapsing step marks a finite-radius singularity
        let underflow = |r: f64, step: f64, y: State, samples: Vec<State>, stats: StepStats| {
            if events.blowup.is_some() {
                let hit = EventHit {
                    kind: EventKind::Blowup,
                    r,
                    state: y,
                };
                Ok(Trajectory {
                    samples,
                    end_r: r,
                    end_state: y,
                    event: Some(hit),
                    stats,
                })
            } else {
                Err(Error::StepUnderflow { r, step })
            }
        };
        let mut stats = StepStats::default();
        let mut samples = Vec::with_capacity(outputs.len());
        let mut r = r0;
        let mut y = y0;
        let mut f = rhs(r, &y);
        stats.rhs_evals += 1;

        let span = r_end - r0;
        if span <= 0.0 {
            return Ok(Trajectory {
                samples,
                end_r: r,
                end_state: y,
                event: None,
                stats,
            });
        }
        // initial step from the local length scale; the controller adapts quickly
        let mut step = (0.1 * r0.abs().max(1e-6)).min(span).min(self.max_step);
        let mut next_out = 0usize;
        while next_out < outputs.len() && outputs[next_out] <= r0 {
            next_out += 1;
        }
        let mut last_rejected = false;

        loop {
            if stats.accepted + stats.rejected > self.max_steps as u64 {
                return Err(Error::StepUnderflow { r, step });
            }
            let target = if next_out < outputs.len() {
                outputs[next_out].min(r_end)
            } else {
                r_end
            };
            let mut hstep = step.min(self.max_step);
            let clipped = r + hstep >= target;
            if clipped {
                hstep = target - r;
            }
            if hstep <= 1e-14 * r.abs().max(1.0) && !clipped {
                return underflow(r, hstep, y, samples, stats);
            }

            let k1 = f;
            let k2 = rhs(r + C2 * hstep, &axpy(&y, hstep, &[(A21, &k1)]));
            let k3 = rhs(r + C3 * hstep, &axpy(&y, hstep, &[(A31, &k1), (A32, &k2)]));
            let k4 = rhs(
                r + C4 * hstep,
                &axpy(&y, hstep, &[(A41, &k1), (A42, &k2), (A43, &k3)]),
            );
            let k5 = rhs(
                r + C5 * hstep,
                &axpy(&y, hstep, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
            );
            let k6 = rhs(
                r + hstep,
                &axpy(
                    &y,
                    hstep,
                    &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
                ),
            );
            let y_new = axpy(
                &y,
                hstep,
                &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)],
            );
            let r_new = if clipped { target } else { r + hstep };
            let k7 = rhs(r_new, &y_new);
            stats.rhs_evals += 6;

            let mut err = [0.0; 2];
            for i in 0..2 {
                err[i] = hstep
                    * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            }
            // error per unit step (steps longer than 1 fall back to per step)
            let en = self.error_norm(&y, &y_new, &err) / hstep.min(1.0);
            if !en.is_finite() {
                stats.rejected += 1;
                step = 0.2 * hstep;
                last_rejected = true;
                if step <= 1e-14 * r.abs().max(1.0) {
                    return underflow(r, step, y, samples, stats);
                }
                continue;
            }

            let mut fac = if en == 0.0 { 5.0 } else { 0.9 * en.powf(-0.25) };
            fac = fac.clamp(0.2, 5.0);
            if en > 1.0 {
                stats.rejected += 1;
                step = hstep * fac.min(1.0);
                last_rejected = true;
                if step <= 1e-14 * r.abs().max(1.0) {
                    return underflow(r, step, y, samples, stats);
                }
                continue;
            }

            stats.accepted += 1;
            let seg = Segment {
                ra: r,
                rb: r_new,
                ya: y,
                yb: y_new,
                fa: k1,
                fb: k7,
            };
            if let Some(hit) = detect(events, &seg) {
                return Ok(Trajectory {
                    samples,
                    end_r: hit.r,
                    end_state: hit.state,
                    event: Some(hit),
                    stats,
                });
            }

            r = r_new;
            y = y_new;
            f = k7;
            if clipped && next_out < outputs.len() && r >= outputs[next_out] {
                samples.push(y);
                next_out += 1;
            }
            let grow = if last_rejected { fac.min(1.0) } else { fac };
            last_rejected = false;
            // a clipped step says nothing about the admissible length
            step = if clipped { step.max(hstep * grow) } else { hstep * grow };

            if r >= r_end {
                return Ok(Trajectory {
                    samples,
                    end_r: r,
                    end_state: y,
                    event: None,
                    stats,
                });
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_oscillator_accuracy() {
        // y'' = -y, y(0) = 0, y'(0) = 1
        let solver = Dopri5::new(1e-12);
        let outs: Vec<f64> = (1..=10).map(|i| i as f64).collect();
        let tr = solver
            .integrate(|_, y| [y[1], -y[0]], 0.0, [0.0, 1.0], 10.0, &outs, &EventSpec::default())
            .unwrap();
        assert_eq!(tr.samples.len(), 10);
        for (i, s) in tr.samples.iter().enumerate() {
            let x = (i + 1) as f64;
            assert!((s[0] - x.sin()).abs() < 1e-10, "{} {}", s[0], x.sin());
            assert!((s[1] - x.cos()).abs() < 1e-10);
        }
    }

    #[test]
    fn stationary_event_is_located() {
        let solver = Dopri5::new(1e-10);
        let spec = EventSpec {
            stationary: true,
            ..Default::default()
        };
        let tr = solver
            .integrate(|_, y| [y[1], -y[0]], 0.0, [0.0, 0.5], 10.0, &[], &spec)
            .unwrap();
        let hit = tr.event.unwrap();
        assert_eq!(hit.kind, EventKind::Stationary);
        assert!((hit.r - std::f64::consts::FRAC_PI_2).abs() < 1e-6);
    }

    #[test]
    fn overshoot_event() {
        let solver = Dopri5::new(1e-10);
        let spec = EventSpec {
            overshoot: Some(0.0),
            ..Default::default()
        };
        // y = r^2
        let tr = solver
            .integrate(|_, y| [y[1], 2.0], 0.0, [0.0, 0.0], 5.0, &[0.5, 2.0], &spec)
            .unwrap();
        let hit = tr.event.unwrap();
        assert_eq!(hit.kind, EventKind::Overshoot);
        assert!((hit.r - 1.0).abs() < 1e-9);
        assert_eq!(tr.samples.len(), 1);
    }

    #[test]
    fn blowup_reports_error_or_event() {
        // y' = y^2 blows up at r = 1
        let solver = Dopri5::new(1e-10);
        let spec = EventSpec {
            blowup: Some(1e6),
            ..Default::default()
        };
        let tr = solver
            .integrate(|_, y| [y[0] * y[0], 0.0], 0.0, [1.0, 0.0], 2.0, &[], &spec)
            .unwrap();
        assert_eq!(tr.event.unwrap().kind, EventKind::Blowup);
        assert!(tr.end_r < 1.0);
    }
}
