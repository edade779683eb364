//! Single shots of the radial equation from the core series, and their
//! classification by the shooting parameter `a2`.

use serde::{Deserialize, Serialize};

use super::series::{series_coefficients, LaunchState};
use crate::error::{Error, Result};
use crate::integrator::{Dopri5, EventHit, EventKind, EventSpec, State, StepStats};
use crate::model::ModelParams;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShootingConfig {
    /// Integrator tolerance (relative and absolute).
    pub tol: f64,
    pub launch_radius: f64,
    pub series_order: usize,
    /// A trajectory counts as overshooting once `h > 1 + overshoot_margin`.
    pub overshoot_margin: f64,
}

impl Default for ShootingConfig {
    fn default() -> Self {
        Self {
            tol: 1e-12,
            launch_radius: 1e-3,
            series_order: 6,
            overshoot_margin: 1e-9,
        }
    }
}

impl ShootingConfig {
    pub(crate) fn solver(&self) -> Dopri5 {
        Dopri5::new(self.tol)
    }
}

/// One integrated trajectory.
#[derive(Debug, Clone)]
pub struct Shot {
    pub a2: f64,
    pub launch: LaunchState,
    /// Output radii actually reached.
    pub grid: Vec<f64>,
    pub states: Vec<State>,
    pub event: Option<EventHit>,
    pub end_r: f64,
    pub end_state: State,
    pub stats: StepStats,
}

pub(crate) fn rhs(m: &ModelParams) -> impl Fn(f64, &State) -> State + '_ {
    move |r, y| [y[1], m.second_derivative(r, y[0], y[1])]
}

/// Integrate from the series launch state to `r_end`, sampling at `outputs`.
pub fn integrate(
    a2: f64,
    m: &ModelParams,
    r_end: f64,
    outputs: &[f64],
    events: &EventSpec,
    cfg: &ShootingConfig,
) -> Result<Shot> {
    if !(a2 >= 0.0) {
        return Err(Error::Domain(format!("shooting parameter must be non-negative, got {a2}")));
    }
    if r_end <= cfg.launch_radius {
        return Err(Error::Domain(format!(
            "end radius {r_end} must exceed the launch radius {}",
            cfg.launch_radius
        )));
    }
    let launch = series_coefficients(a2, m, cfg.series_order).launch_state(cfg.launch_radius);
    let tr = cfg.solver().integrate(
        rhs(m),
        launch.r0,
        [launch.h, launch.dh],
        r_end,
        outputs,
        events,
    )?;
    let grid = outputs[..tr.samples.len()].to_vec();
    Ok(Shot {
        a2,
        launch,
        grid,
        states: tr.samples,
        event: tr.event,
        end_r: tr.end_r,
        end_state: tr.end_state,
        stats: tr.stats,
    })
}

/// Trichotomy of shooting trajectories.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ShotClass {
    /// Stationary point while still below 1.
    P,
    /// Monotone and bounded by 1 through the truncation radius.
    Q,
    /// Exceeds 1 while increasing.
    R,
    /// Neither event fired but the trajectory is still far from the bulk
    /// value at the truncation radius.
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShotOutcome {
    pub class: ShotClass,
    pub witness_r: Option<f64>,
    pub a2: f64,
    pub end_r: f64,
    pub end_h: f64,
    pub end_dh: f64,
}

pub(crate) fn pr_events(cfg: &ShootingConfig) -> EventSpec {
    EventSpec {
        stationary: true,
        overshoot: Some(cfg.overshoot_margin),
        negative: false,
        blowup: Some(1e6),
    }
}

pub(crate) fn outcome_from(a2: f64, event: Option<EventHit>, end_r: f64, end: State) -> ShotOutcome {
    let (class, witness_r) = match event {
        Some(EventHit { kind: EventKind::Stationary, r, .. }) => (ShotClass::P, Some(r)),
        Some(EventHit { kind: EventKind::Overshoot, r, .. }) => (ShotClass::R, Some(r)),
        Some(EventHit { kind: EventKind::Blowup, r, state }) if state[0] > 0.0 => (ShotClass::R, Some(r)),
        Some(EventHit { r, .. }) => (ShotClass::P, Some(r)),
        None => {
            // still below the lower envelope: the run was too short to decide
            if end[0] < ModelParams::lower_envelope(end_r) {
                (ShotClass::Inconclusive, None)
            } else {
                (ShotClass::Q, None)
            }
        }
    };
    ShotOutcome {
        class,
        witness_r,
        a2,
        end_r,
        end_h: end[0],
        end_dh: end[1],
    }
}

/// Classify the trajectory with core amplitude `a2` on `(0, r_max]`.
pub fn classify_shot(a2: f64, m: &ModelParams, r_max: f64, cfg: &ShootingConfig) -> Result<ShotOutcome> {
    if !(a2 > 0.0) {
        return Err(Error::Domain(format!("shooting parameter must be positive, got {a2}")));
    }
    let shot = integrate(a2, m, r_max, &[], &pr_events(cfg), cfg)?;
    Ok(outcome_from(a2, shot.event, shot.end_r, shot.end_state))
}

/// Classify `n` amplitudes spaced logarithmically on `[a_min, a_max]`.
pub fn scan_classes(
    m: &ModelParams,
    r_max: f64,
    a_min: f64,
    a_max: f64,
    n: usize,
    cfg: &ShootingConfig,
) -> Result<Vec<ShotOutcome>> {
    log_grid(a_min, a_max, n)
        .into_iter()
        .map(|a| classify_shot(a, m, r_max, cfg))
        .collect()
}

pub(crate) fn log_grid(a_min: f64, a_max: f64, n: usize) -> Vec<f64> {
    let n = n.max(2);
    let (l0, l1) = (a_min.ln(), a_max.ln());
    (0..n)
        .map(|i| (l0 + (l1 - l0) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_amplitude_stays_isotropic() {
        let m = ModelParams::new(200.0).unwrap();
        let outs: Vec<f64> = (1..=100).map(|i| 0.2 * i as f64).collect();
        let shot = integrate(0.0, &m, 20.0, &outs, &EventSpec::default(), &ShootingConfig::default()).unwrap();
        assert_eq!(shot.states.len(), 100);
        assert!(shot.states.iter().all(|s| s[0] == 0.0 && s[1] == 0.0));
    }

    #[test]
    fn large_amplitude_overshoots() {
        let m = ModelParams::new(200.0).unwrap();
        let o = classify_shot(10.0, &m, 20.0, &ShootingConfig::default()).unwrap();
        assert_eq!(o.class, ShotClass::R);
        assert!(o.witness_r.unwrap() < 5.0);
    }

    #[test]
    fn small_amplitude_turns_near_bessel_maximum() {
        let m = ModelParams::new(200.0).unwrap();
        let o = classify_shot(1e-4, &m, 20.0, &ShootingConfig::default()).unwrap();
        assert_eq!(o.class, ShotClass::P);
        let w = o.witness_r.unwrap();
        assert!((w - 3.342).abs() / 3.342 < 0.02, "witness {w}");
    }

    #[test]
    fn rejects_bad_inputs() {
        let m = ModelParams::new(200.0).unwrap();
        let cfg = ShootingConfig::default();
        assert!(classify_shot(0.0, &m, 20.0, &cfg).is_err());
        assert!(integrate(-1.0, &m, 20.0, &[], &EventSpec::default(), &cfg).is_err());
        assert!(integrate(0.1, &m, 1e-4, &[], &EventSpec::default(), &cfg).is_err());
    }
}
