//! Biaxial energy test, second variations and the small-ball stability
//! threshold.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{ModelParams, ReducedGeometry};
use crate::profile::{solve_finite_ball, Profile, SolverOptions};
use crate::quadrature::{breakpoints, GaussRule};

/// Built-in radial amplitude shapes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Family {
    /// `(1 - r/sigma) / (r^2 + 12)^2`.
    Paper,
    /// `(1 - r/sigma) r^2`.
    QuadraticBump,
    /// `(1 + cos(pi r / sigma)) / 2`.
    RaisedCosine,
    /// `sin^2(pi (r - inner) / (sigma - inner))` on `[inner, sigma]`.
    Shell { inner: f64 },
    Zero,
}

impl Family {
    /// The three families supported on a whole ball.
    pub const BALL: [Family; 3] = [Family::Paper, Family::QuadraticBump, Family::RaisedCosine];

    pub fn name(&self) -> &'static str {
        match self {
            Family::Paper => "paper",
            Family::QuadraticBump => "quadratic-bump",
            Family::RaisedCosine => "raised-cosine",
            Family::Shell { .. } => "shell",
            Family::Zero => "zero",
        }
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper" => Ok(Family::Paper),
            "quadratic-bump" | "quadratic" => Ok(Family::QuadraticBump),
            "raised-cosine" | "cosine" => Ok(Family::RaisedCosine),
            "zero" => Ok(Family::Zero),
            _ => Err(Error::Domain(format!(
                "unknown amplitude family {s:?} (expected paper, quadratic-bump, raised-cosine or zero)"
            ))),
        }
    }
}

type AmplitudeFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
enum Shape {
    Family(Family),
    Custom(AmplitudeFn),
}

/// Radial amplitude `p` supported on `[inner, sigma]` and vanishing at `sigma`.
#[derive(Clone)]
pub struct BiaxialPerturbation {
    shape: Shape,
    pub sigma: f64,
    pub scale: f64,
    pub description: String,
}

impl fmt::Debug for BiaxialPerturbation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BiaxialPerturbation")
            .field("description", &self.description)
            .field("sigma", &self.sigma)
            .field("scale", &self.scale)
            .finish()
    }
}

impl BiaxialPerturbation {
    pub fn new(family: Family, sigma: f64) -> Result<Self> {
        if !(sigma > 0.0) || !sigma.is_finite() {
            return Err(Error::Domain(format!("support radius must be positive, got {sigma}")));
        }
        if let Family::Shell { inner } = family {
            if !(inner >= 0.0 && inner < sigma) {
                return Err(Error::Domain(format!("shell needs 0 <= inner < sigma, got [{inner}, {sigma}]")));
            }
        }
        let description = match family {
            Family::Shell { inner } => format!("shell on [{inner}, {sigma}]"),
            _ => format!("{} with sigma = {sigma}", family.name()),
        };
        Ok(Self {
            shape: Shape::Family(family),
            sigma,
            scale: 1.0,
            description,
        })
    }

    /// Shell supported on `[inner, outer]`.
    pub fn shell(inner: f64, outer: f64) -> Result<Self> {
        Self::new(Family::Shell { inner }, outer)
    }

    /// Arbitrary amplitude on `[0, sigma]`; derivatives use central differences.
    pub fn custom(f: impl Fn(f64) -> f64 + Send + Sync + 'static, sigma: f64, description: &str) -> Result<Self> {
        if !(sigma > 0.0) || !sigma.is_finite() {
            return Err(Error::Domain(format!("support radius must be positive, got {sigma}")));
        }
        let edge = f(sigma);
        if !(edge.abs() <= 1e-12) {
            return Err(Error::Domain(format!("amplitude must vanish at sigma, p({sigma}) = {edge}")));
        }
        Ok(Self {
            shape: Shape::Custom(Arc::new(f)),
            sigma,
            scale: 1.0,
            description: description.to_string(),
        })
    }

    /// The same shape multiplied by `eps`.
    pub fn scaled(&self, eps: f64) -> Self {
        let mut p = self.clone();
        p.scale *= eps;
        p
    }

    pub fn family(&self) -> Option<Family> {
        match self.shape {
            Shape::Family(f) => Some(f),
            Shape::Custom(_) => None,
        }
    }

    pub fn support(&self) -> (f64, f64) {
        match self.shape {
            Shape::Family(Family::Shell { inner }) => (inner, self.sigma),
            _ => (0.0, self.sigma),
        }
    }

    fn raw(&self, r: f64) -> (f64, f64) {
        let s = self.sigma;
        match &self.shape {
            Shape::Family(Family::Paper) => {
                let q = r * r + 12.0;
                let a = 1.0 - r / s;
                (a / (q * q), -1.0 / (s * q * q) - 4.0 * r * a / (q * q * q))
            }
            Shape::Family(Family::QuadraticBump) => ((1.0 - r / s) * r * r, 2.0 * r - 3.0 * r * r / s),
            Shape::Family(Family::RaisedCosine) => {
                let x = std::f64::consts::PI * r / s;
                (0.5 * (1.0 + x.cos()), -0.5 * std::f64::consts::PI / s * x.sin())
            }
            Shape::Family(Family::Shell { inner }) => {
                let w = s - inner;
                let x = std::f64::consts::PI * (r - inner) / w;
                (x.sin().powi(2), std::f64::consts::PI / w * (2.0 * x).sin())
            }
            Shape::Family(Family::Zero) => (0.0, 0.0),
            Shape::Custom(f) => {
                let d = 1e-5 * s.max(1.0);
                let (a, b) = ((r - d).max(0.0), (r + d).min(s));
                (f(r), (f(b) - f(a)) / (b - a))
            }
        }
    }

    /// `(p, p')` at `r`; zero outside the support.
    pub fn eval(&self, r: f64) -> (f64, f64) {
        let (lo, hi) = self.support();
        if r < lo || r > hi {
            return (0.0, 0.0);
        }
        let (v, d) = self.raw(r);
        (self.scale * v, self.scale * d)
    }
}

/// Quadrature resolution for perturbation integrals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureOptions {
    /// Coarse panel count; the fine pass doubles it.
    pub panels: usize,
    /// Gauss-Legendre nodes per panel.
    pub order: usize,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        Self { panels: 64, order: 8 }
    }
}

/// Value at `2n` panels and its difference from the `n`-panel value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Integral {
    pub value: f64,
    pub coarse: f64,
    pub error: f64,
}

fn integrate_two_ways(lo: f64, hi: f64, nodes: &[f64], q: QuadratureOptions, f: impl Fn(f64) -> f64) -> Integral {
    let rule = GaussRule::new(q.order);
    let coarse = rule.composite(&breakpoints(lo, hi, q.panels, nodes), &f);
    let value = rule.composite(&breakpoints(lo, hi, 2 * q.panels, nodes), &f);
    Integral {
        value,
        coarse,
        error: (value - coarse).abs(),
    }
}

fn grid_nodes(profile: &Profile, lo: f64, hi: f64) -> Vec<f64> {
    profile.grid.iter().copied().filter(|&r| r > lo && r < hi).collect()
}

fn check_support(lo: f64, hi: f64, end: f64) -> Result<()> {
    if hi > end * (1.0 + 1e-12) {
        return Err(Error::SupportExceedsDomain { lo, hi, end });
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Unstable,
    StableAlongFamily,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PerturbationReport {
    pub description: String,
    pub sigma: f64,
    pub scale: f64,
    #[serde(rename = "delta_I_exact")]
    pub delta_i_exact: f64,
    #[serde(rename = "delta_I_bound")]
    pub delta_i_bound: f64,
    pub quadratic_part: f64,
    /// `|I_2n - I_n|` for the exact and bound forms.
    pub quadrature_error_exact: f64,
    pub quadrature_error_bound: f64,
    #[serde(rename = "delta_I_exact_coarse")]
    pub delta_i_exact_coarse: f64,
    #[serde(rename = "delta_I_bound_coarse")]
    pub delta_i_bound_coarse: f64,
    pub panels: [usize; 2],
    #[serde(rename = "R_threshold")]
    pub r_threshold: f64,
    pub verdict: Verdict,
}

/// Radial density of the biaxial energy change at amplitude `p`.
pub fn biaxial_density(m: &ModelParams, r: f64, h: f64, p: f64, dp: f64) -> f64 {
    let hp_t = m.h_plus / m.t;
    let r2 = r * r;
    r2 / 3.0 * (dp * dp - p * p) - 2.0 * 6f64.sqrt() * hp_t / 9.0 * r2 * p * p * p
        + r2 * m.h_plus * hp_t / 2.0 * (4.0 / 9.0 * p.powi(4) + 28.0 / 15.0 * h * h * p * p)
}

/// Radial density of its quadratic part.
pub fn quadratic_density(m: &ModelParams, r: f64, h: f64, p: f64, dp: f64) -> f64 {
    let r2 = r * r;
    r2 / 3.0 * (dp * dp - p * p) + 14.0 / 15.0 * m.h_plus * m.h_plus / m.t * r2 * h * h * p * p
}

/// Energy change `(I[Q*+P] - I[Q*]) / 4 pi` for `P = p(r)(zz - I/3)`, with the
/// solved profile and with its upper envelope.
pub fn biaxial_delta(p: &BiaxialPerturbation, profile: &Profile, m: &ModelParams) -> Result<PerturbationReport> {
    biaxial_delta_with(p, profile, m, QuadratureOptions::default())
}

pub fn biaxial_delta_with(
    p: &BiaxialPerturbation,
    profile: &Profile,
    m: &ModelParams,
    q: QuadratureOptions,
) -> Result<PerturbationReport> {
    let (lo, hi) = p.support();
    check_support(lo, hi, profile.end())?;
    let nodes = grid_nodes(profile, lo, hi);
    let exact = integrate_two_ways(lo, hi, &nodes, q, |r| {
        let (a, da) = p.eval(r);
        biaxial_density(m, r, profile.eval(r).0, a, da)
    });
    let bound = integrate_two_ways(lo, hi, &[], q, |r| {
        let (a, da) = p.eval(r);
        biaxial_density(m, r, m.upper_envelope(r), a, da)
    });
    let quad = quadratic_part(p, profile, m, q)?;
    let verdict = if exact.value < -exact.error {
        Verdict::Unstable
    } else {
        Verdict::StableAlongFamily
    };
    Ok(PerturbationReport {
        description: p.description.clone(),
        sigma: p.sigma,
        scale: p.scale,
        delta_i_exact: exact.value,
        delta_i_bound: bound.value,
        quadratic_part: quad.value,
        quadrature_error_exact: exact.error,
        quadrature_error_bound: bound.error,
        delta_i_exact_coarse: exact.coarse,
        delta_i_bound_coarse: bound.coarse,
        panels: [q.panels, 2 * q.panels],
        r_threshold: stability_threshold(m, None, None).r_threshold,
        verdict,
    })
}

fn quadratic_part(p: &BiaxialPerturbation, profile: &Profile, m: &ModelParams, q: QuadratureOptions) -> Result<Integral> {
    let (lo, hi) = p.support();
    check_support(lo, hi, profile.end())?;
    let nodes = grid_nodes(profile, lo, hi);
    Ok(integrate_two_ways(lo, hi, &nodes, q, |r| {
        let (a, da) = p.eval(r);
        quadratic_density(m, r, profile.eval(r).0, a, da)
    }))
}

/// Quadratic part of the biaxial energy change.
pub fn second_variation_biaxial(p: &BiaxialPerturbation, profile: &Profile, m: &ModelParams) -> Result<f64> {
    Ok(quadratic_part(p, profile, m, QuadratureOptions::default())?.value)
}

/// Fixed tensor direction of an axisymmetric perturbation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TensorDirection {
    /// `zz - I/3`.
    Uniform,
    /// `rr - I/3`, the hedgehog's own direction.
    Radial,
}

impl FromStr for TensorDirection {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" | "zz" => Ok(TensorDirection::Uniform),
            "radial" | "rr" => Ok(TensorDirection::Radial),
            _ => Err(Error::UnsupportedDirection(format!(
                "{s:?} (supported: uniform for zz - I/3, radial for rr - I/3)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SecondVariation {
    pub direction: TensorDirection,
    pub radius: f64,
    /// Second variation on the rescaled unit ball.
    pub value: f64,
    pub quadrature_error: f64,
}

/// Angular integral of the second variation density, divided by `4 pi`, in
/// unscaled radius.
pub fn second_variation_density(direction: TensorDirection, m: &ModelParams, r: f64, h: f64, a: f64, da: f64) -> f64 {
    let r2 = r * r;
    match direction {
        TensorDirection::Uniform => {
            r2 * (2.0 / 3.0 * (da * da - a * a) + 28.0 / 15.0 * m.h_plus * m.h_plus / m.t * h * h * a * a)
        }
        TensorDirection::Radial => r2 * 2.0 / 3.0 * (da * da + m.bulk_potential_second_derivative(h) * a * a) + 4.0 * a * a,
    }
}

/// Second variation of the tensor energy about the hedgehog along
/// `P = alpha(r) D`, on the ball of radius `radius` rescaled to the unit ball.
///
/// With angular integrals done in closed form the integrand, in unscaled
/// radius, is `r^2 (2/3 alpha'^2 - 2/3 alpha^2 + 28/15 h_+^2/t h^2 alpha^2)` for
/// the uniform direction and `r^2 (2/3 alpha'^2 + 2/3 f''(h) alpha^2) + 4 alpha^2`
/// for the radial one; rescaling multiplies the integral by `4 pi / radius`.
pub fn second_variation_general(
    alpha: &BiaxialPerturbation,
    direction: TensorDirection,
    profile: &Profile,
    m: &ModelParams,
    radius: f64,
) -> Result<SecondVariation> {
    second_variation_general_with(alpha, direction, profile, m, radius, QuadratureOptions::default())
}

pub fn second_variation_general_with(
    alpha: &BiaxialPerturbation,
    direction: TensorDirection,
    profile: &Profile,
    m: &ModelParams,
    radius: f64,
    q: QuadratureOptions,
) -> Result<SecondVariation> {
    if !(radius > 0.0) {
        return Err(Error::Domain(format!("ball radius must be positive, got {radius}")));
    }
    let (lo, hi) = alpha.support();
    check_support(lo, hi, radius)?;
    check_support(lo, radius, profile.end())?;
    let nodes = grid_nodes(profile, lo, hi);
    let integral = integrate_two_ways(lo, hi, &nodes, q, |r| {
        let (a, da) = alpha.eval(r);
        second_variation_density(direction, m, r, profile.eval(r).0, a, da)
    });
    let k = 4.0 * std::f64::consts::PI / radius;
    Ok(SecondVariation {
        direction,
        radius,
        value: k * integral.value,
        quadrature_error: k * integral.error,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StabilityVerdict {
    pub t: f64,
    #[serde(rename = "R_threshold")]
    pub r_threshold: f64,
    #[serde(rename = "R_threshold_real")]
    pub r_threshold_real: Option<f64>,
    #[serde(rename = "R")]
    pub radius: Option<f64>,
    /// `R < R_threshold`, when a radius was queried.
    pub stable: Option<bool>,
}

/// Dimensionless small-ball threshold `sqrt(1/4 / (1 + 4 sqrt(6) h_+/t))`.
pub fn stability_threshold(m: &ModelParams, geom: Option<&ReducedGeometry>, radius: Option<f64>) -> StabilityVerdict {
    let r_th = (0.25 / (1.0 + 4.0 * 6f64.sqrt() * m.h_plus / m.t)).sqrt();
    StabilityVerdict {
        t: m.t,
        r_threshold: r_th,
        r_threshold_real: geom.map(|g| g.xi / m.t.sqrt() * r_th),
        radius,
        stable: radius.map(|r| r < r_th),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ThresholdFlag {
    BelowThreshold,
    AboveThreshold,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CellClass {
    ProvablyStable,
    UnstableWitnessed,
    Undetermined,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MapCell {
    pub t: f64,
    #[serde(rename = "R")]
    pub radius: f64,
    #[serde(rename = "R_threshold")]
    pub r_threshold: f64,
    pub threshold_flag: ThresholdFlag,
    pub sigma: f64,
    #[serde(rename = "delta_I_exact")]
    pub delta: Option<f64>,
    /// `-1`, `0` or `1`; absent when the cell failed.
    pub delta_sign: Option<i8>,
    pub class: CellClass,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MapOptions {
    pub workers: usize,
    /// Support radius of the biaxial family, capped at the cell radius.
    pub sigma: f64,
    pub solver: SolverOptions,
    pub quadrature: QuadratureOptions,
}

impl Default for MapOptions {
    fn default() -> Self {
        Self {
            workers: 1,
            sigma: 10.0,
            solver: SolverOptions::default(),
            quadrature: QuadratureOptions::default(),
        }
    }
}

fn map_cell(t: f64, radius: f64, opts: &MapOptions) -> MapCell {
    let sigma = opts.sigma.min(radius);
    let mut cell = MapCell {
        t,
        radius,
        r_threshold: f64::NAN,
        threshold_flag: ThresholdFlag::AboveThreshold,
        sigma,
        delta: None,
        delta_sign: None,
        class: CellClass::Undetermined,
        error: None,
    };
    let run = || -> Result<f64> {
        let m = ModelParams::new(t)?;
        let profile = solve_finite_ball(&m, radius, &opts.solver)?;
        let p = BiaxialPerturbation::new(Family::Paper, sigma)?;
        Ok(biaxial_delta_with(&p, &profile, &m, opts.quadrature)?.delta_i_exact)
    };
    if let Ok(m) = ModelParams::new(t) {
        cell.r_threshold = stability_threshold(&m, None, None).r_threshold;
        if radius < cell.r_threshold {
            cell.threshold_flag = ThresholdFlag::BelowThreshold;
        }
    }
    match run() {
        Ok(delta) => {
            cell.delta = Some(delta);
            cell.delta_sign = Some(if delta > 0.0 {
                1
            } else if delta < 0.0 {
                -1
            } else {
                0
            });
        }
        Err(e) => cell.error = Some(e.to_string()),
    }
    cell.class = match (cell.threshold_flag, cell.delta_sign) {
        (ThresholdFlag::BelowThreshold, _) => CellClass::ProvablyStable,
        (_, Some(-1)) => CellClass::UnstableWitnessed,
        _ => CellClass::Undetermined,
    };
    cell
}

/// Threshold classification and biaxial sign for every `(t, R)` pair, in
/// row-major order over `t_grid` then `r_grid`.
pub fn stability_map(t_grid: &[f64], r_grid: &[f64], opts: &MapOptions) -> Result<Vec<MapCell>> {
    if t_grid.is_empty() || r_grid.is_empty() {
        return Err(Error::Domain("stability map needs non-empty t and R grids".into()));
    }
    for &t in t_grid {
        ModelParams::new(t)?;
    }
    if let Some(r) = r_grid.iter().find(|r| !(**r > 0.0)) {
        return Err(Error::Domain(format!("map radii must be positive, got {r}")));
    }
    let pairs: Vec<(f64, f64)> = t_grid
        .iter()
        .flat_map(|&t| r_grid.iter().map(move |&r| (t, r)))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.workers.max(1))
        .build()
        .map_err(|e| Error::Domain(format!("worker pool: {e}")))?;
    Ok(pool.install(|| pairs.par_iter().map(|&(t, r)| map_cell(t, r, opts)).collect()))
}
