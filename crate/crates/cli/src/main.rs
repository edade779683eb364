//! `hedgehog`: solve and check radial-hedgehog profiles from the command line.

mod config;
mod output;

use std::process::ExitCode;

use clap::{Parser, Subcommand};
use hedgehog_core::analysis::{farfield_residuals, FarFieldResiduals};
use hedgehog_core::io::{map_csv, profile_csv, to_json};
use hedgehog_core::perturbation::{
    biaxial_delta_with, second_variation_general, MapOptions, QuadratureOptions, SecondVariation,
};
use hedgehog_core::{
    check_bounds, classify_shot, derive_model_params, farfield_fit, gradient_bound, nondimensionalize,
    reduced_energy, series_coefficients, solve_finite_ball, solve_semi_infinite, stability_map,
    stability_threshold, tensor_residual, BiaxialPerturbation, Family, ModelParams, Profile, ReducedGeometry,
    StabilityVerdict, TensorDirection, Validation,
};
use serde::Serialize;
use serde_json::json;

use config::{CommonArgs, Format, Geometry, ModelInput, RunConfig};
use output::{destination, emit, json_document, write, Provenance};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Solver(hedgehog_core::Error),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    ChecksFailed(String),
}

impl From<hedgehog_core::Error> for CliError {
    fn from(e: hedgehog_core::Error) -> Self {
        use hedgehog_core::Error as E;
        match e {
            E::Domain(_)
            | E::TemperatureOutOfRange { .. }
            | E::SupportExceedsDomain { .. }
            | E::StencilOutsideDomain { .. }
            | E::UnsupportedDirection(_)
            | E::InvalidProfile(_) => CliError::Validation(e.to_string()),
            other => CliError::Solver(other),
        }
    }
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Solver(_) | CliError::Io(_) => 2,
            CliError::ChecksFailed(_) => 3,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Validation(_) => "validation",
            CliError::Solver(_) => "solver",
            CliError::Io(_) => "io",
            CliError::ChecksFailed(_) => "checks_failed",
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "hedgehog", version, about = "Radial-hedgehog solutions of the Landau-de Gennes model")]
struct Cli {
    #[command(flatten)]
    common: CommonArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Derive the reduced-temperature constants (bulk amplitude h_+, core
    /// length scale, bulk offset, far-field coefficient) and, from physical
    /// constants, the correlation length and reduced radii.
    Params,
    /// Solve for the hedgehog profile by series launch and staged bisection
    /// on the core amplitude a2. CSV output writes a JSON sidecar with a2,
    /// domain and solver metadata.
    Solve,
    /// Integrate one trajectory from the core series and classify it as P
    /// (turns before reaching 1), Q (monotone, below 1) or R (crosses 1).
    Shoot {
        /// Core amplitude a2 of the trajectory.
        #[arg(long)]
        a2: f64,
    },
    /// Reduced energy of the solved profile, 4 pi times it, and the
    /// comparison value 3R of the constant profile.
    Energy,
    /// Run the check battery on the solved profile: pointwise core
    /// envelopes, core-amplitude interval, far-field coefficient and
    /// residuals, gradient bound, tensor equilibrium residual, energy bound,
    /// monotonicity and series consistency. Exit status 3 if any check fails.
    Verify,
    /// Energy change of the hedgehog under the biaxial perturbation
    /// p(r)(zz - I/3), with the solved profile and with its upper envelope.
    Biaxial {
        /// Support radius of the perturbation.
        #[arg(long, default_value_t = 10.0)]
        sigma: f64,
        /// Amplitude family: paper, quadratic-bump, raised-cosine or zero.
        #[arg(long, default_value = "paper")]
        family: String,
        /// Inner radius; switches to a shell on [inner, sigma].
        #[arg(long)]
        shell_inner: Option<f64>,
        /// Multiplier applied to the amplitude.
        #[arg(long, default_value_t = 1.0)]
        epsilon: f64,
        /// Coarse quadrature panel count (the fine pass doubles it).
        #[arg(long, default_value_t = 64)]
        panels: usize,
    },
    /// Small-ball stability threshold; with --radius also the second
    /// variation of every built-in amplitude family in both tensor
    /// directions.
    Stability,
    /// Sweep (t, R) cells: threshold flag and sign of the biaxial energy
    /// change for the default amplitude (1 - r/sigma)/(r^2 + 12)^2. Emits CSV by default.
    Map {
        /// Comma-separated temperatures.
        #[arg(long, value_delimiter = ',', required = true)]
        t_grid: Vec<f64>,
        /// Comma-separated ball radii.
        #[arg(long, value_delimiter = ',', required = true)]
        r_grid: Vec<f64>,
        /// Worker threads.
        #[arg(long, default_value_t = 1)]
        workers: usize,
        /// Support radius of the perturbation, capped at each cell's radius.
        #[arg(long, default_value_t = 10.0)]
        sigma: f64,
    },
    /// Finite-difference residual of the tensor equilibrium equation for the
    /// hedgehog tensor built from the solved profile.
    Residual {
        /// Comma-separated sample radii.
        #[arg(long, value_delimiter = ',', default_value = "1,5,20")]
        samples: Vec<f64>,
        /// Stencil spacing.
        #[arg(long, default_value_t = 1e-3)]
        spacing: f64,
    },
}

fn model(cfg: &RunConfig) -> Result<(ModelParams, Option<ReducedGeometry>), CliError> {
    let v = if cfg.relaxed { Validation::Relaxed } else { Validation::Strict };
    match cfg.model {
        ModelInput::Temperature { t } => {
            let geom = cfg.physical.as_ref().map(|p| reduced_geometry(p, t));
            Ok((derive_model_params(t, v)?, geom))
        }
        ModelInput::Physical { physical } => {
            let (t, geom) = nondimensionalize(&physical, v)?;
            Ok((derive_model_params(t, v)?, Some(geom)))
        }
    }
}

fn reduced_geometry(p: &hedgehog_core::PhysicalParams, t: f64) -> ReducedGeometry {
    let xi = (27.0 * p.c2 * p.l / (p.b2 * p.b2)).sqrt();
    let r_bar = p.r_real / xi;
    ReducedGeometry {
        xi,
        r_bar,
        r_tilde: t.sqrt() * r_bar,
    }
}

fn solve(cfg: &RunConfig, m: &ModelParams) -> Result<Profile, CliError> {
    let opts = cfg.tolerances.solver_options();
    Ok(match cfg.geometry {
        Geometry::FiniteBall { radius } => solve_finite_ball(m, radius, &opts)?,
        Geometry::SemiInfinite { r_max } => solve_semi_infinite(m, r_max, &opts)?,
    })
}

#[derive(Serialize)]
struct ParamsReport {
    model: ModelParams,
    geometry: Option<ReducedGeometry>,
    core_amplitude_interval: [f64; 2],
    stability: StabilityVerdict,
}

fn cmd_params(cfg: &RunConfig, prov: &Provenance) -> Result<(), CliError> {
    let (m, geom) = model(cfg)?;
    let (lo, hi) = m.core_amplitude_bounds();
    let report = ParamsReport {
        model: m,
        geometry: geom,
        core_amplitude_interval: [lo, hi],
        stability: stability_threshold(&m, geom.as_ref(), None),
    };
    emit(cfg, prov, &report, None)
}

#[derive(Serialize)]
struct ProfileSidecar<'a> {
    t: f64,
    a2: f64,
    domain: &'a hedgehog_core::Domain,
    points: usize,
    solver_meta: &'a hedgehog_core::profile::SolverMeta,
}

fn cmd_solve(cfg: &RunConfig, prov: &Provenance) -> Result<(), CliError> {
    let (m, _) = model(cfg)?;
    let p = solve(cfg, &m)?;
    let dest = destination(cfg);
    match cfg.format {
        Format::Csv => {
            let mut comments = prov.lines();
            comments.push(format!("a2: {}", hedgehog_core::io::fmt_f64(p.a2)));
            write(dest.as_deref(), &profile_csv(&p, &comments))?;
            if let Some(path) = dest {
                let sidecar = ProfileSidecar {
                    t: p.t,
                    a2: p.a2,
                    domain: &p.domain,
                    points: p.len(),
                    solver_meta: &p.solver_meta,
                };
                write(Some(&path.with_extension("json")), &json_document(prov, &sidecar)?)?;
            }
            Ok(())
        }
        Format::Json => write(dest.as_deref(), &json_document(prov, &p)?),
        Format::Table => {
            let sidecar = ProfileSidecar {
                t: p.t,
                a2: p.a2,
                domain: &p.domain,
                points: p.len(),
                solver_meta: &p.solver_meta,
            };
            emit(cfg, prov, &sidecar, None)
        }
    }
}

fn cmd_shoot(cfg: &RunConfig, prov: &Provenance, a2: f64) -> Result<(), CliError> {
    let (m, _) = model(cfg)?;
    let shooting = cfg.tolerances.solver_options().shooting;
    let outcome = classify_shot(a2, &m, cfg.geometry.end(), &shooting)?;
    emit(cfg, prov, &outcome, None)
}

fn cmd_energy(cfg: &RunConfig, prov: &Provenance) -> Result<(), CliError> {
    let (m, _) = model(cfg)?;
    let p = solve(cfg, &m)?;
    emit(cfg, prov, &reduced_energy(&p, &m), None)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
enum Status {
    Pass,
    Fail,
    Info,
    Skip,
}

#[derive(Debug, Clone, Serialize)]
struct Check {
    name: &'static str,
    status: Status,
    value: Option<f64>,
    limit: Option<f64>,
    detail: String,
}

#[derive(Debug, Clone, Serialize)]
struct VerifyReport {
    t: f64,
    a2: f64,
    geometry: Geometry,
    checks: Vec<Check>,
    passed: bool,
}

fn check(name: &'static str, value: f64, limit: f64, ok: bool, detail: String) -> Check {
    Check {
        name,
        status: if ok { Status::Pass } else { Status::Fail },
        value: Some(value),
        limit: Some(limit),
        detail,
    }
}

fn skip(name: &'static str, detail: &str) -> Check {
    Check {
        name,
        status: Status::Skip,
        value: None,
        limit: None,
        detail: detail.to_string(),
    }
}

/// Radius from which a domain counts as large for the envelope and far-field checks.
const LARGE_DOMAIN: f64 = 45.0;
const BOUND_TOL: f64 = 1e-6;
const FARFIELD_WINDOW: (f64, f64) = (25.0, 45.0);
const FARFIELD_RESIDUAL_RADIUS: f64 = 40.0;
const FARFIELD_RESIDUAL_LIMIT: f64 = 0.05;
const RESIDUAL_SAMPLES: [f64; 3] = [1.0, 5.0, 20.0];
const RESIDUAL_SPACING: f64 = 1e-3;
const RESIDUAL_LIMIT: f64 = 1e-5;
const SERIES_CHECK_ORDER: usize = 20;

fn verify_checks(cfg: &RunConfig, m: &ModelParams, p: &Profile) -> Result<Vec<Check>, CliError> {
    let tol = cfg.tolerances.integrator;
    let end = p.end();
    let large = end >= LARGE_DOMAIN;
    let mut out = Vec::new();

    if let Geometry::FiniteBall { .. } = cfg.geometry {
        let dev = (p.h[p.len() - 1] - 1.0).abs();
        out.push(check("boundary value h(R) = 1", dev, 1e-6, dev <= 1e-6, "|h(R) - 1|".into()));
    }
    let lo = p.h.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = p.h.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let excess = (-lo).max(hi - 1.0).max(0.0);
    out.push(check(
        "0 <= h <= 1",
        excess,
        10.0 * tol,
        excess <= 10.0 * tol,
        format!("min h = {lo:e}, max h = {hi:e}"),
    ));

    if large {
        let b = check_bounds(p, m, BOUND_TOL);
        out.push(check(
            "lower core envelope",
            b.max_lower_violation,
            BOUND_TOL,
            b.lower_ok,
            "max of r^2/(r^2+14) - h".into(),
        ));
        let mut upper = check(
            "upper core envelope",
            b.max_upper_violation,
            BOUND_TOL,
            b.upper_ok,
            "max of h - r^2/(r^2+t lambda_t^2)".into(),
        );
        if let (Geometry::FiniteBall { .. }, Status::Fail) = (cfg.geometry, upper.status) {
            upper.status = Status::Info;
            upper.detail.push_str("; whole-space envelope, exceeded near the wall where h = 1");
        }
        out.push(upper);
        out.push(check(
            "core amplitude interval",
            p.a2,
            b.a2_interval[1],
            b.a2_ok,
            format!("a2 in [{:e}, {:e}]", b.a2_interval[0], b.a2_interval[1]),
        ));
        let ff = farfield_fit(p, m, FARFIELD_WINDOW)?;
        out.push(check(
            "far-field coefficient",
            ff.relative_error,
            0.01,
            ff.relative_error < 0.01,
            format!(
                "r^2 (1-h) -> {:e}, closed form {:e}",
                ff.coeff_empirical, ff.coeff_closed_form
            ),
        ));
        let FarFieldResiduals {
            second_derivative,
            first_derivative,
            balance,
            ..
        } = farfield_residuals(p, m, FARFIELD_RESIDUAL_RADIUS)?;
        let worst = second_derivative.max(first_derivative).max(balance);
        out.push(check(
            "far-field residuals at r = 40",
            worst,
            FARFIELD_RESIDUAL_LIMIT,
            worst < FARFIELD_RESIDUAL_LIMIT,
            format!("r^2|h''| = {second_derivative:e}, r|h'| = {first_derivative:e}, balance = {balance:e}"),
        ));
    } else {
        let why = "domain smaller than 45: large-domain estimate";
        out.push(skip("lower core envelope", why));
        out.push(skip("upper core envelope", why));
        out.push(skip("core amplitude interval", why));
        out.push(skip("far-field coefficient", why));
        out.push(skip("far-field residuals at r = 40", why));
    }

    let g = gradient_bound(p, None);
    out.push(Check {
        name: "gradient bound",
        status: Status::Info,
        value: Some(g.max),
        limit: None,
        detail: format!(
            "max sqrt(h'^2 + 3h^2/r^2) at r = {}; full tensor norm {:e}",
            g.r_at_max, g.max_tensor_norm
        ),
    });

    let samples: Vec<f64> = RESIDUAL_SAMPLES
        .iter()
        .copied()
        .filter(|&r| r + RESIDUAL_SPACING <= end)
        .collect();
    if samples.is_empty() {
        out.push(skip("tensor equilibrium residual", "no sample radius inside the domain"));
    } else {
        let res = tensor_residual(p, m, &samples, RESIDUAL_SPACING)?;
        out.push(check(
            "tensor equilibrium residual",
            res.max,
            RESIDUAL_LIMIT,
            res.max < RESIDUAL_LIMIT,
            format!("samples {samples:?}, stencil {RESIDUAL_SPACING:e}"),
        ));
    }

    let e = reduced_energy(p, m);
    out.push(check(
        "energy below 3R",
        e.i_h,
        e.bound_3r,
        e.below_bound && e.nonnegative,
        format!("quadrature error {:e}", e.quadrature_error),
    ));

    let interior = &p.dh[1..p.len() - 1];
    let min_dh = interior.iter().cloned().fold(f64::INFINITY, f64::min);
    let mono = Check {
        status: match (cfg.geometry, min_dh > 0.0) {
            (_, true) => Status::Pass,
            (Geometry::SemiInfinite { .. }, false) => Status::Fail,
            (Geometry::FiniteBall { .. }, false) => Status::Info,
        },
        ..check("monotone profile", min_dh, 0.0, true, "min of h' at interior grid points".into())
    };
    out.push(mono);

    if end > 0.1 {
        let s = series_coefficients(p.a2, m, SERIES_CHECK_ORDER);
        let hs = s.eval(0.1).0;
        let rel = (p.eval(0.1).0 - hs).abs() / hs.abs();
        out.push(check(
            "series consistency at r = 0.1",
            rel,
            1e-6,
            rel < 1e-6,
            format!("relative difference from the order-{SERIES_CHECK_ORDER} core series"),
        ));
    }
    Ok(out)
}

fn verify_table(prov: &Provenance, report: &VerifyReport) -> String {
    let mut out = String::new();
    for l in prov.lines() {
        out.push_str(&format!("# {l}\n"));
    }
    out.push_str(&format!("# t = {}, a2 = {:e}\n", report.t, report.a2));
    let w = report.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
    for c in &report.checks {
        let status = serde_json::to_value(c.status).unwrap();
        let value = c.value.map_or(String::from("-"), |v| format!("{v:.6e}"));
        let limit = c.limit.map_or(String::from("-"), |v| format!("{v:.1e}"));
        out.push_str(&format!(
            "{:<4}  {:<w$}  {:>13}  {:>8}  {}\n",
            status.as_str().unwrap(),
            c.name,
            value,
            limit,
            c.detail
        ));
    }
    out.push_str(if report.passed { "ALL CHECKS PASSED\n" } else { "SOME CHECKS FAILED\n" });
    out
}

fn cmd_verify(cfg: &RunConfig, prov: &Provenance) -> Result<(), CliError> {
    let (m, _) = model(cfg)?;
    let p = solve(cfg, &m)?;
    let checks = verify_checks(cfg, &m, &p)?;
    let passed = checks.iter().all(|c| c.status != Status::Fail);
    let report = VerifyReport {
        t: m.t,
        a2: p.a2,
        geometry: cfg.geometry,
        checks,
        passed,
    };
    let dest = destination(cfg);
    let table = verify_table(prov, &report);
    match cfg.format {
        Format::Json => {
            write(dest.as_deref(), &json_document(prov, &report)?)?;
            if dest.is_some() {
                write(None, &table)?;
            }
        }
        _ => {
            write(dest.as_deref(), &table)?;
            if dest.is_some() {
                write(None, &table)?;
            }
        }
    }
    if passed {
        Ok(())
    } else {
        let failed: Vec<&str> = report
            .checks
            .iter()
            .filter(|c| c.status == Status::Fail)
            .map(|c| c.name)
            .collect();
        Err(CliError::ChecksFailed(format!("failed checks: {}", failed.join(", "))))
    }
}

fn perturbation(family: &str, sigma: f64, shell_inner: Option<f64>) -> Result<BiaxialPerturbation, CliError> {
    Ok(match shell_inner {
        Some(inner) => BiaxialPerturbation::shell(inner, sigma)?,
        None => BiaxialPerturbation::new(family.parse::<Family>()?, sigma)?,
    })
}

fn cmd_biaxial(
    cfg: &RunConfig,
    prov: &Provenance,
    pert: BiaxialPerturbation,
    panels: usize,
) -> Result<(), CliError> {
    let (m, _) = model(cfg)?;
    let (_, hi) = pert.support();
    if hi > cfg.geometry.end() {
        return Err(CliError::Validation(format!(
            "support radius {hi} exceeds the domain end {}",
            cfg.geometry.end()
        )));
    }
    let p = solve(cfg, &m)?;
    let q = QuadratureOptions {
        panels: panels.max(1),
        ..Default::default()
    };
    emit(cfg, prov, &biaxial_delta_with(&pert, &p, &m, q)?, None)
}

#[derive(Serialize)]
struct StabilityReport {
    verdict: StabilityVerdict,
    second_variations: Vec<FamilyVariation>,
}

#[derive(Serialize)]
struct FamilyVariation {
    family: &'static str,
    #[serde(flatten)]
    value: SecondVariation,
    positive: bool,
}

fn cmd_stability(cfg: &RunConfig, prov: &Provenance) -> Result<(), CliError> {
    let (m, geom) = model(cfg)?;
    let radius = match cfg.geometry {
        Geometry::FiniteBall { radius } => Some(radius),
        Geometry::SemiInfinite { .. } => None,
    };
    let verdict = stability_threshold(&m, geom.as_ref(), radius);
    let mut second_variations = Vec::new();
    if let Some(r) = radius {
        let p = solve(cfg, &m)?;
        for f in Family::BALL {
            let a = BiaxialPerturbation::new(f, r)?;
            for d in [TensorDirection::Uniform, TensorDirection::Radial] {
                let v = second_variation_general(&a, d, &p, &m, r)?;
                second_variations.push(FamilyVariation {
                    family: f.name(),
                    positive: v.value > 0.0,
                    value: v,
                });
            }
        }
    }
    emit(
        cfg,
        prov,
        &StabilityReport {
            verdict,
            second_variations,
        },
        None,
    )
}

fn cmd_map(cfg: &RunConfig, prov: &Provenance, t_grid: &[f64], r_grid: &[f64], workers: usize, sigma: f64) -> Result<(), CliError> {
    let opts = MapOptions {
        workers,
        sigma,
        solver: cfg.tolerances.solver_options(),
        ..Default::default()
    };
    let cells = stability_map(t_grid, r_grid, &opts)?;
    let csv = map_csv(&cells, &prov.lines());
    emit(cfg, prov, &cells, Some(csv))
}

fn cmd_residual(cfg: &RunConfig, prov: &Provenance, samples: &[f64], spacing: f64) -> Result<(), CliError> {
    let (m, _) = model(cfg)?;
    let p = solve(cfg, &m)?;
    emit(cfg, prov, &tensor_residual(&p, &m, samples, spacing)?, None)
}

fn run(cli: Cli) -> Result<(), CliError> {
    let (name, default_format, params) = match &cli.command {
        Command::Params => ("params", Format::Json, json!({})),
        Command::Solve => ("solve", Format::Csv, json!({})),
        Command::Shoot { a2 } => ("shoot", Format::Json, json!({ "a2": a2 })),
        Command::Energy => ("energy", Format::Json, json!({})),
        Command::Verify => ("verify", Format::Table, json!({})),
        Command::Biaxial {
            sigma,
            family,
            shell_inner,
            epsilon,
            panels,
        } => (
            "biaxial",
            Format::Json,
            json!({ "sigma": sigma, "family": family, "shell_inner": shell_inner, "epsilon": epsilon, "panels": panels }),
        ),
        Command::Stability => ("stability", Format::Json, json!({})),
        Command::Map {
            t_grid,
            r_grid,
            workers,
            sigma,
        } => (
            "map",
            Format::Csv,
            // worker count does not change the result, so it stays out of the hash
            {
                let _ = workers;
                json!({ "t_grid": t_grid, "r_grid": r_grid, "sigma": sigma })
            },
        ),
        Command::Residual { samples, spacing } => (
            "residual",
            Format::Json,
            json!({ "samples": samples, "spacing": spacing }),
        ),
    };
    let needs_model = !matches!(cli.command, Command::Map { .. });
    let cfg = if needs_model {
        RunConfig::resolve(name, &cli.common, default_format, params)?
    } else {
        let mut common = cli.common.clone();
        common.t = common.t.or(Some(f64::NAN));
        RunConfig::resolve(name, &common, default_format, params)?
    };
    let prov = Provenance::new(&cfg)?;
    match cli.command {
        Command::Params => cmd_params(&cfg, &prov),
        Command::Solve => cmd_solve(&cfg, &prov),
        Command::Shoot { a2 } => cmd_shoot(&cfg, &prov, a2),
        Command::Energy => cmd_energy(&cfg, &prov),
        Command::Verify => cmd_verify(&cfg, &prov),
        Command::Biaxial {
            sigma,
            family,
            shell_inner,
            epsilon,
            panels,
        } => {
            let pert = perturbation(&family, sigma, shell_inner)?.scaled(epsilon);
            cmd_biaxial(&cfg, &prov, pert, panels)
        }
        Command::Stability => cmd_stability(&cfg, &prov),
        Command::Map {
            t_grid,
            r_grid,
            workers,
            sigma,
        } => cmd_map(&cfg, &prov, &t_grid, &r_grid, workers, sigma),
        Command::Residual { samples, spacing } => cmd_residual(&cfg, &prov, &samples, spacing),
    }
}

#[derive(Serialize)]
struct ErrorDoc<'a> {
    error: ErrorBody<'a>,
}

#[derive(Serialize)]
struct ErrorBody<'a> {
    kind: &'a str,
    code: u8,
    message: String,
}

fn report_error(kind: &str, code: u8, message: String) -> ExitCode {
    let doc = ErrorDoc {
        error: ErrorBody { kind, code, message },
    };
    match to_json(&doc) {
        Ok(s) => eprint!("{s}"),
        Err(_) => eprintln!("{}", doc.error.message),
    }
    ExitCode::from(code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            return report_error("validation", 1, e.render().to_string().trim_end().to_string());
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => report_error(e.kind(), e.code(), e.to_string()),
    }
}
