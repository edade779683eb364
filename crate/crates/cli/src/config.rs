//! Run configuration: command-line flags merged over an optional TOML file.

use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use hedgehog_core::{PhysicalParams, SolverOptions};
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Default truncation radius of the semi-infinite problem.
pub const DEFAULT_R_MAX: f64 = 50.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Table,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Table => "txt",
        }
    }
}

/// Model, geometry, tolerance and output flags shared by every subcommand.
#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// TOML file with the same keys as the flags; flags take precedence.
    #[arg(long, value_name = "PATH", global = true)]
    pub config: Option<PathBuf>,
    /// Reduced temperature (must exceed 1 unless --relaxed).
    #[arg(long, global = true)]
    pub t: Option<f64>,
    /// Thermotropic coefficient a^2 in N/m^2.
    #[arg(long = "phys-a2", value_name = "N/M2", global = true)]
    pub phys_a2: Option<f64>,
    /// Cubic coefficient b^2 in N/m^2.
    #[arg(long = "phys-b2", value_name = "N/M2", global = true)]
    pub phys_b2: Option<f64>,
    /// Quartic coefficient c^2 in N/m^2.
    #[arg(long = "phys-c2", value_name = "N/M2", global = true)]
    pub phys_c2: Option<f64>,
    /// Elastic constant L in N.
    #[arg(long = "phys-l", value_name = "N", global = true)]
    pub phys_l: Option<f64>,
    /// Droplet radius in metres.
    #[arg(long = "r-real", value_name = "M", global = true)]
    pub r_real: Option<f64>,
    /// Accept t = 1 as a boundary probe.
    #[arg(long, global = true)]
    pub relaxed: bool,
    /// Ball radius in reduced units (finite-ball problem).
    #[arg(long, global = true, conflicts_with = "semi_infinite")]
    pub radius: Option<f64>,
    /// Whole-space problem truncated at --r-max.
    #[arg(long, global = true)]
    pub semi_infinite: bool,
    /// Truncation radius of the semi-infinite problem.
    #[arg(long, global = true)]
    pub r_max: Option<f64>,
    /// Integrator tolerance.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Absolute bracket width on the core amplitude.
    #[arg(long, global = true)]
    pub bisection_tol: Option<f64>,
    /// Radius where the core series hands over to the integrator.
    #[arg(long, global = true)]
    pub launch_radius: Option<f64>,
    /// Highest power kept in the core series.
    #[arg(long, global = true)]
    pub series_order: Option<usize>,
    /// Output grid spacing.
    #[arg(long, global = true)]
    pub grid_spacing: Option<f64>,
    /// Output format.
    #[arg(long, value_enum, global = true)]
    pub format: Option<Format>,
    /// Output file; defaults to standard output, or to
    /// $HEDGEHOG_OUT_DIR/<command>.<ext> when that variable is set.
    #[arg(long, value_name = "PATH", global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    t: Option<f64>,
    relaxed: Option<bool>,
    physical: Option<FilePhysical>,
    geometry: Option<FileGeometry>,
    tolerances: Option<FileTolerances>,
    output: Option<FileOutput>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FilePhysical {
    a2: Option<f64>,
    b2: Option<f64>,
    c2: Option<f64>,
    #[serde(rename = "L")]
    l: Option<f64>,
    #[serde(rename = "R_real")]
    r_real: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileGeometry {
    radius: Option<f64>,
    semi_infinite: Option<bool>,
    r_max: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileTolerances {
    integrator: Option<f64>,
    bisection: Option<f64>,
    launch_radius: Option<f64>,
    series_order: Option<usize>,
    grid_spacing: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileOutput {
    format: Option<Format>,
    path: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Geometry {
    FiniteBall { radius: f64 },
    SemiInfinite { r_max: f64 },
}

impl Geometry {
    pub fn end(&self) -> f64 {
        match *self {
            Geometry::FiniteBall { radius } => radius,
            Geometry::SemiInfinite { r_max } => r_max,
        }
    }
}

/// Where the temperature came from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelInput {
    Temperature { t: f64 },
    Physical { physical: PhysicalParams },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    pub integrator: f64,
    pub bisection: f64,
    pub launch_radius: f64,
    pub series_order: usize,
    pub grid_spacing: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        let o = SolverOptions::default();
        Self {
            integrator: o.shooting.tol,
            bisection: o.bisection_tol,
            launch_radius: o.shooting.launch_radius,
            series_order: o.shooting.series_order,
            grid_spacing: o.grid_spacing,
        }
    }
}

impl Tolerances {
    pub fn solver_options(&self) -> SolverOptions {
        let mut o = SolverOptions::default();
        o.shooting.tol = self.integrator;
        o.shooting.launch_radius = self.launch_radius;
        o.shooting.series_order = self.series_order;
        o.bisection_tol = self.bisection;
        o.grid_spacing = self.grid_spacing;
        o
    }
}

/// Fully resolved inputs of one run; hashed into the provenance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: String,
    pub model: ModelInput,
    /// Physical constants that accompany an explicit temperature.
    pub physical: Option<PhysicalParams>,
    pub relaxed: bool,
    pub geometry: Geometry,
    pub tolerances: Tolerances,
    pub format: Format,
    /// Command-specific parameters.
    pub params: serde_json::Value,
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

fn load_file(path: &Path) -> Result<FileConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Validation(format!("cannot read config {}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| CliError::Validation(format!("config {}: {e}", path.display())))
}

fn positive(name: &str, v: f64) -> Result<f64, CliError> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(CliError::Validation(format!("{name} must be positive and finite, got {v}")))
    }
}

impl RunConfig {
    pub fn resolve(
        command: &str,
        args: &CommonArgs,
        default_format: Format,
        params: serde_json::Value,
    ) -> Result<Self, CliError> {
        let file = match &args.config {
            Some(p) => load_file(p)?,
            None => FileConfig::default(),
        };
        let fp = file.physical.clone().unwrap_or_default();
        let phys_parts = [
            args.phys_a2.or(fp.a2),
            args.phys_b2.or(fp.b2),
            args.phys_c2.or(fp.c2),
            args.phys_l.or(fp.l),
            args.r_real.or(fp.r_real),
        ];
        let physical = if phys_parts.iter().all(Option::is_none) {
            None
        } else if let [Some(a2), Some(b2), Some(c2), Some(l), Some(r_real)] = phys_parts {
            let p = PhysicalParams { a2, b2, c2, l, r_real };
            p.validate().map_err(|e| CliError::Validation(e.to_string()))?;
            Some(p)
        } else {
            return Err(CliError::Validation(
                "the physical block needs all of a2, b2, c2, L and R_real".into(),
            ));
        };
        let t = args.t.or(file.t);
        let (model, physical) = match (t, physical) {
            (Some(t), p) => (ModelInput::Temperature { t }, p),
            (None, Some(p)) => (ModelInput::Physical { physical: p }, None),
            (None, None) => {
                return Err(CliError::Validation(
                    "no model given: pass --t or the physical constants".into(),
                ))
            }
        };

        let fg = file.geometry.clone().unwrap_or_default();
        let (radius, semi) = if args.radius.is_some() || args.semi_infinite {
            (args.radius, args.semi_infinite)
        } else {
            (fg.radius, fg.semi_infinite.unwrap_or(false))
        };
        let r_max = args.r_max.or(fg.r_max).unwrap_or(DEFAULT_R_MAX);
        let geometry = match (radius, semi) {
            (Some(_), true) => {
                return Err(CliError::Validation(
                    "choose either a ball radius or the semi-infinite problem, not both".into(),
                ))
            }
            (Some(r), false) => Geometry::FiniteBall {
                radius: positive("radius", r)?,
            },
            (None, _) => Geometry::SemiInfinite {
                r_max: positive("r_max", r_max)?,
            },
        };

        let ft = file.tolerances.clone().unwrap_or_default();
        let d = Tolerances::default();
        let tolerances = Tolerances {
            integrator: positive("tol", args.tol.or(ft.integrator).unwrap_or(d.integrator))?,
            bisection: positive(
                "bisection_tol",
                args.bisection_tol.or(ft.bisection).unwrap_or(d.bisection),
            )?,
            launch_radius: positive(
                "launch_radius",
                args.launch_radius.or(ft.launch_radius).unwrap_or(d.launch_radius),
            )?,
            series_order: args.series_order.or(ft.series_order).unwrap_or(d.series_order),
            grid_spacing: positive(
                "grid_spacing",
                args.grid_spacing.or(ft.grid_spacing).unwrap_or(d.grid_spacing),
            )?,
        };
        if tolerances.series_order < 4 || !tolerances.series_order.is_multiple_of(2) {
            return Err(CliError::Validation(format!(
                "series_order must be an even integer of at least 4, got {}",
                tolerances.series_order
            )));
        }

        let fo = file.output.clone().unwrap_or_default();
        Ok(Self {
            command: command.to_string(),
            model,
            physical,
            relaxed: args.relaxed || file.relaxed.unwrap_or(false),
            geometry,
            tolerances,
            format: args.format.or(fo.format).unwrap_or(default_format),
            params,
            out: args.out.clone().or(fo.path),
        })
    }
}
