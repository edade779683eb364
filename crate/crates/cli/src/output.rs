//! Provenance and emission of results.

use std::path::{Path, PathBuf};

use hedgehog_core::io::to_json;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::{Format, RunConfig, Tolerances};
use crate::CliError;

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "HEDGEHOG_OUT_DIR";

#[derive(Debug, Clone, Serialize)]
pub struct Provenance {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub config_sha256: String,
    pub tolerances: Tolerances,
}

impl Provenance {
    pub fn new(cfg: &RunConfig) -> Result<Self, CliError> {
        let canonical = to_json(cfg).map_err(CliError::Solver)?;
        let digest = Sha256::digest(canonical.as_bytes());
        Ok(Self {
            tool: "hedgehog",
            version: env!("CARGO_PKG_VERSION"),
            command: cfg.command.clone(),
            config_sha256: hex::encode(digest),
            tolerances: cfg.tolerances,
        })
    }

    /// Comment lines for CSV and table output.
    pub fn lines(&self) -> Vec<String> {
        let t = &self.tolerances;
        vec![
            format!("{} {} {}", self.tool, self.version, self.command),
            format!("config_sha256: {}", self.config_sha256),
            format!(
                "tolerances: integrator={:e} bisection={:e} launch_radius={:e} series_order={} grid_spacing={:e}",
                t.integrator, t.bisection, t.launch_radius, t.series_order, t.grid_spacing
            ),
        ]
    }
}

/// JSON document with provenance next to the result.
#[derive(Serialize)]
pub struct Document<'a, T: Serialize> {
    pub provenance: &'a Provenance,
    pub result: &'a T,
}

pub fn json_document<T: Serialize>(prov: &Provenance, result: &T) -> Result<String, CliError> {
    to_json(&Document {
        provenance: prov,
        result,
    })
    .map_err(CliError::Solver)
}

/// Destination of the main output, if not standard output.
pub fn destination(cfg: &RunConfig) -> Option<PathBuf> {
    if let Some(p) = &cfg.out {
        return Some(p.clone());
    }
    std::env::var_os(OUT_DIR_ENV)
        .filter(|d| !d.is_empty())
        .map(|d| Path::new(&d).join(format!("{}.{}", cfg.command, cfg.format.extension())))
}

pub fn write(dest: Option<&Path>, text: &str) -> Result<(), CliError> {
    match dest {
        Some(p) => {
            if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir)
                    .map_err(|e| CliError::Io(format!("cannot create {}: {e}", dir.display())))?;
            }
            std::fs::write(p, text).map_err(|e| CliError::Io(format!("cannot write {}: {e}", p.display())))
        }
        None => {
            use std::io::Write;
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| CliError::Io(format!("stdout: {e}")))
        }
    }
}

/// Plain two-column table with provenance comments.
pub fn table(prov: &Provenance, rows: &[(String, String)]) -> String {
    let mut out = String::new();
    for l in prov.lines() {
        out.push_str("# ");
        out.push_str(&l);
        out.push('\n');
    }
    let w = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    for (k, v) in rows {
        out.push_str(&format!("{k:<w$}  {v}\n"));
    }
    out
}

/// Flatten a JSON value into `path = value` rows.
pub fn flatten(prefix: &str, v: &serde_json::Value, rows: &mut Vec<(String, String)>) {
    match v {
        serde_json::Value::Object(map) => {
            for (k, x) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, x, rows);
            }
        }
        serde_json::Value::Array(a) if a.len() > 8 => rows.push((prefix.to_string(), format!("[{} values]", a.len()))),
        serde_json::Value::Array(a) => {
            for (i, x) in a.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), x, rows);
            }
        }
        other => rows.push((prefix.to_string(), other.to_string())),
    }
}

/// Emit `result` in the configured format; `csv` must be supplied for
/// commands with a tabular CSV form.
pub fn emit<T: Serialize>(cfg: &RunConfig, prov: &Provenance, result: &T, csv: Option<String>) -> Result<(), CliError> {
    let text = match cfg.format {
        Format::Json => json_document(prov, result)?,
        Format::Csv => csv.ok_or_else(|| {
            CliError::Validation(format!("{} has no CSV form; use json or table", cfg.command))
        })?,
        Format::Table => {
            let doc = to_json(result).map_err(CliError::Solver)?;
            let v: serde_json::Value =
                serde_json::from_str(&doc).map_err(|e| CliError::Io(e.to_string()))?;
            let mut rows = Vec::new();
            flatten("", &v, &mut rows);
            table(prov, &rows)
        }
    };
    write(destination(cfg).as_deref(), &text)
}
