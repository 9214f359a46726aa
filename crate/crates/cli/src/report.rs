use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context as _, Result};
use serde::Serialize;
use serde_json::Value;
use uncertainty_core::inequalities::{CellStatus, SweepRow};
use uncertainty_core::{ConstantsF64, Param, Verdict, VerdictF64};

use crate::args::{Format, Mutation, Units};
use crate::settings::Settings;

pub const EXIT_OK: u8 = 0;
pub const EXIT_ERROR: u8 = 1;
pub const EXIT_VIOLATION: u8 = 2;
pub const EXIT_DIVERGENT: u8 = 3;

/// What a subcommand hands back for emission.
#[derive(Debug, Default)]
pub struct Run {
    pub results: Vec<VerdictF64>,
    pub report: Value,
    /// Required moments that diverged.
    pub divergent: Vec<String>,
    /// Checks that could not be evaluated.
    pub failed: Vec<String>,
    /// Sweep rows, for the CSV layout.
    pub rows: Option<Vec<SweepRow<f64>>>,
}

/// Conversion of emitted quantities out of natural units.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct UnitSystem {
    pub system: Units,
    pub action: f64,
    pub length: f64,
    pub energy: f64,
    pub action_label: &'static str,
    pub length_label: &'static str,
    pub energy_label: &'static str,
}

impl UnitSystem {
    pub fn new(units: Units, run: &ConstantsF64) -> Self {
        match units {
            Units::Natural => Self {
                system: units,
                action: 1.0,
                length: 1.0,
                energy: 1.0,
                action_label: "hbar",
                length_label: "a0",
                energy_label: "hbar^2/(m a0^2)",
            },
            Units::Si => {
                let si = ConstantsF64::si();
                Self {
                    system: units,
                    action: si.hbar / run.hbar,
                    length: si.a0 / run.a0,
                    energy: si.energy_unit() / run.energy_unit(),
                    action_label: "J s",
                    length_label: "m",
                    energy_label: "J",
                }
            }
        }
    }
}

/// Multiplies the dimensional fields of a verdict by `factor`.
pub fn rescale(v: &mut VerdictF64, factor: f64, unit: &str) {
    if factor == 1.0 {
        return;
    }
    v.lhs *= factor;
    v.rhs *= factor;
    v.margin *= factor;
    v.slack *= factor;
    v.inputs.insert("unit".into(), unit.to_string().into());
}

/// Applies a fault injection to a fresh verdict.
pub fn judge(v: &mut VerdictF64, mutate: Option<Mutation>) {
    if let Some(Mutation::Flip) = mutate {
        v.holds = v.rhs <= v.lhs + v.slack;
    }
}

#[derive(Debug, Serialize)]
pub struct CheckOutcome {
    pub label: String,
    pub status: &'static str,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub inputs: BTreeMap<String, Param>,
}

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: Vec<String>,
    pub version: &'static str,
    pub timestamp: String,
    pub seed: u64,
    pub settings: Settings,
    pub units: UnitSystem,
    pub outcomes: Vec<CheckOutcome>,
    pub exit_code: u8,
}

#[derive(Serialize)]
struct JsonOutput<'a> {
    manifest: &'a RunManifest,
    results: &'a [VerdictF64],
    report: &'a Value,
}

pub fn exit_code(run: &Run, allow_divergent: bool) -> u8 {
    if !run.failed.is_empty() {
        EXIT_ERROR
    } else if run.results.iter().any(|v| !v.holds) {
        EXIT_VIOLATION
    } else if !run.divergent.is_empty() && !allow_divergent {
        EXIT_DIVERGENT
    } else {
        EXIT_OK
    }
}

fn outcomes(run: &Run) -> Vec<CheckOutcome> {
    let mut out: Vec<CheckOutcome> = run
        .results
        .iter()
        .map(|v| CheckOutcome {
            label: v.label.clone(),
            status: match (v.holds, v.is_internal_error()) {
                (true, _) => "holds",
                (false, false) => "violated",
                (false, true) => "internal_error",
            },
            inputs: v.inputs.clone(),
        })
        .collect();
    out.extend(run.divergent.iter().map(|l| CheckOutcome { label: l.clone(), status: "divergent", inputs: BTreeMap::new() }));
    out.extend(run.failed.iter().map(|l| CheckOutcome { label: l.clone(), status: "failed", inputs: BTreeMap::new() }));
    out
}

pub fn manifest(run: &Run, settings: &Settings, units: UnitSystem, exit_code: u8) -> RunManifest {
    RunManifest {
        command: std::env::args().collect(),
        version: env!("CARGO_PKG_VERSION"),
        timestamp: chrono::Utc::now().to_rfc3339(),
        seed: settings.seed,
        settings: settings.clone(),
        units,
        outcomes: outcomes(run),
        exit_code,
    }
}

/// Writes the run in the requested format. CSV output puts the manifest in a
/// sibling `<out>.manifest.json`, or on stderr when writing to stdout.
pub fn emit(run: &Run, m: &RunManifest, format: Format, out: Option<&Path>) -> Result<()> {
    match format {
        Format::Json => {
            let mut text = serde_json::to_string_pretty(&JsonOutput { manifest: m, results: &run.results, report: &run.report })?;
            text.push('\n');
            write_to(out, text.as_bytes())
        }
        Format::Csv => {
            let body = match &run.rows {
                Some(rows) => sweep_csv(rows)?,
                None => verdict_csv(&run.results)?,
            };
            write_to(out, &body)?;
            let mut text = serde_json::to_string_pretty(m)?;
            text.push('\n');
            match out {
                Some(p) => write_to(Some(&manifest_path(p)), text.as_bytes()),
                None => io::stderr().write_all(text.as_bytes()).context("writing manifest"),
            }
        }
    }
}

pub fn manifest_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".manifest.json");
    PathBuf::from(s)
}

fn write_to(out: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match out {
        Some(p) => fs::write(p, bytes).with_context(|| format!("writing {}", p.display())),
        None => io::stdout().write_all(bytes).context("writing stdout"),
    }
}

fn num(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

fn sweep_csv(rows: &[SweepRow<f64>]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["p", "q", "r_star", "lhs", "rhs", "ratio", "holds", "status"])?;
    for r in rows {
        w.write_record([
            r.p.to_string(),
            r.q.to_string(),
            r.r_star.to_string(),
            num(r.lhs),
            num(r.rhs),
            num(r.ratio),
            r.holds.map(|h| h.to_string()).unwrap_or_default(),
            r.status.as_str().to_string(),
        ])?;
    }
    Ok(w.into_inner()?)
}

fn verdict_csv(results: &[Verdict<f64>]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["label", "lhs", "rhs", "ratio", "margin", "holds", "slack"])?;
    for v in results {
        w.write_record([
            v.label.clone(),
            v.lhs.to_string(),
            v.rhs.to_string(),
            num(v.ratio),
            v.margin.to_string(),
            v.holds.to_string(),
            v.slack.to_string(),
        ])?;
    }
    Ok(w.into_inner()?)
}

/// Status of a sweep row after its verdict was judged.
pub fn row_status(holds: bool) -> CellStatus {
    if holds {
        CellStatus::Holds
    } else {
        CellStatus::Violated
    }
}
