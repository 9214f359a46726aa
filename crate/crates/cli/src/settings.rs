use std::fs;
use std::path::Path;

use anyhow::{bail, Context as _, Result};
use serde::{Deserialize, Serialize};
use uncertainty_core::quad::Quadrature;
use uncertainty_core::{ConstantsF64 as Constants, PhysicalConstants, SlackPolicy};

use crate::args::{Cli, Format, Units};

/// Everything a run depends on besides the subcommand arguments.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Settings {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_evals: usize,
    pub slack: f64,
    pub seed: u64,
    pub allow_divergent: bool,
    pub units: Units,
    pub format: Format,
    pub constants: ConstantsFile,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstantsFile {
    pub hbar: f64,
    pub mass: f64,
    pub a0: f64,
}

/// Config file contents; every key optional.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct Partial {
    rel_tol: Option<f64>,
    abs_tol: Option<f64>,
    max_evals: Option<usize>,
    slack: Option<f64>,
    seed: Option<u64>,
    allow_divergent: Option<bool>,
    units: Option<Units>,
    format: Option<Format>,
    constants: Option<ConstantsFile>,
}

impl Default for Settings {
    fn default() -> Self {
        let q = Quadrature::<f64>::default();
        let c = Constants::natural();
        Self {
            rel_tol: q.rel_tol,
            abs_tol: q.abs_tol,
            max_evals: q.max_evals,
            slack: SlackPolicy::<f64>::default().rel,
            seed: 0,
            allow_divergent: false,
            units: Units::Natural,
            format: Format::Json,
            constants: ConstantsFile { hbar: c.hbar, mass: c.mass, a0: c.a0 },
        }
    }
}

impl Settings {
    /// Defaults, then the config file, then command-line flags.
    pub fn resolve(cli: &Cli) -> Result<Self> {
        let mut s = Settings::default();
        if let Some(path) = &cli.config {
            s.apply(load_partial(path)?);
        }
        s.apply(Partial {
            rel_tol: cli.rel_tol,
            abs_tol: cli.abs_tol,
            max_evals: cli.max_evals,
            slack: cli.slack,
            seed: cli.seed,
            allow_divergent: cli.allow_divergent.then_some(true),
            units: cli.units,
            format: cli.format,
            constants: None,
        });
        s.validate()?;
        Ok(s)
    }

    fn apply(&mut self, p: Partial) {
        macro_rules! set {
            ($($f:ident),*) => { $(if let Some(v) = p.$f { self.$f = v; })* };
        }
        set!(rel_tol, abs_tol, max_evals, slack, seed, allow_divergent, units, format, constants);
    }

    fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol.is_finite() && self.abs_tol > 0.0 && self.abs_tol.is_finite()) {
            bail!("tolerances must be positive and finite");
        }
        if self.max_evals < 21 {
            bail!("evaluation budget must allow at least one panel (21 evaluations)");
        }
        SlackPolicy::new(self.slack)?;
        let c = self.physical_constants()?;
        if self.units == Units::Si && c != Constants::natural() {
            bail!("--units si converts from natural units; it cannot be combined with custom constants");
        }
        Ok(())
    }

    pub fn physical_constants(&self) -> Result<Constants> {
        let c = self.constants;
        Ok(PhysicalConstants::new(c.hbar, c.mass, c.a0)?)
    }

    pub fn quadrature(&self) -> Quadrature<f64> {
        Quadrature::new(self.rel_tol, self.abs_tol).with_budget(self.max_evals)
    }

    pub fn policy(&self) -> SlackPolicy<f64> {
        SlackPolicy { rel: self.slack }
    }
}

/// Reads a settings file. A run manifest (or a full run output holding one)
/// is accepted too, so a run can be replayed from its own record.
fn load_partial(path: &Path) -> Result<Partial> {
    let text = fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
    let mut v: serde_json::Value = serde_json::from_str(&text).with_context(|| format!("parsing config {}", path.display()))?;
    if let Some(m) = v.get_mut("manifest") {
        v = m.take();
    }
    if let Some(s) = v.get_mut("settings") {
        v = s.take();
    }
    serde_json::from_value(v).with_context(|| format!("invalid config {}", path.display()))
}
