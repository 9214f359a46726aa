use std::fs;

use anyhow::{bail, Context as _, Result};
use uncertainty_core::inequalities::{DivergenceReport, Outcome};
use uncertainty_core::quad::Quadrature;
use uncertainty_core::states::{
    Axis, ContinuousState, GaussianPacket, GridOptions, HarmonicOscillatorGround, HydrogenGroundState, RadialGridState,
    SlaterState, StateView,
};
use uncertainty_core::{ConstantsF64, SlackPolicy, VerdictF64};

use crate::args::Mutation;
use crate::report::{judge, Run, UnitSystem};
use crate::settings::Settings;

pub mod central;
pub mod finite;
pub mod holder;
pub mod hydrogen;
pub mod sweep;

/// Largest exponent accepted on the command line.
pub const MAX_EXPONENT: f64 = 64.0;
/// Smallest moment order accepted on the command line.
pub const MIN_ORDER: f64 = 0.05;

pub struct Ctx {
    pub settings: Settings,
    pub quad: Quadrature<f64>,
    pub policy: SlackPolicy<f64>,
    pub constants: ConstantsF64,
    pub units: UnitSystem,
    pub mutate: Option<Mutation>,
}

impl Ctx {
    pub fn new(settings: Settings, mutate: Option<Mutation>) -> Result<Self> {
        let constants = settings.physical_constants()?;
        Ok(Self {
            quad: settings.quadrature(),
            policy: settings.policy(),
            units: UnitSystem::new(settings.units, &constants),
            constants,
            settings,
            mutate,
        })
    }

    pub fn judged(&self, mut v: VerdictF64) -> VerdictF64 {
        judge(&mut v, self.mutate);
        v
    }
}

pub fn check_order(name: &str, v: f64) -> Result<()> {
    if !v.is_finite() || !(MIN_ORDER..=MAX_EXPONENT).contains(&v) {
        bail!("{name} must lie in [{MIN_ORDER}, {MAX_EXPONENT}], got {v}");
    }
    Ok(())
}

/// Unset axes default to z, or to the only axis of a line state.
pub fn axes(state: &dyn ContinuousState<f64>, axis: Option<Axis>, i: Option<Axis>, j: Option<Axis>) -> (Axis, Axis) {
    let fallback = match state.view() {
        StateView::Line(_) => Axis::X,
        StateView::Spherical(_) => Axis::Z,
    };
    match axis {
        Some(a) => (a, a),
        None => (i.unwrap_or(fallback), j.unwrap_or(fallback)),
    }
}

/// `hydrogen`, `r4test`, `qho`, `gaussian` or `grid:PATH`.
pub fn load_state(spec: &str, c: ConstantsF64, origin_power: Option<f64>) -> Result<Box<dyn ContinuousState<f64>>> {
    Ok(match spec {
        "hydrogen" => Box::new(HydrogenGroundState::from_constants(c)),
        "r4test" => Box::new(SlaterState::new(4, 1.0 / c.a0, c)?),
        "qho" => Box::new(HarmonicOscillatorGround::new(1.0, c)?),
        "gaussian" => Box::new(GaussianPacket::new(0.0, 0.0, c.a0, c)?),
        s if s.starts_with("grid:") => {
            let path = &s["grid:".len()..];
            let text = fs::read_to_string(path).with_context(|| format!("reading radial grid {path}"))?;
            let options = GridOptions { origin_power, constants: c, label: Some(path.to_string()), ..GridOptions::default() };
            Box::new(RadialGridState::from_text(&text, options)?)
        }
        other => bail!("unknown state {other:?} (expected hydrogen, r4test, qho, gaussian or grid:PATH)"),
    })
}

/// Moves a checked verdict or a divergence into the run.
pub fn absorb(run: &mut Run, ctx: &Ctx, outcome: Outcome<f64>, factor: f64, unit: &str) -> Option<DivergenceReport<f64>> {
    match outcome {
        Outcome::Checked(mut v) => {
            crate::report::rescale(&mut v, factor, unit);
            run.results.push(ctx.judged(v));
            None
        }
        Outcome::Divergent(rep) => {
            run.divergent.extend(rep.divergent.iter().map(|m| format!("{}: {}", rep.label, m.name)));
            Some(rep)
        }
    }
}
