use anyhow::{bail, Result};
use serde_json::{json, Value};
use uncertainty_core::centralfield::{
    bound_threshold_negative_root, bound_threshold_radius, buckingham_bound, ground_energy_estimate,
    lennard_jones_mean, reciprocal_energy_form, threshold_coefficient, threshold_residual, virial_report,
    BuckinghamPotential, LennardJonesPotential, PowerLawPotential,
};
use uncertainty_core::moments::{raw_moment, Observable};
use uncertainty_core::{Error, MomentValueF64, Verdict};

use super::{check_order, load_state, Ctx};
use crate::args::CentralArgs;
use crate::report::{rescale, Run};

/// Splits a divergence out of a library result.
fn soft<T>(r: uncertainty_core::Result<T>, run: &mut Run, what: &str) -> Result<Option<T>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::Divergent { label }) => {
            run.divergent.push(format!("{what}: {label}"));
            Ok(None)
        }
        Err(e) => Err(e.into()),
    }
}

fn scaled(m: &MomentValueF64, k: f64) -> MomentValueF64 {
    m.map(k, |v| v * k)
}

pub fn run(a: &CentralArgs, ctx: &Ctx) -> Result<Run> {
    if a.state == "qho" || a.state == "gaussian" {
        bail!("central needs a spherically symmetric state, got {}", a.state);
    }
    check_order("alpha", a.alpha)?;
    let state = load_state(&a.state, ctx.constants, a.origin_power)?;
    let s = state.as_ref();
    let (c, q) = (&ctx.constants, &ctx.quad);
    let (energy, length) = (ctx.units.energy, ctx.units.length);
    let v = PowerLawPotential::new(a.alpha, a.beta)?;
    let mut run = Run::default();
    let mut report = json!({ "state": a.state, "alpha": a.alpha, "beta": a.beta });

    if let Some(rep) = soft(virial_report(s, &v, c, q), &mut run, "virial")? {
        report["virial"] = json!({
            "mean_t": rep.mean_t * energy,
            "mean_v": rep.mean_v * energy,
            "total_e": rep.total_e * energy,
            "virial_residual": rep.virial_residual,
            "e_formula": rep.e_formula * energy,
        });
    }

    let r1 = raw_moment(s, &Observable::Radial, 1.0, q)?.value_or_err("<r>")?;
    let r2 = raw_moment(s, &Observable::Radial, 2.0, q)?.value_or_err("<r^2>")?;
    let delta_r2 = r2 - r1 * r1;
    let inv = raw_moment(s, &Observable::RadialInverse, a.alpha, q)?;
    let fwd = raw_moment(s, &Observable::Radial, a.alpha, q)?;
    report["radial"] = json!({
        "mean_r": r1 * length,
        "mean_r2": r2 * length * length,
        "delta_r2": delta_r2 * length * length,
        "mean_r_inv_alpha": scaled(&inv, length.powf(-a.alpha)),
        "mean_r_alpha": scaled(&fwd, length.powf(a.alpha)),
    });
    let estimate = soft(ground_energy_estimate(delta_r2, &inv, &v, c), &mut run, "energy estimate")?;
    let reciprocal = reciprocal_energy_form(delta_r2, &fwd, &v, c)?;
    report["energy"] = json!({
        "estimate": estimate.map(|e| e * energy),
        "reciprocal_form": reciprocal * energy,
    });
    if let Some(est) = estimate {
        let mut vd = Verdict::with_policy("energy-reciprocal", est, reciprocal, &ctx.policy).guaranteed().number("alpha", a.alpha);
        rescale(&mut vd, energy, ctx.units.energy_label);
        run.results.push(ctx.judged(vd));
    }

    if a.alpha == 1.0 {
        let b = threshold_coefficient(&v, c);
        let root = bound_threshold_radius(r2, b)?;
        report["threshold"] = json!({
            "b": b / length,
            "root": root * length,
            "negative_root": bound_threshold_negative_root(r2, b)? * length,
            "residual": threshold_residual(root, r2, b) * length,
            "mean_r": r1 * length,
        });
    }

    if let Some(p) = &a.buckingham {
        if p.len() != 3 {
            bail!("--buckingham takes gamma,r0,sigma");
        }
        let pot = BuckinghamPotential::new(p[0], p[1], p[2])?;
        let rep = buckingham_bound(s, &pot, q)?;
        report["buckingham"] = json!({
            "bound": rep.bound * energy,
            "actual": scaled(&rep.actual, energy),
            "gap": rep.gap.map(|g| g * energy),
            "consistent": rep.consistent,
        });
        match rep.actual.value.filter(|_| rep.actual.is_convergent()) {
            Some(actual) => {
                let mut vd = Verdict::with_policy("buckingham", actual, rep.bound, &ctx.policy)
                    .guaranteed()
                    .number("gamma", p[0])
                    .number("r0", p[1])
                    .number("sigma", p[2]);
                rescale(&mut vd, energy, ctx.units.energy_label);
                run.results.push(ctx.judged(vd));
            }
            None if rep.actual.is_divergent() => run.divergent.push("buckingham: <r^-6>".into()),
            None => run.failed.push("buckingham".into()),
        }
    }

    if let Some(p) = &a.lj {
        if p.len() != 2 {
            bail!("--lj takes epsilon,sigma");
        }
        let pot = LennardJonesPotential::new(p[0], p[1])?;
        let mean = lennard_jones_mean(s, &pot, q)?;
        if mean.is_divergent() {
            run.divergent.push(format!("lennard-jones: {}", mean.note.clone().unwrap_or_default()));
        } else if !mean.is_convergent() {
            run.failed.push("lennard-jones".into());
        }
        report["lennard_jones"] = json!({ "mean": scaled(&mean, energy) });
    }

    report["energy_unit"] = Value::from(ctx.units.energy_label);
    report["length_unit"] = Value::from(ctx.units.length_label);
    run.report = report;
    Ok(run)
}
