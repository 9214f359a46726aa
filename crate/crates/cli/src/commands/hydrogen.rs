use anyhow::Result;
use serde_json::json;
use uncertainty_core::inequalities::uncertainty_verdict_canonical;
use uncertainty_core::make_exponents;
use uncertainty_core::states::HydrogenGroundState;

use super::{absorb, axes, check_order, Ctx};
use crate::args::HydrogenArgs;
use crate::report::Run;

pub fn run(a: &HydrogenArgs, ctx: &Ctx) -> Result<Run> {
    check_order("p", a.p)?;
    check_order("q", a.q)?;
    let e = make_exponents(a.p, a.q)?;
    let state = HydrogenGroundState::from_constants(ctx.constants);
    let (i, j) = axes(&state, a.axis, a.i, a.j);
    let outcome = uncertainty_verdict_canonical(&state, i, j, &e, &ctx.quad, &ctx.policy)?;

    let mut run = Run::default();
    let factor = ctx.units.action.powf(e.r_star);
    let unit = format!("({})^{}", ctx.units.action_label, e.r_star);
    let divergence = absorb(&mut run, ctx, outcome, factor, &unit);
    let mut report = json!({
        "state": "hydrogen",
        "i": i.index(),
        "j": j.index(),
        "exponents": e,
    });
    if let Some(d) = divergence {
        report["divergence"] = serde_json::to_value(d)?;
    }
    // (rhs/lhs)^5 at p = 3, q = 2, where r* = 6/5
    if a.p == 3.0 && a.q == 2.0 && i == j {
        if let Some(v) = run.results.first() {
            let value = (v.rhs / v.lhs).powi(5);
            let expected = 25.0 / 3.0;
            report["fifth_power"] = json!({
                "rhs5_over_lhs5": value,
                "expected": expected,
                "rel_err": (value - expected).abs() / expected,
            });
        }
    }
    run.report = report;
    Ok(run)
}
