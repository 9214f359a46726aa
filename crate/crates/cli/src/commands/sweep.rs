use anyhow::{bail, Context as _, Result};
use serde_json::json;
use uncertainty_core::inequalities::{sweep, CellStatus, SweepKind};
use uncertainty_core::Verdict;

use super::{axes, check_order, load_state, Ctx};
use crate::args::{SweepArgs, SweepCheck};
use crate::report::{rescale, row_status, Run};

/// `1,2,3` or `start:end:count` (inclusive, evenly spaced).
pub fn parse_grid(s: &str) -> Result<Vec<f64>> {
    let s = s.trim();
    if s.is_empty() {
        bail!("empty exponent grid");
    }
    if let [a, b, n] = s.split(':').collect::<Vec<_>>()[..] {
        let (a, b): (f64, f64) = (a.trim().parse()?, b.trim().parse()?);
        let n: usize = n.trim().parse().with_context(|| format!("grid count in {s:?}"))?;
        return Ok(match n {
            0 => bail!("grid count must be positive in {s:?}"),
            1 => vec![a],
            _ => (0..n).map(|k| a + (b - a) * k as f64 / (n - 1) as f64).collect(),
        });
    }
    s.split(',')
        .map(|t| t.trim().parse::<f64>().with_context(|| format!("bad grid value {t:?}")))
        .collect()
}

pub fn run(a: &SweepArgs, ctx: &Ctx) -> Result<Run> {
    let p_grid = parse_grid(&a.p_grid)?;
    let q_grid = parse_grid(&a.q_grid)?;
    for &x in &p_grid {
        check_order("p", x)?;
    }
    for &x in &q_grid {
        check_order("q", x)?;
    }
    let state = load_state(&a.state, ctx.constants, a.origin_power)?;
    let (kind, label) = match a.check {
        SweepCheck::Canonical => {
            let (i, j) = axes(state.as_ref(), a.axis, a.i, a.j);
            (SweepKind::Canonical { i, j }, "uncertainty")
        }
        SweepCheck::Reciprocal => (SweepKind::Reciprocal, "reciprocal"),
    };
    let mut table = sweep(state.as_ref(), kind, &p_grid, &q_grid, &ctx.quad, &ctx.policy)?;

    let mut run = Run::default();
    for row in &mut table.rows {
        let cell = format!("p={},q={}", row.p, row.q);
        match (row.status, row.lhs, row.rhs) {
            (CellStatus::Holds | CellStatus::Violated, Some(lhs), Some(rhs)) => {
                let mut v = ctx.judged(
                    Verdict::with_policy(label, lhs, rhs, &ctx.policy)
                        .number("p", row.p)
                        .number("q", row.q)
                        .number("r_star", row.r_star)
                        .input("state", a.state.as_str()),
                );
                if matches!(kind, SweepKind::Canonical { .. }) {
                    let factor = ctx.units.action.powf(row.r_star);
                    rescale(&mut v, factor, &format!("({})^{}", ctx.units.action_label, row.r_star));
                    row.lhs = Some(v.lhs);
                    row.rhs = Some(v.rhs);
                }
                row.holds = Some(v.holds);
                row.status = row_status(v.holds);
                run.results.push(v);
            }
            (CellStatus::Divergent, ..) => run.divergent.push(cell),
            _ => run.failed.push(cell),
        }
    }
    run.report = json!({
        "state": a.state,
        "check": label,
        "p_grid": p_grid,
        "q_grid": q_grid,
        "counts": {
            "holds": table.count(CellStatus::Holds),
            "violated": table.count(CellStatus::Violated),
            "divergent": table.count(CellStatus::Divergent),
            "failed": table.count(CellStatus::Failed),
        },
        "rows": table.rows,
    });
    run.rows = Some(table.rows);
    Ok(run)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids() {
        assert_eq!(parse_grid("1,2.5, 3").unwrap(), vec![1.0, 2.5, 3.0]);
        assert_eq!(parse_grid("1:3:5").unwrap(), vec![1.0, 1.5, 2.0, 2.5, 3.0]);
        assert_eq!(parse_grid("2:9:1").unwrap(), vec![2.0]);
        assert!(parse_grid("").is_err());
        assert!(parse_grid("1:2:0").is_err());
        assert!(parse_grid("1,,2").is_err());
    }
}
