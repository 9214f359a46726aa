use std::fs::File;
use std::path::Path;

use anyhow::{bail, Context as _, Result};
use serde_json::json;
use uncertainty_core::inequalities::{holder_verdict, schwarz_verdict, DiscreteDensity};
use uncertainty_core::make_exponents;

use super::{check_order, Ctx};
use crate::args::HolderArgs;
use crate::report::Run;

/// Reads `f,g[,w]` rows. A header is recognized by a non-numeric first
/// field; `#` starts a comment line; missing weights default to 1.
///
/// Comments are skipped here rather than by the csv reader so that reported
/// line numbers are file line numbers.
pub fn read_points(path: &Path) -> Result<Vec<(f64, f64, f64)>> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(file);
    let mut points = Vec::new();
    let mut header_seen = false;
    for rec in rdr.records() {
        let rec = rec.with_context(|| format!("reading {}", path.display()))?;
        let line = rec.position().map_or(0, |p| p.line());
        if rec.get(0).is_some_and(|f| f.starts_with('#')) {
            continue;
        }
        if points.is_empty() && !header_seen && rec.get(0).is_some_and(|f| f.parse::<f64>().is_err()) {
            header_seen = true;
            continue;
        }
        if rec.len() < 2 || rec.len() > 3 {
            bail!("line {line}: expected 2 or 3 columns, found {}", rec.len());
        }
        let field = |i: usize| -> Result<f64> {
            let s = &rec[i];
            let v: f64 = s.parse().with_context(|| format!("line {line}: {s:?} is not a number"))?;
            if !v.is_finite() {
                bail!("line {line}: non-finite value {s:?}");
            }
            Ok(v)
        };
        let w = if rec.len() == 3 { field(2)? } else { 1.0 };
        if w < 0.0 {
            bail!("line {line}: negative weight {w}");
        }
        points.push((field(0)?, field(1)?, w));
    }
    if points.is_empty() {
        bail!("{} holds no data rows", path.display());
    }
    Ok(points)
}

pub fn run(a: &HolderArgs, ctx: &Ctx) -> Result<Run> {
    check_order("p", a.p)?;
    check_order("q", a.q)?;
    let e = make_exponents(a.p, a.q)?;
    let d = DiscreteDensity::new(read_points(&a.data)?)?;
    let holder = ctx.judged(holder_verdict(&d, &e, &ctx.policy));
    let schwarz = ctx.judged(schwarz_verdict(&d, &ctx.policy));

    // |f|^p ∝ |g|^q on the support is the equality case
    let (fp, gq): (Vec<f64>, Vec<f64>) =
        d.points().iter().filter(|pt| pt.2 > 0.0).map(|&(f, g, _)| (f.abs().powf(a.p), g.abs().powf(a.q))).unzip();
    let (sf, sg) = (fp.iter().sum::<f64>(), gq.iter().sum::<f64>());
    let proportional = sf > 0.0 && sg > 0.0 && fp.iter().zip(&gq).all(|(x, y)| (x / sf - y / sg).abs() <= 1e-12 * (x / sf).max(y / sg));
    let equality = holder.ratio.is_some_and(|r| (r - 1.0).abs() <= 1e-9);

    let internal: Vec<String> = [&holder, &schwarz].iter().filter(|v| v.is_internal_error()).map(|v| v.label.clone()).collect();
    let mut run = Run::default();
    run.report = json!({
        "data": a.data,
        "points": d.len(),
        "exponents": e,
        "holder_margin": holder.margin,
        "schwarz_margin": schwarz.margin,
        "proportional": proportional,
        "equality": equality,
        "internal_errors": internal,
    });
    run.results = vec![holder, schwarz];
    Ok(run)
}
