use anyhow::{bail, Context as _, Result};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;
use uncertainty_core::inequalities::{canonical_verdict_finite, uncertainty_chain_finite};
use uncertainty_core::make_exponents;
use uncertainty_core::matrixlab::{pauli, random_hermitian, random_state, truncated_canonical_pair, FiniteState};
use uncertainty_core::rng::SplitMix64;
use uncertainty_core::{HermitianF64, VerdictF64};

use super::{check_order, Ctx};
use crate::args::{FiniteArgs, Pair};
use crate::report::Run;

/// `ground` or `excited:K`.
fn basis_index(spec: &str) -> Result<usize> {
    match spec.split_once(':') {
        None if spec == "ground" => Ok(0),
        Some(("excited", k)) => k.parse().with_context(|| format!("bad level in {spec:?}")),
        _ => bail!("state must be ground or excited:K, got {spec:?}"),
    }
}

#[derive(Serialize)]
struct Counterexample<'a> {
    trial: usize,
    seed: u64,
    a: &'a HermitianF64,
    b: &'a HermitianF64,
    psi: &'a FiniteState<f64>,
    verdicts: Vec<&'a VerdictF64>,
}

struct Trial {
    a: HermitianF64,
    b: HermitianF64,
    psi: FiniteState<f64>,
    verdicts: Vec<VerdictF64>,
}

pub fn run(a: &FiniteArgs, ctx: &Ctx) -> Result<Run> {
    check_order("p", a.p)?;
    check_order("q", a.q)?;
    let e = make_exponents(a.p, a.q)?;
    let mut run = Run::default();
    match a.pair {
        Pair::PauliXy | Pair::TruncatedXp => {
            if a.trials != 1 {
                bail!("--trials applies to random pairs only");
            }
            let (x, p, dim) = match a.pair {
                Pair::PauliXy => {
                    if a.dim.is_some_and(|d| d != 2) {
                        bail!("the Pauli pair is two-dimensional");
                    }
                    let [sx, sy, _] = pauli::<f64>();
                    (sx, sy, 2)
                }
                _ => {
                    let dim = a.dim.unwrap_or(32);
                    let c = ctx.constants;
                    let (x, p) = truncated_canonical_pair(dim, c.hbar, c.mass, a.omega)?;
                    (x, p, dim)
                }
            };
            let k = basis_index(&a.state)?;
            if k >= dim {
                bail!("basis state {k} is outside dimension {dim}");
            }
            let psi = FiniteState::basis(dim, k)?;
            if a.pair == Pair::TruncatedXp {
                let v = canonical_verdict_finite(&x, &p, &psi, ctx.constants.hbar, &e, &ctx.policy)?;
                run.results.push(ctx.judged(v.input("state", a.state.as_str())));
            }
            let chain = uncertainty_chain_finite(&x, &p, &psi, &e, &ctx.policy)?;
            for v in chain.verdicts() {
                run.results.push(ctx.judged(v.clone().input("state", a.state.as_str())));
            }
            let min_margin = run.results.iter().map(|v| v.margin).fold(f64::INFINITY, f64::min);
            run.report = json!({
                "pair": format!("{:?}", a.pair),
                "dim": dim,
                "state": a.state,
                "exponents": e,
                "min_margin": min_margin,
            });
        }
        Pair::Random => {
            let dim = a.dim.unwrap_or(4);
            if a.trials == 0 {
                bail!("--trials must be positive");
            }
            let seed = ctx.settings.seed;
            let trials: Vec<Trial> = (0..a.trials)
                .into_par_iter()
                .map(|t| -> Result<Trial> {
                    let mut rng = SplitMix64::fork(seed, t as u64);
                    let ha = random_hermitian(dim, &mut rng)?;
                    let hb = random_hermitian(dim, &mut rng)?;
                    let psi = random_state(dim, &mut rng)?;
                    let chain = uncertainty_chain_finite(&ha, &hb, &psi, &e, &ctx.policy)
                        .with_context(|| format!("trial {t}"))?;
                    let verdicts = chain
                        .verdicts()
                        .into_iter()
                        .map(|v| ctx.judged(v.clone().input("trial", t)))
                        .collect();
                    Ok(Trial { a: ha, b: hb, psi, verdicts })
                })
                .collect::<Result<_>>()?;
            let margins: Vec<_> = trials
                .iter()
                .enumerate()
                .map(|(t, tr)| json!({"trial": t, "product": tr.verdicts[0].margin, "commutator": tr.verdicts[1].margin}))
                .collect();
            let min_margin = trials.iter().flat_map(|t| &t.verdicts).map(|v| v.margin).fold(f64::INFINITY, f64::min);
            let violations = trials.iter().filter(|t| t.verdicts.iter().any(|v| !v.holds)).count();
            let counterexample = trials.iter().enumerate().find(|(_, t)| t.verdicts.iter().any(|v| !v.holds)).map(|(i, t)| {
                Counterexample { trial: i, seed, a: &t.a, b: &t.b, psi: &t.psi, verdicts: t.verdicts.iter().collect() }
            });
            run.report = json!({
                "pair": "random",
                "dim": dim,
                "seed": seed,
                "trials": a.trials,
                "exponents": e,
                "min_margin": min_margin,
                "violating_trials": violations,
                "margins": margins,
                "counterexample": counterexample,
            });
            run.results = trials.into_iter().flat_map(|t| t.verdicts).collect();
        }
    }
    Ok(run)
}
