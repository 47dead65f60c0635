use anyhow::{bail, Context, Result};
use ibqrm_core::constraint_poly::verify_divisibility;
use ibqrm_core::symmetry_poly::{check_conjecture_at_baselines, p_from_determinant, p_from_table_with};
use ibqrm_core::tables::P_TABLE;
use ibqrm_core::weyl_operator::{build_j, commutation_report, square_report};
use rayon::prelude::*;
use serde::Serialize;

use crate::args::VerifyArgs;

#[derive(Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct VerifyReport {
    pub config: VerifyArgs,
    pub passed: bool,
    pub first_failure: Option<String>,
    pub checks: Vec<Check>,
}

fn table_with_overrides(overrides: &[String]) -> Result<Vec<String>> {
    let mut table: Vec<String> = P_TABLE.iter().map(|s| s.to_string()).collect();
    for o in overrides {
        let (ell, expr) = o.split_once('=').with_context(|| format!("--p-override expects ELL=EXPR, got {o:?}"))?;
        let ell: usize = ell.trim().parse().with_context(|| format!("bad ℓ in --p-override {o:?}"))?;
        if ell >= table.len() {
            bail!("--p-override: no tabulated p_ℓ for ℓ = {ell}");
        }
        table[ell] = expr.to_string();
    }
    Ok(table)
}

pub fn run(args: &VerifyArgs) -> Result<VerifyReport> {
    let table = table_with_overrides(&args.p_overrides)?;
    let table: Vec<&str> = table.iter().map(|s| s.as_str()).collect();
    let pairs: Vec<(u32, u32)> = (1..=args.n_max).flat_map(|n| (0..=args.ell_max).map(move |l| (n, l))).collect();
    let mut checks: Vec<Check> = pairs
        .par_iter()
        .map(|&(n, ell)| {
            let name = format!("divisibility N={n} ℓ={ell}");
            match verify_divisibility(n, ell) {
                Ok(r) => Check {
                    name,
                    passed: r.passed(),
                    detail: (!r.passed()).then(|| format!("remainder {}", r.remainder)),
                },
                Err(e) => Check { name, passed: false, detail: Some(e.to_string()) },
            }
        })
        .collect();

    let per_ell: Vec<Vec<Check>> = (0..=args.ell_max.min(6))
        .into_par_iter()
        .map(|ell| {
            let mut out = Vec::new();
            let p = match p_from_table_with(ell, &table) {
                Ok(p) => p,
                Err(e) => {
                    out.push(Check { name: format!("table_vs_determinant ℓ={ell}"), passed: false, detail: Some(e.to_string()) });
                    return out;
                }
            };
            let det = p_from_determinant(ell);
            let diff = &p.poly - &det.poly;
            out.push(Check {
                name: format!("table_vs_determinant ℓ={ell}"),
                passed: diff.is_zero(),
                detail: (!diff.is_zero()).then(|| format!("table − determinant = {diff}")),
            });
            let j = build_j(ell).expect("ℓ ≤ 6 is tabulated");
            let c = commutation_report(ell, &j);
            out.push(Check { name: format!("commutation ℓ={ell}"), passed: c.holds, detail: c.first_nonzero });
            let s = square_report(ell, &j, &p);
            out.push(Check { name: format!("square ℓ={ell}"), passed: s.holds, detail: s.first_nonzero });
            let b = check_conjecture_at_baselines(&p, 0..=args.n_max);
            let bad = b.mismatches();
            out.push(Check {
                name: format!("baselines ℓ={ell}"),
                passed: bad.is_empty(),
                detail: bad.first().map(|m| format!("N={} branch {}: {}", m.n, m.branch, m.difference)),
            });
            out
        })
        .collect();
    checks.extend(per_ell.into_iter().flatten());
    let first_failure = checks.iter().find(|c| !c.passed).map(|c| c.name.clone());
    Ok(VerifyReport { config: args.clone(), passed: first_failure.is_none(), first_failure, checks })
}
