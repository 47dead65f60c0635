//! Exact-algebra commands: derive-j and juddian.

use anyhow::Result;
use ibqrm_core::constraint_poly::juddian_g_roots_f64;
use ibqrm_core::exact_algebra::{q_to_f64, Q};
use ibqrm_core::symmetry_poly::p_from_determinant;
use ibqrm_core::weyl_operator::{
    action_constants, commutation_report, compare_with_table, derive_j, parity_solutions, IdentityReport,
    WordRecord,
};
use serde::Serialize;

use crate::args::{parse_q, DeriveArgs, JuddianArgs};

#[derive(Serialize)]
pub struct DeriveReport {
    pub ell: u32,
    pub normalization: String,
    pub g_points: usize,
    pub d_points: usize,
    pub unknowns: usize,
    pub commutation: IdentityReport,
    pub square: IdentityReport,
    /// Derived / tabulated, when a table entry exists.
    pub table_ratio: Option<String>,
    pub entries: [[Vec<WordRecord>; 2]; 2],
}

impl DeriveReport {
    pub fn passed(&self) -> bool {
        self.commutation.holds && self.square.holds
    }
}

pub fn derive(args: &DeriveArgs) -> Result<DeriveReport> {
    let d = derive_j(args.ell)?;
    let commutation = commutation_report(args.ell, &d.j);
    let square = ibqrm_core::weyl_operator::square_report(args.ell, &d.j, &p_from_determinant(args.ell));
    let table_ratio = if args.ell <= 6 { compare_with_table(args.ell)?.ratio } else { None };
    Ok(DeriveReport {
        ell: d.ell,
        normalization: d.normalization.clone(),
        g_points: d.g_points,
        d_points: d.d_points,
        unknowns: d.unknowns,
        commutation,
        square,
        table_ratio,
        entries: d.j.dump(),
    })
}

#[derive(Serialize)]
pub struct JuddianPoint {
    pub g: String,
    pub lambda: String,
    pub alpha: String,
    pub beta: String,
    pub p_at_lambda: String,
    pub fit_residual: f64,
    pub product_residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub parity: Option<ParityRecord>,
}

#[derive(Serialize)]
pub struct ParityRecord {
    pub mu: f64,
    pub ratio: f64,
    pub eigen_residual: f64,
    pub projection_residual: f64,
    pub overlap: f64,
}

#[derive(Serialize)]
pub struct JuddianReport {
    pub n: u32,
    pub ell: u32,
    pub delta: String,
    pub exact: bool,
    pub points: Vec<JuddianPoint>,
}

fn float_point(n: u32, ell: u32, g: f64, delta: f64) -> Result<JuddianPoint> {
    let ac = action_constants::<f64>(n, ell, &g, &delta)?;
    let ps = parity_solutions(n, ell, g, delta)?;
    Ok(JuddianPoint {
        g: format!("{g:.15}"),
        lambda: format!("{:.15}", n as f64 + ell as f64 / 2.0 - g * g),
        alpha: format!("{:.15e}", ac.alpha),
        beta: format!("{:.15e}", ac.beta),
        p_at_lambda: format!("{:.15e}", ac.p_at_lambda),
        fit_residual: ac.fit_residual,
        product_residual: ac.product_residual,
        parity: Some(ParityRecord {
            mu: ps.mu,
            ratio: ps.ratio,
            eigen_residual: ps.eigen_residual,
            projection_residual: ps.projection_residual,
            overlap: ps.overlap,
        }),
    })
}

pub fn juddian(args: &JuddianArgs) -> Result<JuddianReport> {
    let delta = parse_q(&args.delta)?;
    let points = match &args.g {
        Some(g) => {
            let g: Q = parse_q(g)?;
            let ac = action_constants::<Q>(args.n, args.ell, &g, &delta)?;
            let lambda = Q::from_integer((2 * args.n + args.ell).into()) / Q::from_integer(2.into()) - &g * &g;
            vec![JuddianPoint {
                g: g.to_string(),
                lambda: lambda.to_string(),
                alpha: ac.alpha.to_string(),
                beta: ac.beta.to_string(),
                p_at_lambda: ac.p_at_lambda.to_string(),
                fit_residual: ac.fit_residual,
                product_residual: ac.product_residual,
                parity: None,
            }]
        }
        None => juddian_g_roots_f64(args.n, args.ell, &delta)
            .into_iter()
            .map(|g| float_point(args.n, args.ell, g, q_to_f64(&delta)))
            .collect::<Result<_>>()?,
    };
    Ok(JuddianReport { n: args.n, ell: args.ell, delta: delta.to_string(), exact: args.g.is_some(), points })
}
