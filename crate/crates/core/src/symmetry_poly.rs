//! The polynomials p_ℓ(x; g, Δ) with J_ℓ² = p_ℓ(H_ℓ): transcribed table for
//! ℓ ≤ 6, the tridiagonal determinant for any ℓ, baseline checks against
//! A^ℓ_N, and zero-locus sampling.

use rayon::prelude::*;
use serde::Serialize;

use crate::constraint_poly::quotient_a;
use crate::exact_algebra::{
    parse_poly, positive_roots, q, q_from_f64, qr, real_roots_f64, refine_roots, tridiag_det, vars,
    MultiPoly, UPoly, Vars, Q,
};
use crate::tables::P_TABLE;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SymmetryError {
    #[error("no tabulated polynomial for ℓ = {0} (table covers ℓ ≤ 6)")]
    Unsupported(u32),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PolySource {
    Tabulated,
    Determinant,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SymmetryPolynomial {
    pub ell: u32,
    pub source: PolySource,
    /// Polynomial in (x, g, D) with D = Δ.
    pub poly: MultiPoly,
}

/// Variable list (x, g, D) shared by every p_ℓ.
pub fn p_vars() -> Vars {
    vars(&["x", "g", "D"])
}

/// Variable list (g, D) for baseline specializations.
pub fn gd_vars() -> Vars {
    vars(&["g", "D"])
}

pub fn p_from_table(ell: u32) -> Result<SymmetryPolynomial, SymmetryError> {
    p_from_table_with(ell, &P_TABLE)
}

/// Same as [`p_from_table`] but reading from a caller-supplied table (used to
/// inject corrupted fixtures).
pub fn p_from_table_with(ell: u32, table: &[&str]) -> Result<SymmetryPolynomial, SymmetryError> {
    let src = table
        .get(ell as usize)
        .ok_or(SymmetryError::Unsupported(ell))?;
    let poly = parse_poly(&p_vars(), src).map_err(|_| SymmetryError::Unsupported(ell))?;
    Ok(SymmetryPolynomial {
        ell,
        source: PolySource::Tabulated,
        poly,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalM {
    pub ell: u32,
    pub diag: Vec<MultiPoly>,
    pub upper: Vec<MultiPoly>,
    pub lower: Vec<MultiPoly>,
}

/// M_ℓ(x, g) with s_i = x − ℓ/2 + g² + i:
/// diagonal ((2g)² − ℓ + 2i − 1)s_i, upper s_i, lower −i(ℓ−i)(s_i + 1).
pub fn tridiagonal_m(ell: u32) -> TridiagonalM {
    let vs = p_vars();
    let x = MultiPoly::var(&vs, "x");
    let g = MultiPoly::var(&vs, "g");
    let g2 = &g * &g;
    let l = ell as i64;
    let s = |i: i64| &(&x + &g2) + &MultiPoly::constant(&vs, q(i) - qr(l, 2));
    let diag = (1..=l)
        .map(|i| &(&g2.scale(&q(4)) + &MultiPoly::int(&vs, -l + 2 * i - 1)) * &s(i))
        .collect();
    let upper = (1..l).map(s).collect();
    let lower = (1..l)
        .map(|i| (&s(i) + &MultiPoly::one(&vs)).scale(&q(-i * (l - i))))
        .collect();
    TridiagonalM {
        ell,
        diag,
        upper,
        lower,
    }
}

/// p_ℓ = det(Δ² I_ℓ + M_ℓ(x, g)).
pub fn p_from_determinant(ell: u32) -> SymmetryPolynomial {
    let vs = p_vars();
    if ell == 0 {
        return SymmetryPolynomial {
            ell,
            source: PolySource::Determinant,
            poly: MultiPoly::one(&vs),
        };
    }
    let m = tridiagonal_m(ell);
    let d = MultiPoly::var(&vs, "D");
    let d2 = &d * &d;
    let diag: Vec<MultiPoly> = m.diag.iter().map(|e| e + &d2).collect();
    SymmetryPolynomial {
        ell,
        source: PolySource::Determinant,
        poly: tridiag_det(&diag, &m.upper, &m.lower),
    }
}

pub fn p_poly(ell: u32, source: PolySource) -> Result<SymmetryPolynomial, SymmetryError> {
    match source {
        PolySource::Tabulated => p_from_table(ell),
        PolySource::Determinant => Ok(p_from_determinant(ell)),
    }
}

/// p(s − g²; g, Δ) as a polynomial in (g, D).
pub fn at_shift(p: &MultiPoly, shift: &Q) -> MultiPoly {
    let vs = gd_vars();
    let g = MultiPoly::var(&vs, "g");
    let d = MultiPoly::var(&vs, "D");
    let x = &MultiPoly::constant(&vs, shift.clone()) - &(&g * &g);
    p.compose(&vs, &[x, g, d])
}

/// A^ℓ_N((2g)², Δ²) as a polynomial in (g, D).
pub fn quotient_a_gd(n: u32, ell: u32) -> MultiPoly {
    let vs = gd_vars();
    let g = MultiPoly::var(&vs, "g");
    let d = MultiPoly::var(&vs, "D");
    quotient_a(n, ell)
        .poly
        .compose(&vs, &[(&g * &g).scale(&q(4)), &d * &d])
}

#[derive(Debug, Clone, Serialize)]
pub struct BaselineCheck {
    pub n: u32,
    /// "+" for x = N + ℓ/2 − g², "−" for x = N − ℓ/2 − g² (compared with A^ℓ_{N−ℓ}).
    pub branch: &'static str,
    pub equal: bool,
    pub difference: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConjectureReport {
    pub ell: u32,
    pub source: PolySource,
    pub checks: Vec<BaselineCheck>,
}

impl ConjectureReport {
    pub fn all_equal(&self) -> bool {
        self.checks.iter().all(|c| c.equal)
    }

    pub fn mismatches(&self) -> Vec<&BaselineCheck> {
        self.checks.iter().filter(|c| !c.equal).collect()
    }
}

/// Compares p_ℓ(N ± ℓ/2 − g²) with A^ℓ_N (resp. A^ℓ_{N−ℓ}) exactly.
pub fn check_conjecture_at_baselines(
    p: &SymmetryPolynomial,
    n_range: std::ops::RangeInclusive<u32>,
) -> ConjectureReport {
    let ell = p.ell;
    let half = qr(ell as i64, 2);
    let checks = n_range
        .into_par_iter()
        .flat_map_iter(|n| {
            let mut out = Vec::with_capacity(2);
            let plus = at_shift(&p.poly, &(q(n as i64) + &half));
            let diff = &plus - &quotient_a_gd(n, ell);
            out.push(BaselineCheck {
                n,
                branch: "+",
                equal: diff.is_zero(),
                difference: diff.to_string(),
            });
            if n >= ell {
                let minus = at_shift(&p.poly, &(q(n as i64) - &half));
                let diff = &minus - &quotient_a_gd(n - ell, ell);
                out.push(BaselineCheck {
                    n,
                    branch: "-",
                    equal: diff.is_zero(),
                    difference: diff.to_string(),
                });
            }
            out
        })
        .collect();
    ConjectureReport {
        ell,
        source: p.source,
        checks,
    }
}

/// Univariate p_ℓ(x; g, Δ) in x at exact (g, Δ).
pub fn p_in_x(p: &MultiPoly, g: &Q, delta: &Q) -> UPoly {
    let vs = vars(&["x"]);
    let x = MultiPoly::var(&vs, "x");
    let s = p.compose(
        &vs,
        &[
            x,
            MultiPoly::constant(&vs, g.clone()),
            MultiPoly::constant(&vs, delta.clone()),
        ],
    );
    UPoly::from_multi(&s).expect("univariate in x")
}

/// Real x-roots of p_ℓ(x; g, Δ), ascending, for each g on the grid.
pub fn p_zero_curve(p: &SymmetryPolynomial, delta: f64, g_grid: &[f64]) -> Vec<(f64, Vec<f64>)> {
    let d = q_from_f64(delta);
    g_grid
        .par_iter()
        .map(|&g| {
            let f = p_in_x(&p.poly, &q_from_f64(g), &d);
            if f.degree() == 0 {
                return (g, Vec::new());
            }
            let b = f.cauchy_bound();
            (g, real_roots_f64(&f, &-b.clone(), &b))
        })
        .collect()
}

/// Baseline shift N + ℓ/2 (sign > 0) or N − ℓ/2 (sign < 0).
pub fn baseline_shift(n: u32, ell: u32, sign: i8) -> Q {
    let half = qr(ell as i64, 2);
    if sign >= 0 {
        q(n as i64) + half
    } else {
        q(n as i64) - half
    }
}

#[derive(Debug, Clone)]
pub struct KernelScan {
    pub ell: u32,
    pub shift: Q,
    /// p_ℓ(shift − g²; g, Δ) in (g, D).
    pub poly: MultiPoly,
    /// Points (g, Δ) with g on the grid and Δ > 0 a root.
    pub zeros: Vec<(f64, f64)>,
}

/// Specializes p_ℓ at x = shift − g² and samples its positive zero locus.
pub fn kernel_region_scan(p: &SymmetryPolynomial, shift: &Q, g_grid: &[f64]) -> KernelScan {
    let poly = at_shift(&p.poly, shift);
    let dv = vars(&["D"]);
    let d = MultiPoly::var(&dv, "D");
    let w = crate::exact_algebra::default_width();
    let mut zeros: Vec<(f64, f64)> = g_grid
        .par_iter()
        .flat_map_iter(|&g| {
            let f = UPoly::from_multi(
                &poly.compose(&dv, &[MultiPoly::constant(&dv, q_from_f64(g)), d.clone()]),
            )
            .expect("univariate in D");
            refine_roots(&f, &positive_roots(&f), &w)
                .iter()
                .map(|iv| (g, iv.to_f64()))
                .collect::<Vec<_>>()
        })
        .collect();
    zeros.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    KernelScan {
        ell: p.ell,
        shift: shift.clone(),
        poly,
        zeros,
    }
}
