//! Constraint polynomials P_k^{(N,ε/2)}, the K-coefficients of Juddian
//! solutions, the quotient A^ℓ_N and the divisibility identity
//! P^{(N+ℓ,-ℓ/2)}_{N+ℓ} = A^ℓ_N · P^{(N,ℓ/2)}_N.

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::exact_algebra::{
    factorial, interpolate_univar, poly_divmod, positive_roots, q, qr, refine_roots,
    tridiag_det, vars, AlgebraError, MultiPoly, RootInterval, UPoly, Vars, Q,
};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConstraintError {
    #[error("index {k} out of range for N = {n}")]
    IndexOutOfRange { n: u32, k: u32 },
    #[error("coupling g must be nonzero")]
    ZeroCoupling,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

pub fn uv_vars() -> Vars {
    vars(&["u", "v"])
}

/// Runs the three-term recurrence with ε given as a polynomial over the
/// target ring (a constant for numeric ε, a variable for symbolic ε).
fn recurrence(n: u32, eps: &MultiPoly, k: u32) -> Vec<MultiPoly> {
    let vs = eps.vars().clone();
    let u = MultiPoly::var(&vs, "u");
    let v = MultiPoly::var(&vs, "v");
    let one = MultiPoly::one(&vs);
    let mut out = vec![one.clone()];
    if k == 0 {
        return out;
    }
    out.push(&(&(&u + &v) - &one) - eps);
    for j in 2..=k {
        let jj = MultiPoly::int(&vs, j as i64);
        // (j u + v - j(j + ε)) P_{j-1} - j(j-1)(N-j+1) u P_{j-2}
        let lin = &(&(&jj * &u) + &v) - &(&jj * &(&jj + eps));
        let c = (j as i64) * (j as i64 - 1) * (n as i64 - j as i64 + 1);
        let next = &(&lin * &out[j as usize - 1]) - &(&u * &out[j as usize - 2]).scale(&q(c));
        out.push(next);
    }
    out
}

/// P_k^{(N,ε/2)}(u, v) for a rational ε.
pub fn constraint_p(n: u32, eps: &Q, k: u32) -> Result<MultiPoly, ConstraintError> {
    if k > n {
        return Err(ConstraintError::IndexOutOfRange { n, k });
    }
    let vs = uv_vars();
    Ok(recurrence(n, &MultiPoly::constant(&vs, eps.clone()), k)
        .pop()
        .unwrap())
}

/// P_k^{(N,ε/2)}(u, v) with ε replaced by `eps_expr`, a polynomial in
/// (u, v, eps); e.g. `eps` or `-eps`.
pub fn constraint_p_symbolic(
    n: u32,
    eps_expr: &MultiPoly,
    k: u32,
) -> Result<MultiPoly, ConstraintError> {
    if k > n {
        return Err(ConstraintError::IndexOutOfRange { n, k });
    }
    Ok(recurrence(n, eps_expr, k).pop().unwrap())
}

#[derive(Debug, Clone)]
pub struct ConstraintFamily {
    pub n: u32,
    pub eps: Q,
    pub polys: Vec<MultiPoly>,
}

pub fn constraint_family(n: u32, eps: &Q) -> ConstraintFamily {
    let vs = uv_vars();
    ConstraintFamily {
        n,
        eps: eps.clone(),
        polys: recurrence(n, &MultiPoly::constant(&vs, eps.clone()), n),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KCoefficients {
    pub n: u32,
    pub eps: Q,
    pub g: Q,
    pub delta: Q,
    pub values: Vec<Q>,
}

/// K_0, ..., K_N of the Juddian expansion.
pub fn coeff_k(n: u32, eps: &Q, g: &Q, delta: &Q) -> Result<KCoefficients, ConstraintError> {
    if g.is_zero() {
        return Err(ConstraintError::ZeroCoupling);
    }
    let two_g = g * q(2);
    let inv_two_g = Q::one() / &two_g;
    let d2 = delta * delta;
    let mut values = vec![Q::one()];
    for k in 1..=n {
        let kq = q(k as i64);
        let inner =
            &two_g + &inv_two_g * (q(k as i64 - 1 - n as i64) - eps + &d2 / q((n - k + 1) as i64));
        let prev2 = if k >= 2 {
            values[k as usize - 2].clone()
        } else {
            Q::zero()
        };
        let next = (inner * &values[k as usize - 1] - prev2) / kq;
        values.push(next);
    }
    Ok(KCoefficients {
        n,
        eps: eps.clone(),
        g: g.clone(),
        delta: delta.clone(),
        values,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuotientA {
    pub n: u32,
    pub ell: u32,
    pub poly: MultiPoly,
}

/// A^ℓ_N(u,v) = ((N+ℓ)!/N!) det Tridiag[u + v/(N+i) − ℓ + 2i − 1; 1; −i(ℓ−i)].
pub fn quotient_a(n: u32, ell: u32) -> QuotientA {
    let vs = uv_vars();
    if ell == 0 {
        return QuotientA {
            n,
            ell,
            poly: MultiPoly::one(&vs),
        };
    }
    let u = MultiPoly::var(&vs, "u");
    let v = MultiPoly::var(&vs, "v");
    let l = ell as i64;
    let diag: Vec<MultiPoly> = (1..=l)
        .map(|i| {
            &(&u + &v.scale(&(Q::one() / q(n as i64 + i)))) + &MultiPoly::int(&vs, -l + 2 * i - 1)
        })
        .collect();
    let upper: Vec<MultiPoly> = (1..l).map(|_| MultiPoly::one(&vs)).collect();
    let lower: Vec<MultiPoly> = (1..l).map(|i| MultiPoly::int(&vs, -i * (l - i))).collect();
    let det = tridiag_det(&diag, &upper, &lower);
    let ratio = Q::from_integer(factorial((n + ell) as u64) / factorial(n as u64));
    QuotientA {
        n,
        ell,
        poly: det.scale(&ratio),
    }
}

/// A^ℓ_N as a polynomial in (u, v, N), interpolated from N = 0..ℓ.
pub fn quotient_a_in_n(ell: u32) -> MultiPoly {
    let pts: Vec<(Q, MultiPoly)> = (0..=ell)
        .map(|n| (q(n as i64), quotient_a(n, ell).poly))
        .collect();
    interpolate_univar(&pts, "N").expect("distinct abscissae")
}

#[derive(Debug, Clone, Serialize)]
pub struct DivisibilityReport {
    pub n: u32,
    pub ell: u32,
    pub remainder_is_zero: bool,
    pub remainder: String,
    pub quotient: String,
    pub quotient_matches_determinant: bool,
}

impl DivisibilityReport {
    pub fn passed(&self) -> bool {
        self.remainder_is_zero && self.quotient_matches_determinant
    }
}

/// Divides P^{(N+ℓ,−ℓ/2)}_{N+ℓ} by P^{(N,ℓ/2)}_N in u and compares the quotient with A^ℓ_N.
pub fn verify_divisibility(n: u32, ell: u32) -> Result<DivisibilityReport, ConstraintError> {
    let l = q(ell as i64);
    let dividend = constraint_p(n + ell, &-l.clone(), n + ell)?;
    let divisor = constraint_p(n, &l, n)?;
    let (quo, rem) = poly_divmod(&dividend, &divisor, "u")?;
    let a = quotient_a(n, ell);
    Ok(DivisibilityReport {
        n,
        ell,
        remainder_is_zero: rem.is_zero(),
        remainder: rem.to_string(),
        quotient: quo.to_string(),
        quotient_matches_determinant: quo == a.poly,
    })
}

/// P_N^{(N,ℓ/2)}((2g)², Δ²) as a polynomial in g alone.
pub fn constraint_in_g(n: u32, ell: u32, delta: &Q) -> MultiPoly {
    let p = constraint_p(n, &q(ell as i64), n).expect("k = N");
    let gv = vars(&["g"]);
    let g = MultiPoly::var(&gv, "g");
    let u = (&g * &g).scale(&q(4));
    let v = MultiPoly::constant(&gv, delta * delta);
    p.compose(&gv, &[u, v])
}

/// Isolating intervals of the positive g-roots of P_N^{(N,ℓ/2)}((2g)², Δ²).
pub fn juddian_g_roots(n: u32, ell: u32, delta: &Q) -> Vec<RootInterval> {
    let f = UPoly::from_multi(&constraint_in_g(n, ell, delta)).expect("univariate");
    positive_roots(&f)
}

/// Same, refined and rounded to binary64.
pub fn juddian_g_roots_f64(n: u32, ell: u32, delta: &Q) -> Vec<f64> {
    let f = UPoly::from_multi(&constraint_in_g(n, ell, delta)).expect("univariate");
    let w = crate::exact_algebra::default_width();
    refine_roots(&f, &positive_roots(&f), &w)
        .iter()
        .map(|iv| iv.to_f64())
        .collect()
}

/// Points (g, Δ) on Ω_N^{(ℓ)}: for each grid g, every positive Δ with
/// P_N^{(N,ℓ/2)}((2g)², Δ²) = 0. Sorted by g then Δ. Grid values are
/// snapped to multiples of 1e-9 first: the binary expansion of a decimal
/// step makes the exact Sturm sequences needlessly expensive.
pub fn omega_curve_samples(n: u32, ell: u32, g_grid: &[f64]) -> Vec<(f64, f64)> {
    let p = constraint_p(n, &q(ell as i64), n).expect("k = N");
    let vv = vars(&["v"]);
    let v = MultiPoly::var(&vv, "v");
    let mut pts: Vec<(f64, f64)> = g_grid
        .par_iter()
        .flat_map_iter(|&g| {
            let gq = qr((g * 1e9).round() as i64, 1_000_000_000);
            let u = MultiPoly::constant(&vv, &gq * &gq * q(4));
            let f = UPoly::from_multi(&p.compose(&vv, &[u, v.clone()])).expect("univariate");
            let w = crate::exact_algebra::default_width();
            refine_roots(&f, &positive_roots(&f), &w)
                .iter()
                .map(|iv| (g, iv.to_f64().sqrt()))
                .collect::<Vec<_>>()
        })
        .collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    pts
}
