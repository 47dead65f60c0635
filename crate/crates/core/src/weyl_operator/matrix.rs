//! 2×2 operator matrices, the Hamiltonians in both pictures, the tabulated
//! symmetry operators J_ℓ and exact verification of their identities.

use std::ops::{Add, Mul, Neg, Sub};

use serde::Serialize;

use super::element::{coeff_vars, parse_weyl, WeylElement, WordRecord};
use super::WeylError;
use crate::exact_algebra::{q, qr, MultiPoly, Q};
use crate::symmetry_poly::SymmetryPolynomial;
use crate::tables::{ALPHA, BETA, DELTA};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Mat2Weyl {
    pub entries: [[WeylElement; 2]; 2],
}

impl Mat2Weyl {
    pub fn new(e00: WeylElement, e01: WeylElement, e10: WeylElement, e11: WeylElement) -> Self {
        Mat2Weyl {
            entries: [[e00, e01], [e10, e11]],
        }
    }

    pub fn zero() -> Self {
        let z = WeylElement::zero(&coeff_vars());
        Self::new(z.clone(), z.clone(), z.clone(), z)
    }

    pub fn identity() -> Self {
        Self::diag(&WeylElement::one(&coeff_vars()))
    }

    /// w·I
    pub fn diag(w: &WeylElement) -> Self {
        let z = WeylElement::zero(w.vars());
        Self::new(w.clone(), z.clone(), z, w.clone())
    }

    /// σ_x, σ_z as constant matrices.
    pub fn sigma_x() -> Self {
        let vs = coeff_vars();
        let z = WeylElement::zero(&vs);
        let o = WeylElement::one(&vs);
        Self::new(z.clone(), o.clone(), o, z)
    }

    pub fn sigma_z() -> Self {
        let vs = coeff_vars();
        let z = WeylElement::zero(&vs);
        let o = WeylElement::one(&vs);
        Self::new(o.clone(), z.clone(), z, -&o)
    }

    pub fn get(&self, i: usize, j: usize) -> &WeylElement {
        &self.entries[i][j]
    }

    pub fn map<F: Fn(&WeylElement) -> WeylElement>(&self, f: F) -> Self {
        let e = &self.entries;
        Self::new(f(&e[0][0]), f(&e[0][1]), f(&e[1][0]), f(&e[1][1]))
    }

    /// w·M (w acting from the left on every entry).
    pub fn left_mul(&self, w: &WeylElement) -> Self {
        self.map(|x| w * x)
    }

    pub fn scale(&self, c: &MultiPoly) -> Self {
        self.map(|x| x.scale(c))
    }

    pub fn scale_q(&self, c: &Q) -> Self {
        self.map(|x| x.scale_q(c))
    }

    pub fn commutator(&self, o: &Self) -> Self {
        &(self * o) - &(o * self)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(|e| e.is_zero())
    }

    pub fn degree(&self) -> Option<u32> {
        self.entries
            .iter()
            .flatten()
            .filter_map(|e| e.degree())
            .max()
    }

    /// First nonzero (entry, term) for diagnostics.
    pub fn first_nonzero(&self) -> Option<String> {
        for i in 0..2 {
            for j in 0..2 {
                if let Some(((e, m, n), c)) = self.entries[i][j].first_term() {
                    return Some(format!("entry ({i},{j}), word P^{e} b^{m} a^{n}: {c}"));
                }
            }
        }
        None
    }

    pub fn specialize(&self, point: &[Q]) -> Self {
        self.map(|x| x.specialize(point))
    }

    /// C M C with C = (1/√2)[[1,1],[1,−1]]; exact since the √2 factors pair up.
    pub fn cayley_conjugate(&self) -> Self {
        let e = &self.entries;
        let half = qr(1, 2);
        let s = |a: &WeylElement, b: &WeylElement, c: &WeylElement, d: &WeylElement| {
            (&(a + b) + &(c + d)).scale_q(&half)
        };
        let (a, b, c, d) = (&e[0][0], &e[0][1], &e[1][0], &e[1][1]);
        Self::new(
            s(a, b, c, d),
            s(a, &-b, c, &-d),
            s(a, b, &-c, &-d),
            s(a, &-b, &-c, d),
        )
    }

    /// Evaluates a polynomial p(x) with coefficients in Q[g, D] at this operator (Horner).
    pub fn poly_eval(&self, coeffs: &[MultiPoly]) -> Self {
        let mut acc = Self::zero();
        for c in coeffs.iter().rev() {
            acc = &(&acc * self) + &Self::diag(&WeylElement::scalar(c.clone()));
        }
        acc
    }

    pub fn dump(&self) -> [[Vec<WordRecord>; 2]; 2] {
        let e = &self.entries;
        [
            [e[0][0].dump(), e[0][1].dump()],
            [e[1][0].dump(), e[1][1].dump()],
        ]
    }
}

impl<'a> Add for &'a Mat2Weyl {
    type Output = Mat2Weyl;
    fn add(self, o: &Mat2Weyl) -> Mat2Weyl {
        let (a, b) = (&self.entries, &o.entries);
        Mat2Weyl::new(
            &a[0][0] + &b[0][0],
            &a[0][1] + &b[0][1],
            &a[1][0] + &b[1][0],
            &a[1][1] + &b[1][1],
        )
    }
}

impl<'a> Sub for &'a Mat2Weyl {
    type Output = Mat2Weyl;
    fn sub(self, o: &Mat2Weyl) -> Mat2Weyl {
        let (a, b) = (&self.entries, &o.entries);
        Mat2Weyl::new(
            &a[0][0] - &b[0][0],
            &a[0][1] - &b[0][1],
            &a[1][0] - &b[1][0],
            &a[1][1] - &b[1][1],
        )
    }
}

impl<'a> Neg for &'a Mat2Weyl {
    type Output = Mat2Weyl;
    fn neg(self) -> Mat2Weyl {
        self.map(|x| -x)
    }
}

impl<'a> Mul for &'a Mat2Weyl {
    type Output = Mat2Weyl;
    fn mul(self, o: &Mat2Weyl) -> Mat2Weyl {
        let (a, b) = (&self.entries, &o.entries);
        let el = |i: usize, j: usize| &(&a[i][0] * &b[0][j]) + &(&a[i][1] * &b[1][j]);
        Mat2Weyl::new(el(0, 0), el(0, 1), el(1, 0), el(1, 1))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Picture {
    /// a†a + Δσ_x + g(a + a†)σ_z + (ℓ/2)σ_z
    Tilde,
    /// a†a + Δσ_z + gσ_x(a + a†) + (ℓ/2)σ_x
    Original,
}

pub fn build_h(ell: u32, picture: Picture) -> Mat2Weyl {
    let vs = coeff_vars();
    let num = WeylElement::word(&vs, (0, 1, 1));
    let g = MultiPoly::var(&vs, "g");
    let d = MultiPoly::var(&vs, "D");
    let x = &WeylElement::annihilation(&vs) + &WeylElement::creation(&vs);
    let coupling = &x.scale(&g) + &WeylElement::constant(&vs, qr(ell as i64, 2));
    let delta = WeylElement::scalar(d);
    match picture {
        Picture::Tilde => Mat2Weyl::new(&num + &coupling, delta.clone(), delta, &num - &coupling),
        Picture::Original => {
            Mat2Weyl::new(&num + &delta, coupling.clone(), coupling, &num - &delta)
        }
    }
}

/// Reads a tabulated entry.
fn table_entry(src: &str) -> WeylElement {
    parse_weyl(src).expect("tabulated operator entries parse")
}

/// γ from β: formal adjoint followed by a ↦ −a, a† ↦ −a†.
pub fn gamma_from_beta(beta: &WeylElement) -> WeylElement {
    beta.adjoint().reflect()
}

/// The entries (α, β, γ, δ) of Q₀ with J = 𝒫Q₀, Tilde picture.
pub fn j_entries(ell: u32) -> Result<[WeylElement; 4], WeylError> {
    if ell > 6 {
        return Err(WeylError::Unsupported(ell));
    }
    let i = ell as usize;
    let alpha = table_entry(ALPHA[i]);
    let beta = table_entry(BETA[i]);
    let delta = table_entry(DELTA[i]);
    let gamma = gamma_from_beta(&beta);
    Ok([alpha, beta, gamma, delta])
}

/// J_ℓ = 𝒫[[α, β], [γ, δ]] in the Tilde picture.
pub fn build_j(ell: u32) -> Result<Mat2Weyl, WeylError> {
    let [a, b, c, d] = j_entries(ell)?;
    Ok(Mat2Weyl::new(a, b, c, d).left_mul(&WeylElement::parity(&coeff_vars())))
}

/// J_ℓ in the Original picture, by Cayley conjugation.
pub fn build_j_original(ell: u32) -> Result<Mat2Weyl, WeylError> {
    Ok(build_j(ell)?.cayley_conjugate())
}

#[derive(Debug, Clone, Serialize)]
pub struct IdentityReport {
    pub ell: u32,
    pub holds: bool,
    /// First nonzero coefficient of the difference, when the identity fails.
    pub first_nonzero: Option<String>,
}

pub fn commutation_report(ell: u32, j: &Mat2Weyl) -> IdentityReport {
    let c = build_h(ell, Picture::Tilde).commutator(j);
    IdentityReport {
        ell,
        holds: c.is_zero(),
        first_nonzero: c.first_nonzero(),
    }
}

/// [H̃_ℓ, J_ℓ] = 0 exactly.
pub fn verify_commutation(ell: u32) -> Result<IdentityReport, WeylError> {
    Ok(commutation_report(ell, &build_j(ell)?))
}

/// Coefficients of p in x, embedded into Q[g, D].
pub fn x_coefficients(p: &MultiPoly) -> Vec<MultiPoly> {
    let vs = coeff_vars();
    p.coeffs_in(0)
        .into_iter()
        .map(|c| c.embed(&vs).expect("p has variables (x, g, D)"))
        .collect()
}

pub fn square_report(ell: u32, j: &Mat2Weyl, p: &SymmetryPolynomial) -> IdentityReport {
    let h = build_h(ell, Picture::Tilde);
    let lhs = j * j;
    let rhs = h.poly_eval(&x_coefficients(&p.poly));
    let diff = &lhs - &rhs;
    IdentityReport {
        ell,
        holds: diff.is_zero(),
        first_nonzero: diff.first_nonzero(),
    }
}

/// J_ℓ² = p_ℓ(H̃_ℓ) exactly, with p_ℓ from the table.
pub fn verify_square(ell: u32) -> Result<IdentityReport, WeylError> {
    let p = crate::symmetry_poly::p_from_table(ell).map_err(|_| WeylError::Unsupported(ell))?;
    Ok(square_report(ell, &build_j(ell)?, &p))
}

/// J at g = 0 as a constant 2×2 matrix (over Q[D]) times 𝒫; None if some
/// entry still depends on a or a†.
pub fn j_at_zero_coupling(j: &Mat2Weyl) -> Option<[[MultiPoly; 2]; 2]> {
    let s = j.map(|w| w.map_coeffs(|c| c.specialize(0, &q(0))));
    let entry = |i: usize, k: usize| {
        let w = &s.entries[i][k];
        if w.terms().any(|(&(e, m, n), _)| e != 1 || m + n > 0) {
            None
        } else {
            Some(w.coeff((1, 0, 0)))
        }
    };
    Some([[entry(0, 0)?, entry(0, 1)?], [entry(1, 0)?, entry(1, 1)?]])
}
