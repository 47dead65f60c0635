//! Bargmann realization (a → ∂_z, a† → z, 𝒫f(z) = f(−z)) acting on
//! Juddian functions e^{±gz}·(polynomial 2-vector).

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::Serialize;

use super::element::WeylElement;
use super::matrix::{build_h, build_j, Mat2Weyl, Picture};
use super::WeylError;
use crate::constraint_poly::juddian_g_roots_f64;
use crate::exact_algebra::{q, MultiPoly, Q};
use crate::symmetry_poly::{p_from_determinant, p_from_table};

/// Exact rationals or binary64.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_q(x: &Q) -> Self;
    fn to_f64(&self) -> f64;
    fn eval_poly(p: &MultiPoly, point: &[Self]) -> Self;

    fn from_i64(n: i64) -> Self {
        Self::from_q(&q(n))
    }
}

impl Scalar for Q {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_q(x: &Q) -> Self {
        x.clone()
    }
    fn to_f64(&self) -> f64 {
        crate::exact_algebra::q_to_f64(self)
    }
    fn eval_poly(p: &MultiPoly, point: &[Self]) -> Self {
        p.eval(point)
    }
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_q(x: &Q) -> Self {
        crate::exact_algebra::q_to_f64(x)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn eval_poly(p: &MultiPoly, point: &[Self]) -> Self {
        p.eval_f64(point)
    }
}

fn poly_add<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| match (a.get(i), b.get(i)) {
            (Some(x), Some(y)) => x.clone() + y.clone(),
            (Some(x), None) | (None, Some(x)) => x.clone(),
            (None, None) => unreachable!(),
        })
        .collect()
}

fn poly_scale<S: Scalar>(a: &[S], c: &S) -> Vec<S> {
    a.iter().map(|x| x.clone() * c.clone()).collect()
}

fn poly_mul<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![S::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].clone() + x.clone() * y.clone();
        }
    }
    out
}

/// (d/dz + c)p
fn shifted_derivative<S: Scalar>(p: &[S], c: &S) -> Vec<S> {
    let mut out = poly_scale(p, c);
    for k in 1..p.len() {
        out[k - 1] = out[k - 1].clone() + p[k].clone() * S::from_i64(k as i64);
    }
    out
}

/// e^{sign·g·z}·(p₁(z), p₂(z)); polynomial coefficients low to high.
#[derive(Debug, Clone, PartialEq)]
pub struct JuddianFunction<S> {
    pub sign: i8,
    pub comps: [Vec<S>; 2],
}

impl<S: Scalar> JuddianFunction<S> {
    /// Degree of component i, ignoring exact zeros at the top.
    pub fn degree(&self, i: usize) -> Option<usize> {
        self.comps[i].iter().rposition(|c| *c != S::zero())
    }

    pub fn scale(&self, c: &S) -> Self {
        JuddianFunction {
            sign: self.sign,
            comps: [poly_scale(&self.comps[0], c), poly_scale(&self.comps[1], c)],
        }
    }

    pub fn to_f64(&self) -> JuddianFunction<f64> {
        JuddianFunction {
            sign: self.sign,
            comps: [
                self.comps[0].iter().map(|c| c.to_f64()).collect(),
                self.comps[1].iter().map(|c| c.to_f64()).collect(),
            ],
        }
    }

    fn width(&self) -> usize {
        self.comps[0].len().max(self.comps[1].len())
    }

    /// Both components padded to length n and concatenated.
    fn flat_f64(&self, n: usize) -> Vec<f64> {
        let mut v = Vec::with_capacity(2 * n);
        for c in &self.comps {
            v.extend(c.iter().map(|x| x.to_f64()));
            v.extend(std::iter::repeat(0.0).take(n - c.len()));
        }
        v
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum JuddianKind {
    /// Ψ^{(N,ℓ)}, factor e^{−gz}
    Psi,
    /// Φ^{(N+ℓ,−ℓ)}, factor e^{+gz}
    Phi,
}

/// K_n^{(M, ε/2)}, n = 0..=M.
pub fn k_values<S: Scalar>(m: u32, eps: i64, g: &S, delta: &S) -> Vec<S> {
    let two_g = S::from_i64(2) * g.clone();
    let d2 = delta.clone() * delta.clone();
    let mut v = vec![S::one()];
    for k in 1..=m as i64 {
        let inner = two_g.clone()
            + (S::from_i64(k - 1 - m as i64 - eps) + d2.clone() / S::from_i64(m as i64 - k + 1))
                / two_g.clone();
        let prev2 = if k >= 2 {
            v[k as usize - 2].clone()
        } else {
            S::zero()
        };
        let next = (inner * v[k as usize - 1].clone() - prev2) / S::from_i64(k);
        v.push(next);
    }
    v
}

/// Absolute tolerance on K_M used for floating-point input.
pub const CONSTRAINT_TOL: f64 = 1e-12;

/// Ψ^{(N,ℓ)} or Φ^{(N+ℓ,−ℓ)} at a point of the constraint curve, normalized
/// so that ψ₁ (resp. φ₂) is monic.
pub fn build_juddian<S: Scalar>(
    n: u32,
    ell: u32,
    g: &S,
    delta: &S,
    which: JuddianKind,
) -> Result<JuddianFunction<S>, WeylError> {
    let (m, eps, sign): (u32, i64, i8) = match which {
        JuddianKind::Psi => (n, ell as i64, -1),
        JuddianKind::Phi => (n + ell, -(ell as i64), 1),
    };
    let k = k_values(m, eps, g, delta);
    let scale = k.iter().map(|x| x.to_f64().abs()).fold(1.0, f64::max);
    let residual = k[m as usize].to_f64().abs() / scale;
    if residual > CONSTRAINT_TOL {
        return Err(WeylError::ConstraintViolated { residual });
    }
    // Ψ: powers of (g + z); Φ: powers of (g − z)
    let w = match which {
        JuddianKind::Psi => vec![g.clone(), S::one()],
        JuddianKind::Phi => vec![g.clone(), -S::one()],
    };
    let mut wp = vec![S::one()];
    let mut plain: Vec<S> = Vec::new();
    let mut weighted: Vec<S> = Vec::new();
    for i in 0..m as usize {
        plain = poly_add(&plain, &poly_scale(&wp, &k[i]));
        let c = k[i].clone() / S::from_i64(i as i64 - m as i64);
        weighted = poly_add(&weighted, &poly_scale(&wp, &c));
        wp = poly_mul(&wp, &w);
    }
    let top = S::from_i64(2)
        * g.clone()
        * (if m > 0 {
            k[m as usize - 1].clone()
        } else {
            S::zero()
        })
        / delta.clone();
    let lead = poly_add(
        &poly_scale(&wp, &top),
        &poly_scale(&weighted, &-delta.clone()),
    );
    let (mut c1, mut c2) = match which {
        JuddianKind::Psi => (lead, plain),
        JuddianKind::Phi => (plain, lead),
    };
    let monic = match which {
        JuddianKind::Psi => &c1,
        JuddianKind::Phi => &c2,
    };
    let lc = monic[m as usize].clone();
    let inv = S::one() / lc;
    c1 = poly_scale(&c1, &inv);
    c2 = poly_scale(&c2, &inv);
    c1.truncate(m as usize + 1);
    c2.truncate(m as usize + 1);
    Ok(JuddianFunction {
        sign,
        comps: [c1, c2],
    })
}

/// 𝒫^e (a†)^m a^n applied to e^{s g z} p(z).
fn apply_word<S: Scalar>(word: (u8, u32, u32), sign: i8, p: &[S], g: &S) -> (i8, Vec<S>) {
    let (e, m, n) = word;
    let sg = if sign >= 0 { g.clone() } else { -g.clone() };
    let mut out = p.to_vec();
    for _ in 0..n {
        out = shifted_derivative(&out, &sg);
    }
    let mut shifted = vec![S::zero(); m as usize];
    shifted.extend(out);
    if e == 1 {
        for (k, c) in shifted.iter_mut().enumerate() {
            if k % 2 == 1 {
                *c = -c.clone();
            }
        }
        (-sign, shifted)
    } else {
        (sign, shifted)
    }
}

fn apply_element<S: Scalar>(
    w: &WeylElement,
    sign: i8,
    p: &[S],
    g: &S,
    delta: &S,
) -> Vec<(i8, Vec<S>)> {
    let point = [g.clone(), delta.clone()];
    w.terms()
        .map(|(word, c)| {
            let cv = S::eval_poly(c, &point);
            let (s, r) = apply_word(*word, sign, p, g);
            (s, poly_scale(&r, &cv))
        })
        .collect()
}

/// Exact application of an operator matrix. Fails if the image mixes e^{gz}
/// and e^{−gz} parts.
pub fn bargmann_apply<S: Scalar>(
    op: &Mat2Weyl,
    f: &JuddianFunction<S>,
    g: &S,
    delta: &S,
) -> Result<JuddianFunction<S>, WeylError> {
    let mut sign: Option<i8> = None;
    let mut comps: [Vec<S>; 2] = [Vec::new(), Vec::new()];
    for (i, comp) in comps.iter_mut().enumerate() {
        for j in 0..2 {
            for (s, r) in apply_element(op.get(i, j), f.sign, &f.comps[j], g, delta) {
                match sign {
                    None => sign = Some(s),
                    Some(s0) if s0 != s => return Err(WeylError::MixedExponential),
                    _ => {}
                }
                *comp = poly_add(comp, &r);
            }
        }
    }
    for c in comps.iter_mut() {
        while c.last().is_some_and(|x| *x == S::zero()) {
            c.pop();
        }
    }
    Ok(JuddianFunction {
        sign: sign.unwrap_or(f.sign),
        comps,
    })
}

/// The c with u ≈ c·v (least squares on coefficient vectors) and the relative
/// residual ‖u − cv‖/‖u‖.
pub fn scalar_fit<S: Scalar>(
    u: &JuddianFunction<S>,
    v: &JuddianFunction<S>,
) -> Result<(S, f64), WeylError> {
    if u.sign != v.sign {
        return Err(WeylError::NotProportional {
            residual: f64::INFINITY,
        });
    }
    let n = u.comps[0]
        .len()
        .max(u.comps[1].len())
        .max(v.comps[0].len())
        .max(v.comps[1].len());
    let pad = |p: &[S]| {
        let mut x = p.to_vec();
        x.resize(n, S::zero());
        x
    };
    let (mut uv, mut vv) = (S::zero(), S::zero());
    let (uu, ww): (Vec<S>, Vec<S>) = (
        [pad(&u.comps[0]), pad(&u.comps[1])].concat(),
        [pad(&v.comps[0]), pad(&v.comps[1])].concat(),
    );
    for (a, b) in uu.iter().zip(&ww) {
        uv = uv + a.clone() * b.clone();
        vv = vv + b.clone() * b.clone();
    }
    if vv == S::zero() {
        return Err(WeylError::NotProportional {
            residual: f64::INFINITY,
        });
    }
    let c = uv / vv;
    let unorm = uu.iter().map(|x| x.to_f64().powi(2)).sum::<f64>().sqrt();
    let res = uu
        .iter()
        .zip(&ww)
        .map(|(a, b)| (a.clone() - c.clone() * b.clone()).to_f64().powi(2))
        .sum::<f64>()
        .sqrt();
    Ok((c, if unorm > 0.0 { res / unorm } else { res }))
}

/// ‖H̃f − λf‖/‖H̃f‖ in coefficient space.
pub fn eigen_residual<S: Scalar>(
    ell: u32,
    f: &JuddianFunction<S>,
    lambda: &S,
    g: &S,
    delta: &S,
) -> f64 {
    let hf = bargmann_apply(&build_h(ell, Picture::Tilde), f, g, delta)
        .expect("H̃ preserves the exponential");
    let lf = f.scale(lambda);
    let n = hf.width().max(lf.width());
    let (a, b) = (hf.flat_f64(n), lf.flat_f64(n));
    let diff = a
        .iter()
        .zip(&b)
        .map(|(x, y)| (x - y).powi(2))
        .sum::<f64>()
        .sqrt();
    let norm = a.iter().map(|x| x * x).sum::<f64>().sqrt().max(1.0);
    diff / norm
}

pub const PROPORTIONALITY_TOL: f64 = 1e-9;
pub const PRODUCT_TOL: f64 = 1e-8;

#[derive(Debug, Clone)]
pub struct ActionConstants<S> {
    /// JΦ = αΨ
    pub alpha: S,
    /// JΨ = βΦ
    pub beta: S,
    pub fit_residual: f64,
    /// p_ℓ(N + ℓ/2 − g²; g, Δ)
    pub p_at_lambda: S,
    pub product_residual: f64,
}

/// p_ℓ(x; g, Δ): table for ℓ ≤ 6, determinant beyond.
fn p_value<S: Scalar>(ell: u32, x: &S, g: &S, delta: &S) -> S {
    let p = p_from_table(ell)
        .map(|p| p.poly)
        .unwrap_or_else(|_| p_from_determinant(ell).poly);
    S::eval_poly(&p, &[x.clone(), g.clone(), delta.clone()])
}

fn lambda_of<S: Scalar>(n: u32, ell: u32, g: &S) -> S {
    S::from_q(&(q(2 * n as i64 + ell as i64) / q(2))) - g.clone() * g.clone()
}

pub fn action_constants_with<S: Scalar>(
    j: &Mat2Weyl,
    n: u32,
    ell: u32,
    g: &S,
    delta: &S,
) -> Result<ActionConstants<S>, WeylError> {
    let psi = build_juddian(n, ell, g, delta, JuddianKind::Psi)?;
    let phi = build_juddian(n, ell, g, delta, JuddianKind::Phi)?;
    let (beta, r1) = scalar_fit(&bargmann_apply(j, &psi, g, delta)?, &phi)?;
    let (alpha, r2) = scalar_fit(&bargmann_apply(j, &phi, g, delta)?, &psi)?;
    let fit_residual = r1.max(r2);
    if fit_residual > PROPORTIONALITY_TOL {
        return Err(WeylError::NotProportional {
            residual: fit_residual,
        });
    }
    let p_at_lambda = p_value(ell, &lambda_of(n, ell, g), g, delta);
    let prod = (alpha.clone() * beta.clone()).to_f64();
    let pv = p_at_lambda.to_f64();
    let product_residual = (prod - pv).abs() / pv.abs().max(1.0);
    if product_residual > PRODUCT_TOL {
        return Err(WeylError::NotProportional {
            residual: product_residual,
        });
    }
    Ok(ActionConstants {
        alpha,
        beta,
        fit_residual,
        p_at_lambda,
        product_residual,
    })
}

/// (α, β) with the tabulated J_ℓ (ℓ ≤ 6).
pub fn action_constants<S: Scalar>(
    n: u32,
    ell: u32,
    g: &S,
    delta: &S,
) -> Result<ActionConstants<S>, WeylError> {
    action_constants_with(&build_j(ell)?, n, ell, g, delta)
}

/// Coupling values g > 0 (refined to 1e-14) at which Ψ^{(N,ℓ)} exists for the given Δ.
pub fn juddian_points(n: u32, ell: u32, delta: &Q) -> Vec<f64> {
    juddian_g_roots_f64(n, ell, delta)
}

/// Fock coefficients ⟨n|f⟩ = f_n √(n!) of e^{sgz}p(z), n < len.
pub fn fock_coefficients(sign: i8, p: &[f64], g: f64, len: usize) -> Vec<f64> {
    let sg = if sign >= 0 { g } else { -g };
    let mut lnfact = vec![0.0f64; len + 1];
    for k in 1..=len {
        lnfact[k] = lnfact[k - 1] + (k as f64).ln();
    }
    (0..len)
        .map(|n| {
            p.iter()
                .enumerate()
                .take(n + 1)
                .map(|(j, &pj)| {
                    let k = n - j;
                    if sg == 0.0 {
                        return if k == 0 {
                            pj * (0.5 * lnfact[n]).exp()
                        } else {
                            0.0
                        };
                    }
                    let mag = k as f64 * sg.abs().ln() + 0.5 * lnfact[n] - lnfact[k];
                    let s = if sg < 0.0 && k % 2 == 1 { -1.0 } else { 1.0 };
                    pj * s * mag.exp()
                })
                .sum()
        })
        .collect()
}

/// Fock vector (spin-major: component 1 then component 2) of a sum of Juddian parts.
pub fn fock_vector(parts: &[(f64, &JuddianFunction<f64>)], g: f64, len: usize) -> Vec<f64> {
    let mut v = vec![0.0; 2 * len];
    for (c, f) in parts {
        for i in 0..2 {
            for (k, x) in fock_coefficients(f.sign, &f.comps[i], g, len)
                .into_iter()
                .enumerate()
            {
                v[i * len + k] += c * x;
            }
        }
    }
    v
}

#[derive(Debug, Clone)]
pub struct ParitySolutions {
    pub mu: f64,
    pub alpha: f64,
    pub beta: f64,
    pub psi: JuddianFunction<f64>,
    pub phi: JuddianFunction<f64>,
    /// Π^± = Φ ± (μ/β)Ψ
    pub ratio: f64,
    /// max over ± of ‖JΠ^± ∓ μΠ^±‖/‖μΠ^±‖
    pub eigen_residual: f64,
    /// ‖P_±² − P_±‖ for the projections on span{Ψ, Φ}
    pub projection_residual: f64,
    /// ⟨Π⁺, Π⁻⟩/(‖Π⁺‖‖Π⁻‖) in the truncated Fock basis
    pub overlap: f64,
    /// Relative residual of fitting JΨ ≈ cΨ (resp. JΦ ≈ cΦ) in Fock space.
    pub self_fit_residual: [f64; 2],
}

pub const FOCK_LEN: usize = 160;

fn fit_residual_f64(u: &[f64], v: &[f64]) -> f64 {
    let uv: f64 = u.iter().zip(v).map(|(a, b)| a * b).sum();
    let vv: f64 = v.iter().map(|b| b * b).sum();
    let c = uv / vv;
    let r: f64 = u
        .iter()
        .zip(v)
        .map(|(a, b)| (a - c * b).powi(2))
        .sum::<f64>()
        .sqrt();
    r / u.iter().map(|a| a * a).sum::<f64>().sqrt()
}

pub fn parity_solutions_with(
    j: &Mat2Weyl,
    n: u32,
    ell: u32,
    g: f64,
    delta: f64,
) -> Result<ParitySolutions, WeylError> {
    let ac = action_constants_with(j, n, ell, &g, &delta)?;
    let psi = build_juddian(n, ell, &g, &delta, JuddianKind::Psi)?;
    let phi = build_juddian(n, ell, &g, &delta, JuddianKind::Phi)?;
    let mu = ac.p_at_lambda.sqrt();
    let ratio = mu / ac.beta;
    let jpsi = bargmann_apply(j, &psi, &g, &delta)?;
    let jphi = bargmann_apply(j, &phi, &g, &delta)?;
    let mut eigen_residual: f64 = 0.0;
    let mut pis = Vec::new();
    for s in [1.0, -1.0] {
        let pi = fock_vector(&[(1.0, &phi), (s * ratio, &psi)], g, FOCK_LEN);
        let jpi = fock_vector(&[(1.0, &jphi), (s * ratio, &jpsi)], g, FOCK_LEN);
        let num: f64 = jpi
            .iter()
            .zip(&pi)
            .map(|(a, b)| (a - s * mu * b).powi(2))
            .sum::<f64>()
            .sqrt();
        let den: f64 = pi.iter().map(|b| (mu * b).powi(2)).sum::<f64>().sqrt();
        eigen_residual = eigen_residual.max(num / den);
        pis.push(pi);
    }
    let dot: f64 = pis[0].iter().zip(&pis[1]).map(|(a, b)| a * b).sum();
    let n0: f64 = pis[0].iter().map(|a| a * a).sum::<f64>().sqrt();
    let n1: f64 = pis[1].iter().map(|a| a * a).sum::<f64>().sqrt();
    // J̃ on span{Ψ, Φ}: columns are images of Ψ, Φ
    let jt = [[0.0, ac.alpha / mu], [ac.beta / mu, 0.0]];
    let mut projection_residual: f64 = 0.0;
    for s in [1.0, -1.0] {
        let pm = [
            [0.5 * (1.0 + s * jt[0][0]), 0.5 * s * jt[0][1]],
            [0.5 * s * jt[1][0], 0.5 * (1.0 + s * jt[1][1])],
        ];
        for r in 0..2 {
            for c in 0..2 {
                let sq = pm[r][0] * pm[0][c] + pm[r][1] * pm[1][c];
                projection_residual = projection_residual.max((sq - pm[r][c]).abs());
            }
        }
    }
    let fpsi = fock_vector(&[(1.0, &psi)], g, FOCK_LEN);
    let fphi = fock_vector(&[(1.0, &phi)], g, FOCK_LEN);
    let self_fit_residual = [
        fit_residual_f64(&fock_vector(&[(1.0, &jpsi)], g, FOCK_LEN), &fpsi),
        fit_residual_f64(&fock_vector(&[(1.0, &jphi)], g, FOCK_LEN), &fphi),
    ];
    Ok(ParitySolutions {
        mu,
        alpha: ac.alpha,
        beta: ac.beta,
        psi,
        phi,
        ratio,
        eigen_residual,
        projection_residual,
        overlap: dot / (n0 * n1),
        self_fit_residual,
    })
}

/// Parity solutions with the tabulated J_ℓ (ℓ ≤ 6).
pub fn parity_solutions(
    n: u32,
    ell: u32,
    g: f64,
    delta: f64,
) -> Result<ParitySolutions, WeylError> {
    parity_solutions_with(&build_j(ell)?, n, ell, g, delta)
}
