//! The ℓ = 3 fibers y² = p₃(x; g, Δ) as elliptic curves: Weierstrass
//! invariants, singular fibers in the g-plane, and the one-parameter family
//! E(T) with full rational 2-torsion.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::exact_algebra::{q, qr, q_to_f64, MultiPoly, UPoly, Q};
use crate::symmetry_poly::{gd_vars, p_from_table};
use crate::weyl_operator::x_coefficients;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EllipticError {
    #[error("E(T) is singular at T = {0}")]
    SingularCurve(String),
    #[error("bad reduction at p = {0}")]
    BadReduction(u64),
    #[error("{0} is not an odd prime")]
    InvalidPrime(u64),
    #[error("Δ must be positive and finite, got {0}")]
    InvalidDelta(f64),
    #[error("Durand–Kerner stalled after {iterations} iterations (residuals {residuals:?})")]
    RootFindingStall { iterations: usize, residuals: Vec<f64> },
}

/// Weierstrass data of 𝓔: y² = x³ + a₂x² + a₄x + a₆ (with x = 4g²·λ) and the
/// standard form y² = x³ − 27c₄x − 54c₆. Everything lives in Q[g, D].
#[derive(Debug, Clone, PartialEq)]
pub struct WeierstrassCurve {
    pub a2: MultiPoly,
    pub a4: MultiPoly,
    pub a6: MultiPoly,
    pub c4: MultiPoly,
    pub c6: MultiPoly,
    /// 2⁶3⁹(c₄³ − c₆²), the discriminant of the standard form.
    pub disc: MultiPoly,
    /// A = 16g², B = 192Δ²: c₄ = 3A² − B, c₆ = −18B.
    pub a: MultiPoly,
    pub b: MultiPoly,
}

/// Rational specialization of [`WeierstrassCurve`].
#[derive(Debug, Clone, PartialEq)]
pub struct WeierstrassValues {
    pub a2: Q,
    pub a4: Q,
    pub a6: Q,
    pub c4: Q,
    pub c6: Q,
    pub disc: Q,
}

fn disc_factor() -> Q {
    q(2i64.pow(6) * 3i64.pow(9))
}

/// Completes the cube: y² = x³ + a₂x² + a₄x + a₆ becomes, after x ↦ x − a₂/3
/// and scaling by u = 6, y² = x³ − 27c₄x − 54c₆. Returns (c₄, c₆).
fn complete_cube(a2: &MultiPoly, a4: &MultiPoly, a6: &MultiPoly) -> (MultiPoly, MultiPoly) {
    // y² = X³ + pX + r
    let p = a4 - &(a2 * a2).scale(&qr(1, 3));
    let r = a6 - &(a2 * a4).scale(&qr(1, 3)) + (a2 * a2 * a2).scale(&qr(2, 27));
    // u⁴p = −27c₄, u⁶r = −54c₆ with u = 6
    (p.scale(&qr(-1296, 27)), r.scale(&qr(-46656, 54)))
}

/// Reduction of y² = p₃(λ; g, Δ) to Weierstrass form, symbolic in (g, Δ).
pub fn reduce_ell3() -> WeierstrassCurve {
    let p3 = p_from_table(3).expect("ℓ = 3 is tabulated");
    let cs = x_coefficients(&p3.poly);
    // p₃ leads with (4g²)³ λ³; with x = 4g²λ the cubic becomes monic.
    let a_i = |i: usize| {
        let k = i as u32;
        let scaled = cs[i].div_monomial(&[2 * k, 0]).expect("divisible by g^(2k)");
        scaled.scale(&Q::new(BigInt::one(), BigInt::from(4).pow(k)))
    };
    let (a2, a4, a6) = (a_i(2), a_i(1), a_i(0));
    let (c4, c6) = complete_cube(&a2, &a4, &a6);
    let disc = (c4.pow(3) - c6.pow(2)).scale(&disc_factor());
    let vs = gd_vars();
    let g = MultiPoly::var(&vs, "g");
    let d = MultiPoly::var(&vs, "D");
    WeierstrassCurve {
        a2,
        a4,
        a6,
        c4,
        c6,
        disc,
        a: (&g * &g).scale(&q(16)),
        b: (&d * &d).scale(&q(192)),
    }
}

impl WeierstrassCurve {
    pub fn at(&self, g: &Q, delta: &Q) -> WeierstrassValues {
        let pt = [g.clone(), delta.clone()];
        WeierstrassValues {
            a2: self.a2.eval(&pt),
            a4: self.a4.eval(&pt),
            a6: self.a6.eval(&pt),
            c4: self.c4.eval(&pt),
            c6: self.c6.eval(&pt),
            disc: self.disc.eval(&pt),
        }
    }

    /// c₄ = 3A² − B and −54c₆ = 54·18·B.
    pub fn consistent(&self) -> bool {
        let three_a2_b = (&self.a * &self.a).scale(&q(3)) - &self.b;
        three_a2_b == self.c4 && self.c6.scale(&q(-54)) == self.b.scale(&q(54 * 18))
    }

    /// Disc = 2⁶3⁹((3A² − B)³ − 324B²).
    pub fn disc_in_ab(&self) -> MultiPoly {
        let c = (&self.a * &self.a).scale(&q(3)) - &self.b;
        (c.pow(3) - self.b.pow(2).scale(&q(324))).scale(&disc_factor())
    }

    /// The monic fiber cubic x³ + a₂x² + a₄x + a₆ at (g, Δ).
    pub fn fiber_cubic(&self, g: &Q, delta: &Q) -> UPoly {
        let v = self.at(g, delta);
        UPoly::new(vec![v.a6, v.a4, v.a2, q(1)])
    }
}

/// Discriminant ∏(rᵢ − rⱼ)² of a monic cubic x³ + a₂x² + a₄x + a₆.
pub fn cubic_discriminant(a2: &Q, a4: &Q, a6: &Q) -> Q {
    let (b, c, d) = (a2, a4, a6);
    b * b * c * c - q(4) * c * c * c - q(4) * b * b * b * d - q(27) * d * d + q(18) * b * c * d
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum KodairaType {
    I1,
    /// Vanishing orders of (disc, c₄) estimated numerically.
    Unclassified { ord_disc: u32, ord_c4: u32 },
}

#[derive(Debug, Clone, Serialize)]
pub struct SingularFiber {
    pub g: Complex64,
    /// A = 16g².
    pub a: Complex64,
    pub kind: KodairaType,
    /// |Disc(g)| relative to the absolute-coefficient polynomial at |g|.
    pub disc_residual: f64,
    /// |Disc′(g)| relative to the same scale times |g|⁻¹ (simple-root witness).
    pub disc_slope: f64,
    pub c4_abs: f64,
}

pub const DK_TOL: f64 = 1e-12;
pub const DK_MAX_ITER: usize = 10_000;

fn horner(c: &[Complex64], z: Complex64) -> Complex64 {
    c.iter().rev().fold(Complex64::zero(), |acc, &x| acc * z + x)
}

/// All complex roots of a polynomial (coefficients low → high) by the
/// Durand–Kerner iteration, seeded on the circle of radius 1 + max|cᵢ/cₙ|.
pub fn durand_kerner(coeffs: &[f64]) -> Result<Vec<Complex64>, EllipticError> {
    let n = coeffs.len() - 1;
    let lead = coeffs[n];
    let c: Vec<Complex64> = coeffs.iter().map(|&x| Complex64::new(x / lead, 0.0)).collect();
    let radius = 1.0 + c[..n].iter().map(|x| x.norm()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(radius, 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4))
        .collect();
    for _ in 0..DK_MAX_ITER {
        let mut worst: f64 = 0.0;
        for i in 0..n {
            let mut den = Complex64::one();
            for j in 0..n {
                if j != i {
                    den *= z[i] - z[j];
                }
            }
            let step = horner(&c, z[i]) / den;
            z[i] -= step;
            worst = worst.max(step.norm() / z[i].norm().max(1.0));
        }
        if worst <= DK_TOL {
            return Ok(z);
        }
    }
    let residuals = z.iter().map(|&r| horner(&c, r).norm()).collect();
    Err(EllipticError::RootFindingStall { iterations: DK_MAX_ITER, residuals })
}

/// Singular fibers of 𝓔 over the g-plane at fixed Δ: the 12 complex roots of
/// Disc(g), each classified by its vanishing order and c₄.
pub fn singular_fibers(delta: f64) -> Result<Vec<SingularFiber>, EllipticError> {
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(EllipticError::InvalidDelta(delta));
    }
    let w = reduce_ell3();
    let d = crate::exact_algebra::q_from_f64(delta);
    let in_g = |p: &MultiPoly| -> UPoly {
        UPoly::from_multi(&p.specialize(1, &d)).expect("univariate in g")
    };
    let disc = in_g(&w.disc);
    let c4 = in_g(&w.c4);
    let lead = disc.leading();
    let monic: Vec<f64> = disc.0.iter().map(|c| q_to_f64(&(c / &lead))).collect();
    let roots = durand_kerner(&monic)?;
    let dmonic: Vec<f64> = (1..monic.len()).map(|k| k as f64 * monic[k]).collect();
    let c4f: Vec<f64> = c4.0.iter().map(q_to_f64).collect();
    let mut out: Vec<SingularFiber> = roots
        .into_iter()
        .map(|g| {
            let cz = |c: &[f64]| horner(&c.iter().map(|&x| Complex64::new(x, 0.0)).collect::<Vec<_>>(), g);
            let scale = monic.iter().rev().fold(0.0, |acc, x| acc * g.norm() + x.abs()).max(1.0);
            let disc_residual = cz(&monic).norm() / scale;
            let disc_slope = cz(&dmonic).norm() * g.norm().max(1.0) / scale;
            let c4_abs = cz(&c4f).norm();
            let ord_disc = if disc_slope > 1e-6 { 1 } else { 2 };
            let ord_c4 = if c4_abs > 1e-8 { 0 } else { 1 };
            let kind = if ord_disc == 1 && ord_c4 == 0 {
                KodairaType::I1
            } else {
                KodairaType::Unclassified { ord_disc, ord_c4 }
            };
            SingularFiber { g, a: 16.0 * g * g, kind, disc_residual, disc_slope, c4_abs }
        })
        .collect();
    out.sort_by(|x, y| x.g.re.total_cmp(&y.g.re).then(x.g.im.total_cmp(&y.g.im)));
    Ok(out)
}

/// Number of values in `zs` that are pairwise farther apart than `tol` (relative).
pub fn distinct_count(zs: &[Complex64], tol: f64) -> usize {
    let mut reps: Vec<Complex64> = Vec::new();
    for &z in zs {
        if !reps.iter().any(|r| (r - z).norm() <= tol * z.norm().max(1.0)) {
            reps.push(z);
        }
    }
    reps.len()
}

/// E(T): y² = (x + 7T(T+12) + 240)(x + T(7T+100) + 48)(x + T(7T+116) + 432).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ETCurve {
    #[serde(serialize_with = "ser_q")]
    pub t: Q,
    /// The points P₁, P₂, P₃ of order two (y = 0).
    #[serde(serialize_with = "ser_q3")]
    pub two_torsion: [Q; 3],
    /// Monic cubic coefficients (a₂, a₄, a₆).
    #[serde(serialize_with = "ser_q3")]
    pub cubic: [Q; 3],
    /// ∏(xᵢ − xⱼ)² over the 2-torsion abscissae.
    #[serde(serialize_with = "ser_q")]
    pub disc: Q,
    /// disc == 2²⁶(T − 12)²(T + 6)²(T + 24)².
    pub disc_matches: bool,
}

fn ser_q<S: serde::Serializer>(x: &Q, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

fn ser_q3<S: serde::Serializer>(x: &[Q; 3], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(3))?;
    for v in x {
        seq.serialize_element(&v.to_string())?;
    }
    seq.end()
}

/// (A, B) = (2(T + 6), 9T(T + 12)), the parameters of E(T) in
/// y² = x³ − 27(3A² − B)x + 54·18B.
pub fn et_parameters(t: &Q) -> (Q, Q) {
    (q(2) * (t + q(6)), q(9) * t * (t + q(12)))
}

/// E(T)'s discriminant by the closed form 2²⁶(T − 12)²(T + 6)²(T + 24)².
pub fn et_disc_formula(t: &Q) -> Q {
    let f = (t - q(12)) * (t + q(6)) * (t + q(24));
    q(1 << 26) * &f * &f
}

pub fn et_curve(t: &Q) -> Result<ETCurve, EllipticError> {
    if [12, -6, -24].iter().any(|&s| *t == q(s)) {
        return Err(EllipticError::SingularCurve(t.to_string()));
    }
    let x1 = -(q(7) * t * (t + q(12)) + q(240));
    let x2 = -(t * (q(7) * t + q(100)) + q(48));
    let x3 = -(t * (q(7) * t + q(116)) + q(432));
    let a2 = -(&x1 + &x2 + &x3);
    let a4 = &x1 * &x2 + &x1 * &x3 + &x2 * &x3;
    let a6 = -(&x1 * &x2 * &x3);
    let disc = {
        let p = (&x1 - &x2) * (&x1 - &x3) * (&x2 - &x3);
        &p * &p
    };
    let disc_matches = disc == et_disc_formula(t) && disc == cubic_discriminant(&a2, &a4, &a6);
    Ok(ETCurve { t: t.clone(), two_torsion: [x1, x2, x3], cubic: [a2, a4, a6], disc, disc_matches })
}

/// y² = x³ + a₂x² + a₄x + a₆ with integer coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntCurve {
    pub a2: i128,
    pub a4: i128,
    pub a6: i128,
}

impl IntCurve {
    pub fn short(a4: i128, a6: i128) -> Self {
        IntCurve { a2: 0, a4, a6 }
    }

    pub fn from_et(c: &ETCurve) -> Option<Self> {
        let int = |x: &Q| if x.is_integer() { x.to_integer().to_i128() } else { None };
        Some(IntCurve { a2: int(&c.cubic[0])?, a4: int(&c.cubic[1])?, a6: int(&c.cubic[2])? })
    }

    pub fn disc(&self) -> BigInt {
        let b = |x: i128| Q::from_integer(BigInt::from(x));
        cubic_discriminant(&b(self.a2), &b(self.a4), &b(self.a6)).to_integer()
    }
}

fn is_odd_prime(p: u64) -> bool {
    p > 2 && p % 2 == 1 && (3..).step_by(2).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

/// #E(F_p) by enumeration, including the point at infinity.
pub fn count_points_mod_p(curve: &IntCurve, p: u64) -> Result<u64, EllipticError> {
    if !is_odd_prime(p) || p > 1_000_003 {
        return Err(EllipticError::InvalidPrime(p));
    }
    let pb = BigInt::from(p);
    if curve.disc().mod_floor(&pb).is_zero() {
        return Err(EllipticError::BadReduction(p));
    }
    let m = |x: i128| x.rem_euclid(p as i128) as u64;
    let (a2, a4, a6) = (m(curve.a2), m(curve.a4), m(curve.a6));
    let mut squares = vec![0u64; p as usize];
    for y in 0..p {
        squares[(y * y % p) as usize] += 1;
    }
    let mut count = 1;
    for x in 0..p {
        let f = ((x * x % p * x) % p + a2 * x % p * x % p + a4 * x % p + a6) % p;
        count += squares[f as usize];
    }
    Ok(count)
}

/// |#E(F_p) − p − 1| ≤ 2√p.
pub fn hasse_ok(count: u64, p: u64) -> bool {
    let t = count as f64 - p as f64 - 1.0;
    t * t <= 4.0 * p as f64
}

pub const TORSION_PRIMES: [u64; 5] = [3, 5, 7, 11, 13];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TorsionVerdict {
    /// Some good-reduction count equals 4: the torsion is exactly Z₂ ⊕ Z₂.
    ConsistentZ2xZ2,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TorsionReport {
    pub t: i64,
    /// (p, #E(F_p)) for every good prime tried.
    pub counts: Vec<(u64, u64)>,
    /// First prime whose count pins the torsion, if any.
    pub prime: Option<u64>,
    pub verdict: TorsionVerdict,
}

/// For each nonsingular T, reduces E(T) at the good primes in
/// [`TORSION_PRIMES`]. The rational torsion injects into every E(F_p) and
/// contains the visible Z₂ ⊕ Z₂, so a count of 4 settles it.
pub fn torsion_check(ts: impl IntoIterator<Item = i64>) -> Vec<TorsionReport> {
    ts.into_iter()
        .filter_map(|t| {
            let c = et_curve(&q(t)).ok()?;
            let ic = IntCurve::from_et(&c)?;
            let counts: Vec<(u64, u64)> =
                TORSION_PRIMES.iter().filter_map(|&p| count_points_mod_p(&ic, p).ok().map(|n| (p, n))).collect();
            debug_assert!(counts.iter().all(|(_, n)| n % 4 == 0));
            let prime = counts.iter().find(|(_, n)| *n == 4).map(|(p, _)| *p);
            let verdict = if prime.is_some() { TorsionVerdict::ConsistentZ2xZ2 } else { TorsionVerdict::Inconclusive };
            Some(TorsionReport { t, counts, prime, verdict })
        })
        .collect()
}

/// C(M, N) = 4M² + 3MN(4 + M) + 9N²(4 + M).
pub fn c_mn(m: &BigInt, n: &BigInt) -> BigInt {
    let four_m = m + BigInt::from(4);
    BigInt::from(4) * m * m + BigInt::from(3) * m * n * &four_m + BigInt::from(9) * n * n * &four_m
}

pub fn is_perfect_square(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let r = n.sqrt();
    &r * &r == *n
}
