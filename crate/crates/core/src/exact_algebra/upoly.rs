//! Dense univariate polynomials over Q: the workhorse behind root isolation.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{AlgebraError, MultiPoly, Q};

/// Coefficients from low to high degree, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct UPoly(pub Vec<Q>);

impl UPoly {
    pub fn new(mut c: Vec<Q>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        UPoly(c)
    }

    pub fn zero() -> Self {
        UPoly(Vec::new())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn leading(&self) -> Q {
        self.0.last().cloned().unwrap_or_else(Q::zero)
    }

    /// Univariate view of a polynomial in which at most one variable occurs.
    pub fn from_multi(p: &MultiPoly) -> Result<Self, AlgebraError> {
        let mut used: Option<usize> = None;
        for (m, _) in p.terms() {
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    match used {
                        None => used = Some(i),
                        Some(j) if j != i => return Err(AlgebraError::NotUnivariate),
                        _ => {}
                    }
                }
            }
        }
        let mut c: Vec<Q> = Vec::new();
        for (m, v) in p.terms() {
            let k = used.map(|i| m.0[i]).unwrap_or(0) as usize;
            if c.len() <= k {
                c.resize(k + 1, Q::zero());
            }
            c[k] += v;
        }
        Ok(UPoly::new(c))
    }

    pub fn eval(&self, x: &Q) -> Q {
        let mut acc = Q::zero();
        for c in self.0.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        use num_traits::ToPrimitive;
        self.0
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
    }

    pub fn sign_at(&self, x: &Q) -> i8 {
        IntPoly::new(self).sign_at(x)
    }

    pub fn derivative(&self) -> Self {
        UPoly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Q::from_integer((i as i64).into()))
                .collect(),
        )
    }

    pub fn scale(&self, s: &Q) -> Self {
        UPoly::new(self.0.iter().map(|c| c * s).collect())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&(Q::one() / self.leading()))
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.0.len().max(o.0.len());
        let mut c = vec![Q::zero(); n];
        for (i, x) in self.0.iter().enumerate() {
            c[i] += x;
        }
        for (i, x) in o.0.iter().enumerate() {
            c[i] += x;
        }
        UPoly::new(c)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&-Q::one()))
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return UPoly::zero();
        }
        let mut c = vec![Q::zero(); self.0.len() + o.0.len() - 1];
        for (i, x) in self.0.iter().enumerate() {
            for (j, y) in o.0.iter().enumerate() {
                c[i + j] += x * y;
            }
        }
        UPoly::new(c)
    }

    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let mut r = self.0.clone();
        let dd = d.degree();
        let lc = d.leading();
        if r.len() < d.0.len() {
            return (UPoly::zero(), self.clone());
        }
        let mut qv = vec![Q::zero(); r.len() - dd];
        for k in (0..qv.len()).rev() {
            let t = &r[k + dd] / &lc;
            if !t.is_zero() {
                for (j, dc) in d.0.iter().enumerate() {
                    r[k + j] -= &t * dc;
                }
            }
            qv[k] = t;
        }
        r.truncate(dd);
        (UPoly::new(qv), UPoly::new(r))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.divrem(d).1
    }

    /// Monic gcd.
    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// Squarefree decomposition (Yun): returns (factor, multiplicity) with
    /// non-constant, pairwise coprime factors.
    pub fn squarefree_decomposition(&self) -> Vec<(UPoly, u32)> {
        let mut out = Vec::new();
        if self.degree() == 0 {
            return out;
        }
        let f = self.monic();
        let df = f.derivative();
        let a0 = f.gcd(&df);
        let mut b = f.divrem(&a0).0;
        let mut c = df.divrem(&a0).0;
        let mut d = c.sub(&b.derivative());
        let mut i = 1;
        loop {
            let a = b.gcd(&d);
            if a.degree() > 0 {
                out.push((a.clone(), i));
            }
            b = b.divrem(&a).0;
            if b.degree() == 0 {
                break;
            }
            c = d.divrem(&a).0;
            d = c.sub(&b.derivative());
            i += 1;
        }
        out
    }

    pub fn squarefree_part(&self) -> Self {
        if self.degree() == 0 {
            return self.clone();
        }
        let f = self.monic();
        f.divrem(&f.gcd(&f.derivative())).0
    }

    /// Cauchy bound: every real root r satisfies |r| < bound.
    pub fn cauchy_bound(&self) -> Q {
        let lc = self.leading().abs();
        let m = self.0[..self.degree()]
            .iter()
            .map(|c| c.abs() / &lc)
            .max()
            .unwrap_or_else(Q::zero);
        m + Q::one()
    }

    /// Sturm sequence f, f', -rem(...), each scaled by a positive constant.
    pub fn sturm_sequence(&self) -> Vec<UPoly> {
        let mut seq = vec![self.clone()];
        if self.degree() == 0 {
            return seq;
        }
        seq.push(self.derivative());
        loop {
            let n = seq.len();
            let r = seq[n - 2].rem(&seq[n - 1]);
            if r.is_zero() {
                break;
            }
            let s = Q::one() / r.leading().abs();
            seq.push(r.scale(&-s));
        }
        seq
    }
}

/// f scaled by the lcm of its denominators. Signs at x = a/b come from
/// Σ cᵢ aⁱ bⁿ⁻ⁱ in integers, with no gcd per operation.
pub(crate) struct IntPoly(pub(crate) Vec<BigInt>);

impl IntPoly {
    pub(crate) fn new(f: &UPoly) -> Self {
        let l = f.0.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        IntPoly(f.0.iter().map(|c| c.numer() * (&l / c.denom())).collect())
    }

    pub(crate) fn sign_at(&self, x: &Q) -> i8 {
        let Some(top) = self.0.last() else { return 0 };
        let (a, b) = (x.numer(), x.denom());
        let mut acc = top.clone();
        let mut bpow = BigInt::one();
        for c in self.0.iter().rev().skip(1) {
            bpow *= b;
            acc = acc * a + c * &bpow;
        }
        match acc.sign() {
            Sign::NoSign => 0,
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

/// Number of sign changes of a Sturm sequence at x (zeros dropped).
pub fn sign_variations(seq: &[UPoly], x: &Q) -> usize {
    variations(seq.iter().map(|p| p.sign_at(x)))
}

pub(crate) fn variations(signs: impl Iterator<Item = i8>) -> usize {
    let mut last = 0i8;
    let mut n = 0;
    for s in signs {
        if s == 0 {
            continue;
        }
        if last != 0 && s != last {
            n += 1;
        }
        last = s;
    }
    n
}
