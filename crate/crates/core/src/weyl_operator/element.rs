//! Normal-ordered words 𝒫^e (a†)^m a^n with coefficients in Q[g, Δ].

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use crate::exact_algebra::{vars, AlgebraError, ExprBuilder, MultiPoly, Vars, Q};

/// (parity exponent e ∈ {0,1}, creation power m, annihilation power n).
pub type Word = (u8, u32, u32);

/// Coefficient ring variables (g, D), D standing for Δ.
pub fn coeff_vars() -> Vars {
    vars(&["g", "D"])
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WeylElement {
    vars: Vars,
    terms: BTreeMap<Word, MultiPoly>,
}

fn binom(n: u32, k: u32) -> BigInt {
    let mut r = BigInt::one();
    for i in 0..k {
        r = r * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    r
}

/// a^n (a†)^m = Σ_k k! C(n,k) C(m,k) (a†)^{m−k} a^{n−k}.
fn reorder_coeffs(n: u32, m: u32) -> Vec<(u32, BigInt)> {
    let mut out = Vec::with_capacity(n.min(m) as usize + 1);
    let mut fact = BigInt::one();
    for k in 0..=n.min(m) {
        if k > 0 {
            fact *= BigInt::from(k);
        }
        out.push((k, &fact * binom(n, k) * binom(m, k)));
    }
    out
}

impl WeylElement {
    pub fn zero(vars: &Vars) -> Self {
        WeylElement {
            vars: vars.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn scalar(c: MultiPoly) -> Self {
        let mut w = Self::zero(c.vars());
        w.add_term((0, 0, 0), c);
        w
    }

    pub fn constant(vars: &Vars, c: Q) -> Self {
        Self::scalar(MultiPoly::constant(vars, c))
    }

    pub fn one(vars: &Vars) -> Self {
        Self::constant(vars, Q::one())
    }

    pub fn word(vars: &Vars, w: Word) -> Self {
        let mut out = Self::zero(vars);
        out.add_term(w, MultiPoly::one(vars));
        out
    }

    /// a
    pub fn annihilation(vars: &Vars) -> Self {
        Self::word(vars, (0, 0, 1))
    }

    /// a†
    pub fn creation(vars: &Vars) -> Self {
        Self::word(vars, (0, 1, 0))
    }

    /// 𝒫
    pub fn parity(vars: &Vars) -> Self {
        Self::word(vars, (1, 0, 0))
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &MultiPoly)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, w: Word) -> MultiPoly {
        self.terms
            .get(&w)
            .cloned()
            .unwrap_or_else(|| MultiPoly::zero(&self.vars))
    }

    pub fn add_term(&mut self, w: Word, c: MultiPoly) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&w) {
            Some(x) => {
                let s = &*x + &c;
                if s.is_zero() {
                    self.terms.remove(&w);
                } else {
                    *x = s;
                }
            }
            None => {
                self.terms.insert(w, c);
            }
        }
    }

    /// Highest m + n over the stored words.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|&(_, m, n)| m + n).max()
    }

    pub fn scale(&self, c: &MultiPoly) -> Self {
        let mut out = Self::zero(&self.vars);
        for (w, x) in &self.terms {
            out.add_term(*w, x * c);
        }
        out
    }

    pub fn scale_q(&self, c: &Q) -> Self {
        let mut out = Self::zero(&self.vars);
        for (w, x) in &self.terms {
            out.add_term(*w, x.scale(c));
        }
        out
    }

    pub fn map_coeffs<F: Fn(&MultiPoly) -> MultiPoly>(&self, f: F) -> Self {
        let mut out = Self::zero(&self.vars);
        for (w, x) in &self.terms {
            out.add_term(*w, f(x));
        }
        out
    }

    /// Normal-ordered product.
    pub fn mul(&self, other: &Self) -> Self {
        let mut acc: BTreeMap<Word, MultiPoly> = BTreeMap::new();
        for (&(e1, m1, n1), c1) in &self.terms {
            for (&(e2, m2, n2), c2) in &other.terms {
                let c = c1 * c2;
                // move 𝒫^{e2} to the left through (a†)^{m1} a^{n1}
                let sign_neg = e2 == 1 && (m1 + n1) % 2 == 1;
                let e = (e1 + e2) % 2;
                for (k, r) in reorder_coeffs(n1, m2) {
                    let mut t = c.scale(&Q::from_integer(r));
                    if sign_neg {
                        t = -t;
                    }
                    let w = (e, m1 + m2 - k, n1 + n2 - k);
                    match acc.get_mut(&w) {
                        Some(x) => *x = &*x + &t,
                        None => {
                            acc.insert(w, t);
                        }
                    }
                }
            }
        }
        acc.retain(|_, c| !c.is_zero());
        WeylElement {
            vars: self.vars.clone(),
            terms: acc,
        }
    }

    pub fn commutator(&self, other: &Self) -> Self {
        &self.mul(other) - &other.mul(self)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(&self.vars);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Formal adjoint: (𝒫^e (a†)^m a^n)† = (a†)^n a^m 𝒫^e = (−1)^{e(m+n)} 𝒫^e (a†)^n a^m.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zero(&self.vars);
        for (&(e, m, n), c) in &self.terms {
            let c = if e == 1 && (m + n) % 2 == 1 {
                -c
            } else {
                c.clone()
            };
            out.add_term((e, n, m), c);
        }
        out
    }

    /// The substitution a ↦ −a, a† ↦ −a†.
    pub fn reflect(&self) -> Self {
        let mut out = Self::zero(&self.vars);
        for (&(e, m, n), c) in &self.terms {
            let c = if (m + n) % 2 == 1 { -c } else { c.clone() };
            out.add_term((e, m, n), c);
        }
        out
    }

    /// Coefficients with (g, D) fixed.
    pub fn specialize(&self, point: &[Q]) -> Self {
        let mut out = Self::zero(&self.vars);
        for (w, c) in &self.terms {
            out.add_term(*w, MultiPoly::constant(&self.vars, c.eval(point)));
        }
        out
    }

    pub fn first_term(&self) -> Option<(Word, MultiPoly)> {
        self.terms.iter().next().map(|(w, c)| (*w, c.clone()))
    }

    pub fn dump(&self) -> Vec<WordRecord> {
        self.terms
            .iter()
            .map(|(&(e, m, n), c)| WordRecord {
                e,
                m,
                n,
                coefficient: c
                    .terms()
                    .map(|(mono, q)| CoeffRecord {
                        exponents: mono.0.clone(),
                        value: q.to_string(),
                    })
                    .collect(),
            })
            .collect()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CoeffRecord {
    /// Exponents of (g, D).
    pub exponents: Vec<u32>,
    pub value: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct WordRecord {
    pub e: u8,
    pub m: u32,
    pub n: u32,
    pub coefficient: Vec<CoeffRecord>,
}

impl<'a> Add for &'a WeylElement {
    type Output = WeylElement;
    fn add(self, o: &WeylElement) -> WeylElement {
        let mut out = self.clone();
        for (w, c) in &o.terms {
            out.add_term(*w, c.clone());
        }
        out
    }
}

impl<'a> Sub for &'a WeylElement {
    type Output = WeylElement;
    fn sub(self, o: &WeylElement) -> WeylElement {
        let mut out = self.clone();
        for (w, c) in &o.terms {
            out.add_term(*w, -c);
        }
        out
    }
}

impl<'a> Neg for &'a WeylElement {
    type Output = WeylElement;
    fn neg(self) -> WeylElement {
        self.map_coeffs(|c| -c)
    }
}

impl<'a> Mul for &'a WeylElement {
    type Output = WeylElement;
    fn mul(self, o: &WeylElement) -> WeylElement {
        WeylElement::mul(self, o)
    }
}

impl fmt::Display for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&(e, m, n), c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            if e == 1 {
                write!(f, "*P")?;
            }
            if m > 0 {
                write!(f, "*b^{m}")?;
            }
            if n > 0 {
                write!(f, "*a^{n}")?;
            }
        }
        Ok(())
    }
}

/// Reads operator expressions in `a`, `b` (= a†), `P` (= 𝒫), `g`, `D`; words
/// are multiplied in the order written.
pub struct WeylBuilder(pub Vars);

impl ExprBuilder for WeylBuilder {
    type Out = WeylElement;
    fn number(&self, n: &Q) -> WeylElement {
        WeylElement::constant(&self.0, n.clone())
    }
    fn symbol(&self, name: &str) -> Result<WeylElement, AlgebraError> {
        match name {
            "a" => Ok(WeylElement::annihilation(&self.0)),
            "b" => Ok(WeylElement::creation(&self.0)),
            "P" => Ok(WeylElement::parity(&self.0)),
            v if self.0.iter().any(|x| x == v) => {
                Ok(WeylElement::scalar(MultiPoly::var(&self.0, v)))
            }
            _ => Err(AlgebraError::Parse(format!("unknown symbol {name}"))),
        }
    }
    fn add(&self, a: &WeylElement, b: &WeylElement) -> WeylElement {
        a + b
    }
    fn mul(&self, a: &WeylElement, b: &WeylElement) -> WeylElement {
        a * b
    }
    fn neg(&self, a: &WeylElement) -> WeylElement {
        -a
    }
}

pub fn parse_weyl(src: &str) -> Result<WeylElement, AlgebraError> {
    crate::exact_algebra::parse_expr(&WeylBuilder(coeff_vars()), src)
}

pub fn weyl_mul(a: &WeylElement, b: &WeylElement) -> WeylElement {
    a.mul(b)
}
