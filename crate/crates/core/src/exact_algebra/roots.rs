//! Real-root isolation by Sturm sequences and bisection.

use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use super::upoly::{variations, IntPoly, UPoly};
use super::{AlgebraError, MultiPoly, Q};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RootInterval {
    #[serde(serialize_with = "ser_q")]
    pub low: Q,
    #[serde(serialize_with = "ser_q")]
    pub high: Q,
    pub multiplicity_hint: u32,
    /// Set when bisection landed on the root itself.
    #[serde(serialize_with = "ser_opt_q")]
    pub exact: Option<Q>,
}

fn ser_q<S: serde::Serializer>(x: &Q, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

fn ser_opt_q<S: serde::Serializer>(x: &Option<Q>, s: S) -> Result<S::Ok, S::Error> {
    match x {
        Some(v) => s.serialize_some(&v.to_string()),
        None => s.serialize_none(),
    }
}

impl RootInterval {
    pub fn width(&self) -> Q {
        &self.high - &self.low
    }

    pub fn midpoint(&self) -> Q {
        match &self.exact {
            Some(x) => x.clone(),
            None => (&self.low + &self.high) / Q::from_integer(2.into()),
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.midpoint().to_f64().unwrap_or(f64::NAN)
    }
}

/// 10^-14 as an exact rational: the default refinement width.
pub fn default_width() -> Q {
    Q::new(1.into(), num_bigint::BigInt::from(10u64).pow(14))
}

struct Isolator {
    f: IntPoly,
    sturm: Vec<IntPoly>,
}

impl Isolator {
    fn new(f: UPoly) -> Self {
        let sturm = f.sturm_sequence().iter().map(IntPoly::new).collect();
        Isolator { f: IntPoly::new(&f), sturm }
    }

    fn without_sturm(f: &UPoly) -> Self {
        Isolator { f: IntPoly::new(f), sturm: vec![] }
    }

    /// Number of roots in the open interval (a, b).
    fn count(&self, a: &Q, b: &Q) -> usize {
        let va = variations(self.sturm.iter().map(|p| p.sign_at(a)));
        let vb = variations(self.sturm.iter().map(|p| p.sign_at(b)));
        let c = va.saturating_sub(vb);
        if self.f.sign_at(b) == 0 {
            c.saturating_sub(1)
        } else {
            c
        }
    }

    fn isolate(&self, lo: &Q, hi: &Q, mult: u32) -> Vec<RootInterval> {
        let mut out = Vec::new();
        if lo >= hi || self.f.0.len() < 2 {
            return out;
        }
        let two = Q::from_integer(2.into());
        let mut stack = vec![(lo.clone(), hi.clone(), self.count(lo, hi))];
        while let Some((a, b, c)) = stack.pop() {
            if c == 0 {
                continue;
            }
            if c == 1 && self.f.sign_at(&a) != 0 && self.f.sign_at(&b) != 0 {
                out.push(RootInterval {
                    low: a,
                    high: b,
                    multiplicity_hint: mult,
                    exact: None,
                });
                continue;
            }
            let m = (&a + &b) / &two;
            if self.f.sign_at(&m) == 0 {
                let mut w = (&b - &a) / Q::from_integer(4.into());
                loop {
                    let l = &m - &w;
                    let h = &m + &w;
                    if self.f.sign_at(&l) != 0 && self.f.sign_at(&h) != 0 && self.count(&l, &h) == 1
                    {
                        break;
                    }
                    w /= &two;
                }
                let l = &m - &w;
                let h = &m + &w;
                out.push(RootInterval {
                    low: l.clone(),
                    high: h.clone(),
                    multiplicity_hint: mult,
                    exact: Some(m.clone()),
                });
                let cl = self.count(&a, &l);
                let ch = self.count(&h, &b);
                stack.push((a, l, cl));
                stack.push((h, b, ch));
            } else {
                let cl = self.count(&a, &m);
                let ch = self.count(&m, &b);
                stack.push((a, m.clone(), cl));
                stack.push((m, b, ch));
            }
        }
        out
    }

    fn bisect_once(&self, iv: &mut RootInterval) {
        let two = Q::from_integer(2.into());
        if let Some(x) = &iv.exact {
            let w = iv.width() / Q::from_integer(4.into());
            iv.low = x - &w;
            iv.high = x + &w;
            return;
        }
        let m = (&iv.low + &iv.high) / &two;
        let sm = self.f.sign_at(&m);
        if sm == 0 {
            let w = iv.width() / Q::from_integer(4.into());
            iv.low = &m - &w;
            iv.high = &m + &w;
            iv.exact = Some(m);
            return;
        }
        if sm == self.f.sign_at(&iv.low) {
            iv.low = m;
        } else {
            iv.high = m;
        }
    }

    fn refine(&self, iv: &mut RootInterval, width: &Q) {
        while iv.width() >= *width {
            self.bisect_once(iv);
        }
    }
}

/// Disjoint isolating intervals for every real root of a univariate polynomial
/// in the open interval (lo, hi), ascending.
pub fn isolate_real_roots_upoly(f: &UPoly, lo: &Q, hi: &Q) -> Vec<RootInterval> {
    let mut tagged: Vec<(usize, RootInterval)> = Vec::new();
    let factors = f.squarefree_decomposition();
    let isolators: Vec<Isolator> = factors
        .iter()
        .map(|(p, _)| Isolator::new(p.clone()))
        .collect();
    for (k, (iso, (_, mult))) in isolators.iter().zip(&factors).enumerate() {
        for iv in iso.isolate(lo, hi, *mult) {
            tagged.push((k, iv));
        }
    }
    // roots of distinct squarefree factors are distinct: shrink until disjoint
    loop {
        tagged.sort_by(|x, y| x.1.low.cmp(&y.1.low));
        let mut clash = None;
        for i in 1..tagged.len() {
            if tagged[i].1.low < tagged[i - 1].1.high {
                clash = Some(i);
                break;
            }
        }
        match clash {
            None => break,
            Some(i) => {
                let (k0, k1) = (tagged[i - 1].0, tagged[i].0);
                isolators[k0].bisect_once(&mut tagged[i - 1].1);
                isolators[k1].bisect_once(&mut tagged[i].1);
            }
        }
    }
    tagged.into_iter().map(|(_, iv)| iv).collect()
}

/// Root isolation for a polynomial in which a single variable occurs.
pub fn isolate_real_roots(
    poly: &MultiPoly,
    lo: &Q,
    hi: &Q,
) -> Result<Vec<RootInterval>, AlgebraError> {
    Ok(isolate_real_roots_upoly(&UPoly::from_multi(poly)?, lo, hi))
}

/// Refine an interval produced by `isolate_real_roots_upoly(f, ..)` to width < `width`.
pub fn refine_root(f: &UPoly, iv: &RootInterval, width: &Q) -> RootInterval {
    refine_roots(f, std::slice::from_ref(iv), width).remove(0)
}

/// `refine_root` over many intervals of the same f, sharing the squarefree part.
pub fn refine_roots(f: &UPoly, ivs: &[RootInterval], width: &Q) -> Vec<RootInterval> {
    let sq = if ivs.iter().all(|iv| iv.exact.is_some()) {
        UPoly::new(vec![Q::one()])
    } else {
        f.squarefree_part()
    };
    let iso = Isolator::without_sturm(&sq);
    ivs.iter()
        .map(|iv| {
            let mut out = iv.clone();
            iso.refine(&mut out, width);
            out
        })
        .collect()
}

/// All real roots in (lo, hi) as binary64, refined to width 1e-14 first.
pub fn real_roots_f64(f: &UPoly, lo: &Q, hi: &Q) -> Vec<f64> {
    let w = default_width();
    refine_roots(f, &isolate_real_roots_upoly(f, lo, hi), &w)
        .iter()
        .map(|iv| iv.to_f64())
        .collect()
}

/// Positive real roots (0, bound) where bound exceeds every root.
pub fn positive_roots(f: &UPoly) -> Vec<RootInterval> {
    if f.degree() == 0 {
        return Vec::new();
    }
    // Start strictly above 0, below every nonzero root (Cauchy bound of the
    // reversed polynomial), so no interval touches a root at the origin.
    let k = f.0.iter().take_while(|c| c.is_zero()).count();
    let stripped = UPoly::new(f.0[k..].to_vec());
    if stripped.degree() == 0 {
        return Vec::new();
    }
    let rev = UPoly::new(stripped.0.iter().rev().cloned().collect());
    let lo = Q::one() / (rev.cauchy_bound() + Q::one());
    let hi = f.cauchy_bound() + Q::one();
    isolate_real_roots_upoly(f, &lo, &hi)
}
