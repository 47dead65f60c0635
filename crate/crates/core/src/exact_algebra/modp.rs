//! Arithmetic modulo the Mersenne prime 2^61 - 1, with rational reconstruction.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{MultiPoly, Q};

pub const P: u64 = (1u64 << 61) - 1;

#[inline]
pub fn add(a: u64, b: u64) -> u64 {
    let s = a + b;
    if s >= P {
        s - P
    } else {
        s
    }
}

#[inline]
pub fn sub(a: u64, b: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + P - b
    }
}

#[inline]
pub fn mul(a: u64, b: u64) -> u64 {
    let t = (a as u128) * (b as u128);
    let lo = (t as u64) & P;
    let hi = (t >> 61) as u64;
    add(lo, hi)
}

pub fn pow(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mul(r, a);
        }
        a = mul(a, a);
        e >>= 1;
    }
    r
}

pub fn inv(a: u64) -> u64 {
    assert!(a != 0, "inverse of zero mod p");
    pow(a, P - 2)
}

pub fn from_i64(x: i64) -> u64 {
    if x >= 0 {
        (x as u64) % P
    } else {
        sub(0, ((-x) as u64) % P)
    }
}

pub fn from_bigint(x: &BigInt) -> u64 {
    let m = BigInt::from(P);
    let r = x.mod_floor(&m);
    let (_, digits) = r.to_u64_digits();
    digits.first().copied().unwrap_or(0)
}

pub fn from_q(x: &Q) -> u64 {
    mul(from_bigint(x.numer()), inv(from_bigint(x.denom())))
}

pub fn eval_poly(p: &MultiPoly, point: &[u64]) -> u64 {
    let mut acc = 0;
    for (m, c) in p.terms() {
        let mut t = from_q(c);
        for (x, &e) in point.iter().zip(&m.0) {
            if e > 0 {
                t = mul(t, pow(*x, e as u64));
            }
        }
        acc = add(acc, t);
    }
    acc
}

/// Recover n/d with |n|, d < sqrt(P/2) from its residue (Wang's algorithm).
pub fn rational_reconstruct(a: u64) -> Option<Q> {
    let m = BigInt::from(P);
    let bound = BigInt::from(((P / 2) as f64).sqrt() as u64);
    let (mut r0, mut r1) = (m.clone(), BigInt::from(a));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let qt = &r0 / &r1;
        let r2 = &r0 - &qt * &r1;
        let t2 = &t0 - &qt * &t1;
        r0 = r1;
        r1 = r2;
        t0 = t1;
        t1 = t2;
    }
    if t1.is_zero() || t1.abs() > bound {
        return None;
    }
    let (n, d) = if t1.sign() == Sign::Minus {
        (-r1, -t1)
    } else {
        (r1, t1)
    };
    if !n.gcd(&d).is_one() {
        return None;
    }
    Some(Q::new(n, d))
}

/// Solve for the nullspace of a dense matrix over F_p (rows of equations).
pub fn nullspace(mut rows: Vec<Vec<u64>>, ncols: usize) -> Vec<Vec<u64>> {
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(pr) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, pr);
        let iv = inv(rows[r][c]);
        for x in rows[r].iter_mut() {
            *x = mul(*x, iv);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && row[c] != 0 {
                let f = row[c];
                for (x, &y) in row.iter_mut().zip(&pivot_row).skip(c) {
                    *x = sub(*x, mul(f, y));
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![0u64; ncols];
            v[f] = 1;
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = sub(0, rows[i][f]);
            }
            v
        })
        .collect()
}

/// Coefficients (low to high) of the polynomial through (x_i, y_i) over F_p.
pub fn interpolate(xs: &[u64], ys: &[u64]) -> Vec<u64> {
    let n = xs.len();
    let mut out = vec![0u64; n];
    for i in 0..n {
        let mut basis = vec![1u64];
        let mut denom = 1u64;
        for j in 0..n {
            if i == j {
                continue;
            }
            let mut next = vec![0u64; basis.len() + 1];
            for (k, &b) in basis.iter().enumerate() {
                next[k + 1] = add(next[k + 1], b);
                next[k] = sub(next[k], mul(b, xs[j]));
            }
            basis = next;
            denom = mul(denom, sub(xs[i], xs[j]));
        }
        let s = mul(ys[i], inv(denom));
        for (k, &b) in basis.iter().enumerate() {
            out[k] = add(out[k], mul(s, b));
        }
    }
    out
}
