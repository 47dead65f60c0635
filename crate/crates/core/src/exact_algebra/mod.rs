//! Exact arithmetic foundation: rationals, sparse polynomials, division,
//! interpolation, real-root isolation and tridiagonal determinants.

mod divide;
mod interp;
pub mod modp;
mod parse;
mod poly;
mod roots;
mod tridiag;
mod upoly;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

pub use divide::poly_divmod;
pub use interp::interpolate_univar;
pub use parse::{parse_expr, parse_poly, ExprBuilder, PolyBuilder};
pub use poly::{vars, Monomial, MultiPoly, Vars};
pub use roots::{
    default_width, isolate_real_roots, isolate_real_roots_upoly, positive_roots, real_roots_f64,
    refine_root, refine_roots, RootInterval,
};
pub use tridiag::{tridiag_det, Ring};
pub use upoly::{sign_variations, UPoly};

pub type Q = BigRational;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AlgebraError {
    #[error("division undefined: {0}")]
    DivisionUndefined(String),
    #[error("duplicate abscissa {0}")]
    DuplicateAbscissa(String),
    #[error("polynomial is not univariate")]
    NotUnivariate,
    #[error("variable {0} not available in target ring")]
    VariableMismatch(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qr(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Exact rational value of a finite binary64.
pub fn q_from_f64(x: f64) -> Q {
    Q::from_float(x).expect("finite float")
}

pub fn q_to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// Rising factorial (a)_k = a (a+1) ... (a+k-1) over any ring with constants.
pub fn pochhammer(a: &MultiPoly, k: u32) -> MultiPoly {
    let mut acc = MultiPoly::one(a.vars());
    for i in 0..k {
        acc = &acc * &(a + &MultiPoly::int(a.vars(), i as i64));
    }
    acc
}
