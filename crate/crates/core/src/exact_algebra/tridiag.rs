use super::{MultiPoly, Q};

/// Minimal commutative-ring interface for determinant recurrences.
pub trait Ring: Clone {
    fn r_add(&self, o: &Self) -> Self;
    fn r_sub(&self, o: &Self) -> Self;
    fn r_mul(&self, o: &Self) -> Self;
}

impl Ring for Q {
    fn r_add(&self, o: &Self) -> Self {
        self + o
    }
    fn r_sub(&self, o: &Self) -> Self {
        self - o
    }
    fn r_mul(&self, o: &Self) -> Self {
        self * o
    }
}

impl Ring for MultiPoly {
    fn r_add(&self, o: &Self) -> Self {
        self + o
    }
    fn r_sub(&self, o: &Self) -> Self {
        self - o
    }
    fn r_mul(&self, o: &Self) -> Self {
        self * o
    }
}

/// Determinant of Tridiag[diag; upper; lower] by the continuant recurrence
/// D_i = a_i D_{i-1} - b_{i-1} c_{i-1} D_{i-2}. Panics on an empty diagonal.
pub fn tridiag_det<R: Ring>(diag: &[R], upper: &[R], lower: &[R]) -> R {
    assert!(!diag.is_empty(), "empty tridiagonal matrix");
    assert_eq!(upper.len() + 1, diag.len());
    assert_eq!(lower.len() + 1, diag.len());
    let mut prev2: Option<R> = None;
    let mut prev = diag[0].clone();
    for i in 1..diag.len() {
        let bc = upper[i - 1].r_mul(&lower[i - 1]);
        let next = match &prev2 {
            None => diag[i].r_mul(&prev).r_sub(&bc),
            Some(p2) => diag[i].r_mul(&prev).r_sub(&bc.r_mul(p2)),
        };
        prev2 = Some(prev);
        prev = next;
    }
    prev
}
