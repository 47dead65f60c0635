use std::sync::Arc;

use num_traits::{One, Zero};

use super::upoly::UPoly;
use super::{AlgebraError, Monomial, MultiPoly, Q};

/// Lagrange interpolant through `(t_i, y_i)`, returned as a polynomial over the
/// values' variables with `new_var` appended.
pub fn interpolate_univar(
    points: &[(Q, MultiPoly)],
    new_var: &str,
) -> Result<MultiPoly, AlgebraError> {
    let first = points
        .first()
        .ok_or_else(|| AlgebraError::DivisionUndefined("no interpolation points".into()))?;
    let base = first.1.vars().clone();
    if base.iter().any(|v| v == new_var) {
        return Err(AlgebraError::VariableMismatch(new_var.to_string()));
    }
    for (i, (x, _)) in points.iter().enumerate() {
        if points[..i].iter().any(|(y, _)| y == x) {
            return Err(AlgebraError::DuplicateAbscissa(x.to_string()));
        }
    }
    let mut names: Vec<String> = base.as_ref().clone();
    names.push(new_var.to_string());
    let target = Arc::new(names);
    let t_idx = target.len() - 1;

    let mut out = MultiPoly::zero(&target);
    for (i, (xi, yi)) in points.iter().enumerate() {
        let mut basis = UPoly::new(vec![Q::one()]);
        let mut denom = Q::one();
        for (j, (xj, _)) in points.iter().enumerate() {
            if i != j {
                basis = basis.mul(&UPoly::new(vec![-xj.clone(), Q::one()]));
                denom *= xi - xj;
            }
        }
        let basis = basis.scale(&(Q::one() / denom));
        let y = yi.embed(&target)?;
        for (k, c) in basis.0.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (m, v) in y.terms() {
                let mut e = m.0.clone();
                e[t_idx] = k as u32;
                out.add_term(Monomial(e), v * c);
            }
        }
    }
    Ok(out)
}
