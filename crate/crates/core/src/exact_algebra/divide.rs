use super::{AlgebraError, Monomial, MultiPoly, Q};

/// Division with respect to `main_var`, for divisors whose leading coefficient
/// in that variable is a nonzero rational constant.
pub fn poly_divmod(
    dividend: &MultiPoly,
    divisor: &MultiPoly,
    main_var: &str,
) -> Result<(MultiPoly, MultiPoly), AlgebraError> {
    if divisor.is_zero() {
        return Err(AlgebraError::DivisionUndefined("zero divisor".into()));
    }
    let divisor = divisor.embed(dividend.vars())?;
    let idx = dividend
        .var_index(main_var)
        .ok_or_else(|| AlgebraError::VariableMismatch(main_var.to_string()))?;
    let d = divisor.degree_in(idx).unwrap_or(0);
    let lc_poly = &divisor.coeffs_in(idx)[d as usize];
    if !lc_poly.is_constant() || lc_poly.is_zero() {
        return Err(AlgebraError::DivisionUndefined(format!(
            "leading coefficient in {main_var} is not a rational constant: {lc_poly}"
        )));
    }
    let inv_lc = Q::from_integer(1.into()) / lc_poly.constant_term();

    let mut quotient = MultiPoly::zero(dividend.vars());
    let mut rem = dividend.clone();
    loop {
        let k = match rem.degree_in(idx) {
            Some(k) if !rem.is_zero() && k >= d => k,
            _ => break,
        };
        let mut step = MultiPoly::zero(dividend.vars());
        for (m, c) in rem.terms() {
            if m.0[idx] == k {
                let mut e = m.0.clone();
                e[idx] -= d;
                step.add_term(Monomial(e), c * &inv_lc);
            }
        }
        debug_assert!(!step.is_zero());
        rem = &rem - &(&step * &divisor);
        quotient = &quotient + &step;
        if rem.is_zero() {
            break;
        }
    }
    Ok((quotient, rem))
}
