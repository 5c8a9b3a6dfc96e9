use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;

use super::Poly;
use crate::error::{Error, Result};

/// A finite Laurent polynomial in one variable `t`, exponent to coefficient.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, BigInt>,
}

impl LaurentPoly {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Lowest exponent with a nonzero coefficient, `None` for zero.
    pub fn valuation(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn leading_coefficient(&self) -> Option<&BigInt> {
        self.terms.values().next()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&i64, &BigInt)> {
        self.terms.iter()
    }
}

/// Substitutes `a_i = t^{c_i}` and collects like powers of `t`.
pub fn substitute_monomial(p: &Poly, c: &[i64]) -> Result<LaurentPoly> {
    if c.len() != p.nvars() {
        return Err(Error::DimensionMismatch(format!(
            "{} exponents for {} variables",
            c.len(),
            p.nvars()
        )));
    }
    let mut terms: BTreeMap<i64, BigInt> = BTreeMap::new();
    for (exponents, coeff) in p.terms() {
        let power: i64 = exponents.iter().zip(c).map(|(&e, &ci)| e as i64 * ci).sum();
        *terms.entry(power).or_insert_with(BigInt::zero) += coeff;
    }
    terms.retain(|_, v| !v.is_zero());
    Ok(LaurentPoly { terms })
}

/// `val(p(t^{c_1}, ..., t^{c_r}))` for a polynomial with nonnegative
/// coefficients; `None` stands for `+∞`.
pub fn valuation_after_monomial_substitution(p: &Poly, c: &[i64]) -> Result<Option<i64>> {
    if !p.has_nonnegative_coefficients() {
        return Err(Error::NegativeCoefficient(p.to_string()));
    }
    Ok(substitute_monomial(p, c)?.valuation())
}
