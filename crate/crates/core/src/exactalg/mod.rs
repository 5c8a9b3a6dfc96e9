//! Exact arithmetic: rationals, integer-coefficient polynomials, dense
//! matrices over either ring, top-justified minors and monomial valuations.

mod lattice;
mod matrix;
mod poly;
mod series;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

pub use lattice::{integer_left_inverse, rational_rank};
pub use matrix::{Mat, Ring};
pub use poly::Poly;
pub use series::{substitute_monomial, valuation_after_monomial_substitution, LaurentPoly};

pub type Rat = BigRational;

pub fn rat(numer: i64, denom: i64) -> Rat {
    Rat::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn rat_int(value: i64) -> Rat {
    Rat::from_integer(BigInt::from(value))
}

/// Formats integers plainly and everything else as `p/q`.
pub fn format_rat(value: &Rat) -> String {
    if value.is_integer() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

pub fn parse_rat(text: &str) -> Result<Rat> {
    let text = text.trim();
    let bad = |m: &str| Error::parse(format!("rational \"{text}\""), m.to_string());
    let (numer, denom) = match text.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (text, "1"),
    };
    let numer: BigInt = numer.parse().map_err(|_| bad("bad numerator"))?;
    let denom: BigInt = denom.parse().map_err(|_| bad("bad denominator"))?;
    if denom.is_zero() {
        return Err(bad("zero denominator"));
    }
    Ok(Rat::new(numer, denom))
}

pub fn is_positive(value: &Rat) -> bool {
    value.is_positive()
}

/// Evaluates a polynomial at a vector of rationals.
pub fn poly_eval(p: &Poly, point: &[Rat]) -> Result<Rat> {
    if point.len() != p.nvars() {
        return Err(Error::DimensionMismatch(format!(
            "polynomial in {} variables evaluated at {} values",
            p.nvars(),
            point.len()
        )));
    }
    let mut total = Rat::zero();
    for (exponents, coeff) in p.terms() {
        let mut term = Rat::from_integer(coeff.clone());
        for (x, &e) in point.iter().zip(exponents) {
            if e > 0 {
                term *= num_traits::pow(x.clone(), e as usize);
            }
        }
        total += term;
    }
    Ok(total)
}
