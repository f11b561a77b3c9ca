use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{zpoly, DeterministicSampler, Ring, ScalarDomain};
use crate::error::{Error, Result};
use crate::poly::Poly;

/// The field of rational numbers, backed by `num_rational::BigRational`
/// (always reduced, positive denominator).
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Rationals;

fn is_perfect_square(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let r = n.sqrt();
    &r * &r == *n
}

/// Parses `p/q` or `p` with optional surrounding whitespace.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let text = text.trim();
    let bad = || Error::Parse(format!("malformed rational {text:?}"));
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {text:?}")));
    }
    Ok(BigRational::new(num, den))
}

/// Sufficient test for `gcd(a, b) = 1` over `Q`.
pub(crate) fn coprime_by_screen(a: &Poly<BigRational>, b: &Poly<BigRational>) -> bool {
    zpoly::coprime_screen(&zpoly::from_rational(a.coeffs()).1, &zpoly::from_rational(b.coeffs()).1)
}

impl Ring for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }

    fn one(&self) -> BigRational {
        BigRational::one()
    }

    fn from_i64(&self, n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }

    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }

    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }

    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }

    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }

    fn is_one(&self, a: &BigRational) -> bool {
        a.is_one()
    }

    fn is_unit(&self, a: &BigRational) -> bool {
        !a.is_zero()
    }

    fn inverse(&self, a: &BigRational) -> Result<BigRational> {
        if a.is_zero() {
            Err(Error::NotAUnit)
        } else {
            Ok(a.recip())
        }
    }

    fn is_field(&self) -> bool {
        true
    }

    fn render(&self, a: &BigRational) -> String {
        if a.denom().is_one() {
            a.numer().to_string()
        } else {
            format!("{}/{}", a.numer(), a.denom())
        }
    }
}

impl ScalarDomain for Rationals {
    fn coprime_screen(&self, a: &Poly<BigRational>, b: &Poly<BigRational>) -> bool {
        coprime_by_screen(a, b)
    }

    type Residue = Rationals;

    fn residue_field(&self) -> Rationals {
        Rationals
    }

    fn residue(&self, x: &BigRational) -> BigRational {
        x.clone()
    }

    fn lift(&self, r: &BigRational) -> BigRational {
        r.clone()
    }

    fn is_square(&self, x: &BigRational) -> Result<bool> {
        if x.numer().sign() == Sign::Minus {
            return Ok(false);
        }
        Ok(is_perfect_square(x.numer()) && is_perfect_square(x.denom()))
    }

    fn sample(&self, sampler: &mut DeterministicSampler) -> BigRational {
        let num = sampler.signed();
        let den = sampler.positive();
        BigRational::new(num.into(), den.into())
    }

    fn tag(&self) -> String {
        "Q".into()
    }

    fn parse(&self, text: &str) -> Result<BigRational> {
        parse_rational(text)
    }
}
