use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::zpoly::{self, ZPoly};
use super::{parse_rational, DeterministicSampler, Rationals, Ring, ScalarDomain};
use crate::error::{Error, Result};
use crate::poly::{Poly, PolyRing};

/// A rational function `scale · num(x) / den(x)` with `den(0) != 0`.
///
/// `num` and `den` are coprime primitive integer polynomials with positive
/// leading coefficients, so structural equality is equality of functions.
/// Zero is `scale = 0`, `num = den = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LocalFunction {
    scale: BigRational,
    num: ZPoly,
    den: ZPoly,
}

impl LocalFunction {
    /// Numerator over `Q`, paired with the monic [`Self::denominator`].
    pub fn numerator(&self) -> Poly<BigRational> {
        let lead = BigRational::from_integer(self.den.last().expect("nonzero").clone());
        qpoly().from_coeffs(zpoly::to_rational(&self.num, &(&self.scale / lead)))
    }

    pub fn denominator(&self) -> Poly<BigRational> {
        let lead = BigRational::from_integer(self.den.last().expect("nonzero").clone());
        qpoly().from_coeffs(zpoly::to_rational(&self.den, &lead.recip()))
    }
}

/// The local domain `Q[x]_(x)` of rational functions regular at the origin.
///
/// Maximal ideal: functions vanishing at 0. Residue field: `Q`, reached by
/// evaluating at 0.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LocalFunctions;

fn qpoly() -> PolyRing<Rationals> {
    PolyRing::new(Rationals)
}

fn at_zero(p: &[BigInt]) -> BigInt {
    p.first().cloned().unwrap_or_default()
}

fn exact(a: &[BigInt], g: &[BigInt]) -> ZPoly {
    zpoly::div_exact(a, g).expect("gcd divides")
}

impl LocalFunctions {
    /// Builds `num / den` in canonical form; `den(0) = 0` is rejected.
    pub fn from_polys(&self, num: Poly<BigRational>, den: Poly<BigRational>) -> Result<LocalFunction> {
        if Rationals.is_zero(&qpoly().coeff(&den, 0)) {
            return Err(Error::ZeroDivisor);
        }
        let (cn, num) = zpoly::from_rational(num.coeffs());
        let (cd, den) = zpoly::from_rational(den.coeffs());
        Ok(self.reduce(cn / cd, num, den))
    }

    pub fn from_ints(&self, num: &[i64], den: &[i64]) -> Result<LocalFunction> {
        let r = qpoly();
        self.from_polys(r.from_ints(num), r.from_ints(den))
    }

    pub fn from_rational(&self, c: BigRational) -> LocalFunction {
        if c.is_zero() {
            return self.zero();
        }
        LocalFunction { scale: c, num: zpoly::one(), den: zpoly::one() }
    }

    /// The uniformizer-like element `x` generating the maximal ideal.
    pub fn x(&self) -> LocalFunction {
        LocalFunction { scale: BigRational::one(), num: vec![BigInt::zero(), BigInt::one()], den: zpoly::one() }
    }

    /// Canonical form of `scale · num / den` with `num`, `den` primitive.
    fn reduce(&self, scale: BigRational, num: ZPoly, den: ZPoly) -> LocalFunction {
        if scale.is_zero() || num.is_empty() {
            return self.zero();
        }
        let g = zpoly::gcd(&num, &den);
        LocalFunction { scale, num: exact(&num, &g), den: exact(&den, &g) }
    }

    /// Evaluates at a rational point where the denominator does not vanish.
    pub fn evaluate_at(&self, f: &LocalFunction, x: &BigRational) -> Result<BigRational> {
        let r = qpoly();
        let d = r.evaluate(&f.denominator(), x);
        Rationals.div(&r.evaluate(&f.numerator(), x), &d).map_err(|_| Error::ZeroDivisor)
    }
}

/// Splits `a / b` at the top-level slash, ignoring slashes inside brackets.
fn split_fraction(text: &str) -> (String, Option<String>) {
    let mut depth = 0i32;
    for (i, ch) in text.char_indices() {
        match ch {
            '[' => depth += 1,
            ']' => depth -= 1,
            '/' if depth == 0
                && (text[..i].trim_end().ends_with(']') || text[i + 1..].trim_start().starts_with('[')) =>
            {
                return (text[..i].to_string(), Some(text[i + 1..].to_string()));
            }
            _ => {}
        }
    }
    (text.to_string(), None)
}

fn parse_side(text: &str) -> Result<Poly<BigRational>> {
    let text = text.trim();
    let r = qpoly();
    if let Some(inner) = text.strip_prefix('[') {
        let inner = inner
            .strip_suffix(']')
            .ok_or_else(|| Error::Parse(format!("unbalanced brackets in {text:?}")))?;
        if inner.trim().is_empty() {
            return Ok(Poly::zero());
        }
        let coeffs = inner.split(',').map(parse_rational).collect::<Result<Vec<_>>>()?;
        Ok(r.from_coeffs(coeffs))
    } else {
        Ok(r.constant(parse_rational(text)?))
    }
}

impl Ring for LocalFunctions {
    type Elem = LocalFunction;

    fn zero(&self) -> LocalFunction {
        LocalFunction { scale: BigRational::zero(), num: zpoly::one(), den: zpoly::one() }
    }

    fn one(&self) -> LocalFunction {
        self.from_rational(BigRational::one())
    }

    fn from_i64(&self, n: i64) -> LocalFunction {
        self.from_rational(Rationals.from_i64(n))
    }

    /// `a/b + c/d` with `g = gcd(b, d)`: `(a d' + c b') / (b' d' g)`, where
    /// only `gcd(numerator, g)` can be nontrivial.
    fn add(&self, a: &LocalFunction, b: &LocalFunction) -> LocalFunction {
        if a.scale.is_zero() {
            return b.clone();
        }
        if b.scale.is_zero() {
            return a.clone();
        }
        let g = zpoly::gcd(&a.den, &b.den);
        let (ad, bd) = (exact(&a.den, &g), exact(&b.den, &g));
        let (pa, qa) = (a.scale.numer(), a.scale.denom());
        let (pb, qb) = (b.scale.numer(), b.scale.denom());
        let left = zpoly::scale(&zpoly::mul(&a.num, &bd), &(pa * qb));
        let right = zpoly::scale(&zpoly::mul(&b.num, &ad), &(pb * qa));
        let (content, num) = zpoly::primitive(zpoly::add(&left, &right));
        if num.is_empty() {
            return self.zero();
        }
        let h = zpoly::gcd(&num, &g);
        let den = zpoly::mul(&zpoly::mul(&ad, &bd), &exact(&g, &h));
        LocalFunction { scale: BigRational::new(content, qa * qb), num: exact(&num, &h), den }
    }

    fn sub(&self, a: &LocalFunction, b: &LocalFunction) -> LocalFunction {
        self.add(a, &self.neg(b))
    }

    fn neg(&self, a: &LocalFunction) -> LocalFunction {
        LocalFunction { scale: -&a.scale, num: a.num.clone(), den: a.den.clone() }
    }

    fn mul(&self, a: &LocalFunction, b: &LocalFunction) -> LocalFunction {
        if a.scale.is_zero() || b.scale.is_zero() {
            return self.zero();
        }
        let g1 = zpoly::gcd(&a.num, &b.den);
        let g2 = zpoly::gcd(&b.num, &a.den);
        LocalFunction {
            scale: &a.scale * &b.scale,
            num: zpoly::mul(&exact(&a.num, &g1), &exact(&b.num, &g2)),
            den: zpoly::mul(&exact(&a.den, &g2), &exact(&b.den, &g1)),
        }
    }

    fn is_zero(&self, a: &LocalFunction) -> bool {
        a.scale.is_zero()
    }

    fn is_unit(&self, a: &LocalFunction) -> bool {
        !a.scale.is_zero() && !at_zero(&a.num).is_zero()
    }

    fn inverse(&self, a: &LocalFunction) -> Result<LocalFunction> {
        if !self.is_unit(a) {
            return Err(Error::NotAUnit);
        }
        Ok(LocalFunction { scale: a.scale.recip(), num: a.den.clone(), den: a.num.clone() })
    }

    fn is_field(&self) -> bool {
        false
    }

    /// `[num] / [den]`, or just `[num]` when the denominator is 1.
    fn render(&self, a: &LocalFunction) -> String {
        let r = qpoly();
        if zpoly::is_one(&a.den) {
            r.render(&a.numerator())
        } else {
            format!("{} / {}", r.render(&a.numerator()), r.render(&a.denominator()))
        }
    }
}

impl ScalarDomain for LocalFunctions {
    type Residue = Rationals;

    fn residue_field(&self) -> Rationals {
        Rationals
    }

    fn residue(&self, x: &LocalFunction) -> BigRational {
        &x.scale * BigRational::new(at_zero(&x.num), at_zero(&x.den))
    }

    fn lift(&self, r: &BigRational) -> LocalFunction {
        self.from_rational(r.clone())
    }

    /// Square class of the residue; units only.
    fn is_square(&self, x: &LocalFunction) -> Result<bool> {
        if !self.is_unit(x) {
            return Err(Error::NotAUnit);
        }
        Rationals.is_square(&self.residue(x))
    }

    /// `(a0 + a1 x) / (d0 + d1 x)` with integer coefficients bounded by the
    /// height and `d0 != 0`.
    fn sample(&self, sampler: &mut DeterministicSampler) -> LocalFunction {
        let num = [sampler.signed(), sampler.signed()];
        let d0 = if sampler.coin() { sampler.positive() } else { -sampler.positive() };
        let den = [d0, sampler.signed()];
        self.from_ints(&num, &den).expect("d0 is nonzero")
    }

    fn tag(&self) -> String {
        "Qx0".into()
    }

    fn parse(&self, text: &str) -> Result<LocalFunction> {
        let (num, den) = split_fraction(text.trim());
        let num = parse_side(&num)?;
        let den = match den {
            Some(d) => parse_side(&d)?,
            None => qpoly().one(),
        };
        self.from_polys(num, den)
            .map_err(|_| Error::Parse(format!("denominator of {text:?} vanishes at the origin")))
    }
}
