//! Scalar domains: exact commutative rings in which 2 is invertible.
//!
//! A domain is a small structure object (`Rationals`, `PrimeField`,
//! `LocalFunctions`, or an étale algebra over one of them) that owns the
//! arithmetic; elements are plain values. Keeping the structure separate
//! from the values lets the prime-field modulus live at runtime and lets
//! étale algebras reuse every generic routine written against [`Ring`].

mod local;
mod prime_field;
mod rational;
mod sampler;
mod zpoly;

use std::fmt::Debug;

pub use local::{LocalFunction, LocalFunctions};
pub use prime_field::PrimeField;
pub use rational::{parse_rational, Rationals};
pub use sampler::DeterministicSampler;

use crate::poly::Poly;
use crate::error::Result;

/// A commutative ring with identity and exact arithmetic.
pub trait Ring: Clone + Debug {
    type Elem: Clone + PartialEq + Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, n: i64) -> Self::Elem;

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;

    fn is_zero(&self, a: &Self::Elem) -> bool {
        *a == self.zero()
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn is_unit(&self, a: &Self::Elem) -> bool;

    /// Multiplicative inverse of a unit.
    fn inverse(&self, a: &Self::Elem) -> Result<Self::Elem>;

    /// True when every nonzero element is a unit.
    fn is_field(&self) -> bool;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem> {
        Ok(self.mul(a, &self.inverse(b)?))
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    fn sum<'a, I>(&self, items: I) -> Self::Elem
    where
        I: IntoIterator<Item = &'a Self::Elem>,
        Self::Elem: 'a,
    {
        items.into_iter().fold(self.zero(), |acc, x| self.add(&acc, x))
    }

    fn product<'a, I>(&self, items: I) -> Self::Elem
    where
        I: IntoIterator<Item = &'a Self::Elem>,
        Self::Elem: 'a,
    {
        items.into_iter().fold(self.one(), |acc, x| self.mul(&acc, x))
    }

    /// Human readable rendering, also the textual wire encoding.
    fn render(&self, a: &Self::Elem) -> String;
}

/// A base scalar domain: a field, or a local domain with a residue field.
///
/// Fields are their own residue field, with `residue` and `lift` the
/// identity. The local instance reduces modulo its maximal ideal.
pub trait ScalarDomain: Ring + PartialEq {
    type Residue: ScalarDomain;

    fn residue_field(&self) -> Self::Residue;
    fn residue(&self, x: &Self::Elem) -> <Self::Residue as Ring>::Elem;
    fn lift(&self, r: &<Self::Residue as Ring>::Elem) -> Self::Elem;

    /// Square test. Over the local instance this is the square class of the
    /// residue and requires a unit argument.
    fn is_square(&self, x: &Self::Elem) -> Result<bool>;

    /// Draws an element whose height is bounded by the sampler's bound.
    fn sample(&self, sampler: &mut DeterministicSampler) -> Self::Elem;

    /// Draws a unit; used wherever a sampled value must be invertible.
    fn sample_unit(&self, sampler: &mut DeterministicSampler) -> Self::Elem {
        loop {
            let x = self.sample(sampler);
            if self.is_unit(&x) {
                return x;
            }
        }
    }

    /// Cheap sufficient test for `gcd(a, b) = 1`; `false` means unknown.
    fn coprime_screen(&self, _a: &Poly<Self::Elem>, _b: &Poly<Self::Elem>) -> bool {
        false
    }

    /// Short tag naming the domain on the command line (`Q`, `Fp:7`, `Qx0`).
    fn tag(&self) -> String;

    fn parse(&self, text: &str) -> Result<Self::Elem>;
}
