//! Dense univariate polynomials over a [`Ring`].

use crate::error::{Error, Result};
use crate::matrix;
use crate::scalar::{Ring, ScalarDomain};

/// Coefficients in ascending degree with no trailing zero; the zero
/// polynomial has no coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly<E> {
    coeffs: Vec<E>,
}

impl<E> Poly<E> {
    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn coeffs(&self) -> &[E] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<E> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&E> {
        self.coeffs.last()
    }

    pub fn coeff(&self, i: usize) -> Option<&E> {
        self.coeffs.get(i)
    }
}

/// The polynomial ring `R[t]` over a base ring.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyRing<R> {
    base: R,
}

impl<R: Ring> PolyRing<R> {
    pub fn new(base: R) -> Self {
        Self { base }
    }

    pub fn base(&self) -> &R {
        &self.base
    }

    pub fn from_coeffs(&self, mut coeffs: Vec<R::Elem>) -> Poly<R::Elem> {
        while coeffs.last().is_some_and(|c| self.base.is_zero(c)) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_ints(&self, coeffs: &[i64]) -> Poly<R::Elem> {
        self.from_coeffs(coeffs.iter().map(|&c| self.base.from_i64(c)).collect())
    }

    pub fn constant(&self, c: R::Elem) -> Poly<R::Elem> {
        self.from_coeffs(vec![c])
    }

    /// The variable `t`.
    pub fn t(&self) -> Poly<R::Elem> {
        self.from_coeffs(vec![self.base.zero(), self.base.one()])
    }

    /// Coefficient of `t^i`, zero past the degree.
    pub fn coeff(&self, p: &Poly<R::Elem>, i: usize) -> R::Elem {
        p.coeffs.get(i).cloned().unwrap_or_else(|| self.base.zero())
    }

    pub fn is_monic(&self, p: &Poly<R::Elem>) -> bool {
        p.leading().is_some_and(|c| self.base.is_one(c))
    }

    pub fn scale(&self, p: &Poly<R::Elem>, c: &R::Elem) -> Poly<R::Elem> {
        self.from_coeffs(p.coeffs.iter().map(|x| self.base.mul(x, c)).collect())
    }

    /// Multiplies by `t^k`.
    pub fn shift(&self, p: &Poly<R::Elem>, k: usize) -> Poly<R::Elem> {
        if p.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![self.base.zero(); k];
        coeffs.extend(p.coeffs.iter().cloned());
        Poly { coeffs }
    }

    pub fn map_coeffs<S: Ring>(&self, target: &PolyRing<S>, p: &Poly<R::Elem>, f: impl Fn(&R::Elem) -> S::Elem) -> Poly<S::Elem> {
        target.from_coeffs(p.coeffs.iter().map(f).collect())
    }

    /// Division with remainder. Over a field any nonzero divisor is allowed;
    /// over other rings the divisor must be monic.
    pub fn divmod_monic(&self, dividend: &Poly<R::Elem>, divisor: &Poly<R::Elem>) -> Result<(Poly<R::Elem>, Poly<R::Elem>)> {
        let d = divisor.degree().ok_or(Error::NonMonicDivisor)?;
        let lead = divisor.leading().unwrap();
        let lead_inv = if self.base.is_one(lead) {
            self.base.one()
        } else if self.base.is_field() {
            self.base.inverse(lead)?
        } else {
            return Err(Error::NonMonicDivisor);
        };
        let mut rem = dividend.coeffs.clone();
        if rem.len() <= d {
            return Ok((Poly::zero(), dividend.clone()));
        }
        let mut quot = vec![self.base.zero(); rem.len() - d];
        for i in (0..quot.len()).rev() {
            let c = self.base.mul(&rem[i + d], &lead_inv);
            if self.base.is_zero(&c) {
                continue;
            }
            for (j, dj) in divisor.coeffs.iter().enumerate() {
                let t = self.base.mul(&c, dj);
                rem[i + j] = self.base.sub(&rem[i + j], &t);
            }
            quot[i] = c;
        }
        rem.truncate(d);
        Ok((self.from_coeffs(quot), self.from_coeffs(rem)))
    }

    pub fn rem(&self, a: &Poly<R::Elem>, d: &Poly<R::Elem>) -> Result<Poly<R::Elem>> {
        Ok(self.divmod_monic(a, d)?.1)
    }

    pub fn monic(&self, p: &Poly<R::Elem>) -> Result<Poly<R::Elem>> {
        match p.leading() {
            None => Ok(Poly::zero()),
            Some(c) => Ok(self.scale(p, &self.base.inverse(c)?)),
        }
    }

    /// Monic gcd; each remainder is made monic to limit coefficient growth.
    pub fn gcd(&self, a: &Poly<R::Elem>, b: &Poly<R::Elem>) -> Result<Poly<R::Elem>> {
        if a.is_zero() && b.is_zero() {
            return Err(Error::UndefinedGcd);
        }
        if !self.base.is_field() {
            return Ok(self.xgcd(a, b)?.0);
        }
        let (mut r0, mut r1) = (a.clone(), b.clone());
        if !r1.is_zero() {
            r1 = self.monic(&r1)?;
        }
        while !r1.is_zero() {
            let r = self.rem(&r0, &r1)?;
            r0 = std::mem::replace(&mut r1, if r.is_zero() { r } else { self.monic(&r)? });
        }
        self.monic(&r0)
    }

    /// Returns `(g, s, t)` with `s a + t b = g`, `g` monic.
    pub fn xgcd(&self, a: &Poly<R::Elem>, b: &Poly<R::Elem>) -> Result<(Poly<R::Elem>, Poly<R::Elem>, Poly<R::Elem>)> {
        if a.is_zero() && b.is_zero() {
            return Err(Error::UndefinedGcd);
        }
        let one = self.constant(self.base.one());
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1) = (one.clone(), Poly::zero());
        let (mut t0, mut t1) = (Poly::zero(), one);
        while !r1.is_zero() {
            let (q, r) = self.divmod_monic(&r0, &r1)?;
            let s2 = self.sub(&s0, &self.mul(&q, &s1));
            let t2 = self.sub(&t0, &self.mul(&q, &t1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
            t0 = std::mem::replace(&mut t1, t2);
        }
        let inv = self.base.inverse(r0.leading().unwrap())?;
        Ok((self.scale(&r0, &inv), self.scale(&s0, &inv), self.scale(&t0, &inv)))
    }

    pub fn derivative(&self, f: &Poly<R::Elem>) -> Poly<R::Elem> {
        self.from_coeffs(
            f.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| self.base.mul(&self.base.from_i64(i as i64), c))
                .collect(),
        )
    }

    /// Horner evaluation.
    pub fn evaluate(&self, f: &Poly<R::Elem>, x: &R::Elem) -> R::Elem {
        f.coeffs
            .iter()
            .rev()
            .fold(self.base.zero(), |acc, c| self.base.add(&self.base.mul(&acc, x), c))
    }

    /// Sylvester matrix of `f` (degree n) and `g` (degree k), size n + k.
    pub fn sylvester(&self, f: &Poly<R::Elem>, g: &Poly<R::Elem>) -> matrix::Matrix<R::Elem> {
        let n = f.degree().unwrap_or(0);
        let k = g.degree().unwrap_or(0);
        let size = n + k;
        let mut m = vec![vec![self.base.zero(); size]; size];
        for i in 0..k {
            for j in 0..=n {
                m[i][i + j] = self.coeff(f, n - j);
            }
        }
        for i in 0..n {
            for j in 0..=k {
                m[k + i][i + j] = self.coeff(g, k - j);
            }
        }
        m
    }

    /// `Res(f, g)` as the Sylvester determinant; for monic `f` this is the
    /// product of `g` over the roots of `f`.
    pub fn resultant(&self, f: &Poly<R::Elem>, g: &Poly<R::Elem>) -> Result<R::Elem> {
        if !self.is_monic(f) || f.degree() == Some(0) {
            return Err(Error::NonMonicDivisor);
        }
        if g.is_zero() {
            return Ok(self.base.zero());
        }
        Ok(matrix::det(&self.base, &self.sylvester(f, g)))
    }
}

impl<D: ScalarDomain> PolyRing<D> {
    /// Reduces every coefficient to the residue field.
    pub fn residue_poly(&self, f: &Poly<D::Elem>) -> Poly<<D::Residue as Ring>::Elem> {
        let target = PolyRing::new(self.base.residue_field());
        self.map_coeffs(&target, f, |c| self.base.residue(c))
    }

    pub fn lift_poly(&self, f: &Poly<<D::Residue as Ring>::Elem>) -> Poly<D::Elem> {
        self.from_coeffs(f.coeffs().iter().map(|c| self.base.lift(c)).collect())
    }

    /// Étale criterion: the residue reduction keeps its degree and is
    /// coprime to its derivative. Over a field the reduction is the identity.
    pub fn is_separable(&self, f: &Poly<D::Elem>) -> Result<bool> {
        if f.is_zero() {
            return Err(Error::UndefinedSeparability);
        }
        let residue_ring = PolyRing::new(self.base.residue_field());
        let fbar = self.residue_poly(f);
        if fbar.degree() != f.degree() {
            return Ok(false);
        }
        let dbar = residue_ring.derivative(&fbar);
        if self.base.residue_field().coprime_screen(&fbar, &dbar) {
            return Ok(true);
        }
        let g = residue_ring.gcd(&fbar, &dbar)?;
        Ok(g.degree() == Some(0))
    }
}

impl<R: Ring> Ring for PolyRing<R> {
    type Elem = Poly<R::Elem>;

    fn zero(&self) -> Self::Elem {
        Poly::zero()
    }

    fn one(&self) -> Self::Elem {
        self.constant(self.base.one())
    }

    fn from_i64(&self, n: i64) -> Self::Elem {
        self.constant(self.base.from_i64(n))
    }

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let len = a.coeffs.len().max(b.coeffs.len());
        self.from_coeffs((0..len).map(|i| self.base.add(&self.coeff(a, i), &self.coeff(b, i))).collect())
    }

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let len = a.coeffs.len().max(b.coeffs.len());
        self.from_coeffs((0..len).map(|i| self.base.sub(&self.coeff(a, i), &self.coeff(b, i))).collect())
    }

    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        Poly { coeffs: a.coeffs.iter().map(|c| self.base.neg(c)).collect() }
    }

    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        if a.is_zero() || b.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![self.base.zero(); a.coeffs.len() + b.coeffs.len() - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if self.base.is_zero(x) {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                out[i + j] = self.base.add(&out[i + j], &self.base.mul(x, y));
            }
        }
        self.from_coeffs(out)
    }

    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.is_zero()
    }

    fn is_unit(&self, a: &Self::Elem) -> bool {
        a.degree() == Some(0) && self.base.is_unit(&a.coeffs[0])
    }

    fn inverse(&self, a: &Self::Elem) -> Result<Self::Elem> {
        if !self.is_unit(a) {
            return Err(Error::NotAUnit);
        }
        Ok(self.constant(self.base.inverse(&a.coeffs[0])?))
    }

    fn is_field(&self) -> bool {
        false
    }

    /// Ascending coefficient list, e.g. `[-2,0,1]` for `t^2 - 2`.
    fn render(&self, a: &Self::Elem) -> String {
        let parts: Vec<String> = a.coeffs.iter().map(|c| self.base.render(c)).collect();
        format!("[{}]", parts.join(","))
    }
}
