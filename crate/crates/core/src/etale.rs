//! Monogenic étale algebras `D[t]/(f)` with `f` monic and separable.
//!
//! The algebra need not be a field: a reducible `f` gives a product of
//! fields, and non-invertible elements surface as [`Error::ZeroDivisor`].

use crate::error::{Error, Result};
use crate::matrix::{self, Matrix};
use crate::poly::{Poly, PolyRing};
use crate::scalar::{DeterministicSampler, Ring, ScalarDomain};

/// Canonical representative of a class in `D[t]/(f)`: exactly `n`
/// coefficients in ascending degree (trailing zeros kept).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AlgebraElement<E> {
    coeffs: Vec<E>,
}

impl<E> AlgebraElement<E> {
    pub fn coeffs(&self) -> &[E] {
        &self.coeffs
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EtaleAlgebra<D: ScalarDomain> {
    base: D,
    modulus: Poly<D::Elem>,
}

/// Row `i` holds the coordinates of `source^i` in the basis `1, t, …, t^{n-1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerBasisMatrix<E> {
    pub entries: Matrix<E>,
    pub source: AlgebraElement<E>,
}

pub type ResidueAlgebra<D> = EtaleAlgebra<<D as ScalarDomain>::Residue>;

impl<D: ScalarDomain> EtaleAlgebra<D> {
    pub fn new(base: D, modulus: Poly<D::Elem>) -> Result<Self> {
        let ring = PolyRing::new(base.clone());
        match modulus.degree() {
            None | Some(0) => return Err(Error::InvalidModulus("modulus must have degree at least 1".into())),
            Some(_) => {}
        }
        if !ring.is_monic(&modulus) {
            return Err(Error::InvalidModulus("modulus is not monic".into()));
        }
        if !ring.is_separable(&modulus)? {
            return Err(Error::NotSeparable);
        }
        Ok(Self { base, modulus })
    }

    pub fn base(&self) -> &D {
        &self.base
    }

    pub fn modulus(&self) -> &Poly<D::Elem> {
        &self.modulus
    }

    pub fn degree(&self) -> usize {
        self.modulus.degree().unwrap()
    }

    pub fn poly_ring(&self) -> PolyRing<D> {
        PolyRing::new(self.base.clone())
    }

    /// Builds an element from at most `n` coefficients.
    pub fn element(&self, mut coeffs: Vec<D::Elem>) -> Result<AlgebraElement<D::Elem>> {
        let n = self.degree();
        if coeffs.len() > n {
            return Err(Error::AlgebraMismatch);
        }
        coeffs.resize(n, self.base.zero());
        Ok(AlgebraElement { coeffs })
    }

    /// Rejects elements whose shape does not fit this algebra.
    pub fn check(&self, a: &AlgebraElement<D::Elem>) -> Result<()> {
        if a.coeffs.len() == self.degree() {
            Ok(())
        } else {
            Err(Error::AlgebraMismatch)
        }
    }

    /// Reduces an arbitrary polynomial modulo `f`.
    pub fn from_poly(&self, p: &Poly<D::Elem>) -> AlgebraElement<D::Elem> {
        let ring = self.poly_ring();
        let r = ring.rem(p, &self.modulus).expect("modulus is monic");
        let mut coeffs = r.into_coeffs();
        coeffs.resize(self.degree(), self.base.zero());
        AlgebraElement { coeffs }
    }

    pub fn representative(&self, a: &AlgebraElement<D::Elem>) -> Poly<D::Elem> {
        self.poly_ring().from_coeffs(a.coeffs.clone())
    }

    pub fn embed(&self, c: &D::Elem) -> AlgebraElement<D::Elem> {
        let mut coeffs = vec![self.base.zero(); self.degree()];
        coeffs[0] = c.clone();
        AlgebraElement { coeffs }
    }

    /// The class of `t`.
    pub fn generator(&self) -> AlgebraElement<D::Elem> {
        self.from_poly(&self.poly_ring().t())
    }

    /// Constant coefficient when the element lies in the base, else `None`.
    pub fn as_base(&self, a: &AlgebraElement<D::Elem>) -> Option<D::Elem> {
        if a.coeffs[1..].iter().all(|c| self.base.is_zero(c)) {
            Some(a.coeffs[0].clone())
        } else {
            None
        }
    }

    /// Matrix of multiplication by `a`: column `j` is `a · t^j`.
    pub fn multiplication_matrix(&self, a: &AlgebraElement<D::Elem>) -> Matrix<D::Elem> {
        let n = self.degree();
        let t = self.generator();
        let mut col = a.clone();
        let mut cols = Vec::with_capacity(n);
        for _ in 0..n {
            cols.push(col.coeffs.clone());
            col = self.mul(&col, &t);
        }
        matrix::transpose(&cols)
    }

    /// Norm as the determinant of multiplication by `a`.
    pub fn norm(&self, a: &AlgebraElement<D::Elem>) -> D::Elem {
        matrix::det(&self.base, &self.multiplication_matrix(a))
    }

    /// Norm as `Res(f, a(t))`; independent of [`Self::norm`].
    pub fn norm_by_resultant(&self, a: &AlgebraElement<D::Elem>) -> D::Elem {
        self.poly_ring()
            .resultant(&self.modulus, &self.representative(a))
            .expect("modulus is monic and nonconstant")
    }

    pub fn trace(&self, a: &AlgebraElement<D::Elem>) -> D::Elem {
        matrix::trace(&self.base, &self.multiplication_matrix(a))
    }

    pub fn power_basis_matrix(&self, a: &AlgebraElement<D::Elem>) -> PowerBasisMatrix<D::Elem> {
        let n = self.degree();
        let mut rows = Vec::with_capacity(n);
        let mut p = self.one();
        for _ in 0..n {
            rows.push(p.coeffs.clone());
            p = self.mul(&p, a);
        }
        PowerBasisMatrix { entries: rows, source: a.clone() }
    }

    /// The primitivity determinant `d(b_0, …, b_{n-1})`.
    pub fn primitivity_determinant(&self, a: &AlgebraElement<D::Elem>) -> D::Elem {
        matrix::det(&self.base, &self.power_basis_matrix(a).entries)
    }

    pub fn is_primitive(&self, a: &AlgebraElement<D::Elem>) -> bool {
        self.base.is_unit(&self.primitivity_determinant(a))
    }

    /// Characteristic polynomial of multiplication by `a`; for a primitive
    /// element this is its minimal polynomial.
    pub fn characteristic_polynomial(&self, a: &AlgebraElement<D::Elem>) -> Poly<D::Elem> {
        let mut desc = matrix::charpoly_desc(&self.base, &self.multiplication_matrix(a));
        desc.reverse();
        self.poly_ring().from_coeffs(desc)
    }

    pub fn minimal_polynomial(&self, a: &AlgebraElement<D::Elem>) -> Result<Poly<D::Elem>> {
        if !self.is_primitive(a) {
            return Err(Error::NotPrimitive);
        }
        Ok(self.characteristic_polynomial(a))
    }

    /// Evaluates a base polynomial at an algebra element.
    pub fn eval_poly(&self, f: &Poly<D::Elem>, a: &AlgebraElement<D::Elem>) -> AlgebraElement<D::Elem> {
        f.coeffs()
            .iter()
            .rev()
            .fold(self.zero(), |acc, c| self.add(&self.mul(&acc, a), &self.embed(c)))
    }

    /// `ω_{i,j}` = coefficient of `t^i` in the `j`-th entry (an n×m matrix).
    pub fn expand_coordinates(&self, vector: &[AlgebraElement<D::Elem>]) -> Result<Matrix<D::Elem>> {
        for v in vector {
            self.check(v)?;
        }
        Ok((0..self.degree())
            .map(|i| vector.iter().map(|v| v.coeffs[i].clone()).collect())
            .collect())
    }

    /// Coordinates in the power basis `1, α, …, α^{n-1}` of a primitive `α`.
    pub fn expand_in_power_basis(
        &self,
        vector: &[AlgebraElement<D::Elem>],
        alpha: &AlgebraElement<D::Elem>,
    ) -> Result<Matrix<D::Elem>> {
        let standard = self.expand_coordinates(vector)?;
        let powers = self.power_basis_matrix(alpha).entries;
        matrix::solve(&self.base, &matrix::transpose(&powers), &standard).map_err(|_| Error::NotPrimitive)
    }

    /// Turns a coordinate matrix into the vector of column polynomials `ω_j(t)`.
    pub fn contract(&self, coords: &Matrix<D::Elem>) -> Vec<Poly<D::Elem>> {
        let ring = self.poly_ring();
        let m = coords.first().map_or(0, Vec::len);
        (0..m)
            .map(|j| ring.from_coeffs(coords.iter().map(|row| row[j].clone()).collect()))
            .collect()
    }

    pub fn sample_element(&self, sampler: &mut DeterministicSampler) -> AlgebraElement<D::Elem> {
        AlgebraElement { coeffs: (0..self.degree()).map(|_| self.base.sample(sampler)).collect() }
    }

    /// The algebra over the residue field, `E = S / m S`.
    pub fn reduce_mod_maximal(&self) -> ResidueAlgebra<D> {
        let modulus = self.poly_ring().residue_poly(&self.modulus);
        EtaleAlgebra { base: self.base.residue_field(), modulus }
    }

    pub fn residue_element(&self, a: &AlgebraElement<D::Elem>) -> AlgebraElement<<D::Residue as Ring>::Elem> {
        AlgebraElement { coeffs: a.coeffs.iter().map(|c| self.base.residue(c)).collect() }
    }

    /// Coefficient-wise lift of a residue-level element.
    pub fn lift_element(&self, a: &AlgebraElement<<D::Residue as Ring>::Elem>) -> AlgebraElement<D::Elem> {
        AlgebraElement { coeffs: a.coeffs.iter().map(|c| self.base.lift(c)).collect() }
    }

    fn reduce(&self, mut coeffs: Vec<D::Elem>) -> AlgebraElement<D::Elem> {
        let n = self.degree();
        let f = self.modulus.coeffs();
        while coeffs.len() > n {
            let top = coeffs.pop().unwrap();
            if self.base.is_zero(&top) {
                continue;
            }
            let shift = coeffs.len() - n;
            for (i, fi) in f[..n].iter().enumerate() {
                let t = self.base.mul(&top, fi);
                coeffs[shift + i] = self.base.sub(&coeffs[shift + i], &t);
            }
        }
        coeffs.resize(n, self.base.zero());
        AlgebraElement { coeffs }
    }
}

impl<D: ScalarDomain> Ring for EtaleAlgebra<D> {
    type Elem = AlgebraElement<D::Elem>;

    fn zero(&self) -> Self::Elem {
        AlgebraElement { coeffs: vec![self.base.zero(); self.degree()] }
    }

    fn one(&self) -> Self::Elem {
        self.embed(&self.base.one())
    }

    fn from_i64(&self, n: i64) -> Self::Elem {
        self.embed(&self.base.from_i64(n))
    }

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        AlgebraElement { coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| self.base.add(x, y)).collect() }
    }

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        AlgebraElement { coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| self.base.sub(x, y)).collect() }
    }

    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        AlgebraElement { coeffs: a.coeffs.iter().map(|x| self.base.neg(x)).collect() }
    }

    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let n = self.degree();
        let mut out = vec![self.base.zero(); 2 * n - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if self.base.is_zero(x) {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if self.base.is_zero(y) {
                    continue;
                }
                out[i + j] = self.base.add(&out[i + j], &self.base.mul(x, y));
            }
        }
        self.reduce(out)
    }

    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.coeffs.iter().all(|c| self.base.is_zero(c))
    }

    fn is_unit(&self, a: &Self::Elem) -> bool {
        self.base.is_unit(&self.norm(a))
    }

    /// Extended gcd against the modulus over a field; Cayley-Hamilton on the
    /// multiplication matrix otherwise, which needs one base inverse.
    fn inverse(&self, a: &Self::Elem) -> Result<Self::Elem> {
        if self.base.is_field() {
            let ring = self.poly_ring();
            let rep = self.representative(a);
            if rep.is_zero() {
                return Err(Error::ZeroDivisor);
            }
            let (g, s, _) = ring.xgcd(&rep, &self.modulus)?;
            if g.degree() != Some(0) {
                return Err(Error::ZeroDivisor);
            }
            Ok(self.from_poly(&s))
        } else {
            // a^n + c_1 a^(n-1) + ... + c_n = 0
            let cp = matrix::charpoly_desc(&self.base, &self.multiplication_matrix(a));
            let n = self.degree();
            let cn_inv = self.base.inverse(&cp[n]).map_err(|_| Error::ZeroDivisor)?;
            let mut acc = self.one();
            for c in &cp[1..n] {
                acc = self.add(&self.mul(&acc, a), &self.embed(c));
            }
            Ok(self.mul(&acc, &self.embed(&self.base.neg(&cn_inv))))
        }
    }

    fn is_field(&self) -> bool {
        false
    }

    fn render(&self, a: &Self::Elem) -> String {
        let parts: Vec<String> = a.coeffs.iter().map(|c| self.base.render(c)).collect();
        format!("[{}]", parts.join(","))
    }
}
