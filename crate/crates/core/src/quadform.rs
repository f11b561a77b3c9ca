//! Quadratic spaces given by a symmetric Gram matrix, `q(v) = vᵀ G v`.
//!
//! The bilinear form is the half-polarization `⟨v, w⟩ = vᵀ G w`, so that
//! `⟨v, v⟩ = q(v)` and `q(v + w) = q(v) + 2⟨v, w⟩ + q(w)`.

use crate::error::{Error, Result};
use crate::etale::EtaleAlgebra;
use crate::matrix::{self, Matrix};
use crate::scalar::{DeterministicSampler, Ring, ScalarDomain};

#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticSpace<R: Ring> {
    ring: R,
    gram: Matrix<R::Elem>,
}

/// Result of [`QuadraticSpace::diagonalize`]: the columns of `basis` are an
/// orthogonal basis, and `Pᵀ G P = diag(values)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Diagonalization<E> {
    pub basis: Matrix<E>,
    pub values: Vec<E>,
}

impl<E: Clone> Diagonalization<E> {
    /// The `i`-th basis vector (a column of `basis`).
    pub fn vector(&self, i: usize) -> Vec<E> {
        self.basis.iter().map(|row| row[i].clone()).collect()
    }
}

impl<R: Ring> QuadraticSpace<R> {
    /// Validates symmetry and nondegeneracy (`det G` a unit).
    pub fn new(ring: R, gram: Matrix<R::Elem>) -> Result<Self> {
        let m = gram.len();
        if m == 0 {
            return Err(Error::Degenerate);
        }
        for row in &gram {
            if row.len() != m {
                return Err(Error::DimensionMismatch { expected: m, got: row.len() });
            }
        }
        for i in 0..m {
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::NotSymmetric);
                }
            }
        }
        let space = Self { ring, gram };
        if !space.ring.is_unit(&matrix::det(&space.ring, &space.gram)) {
            return Err(Error::Degenerate);
        }
        Ok(space)
    }

    pub fn diagonal(ring: R, entries: Vec<R::Elem>) -> Result<Self> {
        let m = entries.len();
        let gram = (0..m)
            .map(|i| (0..m).map(|j| if i == j { entries[i].clone() } else { ring.zero() }).collect())
            .collect();
        Self::new(ring, gram)
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn gram(&self) -> &Matrix<R::Elem> {
        &self.gram
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    fn check_len(&self, v: &[R::Elem]) -> Result<()> {
        if v.len() == self.rank() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected: self.rank(), got: v.len() })
        }
    }

    pub fn bilinear(&self, v: &[R::Elem], w: &[R::Elem]) -> Result<R::Elem> {
        self.check_len(v)?;
        self.check_len(w)?;
        let gw = matrix::mat_vec(&self.ring, &self.gram, w);
        Ok(v.iter().zip(&gw).fold(self.ring.zero(), |acc, (a, b)| self.ring.add(&acc, &self.ring.mul(a, b))))
    }

    pub fn evaluate(&self, v: &[R::Elem]) -> Result<R::Elem> {
        self.check_len(v)?;
        // symmetric: sum_i G_ii v_i^2 + 2 sum_{i<j} G_ij v_i v_j
        let r = &self.ring;
        let m = self.rank();
        let mut diag = r.zero();
        let mut off = r.zero();
        for i in 0..m {
            if r.is_zero(&v[i]) {
                continue;
            }
            diag = r.add(&diag, &r.mul(&self.gram[i][i], &r.mul(&v[i], &v[i])));
            for j in i + 1..m {
                if r.is_zero(&self.gram[i][j]) || r.is_zero(&v[j]) {
                    continue;
                }
                off = r.add(&off, &r.mul(&self.gram[i][j], &r.mul(&v[i], &v[j])));
            }
        }
        Ok(r.add(&diag, &r.add(&off, &off)))
    }

    pub fn scale_vector(&self, c: &R::Elem, v: &[R::Elem]) -> Vec<R::Elem> {
        v.iter().map(|x| self.ring.mul(c, x)).collect()
    }

    pub fn add_vectors(&self, v: &[R::Elem], w: &[R::Elem]) -> Vec<R::Elem> {
        v.iter().zip(w).map(|(a, b)| self.ring.add(a, b)).collect()
    }

    pub fn sub_vectors(&self, v: &[R::Elem], w: &[R::Elem]) -> Vec<R::Elem> {
        v.iter().zip(w).map(|(a, b)| self.ring.sub(a, b)).collect()
    }

    pub fn basis_vector(&self, i: usize) -> Vec<R::Elem> {
        (0..self.rank()).map(|j| if i == j { self.ring.one() } else { self.ring.zero() }).collect()
    }

    /// Reflection `τ_w(x) = x - (2⟨x, w⟩ / q(w)) w`.
    pub fn reflection(&self, w: &[R::Elem], x: &[R::Elem]) -> Result<Vec<R::Elem>> {
        let qw = self.evaluate(w)?;
        let inv = self.ring.inverse(&qw).map_err(|_| Error::IsotropicMirror)?;
        let b = self.bilinear(x, w)?;
        let s = self.ring.mul(&self.ring.add(&b, &b), &inv);
        Ok(self.sub_vectors(x, &self.scale_vector(&s, w)))
    }

    /// Matrix of `τ_w` acting on column vectors.
    pub fn reflection_matrix(&self, w: &[R::Elem]) -> Result<Matrix<R::Elem>> {
        let cols = (0..self.rank())
            .map(|i| self.reflection(w, &self.basis_vector(i)))
            .collect::<Result<Vec<_>>>()?;
        Ok(matrix::transpose(&cols))
    }

    /// Symmetric Gaussian elimination with unit pivots.
    ///
    /// When no diagonal entry of the remaining block is a unit, a unit
    /// off-diagonal entry `G_ij` is used to replace `(e_i, e_j)` by
    /// `(e_i + e_j, e_i - e_j)`; `q(e_i + e_j) = G_ii + 2G_ij + G_jj` is then a
    /// unit because `G_ii`, `G_jj` are not.
    pub fn diagonalize(&self) -> Result<Diagonalization<R::Elem>> {
        self.diagonalize_from(matrix::identity(&self.ring, self.rank()))
    }

    /// Diagonalizes starting from the basis given by the columns of `start`.
    pub fn diagonalize_from(&self, start: Matrix<R::Elem>) -> Result<Diagonalization<R::Elem>> {
        let r = &self.ring;
        let m = self.rank();
        let mut basis: Vec<Vec<R::Elem>> = matrix::transpose(&start);
        let mut values = Vec::with_capacity(m);
        for k in 0..m {
            let pivot = (k..m).find(|&i| {
                self.evaluate(&basis[i]).map(|v| r.is_unit(&v)).unwrap_or(false)
            });
            match pivot {
                Some(i) => basis.swap(k, i),
                None => {
                    let (i, j) = (k..m)
                        .flat_map(|i| (i + 1..m).map(move |j| (i, j)))
                        .find(|&(i, j)| self.bilinear(&basis[i], &basis[j]).map(|b| r.is_unit(&b)).unwrap_or(false))
                        .ok_or(Error::Degenerate)?;
                    let plus = self.add_vectors(&basis[i], &basis[j]);
                    let minus = self.sub_vectors(&basis[i], &basis[j]);
                    basis[i] = plus;
                    basis[j] = minus;
                    basis.swap(k, i);
                }
            }
            let qk = self.evaluate(&basis[k])?;
            let inv = r.inverse(&qk)?;
            for i in k + 1..m {
                let b = self.bilinear(&basis[i], &basis[k])?;
                if r.is_zero(&b) {
                    continue;
                }
                let c = r.mul(&b, &inv);
                basis[i] = self.sub_vectors(&basis[i], &self.scale_vector(&c, &basis[k]));
            }
            values.push(qk);
        }
        Ok(Diagonalization { basis: matrix::transpose(&basis), values })
    }

    /// First diagonalization vector; its value is a unit.
    pub fn anisotropic_vector(&self) -> Result<Vec<R::Elem>> {
        Ok(self.diagonalize()?.vector(0))
    }
}

impl<D: ScalarDomain> QuadraticSpace<D> {
    /// The same Gram matrix read over `E`; vectors are now E-valued.
    pub fn base_change(&self, algebra: &EtaleAlgebra<D>) -> QuadraticSpace<EtaleAlgebra<D>> {
        let gram = self.gram.iter().map(|row| row.iter().map(|c| algebra.embed(c)).collect()).collect();
        QuadraticSpace { ring: algebra.clone(), gram }
    }

    /// The residue form `q̄` over the residue field.
    pub fn reduce_mod_maximal(&self) -> QuadraticSpace<D::Residue> {
        let gram = self.gram.iter().map(|row| row.iter().map(|c| self.ring.residue(c)).collect()).collect();
        QuadraticSpace { ring: self.ring.residue_field(), gram }
    }

    /// Orthogonal basis grown from a random invertible starting basis, so
    /// that different seeds give different (equally valid) bases.
    pub fn random_orthogonal_basis(&self, sampler: &mut DeterministicSampler) -> Result<Diagonalization<D::Elem>> {
        let m = self.rank();
        for _ in 0..sampler.max_retries() {
            let start: Matrix<D::Elem> = (0..m).map(|_| (0..m).map(|_| self.ring.sample(sampler)).collect()).collect();
            if !self.ring.is_unit(&matrix::det(&self.ring, &start)) {
                continue;
            }
            if let Ok(d) = self.diagonalize_from(start) {
                return Ok(d);
            }
        }
        Err(Error::SamplingExhausted(sampler.max_retries()))
    }
}
