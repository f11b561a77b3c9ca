//! Reflection decompositions and spinor norms.
//!
//! An isometry is written as `τ_{w_1} ∘ ⋯ ∘ τ_{w_k}` by walking an orthogonal
//! basis with unit values; the spinor norm is `∏ q(w_i)`, well defined up to
//! squares. [`transfer_check`] takes a special orthogonal element over an
//! étale extension and exhibits `N(SN_E(g))` as an even product of values of
//! `q` over the base.

use crate::error::{Error, Result};
use crate::etale::{AlgebraElement, EtaleAlgebra};
use crate::matrix::{self, Matrix};
use crate::quadform::{Diagonalization, QuadraticSpace};
use crate::scalar::{DeterministicSampler, Ring, ScalarDomain};
use crate::witness::{norm_principle_witness, SamplingStats, Witness};

/// A matrix `A` with `Aᵀ G A = G` acting on column vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct Isometry<R: Ring> {
    space: QuadraticSpace<R>,
    matrix: Matrix<R::Elem>,
    det: R::Elem,
}

impl<R: Ring> Isometry<R> {
    pub fn new(space: QuadraticSpace<R>, matrix: Matrix<R::Elem>) -> Result<Self> {
        let m = space.rank();
        if matrix.len() != m {
            return Err(Error::DimensionMismatch { expected: m, got: matrix.len() });
        }
        if let Some(row) = matrix.iter().find(|row| row.len() != m) {
            return Err(Error::DimensionMismatch { expected: m, got: row.len() });
        }
        let r = space.ring();
        let pulled = matrix::mat_mul(r, &matrix::transpose(&matrix), &matrix::mat_mul(r, space.gram(), &matrix));
        if pulled != *space.gram() {
            return Err(Error::NotAnIsometry);
        }
        let det = matrix::det(r, &matrix);
        if !r.is_one(&det) && det != r.neg(&r.one()) {
            return Err(Error::NotAnIsometry);
        }
        Ok(Self { space, matrix, det })
    }

    pub fn identity(space: QuadraticSpace<R>) -> Self {
        let r = space.ring().clone();
        let matrix = matrix::identity(&r, space.rank());
        Self { space, matrix, det: r.one() }
    }

    /// `τ_{w_1} ∘ ⋯ ∘ τ_{w_k}`.
    pub fn from_mirrors(space: QuadraticSpace<R>, mirrors: &[Vec<R::Elem>]) -> Result<Self> {
        let matrix = compose(&space, mirrors)?;
        Self::new(space, matrix)
    }

    pub fn space(&self) -> &QuadraticSpace<R> {
        &self.space
    }

    pub fn matrix(&self) -> &Matrix<R::Elem> {
        &self.matrix
    }

    pub fn det(&self) -> &R::Elem {
        &self.det
    }

    pub fn is_special(&self) -> bool {
        self.space.ring().is_one(&self.det)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.space.gram() != other.space.gram() {
            return Err(Error::NotAnIsometry);
        }
        let r = self.space.ring();
        Ok(Self {
            space: self.space.clone(),
            matrix: matrix::mat_mul(r, &self.matrix, &other.matrix),
            det: r.mul(&self.det, &other.det),
        })
    }
}

/// Matrix of `τ_{w_1} ∘ ⋯ ∘ τ_{w_k}`; the identity for an empty list.
pub fn compose<R: Ring>(space: &QuadraticSpace<R>, mirrors: &[Vec<R::Elem>]) -> Result<Matrix<R::Elem>> {
    let r = space.ring();
    let mut acc = matrix::identity(r, space.rank());
    for w in mirrors {
        acc = matrix::mat_mul(r, &acc, &space.reflection_matrix(w)?);
    }
    Ok(acc)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReflectionDecomposition<E> {
    /// `A = τ_{mirrors[0]} ∘ τ_{mirrors[1]} ∘ ⋯`.
    pub mirrors: Vec<Vec<E>>,
    /// `q` of each mirror, all units.
    pub values: Vec<E>,
}

impl<E> ReflectionDecomposition<E> {
    pub fn len(&self) -> usize {
        self.mirrors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mirrors.is_empty()
    }
}

/// Decomposes `A` along the orthogonal basis `basis`, whose values must be
/// units.
///
/// For each basis vector `e` the remaining map `B` already fixes the earlier
/// ones. If `Be = e` nothing is done, if `Be = -e` the mirror is `e`, if
/// `q(Be - e)` is a unit the mirror is `Be - e`, and otherwise `Be + e`
/// followed by `e`. Over a field one of the last two applies because
/// `q(Be - e) + q(Be + e) = 4q(e)`.
pub fn decompose_in_basis<R: Ring>(
    iso: &Isometry<R>,
    basis: &Diagonalization<R::Elem>,
) -> Result<ReflectionDecomposition<R::Elem>> {
    let space = &iso.space;
    let r = space.ring();
    let m = space.rank();
    if basis.values.len() != m || basis.values.iter().any(|v| !r.is_unit(v)) {
        return Err(Error::DecompositionFailed);
    }
    let mut remaining = iso.matrix.clone();
    let mut out = ReflectionDecomposition { mirrors: Vec::new(), values: Vec::new() };
    let mut push = |w: Vec<R::Elem>, remaining: &mut Matrix<R::Elem>| -> Result<()> {
        let value = space.evaluate(&w)?;
        *remaining = matrix::mat_mul(r, &space.reflection_matrix(&w)?, remaining);
        out.mirrors.push(w);
        out.values.push(value);
        Ok(())
    };
    for k in 0..m {
        let e = basis.vector(k);
        let image = matrix::mat_vec(r, &remaining, &e);
        if image == e {
            continue;
        }
        let minus_e: Vec<_> = e.iter().map(|x| r.neg(x)).collect();
        if image == minus_e {
            push(e, &mut remaining)?;
            continue;
        }
        let diff = space.sub_vectors(&image, &e);
        if r.is_unit(&space.evaluate(&diff)?) {
            push(diff, &mut remaining)?;
            continue;
        }
        let sum = space.add_vectors(&image, &e);
        if r.is_unit(&space.evaluate(&sum)?) {
            push(sum, &mut remaining)?;
            push(e, &mut remaining)?;
            continue;
        }
        return Err(Error::DecompositionFailed);
    }
    Ok(out)
}

/// Decomposition along the basis produced by [`QuadraticSpace::diagonalize`];
/// for `G = I` that is the standard basis.
pub fn cartan_dieudonne_standard<R: Ring>(iso: &Isometry<R>) -> Result<ReflectionDecomposition<R::Elem>> {
    decompose_in_basis(iso, &iso.space.diagonalize()?)
}

/// Decomposition along a random orthogonal basis drawn from `sampler`.
pub fn cartan_dieudonne<D: ScalarDomain>(
    iso: &Isometry<D>,
    sampler: &mut DeterministicSampler,
) -> Result<ReflectionDecomposition<D::Elem>> {
    for _ in 0..sampler.max_retries() {
        let basis = iso.space.random_orthogonal_basis(sampler)?;
        if let Ok(d) = decompose_in_basis(iso, &basis) {
            return Ok(d);
        }
    }
    Err(Error::DecompositionFailed)
}

/// Product of the mirror values.
pub fn spinor_norm_of<R: Ring>(ring: &R, decomposition: &ReflectionDecomposition<R::Elem>) -> R::Elem {
    ring.product(decomposition.values.iter())
}

/// Spinor-norm representative from a random decomposition.
pub fn spinor_norm<D: ScalarDomain>(iso: &Isometry<D>, sampler: &mut DeterministicSampler) -> Result<D::Elem> {
    Ok(spinor_norm_of(iso.space.ring(), &cartan_dieudonne(iso, sampler)?))
}

/// Whether `a / b` is a square; both must be units.
pub fn same_square_class<D: ScalarDomain>(base: &D, a: &D::Elem, b: &D::Elem) -> Result<bool> {
    base.is_square(&base.div(a, b)?)
}

/// Result of [`transfer_check`].
#[derive(Debug, Clone, PartialEq)]
pub struct TransferCheck<E> {
    pub decomposition: ReflectionDecomposition<AlgebraElement<E>>,
    pub spinor_norm: AlgebraElement<E>,
    /// One witness per mirror value, concatenated; its input is `SN_E(g)`.
    pub witness: Witness<E>,
    /// `∏ q(w_k) = N(SN_E(g))` exactly.
    pub holds: bool,
}

/// Exhibits `N_{E/D}(SN_E(g))` as an even product of values of `q`.
///
/// `g` is a special orthogonal element of `q` read over `E`. Mirrors are
/// found along orthogonal bases of `q` over the base, redrawn while a step
/// meets a non-unit of `E`.
pub fn transfer_check<D: ScalarDomain>(
    q: &QuadraticSpace<D>,
    algebra: &EtaleAlgebra<D>,
    g: &Isometry<EtaleAlgebra<D>>,
    sampler: &mut DeterministicSampler,
) -> Result<TransferCheck<D::Elem>> {
    let qe = q.base_change(algebra);
    if g.space.gram() != qe.gram() {
        return Err(Error::DimensionMismatch { expected: q.rank(), got: g.space.rank() });
    }
    if !g.is_special() {
        return Err(Error::NotAnIsometry);
    }
    let embed = |d: Diagonalization<D::Elem>| Diagonalization {
        basis: d.basis.iter().map(|row| row.iter().map(|c| algebra.embed(c)).collect()).collect(),
        values: d.values.iter().map(|c| algebra.embed(c)).collect(),
    };
    let mut decomposition = decompose_in_basis(g, &embed(q.diagonalize()?));
    for _ in 0..sampler.max_retries() {
        if decomposition.is_ok() {
            break;
        }
        decomposition = decompose_in_basis(g, &embed(q.random_orthogonal_basis(sampler)?));
    }
    let decomposition = decomposition?;
    if decomposition.len() % 2 != 0 {
        return Err(Error::Internal("special orthogonal element with odd mirror count".into()));
    }

    let base = algebra.base();
    let spinor_norm = spinor_norm_of(algebra, &decomposition);
    let mut factors = Vec::new();
    let mut stats = SamplingStats::default();
    for w in &decomposition.mirrors {
        let part = norm_principle_witness(q, algebra, w, sampler)?;
        stats.total_draws += part.stats.total_draws;
        stats.max_draws = stats.max_draws.max(part.stats.max_draws);
        factors.extend(part.factors);
    }
    let norm = algebra.norm(&spinor_norm);
    let product = base.product(factors.iter().map(|f| &f.value));
    let holds = product == norm && factors.len() % 2 == 0;
    let parity = (factors.len() % 2) as u8;
    let witness = Witness { factors, input: spinor_norm.clone(), norm, parity, stats };
    Ok(TransferCheck { decomposition, spinor_norm, witness, holds })
}
