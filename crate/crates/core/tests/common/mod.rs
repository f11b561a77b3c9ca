//! Random instance generators shared by the integration tests.
#![allow(dead_code)]

use quadnorm::etale::{AlgebraElement, EtaleAlgebra};
use quadnorm::poly::PolyRing;
use quadnorm::quadform::QuadraticSpace;
use quadnorm::scalar::{DeterministicSampler, LocalFunction, LocalFunctions, Ring, ScalarDomain};

/// Nonzero diagonal with a few small symmetric off-diagonal perturbations.
pub fn perturbed_gram<D: ScalarDomain>(base: &D, m: usize, s: &mut DeterministicSampler) -> QuadraticSpace<D> {
    loop {
        let mut gram = vec![vec![base.zero(); m]; m];
        for i in 0..m {
            gram[i][i] = base.sample_unit(s);
            for j in 0..i {
                if s.coin() {
                    let c = base.from_i64(s.range(0, 4) as i64 - 2);
                    gram[i][j] = c.clone();
                    gram[j][i] = c;
                }
            }
        }
        if let Ok(q) = QuadraticSpace::new(base.clone(), gram) {
            return q;
        }
    }
}

pub fn diagonal_gram<D: ScalarDomain>(base: &D, m: usize, s: &mut DeterministicSampler) -> QuadraticSpace<D> {
    QuadraticSpace::diagonal(base.clone(), (0..m).map(|_| base.sample_unit(s)).collect()).unwrap()
}

/// Random monic separable modulus of degree `n`, coefficients from `coeff`.
pub fn separable_algebra<D: ScalarDomain>(
    base: &D,
    n: usize,
    s: &mut DeterministicSampler,
    mut coeff: impl FnMut(&mut DeterministicSampler) -> D::Elem,
) -> EtaleAlgebra<D> {
    loop {
        let mut c: Vec<_> = (0..n).map(|_| coeff(s)).collect();
        c.push(base.one());
        if let Ok(a) = EtaleAlgebra::new(base.clone(), PolyRing::new(base.clone()).from_coeffs(c)) {
            return a;
        }
    }
}

/// Random `u ∈ E^m` with `q_E(u)` a unit.
pub fn unit_input<D: ScalarDomain>(
    q: &QuadraticSpace<D>,
    algebra: &EtaleAlgebra<D>,
    s: &mut DeterministicSampler,
    mut coeff: impl FnMut(&mut DeterministicSampler) -> D::Elem,
) -> Vec<AlgebraElement<D::Elem>> {
    let qe = q.base_change(algebra);
    loop {
        let u: Vec<_> = (0..q.rank())
            .map(|_| algebra.element((0..algebra.degree()).map(|_| coeff(s)).collect()).unwrap())
            .collect();
        if algebra.is_unit(&qe.evaluate(&u).unwrap()) {
            return u;
        }
    }
}

/// Polynomial `a + b x` with small integer coefficients.
pub fn linear_local(s: &mut DeterministicSampler) -> LocalFunction {
    LocalFunctions.from_ints(&[s.signed(), s.signed()], &[1]).unwrap()
}

/// Random vector with unit value.
pub fn anisotropic_vector<R: Ring>(
    q: &QuadraticSpace<R>,
    s: &mut DeterministicSampler,
    mut coeff: impl FnMut(&mut DeterministicSampler) -> R::Elem,
) -> Vec<R::Elem> {
    loop {
        let w: Vec<_> = (0..q.rank()).map(|_| coeff(s)).collect();
        if q.ring().is_unit(&q.evaluate(&w).unwrap()) {
            return w;
        }
    }
}
