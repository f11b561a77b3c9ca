//! Explicit norm-principle witnesses.
//!
//! For `a = q_E(u)` a unit of `E = D[t]/(f)`, [`norm_principle_witness`]
//! returns base vectors `w_1, …, w_k` with `q(w_1) ⋯ q(w_k) = N_{E/D}(a)` and
//! `k ≡ [E : D] (mod 2)`.
//!
//! Outline:
//!
//! 1. Rescale: pick `b` with `α = a⁻¹ b²` primitive and put `v = u b⁻¹`, so
//!    `α q(v) = 1` and `N(a) = N(q(v)) N(b)²`.
//! 2. Find `ω` with `α q(ω) = 1` such that `Φ_ω(t) = t q(ω(t)) - 1` is
//!    separable of degree `2n - 1`, where `ω(t)` collects the coordinates of
//!    `ω` in the power basis of `α`. Points are drawn on the line through `v`;
//!    over the local ring they are drawn over the residue field and lifted.
//! 3. `Φ_ω = c · h · f_α` with `f_α` the minimal polynomial of `α` and `h`
//!    monic of degree `n - 1`; `c` is `q` of the top coordinate row.
//! 4. Over `T = D[t]/(h)` the class `β` of `t` satisfies `β q(ω(β)) = 1`, and
//!    `N_E(q(v)) = c · N_T(β) = c / N_T(q(ω(β)))`. Recurse on `T`, inverting
//!    each returned factor with `w ↦ w / q(w)`.
//! 5. Pad with `z·N(b)` and `z / q(z)` for an anisotropic `z`.

use crate::error::{Error, Result};
use crate::etale::{AlgebraElement, EtaleAlgebra};
use crate::matrix::Matrix;
use crate::poly::{Poly, PolyRing};
use crate::quadform::QuadraticSpace;
use crate::scalar::{DeterministicSampler, Ring, ScalarDomain};

type Vector<E> = Vec<AlgebraElement<E>>;

#[derive(Debug, Clone, PartialEq)]
pub struct WitnessFactor<E> {
    pub vector: Vec<E>,
    pub value: E,
}

/// Counts draws made by the rejection samplers during one witness run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SamplingStats {
    pub total_draws: usize,
    /// Largest number of draws any single sampling loop needed.
    pub max_draws: usize,
}

impl SamplingStats {
    fn record(&mut self, draws: usize) {
        self.total_draws += draws;
        self.max_draws = self.max_draws.max(draws);
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Witness<E> {
    pub factors: Vec<WitnessFactor<E>>,
    pub input: AlgebraElement<E>,
    pub norm: E,
    pub parity: u8,
    pub stats: SamplingStats,
}

impl<E> Witness<E> {
    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }
}

/// `Φ_ω(t) = t q(ω(t)) - 1` together with the data it was built from.
#[derive(Debug, Clone, PartialEq)]
pub struct PhiPolynomial<E> {
    pub poly: Poly<E>,
    /// `ω_{i,j}`: coefficient of `α^i` in the `j`-th coordinate.
    pub coords: Matrix<E>,
    pub alpha: AlgebraElement<E>,
}

impl<E: Clone> PhiPolynomial<E> {
    /// Row `n - 1` of the coordinate matrix; `q` of it is the leading
    /// coefficient of `Φ_ω`.
    pub fn top_row(&self) -> Vec<E> {
        self.coords.last().cloned().unwrap_or_default()
    }
}

/// Output of [`sample_good_point`]: `ω' = τ_dir(v)` and its `Φ`.
#[derive(Debug, Clone, PartialEq)]
pub struct GoodPoint<E> {
    pub omega: Vec<AlgebraElement<E>>,
    pub direction: Vec<AlgebraElement<E>>,
    pub phi: PhiPolynomial<E>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PrimitiveScale<E> {
    pub b: AlgebraElement<E>,
    pub alpha: AlgebraElement<E>,
    pub v: Vector<E>,
}

/// Draws `b` until `α = a⁻¹ b²` is primitive; returns `(b, α, v = u b⁻¹)`.
///
/// The first draw is `b = 1`. Later draws are made over the residue field
/// and lifted coefficient-wise, which over a field is the identity.
pub fn make_primitive_scale<D: ScalarDomain>(
    algebra: &EtaleAlgebra<D>,
    a: &AlgebraElement<D::Elem>,
    u: &[AlgebraElement<D::Elem>],
    sampler: &mut DeterministicSampler,
    stats: &mut SamplingStats,
) -> Result<PrimitiveScale<D::Elem>> {
    let a_inv = algebra.inverse(a).map_err(|_| Error::NonUnitInput)?;
    let residue = algebra.reduce_mod_maximal();
    let mut b = algebra.one();
    for draw in 1..=sampler.max_retries() {
        if draw > 1 {
            b = algebra.lift_element(&residue.sample_element(sampler));
        }
        let Ok(b_inv) = algebra.inverse(&b) else { continue };
        let alpha = algebra.mul(&a_inv, &algebra.mul(&b, &b));
        if algebra.is_primitive(&alpha) {
            stats.record(draw);
            let v = u.iter().map(|x| algebra.mul(x, &b_inv)).collect();
            return Ok(PrimitiveScale { b, alpha, v });
        }
    }
    stats.record(sampler.max_retries());
    Err(Error::SamplingExhausted(sampler.max_retries()))
}

/// `q` applied to a vector of polynomials, as a polynomial.
fn q_of_polys<D: ScalarDomain>(q: &QuadraticSpace<D>, ring: &PolyRing<D>, polys: &[Poly<D::Elem>]) -> Poly<D::Elem> {
    let base = q.ring();
    let g = q.gram();
    let m = polys.len();
    let mut acc = ring.zero();
    for i in 0..m {
        for j in i..m {
            if base.is_zero(&g[i][j]) {
                continue;
            }
            let coeff = if i == j { g[i][j].clone() } else { base.add(&g[i][j], &g[i][j]) };
            acc = ring.add(&acc, &ring.scale(&ring.mul(&polys[i], &polys[j]), &coeff));
        }
    }
    acc
}

pub fn phi_polynomial<D: ScalarDomain>(
    q: &QuadraticSpace<D>,
    algebra: &EtaleAlgebra<D>,
    alpha: &AlgebraElement<D::Elem>,
    omega: &[AlgebraElement<D::Elem>],
) -> Result<PhiPolynomial<D::Elem>> {
    let coords = algebra.expand_in_power_basis(omega, alpha)?;
    let ring = algebra.poly_ring();
    let polys = algebra.contract(&coords);
    let tq = ring.shift(&q_of_polys(q, &ring, &polys), 1);
    let poly = ring.sub(&tq, &ring.one());
    Ok(PhiPolynomial { poly, coords, alpha: alpha.clone() })
}

/// Second intersection of the line `v + s·dir` with the quadric through `v`:
/// `v - (2⟨v, dir⟩ / q(dir))·dir`, which is the reflection `τ_dir(v)`.
pub fn second_intersection<R: Ring>(q: &QuadraticSpace<R>, v: &[R::Elem], dir: &[R::Elem]) -> Result<Vec<R::Elem>> {
    let ring = q.ring();
    let qd = q.evaluate(dir)?;
    let inv = ring.inverse(&qd)?;
    let b = q.bilinear(v, dir)?;
    let s = ring.neg(&ring.mul(&ring.add(&b, &b), &inv));
    Ok(q.add_vectors(v, &q.scale_vector(&s, dir)))
}

/// True when `Φ` has degree exactly `2n - 1`, a unit leading coefficient,
/// and is separable in the étale sense.
fn phi_is_good<D: ScalarDomain>(algebra: &EtaleAlgebra<D>, phi: &Poly<D::Elem>) -> Result<bool> {
    let n = algebra.degree();
    if phi.degree() != Some(2 * n - 1) || !algebra.base().is_unit(phi.leading().unwrap()) {
        return Ok(false);
    }
    algebra.poly_ring().is_separable(phi)
}

/// Rejection sampler for a point `ω'` on `α q = 1` with `Φ_{ω'}` separable of
/// degree `2n - 1`; in `ring_mode` also `α⟨v, ω'⟩ - 1` must be a unit.
pub fn sample_good_point<F: ScalarDomain>(
    q: &QuadraticSpace<F>,
    algebra: &EtaleAlgebra<F>,
    alpha: &AlgebraElement<F::Elem>,
    v: &[AlgebraElement<F::Elem>],
    sampler: &mut DeterministicSampler,
    ring_mode: bool,
    stats: &mut SamplingStats,
) -> Result<GoodPoint<F::Elem>> {
    if q.rank() < 2 {
        return Err(Error::RankOneUnsupported);
    }
    let qe = q.base_change(algebra);
    for draw in 1..=sampler.max_retries() {
        // Odd draws use constant directions: q(dir) is then a base scalar and
        // the new point stays as small as v.
        let dir: Vector<F::Elem> = if draw % 2 == 1 {
            (0..q.rank()).map(|_| algebra.embed(&q.ring().sample(sampler))).collect()
        } else {
            (0..q.rank()).map(|_| algebra.sample_element(sampler)).collect()
        };
        let Ok(omega) = second_intersection(&qe, v, &dir) else { continue };
        if ring_mode {
            let pairing = algebra.mul(alpha, &qe.bilinear(v, &omega)?);
            if !algebra.is_unit(&algebra.sub(&pairing, &algebra.one())) {
                continue;
            }
        }
        let Ok(phi) = phi_polynomial(q, algebra, alpha, &omega) else { continue };
        let good = phi_is_good(algebra, &phi.poly)?;
        if good {
            stats.record(draw);
            return Ok(GoodPoint { omega, direction: dir, phi });
        }
    }
    stats.record(sampler.max_retries());
    Err(Error::SamplingExhausted(sampler.max_retries()))
}

/// Lifts a residue-level solution to an exact solution of `α q(ω) = 1`.
///
/// `lifted` is any coefficient-wise lift `ω̃` of the residue point. With
/// `h = α q(ω̃) - 1` and `u = α⟨v, ω̃⟩ - 1`, the point
/// `ω = (λ v + ω̃) / (λ + 1)` for `λ = -h / 2u` satisfies `α q(ω) = 1` and
/// reduces to the same residue point, because `h` lies in the maximal ideal.
pub fn lift_point<D: ScalarDomain>(
    q: &QuadraticSpace<D>,
    algebra: &EtaleAlgebra<D>,
    alpha: &AlgebraElement<D::Elem>,
    v: &[AlgebraElement<D::Elem>],
    lifted: &[AlgebraElement<D::Elem>],
) -> Result<Vector<D::Elem>> {
    let qs = q.base_change(algebra);
    let one = algebra.one();
    let h = algebra.sub(&algebra.mul(alpha, &qs.evaluate(lifted)?), &one);
    let residue = algebra.base().residue_field();
    if algebra.residue_element(&h).coeffs().iter().any(|c| !residue.is_zero(c)) {
        return Err(Error::Internal("lifted point is not a residue solution".into()));
    }
    let u = algebra.sub(&algebra.mul(alpha, &qs.bilinear(v, lifted)?), &one);
    let two_u_inv = algebra
        .inverse(&algebra.add(&u, &u))
        .map_err(|_| Error::UnitConditionViolated)?;
    let lambda = algebra.neg(&algebra.mul(&h, &two_u_inv));
    let scale = algebra
        .inverse(&algebra.add(&lambda, &one))
        .map_err(|_| Error::Internal("1 + λ is not a unit; the lift was not a residue solution".into()))?;
    let numerator = qs.add_vectors(&qs.scale_vector(&lambda, v), lifted);
    Ok(qs.scale_vector(&scale, &numerator))
}

/// Splits `Φ = c · h · f_α` with `h` monic; `c` is the leading coefficient.
pub fn factor_phi<D: ScalarDomain>(
    ring: &PolyRing<D>,
    phi: &Poly<D::Elem>,
    f_alpha: &Poly<D::Elem>,
) -> Result<(D::Elem, Poly<D::Elem>)> {
    let (quot, rem) = ring.divmod_monic(phi, f_alpha)?;
    if !rem.is_zero() {
        return Err(Error::NonzeroRemainder);
    }
    let c = quot.leading().cloned().ok_or(Error::NonzeroRemainder)?;
    let c_inv = ring.base().inverse(&c)?;
    Ok((c, ring.scale(&quot, &c_inv)))
}

/// `w ↦ w / q(w)`, so that `q(w / q(w)) = 1 / q(w)`.
pub fn invert_factor<R: Ring>(q: &QuadraticSpace<R>, w: &[R::Elem]) -> Result<Vec<R::Elem>> {
    let inv = q.ring().inverse(&q.evaluate(w)?)?;
    Ok(q.scale_vector(&inv, w))
}

/// `w / q(w)` with its value `1 / q(w)`, without re-evaluating `q`.
fn inverted<R: Ring>(q: &QuadraticSpace<R>, f: &WitnessFactor<R::Elem>) -> Result<WitnessFactor<R::Elem>> {
    let value = q.ring().inverse(&f.value)?;
    Ok(WitnessFactor { vector: q.scale_vector(&value, &f.vector), value })
}

fn factor<R: Ring>(q: &QuadraticSpace<R>, vector: Vec<R::Elem>) -> Result<WitnessFactor<R::Elem>> {
    let value = q.evaluate(&vector)?;
    if !q.ring().is_unit(&value) {
        return Err(Error::Internal("witness factor has non-unit value".into()));
    }
    Ok(WitnessFactor { vector, value })
}

/// Finds `ω` over `algebra` with `α q(ω) = 1` and a good `Φ_ω`.
///
/// Over the local ring the point `ω' = τ_dir(v̄)` is drawn over the residue
/// algebra. Its lift is `τ_{dir~}(v)` for the constant lift `dir~` of the
/// direction: it reduces to `ω'` and lies on the quadric exactly, so the
/// correction of [`lift_point`] would be trivial (`h = 0`, `λ = 0`).
fn find_good_point<D: ScalarDomain>(
    q: &QuadraticSpace<D>,
    algebra: &EtaleAlgebra<D>,
    alpha: &AlgebraElement<D::Elem>,
    v: &[AlgebraElement<D::Elem>],
    sampler: &mut DeterministicSampler,
    stats: &mut SamplingStats,
) -> Result<PhiPolynomial<D::Elem>> {
    if algebra.base().is_field() {
        return Ok(sample_good_point(q, algebra, alpha, v, sampler, false, stats)?.phi);
    }
    let residue = algebra.reduce_mod_maximal();
    let qbar = q.reduce_mod_maximal();
    let alpha_bar = algebra.residue_element(alpha);
    let v_bar: Vec<_> = v.iter().map(|x| algebra.residue_element(x)).collect();
    let point = sample_good_point(&qbar, &residue, &alpha_bar, &v_bar, sampler, true, stats)?;
    let direction: Vec<_> = point.direction.iter().map(|x| algebra.lift_element(x)).collect();
    let omega = second_intersection(&q.base_change(algebra), v, &direction)?;
    let phi = phi_polynomial(q, algebra, alpha, &omega)?;
    if !phi_is_good(algebra, &phi.poly)? {
        return Err(Error::Internal("lifted Φ lost separability".into()));
    }
    Ok(phi)
}

/// Degree-reduction recursion for `α q(v) = 1` with `α` primitive; returns
/// factors whose values multiply to `N(q(v)) = 1 / N(α)`.
fn reduce_degree<D: ScalarDomain>(
    q: &QuadraticSpace<D>,
    algebra: &EtaleAlgebra<D>,
    alpha: &AlgebraElement<D::Elem>,
    v: &[AlgebraElement<D::Elem>],
    sampler: &mut DeterministicSampler,
    stats: &mut SamplingStats,
) -> Result<Vec<WitnessFactor<D::Elem>>> {
    let base = algebra.base();
    let n = algebra.degree();
    if n == 1 {
        let vector = v.iter().map(|x| x.coeffs()[0].clone()).collect();
        return Ok(vec![factor(q, vector)?]);
    }

    let phi = find_good_point(q, algebra, alpha, v, sampler, stats)?;
    let ring = algebra.poly_ring();
    // Below the top level α is the class of t, whose minimal polynomial is
    // the modulus.
    let f_alpha = if *alpha == algebra.generator() {
        algebra.modulus().clone()
    } else {
        algebra.minimal_polynomial(alpha)?
    };
    let mut expected = ring.coeff(&f_alpha, 0);
    if n % 2 == 1 {
        expected = base.neg(&expected);
    }
    if algebra.norm_by_resultant(alpha) != expected {
        return Err(Error::Internal("N(α) differs from ±f_α(0)".into()));
    }

    let (c, h) = factor_phi(&ring, &phi.poly, &f_alpha)?;
    let top = factor(q, phi.top_row())?;
    if top.value != c {
        return Err(Error::Internal("leading coefficient of Φ differs from q(top row)".into()));
    }

    let smaller = EtaleAlgebra::new(base.clone(), h.clone())?;
    let beta = smaller.generator();
    let u_small: Vec<_> = algebra.contract(&phi.coords).iter().map(|p| smaller.from_poly(p)).collect();

    let mut factors = vec![top];
    for f in reduce_degree(q, &smaller, &beta, &u_small, sampler, stats)? {
        factors.push(inverted(q, &f)?);
    }
    Ok(factors)
}

/// Closed form for `q = ⟨d⟩`: `N(d u₀²) = dⁿ N(u₀)²`.
fn rank_one_witness<D: ScalarDomain>(
    q: &QuadraticSpace<D>,
    algebra: &EtaleAlgebra<D>,
    u0: &AlgebraElement<D::Elem>,
) -> Result<Vec<WitnessFactor<D::Elem>>> {
    let base = algebra.base();
    let e = vec![base.one()];
    let mut factors = (0..algebra.degree()).map(|_| factor(q, e.clone())).collect::<Result<Vec<_>>>()?;
    pad_square(q, &algebra.norm(u0), &mut factors)?;
    Ok(factors)
}

/// Appends two factors whose values multiply to `s²`; nothing when `s² = 1`.
fn pad_square<D: ScalarDomain>(q: &QuadraticSpace<D>, s: &D::Elem, factors: &mut Vec<WitnessFactor<D::Elem>>) -> Result<()> {
    if q.ring().is_one(&q.ring().mul(s, s)) {
        return Ok(());
    }
    let z = q.anisotropic_vector()?;
    factors.push(factor(q, q.scale_vector(s, &z))?);
    let fz = factor(q, z)?;
    factors.push(inverted(q, &fz)?);
    Ok(())
}

/// Builds a witness for `N_{E/D}(q_E(u))`.
pub fn norm_principle_witness<D: ScalarDomain>(
    q: &QuadraticSpace<D>,
    algebra: &EtaleAlgebra<D>,
    u: &[AlgebraElement<D::Elem>],
    sampler: &mut DeterministicSampler,
) -> Result<Witness<D::Elem>> {
    if u.len() != q.rank() {
        return Err(Error::DimensionMismatch { expected: q.rank(), got: u.len() });
    }
    for x in u {
        algebra.check(x)?;
    }
    let base = algebra.base();
    let a = q.base_change(algebra).evaluate(u)?;
    if !algebra.is_unit(&a) {
        return Err(Error::NonUnitInput);
    }
    let mut stats = SamplingStats::default();
    let factors = if q.rank() == 1 {
        rank_one_witness(q, algebra, &u[0])?
    } else {
        let scale = make_primitive_scale(algebra, &a, u, sampler, &mut stats)?;
        let mut factors = reduce_degree(q, algebra, &scale.alpha, &scale.v, sampler, &mut stats)?;
        pad_square(q, &algebra.norm(&scale.b), &mut factors)?;
        factors
    };
    let norm = algebra.norm(&a);
    let product = base.product(factors.iter().map(|f| &f.value));
    if product != norm {
        return Err(Error::Internal("witness product differs from the norm".into()));
    }
    let parity = (factors.len() % 2) as u8;
    if parity as usize != algebra.degree() % 2 {
        return Err(Error::Internal("witness parity differs from the degree".into()));
    }
    Ok(Witness { factors, input: a, norm, parity, stats })
}

/// Outcome of [`verify_witness`]; `reason` names the first failed check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verification {
    pub ok: bool,
    pub reason: Option<&'static str>,
}

impl Verification {
    fn pass() -> Self {
        Self { ok: true, reason: None }
    }

    fn fail(reason: &'static str) -> Self {
        Self { ok: false, reason: Some(reason) }
    }
}

/// Recomputes every factor value, the product, and the norm of `q(u)` by
/// both the determinant and the resultant route.
pub fn verify_witness<D: ScalarDomain>(
    q: &QuadraticSpace<D>,
    algebra: &EtaleAlgebra<D>,
    u: &[AlgebraElement<D::Elem>],
    witness: &Witness<D::Elem>,
) -> Verification {
    let base = algebra.base();
    if u.len() != q.rank() || u.iter().any(|x| algebra.check(x).is_err()) {
        return Verification::fail("VectorShape");
    }
    let Ok(a) = q.base_change(algebra).evaluate(u) else {
        return Verification::fail("VectorShape");
    };
    if a != witness.input {
        return Verification::fail("InputMismatch");
    }
    let by_det = algebra.norm(&a);
    let by_res = algebra.norm_by_resultant(&a);
    if by_det != by_res {
        return Verification::fail("NormRoutesDisagree");
    }
    if by_det != witness.norm {
        return Verification::fail("NormMismatch");
    }
    for f in &witness.factors {
        match q.evaluate(&f.vector) {
            Ok(value) if value == f.value && base.is_unit(&value) => {}
            _ => return Verification::fail("FactorValueMismatch"),
        }
    }
    let product = base.product(witness.factors.iter().map(|f| &f.value));
    if product != witness.norm {
        return Verification::fail("ProductMismatch");
    }
    let parity = (witness.factors.len() % 2) as u8;
    if parity != witness.parity || parity as usize != algebra.degree() % 2 {
        return Verification::fail("ParityMismatch");
    }
    Verification::pass()
}
