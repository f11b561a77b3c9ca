//! Brute-force ground truth over small prime fields.
//!
//! Elements of `E = F_p[t]/(f)` are indexed by `Σ c_i p^i`, so the base field
//! itself (degree one) is indexed by its values. Addition and multiplication
//! are tabulated once; enumeration then only does table lookups.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::etale::{AlgebraElement, EtaleAlgebra};
use crate::poly::PolyRing;
use crate::quadform::QuadraticSpace;
use crate::scalar::{PrimeField, Ring};

/// Largest number of points any single enumeration may visit.
pub const ENUMERATION_GUARD: u128 = 10_000_000;

pub type ValueSet = BTreeSet<usize>;

/// A finite étale algebra over `F_p` with tabulated arithmetic.
#[derive(Debug, Clone)]
pub struct FiniteAlgebra {
    algebra: EtaleAlgebra<PrimeField>,
    size: usize,
    add: Vec<u32>,
    mul: Vec<u32>,
    norm: Vec<u64>,
}

impl FiniteAlgebra {
    pub fn new(algebra: EtaleAlgebra<PrimeField>) -> Result<Self> {
        let p = algebra.base().modulus() as u128;
        let size = p.pow(algebra.degree() as u32);
        if size * size > ENUMERATION_GUARD {
            return Err(Error::DomainTooLarge(size * size));
        }
        let size = size as usize;
        let mut fa = Self { algebra, size, add: Vec::new(), mul: Vec::new(), norm: Vec::new() };
        let elements: Vec<_> = (0..size).map(|i| fa.decode(i)).collect();
        fa.add = Vec::with_capacity(size * size);
        fa.mul = Vec::with_capacity(size * size);
        for x in &elements {
            for y in &elements {
                fa.add.push(fa.encode(&fa.algebra.add(x, y)) as u32);
                fa.mul.push(fa.encode(&fa.algebra.mul(x, y)) as u32);
            }
        }
        fa.norm = elements.iter().map(|x| leibniz_norm(&fa.algebra, x)).collect();
        Ok(fa)
    }

    /// `F_p` itself, as the degree-one algebra `F_p[t]/(t)`.
    pub fn base(field: PrimeField) -> Result<Self> {
        Self::new(EtaleAlgebra::new(field, PolyRing::new(field).from_ints(&[0, 1]))?)
    }

    pub fn algebra(&self) -> &EtaleAlgebra<PrimeField> {
        &self.algebra
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn encode(&self, x: &AlgebraElement<u64>) -> usize {
        let p = self.algebra.base().modulus() as usize;
        x.coeffs().iter().rev().fold(0, |acc, &c| acc * p + c as usize)
    }

    pub fn decode(&self, mut i: usize) -> AlgebraElement<u64> {
        let p = self.algebra.base().modulus() as usize;
        let coeffs = (0..self.algebra.degree())
            .map(|_| {
                let c = (i % p) as u64;
                i /= p;
                c
            })
            .collect();
        self.algebra.element(coeffs).expect("degree matches")
    }

    /// Coefficients of the element with index `i`, constant term first.
    pub fn coefficients(&self, i: usize) -> Vec<u64> {
        self.decode(i).coeffs().to_vec()
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a * self.size + b] as usize
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.size + b] as usize
    }

    pub fn norm(&self, a: usize) -> u64 {
        self.norm[a]
    }

    pub fn is_unit(&self, a: usize) -> bool {
        self.norm[a] != 0
    }

    pub fn one(&self) -> usize {
        1
    }

    pub fn units(&self) -> ValueSet {
        (0..self.size).filter(|&a| self.is_unit(a)).collect()
    }
}

/// Norm as a Leibniz expansion of the multiplication matrix mod `p`.
pub fn leibniz_norm(algebra: &EtaleAlgebra<PrimeField>, x: &AlgebraElement<u64>) -> u64 {
    let field = algebra.base();
    let m = algebra.multiplication_matrix(x);
    let n = m.len();
    let mut total = 0u64;
    let mut perm = Vec::with_capacity(n);
    permutations(n, &mut perm, &mut |sigma| {
        let inversions = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| sigma[i] > sigma[j]).count();
        let term = (0..n).fold(1u64, |acc, i| field.mul(&acc, &m[i][sigma[i]]));
        total = if inversions % 2 == 0 { field.add(&total, &term) } else { field.sub(&total, &term) };
    });
    total
}

fn permutations(n: usize, prefix: &mut Vec<usize>, visit: &mut impl FnMut(&[usize])) {
    if prefix.len() == n {
        visit(prefix);
        return;
    }
    for k in 0..n {
        if !prefix.contains(&k) {
            prefix.push(k);
            permutations(n, prefix, visit);
            prefix.pop();
        }
    }
}

/// `{q(v) : v ∈ E^m, q(v) a unit}` by visiting every vector.
pub fn enumerate_represented(q: &QuadraticSpace<PrimeField>, fa: &FiniteAlgebra) -> Result<ValueSet> {
    let m = q.rank();
    let points = (fa.size as u128).checked_pow(m as u32).unwrap_or(u128::MAX);
    if points > ENUMERATION_GUARD {
        return Err(Error::DomainTooLarge(points));
    }
    let gram: Vec<Vec<usize>> = q.gram().iter().map(|row| row.iter().map(|&c| c as usize).collect()).collect();
    let mut out = ValueSet::new();
    let mut v = vec![0usize; m];
    loop {
        let mut value = 0;
        for i in 0..m {
            let square = fa.mul(v[i], v[i]);
            value = fa.add(value, fa.mul(gram[i][i], square));
            for j in i + 1..m {
                let cross = fa.mul(gram[i][j], fa.mul(v[i], v[j]));
                value = fa.add(value, fa.add(cross, cross));
            }
        }
        if fa.is_unit(value) {
            out.insert(value);
        }
        let mut k = 0;
        loop {
            if k == m {
                return Ok(out);
            }
            v[k] += 1;
            if v[k] < fa.size {
                break;
            }
            v[k] = 0;
            k += 1;
        }
    }
}

/// Even and odd products of `generators` inside the unit group.
pub fn subgroup_closure(fa: &FiniteAlgebra, generators: &ValueSet) -> (ValueSet, ValueSet) {
    let mut seen = vec![[false; 2]; fa.size];
    let mut stack = vec![(fa.one(), 0usize)];
    seen[fa.one()][0] = true;
    while let Some((x, parity)) = stack.pop() {
        for &g in generators {
            let y = fa.mul(x, g);
            let flipped = 1 - parity;
            if !seen[y][flipped] {
                seen[y][flipped] = true;
                stack.push((y, flipped));
            }
        }
    }
    let collect = |k: usize| (0..fa.size).filter(|&x| seen[x][k]).collect();
    (collect(0), collect(1))
}

/// `(D⁰_q, D¹_q)` over `fa`.
pub fn d0_d1(q: &QuadraticSpace<PrimeField>, fa: &FiniteAlgebra) -> Result<(ValueSet, ValueSet)> {
    Ok(subgroup_closure(fa, &enumerate_represented(q, fa)?))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValueSetReport {
    pub p: u64,
    pub gram: Vec<Vec<u64>>,
    pub represented: Vec<Vec<u64>>,
    pub d: Vec<Vec<u64>>,
    pub d0: Vec<Vec<u64>>,
}

pub fn value_set_report(q: &QuadraticSpace<PrimeField>, fa: &FiniteAlgebra) -> Result<ValueSetReport> {
    let represented = enumerate_represented(q, fa)?;
    let (d0, d1) = subgroup_closure(fa, &represented);
    let list = |s: &ValueSet| s.iter().map(|&x| fa.coefficients(x)).collect();
    Ok(ValueSetReport {
        p: fa.algebra.base().modulus(),
        gram: q.gram().clone(),
        represented: list(&represented),
        d: list(&d0.union(&d1).copied().collect()),
        d0: list(&d0),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    /// `"D"` or `"D0"`: which inclusion failed.
    pub inclusion: &'static str,
    pub element: Vec<u64>,
    pub norm: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairReport {
    pub diagonal: Vec<u64>,
    pub modulus: Vec<u64>,
    pub pass: bool,
    pub counterexamples: Vec<Counterexample>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleReport {
    pub p: u64,
    pub max_rank: usize,
    pub max_degree: usize,
    pub pairs: Vec<PairReport>,
    pub violations: usize,
}

fn tuples(p: u64, len: usize, nonzero: bool) -> Vec<Vec<u64>> {
    let digits: Vec<u64> = if nonzero { (1..p).collect() } else { (0..p).collect() };
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                digits.iter().map(move |&d| {
                    let mut t = prefix.clone();
                    t.push(d);
                    t
                })
            })
            .collect();
    }
    out
}

/// Checks `N(D_q(E)) ⊆ D_q(F)` and `N(D⁰_q(E)) ⊆ D⁰_q(F)` for every diagonal
/// nondegenerate `q` of rank `1..=max_rank` and every monic separable `f` of
/// degree `1..=max_degree`.
pub fn exhaustive_norm_principle_check(p: u64, max_rank: usize, max_degree: usize) -> Result<OracleReport> {
    let field = PrimeField::new(p)?;
    let ring = PolyRing::new(field);
    let base = FiniteAlgebra::base(field)?;
    let mut moduli = Vec::new();
    for degree in 1..=max_degree {
        for mut low in tuples(p, degree, false) {
            low.push(1);
            match EtaleAlgebra::new(field, ring.from_coeffs(low.clone())) {
                Ok(algebra) => moduli.push((low, FiniteAlgebra::new(algebra)?)),
                Err(Error::NotSeparable) => {}
                Err(e) => return Err(e),
            }
        }
    }
    let mut pairs = Vec::new();
    for rank in 1..=max_rank {
        for diagonal in tuples(p, rank, true) {
            let q = QuadraticSpace::diagonal(field, diagonal.clone())?;
            let (f0, f1) = d0_d1(&q, &base)?;
            for (modulus, fa) in &moduli {
                let (e0, e1) = d0_d1(&q, fa)?;
                let mut counterexamples = Vec::new();
                for &x in e0.union(&e1) {
                    let n = fa.norm(x) as usize;
                    if !f0.contains(&n) && !f1.contains(&n) {
                        counterexamples.push(Counterexample { inclusion: "D", element: fa.coefficients(x), norm: n as u64 });
                    }
                }
                for &x in &e0 {
                    let n = fa.norm(x) as usize;
                    if !f0.contains(&n) {
                        counterexamples.push(Counterexample { inclusion: "D0", element: fa.coefficients(x), norm: n as u64 });
                    }
                }
                pairs.push(PairReport {
                    diagonal: diagonal.clone(),
                    modulus: modulus.clone(),
                    pass: counterexamples.is_empty(),
                    counterexamples,
                });
            }
        }
    }
    let violations = pairs.iter().map(|r| r.counterexamples.len()).sum();
    Ok(OracleReport { p, max_rank, max_degree, pairs, violations })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn set(xs: &[usize]) -> ValueSet {
        xs.iter().copied().collect()
    }

    #[test]
    fn represented_values_examples() {
        let f3 = field(3);
        let q = QuadraticSpace::diagonal(f3, vec![1, 1]).unwrap();
        assert_eq!(enumerate_represented(&q, &FiniteAlgebra::base(f3).unwrap()).unwrap(), set(&[1, 2]));
        let f5 = field(5);
        let q = QuadraticSpace::diagonal(f5, vec![1, 1]).unwrap();
        assert_eq!(enumerate_represented(&q, &FiniteAlgebra::base(f5).unwrap()).unwrap(), set(&[1, 2, 3, 4]));
        let q = QuadraticSpace::diagonal(f5, vec![1]).unwrap();
        assert_eq!(enumerate_represented(&q, &FiniteAlgebra::base(f5).unwrap()).unwrap(), set(&[1, 4]));
    }

    #[test]
    fn closure_of_two_in_f5() {
        let base = FiniteAlgebra::base(field(5)).unwrap();
        let (d0, d1) = subgroup_closure(&base, &set(&[2]));
        assert_eq!(d0, set(&[1, 4]));
        assert_eq!(d1, set(&[2, 3]));
    }

    #[test]
    fn d0_is_a_subgroup_with_squares() {
        let f = field(5);
        let fa = FiniteAlgebra::new(EtaleAlgebra::new(f, PolyRing::new(f).from_ints(&[2, 0, 1])).unwrap()).unwrap();
        let q = QuadraticSpace::diagonal(f, vec![1]).unwrap();
        let (d0, _) = d0_d1(&q, &fa).unwrap();
        assert!(d0.contains(&fa.one()));
        for &x in &d0 {
            for &y in &d0 {
                assert!(d0.contains(&fa.mul(x, y)));
            }
            let inv = fa.encode(&fa.algebra().inverse(&fa.decode(x)).unwrap());
            assert!(d0.contains(&inv));
        }
        for x in fa.units() {
            assert!(d0.contains(&fa.mul(x, x)));
        }
    }

    #[test]
    fn rank_two_forms_are_universal() {
        for p in [3, 5, 7, 11] {
            let f = field(p);
            let base = FiniteAlgebra::base(f).unwrap();
            for diagonal in tuples(p, 2, true) {
                let q = QuadraticSpace::diagonal(f, diagonal).unwrap();
                assert_eq!(enumerate_represented(&q, &base).unwrap(), base.units());
            }
        }
    }

    #[test]
    fn leibniz_agrees_with_tables() {
        let f = field(7);
        let alg = EtaleAlgebra::new(f, PolyRing::new(f).from_ints(&[3, 1, 0, 1])).unwrap();
        for coeffs in tuples(7, 3, false).into_iter().step_by(11) {
            let x = alg.element(coeffs).unwrap();
            assert_eq!(leibniz_norm(&alg, &x), alg.norm_by_resultant(&x));
        }
    }

    #[test]
    fn guard_trips() {
        let f = field(101);
        let fa = FiniteAlgebra::base(f).unwrap();
        let q = QuadraticSpace::diagonal(f, vec![1, 1, 1, 1]).unwrap();
        assert!(matches!(enumerate_represented(&q, &fa), Err(Error::DomainTooLarge(_))));
    }

    #[test]
    fn small_exhaustive_run() {
        let report = exhaustive_norm_principle_check(3, 2, 2).unwrap();
        assert_eq!(report.violations, 0);
        // 2 + 4 forms; moduli t, t+1, t+2 and the 6 separable quadratics.
        assert_eq!(report.pairs.len(), 6 * 9);
    }
}
