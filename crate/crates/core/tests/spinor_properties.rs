mod common;

use common::*;
use proptest::prelude::*;
use quadnorm::scalar::{DeterministicSampler, PrimeField, Rationals, Ring, ScalarDomain};
use quadnorm::spinor::{self, Isometry};

fn decomposition_properties<D: ScalarDomain>(base: &D, seed: u64, m: usize, k: usize) -> Result<(), TestCaseError> {
    let mut s = DeterministicSampler::with_bounds(seed, 5, 1000);
    let space = perturbed_gram(base, m, &mut s);
    let mirrors: Vec<_> = (0..k).map(|_| anisotropic_vector(&space, &mut s, |s| base.sample(s))).collect();
    let iso = Isometry::from_mirrors(space.clone(), &mirrors).unwrap();
    let sign = if k % 2 == 0 { base.one() } else { base.neg(&base.one()) };
    prop_assert_eq!(iso.det(), &sign);
    let generating = base.product(mirrors.iter().map(|w| space.evaluate(w).unwrap()).collect::<Vec<_>>().iter());

    let standard = spinor::cartan_dieudonne_standard(&iso);
    let random = spinor::cartan_dieudonne(&iso, &mut DeterministicSampler::new(seed)).unwrap();
    for d in standard.iter().chain(std::iter::once(&random)) {
        prop_assert_eq!(&spinor::compose(&space, &d.mirrors).unwrap(), iso.matrix());
        prop_assert!(d.len() <= 2 * m);
        prop_assert_eq!(d.len() % 2, k % 2);
        for (w, value) in d.mirrors.iter().zip(&d.values) {
            prop_assert_eq!(&space.evaluate(w).unwrap(), value);
            prop_assert!(base.is_unit(value));
        }
        prop_assert!(spinor::same_square_class(base, &spinor::spinor_norm_of(base, d), &generating).unwrap());
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn rational_decompositions(seed in any::<u64>(), m in 1usize..=4, k in 0usize..=5) {
        decomposition_properties(&Rationals, seed, m, k)?;
    }

    #[test]
    fn prime_field_decompositions(seed in any::<u64>(), m in 1usize..=4, k in 0usize..=5, p in prop::sample::select(vec![7u64, 13, 101])) {
        decomposition_properties(&PrimeField::new(p).unwrap(), seed, m, k)?;
    }

    #[test]
    fn square_classes_are_classes(a in 1i64..50, b in 1i64..50, c in 1i64..20) {
        let q = Rationals;
        let (a, b, c) = (q.from_i64(a), q.from_i64(b), q.from_i64(c));
        let ac2 = q.mul(&a, &q.mul(&c, &c));
        prop_assert!(spinor::same_square_class(&q, &a, &ac2).unwrap());
        prop_assert_eq!(
            spinor::same_square_class(&q, &a, &b).unwrap(),
            spinor::same_square_class(&q, &b, &a).unwrap()
        );
        prop_assert!(!spinor::same_square_class(&q, &a, &q.neg(&a)).unwrap());
    }

    #[test]
    fn composition_multiplies_determinants(seed in any::<u64>(), m in 1usize..=3, k in 0usize..=3, l in 0usize..=3) {
        let q = Rationals;
        let mut s = DeterministicSampler::with_bounds(seed, 5, 1000);
        let space = perturbed_gram(&q, m, &mut s);
        let draw = |n: usize, s: &mut DeterministicSampler| -> Vec<_> {
            (0..n).map(|_| anisotropic_vector(&space, s, |s| q.from_i64(s.signed()))).collect()
        };
        let (x, y) = (draw(k, &mut s), draw(l, &mut s));
        let a = Isometry::from_mirrors(space.clone(), &x).unwrap();
        let b = Isometry::from_mirrors(space.clone(), &y).unwrap();
        let ab = a.compose(&b).unwrap();
        let both: Vec<_> = x.iter().chain(&y).cloned().collect();
        prop_assert_eq!(ab.matrix(), &spinor::compose(&space, &both).unwrap());
        prop_assert_eq!(ab.det(), &q.mul(a.det(), b.det()));
    }
}
