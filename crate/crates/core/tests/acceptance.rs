//! Acceptance criteria 1 to 9, one PASS/FAIL line each.
//!
//! Runs without the libtest harness so that the summary lines are printed
//! by `cargo test` directly.

mod common;

use std::collections::BTreeSet;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use num_rational::BigRational;
use quadnorm::etale::EtaleAlgebra;
use quadnorm::oracle::{self, FiniteAlgebra};
use quadnorm::poly::PolyRing;
use quadnorm::quadform::QuadraticSpace;
use quadnorm::scalar::{DeterministicSampler, LocalFunctions, PrimeField, Rationals, Ring, ScalarDomain};
use quadnorm::spinor::{self, Isometry};
use quadnorm::witness::{self, lift_point, Witness, WitnessFactor};

use common::*;

type Outcome = std::result::Result<String, String>;

fn check(ok: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration) -> std::result::Result<(), String> {
    check(elapsed <= limit, || format!("took {elapsed:.1?}, limit {limit:?}"))
}

/// 200 random instances over Q.
fn rational_suite() -> Outcome {
    let start = Instant::now();
    let mut gen = DeterministicSampler::with_bounds(1001, 10, 1000);
    let q = Rationals;
    for i in 0..200 {
        let m = gen.range(1, 4);
        let n = gen.range(1, 5);
        let space = perturbed_gram(&q, m, &mut gen);
        let algebra = separable_algebra(&q, n, &mut gen, |s| q.from_i64(s.signed()));
        let u = unit_input(&space, &algebra, &mut gen, |s| q.sample(s));
        let w = witness::norm_principle_witness(&space, &algebra, &u, &mut DeterministicSampler::new(i))
            .map_err(|e| format!("instance {i} (m={m}, n={n}): {e}"))?;
        let a = space.base_change(&algebra).evaluate(&u).unwrap();
        let product = q.product(w.factors.iter().map(|f| &f.value));
        check(product == algebra.norm_by_resultant(&a), || format!("instance {i}: product differs from N(a)"))?;
        check(w.len() % 2 == n % 2, || format!("instance {i}: {} factors for n = {n}", w.len()))?;
        let v = witness::verify_witness(&space, &algebra, &u, &w);
        check(v.ok, || format!("instance {i}: verification failed: {:?}", v.reason))?;
    }
    within(start.elapsed(), Duration::from_secs(60))?;
    Ok(format!("200/200 exact in {:.1?}", start.elapsed()))
}

/// 50 local instances, each also checked at the residue.
fn local_suite() -> Outcome {
    let start = Instant::now();
    let l = LocalFunctions;
    let mut gen = DeterministicSampler::with_bounds(2002, 5, 1000);
    for i in 0..50 {
        let m = gen.range(1, 3);
        let n = gen.range(1, 3);
        let space = diagonal_gram(&l, m, &mut gen);
        let algebra = separable_algebra(&l, n, &mut gen, linear_local);
        let u = unit_input(&space, &algebra, &mut gen, linear_local);
        let w = witness::norm_principle_witness(&space, &algebra, &u, &mut DeterministicSampler::new(i))
            .map_err(|e| format!("instance {i} (m={m}, n={n}): {e}"))?;
        let a = space.base_change(&algebra).evaluate(&u).unwrap();
        let product = l.product(w.factors.iter().map(|f| &f.value));
        check(product == algebra.norm_by_resultant(&a), || format!("instance {i}: product differs from N(a)"))?;
        let v = witness::verify_witness(&space, &algebra, &u, &w);
        check(v.ok, || format!("instance {i}: verification failed: {:?}", v.reason))?;

        let residue_space = space.reduce_mod_maximal();
        let residue_algebra = algebra.reduce_mod_maximal();
        let u_bar: Vec<_> = u.iter().map(|x| algebra.residue_element(x)).collect();
        let w_bar = Witness {
            factors: w
                .factors
                .iter()
                .map(|f| WitnessFactor { vector: f.vector.iter().map(|c| l.residue(c)).collect(), value: l.residue(&f.value) })
                .collect(),
            input: algebra.residue_element(&w.input),
            norm: l.residue(&w.norm),
            parity: w.parity,
            stats: w.stats,
        };
        let v = witness::verify_witness(&residue_space, &residue_algebra, &u_bar, &w_bar);
        check(v.ok, || format!("instance {i}: residue witness failed: {:?}", v.reason))?;
    }
    within(start.elapsed(), Duration::from_secs(120))?;
    Ok(format!("50/50 exact, residues verify, in {:.1?}", start.elapsed()))
}

/// Both inclusions over F3 and F5 by exhaustive enumeration.
fn exhaustive_oracle() -> Outcome {
    let mut pairs = 0;
    for (p, max_degree) in [(3, 3), (5, 2)] {
        let report = oracle::exhaustive_norm_principle_check(p, 3, max_degree).map_err(|e| format!("F_{p}: {e}"))?;
        check(report.violations == 0, || format!("F_{p}: {} violations, first {:?}", report.violations, report.pairs.iter().find(|r| !r.pass)))?;
        let covered = |rank: usize, degree: usize| report.pairs.iter().any(|r| r.diagonal.len() == rank && r.modulus.len() == degree + 1);
        check(covered(2, 2) && covered(3, 2) && (p != 3 || covered(3, 3)), || format!("F_{p}: required ranks or degrees missing"))?;
        pairs += report.pairs.len();
    }
    Ok(format!("{pairs} (form, modulus) pairs, 0 violations"))
}

/// Witness norms against enumerated data over F17, F19, F23.
fn prime_field_agreement() -> Outcome {
    let mut gen = DeterministicSampler::with_bounds(4004, 9, 1000);
    let mut worst = 0;
    for i in 0..100u64 {
        let p = [17, 19, 23][i as usize % 3];
        let f = PrimeField::new(p).unwrap();
        let m = gen.range(1, 3);
        let n = gen.range(1, 4);
        let space = perturbed_gram(&f, m, &mut gen);
        let algebra = separable_algebra(&f, n, &mut gen, |s| f.sample(s));
        let u = unit_input(&space, &algebra, &mut gen, |s| f.sample(s));
        let w = witness::norm_principle_witness(&space, &algebra, &u, &mut DeterministicSampler::new(i))
            .map_err(|e| format!("run {i} over F_{p}: {e}"))?;
        let a = space.base_change(&algebra).evaluate(&u).unwrap();
        let direct = oracle::leibniz_norm(&algebra, &a);
        check(w.norm == direct, || format!("run {i}: claimed norm {} but enumerated {direct}", w.norm))?;
        let base = FiniteAlgebra::base(f).unwrap();
        let (d0, d1) = oracle::d0_d1(&space, &base).map_err(|e| e.to_string())?;
        let product = f.product(w.factors.iter().map(|x| &x.value)) as usize;
        let class = if n % 2 == 0 { &d0 } else { &d1 };
        check(class.contains(&product), || format!("run {i}: product {product} outside D{}", n % 2))?;
        check(w.stats.max_draws <= 1000, || format!("run {i}: {} draws", w.stats.max_draws))?;
        worst = worst.max(w.stats.max_draws);
    }
    Ok(format!("100/100 agree, largest retry count {worst}"))
}

/// `N(α) = (-1)^n f_α(0)` over all three domains.
fn norm_identity() -> Outcome {
    fn run<D: ScalarDomain>(
        base: &D,
        count: usize,
        gen: &mut DeterministicSampler,
        mut coeff: impl FnMut(&mut DeterministicSampler) -> D::Elem,
    ) -> std::result::Result<(), String> {
        let mut done = 0;
        while done < count {
            let n = gen.range(1, 4);
            let algebra = separable_algebra(base, n, gen, &mut coeff);
            let alpha = algebra.element((0..n).map(|_| coeff(gen)).collect()).unwrap();
            if !algebra.is_primitive(&alpha) {
                continue;
            }
            let f = algebra.minimal_polynomial(&alpha).map_err(|e| e.to_string())?;
            let mut expected = PolyRing::new(base.clone()).coeff(&f, 0);
            if n % 2 == 1 {
                expected = base.neg(&expected);
            }
            let by_res = algebra.norm_by_resultant(&alpha);
            check(by_res == expected, || format!("{}: resultant norm {} vs {}", base.tag(), base.render(&by_res), base.render(&expected)))?;
            check(algebra.norm(&alpha) == expected, || format!("{}: determinant norm differs", base.tag()))?;
            done += 1;
        }
        Ok(())
    }
    let mut gen = DeterministicSampler::with_bounds(5005, 9, 1000);
    let q = Rationals;
    run(&q, 34, &mut gen, |s| q.sample(s))?;
    let f = PrimeField::new(101).unwrap();
    run(&f, 33, &mut gen, |s| f.sample(s))?;
    run(&LocalFunctions, 33, &mut gen, linear_local)?;
    Ok("100/100 primitive elements over Q, F101, Q[x]_(x)".into())
}

/// The (3/5, 4/5) lifting fixture.
fn lifting_fixture() -> Outcome {
    let l = LocalFunctions;
    let r = PolyRing::new(Rationals);
    let frac = |n: i64, d: i64| BigRational::new(n.into(), d.into());
    let s = EtaleAlgebra::new(l, PolyRing::new(l).from_ints(&[0, 1])).unwrap();
    let space = QuadraticSpace::diagonal(l, vec![l.one(), l.one()]).unwrap();
    let v = vec![s.one(), s.zero()];
    let a = l.from_rational(frac(3, 5));
    let b = l.add(&l.from_rational(frac(4, 5)), &l.x());
    let lifted = vec![s.embed(&a), s.embed(&b)];
    let omega = lift_point(&space, &s, &s.one(), &v, &lifted).map_err(|e| e.to_string())?;
    check(space.base_change(&s).evaluate(&omega).unwrap() == s.one(), || "q(ω) ≠ 1".into())?;
    let res: Vec<_> = omega.iter().map(|x| l.residue(&x.coeffs()[0])).collect();
    check(res == vec![frac(3, 5), frac(4, 5)], || format!("residue {res:?}"))?;
    // h = q(ω̃) - 1 = 8x/5 + x², u = ⟨v, ω̃⟩ - 1 = -2/5, λ = -h/2u = 2x + 5x²/4.
    let h = l.from_polys(r.from_coeffs(vec![frac(0, 1), frac(8, 5), frac(1, 1)]), r.one()).unwrap();
    let lambda = l.neg(&l.div(&h, &l.from_rational(frac(-4, 5))).unwrap());
    let expected_lambda = l.from_polys(r.from_coeffs(vec![frac(0, 1), frac(2, 1), frac(5, 4)]), r.one()).unwrap();
    check(lambda == expected_lambda, || format!("λ = {}", l.render(&lambda)))?;
    let scale = l.add(&lambda, &l.one());
    let expected = vec![s.embed(&l.div(&l.add(&lambda, &a), &scale).unwrap()), s.embed(&l.div(&b, &scale).unwrap())];
    check(omega == expected, || "ω differs from (λv + ω̃)/(λ + 1)".into())?;
    Ok(format!("ω = ({}, {})", l.render(&omega[0].coeffs()[0]), l.render(&omega[1].coeffs()[0])))
}

/// Reflection decompositions of random rational isometries.
fn cartan_dieudonne_suite() -> Outcome {
    let q = Rationals;
    let mut gen = DeterministicSampler::with_bounds(7007, 5, 1000);
    let mut pool = Vec::new();
    for i in 0..100 {
        let m = gen.range(1, 4);
        let space = perturbed_gram(&q, m, &mut gen);
        let k = gen.range(0, 6);
        let mirrors: Vec<_> = (0..k).map(|_| anisotropic_vector(&space, &mut gen, |s| q.from_i64(s.signed()))).collect();
        let iso = Isometry::from_mirrors(space.clone(), &mirrors).map_err(|e| format!("isometry {i}: {e}"))?;
        let generating = q.product(mirrors.iter().map(|w| space.evaluate(w).unwrap()).collect::<Vec<_>>().iter());
        let mut norms = Vec::new();
        for seed in 0..10 {
            let d = spinor::cartan_dieudonne(&iso, &mut DeterministicSampler::new(seed)).map_err(|e| format!("isometry {i}: {e}"))?;
            check(spinor::compose(&space, &d.mirrors).unwrap() == *iso.matrix(), || format!("isometry {i}: recomposition differs"))?;
            check(d.len() <= 2 * m, || format!("isometry {i}: {} mirrors for rank {m}", d.len()))?;
            let sign = if d.len() % 2 == 0 { q.one() } else { q.neg(&q.one()) };
            check(*iso.det() == sign, || format!("isometry {i}: det does not match mirror count"))?;
            norms.push(spinor::spinor_norm_of(&q, &d));
        }
        for (x, a) in norms.iter().enumerate() {
            for b in &norms[x + 1..] {
                check(spinor::same_square_class(&q, a, b).unwrap(), || format!("isometry {i}: {a} and {b} differ mod squares"))?;
            }
        }
        check(spinor::same_square_class(&q, &norms[0], &generating).unwrap(), || format!("isometry {i}: differs from the generating mirrors"))?;
        pool.push((iso, norms[0].clone()));
    }
    let mut pairs = 0;
    while pairs < 50 {
        let (x, y) = (gen.range(0, pool.len() - 1), gen.range(0, pool.len() - 1));
        let ((a, sa), (b, sb)) = (&pool[x], &pool[y]);
        let Ok(ab) = a.compose(b) else { continue };
        let sab = spinor::spinor_norm(&ab, &mut DeterministicSampler::new(pairs)).map_err(|e| e.to_string())?;
        check(spinor::same_square_class(&q, &q.mul(sa, sb), &sab).unwrap(), || format!("pair ({x}, {y}) not multiplicative"))?;
        pairs += 1;
    }
    Ok("100 isometries x 10 reseeds, 50 multiplicative pairs".into())
}

/// Transfer checks over random quadratic extensions of Q.
fn transfer_suite() -> Outcome {
    let q = Rationals;
    let mut gen = DeterministicSampler::with_bounds(8008, 5, 1000);
    for i in 0..50 {
        let m = gen.range(2, 3);
        let space = perturbed_gram(&q, m, &mut gen);
        let algebra = separable_algebra(&q, 2, &mut gen, |s| q.from_i64(s.signed()));
        let qe = space.base_change(&algebra);
        let k = 2 * gen.range(1, 2);
        let mirrors: Vec<_> = (0..k)
            .map(|_| anisotropic_vector(&qe, &mut gen, |s| algebra.element(vec![q.from_i64(s.signed()), q.from_i64(s.signed())]).unwrap()))
            .collect();
        let g = Isometry::from_mirrors(qe.clone(), &mirrors).map_err(|e| format!("case {i}: {e}"))?;
        let t = spinor::transfer_check(&space, &algebra, &g, &mut DeterministicSampler::new(i)).map_err(|e| format!("case {i}: {e}"))?;
        check(t.holds, || format!("case {i}: product differs from N(SN)"))?;
        check(t.witness.len() % 2 == 0 && t.witness.parity == 0, || format!("case {i}: odd witness"))?;
        let product = q.product(t.witness.factors.iter().map(|f| &f.value));
        check(product == algebra.norm_by_resultant(&t.spinor_norm), || format!("case {i}: resultant norm differs"))?;
        for f in &t.witness.factors {
            check(space.evaluate(&f.vector).unwrap() == f.value, || format!("case {i}: factor value wrong"))?;
        }
    }
    Ok("50/50 hold with even parity".into())
}

/// `witness` then `verify` as separate processes.
fn cli_round_trip() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_quadnorm");
    let fixtures = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures");
    let mut files: Vec<_> = std::fs::read_dir(&fixtures)
        .map_err(|e| e.to_string())?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.file_name().is_some_and(|n| n.to_string_lossy().starts_with("witness_")))
        .collect();
    files.sort();
    check(files.len() == 20, || format!("expected 20 fixtures, found {}", files.len()))?;
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut bases = BTreeSet::new();
    for file in &files {
        let name = file.file_stem().unwrap().to_string_lossy().to_string();
        let outputs: Vec<_> = (0..2).map(|k| dir.path().join(format!("{name}.{k}.json"))).collect();
        for out in &outputs {
            let status = Command::new(bin)
                .args(["witness", "--input"])
                .arg(file)
                .arg("--out")
                .arg(out)
                .status()
                .map_err(|e| e.to_string())?;
            check(status.success(), || format!("{name}: witness exited with {status}"))?;
        }
        let first = std::fs::read(&outputs[0]).map_err(|e| e.to_string())?;
        let second = std::fs::read(&outputs[1]).map_err(|e| e.to_string())?;
        check(first == second, || format!("{name}: output not byte-stable"))?;
        let verify = Command::new(bin).args(["verify", "--input"]).arg(&outputs[0]).output().map_err(|e| e.to_string())?;
        let body: serde_json::Value = serde_json::from_slice(&verify.stdout).map_err(|e| format!("{name}: {e}"))?;
        check(verify.status.success() && body["ok"] == true, || format!("{name}: verify said {body}"))?;
        let doc: serde_json::Value = serde_json::from_slice(&first).unwrap();
        bases.insert(doc["base"].as_str().unwrap_or("").split(':').next().unwrap_or("").to_string());
    }
    Ok(format!("20/20 fixtures verify and are byte-stable (bases {})", bases.into_iter().collect::<Vec<_>>().join(", ")))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("rational witness suite", rational_suite),
        ("local-ring suite", local_suite),
        ("exhaustive oracle", exhaustive_oracle),
        ("witness-oracle agreement", prime_field_agreement),
        ("norm identity regression", norm_identity),
        ("lifting fixture", lifting_fixture),
        ("Cartan-Dieudonne", cartan_dieudonne_suite),
        ("transfer check", transfer_suite),
        ("CLI round trip", cli_round_trip),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail}", k + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {detail}", k + 1);
            }
        }
    }
    println!("acceptance: {} of 9 criteria pass", 9 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
