//! Property checks as plain functions, so that the per-module test targets
//! and the acceptance run share one definition. Each check drives its own
//! deterministic proptest runner.

use std::collections::BTreeMap;

use bordcert_core::catalog::resolve_character;
use bordcert_core::decider::{
    check_identity, extract_certificate, hermite_form, minimal_multiple, verify_certificate, Multiple,
};
use bordcert_core::pipeline::build_system;
use bordcert_core::relations::{adams_relations, rescale_exponents, restriction_relations};
use bordcert_core::{
    builtin_cases, Character, GeneratorWindow, HalfInt, Parity, Relation, RelationMatrix, Source, SystemOptions,
};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};

use super::snf;

pub const DEFAULT_CASES: u32 = 256;

fn run<S>(cases: u32, strategy: S, test: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Result<(), String>
where
    S: Strategy,
    S::Value: std::fmt::Debug,
{
    let config = Config { cases, failure_persistence: None, ..Config::default() };
    let mut runner = TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha));
    runner.run(&strategy, test).map_err(|e| e.to_string())
}

fn h(n: i64) -> HalfInt {
    HalfInt::from_int(n)
}

/// Nonnegative characters of dimension at most 10 with integer weights.
fn weights() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-6i64..=6, 0..=10)
}

/// Self-conjugate weight lists of length at most 10.
fn symmetric_weights() -> impl Strategy<Value = Vec<i64>> {
    (prop::collection::vec(1i64..=6, 0..=5), 0usize..=2).prop_map(|(half, zeros)| {
        let mut w: Vec<i64> = half.iter().flat_map(|&k| [k, -k]).collect();
        w.extend(std::iter::repeat_n(0, zeros.min(10 - w.len())));
        w
    })
}

fn character(w: &[i64]) -> Character {
    Character::from_weights(w.iter().map(|&k| h(k)))
}

/// Virtual characters with small coefficients of either sign.
fn virtual_character() -> impl Strategy<Value = Character> {
    prop::collection::vec((-4i64..=4, -3i64..=3), 0..=5)
        .prop_map(|terms| Character::from_terms(terms.into_iter().map(|(e, c)| (h(e), c))))
}

fn binomial(n: u64, k: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

fn brute_exterior(w: &[i64], j: usize) -> Character {
    fn walk(w: &[i64], j: usize, start: usize, sum: i64, acc: &mut BTreeMap<i64, i64>) {
        if j == 0 {
            *acc.entry(sum).or_default() += 1;
            return;
        }
        for i in start..w.len() {
            walk(w, j - 1, i + 1, sum + w[i], acc);
        }
    }
    let mut acc = BTreeMap::new();
    walk(w, j, 0, 0, &mut acc);
    Character::from_terms(acc.into_iter().map(|(e, c)| (h(e), c)))
}

pub fn exterior_dimension_is_binomial(cases: u32) -> Result<(), String> {
    run(cases, weights(), |w| {
        let c = character(&w);
        let n = w.len() as u64;
        for j in 0..=n {
            let e = c.exterior_power(j as u32).unwrap();
            prop_assert_eq!(e.dim(), binomial(n, j));
            prop_assert!(e.is_nonnegative());
        }
        Ok(())
    })
}

pub fn exterior_extremes(cases: u32) -> Result<(), String> {
    run(cases, weights(), |w| {
        let c = character(&w);
        prop_assert_eq!(c.exterior_power(0).unwrap(), Character::one());
        let top = c.exterior_power(w.len() as u32).unwrap();
        prop_assert_eq!(top, Character::monomial(h(w.iter().sum()), 1));
        Ok(())
    })
}

pub fn exterior_keeps_self_conjugacy(cases: u32) -> Result<(), String> {
    run(cases, symmetric_weights(), |w| {
        let c = character(&w);
        prop_assert!(c.is_self_conjugate());
        for j in 0..=w.len() as u32 {
            prop_assert!(c.exterior_power(j).unwrap().is_self_conjugate());
        }
        Ok(())
    })
}

pub fn exterior_matches_subsets(cases: u32) -> Result<(), String> {
    run(cases, weights(), |w| {
        let c = character(&w);
        for j in 0..=w.len() {
            prop_assert_eq!(c.exterior_power(j as u32).unwrap(), brute_exterior(&w, j));
        }
        Ok(())
    })
}

pub fn ring_laws(cases: u32) -> Result<(), String> {
    run(cases, (virtual_character(), virtual_character(), virtual_character()), |(a, b, c)| {
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(a.add(&b).mul(&c), a.mul(&c).add(&b.mul(&c)));
        prop_assert_eq!(a.mul(&Character::one()), a.clone());
        prop_assert_eq!(a.conjugate().conjugate(), a.clone());
        prop_assert_eq!(a.mul(&b).conjugate(), a.conjugate().mul(&b.conjugate()));
        Ok(())
    })
}

pub fn spinor_halves_sum_to_full(cases: u32) -> Result<(), String> {
    run(cases, prop::collection::vec(-4i64..=4, 1..=6), |x| {
        let full = Character::spinor(&x, Parity::Full).unwrap();
        let plus = Character::spinor(&x, Parity::Plus).unwrap();
        let minus = Character::spinor(&x, Parity::Minus).unwrap();
        prop_assert_eq!(plus.add(&minus), full.clone());
        prop_assert_eq!(full.dim(), BigInt::from(1u64 << x.len()));
        Ok(())
    })
}

pub fn restriction_annihilated_by_constant(cases: u32) -> Result<(), String> {
    run(cases, (weights(), 0u32..=6), |(w, i_max)| {
        for r in restriction_relations(&character(&w), i_max, "r").unwrap() {
            prop_assert!(r.evaluate(|_| BigInt::one()).is_zero(), "{}", r);
        }
        Ok(())
    })
}

pub fn restriction_annihilated_by_identity(cases: u32) -> Result<(), String> {
    run(cases, (symmetric_weights(), 0u32..=6), |(w, i_max)| {
        for r in restriction_relations(&character(&w), i_max, "r").unwrap() {
            prop_assert!(r.evaluate(BigInt::from).is_zero(), "{}", r);
        }
        Ok(())
    })
}

pub fn restriction_ignores_zero_weights(cases: u32) -> Result<(), String> {
    run(cases, (weights(), 0u64..=5, 0u32..=4), |(w, zeros, i_max)| {
        let c = character(&w);
        let padded = c.add(&Character::trivial(zeros));
        prop_assert_eq!(
            restriction_relations(&c, i_max, "r").unwrap(),
            restriction_relations(&padded, i_max, "r").unwrap()
        );
        Ok(())
    })
}

pub fn adams_negation_once_per_pair(cases: u32) -> Result<(), String> {
    run(cases, (1u32..=32, prop::sample::select(vec![2u64, 3, 5, 7])), |(bound, p)| {
        let window = GeneratorWindow::new(bound);
        let rels = adams_relations(p, window, &[-1]).unwrap();
        prop_assert_eq!(rels.len(), bound as usize);
        let mut seen = std::collections::BTreeSet::new();
        for r in &rels {
            let keys: Vec<i64> = r.terms().keys().copied().collect();
            prop_assert_eq!(keys.len(), 2);
            prop_assert_eq!(keys[0], -keys[1]);
            prop_assert!(r.terms().values().all(|c| c.is_one()));
            prop_assert!(seen.insert(keys[1]), "pair ±{} repeated", keys[1]);
        }
        Ok(())
    })
}

pub fn rescale_composes(cases: u32) -> Result<(), String> {
    let strategy = (1u32..=4, 1u32..=4, prop::collection::vec((-5i64..=5, -3i64..=3), 1..=5), 0u64..=3);
    run(cases, strategy, |(a, b, raw, modulus)| {
        let ab = i64::from(a * b);
        let Some(r) = Relation::new(raw.iter().map(|&(e, c)| (e * ab, c)), modulus, "r") else {
            return Ok(());
        };
        let once = rescale_exponents(std::slice::from_ref(&r), a * b).unwrap();
        let twice = rescale_exponents(&rescale_exponents(&[r], a).unwrap(), b).unwrap();
        prop_assert_eq!(once, twice);
        Ok(())
    })
}

fn matrix_strategy(max_rows: usize, max_cols: usize, bound: i64) -> impl Strategy<Value = (usize, Vec<Vec<i64>>)> {
    (1..=max_cols).prop_flat_map(move |n| {
        (Just(n), prop::collection::vec(prop::collection::vec(-bound..=bound, n), 1..=max_rows))
    })
}

fn big_rows(rows: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

pub fn hermite_mutual_membership(cases: u32) -> Result<(), String> {
    run(cases, matrix_strategy(12, 16, 9), |(n, rows)| {
        let m = RelationMatrix::from_dense(n, &rows);
        let hnf = hermite_form(&m);
        let original = big_rows(&rows);
        let from_original = snf::smith(&original, n);
        for r in &hnf {
            prop_assert!(from_original.contains(r), "hermite row {:?} outside original span", r);
        }
        let from_hnf = snf::smith(&hnf, n);
        for r in &original {
            prop_assert!(r.iter().all(Zero::is_zero) || from_hnf.contains(r), "original row {:?} lost", r);
        }
        Ok(())
    })
}

pub fn minimal_multiple_divides_multiples(cases: u32) -> Result<(), String> {
    run(cases, matrix_strategy(6, 6, 5), |(n, rows)| {
        let m = RelationMatrix::from_dense(n, &rows);
        let oracle = snf::smith(&big_rows(&rows), n);
        for j in 0..n {
            let mm = minimal_multiple(j as i64, &m);
            for k in 1..=48i64 {
                let scaled: Vec<BigInt> = snf::unit(n, j).into_iter().map(|x| x * k).collect();
                if oracle.contains(&scaled) {
                    match &mm {
                        Multiple::Finite(d) => prop_assert!(BigInt::from(k).is_multiple_of(d)),
                        Multiple::Infinite => prop_assert!(false, "{k}·e_{j} in span but multiple is infinite"),
                    }
                }
            }
        }
        Ok(())
    })
}

pub fn minimal_multiple_row_invariance(cases: u32) -> Result<(), String> {
    let strategy = matrix_strategy(6, 6, 5).prop_flat_map(|(n, rows)| {
        let r = rows.len();
        (Just(n), Just(rows), Just((0..r).collect::<Vec<usize>>()).prop_shuffle(), 0..r, 0..r, 0..r)
    });
    run(cases, strategy, |(n, rows, perm, neg, add_to, add_from)| {
        let base = RelationMatrix::from_dense(n, &rows);
        let shuffled: Vec<Vec<i64>> = perm.iter().map(|&i| rows[i].clone()).collect();
        let mut negated = rows.clone();
        negated[neg].iter_mut().for_each(|x| *x = -*x);
        let mut added = rows.clone();
        if add_to != add_from {
            let src = rows[add_from].clone();
            added[add_to].iter_mut().zip(src).for_each(|(x, y)| *x += y);
        }
        for j in 0..n as i64 {
            let expected = minimal_multiple(j, &base);
            for variant in [&shuffled, &negated, &added] {
                prop_assert_eq!(minimal_multiple(j, &RelationMatrix::from_dense(n, variant)), expected.clone());
            }
        }
        Ok(())
    })
}

pub fn certificate_round_trip(cases: u32) -> Result<(), String> {
    run(cases, (matrix_strategy(8, 8, 6), prop::collection::vec(-3i64..=3, 8)), |((n, rows), lhs)| {
        let m = RelationMatrix::from_dense(n, &rows);
        for j in 0..n as i64 {
            if let Multiple::Finite(d) = minimal_multiple(j, &m) {
                let cert = extract_certificate(j, &d, &m).unwrap();
                prop_assert_eq!(verify_certificate(&cert, &m), Ok(()));
                let doubled = extract_certificate(j, &(&d * 2), &m).unwrap();
                prop_assert_eq!(verify_certificate(&doubled, &m), Ok(()));
                if !d.is_one() {
                    let mut forged = cert.clone();
                    forged.m = BigInt::one();
                    prop_assert!(verify_certificate(&forged, &m).is_err());
                }
            }
        }
        let form: BTreeMap<i64, BigInt> =
            lhs.iter().take(n).enumerate().map(|(e, &c)| (e as i64, BigInt::from(c))).collect();
        let outcome = check_identity(&form, &m, 2).unwrap();
        if let Some(cert) = &outcome.certificate {
            prop_assert_eq!(verify_certificate(cert, &m), Ok(()));
        }
        let oracle = snf::smith(&big_rows(&rows), n);
        let mut x = vec![BigInt::zero(); n];
        for (e, c) in &form {
            x[*e as usize] = c.clone();
        }
        let expected = match oracle.order(&x) {
            Some(o) => Multiple::Finite(o),
            None => Multiple::Infinite,
        };
        prop_assert_eq!(outcome.multiple, expected);
        Ok(())
    })
}

pub fn extra_rows_never_hurt(cases: u32) -> Result<(), String> {
    let strategy = matrix_strategy(6, 6, 5)
        .prop_flat_map(|(n, rows)| (Just(n), Just(rows), prop::collection::vec(prop::collection::vec(-5i64..=5, n), 1..=3)));
    run(cases, strategy, |(n, rows, extra)| {
        let small = RelationMatrix::from_dense(n, &rows);
        let mut all = rows.clone();
        all.extend(extra);
        let large = RelationMatrix::from_dense(n, &all);
        for j in 0..n as i64 {
            match (minimal_multiple(j, &small), minimal_multiple(j, &large)) {
                (Multiple::Finite(a), Multiple::Finite(b)) => prop_assert!(a.is_multiple_of(&b)),
                (Multiple::Finite(_), Multiple::Infinite) => prop_assert!(false, "extra rows lost t^{j}"),
                _ => {}
            }
        }
        Ok(())
    })
}

/// For every built-in case, prime and source: the multiple at window 64
/// divides the one at window 32, likewise for `i_max` 8 against 16, and
/// every positive verdict has a certificate that replays.
pub fn builtin_monotone_and_certified() -> Result<(), String> {
    for case in builtin_cases() {
        for &p in &case.primes {
            for source in [Source::Computed, Source::Printed, Source::Both] {
                let decide = |window: u32, i_max: u32| {
                    let mut o = SystemOptions::new(p, source);
                    o.window = Some(window);
                    o.i_max = Some(i_max);
                    let system = build_system(&case, &o).map_err(|e| e.to_string())?;
                    let verdict = system.verdict();
                    if verdict.zero_at_p {
                        let cert = verdict.certificate.as_ref().ok_or("positive verdict without certificate")?;
                        verify_certificate(cert, &system.matrix()).map_err(|e| e.to_string())?;
                    }
                    Ok::<_, String>(verdict)
                };
                let tag = format!("{} p={} {}", case.name, p, source.as_str());
                let narrow = decide(32, 16)?;
                let wide = decide(64, 16)?;
                let short = decide(64, 8)?;
                for (lo, hi, what) in [(&narrow, &wide, "window 32 -> 64"), (&short, &wide, "i_max 8 -> 16")] {
                    if lo.zero_at_p && !hi.zero_at_p {
                        return Err(format!("{tag}: {what} flipped zero_at_p"));
                    }
                    if let (Multiple::Finite(a), Multiple::Finite(b)) = (&lo.minimal_multiple, &hi.minimal_multiple) {
                        if !a.is_multiple_of(b) {
                            return Err(format!("{tag}: {what} multiple {a} -> {b}"));
                        }
                    }
                    if lo.minimal_multiple != Multiple::Infinite && hi.minimal_multiple == Multiple::Infinite {
                        return Err(format!("{tag}: {what} lost finiteness"));
                    }
                }
            }
        }
        let c1 = resolve_character(&case, 1).map_err(|e| e.to_string())?;
        if c1.is_zero() {
            return Err(format!("{}: empty character", case.name));
        }
    }
    Ok(())
}

/// Every check with a name, for batch runs.
pub fn all(cases: u32) -> Vec<(&'static str, Result<(), String>)> {
    vec![
        ("exterior dimension is binomial", exterior_dimension_is_binomial(cases)),
        ("exterior extremes", exterior_extremes(cases)),
        ("exterior keeps self-conjugacy", exterior_keeps_self_conjugacy(cases)),
        ("exterior matches sub-multisets", exterior_matches_subsets(cases)),
        ("ring laws", ring_laws(cases)),
        ("spinor plus + minus = full", spinor_halves_sum_to_full(cases)),
        ("t^j -> 1 annihilates restrictions", restriction_annihilated_by_constant(cases)),
        ("t^j -> j annihilates self-conjugate restrictions", restriction_annihilated_by_identity(cases)),
        ("zero weights do not change restrictions", restriction_ignores_zero_weights(cases)),
        ("Adams k=-1 once per pair", adams_negation_once_per_pair(cases)),
        ("rescale composes", rescale_composes(cases)),
        ("Hermite mutual membership", hermite_mutual_membership(cases)),
        ("minimal multiple divides multiples", minimal_multiple_divides_multiples(cases)),
        ("minimal multiple row invariance", minimal_multiple_row_invariance(cases)),
        ("certificate round trip", certificate_round_trip(cases)),
        ("extra rows never hurt", extra_rows_never_hurt(cases)),
        ("builtin window and i_max monotonicity", builtin_monotone_and_certified()),
    ]
}
