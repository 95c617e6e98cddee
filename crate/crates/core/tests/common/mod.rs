//! Randomized property suites, shared by the `properties` and `acceptance`
//! targets. Each suite runs on a fixed-seed runner so failures reproduce.

#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::OnceLock;

use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestError, TestRng, TestRunner};

use cubicfields::arith;
use cubicfields::census::index::max_depth;
use cubicfields::census::{Census, RingModel};
use cubicfields::datastore;
use cubicfields::forms::{BinaryCubicForm, Matrix, SplittingType};
use cubicfields::localmass::{InfSet, SplittingConstraint, TypeSet};
use cubicfields::resolvent::{build_phi, phi_coefficients};

/// Covers the mirror fields for every |d| ≤ 50 with one restricted prime ≤ 7.
pub const SMALL_CEILING: u64 = 70_000;

pub fn small_census() -> &'static Census {
    static C: OnceLock<Census> = OnceLock::new();
    C.get_or_init(|| Census::enumerate(SMALL_CEILING).expect("small census"))
}

fn runner(cases: u32) -> TestRunner {
    let cfg = Config { cases, failure_persistence: None, ..Config::default() };
    TestRunner::new_with_rng(cfg, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

fn finish<T: std::fmt::Debug>(r: Result<(), TestError<T>>) -> Result<(), String> {
    r.map_err(|e| e.to_string())
}

pub fn form_strategy(r: i64) -> impl Strategy<Value = BinaryCubicForm> {
    (-r..=r, -r..=r, -r..=r, -r..=r).prop_map(|(a, b, c, d)| BinaryCubicForm::new(a, b, c, d))
}

fn matmul(x: Matrix, y: Matrix) -> Matrix {
    let mut m = [[0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            m[i][j] = x[i][0] * y[0][j] + x[i][1] * y[1][j];
        }
    }
    m
}

/// Words of length ≤ 6 in S, T^k (|k| ≤ 3) and the reflection diag(1, −1).
pub fn gl2_strategy() -> impl Strategy<Value = Matrix> {
    let gen = (0u8..3, -3i64..=3).prop_map(|(g, k)| match g {
        0 => [[0, -1], [1, 0]],
        1 => [[1, k], [0, 1]],
        _ => [[1, 0], [0, -1]],
    });
    prop::collection::vec(gen, 1..=6).prop_map(|w| w.into_iter().fold([[1, 0], [0, 1]], matmul))
}

/// 100 forms, each against 100 unimodular substitutions.
pub fn prop_disc_invariance() -> Result<(), String> {
    let s = (form_strategy(40), prop::collection::vec(gl2_strategy(), 100));
    finish(runner(100).run(&s, |(f, ms)| {
        for m in &ms {
            let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
            prop_assert!(det == 1 || det == -1);
            if let Some(g) = f.try_transform(m) {
                prop_assert_eq!(g.disc(), f.disc(), "{} under {:?}", f, m);
            }
        }
        Ok(())
    }))
}

/// reduce is idempotent and every GL₂(ℤ)-image has the same canonical form.
pub fn prop_reduction() -> Result<(), String> {
    let s = (form_strategy(25).prop_filter("irreducible", |f| f.is_irreducible()), prop::collection::vec(gl2_strategy(), 8));
    finish(runner(200).run(&s, |(f, ms)| {
        let r = f.reduce().map_err(|e| TestCaseError::fail(e.to_string()))?;
        prop_assert!(r.is_reduced(), "{} reduced to {}", f, r);
        prop_assert_eq!(r.reduce().unwrap(), r);
        let c = f.canonical().unwrap();
        prop_assert_eq!(c.disc(), f.disc());
        for m in &ms {
            if let Some(g) = f.try_transform(m) {
                prop_assert_eq!(g.canonical().unwrap(), c, "{} under {:?}", f, m);
            }
        }
        Ok(())
    }))
}

fn fundamentals(bound: i64) -> Vec<i64> {
    (-bound..=bound).filter(|&d| d != 0 && arith::is_fundamental(d)).collect()
}

fn typeset_strategy() -> impl Strategy<Value = Vec<SplittingType>> {
    use SplittingType::*;
    prop::sample::subsequence(vec![S111, S12, S3, S121, S13], 1..=5)
}

/// Combined coefficients under a random constraint at 5 or 7 come out as
/// nonnegative integers (phi_coefficients refuses anything else), and the
/// single-type constraints add up to the unconstrained series.
pub fn prop_phi_coefficients() -> Result<(), String> {
    let census = small_census();
    let zmax = 200;
    let s = (prop::sample::select(fundamentals(50)), prop::sample::select(vec![5u64, 7]), typeset_strategy(), any::<bool>());
    finish(runner(64).run(&s, |(d, p, types, real)| {
        let inf = if real { InfSet::REAL } else { InfSet::COMPLEX };
        let coeffs = |t: TypeSet| -> Result<Vec<u64>, TestCaseError> {
            let c = SplittingConstraint::all(inf).with(p, t);
            let series = build_phi(d, &c, census).map_err(|e| TestCaseError::fail(e.to_string()))?;
            phi_coefficients(&series, zmax).map_err(|e| TestCaseError::fail(format!("d = {d}, p = {p}: {e}")))
        };
        coeffs(TypeSet::from_types(&types))?;
        let whole = coeffs(TypeSet::ALL)?;
        let mut sum = vec![0u64; zmax as usize + 1];
        for t in TypeSet::ALL.types() {
            for (acc, v) in sum.iter_mut().zip(coeffs(TypeSet::single(t))?) {
                *acc += v;
            }
        }
        prop_assert_eq!(sum, whole, "d = {}, p = {}", d, p);
        Ok(())
    }))
}

/// v_p(disc charpoly(x)) − v_p(disc F) is a nonnegative even integer.
pub fn prop_index_parity() -> Result<(), String> {
    let recs = small_census().records();
    let s = (0..recs.len(), prop::sample::select(vec![2u64, 3, 5, 7]), prop::array::uniform3(-60i128..=60), 1u32..=4);
    finish(runner(10_000).run(&s, |(i, p, x, depth)| {
        let form = recs[i].form;
        let m = RingModel::new(form, p, depth.min(max_depth(p))).map_err(|e| TestCaseError::fail(e.to_string()))?;
        if let Some(e) = m.disc_excess(x) {
            prop_assert!(e >= 0 && e % 2 == 0, "{} at {}: x = {:?} gives {}", form, p, x, e);
        }
        Ok(())
    }))
}

fn dir_bytes(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    std::fs::read_dir(dir)
        .expect("readable dir")
        .map(|e| {
            let e = e.expect("dir entry");
            (e.file_name().to_string_lossy().into_owned(), std::fs::read(e.path()).expect("readable file"))
        })
        .collect()
}

/// write → load → write gives byte-identical cache directories, and the
/// external list format round-trips through export → parse → export.
pub fn prop_cache_roundtrip() -> Result<(), String> {
    let recs = small_census().records().to_vec();
    let s = (prop::sample::subsequence(recs, 0..=300), 1_000u64..=40_000);
    finish(runner(24).run(&s, |(sub, width)| {
        let fail = |e: cubicfields::Error| TestCaseError::fail(e.to_string());
        let a = tempfile::tempdir().unwrap();
        let b = tempfile::tempdir().unwrap();
        datastore::write_cache(a.path(), &sub, SMALL_CEILING, width).map_err(fail)?;
        let (m, loaded) = datastore::load_cache(a.path()).map_err(fail)?;
        prop_assert_eq!(&loaded, &sub);
        datastore::write_cache(b.path(), &loaded, m.ceiling, width).map_err(fail)?;
        prop_assert_eq!(dir_bytes(a.path()), dir_bytes(b.path()));

        let text = datastore::export_external(&datastore::external_from_records(&sub, SMALL_CEILING, "roundtrip"));
        let back = datastore::parse_external(&text, "roundtrip");
        prop_assert!(back.rejects.is_empty());
        prop_assert_eq!(datastore::export_external(&back), text);
        Ok(())
    }))
}

/// Name and outcome of every suite, in a fixed order.
pub fn all_properties() -> Vec<(&'static str, Result<(), String>)> {
    vec![
        ("disc GL2(Z)-invariance", prop_disc_invariance()),
        ("reduction idempotence", prop_reduction()),
        ("resolvent coefficients", prop_phi_coefficients()),
        ("index parity", prop_index_parity()),
        ("cache round-trip", prop_cache_roundtrip()),
    ]
}
