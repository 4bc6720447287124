//! Acceptance suite: one test per release criterion, each ending in a
//! single PASS line (visible under `--nocapture`).
//!
//! Limits and tolerances are pinned here, next to the assertions that use
//! them, so a change to any of them shows up in review.

use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use vinberg_core::bounds::{
    auto_facet_cap, conservative_ceil, conservative_floor, covolume_from_area,
    facet_upper_bound, rank_lower_bound, ConstantsRegistry, PRECISION,
};
use vinberg_core::cone::{extreme_rays, facet_recovery, finite_volume_test};
use vinberg_core::diagram::{area_gauss_bonnet, build_diagram, EdgeLabel};
use vinberg_core::engine::{run, RunConfig, RunVerdict};
use vinberg_core::forms::{ControlVector, LorentzVector, QuadraticForm};
use vinberg_core::roots::enumerate_roots_at;

const C1_TIME_LIMIT: Duration = Duration::from_secs(1);
const C2_TIME_LIMIT: Duration = Duration::from_secs(10);
const C3_CONE_COUNT: usize = 200;
const C4_FORM_COUNT: usize = 100;
const C5_SAMPLE_COUNT: usize = 200;
const C6_SAMPLE_COUNT: usize = 1000;

fn lv(v: &[i64]) -> LorentzVector {
    LorentzVector::from_i64(v)
}

fn big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

fn control(form: &QuadraticForm) -> ControlVector {
    let mut v = vec![0i64; form.dim()];
    v[0] = 1;
    ControlVector::new(form, lv(&v)).unwrap()
}

#[test]
fn criterion_1_classical_triangle() {
    let form = QuadraticForm::from_diagonal(&[-1, 1, 1]).unwrap();
    let u0 = control(&form);
    let start = Instant::now();
    let (verdict, state) = run(&form, &u0, &RunConfig::default()).unwrap();
    let elapsed = start.elapsed();

    assert_eq!(verdict, RunVerdict::FiniteVolume);
    let es: Vec<_> = state.accepted.iter().map(|r| r.e.clone()).collect();
    assert_eq!(es, vec![lv(&[0, 0, 1]), lv(&[0, 1, -1]), lv(&[1, -1, -1])]);

    let diagram = build_diagram(&form, &state.accepted).unwrap();
    assert_eq!(
        diagram.edges,
        vec![(0, 1, EdgeLabel::Weight(4)), (0, 2, EdgeLabel::Thick)]
    );

    let area = area_gauss_bonnet(&form, &u0, &state.accepted).unwrap();
    assert_eq!(area, BigRational::new(BigInt::one(), BigInt::from(4)));

    // On a finite-volume verdict every accepted wall is an actual facet.
    let outcome = finite_volume_test(&form, &u0, &state.accepted).unwrap();
    assert_eq!(facet_recovery(&outcome.cone), vec![0, 1, 2]);

    assert!(
        elapsed < C1_TIME_LIMIT,
        "took {elapsed:?}, limit {C1_TIME_LIMIT:?}"
    );
    println!(
        "ACCEPTANCE C1 PASS: (2,4,inf) triangle, 3 walls, area pi/4, {elapsed:?}"
    );
}

#[test]
fn criterion_2_three_dimensional_cell() {
    let form = QuadraticForm::from_diagonal(&[-1, 1, 1, 1]).unwrap();
    let u0 = control(&form);
    let start = Instant::now();
    let (verdict, state) = run(&form, &u0, &RunConfig::default()).unwrap();
    let elapsed = start.elapsed();

    assert_eq!(verdict, RunVerdict::FiniteVolume);
    let es: Vec<_> = state.accepted.iter().map(|r| r.e.clone()).collect();
    assert_eq!(
        es,
        vec![
            lv(&[0, 0, 0, 1]),
            lv(&[0, 0, 1, -1]),
            lv(&[0, 1, -1, 0]),
            lv(&[1, -1, -1, -1]),
        ]
    );
    let outcome = finite_volume_test(&form, &u0, &state.accepted).unwrap();
    assert_eq!(facet_recovery(&outcome.cone), vec![0, 1, 2, 3]);
    assert!(
        elapsed < C2_TIME_LIMIT,
        "took {elapsed:?}, limit {C2_TIME_LIMIT:?}"
    );
    println!("ACCEPTANCE C2 PASS: 4 walls over diag(-1,1,1,1), {elapsed:?}");
}

#[test]
fn criterion_3_double_description_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x0303);
    let mut checked = 0usize;
    while checked < C3_CONE_COUNT {
        let ambient = rng.gen_range(2..=5usize);
        let rows = rng.gen_range(0..=8usize);
        let hs_i64: Vec<Vec<i64>> = (0..rows)
            .map(|_| (0..ambient).map(|_| rng.gen_range(-5..=5i64)).collect())
            .collect();
        let hs_big: Vec<Vec<BigInt>> = hs_i64.iter().map(|h| big(h)).collect();

        let cone = extreme_rays(ambient, &hs_big).unwrap();
        let (oracle_rays, oracle_lin) = vinberg_oracle::extreme_rays_subsets(ambient, &hs_i64);
        assert_eq!(cone.rays, oracle_rays, "rays differ for {hs_i64:?}");
        assert_eq!(cone.lineality, oracle_lin, "lineality differs for {hs_i64:?}");

        // Constraint order must not leak into the canonical generators.
        let mut shuffled = hs_big.clone();
        for i in (1..shuffled.len()).rev() {
            shuffled.swap(i, rng.gen_range(0..=i));
        }
        let cone2 = extreme_rays(ambient, &shuffled).unwrap();
        assert_eq!(cone.rays, cone2.rays, "shuffle changed rays for {hs_i64:?}");
        assert_eq!(cone.lineality, cone2.lineality);

        checked += 1;
    }
    println!("ACCEPTANCE C3 PASS: {checked} random cones match the subset oracle");
}

#[test]
fn criterion_4_enumeration_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x0404);
    let mut forms = 0usize;
    let mut shells = 0usize;
    while forms < C4_FORM_COUNT {
        let n = rng.gen_range(1..=3usize);
        let mut d = vec![-rng.gen_range(1..=5i64)];
        for _ in 0..n {
            d.push(rng.gen_range(1..=5i64));
        }
        let form = QuadraticForm::from_diagonal(&d).unwrap();
        let u0 = control(&form);
        let mut u0_raw = vec![0i64; form.dim()];
        u0_raw[0] = 1;
        let gram_i64: Vec<Vec<i64>> = (0..form.dim())
            .map(|i| {
                (0..form.dim())
                    .map(|j| i64::try_from(&form.gram()[i][j]).unwrap())
                    .collect()
            })
            .collect();

        for _ in 0..3 {
            let s = rng.gen_range(1..=10i64);
            let a = rng.gen_range(0..=5i64);
            let mine: Vec<Vec<BigInt>> = enumerate_roots_at(
                &form,
                &u0,
                &BigInt::from(s),
                &BigInt::from(a),
            )
            .unwrap()
            .into_iter()
            .map(|r| r.e.0)
            .collect();
            let oracle: Vec<Vec<BigInt>> = vinberg_oracle::enumerate_roots_box(
                &gram_i64, &u0_raw, s, a,
            )
            .into_iter()
            .map(|v| big(&v))
            .collect();
            assert_eq!(mine, oracle, "shell mismatch for diag {d:?}, s = {s}, a = {a}");
            shells += 1;
        }
        forms += 1;
    }
    println!("ACCEPTANCE C4 PASS: {forms} forms, {shells} shells match the box oracle");
}

#[test]
fn criterion_5_reflection_integrality() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x0505);
    let mut checked = 0usize;
    while checked < C5_SAMPLE_COUNT {
        let n = rng.gen_range(1..=3usize);
        let mut d = vec![-rng.gen_range(1..=4i64)];
        for _ in 0..n {
            d.push(rng.gen_range(1..=4i64));
        }
        let form = QuadraticForm::from_diagonal(&d).unwrap();
        let u0 = control(&form);
        let s = BigInt::from(rng.gen_range(1..=8i64));
        let a = BigInt::from(rng.gen_range(0..=3i64));
        let roots = enumerate_roots_at(&form, &u0, &s, &a).unwrap();
        if roots.is_empty() {
            continue;
        }
        let root = &roots[rng.gen_range(0..roots.len())];
        let r = form.reflection_matrix(&root.e).unwrap();
        let dim = form.dim();
        // R^T G R = G, entrywise over the integers.
        for i in 0..dim {
            for j in 0..dim {
                let mut s = BigInt::zero();
                for k in 0..dim {
                    for l in 0..dim {
                        s += &r[k][i] * &form.gram()[k][l] * &r[l][j];
                    }
                }
                assert_eq!(
                    s, form.gram()[i][j],
                    "R^T G R != G at ({i},{j}) for diag {d:?}, e = {:?}",
                    root.e
                );
            }
        }
        checked += 1;
    }
    println!("ACCEPTANCE C5 PASS: {checked} reflection matrices satisfy R^T G R = G");
}

#[test]
fn criterion_6_toy_bound_chain() {
    use rug::Float;

    // The toy registry pins every constant to a round value; the whole
    // chain collapses to F = floor((v1 + v2)) with v1 = 10 / vol(ball),
    // v2 = 10, giving exactly 13.
    let toy = ConstantsRegistry::toy_n2();
    let vol = Float::with_val(PRECISION, 10);
    let b = facet_upper_bound(&toy, 1, &vol).unwrap();
    assert_eq!(b.f_bound, 13, "toy chain total was {}", b.total);
    assert_eq!(auto_facet_cap(&toy, 1).unwrap(), 13);

    // Monotone in the covolume at fixed degree, and in the degree at
    // fixed covolume.
    let mut rng = ChaCha8Rng::seed_from_u64(0x0606);
    for _ in 0..C6_SAMPLE_COUNT {
        let x = rng.gen_range(1e-3..=50.0f64);
        let y = rng.gen_range(1e-3..=50.0f64);
        let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
        let f_lo = facet_upper_bound(&toy, 1, &Float::with_val(PRECISION, lo)).unwrap();
        let f_hi = facet_upper_bound(&toy, 1, &Float::with_val(PRECISION, hi)).unwrap();
        assert!(
            f_lo.f_bound <= f_hi.f_bound,
            "f_bound not monotone: vol {lo} -> {}, vol {hi} -> {}",
            f_lo.f_bound,
            f_hi.f_bound
        );
        let deg = rng.gen_range(1..=4u32);
        let f_deg = facet_upper_bound(&toy, deg, &Float::with_val(PRECISION, lo)).unwrap();
        let f_deg2 = facet_upper_bound(&toy, deg + 1, &Float::with_val(PRECISION, lo)).unwrap();
        assert!(f_deg.f_bound <= f_deg2.f_bound, "f_bound not monotone in degree");
    }

    // Conservative rounding: a hair inside the margin counts as exact, a
    // hair outside does not, and negatives clamp to zero.
    let f = |x: f64| Float::with_val(PRECISION, x);
    let eps_in = Float::with_val(PRECISION, 5) - f(1e-25);
    let eps_out = Float::with_val(PRECISION, 5) - f(1e-10);
    assert_eq!(conservative_floor(&eps_in).unwrap(), 5);
    assert_eq!(conservative_floor(&eps_out).unwrap(), 4);
    assert_eq!(conservative_floor(&f(-3.0)).unwrap(), 0);
    let eps_in = Float::with_val(PRECISION, 5) + f(1e-25);
    let eps_out = Float::with_val(PRECISION, 5) + f(1e-10);
    assert_eq!(conservative_ceil(&eps_in).unwrap(), 5);
    assert_eq!(conservative_ceil(&eps_out).unwrap(), 6);
    assert_eq!(conservative_ceil(&f(-1.0)).unwrap(), 0);

    println!(
        "ACCEPTANCE C6 PASS: toy cap 13, {C6_SAMPLE_COUNT} monotonicity samples, rounding margins hold"
    );
}

#[test]
fn criterion_7_bound_consistency_in_dimension_two() {
    let reg = ConstantsRegistry::builtin_default(2).unwrap();
    let mut lines = Vec::new();
    for d in [[-1, 1, 1], [-1, 1, 2], [-1, 2, 2]] {
        let form = QuadraticForm::from_diagonal(&d).unwrap();
        let u0 = control(&form);
        let (verdict, state) = run(&form, &u0, &RunConfig::default()).unwrap();
        assert_eq!(verdict, RunVerdict::FiniteVolume, "diag {d:?} did not finish");

        let outcome = finite_volume_test(&form, &u0, &state.accepted).unwrap();
        let recovered = facet_recovery(&outcome.cone);
        assert_eq!(
            recovered.len(),
            state.accepted.len(),
            "diag {d:?}: accepted wall is not essential"
        );
        let essential = recovered.len() as u64;
        let area = area_gauss_bonnet(&form, &u0, &state.accepted).unwrap();
        assert!(area.is_positive());
        let vol = covolume_from_area(&area);

        let upper = facet_upper_bound(&reg, 1, &vol).unwrap();
        let lower = rank_lower_bound(&reg, &vol).unwrap();
        assert!(
            lower <= essential && essential <= upper.f_bound,
            "diag {d:?}: {lower} <= {essential} <= {} violated",
            upper.f_bound
        );
        lines.push(format!(
            "diag {d:?}: {lower} <= {essential} <= {}",
            upper.f_bound
        ));
    }
    println!("ACCEPTANCE C7 PASS: {}", lines.join("; "));
}

#[test]
fn criterion_8_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_vinberg");
    let run_cli = |extra: &[&str]| {
        let out = Command::new(bin)
            .args(["--form", "diag:-1,1,1"])
            .args(extra)
            .output()
            .expect("binary runs");
        out.status.code().expect("binary not killed by signal")
    };
    assert_eq!(run_cli(&["--facet-cap", "3"]), 0, "cap 3 covers the 3 walls");
    assert_eq!(run_cli(&["--facet-cap", "2"]), 10, "cap 2 must be exceeded");
    assert_eq!(run_cli(&["--budget", "0"]), 11, "budget 0 exhausts immediately");
    println!("ACCEPTANCE C8 PASS: exit codes 0 / 10 / 11 for cap 3 / cap 2 / budget 0");
}

#[test]
fn criterion_9_thread_count_does_not_change_reports() {
    let bin = env!("CARGO_BIN_EXE_vinberg");
    let dir = tempfile::tempdir().unwrap();
    for form in ["diag:-1,1,1,1", "diag:-1,2,2"] {
        let mut reports = Vec::new();
        for threads in ["1", "4"] {
            let path = dir.path().join(format!("t{threads}.json"));
            let out = Command::new(bin)
                .args(["--form", form, "--threads", threads])
                .arg("--out")
                .arg(&path)
                .output()
                .expect("binary runs");
            assert_eq!(out.status.code(), Some(0), "run failed: {out:?}");
            let mut v: Value =
                serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
            // Wall-clock timing is the one sanctioned difference.
            assert!(v.as_object_mut().unwrap().remove("timing").is_some());
            reports.push(vinberg_cli::report::canonical_bytes(&v));
        }
        assert_eq!(
            reports[0], reports[1],
            "{form}: reports differ between 1 and 4 threads"
        );
    }
    println!("ACCEPTANCE C9 PASS: reports byte-identical across thread counts");
}
