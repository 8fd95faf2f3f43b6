//! Acceptance suite: one test per criterion, each printing a pass line with
//! its measured numbers (visible with `--nocapture`; the per-test ok/FAILED
//! lines from the harness are the per-criterion pass/fail summary).
//!
//! Run: `cargo test -p dvl-cli --test acceptance -- --nocapture`

use dvl_core::characters::shared_table;
use dvl_core::fixtures;
use dvl_core::groupring::{tau_generator, GroupRingElement};
use dvl_core::modarith::{coprime_residues, divisors, factorize, gcd, rat, Rational};
use dvl_core::numeric::{
    hurwitz_zeta, l1_numeric, ls_numeric, smooth_split_check, tengely_factors, zero_order_at_1,
    SmoothSplitConvention, SMOOTH_SPLIT_TOLERANCE,
};
use dvl_core::periodic::PeriodicFunction;
use dvl_core::search::{
    candidate_function, candidate_index, run_search, run_search_pruned, Family, SearchSpec,
};
use dvl_core::tolerances;
use dvl_core::vanishing::{
    coefficient_log_p_simple, decide_vanishing, is_imprimitive, log_coefficients, proj, Verdict,
};
use num_traits::{One, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use std::process::Command;
use std::time::{Duration, Instant};

fn fixture_path(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn run_dvl(args: &[&str]) -> (i32, String) {
    let output = Command::new(env!("CARGO_BIN_EXE_dvl"))
        .args(args)
        .output()
        .expect("binary runs");
    (output.status.code().expect("no signal"), String::from_utf8_lossy(&output.stdout).into_owned())
}

fn random_dirichlet_type(rng: &mut StdRng, m: u64) -> PeriodicFunction {
    let values: Vec<Rational> = (1..=m)
        .map(|a| if gcd(a, m) == 1 { rat(rng.random_range(-5i64..=5)) } else { Rational::zero() })
        .collect();
    PeriodicFunction::new(m, values).unwrap()
}

fn random_imprimitive(rng: &mut StdRng, n: u64) -> PeriodicFunction {
    let proper: Vec<u64> = divisors(n).into_iter().filter(|&d| d < n).collect();
    let mut f = PeriodicFunction::zero(n);
    for _ in 0..3 {
        let e = proper[rng.random_range(0..proper.len())];
        let g = random_dirichlet_type(rng, e);
        f = f.add(&g.induce_to(n).unwrap()).unwrap();
    }
    f
}

#[test]
fn criterion_01_tengely_regression() {
    let clock = Instant::now();

    let (code, report) = run_dvl(&["check", fixture_path("tengely36.json").to_str().unwrap()]);
    assert_eq!(code, 10, "check must exit 10 (vanishes)");
    let parsed: serde_json::Value = serde_json::from_str(&report).unwrap();
    assert_eq!(parsed["verdict"], "vanishes");

    let l1 = l1_numeric(&fixtures::tengely36()).unwrap();
    assert!(l1.abs() < tolerances::L1_CORROBORATION, "|L(1,f)| = {l1:e}");

    let (zeta_factor, psi_factor) = tengely_factors();
    let analysis = zero_order_at_1(&zeta_factor);
    assert!(analysis.value_at_1.is_zero(), "zeta factor value at 1 must be exactly 0");
    assert!(
        analysis.log_gradient.values().all(|g| g.is_zero()),
        "zeta factor log gradient must vanish exactly"
    );
    assert!(analysis.order_at_least_2);

    let psi3 = fixtures::unique_nontrivial_character_fn(3).unwrap();
    for s in [2.0, 2.5, 3.0] {
        let lhs = ls_numeric(&fixtures::tengely36(), s).unwrap();
        let rhs = zeta_factor.evaluate(s) * hurwitz_zeta(s, 1.0)
            + psi_factor.evaluate(s) * ls_numeric(&psi3, s).unwrap();
        assert!(
            (lhs - rhs).abs() < tolerances::SERIES_DECOMPOSITION,
            "decomposition gap {:e} at s = {s}",
            (lhs - rhs).abs()
        );
    }

    let elapsed = clock.elapsed();
    assert!(elapsed < Duration::from_secs(1), "runtime {elapsed:?} >= 1 s");
    println!("acceptance 1 PASS: Tengely regression (|L1| = {l1:.2e}, {elapsed:?})");
}

#[test]
fn criterion_02_example51_regression() {
    let clock = Instant::now();
    let f = fixtures::example51();
    let report = decide_vanishing(&f, 1);

    assert!(report.divisor_conditions.iter().all(|c| c.holds), "all divisor conditions hold");
    let at2 = report.prime_conditions.iter().find(|c| c.prime == 2).unwrap();
    assert!(!at2.holds && at2.lhs == rat(-12), "p = 2 fails with lhs -12, got {}", at2.lhs);
    assert_eq!(report.log_coefficients[&2], rat(1));
    assert!(report.log_coefficients[&3].is_zero());
    assert!(!report.property_u);

    let l1 = l1_numeric(&f).unwrap();
    assert!((l1 - std::f64::consts::LN_2).abs() < tolerances::L1_CORROBORATION);

    let (code, _) = run_dvl(&["check", fixture_path("example51.json").to_str().unwrap()]);
    assert_eq!(code, 0, "nonvanishing exits 0");

    let elapsed = clock.elapsed();
    assert!(elapsed < Duration::from_secs(1), "runtime {elapsed:?} >= 1 s");
    println!("acceptance 2 PASS: alternating period-12 regression ({elapsed:?})");
}

#[test]
fn criterion_03_oracle_equivalence() {
    let clock = Instant::now();
    let mut rng = StdRng::seed_from_u64(0xACCE01);
    let mut cases = 0u32;
    while cases < 500 {
        let m = rng.random_range(3u64..=60);
        let f = random_dirichlet_type(&mut rng, m);
        let exact = is_imprimitive(&f).unwrap().0;
        let oracle = shared_table(m).is_primitive_oracle(&f).unwrap();
        assert_eq!(exact, !oracle, "disagreement at modulus {m}, f = {f}");
        cases += 1;
    }
    let elapsed = clock.elapsed();
    assert!(elapsed < Duration::from_secs(30), "runtime {elapsed:?} >= 30 s");
    println!("acceptance 3 PASS: {cases} oracle agreements ({elapsed:?})");
}

#[test]
fn criterion_04_projection_equivalence() {
    let clock = Instant::now();
    let mut rng = StdRng::seed_from_u64(0xACCE04);
    let moduli = [6u64, 9, 12, 15, 20, 24, 30, 36, 40, 45, 48, 60];
    let mut cases = 0u32;
    while cases < 200 {
        let m = moduli[rng.random_range(0..moduli.len())];
        let f = random_dirichlet_type(&mut rng, m);
        let table = shared_table(m);
        let ds = divisors(m);
        let d = ds[rng.random_range(0..ds.len())];
        let projected = proj(&f, d).unwrap();
        let mut component_sum = PeriodicFunction::zero(m);
        for e in divisors(d) {
            component_sum =
                component_sum.add(&table.conductor_component_oracle(&f, e).unwrap()).unwrap();
        }
        for b in coprime_residues(d) {
            let lift = (0..).map(|t| b + t * d).find(|&c| gcd(c, m) == 1).unwrap();
            // exact equality, which subsumes the 1e-9 tolerance
            assert_eq!(
                projected.value_at(b),
                component_sum.value_at(lift),
                "modulus {m}, divisor {d}, residue {b}"
            );
        }
        cases += 1;
    }
    let elapsed = clock.elapsed();
    println!("acceptance 4 PASS: {cases} projection agreements ({elapsed:?})");
}

#[test]
fn criterion_05_log_coefficient_identity() {
    let clock = Instant::now();
    let mut rng = StdRng::seed_from_u64(0xACCE05);
    let periods = [6u64, 10, 14, 15, 21, 30];
    for case in 0..1000 {
        let n = periods[case % periods.len()];
        let mut values: Vec<i64> = (0..n).map(|_| rng.random_range(-4i64..=4)).collect();
        let head: i64 = values[..n as usize - 1].iter().sum();
        values[n as usize - 1] = -head;
        let f = PeriodicFunction::from_integers(n, &values).unwrap();
        let general = log_coefficients(&f).unwrap();
        for (p, _) in factorize(n) {
            if !n.is_multiple_of(p * p) {
                assert_eq!(
                    coefficient_log_p_simple(&f, p).unwrap(),
                    general[&p],
                    "case {case}: N = {n}, p = {p}"
                );
            }
        }
    }
    let elapsed = clock.elapsed();
    println!("acceptance 5 PASS: 1000 closed-form log-coefficient identities ({elapsed:?})");
}

#[test]
fn criterion_06_odd_prime_erdos_search() {
    let clock = Instant::now();
    let mut searched = 0u64;
    for period in [3u64, 5, 7, 11] {
        let spec = SearchSpec {
            period,
            family: Family::Erdos,
            require_zero_sum: false,
            worker_count: 2,
        };
        let outcome = run_search(&spec).unwrap();
        assert_eq!(outcome.total, 1 << (period - 1));
        assert!(
            outcome.vanishing.is_empty(),
            "no Erdos function of period {period} may vanish"
        );
        searched += outcome.total;
    }
    assert_eq!(searched, 4 + 16 + 64 + 1024);
    let elapsed = clock.elapsed();
    assert!(elapsed < Duration::from_secs(5), "runtime {elapsed:?} >= 5 s");
    println!("acceptance 6 PASS: {searched} Erdos candidates, zero vanishing ({elapsed:?})");
}

#[test]
fn criterion_07_even_period_full_support_search() {
    let clock = Instant::now();
    for period in [12u64, 20] {
        let spec = SearchSpec {
            period,
            family: Family::Pm1Full,
            require_zero_sum: true,
            worker_count: 1,
        };
        let outcome = dvl_core::search::run_search_sequential(&spec).unwrap();
        assert_eq!(outcome.total, 1 << period);
        assert!(outcome.vanishing.is_empty(), "period {period} must have no vanishing candidate");
    }
    let elapsed = clock.elapsed();
    assert!(elapsed < Duration::from_secs(600), "single-worker runtime {elapsed:?} >= 10 min");
    println!("acceptance 7 PASS: 2^12 + 2^20 zero-sum candidates, zero vanishing ({elapsed:?})");
}

#[test]
fn criterion_08_period_36_existence() {
    let clock = Instant::now();
    let spec = SearchSpec {
        period: 36,
        family: Family::Pm1Full,
        require_zero_sum: true,
        worker_count: 4,
    };
    let outcome = run_search_pruned(&spec).unwrap();
    assert_eq!(outcome.total, 1u64 << 36);

    let tengely_index = candidate_index(Family::Pm1Full, &fixtures::TENGELY36_VALUES);
    let negation_index = !tengely_index & ((1u64 << 36) - 1);
    assert!(
        outcome.vanishing.contains(&tengely_index),
        "the sweep must find the Tengely bitmask {tengely_index}"
    );
    assert!(
        outcome.vanishing.contains(&negation_index),
        "the sweep must find the negated bitmask {negation_index}"
    );

    // the sweep is exhaustive over the whole 2^36 space; freeze the full set:
    // exactly two sign pairs, Tengely's function and its dilate n -> f(5n)
    assert_eq!(
        outcome.vanishing,
        vec![16201309121, 17696927006, 51022549729, 52518167614],
        "the complete period-36 vanishing set is two sign pairs"
    );
    for &index in &outcome.vanishing {
        let f = candidate_function(Family::Pm1Full, 36, index);
        assert_eq!(decide_vanishing(&f, 1).verdict, Verdict::Vanishes);
        assert!(l1_numeric(&f).unwrap().abs() < tolerances::L1_CORROBORATION);
    }
    let elapsed = clock.elapsed();
    println!(
        "acceptance 8 PASS: pruned 2^36 sweep, vanishing set {:?} ({elapsed:?})",
        outcome.vanishing
    );
}

#[test]
fn criterion_09_integrality_property() {
    let clock = Instant::now();
    let mut rng = StdRng::seed_from_u64(0xACCE09);
    for n in [15u64, 21, 33] {
        for case in 0..100 {
            let f = random_imprimitive(&mut rng, n);
            assert!(is_imprimitive(&f).unwrap().0);
            for (p, _) in factorize(n) {
                let target = n / p;
                let mut elem = proj(&f, target).unwrap().to_group_ring().unwrap();
                for (q, _) in factorize(target) {
                    let tau = tau_generator(target, q).unwrap();
                    let factor = GroupRingElement::identity(target)
                        .sub(&GroupRingElement::sigma(target, tau).unwrap())
                        .unwrap();
                    elem = elem.mul(&factor).unwrap();
                }
                for (a, c) in elem.iter() {
                    assert!(
                        c.denom().is_one(),
                        "case {case}: fractional coefficient {c} at sigma_{a}, N = {n}, p = {p}"
                    );
                }
            }
        }
    }
    let elapsed = clock.elapsed();
    println!("acceptance 9 PASS: 300 integrality cases ({elapsed:?})");
}

#[test]
fn criterion_10_two_prime_family() {
    let clock = Instant::now();
    let f = fixtures::two_prime_family(2, 2, 3, 3);
    for k in [2u32, 3] {
        let report = decide_vanishing(&f, k);
        assert_eq!(report.verdict, Verdict::Vanishes, "family vanishes at k = {k}");
        assert!(report.conditional_on_chowla_milnor, "k > 1 verdicts are conditional");
        let value = ls_numeric(&f, k as f64).unwrap();
        assert!(value.abs() < 1e-8, "|L({k},f)| = {value:e}");
    }
    let (code, _) = run_dvl(&[
        "check",
        fixture_path("twoPrime_2_3_k2_l3.json").to_str().unwrap(),
        "--k",
        "2",
    ]);
    assert_eq!(code, 10);
    let elapsed = clock.elapsed();
    println!("acceptance 10 PASS: two-prime family vanishes at k = 2, 3 ({elapsed:?})");
}

#[test]
fn criterion_11_smooth_split_resolution() {
    let clock = Instant::now();
    let mut rng = StdRng::seed_from_u64(0xACCE11);
    let mut resolved: Option<SmoothSplitConvention> = None;
    let mut cases = 0u32;
    for n in [6u64, 15] {
        for _ in 0..3 {
            // full-support functions separate every convention
            let values: Vec<i64> = (0..n).map(|_| rng.random_range(-4i64..=4)).collect();
            let f = PeriodicFunction::from_integers(n, &values).unwrap();
            let res =
                smooth_split_check(&f, 2, &[2.0, 2.5, 3.0], tolerances::SMOOTH_SUM_BOUND).unwrap();
            let matching = res
                .residuals
                .iter()
                .filter(|(_, r)| *r < SMOOTH_SPLIT_TOLERANCE)
                .count();
            assert_eq!(matching, 1, "exactly one convention under 1e-5 for N = {n}");
            let convention = res.resolved.unwrap();
            match resolved {
                None => resolved = Some(convention),
                Some(prev) => assert_eq!(prev, convention, "convention must not vary"),
            }
            cases += 1;
        }
    }
    let convention = resolved.unwrap();
    assert!(convention.include_unit_divisor && convention.moebius_sign && convention.inverse_power_weight);
    let elapsed = clock.elapsed();
    println!(
        "acceptance 11 PASS: {cases} cases resolve to [{convention}] ({elapsed:?})"
    );
}
