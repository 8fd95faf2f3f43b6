//! The bundled regression suite behind `dvl regress`: every named check
//! prints one ok/FAIL line; the command exits nonzero if any fails.

use dvl_core::characters::shared_table;
use dvl_core::fixtures;
use dvl_core::groupring::{tau_generator, GroupRingElement};
use dvl_core::modarith::{divisors, factorize, gcd, rat, Rational};
use dvl_core::numeric::{
    l1_numeric, ls_numeric, smooth_split_check, tengely_decomposition_check, tengely_factors,
    zero_order_at_1, SmoothSplitConvention, SMOOTH_SPLIT_TOLERANCE,
};
use dvl_core::periodic::PeriodicFunction;
use dvl_core::vanishing::{
    coefficient_log_p_simple, decide_vanishing, erdos_prime_threshold, is_imprimitive,
    log_coefficients, proj, Verdict,
};
use num_traits::{One, ToPrimitive, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use std::process::ExitCode;

pub const TENGELY_FIXTURE: &str = include_str!("../fixtures/tengely36.json");
pub const EXAMPLE51_FIXTURE: &str = include_str!("../fixtures/example51.json");
pub const TWO_PRIME_FIXTURE: &str = include_str!("../fixtures/twoPrime_2_3_k2_l3.json");

type CheckResult = Result<(), String>;

fn fixtures_match_builtins() -> CheckResult {
    let pairs = [
        (TENGELY_FIXTURE, fixtures::tengely36(), "tengely36"),
        (EXAMPLE51_FIXTURE, fixtures::example51(), "example51"),
        (TWO_PRIME_FIXTURE, fixtures::two_prime_family(2, 2, 3, 3), "twoPrime_2_3_k2_l3"),
    ];
    for (text, expected, name) in pairs {
        let parsed = PeriodicFunction::from_json_str(text).map_err(|e| e.to_string())?;
        if parsed != expected {
            return Err(format!("bundled {name}.json does not match the built-in table"));
        }
    }
    Ok(())
}

fn tengely_criterion() -> CheckResult {
    let report = decide_vanishing(&fixtures::tengely36(), 1);
    if report.verdict != Verdict::Vanishes {
        return Err(format!("verdict {:?}, expected vanishes", report.verdict));
    }
    // a single flipped sign must break it
    let mut perturbed: Vec<i64> = fixtures::TENGELY36_VALUES.to_vec();
    perturbed[6] = -1;
    let broken = PeriodicFunction::from_integers(36, &perturbed).unwrap();
    if decide_vanishing(&broken, 1).verdict == Verdict::Vanishes {
        return Err("perturbed table still reported vanishing".into());
    }
    Ok(())
}

fn tengely_l1() -> CheckResult {
    let value = l1_numeric(&fixtures::tengely36()).map_err(|e| e.to_string())?;
    if value.abs() >= 1e-9 {
        return Err(format!("|L(1,f)| = {value:e} >= 1e-9"));
    }
    Ok(())
}

fn tengely_zeta_factor() -> CheckResult {
    let (zeta_factor, _) = tengely_factors();
    let analysis = zero_order_at_1(&zeta_factor);
    if !analysis.value_at_1.is_zero() {
        return Err(format!("value at 1 is {}", analysis.value_at_1));
    }
    if !analysis.log_gradient.values().all(|g| g.is_zero()) {
        return Err("log gradient is not identically zero".into());
    }
    if !analysis.order_at_least_2 {
        return Err("order-two flag not set".into());
    }
    Ok(())
}

fn tengely_decomposition() -> CheckResult {
    if tengely_decomposition_check() {
        Ok(())
    } else {
        Err("two-term decomposition mismatch".into())
    }
}

fn example51_report() -> CheckResult {
    let report = decide_vanishing(&fixtures::example51(), 1);
    if !report.divisor_conditions.iter().all(|c| c.holds) {
        return Err("a divisor condition failed".into());
    }
    let at2 = report.prime_conditions.iter().find(|c| c.prime == 2).unwrap();
    if at2.holds || at2.lhs != rat(-12) {
        return Err(format!("prime condition at 2: lhs {}", at2.lhs));
    }
    let at3 = report.prime_conditions.iter().find(|c| c.prime == 3).unwrap();
    if !at3.holds {
        return Err("prime condition at 3 must hold".into());
    }
    if report.log_coefficients[&2] != rat(1) || !report.log_coefficients[&3].is_zero() {
        return Err("log coefficients differ from {2: 1, 3: 0}".into());
    }
    if report.property_u {
        return Err("property_U must be false".into());
    }
    if report.verdict != Verdict::Nonvanishing {
        return Err(format!("verdict {:?}", report.verdict));
    }
    Ok(())
}

fn example51_l1() -> CheckResult {
    let value = l1_numeric(&fixtures::example51()).map_err(|e| e.to_string())?;
    let gap = (value - std::f64::consts::LN_2).abs();
    if gap >= 1e-9 {
        return Err(format!("|L(1,f) - ln 2| = {gap:e}"));
    }
    Ok(())
}

fn log_coefficient_closed_form() -> CheckResult {
    let mut rng = StdRng::seed_from_u64(33550336);
    let periods = [6u64, 10, 14, 15, 21, 30];
    for case in 0..1000 {
        let n = periods[case % periods.len()];
        let mut values: Vec<i64> = (0..n).map(|_| rng.random_range(-4i64..=4)).collect();
        let head: i64 = values[..n as usize - 1].iter().sum();
        values[n as usize - 1] = -head;
        let f = PeriodicFunction::from_integers(n, &values).unwrap();
        let general = log_coefficients(&f).map_err(|e| e.to_string())?;
        for (p, _) in factorize(n) {
            if n.is_multiple_of(p * p) {
                continue;
            }
            let simple = coefficient_log_p_simple(&f, p).map_err(|e| e.to_string())?;
            if simple != general[&p] {
                return Err(format!("case {case}: N = {n}, p = {p}: {simple} vs {}", general[&p]));
            }
        }
    }
    Ok(())
}

fn random_imprimitive(rng: &mut StdRng, n: u64) -> PeriodicFunction {
    let proper: Vec<u64> = divisors(n).into_iter().filter(|&d| d < n).collect();
    let mut f = PeriodicFunction::zero(n);
    for _ in 0..3 {
        let e = proper[rng.random_range(0..proper.len())];
        let values: Vec<Rational> = (1..=e)
            .map(|a| if gcd(a, e) == 1 { rat(rng.random_range(-5i64..=5)) } else { Rational::zero() })
            .collect();
        let g = PeriodicFunction::new(e, values).unwrap();
        f = f.add(&g.induce_to(n).unwrap()).unwrap();
    }
    f
}

fn integrality_descent() -> CheckResult {
    let mut rng = StdRng::seed_from_u64(8128);
    for n in [15u64, 21, 33] {
        for case in 0..100 {
            let f = random_imprimitive(&mut rng, n);
            if !is_imprimitive(&f).map_err(|e| e.to_string())?.0 {
                return Err(format!("generator produced a primitive function mod {n}"));
            }
            for (p, _) in factorize(n) {
                let target = n / p;
                let mut elem = proj(&f, target)
                    .map_err(|e| e.to_string())?
                    .to_group_ring()
                    .map_err(|e| e.to_string())?;
                for (q, _) in factorize(target) {
                    let tau = tau_generator(target, q).map_err(|e| e.to_string())?;
                    let factor = GroupRingElement::identity(target)
                        .sub(&GroupRingElement::sigma(target, tau).unwrap())
                        .unwrap();
                    elem = elem.mul(&factor).unwrap();
                }
                for (a, c) in elem.iter() {
                    if !c.denom().is_one() {
                        return Err(format!(
                            "case {case}: non-integral coefficient {c} at sigma_{a}, N = {n}, p = {p}"
                        ));
                    }
                }
            }
        }
    }
    Ok(())
}

fn smooth_split_convention() -> CheckResult {
    let mut rng = StdRng::seed_from_u64(496);
    let mut resolved: Option<SmoothSplitConvention> = None;
    for n in [6u64, 15] {
        for _ in 0..3 {
            let values: Vec<i64> = (0..n).map(|_| rng.random_range(-4i64..=4)).collect();
            let f = PeriodicFunction::from_integers(n, &values).unwrap();
            let res = smooth_split_check(&f, 2, &[2.0, 2.5, 3.0], 1_000_000)
                .map_err(|e| e.to_string())?;
            let convention = res
                .resolved
                .ok_or_else(|| format!("no unique convention for N = {n}, f = {f}"))?;
            if res.resolved_residual >= SMOOTH_SPLIT_TOLERANCE {
                return Err(format!("residual {:e} above tolerance", res.resolved_residual));
            }
            match resolved {
                None => resolved = Some(convention),
                Some(prev) if prev != convention => {
                    return Err(format!("convention changed: {prev} vs {convention}"));
                }
                _ => {}
            }
        }
    }
    let convention = resolved.unwrap();
    if !(convention.include_unit_divisor && convention.moebius_sign && convention.inverse_power_weight)
    {
        return Err(format!("unexpected convention: {convention}"));
    }
    Ok(())
}

fn threshold_table() -> CheckResult {
    for (n, expected) in [(3u64, 34u64), (7, 130), (15, 2516)] {
        let got = erdos_prime_threshold(n).map_err(|e| e.to_string())?;
        if got.to_u64() != Some(expected) {
            return Err(format!("threshold({n}) = {got}, expected {expected}"));
        }
    }
    Ok(())
}

fn two_prime_family() -> CheckResult {
    let f = fixtures::two_prime_family(2, 2, 3, 3);
    for k in [2u32, 3] {
        let report = decide_vanishing(&f, k);
        if report.verdict != Verdict::Vanishes {
            return Err(format!("verdict {:?} at k = {k}", report.verdict));
        }
        if !report.conditional_on_chowla_milnor {
            return Err("missing conditionality flag".into());
        }
        let value = ls_numeric(&f, k as f64).map_err(|e| e.to_string())?;
        if value.abs() >= 1e-8 {
            return Err(format!("|L({k},f)| = {value:e}"));
        }
    }
    Ok(())
}

fn conductor_counts() -> CheckResult {
    // multiplicative local counts: prim(36) = prim(4) prim(9) = 1 * 4
    let table = shared_table(36);
    let primitive = table.characters().iter().filter(|c| c.is_primitive()).count();
    if primitive != 4 {
        return Err(format!("{primitive} primitive characters mod 36, expected 4"));
    }
    Ok(())
}

type Check = (&'static str, fn() -> CheckResult);

pub fn run_all() -> ExitCode {
    let checks: Vec<Check> = vec![
        ("fixtures_match_builtins", fixtures_match_builtins),
        ("tengely_criterion", tengely_criterion),
        ("tengely_l1", tengely_l1),
        ("tengely_zeta_factor", tengely_zeta_factor),
        ("tengely_decomposition", tengely_decomposition),
        ("example51_report", example51_report),
        ("example51_l1", example51_l1),
        ("log_coefficient_closed_form", log_coefficient_closed_form),
        ("integrality_descent", integrality_descent),
        ("smooth_split_convention", smooth_split_convention),
        ("threshold_table", threshold_table),
        ("two_prime_family", two_prime_family),
        ("conductor_counts", conductor_counts),
    ];
    let mut failed = 0u32;
    for (name, check) in checks {
        match check() {
            Ok(()) => println!("ok   {name}"),
            Err(message) => {
                failed += 1;
                println!("FAIL {name}: {message}");
            }
        }
    }
    if failed == 0 {
        println!("all regression checks passed");
        ExitCode::SUCCESS
    } else {
        println!("{failed} regression check(s) failed");
        ExitCode::FAILURE
    }
}
