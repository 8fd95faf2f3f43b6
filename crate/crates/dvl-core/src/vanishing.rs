//! The exact vanishing criterion for `L(k,f)`.
//!
//! For a rational periodic function `f` of period `N`, `L(1,f) = 0` exactly
//! when two families of conditions hold:
//!
//! - for every divisor `D | N`, the group-ring element
//!   `h_D = sum_{d | D} (1/d) prod_{p | N/d, p not | N/D}
//!   (1 - sigma_{p^{-1}}/p) P(proj(f_d -> N/D))`
//!   is killed by the imprimitivity annihilator mod `N/D`;
//! - for every prime `p | N`, the exact rational
//!   `sum_{d | N} M_d (v_p(d) - 1_p^N(d)/(p-1))` is zero. Up to the factor
//!   `-1/N` this is the coefficient of `log p` in `L(1,f)`.
//!
//! For `k > 1` the divisor conditions are evaluated with `1/d^k` and
//! `1/p^k` weights, there are no prime conditions, and the verdict is
//! conditional on the conjectural Q-linear independence of the Hurwitz zeta
//! values `zeta(k, a/q)` (Chowla–Milnor); reports carry an explicit flag.
//!
//! All verdict arithmetic is exact; the numeric module is corroboration only.

use crate::groupring::{annihilator_product, GroupRingElement};
use crate::modarith::{
    divisors, euler_phi, factorize, is_squarefree, mod_inverse, omega, rat, ratio, vp, Rational,
};
use crate::periodic::{rational_to_string, valuation_below_indicator, PeriodicFunction};
use crate::{Error, Result};
use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;
use std::collections::BTreeMap;

/// Outcome of the decision procedure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Vanishes,
    Nonvanishing,
    Divergent,
}

/// One divisor-indexed imprimitivity condition.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DivisorCondition {
    /// The divisor `D` of the period; the condition lives mod `N/D`.
    #[serde(rename = "D")]
    pub divisor: u64,
    pub holds: bool,
    /// True when `N/D = 2 (mod 4)`, where the condition is automatic.
    pub auto_2mod4: bool,
    /// The annihilated product mod `N/D`; zero exactly when the condition holds.
    pub witness: GroupRingElement,
}

/// One prime-indexed exact linear condition.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PrimeCondition {
    #[serde(rename = "p")]
    pub prime: u64,
    #[serde(serialize_with = "ser_rational")]
    pub lhs: Rational,
    pub holds: bool,
}

/// Structured verdict with every condition result retained.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VanishingReport {
    pub period: u64,
    pub k: u32,
    #[serde(serialize_with = "ser_rational")]
    pub sum_over_period: Rational,
    pub verdict: Verdict,
    pub conditional_on_chowla_milnor: bool,
    pub divisor_conditions: Vec<DivisorCondition>,
    pub prime_conditions: Vec<PrimeCondition>,
    #[serde(serialize_with = "ser_rational_map")]
    pub log_coefficients: BTreeMap<u64, Rational>,
    #[serde(rename = "property_U")]
    pub property_u: bool,
}

fn ser_rational<S: serde::Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&rational_to_string(r))
}

fn ser_rational_map<S: serde::Serializer>(
    m: &BTreeMap<u64, Rational>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeMap;
    let mut map = s.serialize_map(Some(m.len()))?;
    for (k, v) in m {
        map.serialize_entry(&k.to_string(), &rational_to_string(v))?;
    }
    map.end()
}

impl VanishingReport {
    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization is infallible")
    }
}

/// Exact imprimitivity test: `f` (Dirichlet-type mod `M`) is imprimitive
/// exactly when the annihilator product kills `P(f)`. Returns the verdict
/// together with the annihilated element as a witness.
///
/// `M = 2 (mod 4)` is always imprimitive (the annihilator itself vanishes);
/// a nonzero constant mod 1 is primitive.
pub fn is_imprimitive(f: &PeriodicFunction) -> Result<(bool, GroupRingElement)> {
    let x = f.to_group_ring()?;
    let witness = annihilator_product(x.modulus()).mul(&x)?;
    Ok((witness.is_zero(), witness))
}

/// The projection of a Dirichlet-type `f` mod `M` onto period `d | M`:
/// keeps exactly the character components of conductor dividing `d`,
/// re-expressed mod `d`. Computed as `phi(d)/phi(M)` times the group-ring
/// restriction of `P(f)`.
pub fn proj(f: &PeriodicFunction, d: u64) -> Result<PeriodicFunction> {
    let m = f.period();
    if d == 0 || !m.is_multiple_of(d) {
        return Err(Error::NotADivisor { divisor: d, of: m });
    }
    let x = f.to_group_ring()?;
    let scaled = x
        .restrict(d)?
        .scale(&ratio(euler_phi(d) as i64, euler_phi(m) as i64));
    Ok(PeriodicFunction::from_group_ring(&scaled))
}

/// Build the condition element `h_D` in `Q[(Z/(N/D)Z)*]` and test it for
/// imprimitivity. `k = 1` is the `L(1,f)` criterion; `k > 1` replaces the
/// weights `1/d`, `1/p` by `1/d^k`, `1/p^k`.
pub fn divisor_condition(f: &PeriodicFunction, big_d: u64, k: u32) -> Result<DivisorCondition> {
    if k == 0 {
        return Err(Error::BadExponent(k));
    }
    let n = f.period();
    if big_d == 0 || !n.is_multiple_of(big_d) {
        return Err(Error::NotADivisor { divisor: big_d, of: n });
    }
    let m = n / big_d;

    let mut h = GroupRingElement::zero(m);
    for d in divisors(big_d) {
        let fd = f.component_fd(d)?;
        // P(proj(f_d -> m)): f_d is Dirichlet-type mod n/d by construction
        let mut term = fd
            .to_group_ring()
            .expect("f_d is Dirichlet-type by construction")
            .restrict(m)?
            .scale(&ratio(euler_phi(m) as i64, euler_phi(n / d) as i64));
        for (p, _) in factorize(n / d) {
            if m.is_multiple_of(p) {
                continue;
            }
            // 1 - sigma_{p^{-1}} / p^k, with p invertible mod m since p does not divide m
            let p_inv = mod_inverse(p, m).expect("p is coprime to m here");
            let frobenius_inverse = GroupRingElement::sigma(m, p_inv)?;
            let factor = GroupRingElement::identity(m)
                .sub(&frobenius_inverse.scale(&ratio(1, p.pow(k) as i64)))?;
            term = term.mul(&factor)?;
        }
        h = h.add(&term.scale(&ratio(1, d.pow(k) as i64)))?;
    }

    let witness = annihilator_product(m).mul(&h)?;
    Ok(DivisorCondition {
        divisor: big_d,
        holds: witness.is_zero(),
        auto_2mod4: m % 4 == 2,
        witness,
    })
}

/// The exact linear condition at a prime `p | N`:
/// `lhs = sum_{d | N} M_d (v_p(d) - 1_p^N(d)/(p-1))`, holding iff `lhs = 0`.
pub fn prime_condition(f: &PeriodicFunction, p: u64) -> Result<PrimeCondition> {
    let n = f.period();
    if p == 0 || !n.is_multiple_of(p) {
        return Err(Error::NotADivisor { divisor: p, of: n });
    }
    let mut lhs = Rational::zero();
    for d in divisors(n) {
        let md = f.restricted_sum(d)?;
        if md.is_zero() {
            continue;
        }
        let weight = rat(vp(d, p)? as i64)
            - ratio(valuation_below_indicator(d, p, n)? as i64, (p - 1) as i64);
        lhs += md * weight;
    }
    Ok(PrimeCondition { prime: p, holds: lhs.is_zero(), lhs })
}

/// The exact coefficient of `log p` in the expansion of `L(1,f)`, for each
/// `p | N`: `-(1/N)` times the prime-condition left-hand side.
/// Requires a zero period sum (otherwise the series diverges).
pub fn log_coefficients(f: &PeriodicFunction) -> Result<BTreeMap<u64, Rational>> {
    if !f.sum_over_period().is_zero() {
        return Err(Error::NonzeroPeriodSum);
    }
    let n = f.period();
    let mut out = BTreeMap::new();
    for (p, _) in factorize(n) {
        let cond = prime_condition(f, p)?;
        out.insert(p, -cond.lhs / rat(n as i64));
    }
    Ok(out)
}

/// Closed form for the `log p` coefficient when `v_p(N) = 1`:
/// `-p/((p-1) N) sum_{a=1}^{N/p} f(pa)`.
pub fn coefficient_log_p_simple(f: &PeriodicFunction, p: u64) -> Result<Rational> {
    let n = f.period();
    if p == 0 || !n.is_multiple_of(p) {
        return Err(Error::NotADivisor { divisor: p, of: n });
    }
    let v = vp(n, p)?;
    if v != 1 {
        return Err(Error::ValuationNotOne { p, n, valuation: v });
    }
    let inner: Rational = (1..=n / p).map(|a| f.value_at(p * a)).sum();
    Ok(ratio(-(p as i64), ((p - 1) * n) as i64) * inner)
}

/// Run the full decision procedure at exponent `k >= 1`.
///
/// At `k = 1`, a nonzero period sum yields `Verdict::Divergent`. At `k > 1`
/// the series always converges, the prime conditions are vacuous, and the
/// verdict carries the Chowla–Milnor conditionality flag.
pub fn decide_vanishing(f: &PeriodicFunction, k: u32) -> VanishingReport {
    assert!(k >= 1, "decide_vanishing requires k >= 1");
    let n = f.period();
    let sum = f.sum_over_period();

    let divisor_conditions: Vec<DivisorCondition> = divisors(n)
        .into_iter()
        .map(|d| divisor_condition(f, d, k).expect("d and k are valid by construction"))
        .collect();

    let (prime_conditions, log_coefficients) = if k == 1 {
        let conds: Vec<PrimeCondition> = factorize(n)
            .into_iter()
            .map(|(p, _)| prime_condition(f, p).expect("p | n by construction"))
            .collect();
        let coeffs = conds
            .iter()
            .map(|c| (c.prime, -c.lhs.clone() / rat(n as i64)))
            .collect();
        (conds, coeffs)
    } else {
        (Vec::new(), BTreeMap::new())
    };

    let all_hold = divisor_conditions.iter().all(|c| c.holds)
        && prime_conditions.iter().all(|c| c.holds);
    let verdict = if k == 1 && !sum.is_zero() {
        Verdict::Divergent
    } else if all_hold {
        Verdict::Vanishes
    } else {
        Verdict::Nonvanishing
    };
    let property_u = divisor_conditions.iter().any(|c| c.divisor != n && !c.holds);

    VanishingReport {
        period: n,
        k,
        sum_over_period: sum,
        verdict,
        conditional_on_chowla_milnor: k > 1,
        divisor_conditions,
        prime_conditions,
        log_coefficients,
        property_u,
    }
}

/// Does `L(1,f)` escape the rational span of `{log d : d | N}`? True exactly
/// when some proper-divisor condition fails, i.e. some primitive component
/// at a proper level survives. Requires a zero period sum.
pub fn property_u_check(f: &PeriodicFunction) -> Result<bool> {
    if !f.sum_over_period().is_zero() {
        return Err(Error::NonzeroPeriodSum);
    }
    let n = f.period();
    for d in divisors(n) {
        if d != n && !divisor_condition(f, d, 1)?.holds {
            return Ok(true);
        }
    }
    Ok(false)
}

/// The prime threshold `2^{omega(N)} prod_{q | N} (q^2 + 2q + 2)` attached
/// to squarefree `N` in the inductive nonvanishing argument.
pub fn erdos_prime_threshold(n: u64) -> Result<BigUint> {
    if !is_squarefree(n) {
        return Err(Error::NotSquarefree(n));
    }
    let mut acc = BigUint::one() << omega(n);
    for (q, _) in factorize(n) {
        acc *= BigUint::from(q * q + 2 * q + 2);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn imprimitivity_examples() {
        let (imp, _) = is_imprimitive(&fixtures::principal_character_fn(12)).unwrap();
        assert!(imp);

        let (imp, witness) = is_imprimitive(&fixtures::delta_fn(5, 1)).unwrap();
        assert!(!imp);
        assert!(!witness.is_zero());

        let psi6_mod36 = fixtures::unique_nontrivial_character_fn(6)
            .unwrap()
            .induce_to(36)
            .unwrap();
        let (imp, _) = is_imprimitive(&psi6_mod36).unwrap();
        assert!(imp);

        // mod 1: nonzero constants are primitive
        let one = fixtures::principal_character_fn(1);
        assert!(!is_imprimitive(&one).unwrap().0);
        assert!(is_imprimitive(&PeriodicFunction::zero(1)).unwrap().0);

        assert!(is_imprimitive(&fixtures::delta_fn(6, 2)).is_err());
    }

    #[test]
    fn proj_examples() {
        let psi6 = fixtures::unique_nontrivial_character_fn(6).unwrap();
        let psi3 = fixtures::unique_nontrivial_character_fn(3).unwrap();
        assert_eq!(proj(&psi6, 3).unwrap(), psi3);
        assert_eq!(proj(&psi6, 6).unwrap(), psi6);

        let f = fixtures::delta_fn(12, 5);
        let down = proj(&f, 1).unwrap();
        assert_eq!(down.value_at(1), &ratio(1, 4));
    }

    #[test]
    fn divisor_condition_examples() {
        let tengely = fixtures::tengely36();
        for d in divisors(36) {
            let cond = divisor_condition(&tengely, d, 1).unwrap();
            assert!(cond.holds, "divisor condition D = {d} must hold for the Tengely function");
        }

        let psi3 = fixtures::unique_nontrivial_character_fn(3).unwrap();
        assert!(!divisor_condition(&psi3, 1, 1).unwrap().holds);

        let example = fixtures::example51();
        for d in divisors(12) {
            assert!(divisor_condition(&example, d, 1).unwrap().holds);
        }

        // 36/2 = 18 = 2 mod 4: automatic
        let auto = divisor_condition(&tengely, 2, 1).unwrap();
        assert!(auto.auto_2mod4 && auto.holds && auto.witness.is_zero());
    }

    #[test]
    fn full_divisor_condition_is_the_period_sum() {
        // D = N lands in the modulus-1 ring, where the built element
        // collapses to (sum f(a))/N regardless of the shape of f
        let balanced = PeriodicFunction::from_integers(12, &[3, -1, 0, 2, -5, 1, 0, 0, 0, 0, 0, 0]).unwrap();
        assert!(divisor_condition(&balanced, 12, 1).unwrap().holds);

        let skewed = PeriodicFunction::from_integers(12, &[1; 12]).unwrap();
        let cond = divisor_condition(&skewed, 12, 1).unwrap();
        assert!(!cond.holds);
        assert_eq!(cond.witness.coeff(1), rat(1));
    }

    #[test]
    fn k_above_one_ignores_the_pole_structure() {
        // the principal character mod 4 diverges at s = 1 but is a perfectly
        // convergent nonzero value at s = 2
        let chi04 = fixtures::principal_character_fn(4);
        assert_eq!(decide_vanishing(&chi04, 1).verdict, Verdict::Divergent);
        let at2 = decide_vanishing(&chi04, 2);
        assert_eq!(at2.verdict, Verdict::Nonvanishing);
        assert!(at2.conditional_on_chowla_milnor);
    }

    #[test]
    fn prime_condition_examples() {
        let example = fixtures::example51();
        let at2 = prime_condition(&example, 2).unwrap();
        assert_eq!(at2.lhs, rat(-12));
        assert!(!at2.holds);
        let at3 = prime_condition(&example, 3).unwrap();
        assert!(at3.lhs.is_zero() && at3.holds);

        let tengely = fixtures::tengely36();
        for p in [2u64, 3] {
            assert!(prime_condition(&tengely, p).unwrap().holds);
        }
        assert!(prime_condition(&example, 5).is_err());
    }

    #[test]
    fn log_coefficient_examples() {
        let example = fixtures::example51();
        let coeffs = log_coefficients(&example).unwrap();
        assert_eq!(coeffs[&2], rat(1));
        assert_eq!(coeffs[&3], rat(0));

        let tengely = fixtures::tengely36();
        let coeffs = log_coefficients(&tengely).unwrap();
        assert!(coeffs.values().all(|c| c.is_zero()));

        let diverging = fixtures::principal_character_fn(4);
        assert_eq!(log_coefficients(&diverging), Err(Error::NonzeroPeriodSum));
    }

    #[test]
    fn simple_log_coefficient_formula() {
        let telescoping = fixtures::delta_fn(15, 5)
            .add(&fixtures::delta_fn(15, 10).scale(&rat(-1)))
            .unwrap();
        assert!(coefficient_log_p_simple(&telescoping, 5).unwrap().is_zero());

        let skewed = fixtures::delta_fn(15, 5)
            .add(&fixtures::delta_fn(15, 1).scale(&rat(-1)))
            .unwrap();
        assert_eq!(coefficient_log_p_simple(&skewed, 5).unwrap(), ratio(-1, 12));
        assert_eq!(coefficient_log_p_simple(&skewed, 5).unwrap(), log_coefficients(&skewed).unwrap()[&5]);

        let tengely = fixtures::tengely36();
        assert!(matches!(
            coefficient_log_p_simple(&tengely, 2),
            Err(Error::ValuationNotOne { p: 2, n: 36, valuation: 2 })
        ));
    }

    #[test]
    fn verdict_examples() {
        let report = decide_vanishing(&fixtures::tengely36(), 1);
        assert_eq!(report.verdict, Verdict::Vanishes);
        assert!(!report.property_u);
        assert!(!report.conditional_on_chowla_milnor);

        let psi3 = fixtures::unique_nontrivial_character_fn(3).unwrap();
        let report = decide_vanishing(&psi3, 1);
        assert_eq!(report.verdict, Verdict::Nonvanishing);
        assert!(report.property_u);

        let diverging = PeriodicFunction::from_integers(3, &[1, 1, 1]).unwrap();
        assert_eq!(decide_vanishing(&diverging, 1).verdict, Verdict::Divergent);

        let family = fixtures::two_prime_family(2, 2, 3, 3);
        for k in [2u32, 3] {
            let report = decide_vanishing(&family, k);
            assert_eq!(report.verdict, Verdict::Vanishes, "family must vanish at k = {k}");
            assert!(report.conditional_on_chowla_milnor);
            assert!(report.prime_conditions.is_empty());
        }
        // away from the constructed zeros the verdict flips
        assert_eq!(decide_vanishing(&family, 4).verdict, Verdict::Nonvanishing);
    }

    #[test]
    fn property_u_examples() {
        assert!(!property_u_check(&fixtures::example51()).unwrap());
        assert!(!property_u_check(&fixtures::tengely36()).unwrap());
        let psi3 = fixtures::unique_nontrivial_character_fn(3).unwrap();
        assert!(property_u_check(&psi3).unwrap());
    }

    #[test]
    fn threshold_examples() {
        assert_eq!(erdos_prime_threshold(3).unwrap(), BigUint::from(34u64));
        assert_eq!(erdos_prime_threshold(7).unwrap(), BigUint::from(130u64));
        assert_eq!(erdos_prime_threshold(15).unwrap(), BigUint::from(2516u64));
        assert_eq!(erdos_prime_threshold(12), Err(Error::NotSquarefree(12)));
    }

    #[test]
    fn report_serialization_shape() {
        let report = decide_vanishing(&fixtures::example51(), 1);
        let json = report.to_json_string();
        let value: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(value["verdict"], "nonvanishing");
        assert_eq!(value["log_coefficients"]["2"], "1");
        assert_eq!(value["log_coefficients"]["3"], "0");
        assert_eq!(value["property_U"], false);
        assert_eq!(value["prime_conditions"][0]["p"], 2);
        assert_eq!(value["prime_conditions"][0]["lhs"], "-12");
        assert_eq!(value["divisor_conditions"][0]["D"], 1);
        assert!(value["divisor_conditions"][0]["witness"]["coeffs"].is_object());
    }
}
