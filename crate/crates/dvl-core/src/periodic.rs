//! Rational-valued periodic functions on the positive integers.
//!
//! A function of period `N` is stored as `N` exact rationals, entry `i`
//! holding `f(i+1)`; `f(n)` for arbitrary `n >= 1` is `values[(n-1) mod N]`.
//! Functions of different periods are never compared implicitly — use
//! [`PeriodicFunction::induce_to`] to move along the divisor lattice.
//!
//! The JSON interchange format consumed by the CLI is
//! `{"period": N, "values": [v_1, ..., v_N]}` where each `v_i` is either a
//! JSON integer or an exact `"a/b"` string; `values[i-1] = f(i)`.

use crate::groupring::GroupRingElement;
use crate::modarith::{gcd, vp, Rational};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;
use std::str::FromStr;

/// Render a rational as `"a"` or `"a/b"` in lowest terms.
pub fn rational_to_string(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parse `"a"` or `"a/b"` exactly. Rejects a zero denominator.
pub fn rational_from_str(s: &str) -> Result<Rational> {
    let bad = |_| Error::Parse(format!("invalid rational literal {s:?}"));
    match s.split_once('/') {
        None => Ok(Rational::from_integer(BigInt::from_str(s.trim()).map_err(bad)?)),
        Some((n, d)) => {
            let numer = BigInt::from_str(n.trim()).map_err(bad)?;
            let denom = BigInt::from_str(d.trim()).map_err(bad)?;
            if denom.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(Rational::new(numer, denom))
        }
    }
}

/// Classification of a periodic function, first match in this order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FunctionClass {
    /// `+-1` away from multiples of the period, `0` at them.
    Erdos,
    /// `+-1` everywhere.
    Pm1Full,
    /// Supported on residues coprime to the period.
    DirichletType,
    General,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodicFunction {
    period: u64,
    values: Vec<Rational>,
}

impl PeriodicFunction {
    pub fn new(period: u64, values: Vec<Rational>) -> Result<Self> {
        if period == 0 || values.len() as u64 != period {
            return Err(Error::Parse(format!(
                "period {period} does not match {} values",
                values.len()
            )));
        }
        Ok(PeriodicFunction { period, values })
    }

    pub fn zero(period: u64) -> Self {
        Self::new(period, vec![Rational::zero(); period as usize]).expect("consistent")
    }

    pub fn from_integers(period: u64, values: &[i64]) -> Result<Self> {
        Self::new(
            period,
            values.iter().map(|&v| Rational::from_integer(BigInt::from(v))).collect(),
        )
    }

    pub fn period(&self) -> u64 {
        self.period
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    /// `f(n)` for any `n >= 1`.
    pub fn value_at(&self, n: u64) -> &Rational {
        assert!(n >= 1, "periodic functions are indexed from 1");
        &self.values[((n - 1) % self.period) as usize]
    }

    /// `sum_{a=1}^{N} f(a)`, exact. Zero is required for `L(1,f)` to converge.
    pub fn sum_over_period(&self) -> Rational {
        self.values.iter().sum()
    }

    /// The derived component `f_d(n) = f(dn)` on residues coprime to `N/d`,
    /// zero elsewhere; a Dirichlet-type function of period `N/d`.
    pub fn component_fd(&self, d: u64) -> Result<PeriodicFunction> {
        if d == 0 || !self.period.is_multiple_of(d) {
            return Err(Error::NotADivisor { divisor: d, of: self.period });
        }
        let q = self.period / d;
        let values = (1..=q)
            .map(|n| {
                if gcd(n, q) == 1 {
                    self.value_at(d * n).clone()
                } else {
                    Rational::zero()
                }
            })
            .collect();
        PeriodicFunction::new(q, values)
    }

    /// The restricted sum `M_d = sum of f_d over residues coprime to N/d`.
    pub fn restricted_sum(&self, d: u64) -> Result<Rational> {
        if d == 0 || !self.period.is_multiple_of(d) {
            return Err(Error::NotADivisor { divisor: d, of: self.period });
        }
        let q = self.period / d;
        Ok((1..=q)
            .filter(|&n| gcd(n, q) == 1)
            .map(|n| self.value_at(d * n))
            .sum())
    }

    /// True when `f` vanishes at every residue sharing a factor with `N`.
    pub fn is_dirichlet_type(&self) -> bool {
        (1..=self.period)
            .all(|a| gcd(a, self.period) == 1 || self.value_at(a).is_zero())
    }

    pub fn classify(&self) -> FunctionClass {
        let n = self.period;
        let pm1 = |r: &Rational| r.denom().is_one() && r.numer().abs().is_one();
        let erdos = (1..n).all(|a| pm1(self.value_at(a))) && self.value_at(n).is_zero();
        if erdos {
            return FunctionClass::Erdos;
        }
        if self.values.iter().all(pm1) {
            return FunctionClass::Pm1Full;
        }
        if self.is_dirichlet_type() {
            return FunctionClass::DirichletType;
        }
        FunctionClass::General
    }

    /// The group-ring image `sum over coprime a of f(a) sigma_a`.
    /// Errors unless `f` is Dirichlet-type.
    pub fn to_group_ring(&self) -> Result<GroupRingElement> {
        let n = self.period;
        for a in 1..=n {
            if gcd(a, n) != 1 && !self.value_at(a).is_zero() {
                return Err(Error::NotDirichletType { residue: a, modulus: n });
            }
        }
        GroupRingElement::from_terms(
            n,
            (1..=n).filter(|&a| gcd(a, n) == 1).map(|a| (a, self.value_at(a).clone())),
        )
    }

    /// Inverse of [`Self::to_group_ring`]: the Dirichlet-type function of
    /// period `M` with `f(a) = coeff(sigma_a)`.
    pub fn from_group_ring(x: &GroupRingElement) -> PeriodicFunction {
        let m = x.modulus();
        let values = (1..=m).map(|a| if gcd(a, m) == 1 { x.coeff(a) } else { Rational::zero() }).collect();
        PeriodicFunction::new(m, values).expect("consistent")
    }

    /// Pointwise scalar multiple.
    pub fn scale(&self, c: &Rational) -> PeriodicFunction {
        PeriodicFunction {
            period: self.period,
            values: self.values.iter().map(|v| v * c).collect(),
        }
    }

    /// Pointwise sum of two functions of equal period.
    pub fn add(&self, other: &PeriodicFunction) -> Result<PeriodicFunction> {
        if self.period != other.period {
            return Err(Error::PeriodMismatch(self.period, other.period));
        }
        Ok(PeriodicFunction {
            period: self.period,
            values: self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect(),
        })
    }

    /// Multiply by the principal character mod `m` (period `m`, requires
    /// `period | m`): the induction of `f` along the divisor lattice.
    pub fn induce_to(&self, m: u64) -> Result<PeriodicFunction> {
        if m == 0 || !m.is_multiple_of(self.period) {
            return Err(Error::NotADivisor { divisor: self.period, of: m });
        }
        let values = (1..=m)
            .map(|n| if gcd(n, m) == 1 { self.value_at(n).clone() } else { Rational::zero() })
            .collect();
        PeriodicFunction::new(m, values)
    }

    /// Exact JSON encoding of the interchange format.
    pub fn to_json_string(&self) -> String {
        let values: Vec<serde_json::Value> = self
            .values
            .iter()
            .map(|r| {
                if r.denom().is_one() {
                    if let Some(i) = r.numer().to_i64() {
                        return serde_json::Value::from(i);
                    }
                }
                serde_json::Value::from(rational_to_string(r))
            })
            .collect();
        serde_json::json!({ "period": self.period, "values": values }).to_string()
    }

    /// Parse the interchange format. Values must be JSON integers or exact
    /// `"a/b"` strings; anything else (floats included) is rejected.
    pub fn from_json_str(s: &str) -> Result<PeriodicFunction> {
        let root: serde_json::Value =
            serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        let obj = root.as_object().ok_or_else(|| Error::Parse("expected a JSON object".into()))?;
        let period = obj
            .get("period")
            .and_then(|v| v.as_u64())
            .filter(|&p| p >= 1)
            .ok_or_else(|| Error::Parse("\"period\" must be a positive integer".into()))?;
        let raw = obj
            .get("values")
            .and_then(|v| v.as_array())
            .ok_or_else(|| Error::Parse("\"values\" must be an array".into()))?;
        let mut values = Vec::with_capacity(raw.len());
        for (i, v) in raw.iter().enumerate() {
            let r = match v {
                serde_json::Value::Number(n) => {
                    if let Some(k) = n.as_i64() {
                        Rational::from_integer(BigInt::from(k))
                    } else if let Some(k) = n.as_u64() {
                        Rational::from_integer(BigInt::from(k))
                    } else {
                        return Err(Error::Parse(format!(
                            "values[{i}] = {n} is not an exact integer"
                        )));
                    }
                }
                serde_json::Value::String(s) => rational_from_str(s)?,
                other => {
                    return Err(Error::Parse(format!(
                        "values[{i}] = {other} must be an integer or \"a/b\" string"
                    )))
                }
            };
            values.push(r);
        }
        if values.len() as u64 != period {
            return Err(Error::Parse(format!(
                "period {period} does not match {} values",
                values.len()
            )));
        }
        PeriodicFunction::new(period, values)
    }
}

impl fmt::Display for PeriodicFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vals: Vec<String> = self.values.iter().map(rational_to_string).collect();
        write!(f, "period {}: [{}]", self.period, vals.join(", "))
    }
}

/// The indicator `1_p^N(d)`: 1 when `v_p(d) < v_p(N)`, else 0.
pub fn valuation_below_indicator(d: u64, p: u64, n: u64) -> Result<u32> {
    if !n.is_multiple_of(d) {
        return Err(Error::NotADivisor { divisor: d, of: n });
    }
    if !n.is_multiple_of(p) {
        return Err(Error::NotADivisor { divisor: p, of: n });
    }
    Ok(u32::from(vp(d, p)? < vp(n, p)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::modarith::{divisors, rat};

    #[test]
    fn sum_over_period_examples() {
        assert!(fixtures::tengely36().sum_over_period().is_zero());
        assert!(PeriodicFunction::zero(7).sum_over_period().is_zero());
        assert!(fixtures::example51().sum_over_period().is_zero());
    }

    #[test]
    fn component_fd_examples() {
        let f = fixtures::tengely36();
        let f2 = f.component_fd(2).unwrap();
        assert_eq!(f2.period(), 18);
        assert_eq!(f2.value_at(1), &rat(-1)); // f(2)
        assert_eq!(f2.value_at(5), &rat(1)); // f(10)
        assert_eq!(f2, fixtures::unique_nontrivial_character_fn(6).unwrap().induce_to(18).unwrap().scale(&rat(-1)));

        let f4 = f.component_fd(4).unwrap();
        assert_eq!(f4, fixtures::unique_nontrivial_character_fn(3).unwrap().induce_to(9).unwrap().scale(&rat(-1)));

        let f36 = f.component_fd(36).unwrap();
        assert_eq!(f36.period(), 1);
        assert_eq!(f36.value_at(1), f.value_at(36));
    }

    #[test]
    fn restricted_sum_examples() {
        let tengely = fixtures::tengely36();
        assert!(tengely.restricted_sum(1).unwrap().is_zero());

        let mut delta = vec![0i64; 12];
        delta[0] = 1;
        let d1 = PeriodicFunction::from_integers(12, &delta).unwrap();
        assert_eq!(d1.restricted_sum(1).unwrap(), rat(1));

        assert_eq!(fixtures::example51().restricted_sum(4).unwrap(), rat(-2));
    }

    #[test]
    fn restricted_sums_total_to_period_sum() {
        for f in [fixtures::tengely36(), fixtures::example51(), fixtures::two_prime_family(2, 2, 3, 3)] {
            let total: Rational =
                divisors(f.period()).into_iter().map(|d| f.restricted_sum(d).unwrap()).sum();
            assert_eq!(total, f.sum_over_period());
        }
    }

    #[test]
    fn indicator_examples() {
        assert_eq!(valuation_below_indicator(2, 2, 12).unwrap(), 1);
        assert_eq!(valuation_below_indicator(4, 2, 12).unwrap(), 0);
        assert_eq!(valuation_below_indicator(1, 3, 12).unwrap(), 1);
    }

    #[test]
    fn group_ring_bridge() {
        let psi3 = fixtures::unique_nontrivial_character_fn(3).unwrap();
        let x = psi3.to_group_ring().unwrap();
        assert_eq!(x.coeff(1), rat(1));
        assert_eq!(x.coeff(2), rat(-1));
        assert_eq!(PeriodicFunction::from_group_ring(&x), psi3);

        let chi04 = fixtures::principal_character_fn(4);
        let y = chi04.to_group_ring().unwrap();
        assert_eq!(y.coeff(1), rat(1));
        assert_eq!(y.coeff(3), rat(1));

        let not_dirichlet = PeriodicFunction::from_integers(4, &[1, 1, 0, 0]).unwrap();
        assert!(matches!(
            not_dirichlet.to_group_ring(),
            Err(Error::NotDirichletType { residue: 2, modulus: 4 })
        ));

        let zero6 = GroupRingElement::zero(6);
        assert_eq!(PeriodicFunction::from_group_ring(&zero6), PeriodicFunction::zero(6));
    }

    #[test]
    fn classification() {
        let erdos = PeriodicFunction::from_integers(3, &[1, -1, 0]).unwrap();
        assert_eq!(erdos.classify(), FunctionClass::Erdos);
        assert_eq!(fixtures::tengely36().classify(), FunctionClass::Pm1Full);
        // Psi_3 is both an Erdos function and Dirichlet-type; Erdos wins
        let psi3 = fixtures::unique_nontrivial_character_fn(3).unwrap();
        assert_eq!(psi3.classify(), FunctionClass::Erdos);
        let general = PeriodicFunction::from_integers(4, &[2, 1, 0, 0]).unwrap();
        assert_eq!(general.classify(), FunctionClass::General);
    }

    #[test]
    fn component_composition() {
        let f = fixtures::tengely36();
        for d in divisors(36) {
            for e in divisors(36 / d) {
                let lhs = f.component_fd(d).unwrap().component_fd(e).unwrap();
                let rhs = f.component_fd(d * e).unwrap();
                // agreement on the coprime support of the finer component
                for n in 1..=(36 / (d * e)) {
                    if gcd(n, 36 / (d * e)) == 1 && gcd(e * n, 36 / d) == 1 {
                        assert_eq!(lhs.value_at(n), rhs.value_at(n));
                    }
                }
            }
        }
    }

    #[test]
    fn json_round_trip_and_rejections() {
        let f = PeriodicFunction::new(
            3,
            vec![rat(1), crate::modarith::ratio(-1, 2), rat(0)],
        )
        .unwrap();
        let s = f.to_json_string();
        assert_eq!(PeriodicFunction::from_json_str(&s).unwrap(), f);

        assert!(PeriodicFunction::from_json_str("{\"period\": 2, \"values\": [1]}").is_err());
        assert!(PeriodicFunction::from_json_str("{\"period\": 1, \"values\": [0.5]}").is_err());
        assert!(PeriodicFunction::from_json_str("{\"period\": 1, \"values\": [\"1/0\"]}").is_err());
        assert!(PeriodicFunction::from_json_str("{\"period\": 0, \"values\": []}").is_err());
        let big = "{\"period\": 1, \"values\": [\"123456789012345678901234567890/7\"]}";
        let parsed = PeriodicFunction::from_json_str(big).unwrap();
        assert_eq!(
            parsed.value_at(1),
            &rational_from_str("123456789012345678901234567890/7").unwrap()
        );
    }
}
