//! Dirichlet characters mod `M` with exactly computed conductors, and the
//! floating-point inner-product oracle used to cross-validate every
//! group-ring computation.
//!
//! A character is stored as an exponent tuple against the cyclic factors of
//! `(Z/MZ)*`; its value at `a` is `exp(2 pi i t / L)` where the angle
//! numerator `t` is computed in exact integer arithmetic (`L` is the lcm of
//! the factor orders). Conductors are therefore discrete and exact — floats
//! enter only when values are materialized for sums.
//!
//! Character tables are built once per modulus and shared read-only through
//! [`shared_table`]; all query operations are pure.

use crate::modarith::{divisors, euler_phi, factorize, gcd, Rational, UnitGroupStructure};
use crate::periodic::PeriodicFunction;
use crate::{Error, Result};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

/// A Dirichlet character mod `M`, encoded by exponents against the cyclic
/// factors of the unit group, with its conductor cached.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirichletCharacter {
    modulus: u64,
    exponents: Vec<u64>,
    conductor: u64,
}

impl DirichletCharacter {
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    /// The smallest `d | M` such that `chi(a) = 1` for every `a = 1 (mod d)`
    /// coprime to `M`.
    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn is_principal(&self) -> bool {
        self.exponents.iter().all(|&e| e == 0)
    }

    pub fn is_primitive(&self) -> bool {
        self.conductor == self.modulus
    }
}

/// A character evaluation: the exact angle (as a rational in `[0,1)`, absent
/// off the units) and the materialized complex values in both conventions.
#[derive(Debug, Clone, PartialEq)]
pub struct CharEval {
    /// `t/L` with `chi(a) = exp(2 pi i t / L)`; `None` when `gcd(a,M) > 1`.
    pub angle: Option<Rational>,
    /// Plain `chi(a)`.
    pub value: Complex64,
    /// The Galois-side convention `chi(sigma_a) = conj(chi(a))`.
    pub galois_value: Complex64,
}

/// All characters mod `M` with conductors, plus the discrete-log tables they
/// evaluate through. Build once per modulus, share read-only.
#[derive(Debug)]
pub struct CharacterTable {
    modulus: u64,
    unit_group: UnitGroupStructure,
    /// lcm of the cyclic-factor orders: the common angle denominator.
    angle_lcm: u64,
    characters: Vec<DirichletCharacter>,
}

impl CharacterTable {
    pub fn new(m: u64) -> Self {
        assert!(m >= 1);
        let unit_group = UnitGroupStructure::new(m);
        let orders: Vec<u64> = unit_group.factors().iter().map(|f| f.order).collect();
        let angle_lcm = orders.iter().fold(1u64, |acc, &o| acc.lcm(&o));
        let mut table = CharacterTable { modulus: m, unit_group, angle_lcm, characters: Vec::new() };

        // lexicographic exponent tuples, first factor most significant
        let r = orders.len();
        let mut exps = vec![0u64; r];
        loop {
            let conductor = table.conductor_of_exponents(&exps);
            table.characters.push(DirichletCharacter {
                modulus: m,
                exponents: exps.clone(),
                conductor,
            });
            let mut i = r;
            loop {
                if i == 0 {
                    debug_assert_eq!(table.characters.len() as u64, euler_phi(m));
                    return table;
                }
                i -= 1;
                exps[i] += 1;
                if exps[i] < orders[i] {
                    break;
                }
                exps[i] = 0;
            }
        }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn characters(&self) -> &[DirichletCharacter] {
        &self.characters
    }

    pub fn unit_group(&self) -> &UnitGroupStructure {
        &self.unit_group
    }

    /// Angle numerator `t` (units of `1/angle_lcm`) of `chi(a)`, or `None`
    /// off the units. Exact integer arithmetic throughout.
    fn angle_numerator(&self, exponents: &[u64], a: u64) -> Option<u64> {
        let xs = self.unit_group.discrete_log(a).ok()?;
        let l = self.angle_lcm;
        let mut t = 0u64;
        for (i, (&e, &x)) in exponents.iter().zip(xs).enumerate() {
            let order = self.unit_group.factors()[i].order;
            t = (t + e * x % order * (l / order)) % l;
        }
        Some(t)
    }

    fn conductor_of_exponents(&self, exponents: &[u64]) -> u64 {
        let m = self.modulus;
        'next: for d in divisors(m) {
            let mut a = 1u64;
            while a <= m {
                if gcd(a, m) == 1 && self.angle_numerator(exponents, a) != Some(0) {
                    continue 'next;
                }
                a += d;
            }
            return d;
        }
        unreachable!("d = m always passes")
    }

    /// Evaluate `chi` at `a`.
    pub fn eval(&self, chi: &DirichletCharacter, a: u64) -> CharEval {
        assert_eq!(chi.modulus, self.modulus, "character belongs to another modulus");
        match self.angle_numerator(&chi.exponents, a) {
            None => CharEval {
                angle: None,
                value: Complex64::zero(),
                galois_value: Complex64::zero(),
            },
            Some(t) => {
                let angle = Rational::new(BigInt::from(t), BigInt::from(self.angle_lcm));
                let theta = 2.0 * std::f64::consts::PI * t as f64 / self.angle_lcm as f64;
                let value = Complex64::new(theta.cos(), theta.sin());
                CharEval { angle: Some(angle), value, galois_value: value.conj() }
            }
        }
    }

    /// `<f, chi> = phi(M)^{-1} sum_{a=1}^{M} f(a) conj(chi(a))` at double
    /// precision. The error is bounded by roughly `phi(M) max|f| 1e-15`.
    pub fn inner_product(&self, f: &PeriodicFunction, chi: &DirichletCharacter) -> Result<Complex64> {
        if f.period() != self.modulus {
            return Err(Error::PeriodMismatch(f.period(), self.modulus));
        }
        let mut acc = Complex64::zero();
        for a in 1..=self.modulus {
            let fa = f.value_at(a);
            if fa.is_zero() {
                continue;
            }
            let fa = fa.to_f64().expect("finite rational");
            acc += self.eval(chi, a).value.conj() * fa;
        }
        Ok(acc / euler_phi(self.modulus) as f64)
    }

    /// Unnormalized character sum `sum_a f(a) chi(a)`.
    fn character_sum(&self, f: &PeriodicFunction, chi: &DirichletCharacter) -> Result<Complex64> {
        if f.period() != self.modulus {
            return Err(Error::PeriodMismatch(f.period(), self.modulus));
        }
        let mut acc = Complex64::zero();
        for a in 1..=self.modulus {
            let fa = f.value_at(a);
            if !fa.is_zero() {
                acc += self.eval(chi, a).value * fa.to_f64().expect("finite rational");
            }
        }
        Ok(acc)
    }

    /// Numeric primitivity: true iff some conductor-`M` character sees `f`,
    /// i.e. `|sum_a f(a) chi(a)| > eps` with `eps = 1e-9 (1 + sum |f(a)|)`.
    pub fn is_primitive_oracle(&self, f: &PeriodicFunction) -> Result<bool> {
        let norm1: f64 = f
            .values()
            .iter()
            .map(|v| v.abs().to_f64().expect("finite rational"))
            .sum();
        let eps = crate::tolerances::PRIMITIVITY_EPS_SCALE * (1.0 + norm1);
        for chi in &self.characters {
            if chi.is_primitive() && self.character_sum(f, chi)?.norm() > eps {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// The conductor-`d` component `sum_{cond(chi)=d} <f,chi> chi` evaluated
    /// numerically and rounded back to exact rationals.
    ///
    /// The component of a rational `f` is rational with denominator dividing
    /// `phi(M) * M * q` (`q` = lcm of the denominators of `f`); rounding to
    /// that grid must land within 1e-9 or the call reports a bug via
    /// [`Error::RoundingResidual`].
    pub fn conductor_component_oracle(&self, f: &PeriodicFunction, d: u64) -> Result<PeriodicFunction> {
        let m = self.modulus;
        if f.period() != m {
            return Err(Error::PeriodMismatch(f.period(), m));
        }
        if d == 0 || !m.is_multiple_of(d) {
            return Err(Error::NotADivisor { divisor: d, of: m });
        }
        let selected: Vec<(&DirichletCharacter, Complex64)> = self
            .characters
            .iter()
            .filter(|chi| chi.conductor() == d)
            .map(|chi| Ok((chi, self.inner_product(f, chi)?)))
            .collect::<Result<_>>()?;

        let q = f
            .values()
            .iter()
            .fold(BigInt::from(1), |acc, v| acc.lcm(v.denom()));
        let grid = Rational::from_integer(BigInt::from(euler_phi(m) * m) * q);
        let grid_f = grid.to_f64().expect("desk-scale grid");

        let tolerance = crate::tolerances::RATIONAL_ROUNDING;
        let mut values = Vec::with_capacity(m as usize);
        for a in 1..=m {
            if gcd(a, m) != 1 {
                values.push(Rational::zero());
                continue;
            }
            let mut z = Complex64::zero();
            for (chi, ip) in &selected {
                z += ip * self.eval(chi, a).value;
            }
            let nearest = (z.re * grid_f).round();
            let residual = (z.re - nearest / grid_f).abs() + z.im.abs();
            if residual > tolerance {
                return Err(Error::RoundingResidual { residual, tolerance });
            }
            values.push(Rational::new(
                BigInt::from(nearest as i64),
                grid.numer().clone(),
            ));
        }
        PeriodicFunction::new(m, values)
    }
}

/// Number of primitive characters of conductor exactly `d`: multiplicative,
/// `phi(p^a) - phi(p^{a-1})` at prime powers (zero at `d = 2 (mod 4)`).
pub fn primitive_character_count(d: u64) -> u64 {
    factorize(d)
        .into_iter()
        .fold(1u64, |acc, (p, a)| {
            let pa = p.pow(a);
            acc * (euler_phi(pa) - euler_phi(pa / p))
        })
}

static TABLE_CACHE: OnceLock<Mutex<HashMap<u64, Arc<CharacterTable>>>> = OnceLock::new();

/// Insert-once cache of character tables, shared across threads.
pub fn shared_table(m: u64) -> Arc<CharacterTable> {
    let cache = TABLE_CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(t) = cache.lock().expect("cache lock").get(&m) {
        return Arc::clone(t);
    }
    let built = Arc::new(CharacterTable::new(m));
    let mut guard = cache.lock().expect("cache lock");
    Arc::clone(guard.entry(m).or_insert(built))
}

/// All `phi(M)` characters mod `M` in deterministic (lexicographic) order.
pub fn all_characters(m: u64) -> Vec<DirichletCharacter> {
    shared_table(m).characters().to_vec()
}
