//! Elementary exact number theory: divisors, multiplicative functions,
//! p-adic valuations, and the cyclic-factor structure of `(Z/NZ)*`.
//!
//! Moduli are desk-scale throughout: factorization is trial division and
//! discrete logarithms are table lookups. All values are immutable after
//! construction and safe to share across threads.

use crate::{Error, Result};
use num_bigint::BigInt;

/// Exact rational scalar used throughout the crate.
///
/// Backed by `num_rational::BigRational`: always stored in lowest terms with
/// a positive denominator, and every operation is exact.
pub type Rational = num_rational::BigRational;

/// `n` as a [`Rational`].
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `n / d` as a [`Rational`] in lowest terms. Panics if `d == 0`.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn gcd(a: u64, b: u64) -> u64 {
    num_integer::gcd(a, b)
}

/// Trial-division primality test. Desk-scale moduli only.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Prime factorization `n = prod p_i^{e_i}` with the `p_i` ascending.
pub fn factorize(n: u64) -> Vec<(u64, u32)> {
    assert!(n >= 1, "factorize requires n >= 1");
    let mut n = n;
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0u32;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// All divisors of `n` in increasing order.
pub fn divisors(n: u64) -> Vec<u64> {
    assert!(n >= 1, "divisors requires n >= 1");
    let mut out = vec![1u64];
    for (p, e) in factorize(n) {
        let prev = out.clone();
        let mut pk = 1u64;
        for _ in 0..e {
            pk *= p;
            out.extend(prev.iter().map(|d| d * pk));
        }
    }
    out.sort_unstable();
    out
}

/// The p-adic valuation `v_p(n)`: the largest `e` with `p^e | n`.
pub fn vp(n: u64, p: u64) -> Result<u32> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    assert!(n >= 1, "vp requires n >= 1");
    let mut n = n;
    let mut e = 0;
    while n.is_multiple_of(p) {
        n /= p;
        e += 1;
    }
    Ok(e)
}

/// Euler's totient, from the factorization of `n`.
pub fn euler_phi(n: u64) -> u64 {
    factorize(n)
        .into_iter()
        .fold(1u64, |acc, (p, e)| acc * (p - 1) * p.pow(e - 1))
}

/// The Moebius function: 0 unless `n` is squarefree, else `(-1)^omega(n)`.
pub fn mobius(n: u64) -> i64 {
    let mut m = 1i64;
    for (_, e) in factorize(n) {
        if e > 1 {
            return 0;
        }
        m = -m;
    }
    m
}

/// Number of distinct prime divisors.
pub fn omega(n: u64) -> u32 {
    factorize(n).len() as u32
}

pub fn is_squarefree(n: u64) -> bool {
    factorize(n).iter().all(|&(_, e)| e == 1)
}

/// `base^exp mod m`, with `mod 1` collapsing to 0.
pub fn mod_pow(base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut base = base % m;
    let mut acc = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc
}

/// Multiplicative inverse of `a` mod `m`, if `gcd(a, m) = 1`.
pub fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(m as i128) as u64)
}

/// Order of `a` in `(Z/mZ)*`. Requires `gcd(a, m) = 1`.
pub fn multiplicative_order(a: u64, m: u64) -> u64 {
    assert_eq!(gcd(a, m), 1, "order requires gcd(a, m) = 1");
    if m == 1 {
        return 1;
    }
    let mut x = a % m;
    let mut ord = 1u64;
    while x != 1 {
        x = x * a % m;
        ord += 1;
    }
    ord
}

/// Residues in `[1, m]` coprime to `m`, ascending. For `m = 1` this is `[1]`.
pub fn coprime_residues(m: u64) -> Vec<u64> {
    (1..=m).filter(|&a| gcd(a, m) == 1).collect()
}

/// Solve `x = r1 mod m1`, `x = r2 mod m2` for coprime `m1, m2`.
pub fn crt_combine(r1: u64, m1: u64, r2: u64, m2: u64) -> u64 {
    debug_assert_eq!(gcd(m1, m2), 1);
    let m = m1 * m2;
    if m == 1 {
        return 0;
    }
    let inv = mod_inverse(m1 % m2, m2).expect("crt moduli must be coprime");
    let k = (r2 + m2 - r1 % m2) % m2 * inv % m2;
    (r1 + m1 * k) % m
}

/// One cyclic factor of `(Z/NZ)*`: a generator residue and its order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitGroupFactor {
    pub generator: u64,
    pub order: u64,
}

/// `(Z/NZ)*` decomposed into cyclic factors via CRT.
///
/// Each odd prime power `p^k || N` contributes one factor generated by the
/// smallest primitive root mod `p^k`, lifted so the generator is `1` on the
/// complementary part of `N`. The two-part contributes no factor for
/// `2^1 || N`, one order-2 factor for `2^2 || N`, and factors of orders
/// `2` and `2^{k-2}` (generated by `-1` and `5`) for `2^k || N`, `k >= 3`.
///
/// The product of the factor orders is `phi(N)` and the map from exponent
/// tuples to residues is a bijection; a full discrete-log table is built at
/// construction time.
#[derive(Debug, Clone)]
pub struct UnitGroupStructure {
    modulus: u64,
    factors: Vec<UnitGroupFactor>,
    /// `dlog[a]` is the exponent tuple of residue `a`, `None` off the units.
    dlog: Vec<Option<Vec<u64>>>,
}

/// Smallest primitive root modulo an odd prime power `p^k`.
fn smallest_primitive_root(pk: u64) -> u64 {
    let phi = euler_phi(pk);
    let prime_divs: Vec<u64> = factorize(phi).into_iter().map(|(q, _)| q).collect();
    (2..pk)
        .find(|&g| {
            gcd(g, pk) == 1 && prime_divs.iter().all(|&q| mod_pow(g, phi / q, pk) != 1)
        })
        .expect("odd prime powers always have a primitive root")
}

impl UnitGroupStructure {
    pub fn new(n: u64) -> Self {
        assert!(n >= 1, "unit group requires modulus >= 1");
        let mut factors = Vec::new();
        for (p, k) in factorize(n) {
            let pk = p.pow(k);
            let rest = n / pk;
            let mut local: Vec<(u64, u64)> = Vec::new();
            if p == 2 {
                match k {
                    1 => {}
                    2 => local.push((3, 2)),
                    _ => {
                        local.push((pk - 1, 2));
                        local.push((5, 1 << (k - 2)));
                    }
                }
            } else {
                local.push((smallest_primitive_root(pk), euler_phi(pk)));
            }
            for (g, ord) in local {
                factors.push(UnitGroupFactor {
                    generator: crt_combine(g % pk, pk, 1 % rest.max(1), rest).max(1),
                    order: ord,
                });
            }
        }
        let dlog = Self::build_dlog_table(n, &factors);
        UnitGroupStructure { modulus: n, factors, dlog }
    }

    fn build_dlog_table(n: u64, factors: &[UnitGroupFactor]) -> Vec<Option<Vec<u64>>> {
        let mut table: Vec<Option<Vec<u64>>> = vec![None; n as usize + 1];
        let r = factors.len();
        let mut exps = vec![0u64; r];
        let mut residue = 1u64 % n.max(1);
        if n == 1 {
            table[1] = Some(Vec::new());
            return table;
        }
        // Mixed-radix sweep over exponent tuples; the running residue is the
        // product of generator powers, updated one factor step at a time.
        loop {
            let key = if residue == 0 { n } else { residue };
            debug_assert!(table[key as usize].is_none(), "exponent map must be injective");
            table[key as usize] = Some(exps.clone());
            let mut i = 0;
            loop {
                if i == r {
                    debug_assert_eq!(
                        table.iter().filter(|e| e.is_some()).count() as u64,
                        euler_phi(n)
                    );
                    return table;
                }
                exps[i] += 1;
                residue = residue * factors[i].generator % n;
                if exps[i] < factors[i].order {
                    break;
                }
                exps[i] = 0;
                i += 1;
            }
        }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn factors(&self) -> &[UnitGroupFactor] {
        &self.factors
    }

    pub fn phi(&self) -> u64 {
        self.factors.iter().map(|f| f.order).product()
    }

    /// The unique exponent tuple `(e_1, ..., e_r)` with
    /// `prod generator_i^{e_i} = a (mod N)`.
    pub fn discrete_log(&self, a: u64) -> Result<&[u64]> {
        let a = self.reduce(a);
        self.dlog[a as usize]
            .as_deref()
            .ok_or(Error::NotCoprime { residue: a, modulus: self.modulus })
    }

    /// Re-multiply generators: inverse of [`Self::discrete_log`].
    pub fn element_from_exponents(&self, exps: &[u64]) -> u64 {
        assert_eq!(exps.len(), self.factors.len());
        if self.modulus == 1 {
            return 1;
        }
        self.factors
            .iter()
            .zip(exps)
            .fold(1u64, |acc, (f, &e)| acc * mod_pow(f.generator, e, self.modulus) % self.modulus)
    }

    /// Canonical representative of `a` in `[1, modulus]`.
    pub fn reduce(&self, a: u64) -> u64 {
        if self.modulus == 1 {
            return 1;
        }
        let r = a % self.modulus;
        if r == 0 {
            self.modulus
        } else {
            r
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn divisors_listed_ascending() {
        assert_eq!(divisors(1), vec![1]);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(36), vec![1, 2, 3, 4, 6, 9, 12, 18, 36]);
    }

    #[test]
    fn valuations() {
        assert_eq!(vp(12, 2).unwrap(), 2);
        assert_eq!(vp(12, 5).unwrap(), 0);
        assert_eq!(vp(36, 3).unwrap(), 2);
        assert_eq!(vp(12, 4), Err(Error::NotPrime(4)));
    }

    #[test]
    fn multiplicative_functions() {
        assert_eq!(euler_phi(36), 12);
        assert_eq!(mobius(30), -1);
        assert_eq!(mobius(12), 0);
        assert_eq!(omega(12), 2);
        assert_eq!(euler_phi(1), 1);
    }

    #[test]
    fn phi_and_mobius_divisor_sums() {
        for n in 1..=1000u64 {
            let phi_sum: u64 = divisors(n).iter().map(|&d| euler_phi(d)).sum();
            assert_eq!(phi_sum, n);
            let mu_sum: i64 = divisors(n).iter().map(|&d| mobius(d)).sum();
            assert_eq!(mu_sum, i64::from(n == 1));
        }
    }

    #[test]
    fn unit_group_structure_small_moduli() {
        let g5 = UnitGroupStructure::new(5);
        assert_eq!(g5.factors().len(), 1);
        assert_eq!(g5.factors()[0].order, 4);
        assert_eq!(multiplicative_order(g5.factors()[0].generator, 5), 4);

        let g12 = UnitGroupStructure::new(12);
        let orders: Vec<u64> = g12.factors().iter().map(|f| f.order).collect();
        assert_eq!(orders, vec![2, 2]);
        assert_eq!(g12.phi(), euler_phi(12));

        let g8 = UnitGroupStructure::new(8);
        let orders: Vec<u64> = g8.factors().iter().map(|f| f.order).collect();
        assert_eq!(orders, vec![2, 2]);
        let gens: Vec<u64> = g8.factors().iter().map(|f| f.generator).collect();
        assert_eq!(gens, vec![7, 5]);
    }

    #[test]
    fn discrete_log_round_trip() {
        for n in 1..=200u64 {
            let g = UnitGroupStructure::new(n);
            for a in coprime_residues(n) {
                let exps = g.discrete_log(a).unwrap().to_vec();
                assert_eq!(g.element_from_exponents(&exps), a, "round trip mod {n} at {a}");
            }
        }
    }

    #[test]
    fn discrete_log_examples() {
        let g5 = UnitGroupStructure::new(5);
        // identity has the all-zero tuple
        assert!(g5.discrete_log(1).unwrap().iter().all(|&e| e == 0));
        assert!(g5.discrete_log(10).is_err());
        let g12 = UnitGroupStructure::new(12);
        let exps = g12.discrete_log(11).unwrap().to_vec();
        assert_eq!(g12.element_from_exponents(&exps), 11);
    }

    #[test]
    fn crt_and_inverse() {
        assert_eq!(crt_combine(2, 3, 1, 5), 11);
        assert_eq!(mod_inverse(3, 7), Some(5));
        assert_eq!(mod_inverse(6, 9), None);
        assert_eq!(mod_pow(2, 10, 1000), 24);
    }
}
