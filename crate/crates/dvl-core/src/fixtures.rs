//! The bundled regression functions used across tests, the CLI `regress`
//! command, and the acceptance suite.

use crate::modarith::gcd;
use crate::periodic::PeriodicFunction;
use crate::Result;

/// Tengely's period-36 function: values `+-1`, `L(1,f) = 0`.
///
/// Found by exhaustive search (reported by Tijdeman, proved by Pilerud via
/// digamma relations); here it anchors both the exact criterion and the
/// numeric oracles. Every derived component `f_d` is a signed induced
/// character: `f_1 = Psi_6`, `f_2 = -Psi_6`, `f_3 = -Psi_6`, `f_4 = -Psi_3`,
/// `f_6 = chi_{0,6}`, `f_9 = -chi_{0,4}`, `f_12 = -chi_{0,3}`,
/// `f_18 = chi_{0,2}`, `f_36 = 1`.
pub fn tengely36() -> PeriodicFunction {
    PeriodicFunction::from_integers(36, &TENGELY36_VALUES).expect("static table")
}

/// Value table for [`tengely36`], `f(1)..f(36)`.
pub const TENGELY36_VALUES: [i64; 36] = [
    1, -1, -1, -1, -1, 1, 1, 1, -1, 1, -1, -1, 1, -1, 1, -1, -1, 1, //
    1, 1, -1, 1, -1, -1, 1, -1, -1, -1, -1, 1, 1, 1, 1, 1, -1, 1,
];

/// The period-12 function `f(n) = (-1)^{n+1}`, i.e. `L(s,f) = eta(s)`, so
/// `L(1,f) = log 2`.
///
/// Every derived component is a signed principal character
/// (`f_1 = chi_{0,12}`, `f_2 = -chi_{0,6}`, `f_3 = chi_{0,4}`,
/// `f_4 = -chi_{0,3}`, `f_6 = -chi_{0,2}`, `f_12 = -chi_{0,1}`), which makes
/// all divisor conditions hold while the prime condition at 2 fails: a
/// nonvanishing `L(1,f)` that still lies in the rational span of
/// `{log 2, log 3}`.
pub fn example51() -> PeriodicFunction {
    let values: Vec<i64> = (1..=12).map(|n| if n % 2 == 1 { 1 } else { -1 }).collect();
    PeriodicFunction::from_integers(12, &values).expect("static table")
}

/// The two-prime Euler-factor family: the period-`pq` function with
/// `L(s,f) = (1 - p^kp / p^s)(1 - q^kq / q^s) zeta(s)`, so `L(s,f)` vanishes
/// exactly at `s = kp` and `s = kq`.
///
/// Explicitly `f(n) = 1 - p^kp [p|n] - q^kq [q|n] + p^kp q^kq [pq|n]`.
pub fn two_prime_family(p: u64, kp: u32, q: u64, kq: u32) -> PeriodicFunction {
    assert!(p != q, "the two primes must be distinct");
    let period = p * q;
    let pk = p.pow(kp) as i64;
    let ql = q.pow(kq) as i64;
    let values: Vec<i64> = (1..=period)
        .map(|n| {
            let mut v = 1i64;
            if n % p == 0 {
                v -= pk;
            }
            if n % q == 0 {
                v -= ql;
            }
            if n % (p * q) == 0 {
                v += pk * ql;
            }
            v
        })
        .collect();
    PeriodicFunction::from_integers(period, &values).expect("static table")
}

/// The principal character mod `m` as a periodic function: `1` on residues
/// coprime to `m`, `0` elsewhere.
pub fn principal_character_fn(m: u64) -> PeriodicFunction {
    let values: Vec<i64> = (1..=m).map(|n| i64::from(gcd(n, m) == 1)).collect();
    PeriodicFunction::from_integers(m, &values).expect("static table")
}

/// The unique nontrivial character mod `m` for moduli with `phi(m) = 2`
/// (`m` in `{3, 4, 6}`): `+1` at `1`, `-1` at the other coprime residue.
pub fn unique_nontrivial_character_fn(m: u64) -> Result<PeriodicFunction> {
    let coprime: Vec<u64> = (1..=m).filter(|&n| gcd(n, m) == 1).collect();
    if coprime.len() != 2 {
        return Err(crate::Error::Parse(format!(
            "modulus {m} has phi = {}, expected exactly 2",
            coprime.len()
        )));
    }
    let values: Vec<i64> = (1..=m)
        .map(|n| if gcd(n, m) != 1 { 0 } else if n == 1 { 1 } else { -1 })
        .collect();
    PeriodicFunction::from_integers(m, &values)
}

/// The delta function mod `m` supported at residue `r` with value 1.
pub fn delta_fn(m: u64, r: u64) -> PeriodicFunction {
    let mut values = vec![0i64; m as usize];
    values[((r - 1) % m) as usize] = 1;
    PeriodicFunction::from_integers(m, &values).expect("static table")
}
