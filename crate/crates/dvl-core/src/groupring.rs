//! Exact arithmetic in the rational group ring `Q[(Z/MZ)*]`, identified with
//! `Q[Gal(Q(zeta_M)/Q)]` via `sigma_a <-> a`.
//!
//! Elements are sparse maps from coprime residues to nonzero rationals, kept
//! in canonical form, so structural equality is semantic equality. The
//! modulus-1 ring degenerates to `Q` with the single key `1`.

use crate::modarith::{
    coprime_residues, divisors, euler_phi, factorize, gcd, is_prime, multiplicative_order, Rational,
};
use crate::{Error, Result};
use num_traits::{One, Zero};
use serde::ser::SerializeStruct;
use std::collections::BTreeMap;
use std::fmt;

/// Canonical representative of `x` in `[1, m]`.
fn reduce(m: u64, x: u64) -> u64 {
    if m == 1 {
        return 1;
    }
    let r = x % m;
    if r == 0 {
        m
    } else {
        r
    }
}

/// A formal sum `sum c_a sigma_a` over coprime residues `a` mod `M`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupRingElement {
    modulus: u64,
    coeffs: BTreeMap<u64, Rational>,
}

impl GroupRingElement {
    pub fn zero(modulus: u64) -> Self {
        assert!(modulus >= 1);
        GroupRingElement { modulus, coeffs: BTreeMap::new() }
    }

    /// The multiplicative identity `sigma_1`.
    pub fn identity(modulus: u64) -> Self {
        Self::sigma(modulus, 1).expect("1 is coprime to every modulus")
    }

    /// The basis element `sigma_a`.
    pub fn sigma(modulus: u64, a: u64) -> Result<Self> {
        Self::from_terms(modulus, [(a, Rational::one())])
    }

    /// Accumulate `(residue, coefficient)` terms into canonical form.
    pub fn from_terms<I>(modulus: u64, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u64, Rational)>,
    {
        assert!(modulus >= 1);
        let mut coeffs: BTreeMap<u64, Rational> = BTreeMap::new();
        for (a, c) in terms {
            let a = reduce(modulus, a);
            if gcd(a, modulus) != 1 {
                return Err(Error::NotCoprime { residue: a, modulus });
            }
            if c.is_zero() {
                continue;
            }
            let slot = coeffs.entry(a).or_insert_with(Rational::zero);
            *slot += c;
            if slot.is_zero() {
                coeffs.remove(&a);
            }
        }
        Ok(GroupRingElement { modulus, coeffs })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn support_len(&self) -> usize {
        self.coeffs.len()
    }

    /// Coefficient of `sigma_a` (zero when absent).
    pub fn coeff(&self, a: u64) -> Rational {
        self.coeffs.get(&reduce(self.modulus, a)).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, &Rational)> {
        self.coeffs.iter().map(|(&a, c)| (a, c))
    }

    /// Sum of all coefficients (the image under restriction to modulus 1).
    pub fn coefficient_sum(&self) -> Rational {
        self.coeffs.values().sum()
    }

    fn check_same_modulus(&self, other: &Self) -> Result<()> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch(self.modulus, other.modulus));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_modulus(other)?;
        Self::from_terms(
            self.modulus,
            self.iter().chain(other.iter()).map(|(a, c)| (a, c.clone())),
        )
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-Rational::one()))
    }

    /// Coefficient-wise scalar multiple.
    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.modulus);
        }
        GroupRingElement {
            modulus: self.modulus,
            coeffs: self.coeffs.iter().map(|(&a, v)| (a, v * c)).collect(),
        }
    }

    /// Convolution product: the coefficient of `sigma_c` is
    /// `sum over ab = c of x(a) y(b)`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same_modulus(other)?;
        let m = self.modulus;
        let mut acc: BTreeMap<u64, Rational> = BTreeMap::new();
        for (a, ca) in self.iter() {
            for (b, cb) in other.iter() {
                let key = reduce(m, if m == 1 { 1 } else { a * b % m });
                let slot = acc.entry(key).or_insert_with(Rational::zero);
                *slot += ca * cb;
            }
        }
        acc.retain(|_, v| !v.is_zero());
        Ok(GroupRingElement { modulus: m, coeffs: acc })
    }

    /// Restriction to `Q[(Z/dZ)*]` for `d | M`: each `sigma_a` maps to
    /// `sigma_{a mod d}`, i.e. automorphisms of `Q(zeta_M)` restrict to
    /// `Q(zeta_d)`.
    pub fn restrict(&self, d: u64) -> Result<Self> {
        if d == 0 || !self.modulus.is_multiple_of(d) {
            return Err(Error::NotADivisor { divisor: d, of: self.modulus });
        }
        Self::from_terms(d, self.iter().map(|(a, c)| (reduce(d, a), c.clone())))
    }
}

impl fmt::Display for GroupRingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0 (mod {})", self.modulus);
        }
        let terms: Vec<String> =
            self.iter().map(|(a, c)| format!("({c})s_{a}")).collect();
        write!(f, "{} (mod {})", terms.join(" + "), self.modulus)
    }
}

impl serde::Serialize for GroupRingElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let coeffs: BTreeMap<String, String> = self
            .iter()
            .map(|(a, c)| (a.to_string(), crate::periodic::rational_to_string(c)))
            .collect();
        let mut st = s.serialize_struct("GroupRingElement", 2)?;
        st.serialize_field("modulus", &self.modulus)?;
        st.serialize_field("coeffs", &coeffs)?;
        st.end()
    }
}

/// All elements of the kernel of `(Z/MZ)* -> (Z/(M/p)Z)*`, i.e. the residues
/// `t = 1 (mod M/p)` coprime to `M`.
pub fn reduction_kernel(m: u64, p: u64) -> Result<Vec<u64>> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if !m.is_multiple_of(p) {
        return Err(Error::NotADivisor { divisor: p, of: m });
    }
    let step = m / p;
    Ok((0..p)
        .map(|j| reduce(m, 1 + j * step))
        .filter(|&t| gcd(t, m) == 1)
        .collect())
}

/// Canonical generator of `Gal(Q(zeta_M)/Q(zeta_{M/p}))`: the smallest
/// residue `t = 1 (mod M/p)` whose multiplicative order mod `M` equals the
/// kernel order `phi(M)/phi(M/p)`.
///
/// For `M = 2 (mod 4)` the kernel at `p = 2` is trivial and the generator is
/// `1`, making `1 - sigma_t` vanish; this is what encodes the absence of
/// primitive characters of conductor `= 2 (mod 4)`.
pub fn tau_generator(m: u64, p: u64) -> Result<u64> {
    let kernel = reduction_kernel(m, p)?;
    let order = euler_phi(m) / euler_phi(m / p);
    debug_assert_eq!(kernel.len() as u64, order);
    kernel
        .into_iter()
        .filter(|&t| multiplicative_order(t, m) == order)
        .min()
        .ok_or(Error::NotADivisor { divisor: p, of: m })
}

/// `prod over primes p | M of (1 - sigma_{tau_p})`, the annihilator of the
/// imprimitive part of `Q[(Z/MZ)*]`. For `M = 1` this is the identity.
pub fn annihilator_product(m: u64) -> GroupRingElement {
    let mut acc = GroupRingElement::identity(m);
    for (p, _) in factorize(m) {
        let tau = tau_generator(m, p).expect("p divides m by construction");
        let factor = GroupRingElement::identity(m)
            .sub(&GroupRingElement::sigma(m, tau).expect("tau is coprime to m"))
            .expect("same modulus");
        acc = acc.mul(&factor).expect("same modulus");
    }
    acc
}

/// Convenience check used by tests: does `g` generate the reduction kernel?
pub fn generates_reduction_kernel(m: u64, p: u64, g: u64) -> bool {
    match reduction_kernel(m, p) {
        Ok(kernel) => {
            gcd(g, m) == 1
                && kernel.contains(&reduce(m, g))
                && multiplicative_order(g, m) == kernel.len() as u64
        }
        Err(_) => false,
    }
}

/// Brute-force convolution over full coprime-residue tables; an independent
/// oracle for [`GroupRingElement::mul`] kept deliberately naive.
pub fn convolve_reference(x: &GroupRingElement, y: &GroupRingElement) -> Result<GroupRingElement> {
    if x.modulus() != y.modulus() {
        return Err(Error::ModulusMismatch(x.modulus(), y.modulus()));
    }
    let m = x.modulus();
    let mut terms = Vec::new();
    for c in coprime_residues(m) {
        let mut total = Rational::zero();
        for a in coprime_residues(m) {
            for b in coprime_residues(m) {
                if reduce(m, if m == 1 { 1 } else { a * b % m }) == c {
                    total += x.coeff(a) * y.coeff(b);
                }
            }
        }
        terms.push((c, total));
    }
    GroupRingElement::from_terms(m, terms)
}

/// Divisors helper re-exported for callers iterating divisor conditions.
pub fn moduli_dividing(m: u64) -> Vec<u64> {
    divisors(m)
}
