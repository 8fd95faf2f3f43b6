//! Exhaustive desk-scale searches over `{+-1}`-valued function families.
//!
//! The hot path never touches big rationals: for a fixed period the entire
//! `L(1,f)` criterion is precompiled into integer data (slice sums for the
//! divergence and prime conditions, and one integer matrix per divisor
//! condition, obtained by clearing denominators — an overall positive scale
//! never changes whether a witness vanishes). A candidate is then classified
//! with a few hundred `i64` multiply-adds, and every candidate the screen
//! declares vanishing is re-verified through the exact rational route.
//!
//! Enumeration is data-parallel over explicit index ranges (rayon, feature
//! `parallel`, on by default) with a sequential fallback compiled in either
//! way; identical specs produce identical outcomes regardless of worker
//! count. Periods whose full space exceeds the `2^28` guard are served by
//! [`run_search_pruned`], a depth-first sweep over divisor slices that
//! applies each divisor condition the moment its inputs are assigned; since
//! every pruning condition is necessary for vanishing, the pruned sweep is
//! still exhaustive for the vanishing set.

use crate::groupring::annihilator_product;
use crate::modarith::{divisors, euler_phi, factorize, gcd, mod_inverse, vp};
use crate::periodic::{valuation_below_indicator, PeriodicFunction};
use crate::vanishing::{decide_vanishing, Verdict};
use crate::{Error, Result};
use num_traits::ToPrimitive;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Candidate families: Erdos functions (`+-1` on `1..N-1`, `0` at `N`) and
/// full-support `+-1` functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Erdos,
    Pm1Full,
}

impl std::str::FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "erdos" => Ok(Family::Erdos),
            "pm1" | "pm1_full" => Ok(Family::Pm1Full),
            other => Err(Error::Parse(format!("unknown family {other:?}, expected erdos|pm1"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchSpec {
    pub period: u64,
    pub family: Family,
    /// Restrict criterion evaluation to zero-sum candidates (the rest are
    /// divergent either way, so counts are unaffected).
    pub require_zero_sum: bool,
    pub worker_count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOutcome {
    pub total: u64,
    pub divergent: u64,
    pub nonvanishing: u64,
    /// Sorted candidate indices whose `L(1,f)` vanishes.
    pub vanishing: Vec<u64>,
    /// True when produced by the pruned divisor-slice sweep.
    pub pruned: bool,
}

/// Full-enumeration guard: `2^bits` candidates at most.
pub const SEARCH_BITS_LIMIT: u32 = 28;

/// Number of index bits for a family/period: `N - 1` for Erdos (the value at
/// `N` is pinned to zero), `N` for full support.
pub fn candidate_bits(family: Family, period: u64) -> u32 {
    match family {
        Family::Erdos => (period - 1) as u32,
        Family::Pm1Full => period as u32,
    }
}

/// The frozen index bijection: bit `i` of the index is the sign of `f(i+1)`
/// (set = `+1`, clear = `-1`); for the Erdos family `f(N) = 0` and only bits
/// `0..N-1` exist.
pub fn fill_candidate_values(family: Family, period: u64, index: u64, out: &mut [i64]) {
    let bits = candidate_bits(family, period) as usize;
    debug_assert_eq!(out.len() as u64, period);
    debug_assert!(index < (1u64 << bits) || bits == 64);
    for (i, slot) in out.iter_mut().enumerate().take(bits) {
        *slot = if index >> i & 1 == 1 { 1 } else { -1 };
    }
    if matches!(family, Family::Erdos) {
        out[period as usize - 1] = 0;
    }
}

pub fn candidate_function(family: Family, period: u64, index: u64) -> PeriodicFunction {
    let mut values = vec![0i64; period as usize];
    fill_candidate_values(family, period, index, &mut values);
    PeriodicFunction::from_integers(period, &values).expect("consistent")
}

/// Inverse of the bijection (values must be a valid family member).
pub fn candidate_index(family: Family, values: &[i64]) -> u64 {
    let bits = candidate_bits(family, values.len() as u64) as usize;
    values
        .iter()
        .take(bits)
        .enumerate()
        .fold(0u64, |acc, (i, &v)| acc | (u64::from(v == 1) << i))
}

/// One divisor condition compiled to an integer matrix: the condition holds
/// for a candidate exactly when every row is orthogonal to its value vector.
#[derive(Debug, Clone)]
struct DivisorMatrix {
    divisor: u64,
    rows: Vec<Vec<i64>>,
}

/// The whole period-`N` criterion precompiled to integer data.
#[derive(Debug, Clone)]
pub struct CriterionScreen {
    period: u64,
    divisors: Vec<u64>,
    /// 0-based value positions per divisor slice `d`: `{d a - 1 : gcd(a, N/d) = 1}`.
    slices: Vec<Vec<usize>>,
    /// Per prime `p | N`: integer row over slice sums, `(p-1) v_p(d) - 1_p^N(d)`.
    prime_rows: Vec<(u64, Vec<i64>)>,
    /// Matrices for conditions after the automatic/trivially-zero ones drop out,
    /// in the divisor order of `self.divisors`.
    matrices: Vec<DivisorMatrix>,
}

fn lcm_u64(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

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

impl CriterionScreen {
    pub fn new(period: u64) -> Self {
        assert!(period >= 1);
        let divs = divisors(period);

        let slices: Vec<Vec<usize>> = divs
            .iter()
            .map(|&d| {
                let q = period / d;
                (1..=q).filter(|&a| gcd(a, q) == 1).map(|a| (d * a - 1) as usize).collect()
            })
            .collect();

        let prime_rows: Vec<(u64, Vec<i64>)> = factorize(period)
            .into_iter()
            .map(|(p, _)| {
                let row = divs
                    .iter()
                    .map(|&d| {
                        let v = vp(d, p).expect("p is prime") as i64;
                        let ind = valuation_below_indicator(d, p, period).expect("d, p | N") as i64;
                        (p as i64 - 1) * v - ind
                    })
                    .collect();
                (p, row)
            })
            .collect();

        let matrices = divs
            .iter()
            .filter_map(|&big_d| Self::build_matrix(period, big_d))
            .collect();

        CriterionScreen { period, divisors: divs, slices, prime_rows, matrices }
    }

    /// Integer matrix of the divisor-`D` condition; `None` when identically
    /// zero (the `N/D = 2 (mod 4)` convention and other degenerate cases).
    fn build_matrix(n: u64, big_d: u64) -> Option<DivisorMatrix> {
        let m = n / big_d;
        let residues: Vec<u64> = (1..=m).filter(|&a| gcd(a, m) == 1).collect();
        let phi = residues.len();
        let mut index_of = vec![usize::MAX; m as usize + 1];
        for (i, &r) in residues.iter().enumerate() {
            index_of[r as usize] = i;
        }
        let mult: Vec<Vec<usize>> = residues
            .iter()
            .map(|&a| {
                residues
                    .iter()
                    .map(|&b| index_of[reduce(m, if m == 1 { 1 } else { a * b % m }) as usize])
                    .collect()
            })
            .collect();

        // dense integer annihilator
        let ann_elem = annihilator_product(m);
        let mut ann = vec![0i64; phi];
        for (a, c) in ann_elem.iter() {
            debug_assert!(c.denom().to_u64() == Some(1));
            ann[index_of[a as usize]] = c.numer().to_i64().expect("small integer");
        }
        if ann.iter().all(|&c| c == 0) {
            return None;
        }

        // common denominator over the terms of h_D
        let inner = divisors(big_d);
        let local_primes = |d: u64| -> Vec<u64> {
            factorize(n / d).into_iter().map(|(p, _)| p).filter(|&p| !m.is_multiple_of(p)).collect()
        };
        let denom = |d: u64| -> u64 {
            d * euler_phi(n / d) * local_primes(d).iter().product::<u64>()
        };
        let scale_lcm = inner.iter().fold(1u64, |acc, &d| lcm_u64(acc, denom(d)));

        let mut rows = vec![vec![0i64; n as usize]; phi];
        for &d in &inner {
            let s_d = (scale_lcm / denom(d)) as i64;
            // B_d = s_d * prod_{p} (p - sigma_{p^{-1} mod m}), dense
            let mut bt = vec![0i64; phi];
            bt[index_of[1]] = s_d;
            for p in local_primes(d) {
                let p_inv = reduce(m, mod_inverse(p, m).expect("p coprime to m"));
                let shift_idx = index_of[p_inv as usize];
                let mut next = vec![0i64; phi];
                for i in 0..phi {
                    if bt[i] != 0 {
                        next[i] += p as i64 * bt[i];
                        next[mult[i][shift_idx]] -= bt[i];
                    }
                }
                bt = next;
            }
            // AW_d = annihilator (convolve) B_d
            let mut aw = vec![0i64; phi];
            for i in 0..phi {
                if ann[i] == 0 {
                    continue;
                }
                for j in 0..phi {
                    if bt[j] != 0 {
                        aw[mult[i][j]] += ann[i] * bt[j];
                    }
                }
            }
            // scatter restrict(P(f_d), m): position d*a contributes at index (a mod m)
            let q = n / d;
            for a in (1..=q).filter(|&a| gcd(a, q) == 1) {
                let pos = (d * a - 1) as usize;
                let j = index_of[reduce(m, a) as usize];
                for i in 0..phi {
                    if aw[i] != 0 {
                        rows[mult[i][j]][pos] += aw[i];
                    }
                }
            }
        }

        rows.retain(|row| row.iter().any(|&c| c != 0));
        if rows.is_empty() {
            return None;
        }
        Some(DivisorMatrix { divisor: big_d, rows })
    }

    pub fn period(&self) -> u64 {
        self.period
    }

    /// Classify one candidate. Exact: integer arithmetic realizing the same
    /// conditions as [`decide_vanishing`] at `k = 1`.
    pub fn evaluate(&self, values: &[i64]) -> Verdict {
        debug_assert_eq!(values.len() as u64, self.period);
        let msums: Vec<i64> =
            self.slices.iter().map(|s| s.iter().map(|&p| values[p]).sum()).collect();
        if msums.iter().sum::<i64>() != 0 {
            return Verdict::Divergent;
        }
        for (_, row) in &self.prime_rows {
            if msums.iter().zip(row).map(|(m, c)| m * c).sum::<i64>() != 0 {
                return Verdict::Nonvanishing;
            }
        }
        for mat in &self.matrices {
            if !self.matrix_satisfied(mat, values) {
                return Verdict::Nonvanishing;
            }
        }
        Verdict::Vanishes
    }

    fn matrix_satisfied(&self, mat: &DivisorMatrix, values: &[i64]) -> bool {
        mat.rows
            .iter()
            .all(|row| row.iter().zip(values).map(|(c, v)| c * v).sum::<i64>() == 0)
    }
}

/// Contiguous index ranges tiling `[0, total)`; the driver asserts the tiling.
fn partition_ranges(total: u64, pieces: u64) -> Vec<(u64, u64)> {
    let pieces = pieces.max(1);
    let size = total.div_ceil(pieces).max(1);
    let mut ranges = Vec::new();
    let mut start = 0u64;
    while start < total {
        let end = (start + size).min(total);
        ranges.push((start, end));
        start = end;
    }
    if ranges.is_empty() {
        ranges.push((0, 0));
    }
    ranges
}

fn assert_partition(ranges: &[(u64, u64)], total: u64) {
    let mut expected = 0u64;
    for &(start, end) in ranges {
        assert_eq!(start, expected, "worker ranges must be contiguous");
        assert!(end >= start);
        expected = end;
    }
    assert_eq!(expected, total, "worker ranges must cover the space");
}

#[derive(Debug, Default, Clone)]
struct Tally {
    divergent: u64,
    nonvanishing: u64,
    vanishing: Vec<u64>,
}

impl Tally {
    fn merge(mut self, other: Tally) -> Tally {
        self.divergent += other.divergent;
        self.nonvanishing += other.nonvanishing;
        self.vanishing.extend(other.vanishing);
        self
    }
}

fn scan_range(screen: &CriterionScreen, spec: &SearchSpec, start: u64, end: u64) -> Tally {
    let mut tally = Tally::default();
    let mut values = vec![0i64; spec.period as usize];
    for index in start..end {
        fill_candidate_values(spec.family, spec.period, index, &mut values);
        if spec.require_zero_sum && values.iter().sum::<i64>() != 0 {
            tally.divergent += 1;
            continue;
        }
        match screen.evaluate(&values) {
            Verdict::Divergent => tally.divergent += 1,
            Verdict::Nonvanishing => tally.nonvanishing += 1,
            Verdict::Vanishes => tally.vanishing.push(index),
        }
    }
    tally
}

fn finalize(spec: &SearchSpec, total: u64, mut tally: Tally, pruned: bool) -> SearchOutcome {
    tally.vanishing.sort_unstable();
    // cross-check every hit through the exact rational route
    for &index in &tally.vanishing {
        let f = candidate_function(spec.family, spec.period, index);
        let verdict = decide_vanishing(&f, 1).verdict;
        assert_eq!(verdict, Verdict::Vanishes, "screen/criterion disagreement at index {index}");
    }
    SearchOutcome {
        total,
        divergent: tally.divergent,
        nonvanishing: tally.nonvanishing,
        vanishing: tally.vanishing,
        pruned,
    }
}

fn guarded_total(spec: &SearchSpec) -> Result<u64> {
    let bits = candidate_bits(spec.family, spec.period);
    if bits > SEARCH_BITS_LIMIT {
        return Err(Error::SearchTooLarge { bits, limit: SEARCH_BITS_LIMIT });
    }
    Ok(1u64 << bits)
}

/// Sequential full enumeration. Always compiled; the fallback when the
/// `parallel` feature is off.
pub fn run_search_sequential(spec: &SearchSpec) -> Result<SearchOutcome> {
    let total = guarded_total(spec)?;
    let screen = CriterionScreen::new(spec.period);
    let ranges = partition_ranges(total, spec.worker_count.max(1) as u64 * 8);
    assert_partition(&ranges, total);
    let tally = ranges
        .iter()
        .map(|&(s, e)| scan_range(&screen, spec, s, e))
        .fold(Tally::default(), Tally::merge);
    Ok(finalize(spec, total, tally, false))
}

/// Data-parallel full enumeration over the same explicit ranges.
#[cfg(feature = "parallel")]
pub fn run_search_parallel(spec: &SearchSpec) -> Result<SearchOutcome> {
    let total = guarded_total(spec)?;
    let screen = CriterionScreen::new(spec.period);
    let workers = spec.worker_count.max(1);
    let ranges = partition_ranges(total, workers as u64 * 8);
    assert_partition(&ranges, total);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .expect("worker pool");
    let tally = pool.install(|| {
        ranges
            .par_iter()
            .map(|&(s, e)| scan_range(&screen, spec, s, e))
            .reduce(Tally::default, Tally::merge)
    });
    Ok(finalize(spec, total, tally, false))
}

/// Full enumeration with the best available driver.
pub fn run_search(spec: &SearchSpec) -> Result<SearchOutcome> {
    #[cfg(feature = "parallel")]
    {
        if spec.worker_count != 1 {
            return run_search_parallel(spec);
        }
    }
    run_search_sequential(spec)
}

/// Number of zero-sum candidates, counted combinatorially.
fn zero_sum_count(family: Family, period: u64) -> u64 {
    let signed = match family {
        Family::Erdos => period - 1,
        Family::Pm1Full => period,
    };
    if signed % 2 != 0 {
        return 0;
    }
    // C(signed, signed/2)
    let mut acc: u128 = 1;
    for i in 0..signed / 2 {
        acc = acc * (signed - i) as u128 / (i + 1) as u128;
    }
    acc as u64
}

/// Depth-first pruned sweep over divisor slices.
///
/// The value positions of a period-`N` candidate split into disjoint slices,
/// one per divisor `d` (the positions `d a` with `a` coprime to `N/d`), and
/// the divisor-`D` condition only reads slices with `d | D`. Enumerating
/// slices in ascending divisor order therefore allows each condition to be
/// applied the moment its last input slice is filled; every condition is
/// necessary, so the survivors are exactly the vanishing candidates of the
/// full space. Counts for divergent/nonvanishing are reconstructed
/// combinatorially.
pub fn run_search_pruned(spec: &SearchSpec) -> Result<SearchOutcome> {
    let bits = candidate_bits(spec.family, spec.period);
    if bits >= 64 {
        return Err(Error::SearchTooLarge { bits, limit: 63 });
    }
    let total = 1u64 << bits;
    let screen = CriterionScreen::new(spec.period);
    let n = spec.period;

    // condition schedule: matrix index -> position in ascending divisor order
    let mut matrix_after_slice: Vec<Option<usize>> = vec![None; screen.divisors.len()];
    for (mi, mat) in screen.matrices.iter().enumerate() {
        let pos = screen.divisors.iter().position(|&d| d == mat.divisor).expect("divisor present");
        matrix_after_slice[pos] = Some(mi);
    }

    let root_slice = &screen.slices[0];
    let root_len = root_slice.len();
    let roots: Vec<u64> = (0..1u64 << root_len).collect();

    let descend = |root_mask: u64| -> Tally {
        let mut tally = Tally::default();
        let mut values = vec![0i64; n as usize];
        if matches!(spec.family, Family::Erdos) {
            values[n as usize - 1] = 0;
        }
        for (bit, &pos) in root_slice.iter().enumerate() {
            values[pos] = if root_mask >> bit & 1 == 1 { 1 } else { -1 };
        }
        if let Some(mi) = matrix_after_slice[0] {
            if !screen.matrix_satisfied(&screen.matrices[mi], &values) {
                return tally;
            }
        }
        dfs_slices(&screen, spec, &matrix_after_slice, 1, &mut values, &mut tally);
        tally
    };

    #[cfg(feature = "parallel")]
    let tally = {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(spec.worker_count.max(1))
            .build()
            .expect("worker pool");
        pool.install(|| roots.par_iter().map(|&r| descend(r)).reduce(Tally::default, Tally::merge))
    };
    #[cfg(not(feature = "parallel"))]
    let tally = roots.iter().map(|&r| descend(r)).fold(Tally::default(), Tally::merge);

    let mut tally = tally;
    let zero_sum = zero_sum_count(spec.family, spec.period);
    tally.divergent = total - zero_sum;
    tally.nonvanishing = total - tally.divergent - tally.vanishing.len() as u64;
    Ok(finalize(spec, total, tally, true))
}

fn dfs_slices(
    screen: &CriterionScreen,
    spec: &SearchSpec,
    matrix_after_slice: &[Option<usize>],
    level: usize,
    values: &mut [i64],
    tally: &mut Tally,
) {
    if level == screen.slices.len() {
        if values.iter().sum::<i64>() != 0 {
            return;
        }
        let msums: Vec<i64> = screen
            .slices
            .iter()
            .map(|s| s.iter().map(|&p| values[p]).sum())
            .collect();
        for (_, row) in &screen.prime_rows {
            if msums.iter().zip(row).map(|(m, c)| m * c).sum::<i64>() != 0 {
                return;
            }
        }
        tally.vanishing.push(candidate_index(spec.family, values));
        return;
    }

    let slice = &screen.slices[level];
    // the slice of divisor N under the Erdos family is pinned to zero
    let pinned_zero = matches!(spec.family, Family::Erdos) && screen.divisors[level] == spec.period;
    let combos: u64 = if pinned_zero { 1 } else { 1u64 << slice.len() };
    for mask in 0..combos {
        if !pinned_zero {
            for (bit, &pos) in slice.iter().enumerate() {
                values[pos] = if mask >> bit & 1 == 1 { 1 } else { -1 };
            }
        }
        let ok = match matrix_after_slice[level] {
            Some(mi) => screen.matrix_satisfied(&screen.matrices[mi], values),
            None => true,
        };
        if ok {
            dfs_slices(screen, spec, matrix_after_slice, level + 1, values, tally);
        }
    }
    // restore zeros so parent levels see a clean buffer
    if !pinned_zero {
        for &pos in slice {
            values[pos] = 0;
        }
    }
}
