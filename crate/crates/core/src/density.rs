//! Representation-density scans: how much of the disk house(z) <= x is
//! covered by sums of a prime element and a power of 1+i.
//!
//! For a target z and radius x, `r_x` counts the pairs (pi, k) with
//! z = pi + (1+i)^k, pi a prime element of house at most x, and
//! 1 <= k <= l_max(x). A scan aggregates r over every z in the disk and
//! reports the moments sum r, sum r^2, and the count of representable z,
//! whose ratio to the full lattice count is the observed density. The
//! Cauchy-Schwarz inequality (sum r)^2 <= (sum r^2)(number represented)
//! turns the moments into a density lower bound, and the scan keeps all
//! three as exact integers so that inequality can be checked exactly.
//!
//! The default scan generates representations forward (mark pi + (1+i)^k
//! for every prime in the disk); a per-target evaluator is retained as an
//! independent oracle and the two must agree verbatim.

use std::collections::{HashMap, HashSet};

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::constants::{self, lattice_count};
use crate::error::{Error, Result};
use crate::gaussian::GInt;
use crate::primes;

/// Largest k >= 1 with house((1+i)^k) = sqrt(2)^k <= sqrt(x)/2, or 0 when
/// even k = 1 overshoots. Powers of two are exact in f64, so the
/// comparison 2^k <= x/4 carries no rounding risk.
pub fn l_max(x: f64) -> u64 {
    assert!(x > 0.0, "disk radius must be positive");
    let mut k = 0u64;
    let mut next_power = 2.0f64;
    while next_power <= x / 4.0 {
        k += 1;
        next_power *= 2.0;
    }
    k
}

/// Number of representations z = pi + (1+i)^k with house(pi) <= x and
/// 1 <= k <= l_max(x).
pub fn r_x(zeta: &GInt, x: f64) -> u64 {
    r_x_with(zeta, x, false)
}

/// As [`r_x`], optionally admitting the exponent k = 0 (so pi + 1 counts
/// as a representation); the default convention starts at k = 1.
pub fn r_x_with(zeta: &GInt, x: f64, include_zero_exponent: bool) -> u64 {
    assert!(x >= 4.0, "representation counts need x >= 4");
    let norm_bound = BigUint::from(primes::norm_bound_for_house(x));
    let k_lo = if include_zero_exponent { 0 } else { 1 };
    let mut count = 0;
    for k in k_lo..=l_max(x) {
        let pi = zeta - &GInt::one_plus_i().pow(k);
        if pi.norm() <= norm_bound && primes::is_prime_element(&pi) {
            count += 1;
        }
    }
    count
}

pub(crate) fn u64_as_decimal_string<S: Serializer>(
    v: &u64,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// Exact moments of one scan. The integer fields serialize as decimal
/// strings so emitted reports stay lossless; the two ratios are floats
/// derived from them.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DensityReport {
    pub x: f64,
    #[serde(serialize_with = "u64_as_decimal_string")]
    pub l_max: u64,
    #[serde(serialize_with = "u64_as_decimal_string")]
    pub sum_r: u64,
    #[serde(serialize_with = "u64_as_decimal_string")]
    pub sum_r2: u64,
    #[serde(serialize_with = "u64_as_decimal_string")]
    pub sum_eta: u64,
    #[serde(serialize_with = "u64_as_decimal_string")]
    pub even_norm_distinct: u64,
    #[serde(serialize_with = "u64_as_decimal_string")]
    pub lattice: u64,
    pub eta_density: f64,
    pub cs_bound: f64,
}

impl DensityReport {
    fn from_counts(x: f64, l: u64, counts: &HashMap<(i64, i64), u64>) -> DensityReport {
        let mut sum_r = 0u64;
        let mut sum_r2 = 0u64;
        let mut even_norm_distinct = 0u64;
        for (&(a, b), &r) in counts {
            sum_r += r;
            sum_r2 += r * r;
            if (a + b) % 2 == 0 {
                even_norm_distinct += 1;
            }
        }
        let sum_eta = counts.len() as u64;
        let lattice = lattice_count(x);
        DensityReport {
            x,
            l_max: l,
            sum_r,
            sum_r2,
            sum_eta,
            even_norm_distinct,
            lattice,
            eta_density: sum_eta as f64 / lattice as f64,
            cs_bound: (sum_r as f64).powi(2) / (sum_r2 as f64 * lattice as f64),
        }
    }
}

fn exponent_powers(x: f64, include_zero_exponent: bool) -> (u64, Vec<(i64, i64)>) {
    let k_lo = if include_zero_exponent { 0 } else { 1 };
    let powers = (k_lo..=l_max(x))
        .map(|k| {
            GInt::one_plus_i()
                .pow(k)
                .to_i64_pair()
                .expect("power of 1+i exceeds i64 at feasible scan radii")
        })
        .collect();
    (k_lo, powers)
}

/// Scan the disk house(z) <= x by forward generation: every prime element
/// in the disk is translated by every admissible power of 1+i, and the
/// landing points inside the disk are tallied exactly.
pub fn density_scan(x: f64) -> DensityReport {
    density_scan_with(x, false)
}

/// As [`density_scan`], optionally admitting the exponent k = 0.
pub fn density_scan_with(x: f64, include_zero_exponent: bool) -> DensityReport {
    assert!(x >= 16.0, "scans need x >= 16");
    let n = primes::norm_bound_for_house(x) as i64;
    let (k_lo, powers) = exponent_powers(x, include_zero_exponent);
    let disk_primes = primes::primes_in_disk(x);
    // Integer tallies are schedule-independent, so chunked maps can be
    // merged in any order; chunk order is kept anyway for determinism by
    // construction rather than by argument.
    let chunk_counts: Vec<HashMap<(i64, i64), u64>> = disk_primes
        .par_chunks(4096)
        .map(|chunk| {
            let mut local: HashMap<(i64, i64), u64> = HashMap::new();
            for pi in chunk {
                let (a, b) = pi.to_i64_pair().expect("disk prime exceeds i64");
                let ramified = a.abs() == 1 && b.abs() == 1;
                for (offset, &(pa, pb)) in powers.iter().enumerate() {
                    let k = k_lo + offset as u64;
                    let (za, zb) = (a + pa, b + pb);
                    if za * za + zb * zb <= n {
                        // odd-norm law: translating an unramified prime by
                        // (1+i)^k with k >= 2 preserves its odd norm
                        assert!(
                            k < 2 || ramified || (za + zb) % 2 != 0,
                            "parity law violated at {za}+{zb}i"
                        );
                        *local.entry((za, zb)).or_insert(0) += 1;
                    }
                }
            }
            local
        })
        .collect();
    let mut counts: HashMap<(i64, i64), u64> = HashMap::new();
    for local in chunk_counts {
        for (key, r) in local {
            *counts.entry(key).or_insert(0) += r;
        }
    }
    DensityReport::from_counts(x, l_max(x), &counts)
}

/// Independent scan: evaluate r for every lattice point of the disk
/// directly, with primality replaced by membership in a precomputed set
/// of the disk's prime elements. Must agree verbatim with the forward
/// generation.
pub fn density_scan_oracle(x: f64) -> DensityReport {
    assert!(x >= 16.0, "scans need x >= 16");
    let n = primes::norm_bound_for_house(x) as i64;
    let (k_lo, powers) = exponent_powers(x, false);
    let prime_set: HashSet<(i64, i64)> = primes::primes_in_disk(x)
        .iter()
        .map(|p| p.to_i64_pair().expect("disk prime exceeds i64"))
        .collect();
    let radius = (n as u64).isqrt() as i64;
    let mut counts: HashMap<(i64, i64), u64> = HashMap::new();
    for a in -radius..=radius {
        let remaining = n - a * a;
        if remaining < 0 {
            continue;
        }
        let b_max = (remaining as u64).isqrt() as i64;
        for b in -b_max..=b_max {
            let mut r = 0u64;
            for (offset, &(pa, pb)) in powers.iter().enumerate() {
                let _k = k_lo + offset as u64;
                let candidate = (a - pa, b - pb);
                if candidate.0 * candidate.0 + candidate.1 * candidate.1 <= n
                    && prime_set.contains(&candidate)
                {
                    r += 1;
                }
            }
            if r > 0 {
                counts.insert((a, b), r);
            }
        }
    }
    DensityReport::from_counts(x, l_max(x), &counts)
}

/// Number of ordered pairs (pi1, pi2) of prime elements of house <= x
/// with pi1 - pi2 = zeta; `distinct` excludes the self-pairs that arise
/// when zeta = 0. Errors when house(zeta) > 2x, where no pair can exist
/// and the query is taken as a caller mistake.
pub fn prime_pair_count(zeta: &GInt, x: f64, distinct: bool) -> Result<u64> {
    assert!(x >= 2.0);
    if zeta.house() > 2.0 * x {
        return Err(Error::InvalidInput(format!(
            "house({zeta}) exceeds the pair diameter 2x = {}",
            2.0 * x
        )));
    }
    let (dz_re, dz_im) = zeta
        .to_i64_pair()
        .ok_or_else(|| Error::InvalidInput(format!("{zeta} out of range")))?;
    let disk_primes = primes::primes_in_disk(x);
    let prime_set: HashSet<(i64, i64)> = disk_primes
        .iter()
        .map(|p| p.to_i64_pair().expect("disk prime exceeds i64"))
        .collect();
    let mut count = 0u64;
    for pi2 in &prime_set {
        let pi1 = (pi2.0 + dz_re, pi2.1 + dz_im);
        if prime_set.contains(&pi1) && !(distinct && pi1 == *pi2) {
            count += 1;
        }
    }
    Ok(count)
}

/// One sample of the sieve-corridor check.
#[derive(Clone, Debug, Serialize)]
pub struct SieveCheckRow {
    pub zeta: GInt,
    #[serde(serialize_with = "u64_as_decimal_string")]
    pub pairs: u64,
    pub ratio: f64,
    pub within_kappa: bool,
}

/// The canonical sample family (1+i)^j - (1+i)^i for 1 <= i < j <= l_max(x):
/// nonzero differences of distinct powers, all of house well below sqrt(x).
pub fn power_difference_samples(x: f64) -> Vec<GInt> {
    let l = l_max(x);
    let mut samples = Vec::new();
    for i in 1..l {
        for j in i + 1..=l {
            samples.push(&GInt::one_plus_i().pow(j) - &GInt::one_plus_i().pow(i));
        }
    }
    samples
}

/// For each sample zeta, count prime pairs at distance zeta and compare
/// count * log^2 x / x^2 against the admissible sieve constant. Exceeding
/// the constant is recorded, not fatal: the bound is asymptotic and a
/// finite radius carries an unquantified error term.
pub fn sieve_bound_check(x: f64, samples: &[GInt]) -> Vec<SieveCheckRow> {
    let sqrt_x = x.sqrt();
    for sample in samples {
        assert!(
            sample.house() <= sqrt_x,
            "sample {sample} violates the house <= sqrt(x) hypothesis"
        );
    }
    let prime_set: HashSet<(i64, i64)> = primes::primes_in_disk(x)
        .iter()
        .map(|p| p.to_i64_pair().expect("disk prime exceeds i64"))
        .collect();
    let kappa = constants::kappa_qi();
    let scale = x.ln().powi(2) / (x * x);
    samples
        .iter()
        .map(|zeta| {
            let (dz_re, dz_im) = zeta.to_i64_pair().expect("sample exceeds i64");
            let mut pairs = 0u64;
            for pi2 in &prime_set {
                let pi1 = (pi2.0 + dz_re, pi2.1 + dz_im);
                if prime_set.contains(&pi1) && pi1 != *pi2 {
                    pairs += 1;
                }
            }
            let ratio = pairs as f64 * scale;
            SieveCheckRow {
                zeta: zeta.clone(),
                pairs,
                ratio,
                within_kappa: ratio <= kappa,
            }
        })
        .collect()
}
