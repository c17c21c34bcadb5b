//! Covering congruence systems, the Chinese remainder construction over
//! the Gaussian integers, and the arithmetic progression none of whose
//! members is a prime element plus a power of 1+i.
//!
//! The construction: six primes pi_j whose multiplicative orders of 1+i
//! are 2, 3, 4, 8, 12, 24, paired with residues a_j mod those orders that
//! cover every integer. Solving x ≡ (1+i)^{a_j} mod pi_j (plus x ≡ 1 mod
//! 1+i) pins a residue class x0 mod M; subtracting any power (1+i)^k from
//! a member then lands on a multiple of the pi_j whose congruence covers
//! k, so the only representations a member can have are the trivial ones
//! where the prime IS one of the pi_j (up to units). `scan_obstruction`
//! tests exactly that, exhaustively, inside a disk.

use num_bigint::BigUint;
use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;

use crate::constants::lattice_count_norm;
use crate::density::u64_as_decimal_string;
use crate::error::{Error, Result};
use crate::factor::Effort;
use crate::gaussian::GInt;
use crate::orders::ord_one_plus_i;
use crate::primes::{self, PrimeRecord};

/// A residue class a mod m over the rational integers.
pub type Congruence = (u64, u64);

/// Check that every residue in [0, lcm) is hit by some class, one flat
/// bitmap pass. Returns the covering verdict and the first uncovered
/// residue when there is one.
pub fn verify_covering(system: &[Congruence]) -> (bool, Option<u64>) {
    let length = covering_lcm(system);
    let mut hit = vec![false; length as usize];
    for &(a, m) in system {
        let mut r = a % m;
        while r < length {
            hit[r as usize] = true;
            r += m;
        }
    }
    match hit.iter().position(|&h| !h) {
        None => (true, None),
        Some(w) => (false, Some(w as u64)),
    }
}

/// Independent covering check: count |union of classes| inside one period
/// by inclusion-exclusion over subsets, using that a subsystem of
/// congruences is solvable exactly when it is pairwise compatible, in
/// which case its solutions form one class mod the subsystem lcm.
pub fn verify_covering_inclusion_exclusion(system: &[Congruence]) -> bool {
    let length = covering_lcm(system);
    assert!(system.len() <= 20, "inclusion-exclusion is exponential");
    let mut covered = 0i128;
    for mask in 1u64..(1 << system.len()) {
        let chosen: Vec<Congruence> = system
            .iter()
            .enumerate()
            .filter(|&(idx, _)| mask >> idx & 1 == 1)
            .map(|(_, &c)| c)
            .collect();
        let compatible = chosen.iter().enumerate().all(|(i, &(a1, m1))| {
            chosen[..i]
                .iter()
                .all(|&(a2, m2)| (a1 % m1).abs_diff(a2 % m2) % m1.gcd(&m2) == 0)
        });
        if compatible {
            let subsystem_lcm = chosen.iter().fold(1u64, |l, &(_, m)| l.lcm(&m));
            let sign = if chosen.len() % 2 == 1 { 1 } else { -1 };
            covered += sign * i128::from(length / subsystem_lcm);
        }
    }
    covered == i128::from(length)
}

fn covering_lcm(system: &[Congruence]) -> u64 {
    assert!(!system.is_empty(), "a covering system needs congruences");
    let mut length = 1u64;
    for &(_, m) in system {
        assert!(m >= 2, "moduli must be at least 2");
        length = length.lcm(&m);
        assert!(length <= 100_000_000, "period too large to verify");
    }
    length
}

/// A congruence z ≡ residue mod modulus over the Gaussian integers, with
/// the residue stored in reduced (division-remainder) form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaussianCongruence {
    residue: GInt,
    modulus: GInt,
}

impl GaussianCongruence {
    pub fn new(residue: GInt, modulus: GInt) -> GaussianCongruence {
        assert!(!modulus.is_zero(), "modulus must be nonzero");
        let (_, reduced) = residue.divrem(&modulus);
        GaussianCongruence {
            residue: reduced,
            modulus,
        }
    }

    pub fn residue(&self) -> &GInt {
        &self.residue
    }

    pub fn modulus(&self) -> &GInt {
        &self.modulus
    }

    pub fn holds_for(&self, z: &GInt) -> bool {
        GInt::congruent(z, &self.residue, &self.modulus)
    }
}

/// Solve a system of congruences with pairwise coprime moduli: returns
/// (x0, M) with M the canonical associate of the product of the moduli
/// and x0 the division-remainder representative of the unique solution
/// class mod M.
pub fn gaussian_crt(congruences: &[GaussianCongruence]) -> Result<(GInt, GInt)> {
    let first = congruences.first().ok_or(Error::EmptyCongruenceSystem)?;
    let mut modulus = first.modulus.canonical_associate();
    let mut residue = first.residue.divrem(&modulus).1;
    for congruence in &congruences[1..] {
        let (g, u, _) = GInt::ext_gcd(&modulus, &congruence.modulus);
        if !g.is_unit() {
            return Err(Error::NonCoprimeModuli(
                modulus.clone(),
                congruence.modulus.clone(),
            ));
        }
        // Bezout gives u·modulus ≡ g, so u·g⁻¹ inverts modulus; then
        // x = residue + modulus·t with modulus·t ≡ (target − residue).
        let inverse = &u * &g.unit_inverse();
        let delta = &congruence.residue - &residue;
        let t = (&delta * &inverse).divrem(&congruence.modulus).1;
        residue = &residue + &(&modulus * &t);
        modulus = (&modulus * &congruence.modulus).canonical_associate();
        residue = residue.divrem(&modulus).1;
    }
    for congruence in congruences {
        debug_assert!(congruence.holds_for(&residue));
    }
    Ok((residue, modulus))
}

/// The assembled non-representable progression: every z ≡ x0 mod modulus
/// fails to be a prime element plus a power of 1+i, except through the
/// six exceptional primes themselves.
#[derive(Clone, Debug)]
pub struct Obstruction {
    pub x0: GInt,
    pub modulus: GInt,
    pub exception_primes: Vec<PrimeRecord>,
    pub pairs: Vec<(u64, u64, GInt)>,
}

impl Obstruction {
    /// Human-readable account of the modulus recomputation, including the
    /// conflicting value 990+990i that this construction is printed with
    /// elsewhere: that value fails the norm identity and cannot be the
    /// product of the listed primes.
    pub fn modulus_report(&self) -> String {
        let product = self
            .pairs
            .iter()
            .fold(GInt::one_plus_i(), |acc, (_, _, p)| &acc * p)
            .canonical_associate();
        let claimed = GInt::from_i64(990, 990);
        format!(
            "modulus recomputed from the prime list: {} (norm {}); \
             the value {} seen in print for this construction is not an associate \
             of the product — norm {} != {}",
            product,
            product.norm(),
            claimed,
            claimed.norm(),
            product.norm()
        )
    }
}

/// Assemble and verify the obstruction: orders checked against the
/// moduli, the residue system checked to be covering, then the seven
/// congruences merged by the Chinese remainder theorem.
pub fn build_obstruction() -> Result<Obstruction> {
    let effort = Effort::default();
    let triples: Vec<(u64, u64, GInt)> = vec![
        (0, 2, GInt::from_i64(2, 1)),
        (0, 3, GInt::from_i64(2, 3)),
        (1, 4, GInt::from_i64(1, 2)),
        (3, 8, GInt::from_i64(3, 0)),
        (7, 12, GInt::from_i64(3, 2)),
        (23, 24, GInt::from_i64(7, 0)),
    ];
    for (_, m, p) in &triples {
        let ord = ord_one_plus_i(p, &effort)?;
        if ord != *m {
            return Err(Error::InvalidInput(format!(
                "order of 1+i mod {p} is {ord}, expected {m}"
            )));
        }
    }
    let residue_system: Vec<Congruence> = triples.iter().map(|&(a, m, _)| (a, m)).collect();
    let (covers, witness) = verify_covering(&residue_system);
    if !covers {
        return Err(Error::InvalidInput(format!(
            "residue system leaves {} uncovered",
            witness.unwrap()
        )));
    }
    let mut congruences = vec![GaussianCongruence::new(GInt::one(), GInt::one_plus_i())];
    congruences.extend(
        triples
            .iter()
            .map(|(a, _, p)| GaussianCongruence::new(GInt::one_plus_i().pow(*a), p.clone())),
    );
    let (x0, modulus) = gaussian_crt(&congruences)?;
    assert!(&x0.norm() % BigUint::from(2u32) == BigUint::from(1u32), "x0 must have odd norm");
    Ok(Obstruction {
        x0,
        modulus,
        exception_primes: triples
            .iter()
            .map(|(_, _, p)| PrimeRecord::from_prime_element(p))
            .collect(),
        pairs: triples,
    })
}

/// The prime whose congruence covers the exponent k, in listed order.
pub fn covering_divisor(obs: &Obstruction, k: u64) -> Option<&GInt> {
    obs.pairs
        .iter()
        .find(|(a, m, _)| k % m == a % m)
        .map(|(_, _, p)| p)
}

/// For every exponent 1 <= k <= k_max, the covering prime for k must
/// divide x0 - (1+i)^k; this is the arithmetic heart of the obstruction.
pub fn obstruction_divisibility_check(obs: &Obstruction, k_max: u64) -> bool {
    assert!(k_max >= 24, "check must span a full covering period");
    (1..=k_max).all(|k| match covering_divisor(obs, k) {
        Some(p) => p.divides(&(&obs.x0 - &GInt::one_plus_i().pow(k))),
        None => false,
    })
}

/// All members z ≡ x0 mod modulus with house(z) <= b, sorted by norm then
/// coordinates. Errors when the disk is too small to contain even one
/// fundamental domain.
pub fn enumerate_class(obs: &Obstruction, b: f64) -> Result<Vec<GInt>> {
    let house_m = obs.modulus.house();
    if b < house_m {
        return Err(Error::ScanRadiusTooSmall {
            radius: b,
            house_m,
        });
    }
    let norm_bound = (b * b).floor() as i64;
    let (x0_re, x0_im) = obs
        .x0
        .to_i64_pair()
        .expect("obstruction base point fits i64");
    let (m_re, m_im) = obs
        .modulus
        .to_i64_pair()
        .expect("obstruction modulus fits i64");
    let t_radius = ((b + obs.x0.house()) / house_m).ceil() as i64 + 1;
    let mut members = Vec::new();
    for u in -t_radius..=t_radius {
        for v in -t_radius..=t_radius {
            let re = x0_re + u * m_re - v * m_im;
            let im = x0_im + u * m_im + v * m_re;
            if re * re + im * im <= norm_bound {
                members.push((re * re + im * im, re, im));
            }
        }
    }
    members.sort_unstable();
    Ok(members
        .into_iter()
        .map(|(_, re, im)| GInt::from_i64(re, im))
        .collect())
}

/// One representation found inside the obstructed class; legal only when
/// the prime is a unit multiple of one of the six exceptional primes.
#[derive(Clone, Debug, Serialize)]
pub struct ScanException {
    pub zeta: GInt,
    pub exponent: u64,
    pub prime: GInt,
}

/// An exponent ceiling that no representation inside house(z) <= b can
/// exceed — the power alone would already leave the reachable region —
/// padded by one covering period.
pub fn default_k_cap(obs: &Obstruction, b: f64) -> u64 {
    let reach = b + obs.x0.house();
    let mut k = 0u64;
    let mut norm_power = 2.0f64;
    while norm_power <= reach * reach {
        k += 1;
        norm_power *= 2.0;
    }
    k + 24
}

/// Exhaustively test every class member in the disk for representations
/// z = pi + (1+i)^k. Representations through unit multiples of the six
/// exceptional primes are collected and returned; any other prime found
/// is a hard error, since it would falsify the construction.
pub fn scan_obstruction(obs: &Obstruction, b: f64, k_cap: u64) -> Result<Vec<ScanException>> {
    let members = enumerate_class(obs, b)?;
    let per_member: Vec<Vec<ScanException>> = members
        .par_iter()
        .map(|zeta| {
            let mut found = Vec::new();
            for k in 1..=k_cap {
                let pi = zeta - &GInt::one_plus_i().pow(k);
                if primes::is_prime_element(&pi) {
                    if !obs
                        .exception_primes
                        .iter()
                        .any(|rec| pi.is_associate_of(&rec.generator))
                    {
                        return Err(Error::ObstructionViolated {
                            zeta: zeta.clone(),
                            prime: pi,
                            exponent: k,
                        });
                    }
                    found.push(ScanException {
                        zeta: zeta.clone(),
                        exponent: k,
                        prime: pi,
                    });
                }
            }
            Ok(found)
        })
        .collect::<Result<_>>()?;
    Ok(per_member.into_iter().flatten().collect())
}

/// How the obstructed class fills the disk, against the expected one part
/// in norm(modulus) of all points (one in norm/2 of the odd-norm points).
#[derive(Clone, Debug, Serialize)]
pub struct ClassDensityReport {
    pub radius: f64,
    #[serde(serialize_with = "u64_as_decimal_string")]
    pub members: u64,
    #[serde(serialize_with = "u64_as_decimal_string")]
    pub lattice: u64,
    #[serde(serialize_with = "u64_as_decimal_string")]
    pub odd_lattice: u64,
    pub class_ratio_times_norm: f64,
    pub odd_ratio_times_half_norm: f64,
}

pub fn class_density_report(obs: &Obstruction, b: f64) -> Result<ClassDensityReport> {
    let members = enumerate_class(obs, b)?;
    let norm_bound = (b * b).floor() as u64;
    let lattice = lattice_count_norm(norm_bound);
    // even norm ⟺ divisible by 1+i, a sublattice with norms 2m <= n
    let odd_lattice = lattice - lattice_count_norm(norm_bound / 2);
    let norm_m = obs
        .modulus
        .norm()
        .to_string()
        .parse::<f64>()
        .expect("modulus norm fits f64");
    let count = members.len() as f64;
    Ok(ClassDensityReport {
        radius: b,
        members: members.len() as u64,
        lattice,
        odd_lattice,
        class_ratio_times_norm: count / lattice as f64 * norm_m,
        odd_ratio_times_half_norm: count / odd_lattice as f64 * (norm_m / 2.0),
    })
}
