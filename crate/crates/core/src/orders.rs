//! Factorization of (1+i)^e - 1 and the multiplicative order of 1+i.
//!
//! The order of 1+i modulo a Gaussian prime p (the least e with
//! (1+i)^e ≡ 1) drives the whole series machinery: p divides (1+i)^k - 1
//! exactly when the order divides k. Factorizations go through the
//! cyclotomic decomposition x^e - 1 = prod_{d|e} Phi_d(x): each Phi_d(1+i)
//! is much smaller than the full value and concentrates the primes of
//! order d, up to rare exceptions (3 divides Phi_24(1+i) = 21 but has
//! order 8) which exact-order filtering removes. A `Factorizer` memoizes
//! per-exponent results and can persist them to an append-only cache file.

use std::collections::HashMap;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::factor::{divisors, factor_natural, mobius, sum_of_two_squares, Effort};
use crate::gaussian::GInt;
use crate::primes::{is_prime_element, PrimeRecord};

/// (1+i)^e - 1, the value whose prime divisors have order dividing e.
pub fn power_minus_one(e: u64) -> GInt {
    assert!(e >= 1, "exponent must be at least 1");
    GInt::one_plus_i().pow(e) - GInt::one()
}

/// Phi_d evaluated at 1+i, computed exactly from the Moebius product
/// Phi_d(x) = prod_{c|d} (x^c - 1)^{mu(d/c)} with exact division.
pub fn cyclotomic_value(d: u64) -> GInt {
    assert!(d >= 1, "index must be at least 1");
    let mut num = GInt::one();
    let mut den = GInt::one();
    for c in divisors(d) {
        match mobius(d / c) {
            1 => num = &num * &power_minus_one(c),
            -1 => den = &den * &power_minus_one(c),
            _ => {}
        }
    }
    exact_div(&num, &den)
}

fn exact_div(a: &GInt, b: &GInt) -> GInt {
    let (q, r) = a.divrem(b);
    assert!(r.is_zero(), "{a} is not divisible by {b}");
    q
}

/// pi-adic valuation: the exact power of `prime` dividing `z`.
pub fn valuation(z: &GInt, prime: &GInt) -> u32 {
    assert!(!z.is_zero(), "valuation of zero is infinite");
    let mut v = 0;
    let mut cur = z.clone();
    loop {
        let (q, r) = cur.divrem(prime);
        if !r.is_zero() {
            return v;
        }
        v += 1;
        cur = q;
    }
}

/// Canonical Gaussian prime divisors of z with multiplicities, via the
/// factorization of norm(z): the rational prime 2 lifts to 1+i (ramified),
/// p ≡ 1 mod 4 splits through a two-square decomposition with the
/// multiplicity divided between the conjugates by valuation, and
/// p ≡ 3 mod 4 stays inert (its squared norm contribution halves).
/// The flag is false when a composite cofactor of the norm resisted the
/// effort budget; the returned primes are still exact divisors.
pub fn gaussian_prime_divisors(z: &GInt, effort: &Effort) -> (Vec<(PrimeRecord, u32)>, bool) {
    assert!(!z.is_zero(), "cannot factor zero");
    if z.is_unit() {
        return (Vec::new(), true);
    }
    let (rational, complete) = factor_natural(&z.norm(), effort);
    let mut out = Vec::new();
    for (p, m) in rational {
        if p == BigUint::from(2u32) {
            // v_2(norm(z)) equals the (1+i)-adic valuation of z.
            out.push((ramified_record(), m));
        } else if &p % 4u32 == BigUint::from(3u32) {
            debug_assert!(m % 2 == 0, "inert prime with odd norm multiplicity");
            out.push((inert_record(&p), m / 2));
        } else {
            let (a, b) = sum_of_two_squares(&p);
            let pi = GInt::new(BigInt::from(a), BigInt::from(b));
            let v = valuation(z, &pi);
            if v > 0 {
                out.push((split_record(pi.clone(), &p), v));
            }
            if m - v > 0 {
                out.push((split_record(pi.conj().canonical_associate(), &p), m - v));
            }
        }
    }
    out.sort_by_key(|(rec, _)| rec.sort_key());
    (out, complete)
}

fn ramified_record() -> PrimeRecord {
    PrimeRecord {
        generator: GInt::one_plus_i(),
        norm: BigUint::from(2u32),
        degree: 1,
    }
}

fn inert_record(p: &BigUint) -> PrimeRecord {
    PrimeRecord {
        generator: GInt::new(BigInt::from(p.clone()), BigInt::from(0)),
        norm: p * p,
        degree: 2,
    }
}

fn split_record(generator: GInt, p: &BigUint) -> PrimeRecord {
    PrimeRecord {
        generator,
        norm: p.clone(),
        degree: 1,
    }
}

/// Least d dividing e with (1+i)^d ≡ 1 mod `prime`, or None if even d = e
/// fails. When `prime` divides (1+i)^e - 1 this is its exact order.
pub fn order_dividing(prime: &GInt, e: u64) -> Option<u64> {
    let base = GInt::one_plus_i();
    divisors(e)
        .into_iter()
        .find(|&d| GInt::congruent(&base.pow_mod(d, prime), &GInt::one(), prime))
}

/// Exact multiplicative order of 1+i modulo a Gaussian prime, by factoring
/// the residue-field group order norm(p) - 1 and descending through its
/// prime divisors.
pub fn ord_one_plus_i(prime: &GInt, effort: &Effort) -> Result<u64> {
    if !is_prime_element(prime) {
        return Err(Error::InvalidInput(format!(
            "{prime} is not a Gaussian prime"
        )));
    }
    if prime.is_associate_of(&GInt::one_plus_i()) {
        // (1+i)^k ≡ 0, never 1, modulo the ramified prime.
        return Err(Error::RamifiedOrder(prime.clone()));
    }
    let group = prime.norm() - BigUint::one();
    let (factors, complete) = factor_natural(&group, effort);
    if !complete {
        return Err(Error::IncompleteGroupOrder(prime.clone()));
    }
    let base = GInt::one_plus_i();
    let one = GInt::one();
    let mut t = group;
    for (q, m) in factors {
        for _ in 0..m {
            let candidate = &t / &q;
            if GInt::congruent(&base.pow_mod_bits(&candidate, prime), &one, prime) {
                t = candidate;
            } else {
                break;
            }
        }
    }
    t.to_u64().ok_or_else(|| Error::OrderTooLarge(prime.clone()))
}

/// One classified prime divisor: the ideal plus the exact order of 1+i.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderRecord {
    pub prime: PrimeRecord,
    pub order: u64,
}

/// A value together with its (possibly partial) prime factorization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactoredValue {
    pub value: GInt,
    pub factors: Vec<(PrimeRecord, u32)>,
    pub complete: bool,
}

impl FactoredValue {
    /// True iff value = unit × prod p^m over the recorded factors.
    pub fn reconstructs(&self) -> bool {
        let mut rest = self.value.clone();
        for (rec, m) in &self.factors {
            for _ in 0..*m {
                let (q, r) = rest.divrem(&rec.generator);
                if !r.is_zero() {
                    return false;
                }
                rest = q;
            }
        }
        rest.is_unit()
    }
}

/// Append-only persistence for factorizations of (1+i)^e - 1, one record
/// per line as `e;complete;re,im,mult|re,im,mult|...`. Duplicate exponents
/// are legal; the last line wins, so refinements are plain appends.
#[derive(Debug)]
pub struct FactorCache {
    path: PathBuf,
    entries: HashMap<u64, FactoredValue>,
}

impl FactorCache {
    pub fn open(path: impl AsRef<Path>) -> Result<FactorCache> {
        let path = path.as_ref().to_path_buf();
        let mut entries = HashMap::new();
        if path.exists() {
            let text = fs::read_to_string(&path)?;
            for (idx, line) in text.lines().enumerate() {
                if line.trim().is_empty() {
                    continue;
                }
                let (e, fv) = parse_cache_line(line).map_err(|reason| {
                    Error::MalformedCache {
                        line: idx + 1,
                        reason,
                    }
                })?;
                entries.insert(e, fv);
            }
        }
        Ok(FactorCache { path, entries })
    }

    pub fn get(&self, e: u64) -> Option<&FactoredValue> {
        self.entries.get(&e)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    fn append(&mut self, e: u64, fv: &FactoredValue) -> Result<()> {
        let mut file = fs::OpenOptions::new()
            .create(true)
            .append(true)
            .open(&self.path)?;
        writeln!(file, "{}", format_cache_line(e, fv))?;
        self.entries.insert(e, fv.clone());
        Ok(())
    }
}

fn format_cache_line(e: u64, fv: &FactoredValue) -> String {
    let factors = fv
        .factors
        .iter()
        .map(|(rec, m)| format!("{},{},{}", rec.generator.re(), rec.generator.im(), m))
        .collect::<Vec<_>>()
        .join("|");
    format!("{};{};{}", e, if fv.complete { 1 } else { 0 }, factors)
}

fn parse_cache_line(line: &str) -> std::result::Result<(u64, FactoredValue), String> {
    let mut parts = line.splitn(3, ';');
    let e: u64 = parts
        .next()
        .ok_or("missing exponent")?
        .parse()
        .map_err(|_| "exponent is not a natural number".to_string())?;
    if e == 0 {
        return Err("exponent must be at least 1".into());
    }
    let complete = match parts.next().ok_or("missing completeness flag")? {
        "0" => false,
        "1" => true,
        other => return Err(format!("completeness flag must be 0 or 1, got {other:?}")),
    };
    let factor_text = parts.next().ok_or("missing factor list")?;
    let mut factors = Vec::new();
    for piece in factor_text.split('|').filter(|p| !p.is_empty()) {
        let comps: Vec<&str> = piece.split(',').collect();
        if comps.len() != 3 {
            return Err(format!("factor {piece:?} is not re,im,mult"));
        }
        let re: BigInt = comps[0]
            .parse()
            .map_err(|_| format!("bad real component {:?}", comps[0]))?;
        let im: BigInt = comps[1]
            .parse()
            .map_err(|_| format!("bad imaginary component {:?}", comps[1]))?;
        let mult: u32 = comps[2]
            .parse()
            .map_err(|_| format!("bad multiplicity {:?}", comps[2]))?;
        if mult == 0 {
            return Err("zero multiplicity".into());
        }
        let g = GInt::new(re, im);
        if !g.is_canonical() {
            return Err(format!("generator {g} is not canonical"));
        }
        if !is_prime_element(&g) {
            return Err(format!("generator {g} is not prime"));
        }
        factors.push((PrimeRecord::from_prime_element(&g), mult));
    }
    factors.sort_by_key(|(rec, _)| rec.sort_key());
    let fv = FactoredValue {
        value: power_minus_one(e),
        factors,
        complete,
    };
    if complete && !fv.reconstructs() {
        return Err(format!(
            "complete entry for exponent {e} does not reconstruct (1+i)^{e}-1"
        ));
    }
    Ok((e, fv))
}

/// Memoizing factorization engine for the values (1+i)^e - 1 and their
/// cyclotomic pieces, with optional file-backed persistence.
pub struct Factorizer {
    effort: Effort,
    phi: HashMap<u64, FactoredValue>,
    full: HashMap<u64, FactoredValue>,
    cache: Option<FactorCache>,
}

impl Factorizer {
    pub fn new(effort: Effort) -> Factorizer {
        Factorizer {
            effort,
            phi: HashMap::new(),
            full: HashMap::new(),
            cache: None,
        }
    }

    /// Like `new`, but backed by a cache file (created on first write).
    /// Complete cached entries are reused; incomplete ones are recomputed
    /// under the current budget and re-appended.
    pub fn with_cache(effort: Effort, path: impl AsRef<Path>) -> Result<Factorizer> {
        let cache = FactorCache::open(path)?;
        Ok(Factorizer {
            effort,
            phi: HashMap::new(),
            full: HashMap::new(),
            cache: Some(cache),
        })
    }

    pub fn effort(&self) -> &Effort {
        &self.effort
    }

    /// Factor all cyclotomic values Phi_d(1+i) for d ≤ emax in parallel;
    /// later per-exponent queries are then memo lookups.
    pub fn warm_up(&mut self, emax: u64) {
        let missing: Vec<u64> = (1..=emax).filter(|d| !self.phi.contains_key(d)).collect();
        let seeds: HashMap<u64, FactoredValue> = missing
            .iter()
            .filter_map(|&d| self.complete_full_entry(d).map(|fv| (d, fv)))
            .collect();
        let effort = self.effort.clone();
        let computed: Vec<(u64, FactoredValue)> = missing
            .into_par_iter()
            .map(|d| (d, compute_phi(d, seeds.get(&d), &effort)))
            .collect();
        self.phi.extend(computed);
    }

    /// A complete factorization of (1+i)^d - 1 already at hand (memo or
    /// cache), used to read off cyclotomic factors by valuation instead of
    /// refactoring.
    fn complete_full_entry(&self, d: u64) -> Option<FactoredValue> {
        if let Some(fv) = self.full.get(&d) {
            if fv.complete {
                return Some(fv.clone());
            }
        }
        if let Some(cache) = &self.cache {
            if let Some(fv) = cache.get(d) {
                if fv.complete {
                    return Some(fv.clone());
                }
            }
        }
        None
    }

    /// Factorization of Phi_e(1+i).
    pub fn phi_factors(&mut self, e: u64) -> FactoredValue {
        if let Some(fv) = self.phi.get(&e) {
            return fv.clone();
        }
        let fv = compute_phi(e, self.complete_full_entry(e).as_ref(), &self.effort);
        self.phi.insert(e, fv.clone());
        fv
    }

    /// Factorization of (1+i)^e - 1, assembled from the cyclotomic pieces
    /// over the divisors of e; complete results are verified to
    /// reconstruct the value exactly and persisted to the cache.
    pub fn full_factorization(&mut self, e: u64) -> Result<FactoredValue> {
        if let Some(fv) = self.full.get(&e) {
            return Ok(fv.clone());
        }
        if let Some(fv) = self.cache.as_ref().and_then(|c| c.get(e)) {
            if fv.complete {
                let fv = fv.clone();
                self.full.insert(e, fv.clone());
                return Ok(fv);
            }
        }
        let mut merged: HashMap<GInt, (PrimeRecord, u32)> = HashMap::new();
        let mut complete = true;
        for d in divisors(e) {
            let phi = self.phi_factors(d);
            complete &= phi.complete;
            for (rec, m) in phi.factors {
                merged
                    .entry(rec.generator.clone())
                    .and_modify(|(_, acc)| *acc += m)
                    .or_insert((rec, m));
            }
        }
        let mut factors: Vec<(PrimeRecord, u32)> = merged.into_values().collect();
        factors.sort_by_key(|(rec, _)| rec.sort_key());
        let fv = FactoredValue {
            value: power_minus_one(e),
            factors,
            complete,
        };
        assert!(
            !fv.complete || fv.reconstructs(),
            "complete factorization of (1+i)^{e}-1 failed to reconstruct"
        );
        if let Some(cache) = &mut self.cache {
            cache.append(e, &fv)?;
        }
        self.full.insert(e, fv.clone());
        Ok(fv)
    }

    /// Distinct prime divisors of (1+i)^e - 1 with their exact orders,
    /// sorted by (order, norm, re, im).
    pub fn order_records(&mut self, e: u64) -> Result<(Vec<OrderRecord>, bool)> {
        let fv = self.full_factorization(e)?;
        let mut records: Vec<OrderRecord> = fv
            .factors
            .iter()
            .map(|(rec, _)| {
                let order = order_dividing(&rec.generator, e)
                    .expect("every divisor of (1+i)^e - 1 has order dividing e");
                OrderRecord {
                    prime: rec.clone(),
                    order,
                }
            })
            .collect();
        records.sort_by_key(|r| {
            let (n, re, im) = r.prime.sort_key();
            (r.order, n, re, im)
        });
        Ok((records, fv.complete))
    }

    /// All prime ideals for which 1+i has order exactly e. Primes are read
    /// off Phi_e(1+i) and filtered by exact order, which drops the
    /// exceptional divisors with smaller order.
    pub fn primes_of_order(&mut self, e: u64) -> (Vec<PrimeRecord>, bool) {
        let phi = self.phi_factors(e);
        let mut out: Vec<PrimeRecord> = phi
            .factors
            .iter()
            .filter(|(rec, _)| order_dividing(&rec.generator, e) == Some(e))
            .map(|(rec, _)| rec.clone())
            .collect();
        out.sort_by_key(PrimeRecord::sort_key);
        (out, phi.complete)
    }

    /// Primes dividing Phi_e(1+i) whose order is strictly smaller than e
    /// (e.g. 3 divides Phi_24(1+i) = 21 with order 8). Returned with their
    /// true orders so callers can surface them.
    pub fn exceptional_order_primes(&mut self, e: u64) -> Vec<(PrimeRecord, u64)> {
        let phi = self.phi_factors(e);
        phi.factors
            .iter()
            .filter_map(|(rec, _)| {
                let order = order_dividing(&rec.generator, e)
                    .expect("every divisor of Phi_e(1+i) has order dividing e");
                (order != e).then(|| (rec.clone(), order))
            })
            .collect()
    }
}

fn compute_phi(d: u64, seed: Option<&FactoredValue>, effort: &Effort) -> FactoredValue {
    let value = cyclotomic_value(d);
    if value.is_unit() {
        return FactoredValue {
            value,
            factors: Vec::new(),
            complete: true,
        };
    }
    if let Some(full) = seed {
        // The primes of Phi_d all appear in the full factorization of
        // (1+i)^d - 1; read their multiplicities in Phi_d off by valuation.
        let mut factors: Vec<(PrimeRecord, u32)> = full
            .factors
            .iter()
            .filter_map(|(rec, _)| {
                let v = valuation(&value, &rec.generator);
                (v > 0).then(|| (rec.clone(), v))
            })
            .collect();
        factors.sort_by_key(|(rec, _)| rec.sort_key());
        let fv = FactoredValue {
            value,
            factors,
            complete: true,
        };
        debug_assert!(fv.reconstructs());
        return fv;
    }
    let (factors, complete) = gaussian_prime_divisors(&value, effort);
    FactoredValue {
        value,
        factors,
        complete,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(re: i64, im: i64) -> GInt {
        GInt::from_i64(re, im)
    }

    fn default_factorizer() -> Factorizer {
        Factorizer::new(Effort::default())
    }

    #[test]
    fn power_minus_one_examples() {
        assert_eq!(power_minus_one(1), g(0, 1));
        assert_eq!(power_minus_one(4), g(-5, 0));
        assert_eq!(power_minus_one(8), g(15, 0));
    }

    #[test]
    fn cyclotomic_values() {
        assert_eq!(cyclotomic_value(1), g(0, 1));
        assert_eq!(cyclotomic_value(2), g(2, 1));
        assert_eq!(cyclotomic_value(3), g(2, 3));
        assert_eq!(cyclotomic_value(4), g(1, 2));
        assert!(cyclotomic_value(6).is_unit()); // x^2 - x + 1 at 1+i
        assert_eq!(cyclotomic_value(8), g(-3, 0));
        assert_eq!(cyclotomic_value(12), g(-3, -2));
        assert_eq!(cyclotomic_value(24), g(21, 0));
    }

    #[test]
    fn cyclotomic_product_recovers_power_minus_one() {
        for e in 1..=40u64 {
            let mut prod = GInt::one();
            for d in divisors(e) {
                prod = &prod * &cyclotomic_value(d);
            }
            assert_eq!(prod, power_minus_one(e), "e = {e}");
        }
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(valuation(&g(15, 0), &g(3, 0)), 1);
        assert_eq!(valuation(&g(9, 0), &g(3, 0)), 2);
        assert_eq!(valuation(&g(15, 0), &g(2, 1)), 1);
        assert_eq!(valuation(&g(7, 0), &g(3, 0)), 0);
    }

    #[test]
    fn prime_divisor_examples() {
        let effort = Effort::default();
        let (unit, complete) = gaussian_prime_divisors(&g(0, 1), &effort);
        assert!(unit.is_empty() && complete);

        let (fs, complete) = gaussian_prime_divisors(&g(-5, 0), &effort);
        assert!(complete);
        let gens: Vec<(GInt, u32)> = fs.iter().map(|(r, m)| (r.generator.clone(), *m)).collect();
        assert_eq!(gens, vec![(g(1, 2), 1), (g(2, 1), 1)]);

        let (fs, complete) = gaussian_prime_divisors(&g(15, 0), &effort);
        assert!(complete);
        let gens: Vec<(GInt, u32)> = fs.iter().map(|(r, m)| (r.generator.clone(), *m)).collect();
        assert_eq!(gens, vec![(g(1, 2), 1), (g(2, 1), 1), (g(3, 0), 1)]);

        // ramified power: 4 = -((1+i))^4
        let (fs, complete) = gaussian_prime_divisors(&g(4, 0), &effort);
        assert!(complete);
        assert_eq!(fs.len(), 1);
        assert_eq!(fs[0].0.generator, g(1, 1));
        assert_eq!(fs[0].1, 4);
    }

    #[test]
    fn prime_divisors_reconstruct_small_values() {
        let effort = Effort::default();
        for re in -7i64..=7 {
            for im in -7i64..=7 {
                let z = g(re, im);
                if z.is_zero() {
                    continue;
                }
                let (fs, complete) = gaussian_prime_divisors(&z, &effort);
                assert!(complete);
                let fv = FactoredValue {
                    value: z.clone(),
                    factors: fs,
                    complete,
                };
                assert!(fv.reconstructs(), "z = {z}");
            }
        }
    }

    #[test]
    fn order_table() {
        let effort = Effort::default();
        for (prime, expected) in [
            (g(2, 1), 2),
            (g(2, 3), 3),
            (g(1, 2), 4),
            (g(3, 0), 8),
            (g(3, 2), 12),
            (g(7, 0), 24),
        ] {
            assert_eq!(ord_one_plus_i(&prime, &effort).unwrap(), expected);
            assert_eq!(order_dividing(&prime, expected), Some(expected));
        }
    }

    #[test]
    fn order_errors() {
        let effort = Effort::default();
        assert!(matches!(
            ord_one_plus_i(&g(1, 1), &effort),
            Err(Error::RamifiedOrder(_))
        ));
        assert!(matches!(
            ord_one_plus_i(&g(-1, 1), &effort),
            Err(Error::RamifiedOrder(_))
        ));
        assert!(matches!(
            ord_one_plus_i(&g(5, 0), &effort),
            Err(Error::InvalidInput(_))
        ));
    }

    /// Order semantics: (1+i)^ord ≡ 1, no proper divisor of ord works, and
    /// ord divides the residue-field group order norm - 1.
    #[test]
    fn order_divides_group_order() {
        let effort = Effort::default();
        let base = GInt::one_plus_i();
        for rec in crate::primes::prime_ideals_up_to(300) {
            if rec.generator == g(1, 1) {
                continue;
            }
            let ord = ord_one_plus_i(&rec.generator, &effort).unwrap();
            assert!(GInt::congruent(
                &base.pow_mod(ord, &rec.generator),
                &GInt::one(),
                &rec.generator
            ));
            for d in divisors(ord) {
                if d < ord {
                    assert!(!GInt::congruent(
                        &base.pow_mod(d, &rec.generator),
                        &GInt::one(),
                        &rec.generator
                    ));
                }
            }
            let group = rec.norm.clone() - BigUint::one();
            assert_eq!(group % BigUint::from(ord), BigUint::from(0u32));
        }
    }

    #[test]
    fn primes_of_order_examples() {
        let mut fz = default_factorizer();
        let expect: &[(u64, &[(i64, i64)])] = &[
            (1, &[]),
            (2, &[(2, 1)]),
            (3, &[(2, 3)]),
            (4, &[(1, 2)]),
            (6, &[]),
            (8, &[(3, 0)]),
            (12, &[(3, 2)]),
            (24, &[(7, 0)]),
        ];
        for (e, gens) in expect {
            let (recs, complete) = fz.primes_of_order(*e);
            assert!(complete);
            let got: Vec<GInt> = recs.iter().map(|r| r.generator.clone()).collect();
            let want: Vec<GInt> = gens.iter().map(|&(a, b)| g(a, b)).collect();
            assert_eq!(got, want, "e = {e}");
        }
    }

    #[test]
    fn order_classes_are_disjoint() {
        let mut fz = default_factorizer();
        let mut seen: HashMap<GInt, u64> = HashMap::new();
        for e in 1..=24u64 {
            let (recs, complete) = fz.primes_of_order(e);
            assert!(complete);
            for rec in recs {
                if let Some(prev) = seen.insert(rec.generator.clone(), e) {
                    panic!("{} in classes {} and {}", rec.generator, prev, e);
                }
            }
        }
    }

    #[test]
    fn exceptional_divisor_of_phi_24() {
        let mut fz = default_factorizer();
        let exceptional = fz.exceptional_order_primes(24);
        assert_eq!(exceptional.len(), 1);
        assert_eq!(exceptional[0].0.generator, g(3, 0));
        assert_eq!(exceptional[0].1, 8);
        for e in [2u64, 3, 4, 8, 12, 23] {
            assert!(fz.exceptional_order_primes(e).is_empty(), "e = {e}");
        }
    }

    #[test]
    fn full_factorizations_reconstruct() {
        let mut fz = default_factorizer();
        fz.warm_up(48);
        for e in 1..=48u64 {
            let fv = fz.full_factorization(e).unwrap();
            assert!(fv.complete, "e = {e}");
            assert!(fv.reconstructs(), "e = {e}");
        }
    }

    #[test]
    fn order_records_match_table() {
        let mut fz = default_factorizer();
        let (recs, complete) = fz.order_records(24).unwrap();
        assert!(complete);
        // (1+i)^24 - 1 = 4095 = 3^2 5 7 13: six distinct ideals
        let got: Vec<(GInt, u64)> = recs
            .iter()
            .map(|r| (r.prime.generator.clone(), r.order))
            .collect();
        assert_eq!(
            got,
            vec![
                (g(2, 1), 2),
                (g(2, 3), 3),
                (g(1, 2), 4),
                (g(3, 0), 8),
                (g(3, 2), 12),
                (g(7, 0), 24),
            ]
        );
    }

    #[test]
    fn cache_round_trip() {
        let dir = std::env::temp_dir().join(format!("factor-cache-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let path = dir.join("round-trip.cache");
        let _ = fs::remove_file(&path);

        let baseline: Vec<FactoredValue> = {
            let mut fz = Factorizer::with_cache(Effort::default(), &path).unwrap();
            (1..=24).map(|e| fz.full_factorization(e).unwrap()).collect()
        };
        // Fresh instance must reproduce everything from the file alone.
        let mut reloaded = Factorizer::with_cache(Effort::default(), &path).unwrap();
        for (idx, expected) in baseline.iter().enumerate() {
            let e = idx as u64 + 1;
            assert_eq!(&reloaded.full_factorization(e).unwrap(), expected, "e = {e}");
        }
        // Bit-exact line round-trip.
        let text = fs::read_to_string(&path).unwrap();
        for line in text.lines() {
            let (e, fv) = parse_cache_line(line).unwrap();
            assert_eq!(format_cache_line(e, &fv), line);
        }
        fs::remove_file(&path).unwrap();
    }

    #[test]
    fn cache_last_line_wins() {
        let dir = std::env::temp_dir().join(format!("factor-cache-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let path = dir.join("last-wins.cache");
        // A stale incomplete record followed by the true factorization of
        // (1+i)^4 - 1 = -5.
        fs::write(&path, "4;0;\n4;1;1,2,1|2,1,1\n").unwrap();
        let cache = FactorCache::open(&path).unwrap();
        let entry = cache.get(4).unwrap();
        assert!(entry.complete);
        assert_eq!(entry.factors.len(), 2);
        fs::remove_file(&path).unwrap();
    }

    #[test]
    fn cache_rejects_malformed_lines() {
        let dir = std::env::temp_dir().join(format!("factor-cache-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        for (name, content, expect_line) in [
            ("bad-flag.cache", "4;yes;1,2,1|2,1,1\n", 1),
            ("bad-generator.cache", "4;1;2,-1,1|2,1,1\n", 1), // 2-i not canonical
            ("bad-reconstruct.cache", "1;1;\n4;1;1,2,1\n", 2), // missing 2+i
        ] {
            let path = dir.join(name);
            fs::write(&path, content).unwrap();
            match FactorCache::open(&path) {
                Err(Error::MalformedCache { line, .. }) => assert_eq!(line, expect_line),
                other => panic!("{name}: expected malformed-cache error, got {other:?}"),
            }
            fs::remove_file(&path).unwrap();
        }
    }

    #[test]
    fn warm_up_matches_serial_route() {
        let mut warm = default_factorizer();
        warm.warm_up(30);
        let mut cold = default_factorizer();
        for e in 1..=30u64 {
            assert_eq!(warm.phi_factors(e), cold.phi_factors(e), "e = {e}");
        }
    }
}
