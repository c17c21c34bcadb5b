//! Prime elements and prime ideals of Z\[i\].
//!
//! Enumeration goes through the rational primes: a segmented sieve up to the
//! norm bound, then p = a^2 + b^2 for split p ≡ 1 mod 4 (Euclidean descent),
//! one ramified ideal above 2 and one inert ideal per p ≡ 3 mod 4. Each
//! ideal with norm <= x^2 contributes its four unit multiples to the disk
//! house(z) <= x.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::factor::{is_prime, is_prime_u64, sum_of_two_squares};
use crate::gaussian::GInt;
use crate::sieve;

/// Invariants of Q(i) used by the counting formulas: degree n, real and
/// complex places, unit count, class number, regulator, discriminant, and
/// the residue-type constant rho = pi/4.
#[derive(Clone, Copy, Debug)]
pub struct FieldParams {
    pub degree: u32,
    pub real_places: u32,
    pub complex_places: u32,
    pub unit_count: u32,
    pub class_number: u32,
    pub regulator: f64,
    pub discriminant: i64,
}

pub const FIELD: FieldParams = FieldParams {
    degree: 2,
    real_places: 0,
    complex_places: 1,
    unit_count: 4,
    class_number: 1,
    regulator: 1.0,
    discriminant: -4,
};

impl FieldParams {
    /// Residue of the zeta function at 1:
    /// 2^r1 (2 pi)^r2 h R / (w sqrt|disc|), which is pi/4 for Q(i).
    pub fn rho(&self) -> f64 {
        2f64.powi(self.real_places as i32)
            * std::f64::consts::TAU.powi(self.complex_places as i32)
            * self.class_number as f64
            * self.regulator
            / (self.unit_count as f64 * (self.discriminant.unsigned_abs() as f64).sqrt())
    }
}

/// One prime ideal, stored by its canonical generator. degree 1 covers the
/// split and ramified cases (prime norm), degree 2 the inert ones (norm p^2).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeRecord {
    pub generator: GInt,
    pub norm: BigUint,
    pub degree: u8,
}

impl PrimeRecord {
    /// Build from any associate of a prime element.
    pub fn from_prime_element(z: &GInt) -> PrimeRecord {
        debug_assert!(is_prime_element(z), "{z} is not prime");
        let generator = z.canonical_associate();
        let norm = generator.norm();
        let degree = if generator.im().is_zero() { 2 } else { 1 };
        PrimeRecord {
            generator,
            norm,
            degree,
        }
    }

    pub fn norm_u64(&self) -> Option<u64> {
        self.norm.to_u64()
    }

    /// Key for the deterministic (norm, re, im) ordering.
    pub fn sort_key(&self) -> (BigUint, num_bigint::BigInt, num_bigint::BigInt) {
        (
            self.norm.clone(),
            self.generator.re().clone(),
            self.generator.im().clone(),
        )
    }
}

/// Primality of a single element: prime norm, or an associate of a rational
/// prime p ≡ 3 mod 4.
pub fn is_prime_element(z: &GInt) -> bool {
    let n = z.norm();
    if n <= BigUint::one() {
        return false;
    }
    if is_prime(&n) {
        return true;
    }
    // Remaining prime case: norm p^2 with inert p; the canonical associate
    // is then the rational prime itself.
    let c = z.canonical_associate();
    if !c.im().is_zero() {
        return false;
    }
    let p = c.re().to_biguint().expect("canonical re > 0");
    p.to_u64().map_or_else(
        || &p % 4u32 == BigUint::from(3u32) && is_prime(&p),
        |small| small % 4 == 3 && is_prime_u64(small),
    )
}

/// All prime ideals with norm <= norm_bound, ordered by (norm, re, im).
pub fn prime_ideals_up_to(norm_bound: u64) -> Vec<PrimeRecord> {
    let mut out = Vec::new();
    let inert_cap = norm_bound.isqrt();
    sieve::sieve_apply(norm_bound, |p| {
        if p == 2 {
            out.push(PrimeRecord {
                generator: GInt::one_plus_i(),
                norm: BigUint::from(2u32),
                degree: 1,
            });
        } else if p % 4 == 1 {
            let (a, b) = sum_of_two_squares(&BigUint::from(p));
            let (a, b) = (a.to_u64().unwrap() as i64, b.to_u64().unwrap() as i64);
            for (re, im) in [(a, b), (b, a)] {
                out.push(PrimeRecord {
                    generator: GInt::from_i64(re, im),
                    norm: BigUint::from(p),
                    degree: 1,
                });
            }
        } else if p <= inert_cap {
            out.push(PrimeRecord {
                generator: GInt::from_i64(p as i64, 0),
                norm: BigUint::from(p) * BigUint::from(p),
                degree: 2,
            });
        }
    });
    out.sort_by_key(PrimeRecord::sort_key);
    out
}

/// Every prime element z with house(z) <= x (norm <= x^2), each exactly once,
/// ordered by (norm, re, im).
pub fn primes_in_disk(x: f64) -> Vec<GInt> {
    let norm_bound = norm_bound_for_house(x);
    let mut out = Vec::new();
    for rec in prime_ideals_up_to(norm_bound) {
        let mut z = rec.generator;
        for _ in 0..4 {
            let next = GInt::new(-z.im().clone(), z.re().clone());
            out.push(z);
            z = next;
        }
    }
    out.sort_by_key(|z| (z.norm(), z.re().clone(), z.im().clone()));
    out
}

/// Number of prime elements with house <= x, via ideal counting only (no
/// two-square decompositions), so it stays cheap for large x.
pub fn count_primes_in_disk(x: f64) -> u64 {
    let norm_bound = norm_bound_for_house(x);
    let inert_cap = norm_bound.isqrt();
    let mut ideals = 0u64;
    sieve::sieve_apply(norm_bound, |p| {
        if p == 2 {
            ideals += 1;
        } else if p % 4 == 1 {
            ideals += 2;
        } else if p <= inert_cap {
            ideals += 1;
        }
    });
    4 * ideals
}

/// Since norms are integers, house(z) <= x is norm(z) <= floor(x^2).
pub(crate) fn norm_bound_for_house(x: f64) -> u64 {
    assert!(x >= 0.0 && x.is_finite(), "house bound must be finite");
    (x * x).floor() as u64
}

/// count(x) * log x / (2 x^2): converges to 1 as x grows (the disk form of
/// the prime ideal theorem with omega/(n h 2^{r1} R) = 2 for Q(i)).
pub fn mitsui_ratio(x: f64) -> f64 {
    assert!(x > 1.0, "ratio needs x > 1");
    count_primes_in_disk(x) as f64 * x.ln() / (2.0 * x * x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(re: i64, im: i64) -> GInt {
        GInt::from_i64(re, im)
    }

    #[test]
    fn prime_element_basics() {
        assert!(is_prime_element(&g(1, 1)));
        assert!(is_prime_element(&g(2, 1)));
        assert!(is_prime_element(&g(3, 0)));
        assert!(is_prime_element(&g(0, -3))); // associate of 3
        assert!(is_prime_element(&g(-5, -4))); // norm 41
        assert!(!is_prime_element(&g(5, 0))); // splits as (2+i)(2-i)
        assert!(!is_prime_element(&g(2, 0))); // ramified square: -i(1+i)^2
        assert!(!is_prime_element(&g(1, 0)));
        assert!(!is_prime_element(&g(0, 0)));
        assert!(!is_prime_element(&g(21, 0))); // norm 441 = 21^2 but 21 = 3*7
        assert!(!is_prime_element(&g(7, 1))); // norm 50
    }

    #[test]
    fn ideals_up_to_100() {
        let ideals = prime_ideals_up_to(100);
        assert_eq!(ideals.len(), 25);
        assert_eq!(ideals[0].generator, g(1, 1));
        assert_eq!(ideals[0].degree, 1);
        // both conjugates above 5, in (norm, re) order
        assert_eq!(ideals[1].generator, g(1, 2));
        assert_eq!(ideals[2].generator, g(2, 1));
        // inert 3 appears with norm 9
        let three = ideals.iter().find(|r| r.generator == g(3, 0)).unwrap();
        assert_eq!(three.degree, 2);
        assert_eq!(three.norm, BigUint::from(9u32));
        // all canonical, deduplicated, within bound
        for r in &ideals {
            assert!(r.generator.is_canonical());
            assert!(r.norm <= BigUint::from(100u32));
            assert!(is_prime_element(&r.generator));
        }
    }

    #[test]
    fn disk_examples() {
        let d2 = primes_in_disk(2.0);
        assert_eq!(d2.len(), 4);
        for z in &d2 {
            assert!(z.is_associate_of(&g(1, 1)));
        }

        let d10 = primes_in_disk(10.0);
        assert_eq!(d10.len(), 100);
        assert_eq!(count_primes_in_disk(10.0), 100);
        // each exactly once, all prime, sorted by (norm, re, im)
        let set: std::collections::HashSet<_> = d10.iter().cloned().collect();
        assert_eq!(set.len(), 100);
        for z in &d10 {
            assert!(is_prime_element(z));
            assert!(z.norm() <= BigUint::from(100u32));
        }
        let mut sorted = d10.clone();
        sorted.sort_by_key(|z| (z.norm(), z.re().clone(), z.im().clone()));
        assert_eq!(d10, sorted);
    }

    #[test]
    fn counting_matches_materialized_disk() {
        for x in [1.0, 1.5, 2.0, 5.0, 17.3, 50.0] {
            assert_eq!(
                count_primes_in_disk(x),
                primes_in_disk(x).len() as u64,
                "x = {x}"
            );
        }
    }

    /// Brute-force oracle: test all lattice points in the disk individually.
    #[test]
    fn disk_matches_pointwise_oracle() {
        let x = 50.0;
        let bound = norm_bound_for_house(x) as i64;
        let mut oracle = Vec::new();
        let r = (bound as f64).sqrt() as i64 + 1;
        for a in -r..=r {
            for b in -r..=r {
                if a * a + b * b <= bound && is_prime_element(&g(a, b)) {
                    oracle.push(g(a, b));
                }
            }
        }
        oracle.sort_by_key(|z| (z.norm(), z.re().clone(), z.im().clone()));
        assert_eq!(primes_in_disk(x), oracle);
    }

    #[test]
    fn mitsui_ratio_examples() {
        assert!((mitsui_ratio(2.0) - 4.0 * 2.0f64.ln() / 8.0).abs() < 1e-12);
        assert!((mitsui_ratio(10.0) - 1.1513).abs() < 1e-4);
    }

    #[test]
    fn field_params() {
        assert_eq!(FIELD.degree, 2);
        assert_eq!(FIELD.unit_count, 4);
        assert_eq!(FIELD.class_number, 1);
        assert!((FIELD.rho() - std::f64::consts::FRAC_PI_4).abs() < 1e-15);
    }
}
