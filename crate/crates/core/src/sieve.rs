//! Segmented sieve of Eratosthenes over the rational integers.
//!
//! Norm bounds in this crate grow like x^2, so enumeration works in fixed-size
//! segments instead of one allocation proportional to the bound.

const SEGMENT: usize = 1 << 16;

/// All primes p <= limit, ascending.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    let mut out = Vec::new();
    sieve_apply(limit, |p| out.push(p));
    out
}

/// Streams every prime p <= limit into `f`, ascending, without keeping the
/// full list; only the base primes up to sqrt(limit) are materialized.
pub fn sieve_apply<F: FnMut(u64)>(limit: u64, mut f: F) {
    if limit < 2 {
        return;
    }
    let base_limit = limit.isqrt().max(2);
    let base = simple_sieve(base_limit);
    for &p in &base {
        f(p);
    }
    let mut lo = base_limit + 1;
    let mut composite = vec![false; SEGMENT];
    while lo <= limit {
        let hi = limit.min(lo + SEGMENT as u64 - 1);
        let len = (hi - lo + 1) as usize;
        composite[..len].fill(false);
        for &p in &base {
            if p * p > hi {
                break;
            }
            let mut m = lo.div_ceil(p) * p;
            while m <= hi {
                composite[(m - lo) as usize] = true;
                m += p;
            }
        }
        for (idx, &c) in composite[..len].iter().enumerate() {
            if !c {
                f(lo + idx as u64);
            }
        }
        lo = hi + 1;
    }
}

fn simple_sieve(limit: u64) -> Vec<u64> {
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for p in 2..=n {
        if !composite[p] {
            out.push(p as u64);
            let mut m = p * p;
            while m <= n {
                composite[m] = true;
                m += p;
            }
        }
    }
    out
}

/// The n-th odd prime, 1-indexed: 1 -> 3, 2 -> 5, ...
pub fn nth_odd_prime(n: u64) -> u64 {
    assert!(n >= 1, "nth_odd_prime is 1-indexed");
    // p_k ~ k ln k; overshoot and retry on the rare miss.
    let target = n + 1; // skip 2
    let mut bound = 64u64.max((target as f64 * ((target as f64).ln() + 2.0) * 1.5) as u64);
    loop {
        let mut seen = 0u64;
        let mut hit = None;
        sieve_apply(bound, |p| {
            seen += 1;
            if seen == target && hit.is_none() {
                hit = Some(p);
            }
        });
        if let Some(p) = hit {
            return p;
        }
        bound *= 2;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_primes() {
        assert_eq!(primes_up_to(1), Vec::<u64>::new());
        assert_eq!(primes_up_to(2), vec![2]);
        assert_eq!(primes_up_to(30), vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
    }

    #[test]
    fn counts_match_pi() {
        // pi(10^k) reference values
        for (limit, pi) in [(10u64, 4usize), (100, 25), (1_000, 168), (100_000, 9_592)] {
            assert_eq!(primes_up_to(limit).len(), pi);
        }
    }

    #[test]
    fn segmented_agrees_with_simple() {
        let limit = 3 * SEGMENT as u64 + 1234;
        assert_eq!(primes_up_to(limit), simple_sieve(limit));
    }

    #[test]
    fn nth_odd_prime_examples() {
        assert_eq!(nth_odd_prime(1), 3);
        assert_eq!(nth_odd_prime(2), 5);
        assert_eq!(nth_odd_prime(209), 1291);
    }
}
