//! Factorization of rational integers: deterministic Miller-Rabin, trial
//! division, Brent-cycle Pollard rho, and Pollard p-1, all under an explicit
//! operation-count budget so runs are reproducible regardless of wall clock.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::sieve;

/// Operation-count budget for the factoring ladder. The default completes
/// every norm arising at the default exponent cap (values up to ~2^72) on a
/// desk machine; deeper exponents need a larger budget and otherwise yield
/// incomplete factorizations, which callers must surface, not hide.
#[derive(Clone, Debug)]
pub struct Effort {
    /// Trial-divide by every prime up to this bound first.
    pub trial_bound: u64,
    /// Brent-rho iterations per polynomial offset.
    pub rho_iterations: u64,
    /// Number of polynomial offsets (c = 1, 2, ...) to try.
    pub rho_attempts: u32,
    /// Stage-1 smoothness bound for Pollard p-1.
    pub pm1_bound: u64,
}

impl Default for Effort {
    fn default() -> Self {
        Effort {
            trial_bound: 1_000_000,
            rho_iterations: 1 << 22,
            rho_attempts: 4,
            pm1_bound: 100_000,
        }
    }
}

impl Effort {
    /// Budget scaled by the CLI --effort knob: multiplies the rho iteration
    /// count, the knob with real leverage on hard semiprime cofactors.
    pub fn scaled(multiplier: u64) -> Self {
        let base = Effort::default();
        Effort {
            rho_iterations: base.rho_iterations.saturating_mul(multiplier.max(1)),
            rho_attempts: base.rho_attempts + multiplier.min(16) as u32,
            ..base
        }
    }
}

const MR_BASES_U64: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Deterministic Miller-Rabin, exact for all u64 (the 12-base set is proven
/// past 3.3e24).
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let d = n - 1;
    let s = d.trailing_zeros();
    let d = d >> s;
    'base: for &a in &MR_BASES_U64 {
        let mut x = pow_mod_u64(a % n, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod_u64(x, x, n);
            if x == n - 1 {
                continue 'base;
            }
        }
        return false;
    }
    true
}

fn mul_mod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod_u64(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod_u64(acc, a, m);
        }
        a = mul_mod_u64(a, a, m);
        e >>= 1;
    }
    acc
}

/// Primality for arbitrary naturals. Exact below 2^64; above that, strong
/// probable-prime tests to 64 fixed prime bases (deterministic, combined
/// error bound 4^-64 = 2^-128 for composites).
pub fn is_prime(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    if n.is_even() {
        return false;
    }
    let one = BigUint::one();
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().expect("n > 1 is odd");
    let d = &n_minus_1 >> s;
    let mut bases_emitted = 0u32;
    let mut candidate = 2u64;
    'base: while bases_emitted < 64 {
        if !is_prime_u64(candidate) {
            candidate += 1;
            continue;
        }
        let a = BigUint::from(candidate);
        candidate += 1;
        bases_emitted += 1;
        let mut x = a.modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_1 {
                continue 'base;
            }
        }
        return false;
    }
    true
}

/// Complete factorization of a u64 into ascending primes with multiplicity.
pub fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    for p in [2u64, 3, 5] {
        let mut m = 0;
        while n % p == 0 {
            n /= p;
            m += 1;
        }
        if m > 0 {
            out.push((p, m));
        }
    }
    let mut d = 7u64;
    // wheel over 7, 11, 13, ... suffices; rho takes over quickly
    while d * d <= n && d < 100_000 {
        let mut m = 0;
        while n % d == 0 {
            n /= d;
            m += 1;
        }
        if m > 0 {
            out.push((d, m));
        }
        d += if d % 6 == 1 { 4 } else { 2 };
    }
    if n > 1 {
        let mut stack = vec![n];
        let mut primes = Vec::new();
        while let Some(v) = stack.pop() {
            if is_prime_u64(v) {
                primes.push(v);
            } else {
                let f = rho_u64(v);
                stack.push(f);
                stack.push(v / f);
            }
        }
        primes.sort_unstable();
        for p in primes {
            match out.iter_mut().find(|(q, _)| *q == p) {
                Some((_, m)) => *m += 1,
                None => out.push((p, 1)),
            }
        }
    }
    out.sort_unstable();
    out
}

/// Brent-cycle rho on u64; loops over offsets until a factor splits, which is
/// fast for any composite below 2^64 with no small factors.
fn rho_u64(n: u64) -> u64 {
    debug_assert!(!is_prime_u64(n) && n > 1);
    if n.is_even() {
        return 2;
    }
    for c in 1u64.. {
        let f = |x: u64| (mul_mod_u64(x, x, n) + c) % n;
        let (mut x, mut q, mut ys) = (2u64, 1u64, 0u64);
        let (mut y, mut r, m) = (2u64, 1u64, 128u64);
        let mut g = 1u64;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..m.min(r - k) {
                    y = f(y);
                    q = mul_mod_u64(q, x.abs_diff(y), n);
                }
                g = q.gcd(&n);
                k += m;
            }
            r <<= 1;
        }
        if g == n {
            g = 1;
            while g == 1 {
                ys = f(ys);
                g = x.abs_diff(ys).gcd(&n);
            }
        }
        if g != n {
            return g;
        }
    }
    unreachable!()
}

/// Factor a natural number under the given budget. Returns the prime factors
/// found (ascending, with multiplicity) and a completeness flag; when the
/// flag is false, n / product(found) is a composite cofactor the budget could
/// not split.
pub fn factor_natural(n: &BigUint, effort: &Effort) -> (Vec<(BigUint, u32)>, bool) {
    let mut found: Vec<BigUint> = Vec::new();
    let mut complete = true;
    if n.is_zero() {
        panic!("factor_natural(0) is undefined");
    }
    let mut rest = n.clone();
    if !rest.is_one() {
        // trial division
        let cap = effort.trial_bound;
        let rest_small = rest.to_u64();
        let trial_cap = match rest_small {
            Some(v) => cap.min(v.isqrt() + 1),
            None => cap,
        };
        sieve::sieve_apply(trial_cap, |p| {
            let bp = BigUint::from(p);
            while (&rest % &bp).is_zero() {
                rest /= &bp;
                found.push(bp.clone());
            }
        });
        let mut stack = vec![rest.clone()];
        while let Some(v) = stack.pop() {
            if v.is_one() {
                continue;
            }
            if is_prime(&v) {
                found.push(v);
                continue;
            }
            if let Some(small) = v.to_u64() {
                for (p, m) in factor_u64(small) {
                    for _ in 0..m {
                        found.push(BigUint::from(p));
                    }
                }
                continue;
            }
            match split_big(&v, effort) {
                Some(f) => {
                    let q = &v / &f;
                    stack.push(f);
                    stack.push(q);
                }
                None => complete = false,
            }
        }
    }
    found.sort();
    let mut out: Vec<(BigUint, u32)> = Vec::new();
    for p in found {
        match out.last_mut() {
            Some((q, m)) if *q == p => *m += 1,
            _ => out.push((p, 1)),
        }
    }
    (out, complete)
}

/// One nontrivial factor of a big composite, or None when the budget is spent.
fn split_big(n: &BigUint, effort: &Effort) -> Option<BigUint> {
    if let Some(f) = pollard_pm1(n, effort.pm1_bound) {
        return Some(f);
    }
    for c in 1..=effort.rho_attempts as u64 {
        if let Some(f) = rho_brent_big(n, c, effort.rho_iterations) {
            return Some(f);
        }
    }
    None
}

fn rho_brent_big(n: &BigUint, c: u64, max_iters: u64) -> Option<BigUint> {
    let one = BigUint::one();
    let cb = BigUint::from(c);
    let f = |x: &BigUint| (x * x + &cb) % n;
    let mut y = BigUint::from(2u32);
    let mut r = 1u64;
    let mut q = one.clone();
    let mut iters = 0u64;
    let mut x = y.clone();
    let mut ys = y.clone();
    let mut g = one.clone();
    'outer: while g.is_one() {
        x = y.clone();
        for _ in 0..r {
            y = f(&y);
        }
        let mut k = 0u64;
        while k < r && g.is_one() {
            ys = y.clone();
            let batch = 128.min(r - k);
            for _ in 0..batch {
                y = f(&y);
                let diff = if x > y { &x - &y } else { &y - &x };
                q = q * diff % n;
            }
            iters += batch;
            if iters > max_iters {
                break 'outer;
            }
            g = q.gcd(n);
            k += batch;
        }
        r <<= 1;
    }
    if g == *n {
        // backtrack one step at a time
        g = one.clone();
        while g.is_one() {
            ys = f(&ys);
            let diff = if x > ys { &x - &ys } else { &ys - &x };
            g = diff.gcd(n);
        }
    }
    if g.is_one() || g == *n {
        None
    } else {
        Some(g)
    }
}

/// Pollard p-1, stage 1 only: catches factors p with p-1 B-smooth.
fn pollard_pm1(n: &BigUint, b1: u64) -> Option<BigUint> {
    let mut a = BigUint::from(2u32);
    let mut steps = 0u32;
    let mut result = None;
    sieve::sieve_apply(b1, |p| {
        if result.is_some() {
            return;
        }
        let mut pk = p;
        while pk <= b1 / p {
            pk *= p;
        }
        a = a.modpow(&BigUint::from(pk), n);
        steps += 1;
        if steps % 256 == 0 {
            let g = (&a - BigUint::one()).gcd(n);
            if !g.is_one() && g != *n {
                result = Some(g);
            }
        }
    });
    if result.is_none() {
        let g = (&a - BigUint::one()).gcd(n);
        if !g.is_one() && g != *n {
            result = Some(g);
        }
    }
    result
}

/// Write p = a^2 + b^2 with 0 < a <= b. Requires p = 2 or a prime
/// p ≡ 1 mod 4 (Fermat's two-square theorem guarantees the representation).
pub fn sum_of_two_squares(p: &BigUint) -> (BigUint, BigUint) {
    let one = BigUint::one();
    if *p == BigUint::from(2u32) {
        return (one.clone(), one);
    }
    assert!(
        p % 4u32 == one && is_prime(p),
        "sum_of_two_squares needs p = 2 or a prime p = 1 mod 4"
    );
    // c^2 ≡ -1 mod p from c = g^((p-1)/4) for a quadratic non-residue g.
    let p_minus_1 = p - &one;
    let half = &p_minus_1 >> 1;
    let quarter = &p_minus_1 >> 2;
    let mut g = BigUint::from(2u32);
    let c = loop {
        if g.modpow(&half, p) == p_minus_1 {
            break g.modpow(&quarter, p);
        }
        g += 1u32;
    };
    // Euclidean descent: first remainder below sqrt(p) is a leg.
    let c_neg = &p_minus_1 - &c + &one;
    let mut r0 = p.clone();
    let mut r1 = c.min(c_neg);
    while &r1 * &r1 > *p {
        let r = &r0 % &r1;
        r0 = std::mem::replace(&mut r1, r);
    }
    let a = r1;
    let b = (p - &a * &a).sqrt();
    debug_assert_eq!(&a * &a + &b * &b, *p);
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Möbius function.
pub fn mobius(n: u64) -> i64 {
    assert!(n >= 1);
    let mut mu = 1i64;
    for (_, m) in factor_u64(n) {
        if m > 1 {
            return 0;
        }
        mu = -mu;
    }
    mu
}

/// All divisors of n, ascending.
pub fn divisors(n: u64) -> Vec<u64> {
    assert!(n >= 1);
    let mut out = vec![1u64];
    for (p, m) in factor_u64(n) {
        let prev = out.clone();
        let mut pk = 1u64;
        for _ in 0..m {
            pk *= p;
            out.extend(prev.iter().map(|d| d * pk));
        }
    }
    out.sort_unstable();
    out
}
