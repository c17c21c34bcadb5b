//! Exact-rational series over prime ideals classified by the order of 1+i.
//!
//! For each exponent e, F(e) multiplies (1 + 1/N(p)) over the primes whose
//! order divides e (the divisors of (1+i)^e - 1); Moebius inversion turns
//! that into G(e), the sum of 1/N(a) over squarefree ideals coprime to 1+i
//! whose order is exactly e, with the unit ideal contributing 1 at e = 1.
//! The weighted partials sum_{e<=E} G(e)/e and sum_{k<=x} G(k) feed the
//! density-bound assembly, so everything here is exact `BigRational`
//! arithmetic; floats appear only in the closed-form tail integral and the
//! corridor checks, whose assertion margins dwarf rounding error.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::factor::{divisors, mobius};
use crate::gaussian::GInt;
use crate::orders::Factorizer;
use crate::sieve;

/// F(e) = prod (1 + 1/N(p)) over distinct primes with order dividing e.
/// Errors when the factorization of (1+i)^e - 1 is incomplete: in exact
/// mode a silently-partial product would be indistinguishable from the
/// true value.
pub fn f_of(e: u64, fz: &mut Factorizer) -> Result<BigRational> {
    let (records, complete) = fz.order_records(e)?;
    if !complete {
        return Err(Error::IncompleteFactorization(e));
    }
    let mut f = BigRational::one();
    for rec in records {
        let n = BigInt::from(rec.prime.norm.clone());
        f *= BigRational::new(&n + 1, n);
    }
    Ok(f)
}

/// G(e) = sum_{d|e} mu(e/d) F(d): the exact-order-e slice of the series.
pub fn g_of(e: u64, fz: &mut Factorizer) -> Result<BigRational> {
    let mut g = BigRational::zero();
    for d in divisors(e) {
        match mobius(e / d) {
            1 => g += f_of(d, fz)?,
            -1 => g -= f_of(d, fz)?,
            _ => {}
        }
    }
    Ok(g)
}

/// Independent oracle for G(e): enumerate every subset of the primes with
/// order dividing e and keep those whose orders have least common multiple
/// exactly e (the empty subset stands for the unit ideal at e = 1). Only
/// viable for small e; the subset pool is capped defensively.
pub fn brute_force_g(e: u64, fz: &mut Factorizer) -> Result<BigRational> {
    let mut pool: Vec<(u64, BigInt)> = Vec::new();
    for d in divisors(e) {
        let (records, complete) = fz.primes_of_order(d);
        if !complete {
            return Err(Error::IncompleteFactorization(d));
        }
        pool.extend(
            records
                .into_iter()
                .map(|rec| (d, BigInt::from(rec.norm))),
        );
    }
    assert!(pool.len() <= 30, "subset enumeration explodes past 2^30");
    let mut sum = BigRational::zero();
    for mask in 0u64..(1 << pool.len()) {
        let mut lcm = 1u64;
        let mut denom = BigInt::one();
        for (bit, (order, norm)) in pool.iter().enumerate() {
            if mask >> bit & 1 == 1 {
                lcm = num_integer::lcm(lcm, *order);
                denom *= norm;
            }
        }
        if lcm == e {
            sum += BigRational::new(BigInt::one(), denom);
        }
    }
    Ok(sum)
}

/// sum_{e<=emax} G(e)/e, exact.
pub fn romanov_partial_sum(emax: u64, fz: &mut Factorizer) -> Result<BigRational> {
    let mut s = BigRational::zero();
    for e in 1..=emax {
        s += g_of(e, fz)? / BigRational::from_integer(BigInt::from(e));
    }
    Ok(s)
}

/// sum_{k<=x} G(k), exact: the unweighted partial used by the tail bound.
pub fn e_partial(x: u64, fz: &mut Factorizer) -> Result<BigRational> {
    let mut s = BigRational::zero();
    for k in 1..=x {
        s += g_of(k, fz)?;
    }
    Ok(s)
}

/// One exponent's worth of ledger state. When `complete` is false the
/// rationals are certified lower bounds: they sum only over the primes the
/// factorization budget actually produced, and missing primes could only
/// add nonnegative mass.
#[derive(Clone, Debug)]
pub struct LedgerEntry {
    pub e: u64,
    pub f: BigRational,
    pub g: BigRational,
    pub complete: bool,
}

/// Exact per-exponent series values with running partials.
#[derive(Clone, Debug)]
pub struct SumLedger {
    entries: Vec<LedgerEntry>,
}

impl SumLedger {
    /// Evaluate all exponents up to emax. Incomplete factorizations do not
    /// abort the build; they mark their entries (and every multiple's
    /// entry) as lower bounds.
    pub fn build(emax: u64, fz: &mut Factorizer) -> Result<SumLedger> {
        assert!(emax >= 1, "ledger needs at least one exponent");
        fz.warm_up(emax);
        let mut class_factor: Vec<BigRational> = Vec::with_capacity(emax as usize);
        let mut class_complete: Vec<bool> = Vec::with_capacity(emax as usize);
        for e in 1..=emax {
            let (records, complete) = fz.primes_of_order(e);
            let mut factor = BigRational::one();
            for rec in records {
                let n = BigInt::from(rec.norm);
                factor *= BigRational::new(&n + 1, n);
            }
            class_factor.push(factor);
            class_complete.push(complete);
        }
        let mut f_values: Vec<BigRational> = Vec::with_capacity(emax as usize);
        let mut entries = Vec::with_capacity(emax as usize);
        for e in 1..=emax {
            let ds = divisors(e);
            let mut f = BigRational::one();
            let mut complete = true;
            for &d in &ds {
                f *= &class_factor[d as usize - 1];
                complete &= class_complete[d as usize - 1];
            }
            // the d = e term carries mu(1) = 1 and is the F being built,
            // which is not in f_values yet
            let mut g = f.clone();
            for &d in &ds {
                if d == e {
                    continue;
                }
                match mobius(e / d) {
                    1 => g += &f_values[d as usize - 1],
                    -1 => g -= &f_values[d as usize - 1],
                    _ => {}
                }
            }
            assert!(!g.is_negative(), "series slice G({e}) must be nonnegative");
            f_values.push(f.clone());
            entries.push(LedgerEntry { e, f, g, complete });
        }
        Ok(SumLedger { entries })
    }

    pub fn entries(&self) -> &[LedgerEntry] {
        &self.entries
    }

    pub fn entry(&self, e: u64) -> Option<&LedgerEntry> {
        self.entries.get(e as usize - 1)
    }

    pub fn emax(&self) -> u64 {
        self.entries.len() as u64
    }

    /// sum_{e<=bound} G(e)/e over the stored entries.
    pub fn partial_sum(&self, bound: u64) -> BigRational {
        self.entries
            .iter()
            .take_while(|en| en.e <= bound)
            .map(|en| &en.g / BigRational::from_integer(BigInt::from(en.e)))
            .sum()
    }

    /// sum_{k<=bound} G(k) over the stored entries.
    pub fn e_partial(&self, bound: u64) -> BigRational {
        self.entries
            .iter()
            .take_while(|en| en.e <= bound)
            .map(|en| en.g.clone())
            .sum()
    }

    pub fn complete_through(&self, bound: u64) -> bool {
        self.entries
            .iter()
            .take_while(|en| en.e <= bound)
            .all(|en| en.complete)
    }

    /// CSV rendering: exact numerators and denominators, one row per
    /// exponent, with the running weighted partial.
    pub fn to_csv(&self) -> String {
        let mut out =
            String::from("e,F_num,F_den,G_num,G_den,partial_S_num,partial_S_den,complete\n");
        let mut s = BigRational::zero();
        for en in &self.entries {
            s += &en.g / BigRational::from_integer(BigInt::from(en.e));
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                en.e,
                en.f.numer(),
                en.f.denom(),
                en.g.numer(),
                en.g.denom(),
                s.numer(),
                s.denom(),
                en.complete
            ));
        }
        out
    }
}

/// Distinct canonical prime divisors of prod_{k=ceil(x/2)}^{x} ((1+i)^k - 1).
/// The count is exact when every factorization in range is complete,
/// otherwise a lower bound (flag false).
pub fn distinct_prime_factor_count_d(x: u64, fz: &mut Factorizer) -> Result<(u64, bool)> {
    assert!(x >= 2, "the product needs x >= 2");
    let mut seen: HashSet<GInt> = HashSet::new();
    let mut complete = true;
    for k in x.div_ceil(2)..=x {
        let fv = fz.full_factorization(k)?;
        complete &= fv.complete;
        seen.extend(fv.factors.into_iter().map(|(rec, _)| rec.generator));
    }
    Ok((seen.len() as u64, complete))
}

/// -E/x0 + scale * integral_{x0}^inf (a log^2 t + b log t + c)/t^2 dt,
/// evaluated through the exact antiderivatives
/// int log^2 t/t^2 = -(log^2 t + 2 log t + 2)/t,
/// int log t/t^2 = -(log t + 1)/t, and int t^-2 = -1/t.
pub fn tail_bound_assembly(x0: f64, e_at_x0: f64, a: f64, b: f64, c: f64, scale: f64) -> f64 {
    assert!(x0 >= 1.0, "tail integral starts at x0 >= 1");
    let l = x0.ln();
    -e_at_x0 / x0 + scale * (a * (l * l + 2.0 * l + 2.0) + b * (l + 1.0) + c) / x0
}

/// prod_{3<=p<=x} (1 - 1/p)^{-1} divided by 0.922913686 log x; at most 1
/// for every x >= 74 (the two sides cross just below that point).
pub fn mertens_odd_product_check(x: f64) -> f64 {
    assert!(x >= 74.0, "the bound only holds from 74 on");
    let mut log_product = 0.0f64;
    sieve::sieve_apply(x.floor() as u64, |p| {
        if p > 2 {
            log_product -= (1.0 - 1.0 / p as f64).ln();
        }
    });
    log_product.exp() / (0.922913686 * x.ln())
}

/// prod (1 - 1/p^2)^2 over the first n odd primes: the sharp value of the
/// square-product that the tail assembly replaces by the loose 0.999749.
/// Converges to (8/pi^2)^2 ~ 0.657 from above.
pub fn odd_prime_square_product(n: u64) -> f64 {
    assert!(n >= 1);
    let bound = sieve::nth_odd_prime(n);
    let mut log_product = 0.0f64;
    sieve::sieve_apply(bound, |p| {
        if p > 2 {
            let q = p as f64;
            log_product += 2.0 * (1.0 - 1.0 / (q * q)).ln();
        }
    });
    log_product.exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factor::Effort;
    use num_traits::ToPrimitive;

    fn rational(num: i64, den: i64) -> BigRational {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn fz() -> Factorizer {
        Factorizer::new(Effort::default())
    }

    #[test]
    fn f_examples() {
        let mut fz = fz();
        assert_eq!(f_of(1, &mut fz).unwrap(), rational(1, 1));
        assert_eq!(f_of(2, &mut fz).unwrap(), rational(6, 5));
        assert_eq!(f_of(4, &mut fz).unwrap(), rational(36, 25));
    }

    #[test]
    fn g_examples() {
        let mut fz = fz();
        assert_eq!(g_of(1, &mut fz).unwrap(), rational(1, 1));
        assert_eq!(g_of(2, &mut fz).unwrap(), rational(1, 5));
        assert_eq!(g_of(3, &mut fz).unwrap(), rational(1, 13));
        assert_eq!(g_of(4, &mut fz).unwrap(), rational(6, 25));
    }

    #[test]
    fn partial_sum_examples() {
        let mut fz = fz();
        assert_eq!(romanov_partial_sum(1, &mut fz).unwrap(), rational(1, 1));
        assert_eq!(romanov_partial_sum(2, &mut fz).unwrap(), rational(11, 10));
        assert_eq!(
            romanov_partial_sum(4, &mut fz).unwrap(),
            rational(1156, 975)
        );
        assert_eq!(e_partial(1, &mut fz).unwrap(), rational(1, 1));
        assert_eq!(e_partial(2, &mut fz).unwrap(), rational(6, 5));
    }

    #[test]
    fn ledger_matches_direct_evaluation() {
        let mut fz = fz();
        let ledger = SumLedger::build(30, &mut fz).unwrap();
        for e in 1..=30u64 {
            let entry = ledger.entry(e).unwrap();
            assert!(entry.complete);
            assert_eq!(entry.f, f_of(e, &mut fz).unwrap(), "F({e})");
            assert_eq!(entry.g, g_of(e, &mut fz).unwrap(), "G({e})");
        }
        assert_eq!(ledger.partial_sum(4), rational(1156, 975));
        assert_eq!(ledger.e_partial(2), rational(6, 5));
    }

    #[test]
    fn moebius_pairing_is_exact() {
        let mut fz = fz();
        let ledger = SumLedger::build(40, &mut fz).unwrap();
        for e in 1..=40u64 {
            let mut sum = BigRational::zero();
            for d in divisors(e) {
                sum += &ledger.entry(d).unwrap().g;
            }
            assert_eq!(sum, ledger.entry(e).unwrap().f, "e = {e}");
        }
    }

    #[test]
    fn g_matches_brute_force_oracle() {
        let mut fz = fz();
        for e in 1..=24u64 {
            assert_eq!(
                g_of(e, &mut fz).unwrap(),
                brute_force_g(e, &mut fz).unwrap(),
                "e = {e}"
            );
        }
    }

    /// The weighted partial sums grow monotonically and stay strictly
    /// under 1.27095; the unweighted partials stay under 4 log^2 x.
    #[test]
    fn partial_sums_stay_in_their_corridors() {
        let mut fz = fz();
        let ledger = SumLedger::build(72, &mut fz).unwrap();
        assert!(ledger.complete_through(72));
        let head_cap = rational(127_095, 100_000);
        let mut prev_s = BigRational::zero();
        let mut prev_e = BigRational::zero();
        for e in 1..=72u64 {
            let s = ledger.partial_sum(e);
            let ep = ledger.e_partial(e);
            assert!(s >= prev_s, "S not monotone at {e}");
            assert!(ep >= prev_e, "E not monotone at {e}");
            assert!(s < head_cap, "S({e}) exceeds the head bound");
            if e >= 8 {
                let lx = (e as f64).ln();
                assert!(ep.to_f64().unwrap() <= 4.0 * lx * lx, "E({e}) outgrows log^2");
            }
            prev_s = s;
            prev_e = ep;
        }
    }

    #[test]
    fn deep_partials_match_pinned_values() {
        let mut fz = fz();
        let ledger = SumLedger::build(72, &mut fz).unwrap();
        for (bound, expected) in [(24u64, 1.2546867), (72, 1.2666844)] {
            let got = ledger.partial_sum(bound).to_f64().unwrap();
            assert!((got - expected).abs() < 1e-6, "S({bound}) = {got}");
        }
        for (bound, expected) in [(8u64, 1.7255475), (72, 2.8265075)] {
            let got = ledger.e_partial(bound).to_f64().unwrap();
            assert!((got - expected).abs() < 1e-6, "E({bound}) = {got}");
        }
    }

    #[test]
    fn distinct_prime_count_examples() {
        let mut fz = fz();
        let (count, complete) = distinct_prime_factor_count_d(4, &mut fz).unwrap();
        assert_eq!((count, complete), (3, true));
        let (count, complete) = distinct_prime_factor_count_d(8, &mut fz).unwrap();
        assert_eq!((count, complete), (6, true));
    }

    /// 1+i never divides (1+i)^k - 1, so every counted prime has odd norm.
    #[test]
    fn counted_primes_have_odd_norm() {
        let mut fz = fz();
        for k in 8..=16u64 {
            let fv = fz.full_factorization(k).unwrap();
            for (rec, _) in fv.factors {
                assert_eq!(&rec.norm % 2u32, 1u32.into(), "{}", rec.generator);
            }
        }
    }

    #[test]
    fn tail_examples() {
        let got = tail_bound_assembly(200.0, 3.33018, 3.997993, -7.503313, 3.5206, 0.999749);
        assert!((0.5773..=0.5777).contains(&got), "tail = {got}");
        assert!((tail_bound_assembly(1.0, 0.0, 0.0, 0.0, 1.0, 1.0) - 1.0).abs() < 1e-15);
        assert_eq!(tail_bound_assembly(200.0, 0.0, 0.0, 0.0, 0.0, 1.0), 0.0);
    }

    #[test]
    fn mertens_odd_ratio_stays_below_one() {
        for x in [74.0, 100.0, 1000.0, 100_000.0] {
            let ratio = mertens_odd_product_check(x);
            assert!(ratio > 0.0 && ratio <= 1.0, "x = {x}: {ratio}");
        }
        // tightest point: the inequality is nearly sharp at the threshold
        assert!(mertens_odd_product_check(74.0) > 0.99);
    }

    #[test]
    fn square_product_examples() {
        let sharp = odd_prime_square_product(209);
        assert!((sharp - 0.6571469).abs() < 1e-6, "got {sharp}");
        // monotone decreasing toward (8/pi^2)^2
        let limit = (8.0 / std::f64::consts::PI.powi(2)).powi(2);
        assert!(odd_prime_square_product(10) > sharp);
        assert!(sharp > limit);
    }

    #[test]
    fn csv_round_trip_shape() {
        let mut fz = fz();
        let ledger = SumLedger::build(4, &mut fz).unwrap();
        let csv = ledger.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 5);
        assert_eq!(
            lines[0],
            "e,F_num,F_den,G_num,G_den,partial_S_num,partial_S_den,complete"
        );
        assert_eq!(lines[4], "4,36,25,6,25,1156,975,true");
    }
}
