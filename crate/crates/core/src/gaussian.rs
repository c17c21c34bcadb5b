//! Arithmetic in the ring of Gaussian integers Z\[i\].
//!
//! `GInt` is an exact a+bi with arbitrary-precision components. The ring is
//! Euclidean for the norm a^2 + b^2, and `divrem` implements the division
//! with nearest-integer quotient rounding (ties toward zero), which gives the
//! remainder bound norm(r) <= norm(b)/2 used everywhere downstream.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;

/// A Gaussian integer re + im*i.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GInt {
    re: BigInt,
    im: BigInt,
}

impl GInt {
    pub fn new(re: BigInt, im: BigInt) -> Self {
        GInt { re, im }
    }

    pub fn from_i64(re: i64, im: i64) -> Self {
        GInt::new(BigInt::from(re), BigInt::from(im))
    }

    pub fn zero() -> Self {
        GInt::from_i64(0, 0)
    }

    pub fn one() -> Self {
        GInt::from_i64(1, 0)
    }

    /// The imaginary unit i.
    pub fn unit_i() -> Self {
        GInt::from_i64(0, 1)
    }

    /// The ramified element 1+i, the base of every power in this crate.
    pub fn one_plus_i() -> Self {
        GInt::from_i64(1, 1)
    }

    pub fn re(&self) -> &BigInt {
        &self.re
    }

    pub fn im(&self) -> &BigInt {
        &self.im
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    /// norm(a+bi) = a^2 + b^2, always >= 0.
    pub fn norm(&self) -> BigUint {
        (&self.re * &self.re + &self.im * &self.im)
            .to_biguint()
            .expect("norm is non-negative")
    }

    /// The square of the house (maximum absolute value over embeddings).
    /// For an imaginary quadratic field this is exactly the norm.
    pub fn house_squared(&self) -> BigUint {
        self.norm()
    }

    /// house as a float, for radius bookkeeping only.
    pub fn house(&self) -> f64 {
        biguint_to_f64(&self.norm()).sqrt()
    }

    pub fn conj(&self) -> GInt {
        GInt::new(self.re.clone(), -&self.im)
    }

    fn mul_i(&self) -> GInt {
        GInt::new(-&self.im, self.re.clone())
    }

    pub fn is_unit(&self) -> bool {
        self.norm().is_one()
    }

    /// z^k by binary exponentiation; z^0 = 1.
    pub fn pow(&self, mut k: u64) -> GInt {
        let mut base = self.clone();
        let mut acc = GInt::one();
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// z^k reduced modulo m after every multiplication, so intermediate
    /// values stay at the size of m.
    pub fn pow_mod(&self, k: u64, m: &GInt) -> GInt {
        self.pow_mod_bits(&BigUint::from(k), m)
    }

    pub fn pow_mod_bits(&self, k: &BigUint, m: &GInt) -> GInt {
        assert!(!m.is_zero(), "zero modulus");
        let mut base = self.divrem(m).1;
        let mut acc = GInt::one().divrem(m).1;
        for bit in 0..k.bits() {
            if k.bit(bit) {
                acc = (&acc * &base).divrem(m).1;
            }
            if bit + 1 < k.bits() {
                base = (&base * &base).divrem(m).1;
            }
        }
        acc
    }

    /// Euclidean division: q with components the nearest integers to the
    /// exact quotient (ties toward zero) and r = self - q*rhs, so that
    /// norm(r) <= norm(rhs)/2.
    ///
    /// Panics if `rhs` is zero.
    pub fn divrem(&self, rhs: &GInt) -> (GInt, GInt) {
        assert!(!rhs.is_zero(), "division by zero in Z[i]");
        let den = BigInt::from(rhs.norm());
        let num = self * &rhs.conj();
        let q = GInt::new(
            round_nearest_ties_to_zero(&num.re, &den),
            round_nearest_ties_to_zero(&num.im, &den),
        );
        let r = self - &(&q * rhs);
        (q, r)
    }

    pub fn divides(&self, other: &GInt) -> bool {
        other.divrem(self).1.is_zero()
    }

    /// a ≡ b (mod m). Panics on zero modulus.
    pub fn congruent(a: &GInt, b: &GInt, m: &GInt) -> bool {
        assert!(!m.is_zero(), "zero modulus");
        (a - b).divrem(m).1.is_zero()
    }

    /// The unique associate with re > 0 and im >= 0.
    ///
    /// Panics on zero, which has no canonical associate.
    pub fn canonical_associate(&self) -> GInt {
        assert!(!self.is_zero(), "zero has no canonical associate");
        let mut z = self.clone();
        for _ in 0..4 {
            if z.re.sign() == Sign::Plus && z.im.sign() != Sign::Minus {
                return z;
            }
            z = z.mul_i();
        }
        unreachable!("one of the four associates is canonical");
    }

    pub fn is_canonical(&self) -> bool {
        !self.is_zero() && self == &self.canonical_associate()
    }

    pub fn is_associate_of(&self, other: &GInt) -> bool {
        if self.is_zero() || other.is_zero() {
            return self.is_zero() && other.is_zero();
        }
        self.canonical_associate() == other.canonical_associate()
    }

    /// Greatest common divisor, returned canonical. gcd(0, z) = canonical(z).
    ///
    /// Panics if both arguments are zero.
    pub fn gcd(a: &GInt, b: &GInt) -> GInt {
        assert!(
            !(a.is_zero() && b.is_zero()),
            "gcd(0, 0) is undefined in Z[i]"
        );
        let mut a = a.clone();
        let mut b = b.clone();
        while !b.is_zero() {
            let r = a.divrem(&b).1;
            a = b;
            b = r;
        }
        a.canonical_associate()
    }

    /// Extended Euclid: (g, u, v) with u*a + v*b = g. g is an associate of
    /// gcd(a, b), not canonicalized, so the Bezout identity holds literally.
    pub fn ext_gcd(a: &GInt, b: &GInt) -> (GInt, GInt, GInt) {
        assert!(
            !(a.is_zero() && b.is_zero()),
            "gcd(0, 0) is undefined in Z[i]"
        );
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut u0, mut u1) = (GInt::one(), GInt::zero());
        let (mut v0, mut v1) = (GInt::zero(), GInt::one());
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            r0 = std::mem::replace(&mut r1, r);
            let u = &u0 - &(&q * &u1);
            u0 = std::mem::replace(&mut u1, u);
            let v = &v0 - &(&q * &v1);
            v0 = std::mem::replace(&mut v1, v);
        }
        (r0, u0, v0)
    }

    /// Inverse of a unit (conjugate, since the norm is 1). Panics otherwise.
    pub fn unit_inverse(&self) -> GInt {
        assert!(self.is_unit(), "unit_inverse of a non-unit");
        self.conj()
    }

    /// Both components as i64, when they fit.
    pub fn to_i64_pair(&self) -> Option<(i64, i64)> {
        Some((self.re.to_i64()?, self.im.to_i64()?))
    }
}

/// Round p/q (q > 0) to the nearest integer, ties toward zero.
fn round_nearest_ties_to_zero(p: &BigInt, q: &BigInt) -> BigInt {
    let (f, r) = p.div_mod_floor(q);
    let two_r: BigInt = r << 1;
    match two_r.cmp(q) {
        Ordering::Less => f,
        Ordering::Greater => f + 1,
        // Exact half: f + 1/2. Toward zero is f for f >= 0, f+1 for f < 0.
        Ordering::Equal => {
            if f.sign() == Sign::Minus {
                f + 1
            } else {
                f
            }
        }
    }
}

pub(crate) fn biguint_to_f64(n: &BigUint) -> f64 {
    n.to_f64().unwrap_or(f64::INFINITY)
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl<'a, 'b> $trait<&'b GInt> for &'a GInt {
            type Output = GInt;
            fn $method(self, rhs: &'b GInt) -> GInt {
                GInt::new(&self.re $op &rhs.re, &self.im $op &rhs.im)
            }
        }
        impl $trait for GInt {
            type Output = GInt;
            fn $method(self, rhs: GInt) -> GInt {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, +);
forward_binop!(Sub, sub, -);

impl<'a, 'b> Mul<&'b GInt> for &'a GInt {
    type Output = GInt;
    fn mul(self, rhs: &'b GInt) -> GInt {
        GInt::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}

impl Mul for GInt {
    type Output = GInt;
    fn mul(self, rhs: GInt) -> GInt {
        (&self).mul(&rhs)
    }
}

impl Neg for &GInt {
    type Output = GInt;
    fn neg(self) -> GInt {
        GInt::new(-&self.re, -&self.im)
    }
}

impl Neg for GInt {
    type Output = GInt;
    fn neg(self) -> GInt {
        (&self).neg()
    }
}

impl fmt::Display for GInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_negative() {
            write!(f, "{}-{}i", self.re, self.im.magnitude())
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

impl fmt::Debug for GInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GInt({self})")
    }
}

impl FromStr for GInt {
    type Err = Error;

    /// Accepts "a+bi" / "a-bi" with decimal components, plus the natural
    /// degenerate forms "a", "bi", "i", "-i", "a+i", "a-i".
    fn from_str(s: &str) -> Result<Self, Error> {
        let t = s.trim();
        let bad = || Error::ParseGInt(s.to_string());
        if t.is_empty() {
            return Err(bad());
        }
        let parse_int = |txt: &str| -> Result<BigInt, Error> {
            BigInt::from_str(txt).map_err(|_| bad())
        };
        if let Some(body) = t.strip_suffix(['i', 'I']) {
            // Split off the imaginary coefficient at the last sign that is
            // not the leading sign of the real part.
            let split = body
                .char_indices()
                .skip(1)
                .filter(|&(_, c)| c == '+' || c == '-')
                .last()
                .map(|(idx, _)| idx);
            let (re_txt, im_txt) = match split {
                Some(idx) => (&body[..idx], &body[idx..]),
                None => ("", body),
            };
            let im = match im_txt {
                "" | "+" => BigInt::one(),
                "-" => -BigInt::one(),
                other => parse_int(other)?,
            };
            let re = if re_txt.is_empty() {
                BigInt::zero()
            } else {
                parse_int(re_txt)?
            };
            Ok(GInt::new(re, im))
        } else {
            Ok(GInt::new(parse_int(t)?, BigInt::zero()))
        }
    }
}

impl serde::Serialize for GInt {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for GInt {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn g(re: i64, im: i64) -> GInt {
        GInt::from_i64(re, im)
    }

    #[test]
    fn norm_examples() {
        assert_eq!(g(1365, 1365).norm(), BigUint::from(3726450u64));
        assert_eq!(g(0, 0).norm(), BigUint::from(0u32));
        assert_eq!(g(-3, 4).norm(), BigUint::from(25u32));
    }

    #[test]
    fn powers_of_one_plus_i() {
        assert_eq!(GInt::one_plus_i().pow(23), g(2048, -2048));
        assert_eq!(GInt::one_plus_i().pow(8), g(16, 0));
        assert_eq!(GInt::one_plus_i().pow(0), GInt::one());
        // norm((1+i)^k) = 2^k
        for k in 0..80u64 {
            let n = GInt::one_plus_i().pow(k).norm();
            assert_eq!(n, BigUint::from(1u8) << k);
        }
    }

    #[test]
    fn divrem_examples() {
        let (q, r) = g(3, 0).divrem(&GInt::one_plus_i());
        assert_eq!((q, r), (g(1, -1), g(1, 0)));
        let (q, r) = g(-3, 2).divrem(&g(2, 3));
        assert_eq!((q, r), (g(0, 1), g(0, 0)));
    }

    #[test]
    #[should_panic(expected = "division by zero")]
    fn divrem_by_zero_panics() {
        let _ = g(1, 2).divrem(&GInt::zero());
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(GInt::gcd(&g(5, 0), &g(3, 1)), g(1, 2));
        assert_eq!(GInt::gcd(&g(0, 0), &g(2, -1)), g(1, 2));
        assert_eq!(GInt::gcd(&g(4, 0), &g(6, 0)), g(2, 0));
    }

    #[test]
    #[should_panic(expected = "gcd(0, 0)")]
    fn gcd_of_zeros_panics() {
        let _ = GInt::gcd(&GInt::zero(), &GInt::zero());
    }

    #[test]
    fn canonical_associate_examples() {
        assert_eq!(g(2, -1).canonical_associate(), g(1, 2));
        assert_eq!(g(0, 1).canonical_associate(), g(1, 0));
        assert_eq!(g(-3, 0).canonical_associate(), g(3, 0));
        assert_eq!(g(1, 1).canonical_associate(), g(1, 1));
        assert!(g(1, 0).is_canonical());
        assert!(!g(0, 1).is_canonical());
    }

    #[test]
    #[should_panic(expected = "canonical associate")]
    fn canonical_of_zero_panics() {
        let _ = GInt::zero().canonical_associate();
    }

    /// norm((1+i)^k - 1) = 2^k + 1 - 2^(k/2+1) cos(k pi/4), which is an exact
    /// integer identity once cos is resolved by k mod 8.
    #[test]
    fn norm_of_power_minus_one_closed_form() {
        for k in 1..=64u64 {
            let n = BigInt::from((GInt::one_plus_i().pow(k) - GInt::one()).norm());
            let two_k = BigInt::one() << k;
            let s: BigInt = match k % 8 {
                0 => BigInt::one() << (k / 2 + 1),
                1 | 7 => BigInt::one() << ((k + 1) / 2),
                2 | 6 => BigInt::zero(),
                3 | 5 => -(BigInt::one() << ((k + 1) / 2)),
                4 => -(BigInt::one() << (k / 2 + 1)),
                _ => unreachable!(),
            };
            assert_eq!(n, &two_k + 1 - &s, "k = {k}");
            // growth bound with c = (n+1) 2^n = 12 for n = 2
            assert!(n <= BigInt::from(12) * &two_k, "k = {k}");
        }
    }

    #[test]
    fn display_and_parse() {
        for (z, s) in [
            (g(3, 2), "3+2i"),
            (g(3, -2), "3-2i"),
            (g(-3, -2), "-3-2i"),
            (g(0, 0), "0+0i"),
            (g(1365, 1365), "1365+1365i"),
        ] {
            assert_eq!(z.to_string(), s);
            assert_eq!(s.parse::<GInt>().unwrap(), z);
        }
        assert_eq!("7".parse::<GInt>().unwrap(), g(7, 0));
        assert_eq!("-7".parse::<GInt>().unwrap(), g(-7, 0));
        assert_eq!("2i".parse::<GInt>().unwrap(), g(0, 2));
        assert_eq!("-2i".parse::<GInt>().unwrap(), g(0, -2));
        assert_eq!("i".parse::<GInt>().unwrap(), g(0, 1));
        assert_eq!("-i".parse::<GInt>().unwrap(), g(0, -1));
        assert_eq!("4+i".parse::<GInt>().unwrap(), g(4, 1));
        assert_eq!("4-i".parse::<GInt>().unwrap(), g(4, -1));
        assert!("".parse::<GInt>().is_err());
        assert!("3+2j".parse::<GInt>().is_err());
        assert!("1+2+3i".parse::<GInt>().is_err());
    }

    #[test]
    fn congruence_examples() {
        // 2048 = 7*292 + 4, so (1+i)^23 = 2048-2048i ≡ 4-4i mod 7
        assert!(GInt::congruent(
            &g(2048, -2048),
            &g(4, -4),
            &g(7, 0)
        ));
        assert!(!GInt::congruent(&g(1, 0), &g(0, 0), &g(1, 1)));
        assert!(GInt::congruent(&g(1, 0), &g(0, 1), &g(1, 1)));
    }

    fn arb_gint() -> impl Strategy<Value = GInt> {
        let component = prop_oneof![
            -1000i64..1000,
            any::<i64>().prop_map(|v| v >> 16),
        ];
        (component.clone(), component).prop_map(|(a, b)| g(a, b))
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_gint(), b in arb_gint(), c in arb_gint()) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a + &(-&a), GInt::zero());
        }

        #[test]
        fn norm_is_multiplicative(a in arb_gint(), b in arb_gint()) {
            prop_assert_eq!((&a * &b).norm(), a.norm() * b.norm());
        }

        #[test]
        fn divrem_is_euclidean(a in arb_gint(), b in arb_gint()) {
            prop_assume!(!b.is_zero());
            let (q, r) = a.divrem(&b);
            prop_assert_eq!(&(&q * &b) + &r, a);
            // 2 norm(r) <= norm(b)
            prop_assert!(r.norm() * 2u32 <= b.norm());
        }

        #[test]
        fn canonical_is_constant_on_associate_classes(a in arb_gint()) {
            prop_assume!(!a.is_zero());
            let c = a.canonical_associate();
            prop_assert!(c.is_canonical());
            for u in [GInt::one(), GInt::unit_i(), -GInt::one(), -GInt::unit_i()] {
                prop_assert_eq!((&a * &u).canonical_associate(), c.clone());
            }
        }

        #[test]
        fn gcd_divides_both_and_is_canonical(a in arb_gint(), b in arb_gint()) {
            prop_assume!(!a.is_zero() || !b.is_zero());
            let d = GInt::gcd(&a, &b);
            prop_assert!(d.is_canonical());
            prop_assert!(d.divides(&a));
            prop_assert!(d.divides(&b));
            let (e, u, v) = GInt::ext_gcd(&a, &b);
            prop_assert_eq!(&(&u * &a) + &(&v * &b), e.clone());
            prop_assert!(e.is_associate_of(&d));
        }

        #[test]
        fn display_parse_round_trip(a in arb_gint()) {
            prop_assert_eq!(a.to_string().parse::<GInt>().unwrap(), a);
        }

        #[test]
        fn pow_mod_matches_pow(a in arb_gint(), k in 0u64..24, m in arb_gint()) {
            prop_assume!(!m.is_zero());
            let direct = a.pow(k).divrem(&m).1;
            let modular = a.pow_mod(k, &m);
            prop_assert!(GInt::congruent(&direct, &modular, &m));
        }
    }
}
