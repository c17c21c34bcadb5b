//! Exact arithmetic and density bounds for shifted powers of 1+i in Z\[i\].
//!
//! The library asks, over the Gaussian integers, how often an element can
//! be written as a prime element plus a power of 1+i, and certifies an
//! explicit positive lower bound on the density of such sums. The pieces:
//!
//! * [`gaussian`] — exact arithmetic in Z\[i\]: canonical associates,
//!   division with remainder, gcd/Bezout, and residue classes.
//! * [`sieve`], [`factor`], [`primes`] — rational primes, deterministic
//!   factoring with a budget, and prime elements of Z\[i\] by norm.
//! * [`orders`] — the multiplicative order of 1+i modulo a prime, found
//!   through cyclotomic factorizations, with an on-disk factor cache.
//! * [`series`] — the order-classified series over prime ideals, kept as
//!   exact rationals, with a closed-form tail bound.
//! * [`constants`] — certified interval evaluations of the analytic
//!   constants and the final assembly of the density bound.
//! * [`density`] — exhaustive scans counting representations inside a
//!   disk, checked against a Cauchy–Schwarz floor and a sieve ceiling.
//! * [`covering`] — the covering system on exponents and the explicit
//!   arithmetic progression none of whose members is such a sum.
//! * [`verify`] — the fifteen acceptance checks, runnable as a batch.
//! * [`cli`] — all of the above as subcommands of one binary.

pub mod cli;
pub mod constants;
pub mod covering;
pub mod density;
pub mod error;
pub mod factor;
pub mod gaussian;
pub mod orders;
pub mod primes;
pub mod series;
pub mod sieve;
pub mod verify;

pub use error::{Error, Result};
pub use gaussian::GInt;
