//! The scalar layer: exact rationals and the ring traits the generic matrix
//! code is written against.

use std::fmt::{Debug, Display};
use std::ops::{Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand_chacha::{rand_core::SeedableRng, ChaCha8Rng};

use crate::{Error, Result};

/// The field the whole crate computes over. Always stored reduced, with a
/// positive denominator; the canonical zero is 0/1.
pub type Rational = BigRational;

/// What the generic matrix and polynomial code needs from a coefficient ring.
///
/// `Zero`/`One` bring `Add`/`Mul`; both `Rational` and `MPoly` satisfy the
/// blanket impl.
pub trait Scalar:
    Clone + PartialEq + Debug + Display + Zero + One + Neg<Output = Self> + Sub<Output = Self>
{
}

impl<T> Scalar for T where
    T: Clone + PartialEq + Debug + Display + Zero + One + Neg<Output = T> + Sub<Output = T>
{
}

/// Exact division in an integral domain. Fraction-free elimination only ever
/// divides where Sylvester's identity guarantees exactness, so implementations
/// may panic on an inexact quotient.
pub trait ExactDiv: Sized {
    fn exact_div(&self, rhs: &Self) -> Self;
}

impl ExactDiv for Rational {
    fn exact_div(&self, rhs: &Self) -> Self {
        assert!(!rhs.is_zero(), "exact division by zero");
        self / rhs
    }
}

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `num/den` as a reduced rational; `den` must be nonzero.
pub fn ratio(num: i64, den: i64) -> Rational {
    assert!(den != 0, "zero denominator");
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Renders as "p/q", with "/q" omitted for integers. This is the wire format
/// used by every JSON schema in the crate.
pub fn format_rational(x: &Rational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses "p/q" or "p".
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let parse_int = |t: &str| -> Result<BigInt> {
        t.trim()
            .parse::<BigInt>()
            .map_err(|e| Error::Parse(format!("invalid integer `{t}`: {e}")))
    };
    match s.split_once('/') {
        Some((num, den)) => {
            let den = parse_int(den)?;
            if den.is_zero() {
                return Err(Error::Parse(format!("zero denominator in `{s}`")));
            }
            Ok(Rational::new(parse_int(num)?, den))
        }
        None => Ok(Rational::from_integer(parse_int(s)?)),
    }
}

/// Bound for numerators and denominators of randomly sampled rationals.
pub const RANDOM_BOUND: i64 = 1_000_000;

/// A random rational with numerator uniform in [-10^6, 10^6] and denominator
/// uniform in [1, 10^6].
pub fn random_rational<R: Rng>(rng: &mut R) -> Rational {
    let num = rng.gen_range(-RANDOM_BOUND..=RANDOM_BOUND);
    let den = rng.gen_range(1..=RANDOM_BOUND);
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// A small random rational (entries in [-9, 9] over [1, 4]); used where entry
/// growth matters more than spread.
pub fn small_random_rational<R: Rng>(rng: &mut R) -> Rational {
    let num = rng.gen_range(-9i64..=9);
    let den = rng.gen_range(1i64..=4);
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Deterministic per-work-item RNG: stream `index` of the ChaCha cipher keyed
/// by `seed`. Parallel loops draw independent, reproducible streams.
pub fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Sign of a rational as -1, 0, or 1.
pub fn sign(x: &Rational) -> i8 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

/// Serde adapter for `Rational` fields rendered as "p/q" strings.
pub mod serde_rational {
    use serde::{Deserialize, Deserializer, Serializer};

    use super::{format_rational, parse_rational, Rational};

    pub fn serialize<S: Serializer>(x: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn format_and_parse_round_trip() {
        for (n, d, expect) in [(1, 2, "1/2"), (-3, 1, "-3"), (0, 5, "0"), (4, -6, "-2/3")] {
            let x = ratio(n, d);
            assert_eq!(format_rational(&x), expect);
            assert_eq!(parse_rational(expect).unwrap(), x);
        }
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
    }

    #[test]
    fn random_rational_respects_bounds() {
        let mut rng = trial_rng(7, 0);
        for _ in 0..100 {
            let x = random_rational(&mut rng);
            assert!(x.numer().magnitude() <= &num_bigint::BigUint::from(RANDOM_BOUND as u64 * 2));
            assert!(x.denom() > &BigInt::from(0));
        }
    }

    proptest! {
        // field axioms on random triples, exact
        #[test]
        fn rational_ring_axioms(a in -50i64..50, b in -50i64..50, c in -50i64..50,
                                 da in 1i64..20, db in 1i64..20, dc in 1i64..20) {
            let (x, y, z) = (ratio(a, da), ratio(b, db), ratio(c, dc));
            prop_assert_eq!(&x + &y, &y + &x);
            prop_assert_eq!(&x * &y, &y * &x);
            prop_assert_eq!((&x + &y) + &z, &x + (&y + &z));
            prop_assert_eq!((&x * &y) * &z, &x * (&y * &z));
            prop_assert_eq!(&x * (&y + &z), &x * &y + &x * &z);
        }
    }
}
