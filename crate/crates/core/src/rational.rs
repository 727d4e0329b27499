//! Exact rational scalars and their `"num/den"` text encoding.

use alloc::format;
use alloc::string::{String, ToString};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always in lowest terms with a positive
/// denominator.
pub type Rational = num_rational::BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// `2^-bits`.
pub fn pow2_neg(bits: u32) -> Rational {
    Rational::new(BigInt::one(), BigInt::one() << bits as usize)
}

/// `2^bits` as an integer.
pub fn pow2(bits: u32) -> BigInt {
    BigInt::one() << bits as usize
}

/// Encodes as `"num/den"`; integers keep the explicit `/1`.
pub fn encode(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Parses `"num/den"` or a bare integer. The result is reduced.
pub fn decode(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Input(format!("malformed rational {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::Input(format!("zero denominator in {s:?}")));
            }
            Ok(Rational::new(n, d))
        }
        None => {
            let n: BigInt = s.parse().map_err(|_| bad())?;
            Ok(Rational::from_integer(n))
        }
    }
}

/// True when `q` is an integer multiple of `2^-bits`.
pub fn on_grid(q: &Rational, bits: u32) -> bool {
    let scaled = q * Rational::from_integer(pow2(bits));
    scaled.is_integer()
}

/// Rounds to the nearest multiple of `2^-bits`, ties away from zero.
pub fn round_to_grid(q: &Rational, bits: u32) -> Rational {
    let scale = pow2(bits);
    let scaled = q * Rational::from_integer(scale.clone());
    Rational::new(scaled.round().to_integer(), scale)
}

/// `ceil(log2(q))` for positive `q`, exact.
pub fn ceil_log2(q: &Rational) -> i64 {
    assert!(q.is_positive(), "log2 of a non-positive rational");
    // Start from the bit-length estimate and correct by at most a step or two.
    let est = q.numer().bits() as i64 - q.denom().bits() as i64;
    let mut k = est - 1;
    while pow2_signed(k) < *q {
        k += 1;
    }
    while k > i64::MIN + 1 && pow2_signed(k - 1) >= *q {
        k -= 1;
    }
    k
}

fn pow2_signed(k: i64) -> Rational {
    if k >= 0 {
        Rational::from_integer(pow2(k as u32))
    } else {
        pow2_neg((-k) as u32)
    }
}

/// Lossy conversion for reporting only.
pub fn to_f64(q: &Rational) -> f64 {
    // Shift both parts into f64 range before dividing.
    let n = q.numer();
    let d = q.denom();
    let shift = (n.bits().max(d.bits()) as i64 - 60).max(0) as usize;
    let nf = bigint_to_f64(&(n >> shift));
    let df = bigint_to_f64(&(d >> shift));
    if df == 0.0 {
        // The denominator vanished under the shift: the value is huge.
        return if n.is_negative() { f64::NEG_INFINITY } else { f64::INFINITY };
    }
    nf / df
}

fn bigint_to_f64(b: &BigInt) -> f64 {
    let s = b.to_string();
    s.parse::<f64>().unwrap_or(0.0)
}

/// gcd of the absolute values; zero when both are zero.
pub fn gcd(a: &BigInt, b: &BigInt) -> BigInt {
    a.gcd(b)
}

/// Serde helpers for `Rational` as a `"num/den"` string.
pub mod serde_rational {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> core::result::Result<S::Ok, S::Error> {
        s.serialize_str(&encode(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> core::result::Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        decode(&s).map_err(serde::de::Error::custom)
    }
}

/// Serde helpers for `Option<Rational>`.
pub mod serde_rational_opt {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(
        q: &Option<Rational>,
        s: S,
    ) -> core::result::Result<S::Ok, S::Error> {
        match q {
            Some(q) => s.serialize_some(&encode(q)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> core::result::Result<Option<Rational>, D::Error> {
        let s = Option::<String>::deserialize(d)?;
        s.map(|s| decode(&s).map_err(serde::de::Error::custom)).transpose()
    }
}
