//! Exact scalar arithmetic.
//!
//! Every algebraic module works over arbitrary-precision rationals. The
//! `num-rational` representation already maintains the invariants we need:
//! lowest terms, positive denominator, zero stored as 0/1.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational scalar used throughout the algebraic pipelines.
pub type Rat = BigRational;

/// Integer as a rational.
pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Fraction `n/d`. Panics on zero denominator.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn is_zero(x: &Rat) -> bool {
    x.is_zero()
}

pub fn to_f64(x: &Rat) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        // Out-of-range magnitudes saturate rather than poison with NaN.
        if x.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// Parse a rational from the `p/q` text form used in group and distribution
/// files. Accepts plain integers, an optional leading sign, and ASCII or
/// unicode minus.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let cleaned = s.trim().replace('\u{2212}', "-");
    if cleaned.is_empty() {
        return Err(Error::Parse("empty rational literal".into()));
    }
    match cleaned.split_once('/') {
        Some((num, den)) => {
            let n: BigInt = num
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad numerator in {s:?}")))?;
            let d: BigInt = den
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad denominator in {s:?}")))?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(Rat::new(n, d))
        }
        None => {
            let n: BigInt = cleaned
                .parse()
                .map_err(|_| Error::Parse(format!("bad rational literal {s:?}")))?;
            Ok(Rat::from_integer(n))
        }
    }
}

/// Render a rational as `p` or `p/q`, bit-exact round-trip with [`parse_rat`].
pub fn format_rat(x: &Rat) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}
