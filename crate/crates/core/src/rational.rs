//! Exact rational scalars used throughout the workbench.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact rational number. All semantics are computed in this type.
pub type Q = BigRational;

pub fn int(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn frac(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

pub fn zero() -> Q {
    Q::zero()
}

pub fn one() -> Q {
    Q::one()
}

/// Smallest integer `>= q`.
pub fn ceil(q: &Q) -> BigInt {
    q.ceil().to_integer()
}

/// Largest integer `<= q`.
pub fn floor(q: &Q) -> BigInt {
    q.floor().to_integer()
}

pub fn min(a: &Q, b: &Q) -> Q {
    if a <= b {
        a.clone()
    } else {
        b.clone()
    }
}

pub fn max(a: &Q, b: &Q) -> Q {
    if a >= b {
        a.clone()
    } else {
        b.clone()
    }
}

/// Formats `q` in lowest terms: `"p/q"`, or `"p"` when the denominator is 1.
pub fn format(q: &Q) -> String {
    // BigRational keeps itself reduced with a positive denominator.
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational literal `{0}`")]
pub struct ParseRationalError(pub String);

/// Parses `"p"`, `"p/q"` (q > 0), with an optional leading sign.
pub fn parse(text: &str) -> Result<Q, ParseRationalError> {
    let err = || ParseRationalError(text.to_string());
    let trimmed = text.trim();
    let (num, den) = match trimmed.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (trimmed, "1"),
    };
    let num = BigInt::from_str(num).map_err(|_| err())?;
    let den = BigInt::from_str(den).map_err(|_| err())?;
    if !den.is_positive() {
        return Err(err());
    }
    Ok(Q::new(num, den))
}

/// `true` when `q` is an integer.
pub fn is_integer(q: &Q) -> bool {
    q.denom().is_one()
}

/// Converts a nonnegative integral `BigInt` index into `u64`, saturating.
pub(crate) fn to_index(n: &BigInt) -> u64 {
    if n.is_negative() {
        return 0;
    }
    u64::try_from(n).unwrap_or(u64::MAX)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn format_lowest_terms() {
        assert_eq!(format(&frac(6, 4)), "3/2");
        assert_eq!(format(&frac(-7, 2)), "-7/2");
        assert_eq!(format(&int(5)), "5");
        assert_eq!(format(&frac(0, 9)), "0");
    }

    #[test]
    fn parse_accepts_both_forms() {
        assert_eq!(parse("-7/2").unwrap(), frac(-7, 2));
        assert_eq!(parse("4").unwrap(), int(4));
        assert_eq!(parse(" 10/4 ").unwrap(), frac(5, 2));
        assert!(parse("1/0").is_err());
        assert!(parse("1/-2").is_err());
        assert!(parse("x").is_err());
    }

    #[test]
    fn floor_ceil() {
        assert_eq!(ceil(&frac(7, 2)), BigInt::from(4));
        assert_eq!(floor(&frac(-7, 2)), BigInt::from(-4));
        assert_eq!(ceil(&int(3)), BigInt::from(3));
    }
}
