//! Exact rational scalars.

use std::str::FromStr;

use num::{BigInt, BigRational, One, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always in lowest terms with positive denominator.
pub type Scalar = BigRational;

pub fn int(n: i64) -> Scalar {
    BigRational::from_integer(BigInt::from(n))
}

pub fn zero() -> Scalar {
    Scalar::zero()
}

pub fn one() -> Scalar {
    Scalar::one()
}

/// Parses `"3"`, `"-3/2"` or `"0"`.
pub fn parse(s: &str) -> Result<Scalar> {
    let t = s.trim();
    let r = BigRational::from_str(t).map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
    Ok(r)
}

/// Canonical text form: `"3"` for integers, `"-3/2"` otherwise.
pub fn format(x: &Scalar) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Complex conjugation. Trivial over the rationals.
pub fn conj(x: &Scalar) -> Scalar {
    x.clone()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_normalizes() {
        let x = parse("6/-4").unwrap_or_else(|_| parse("-6/4").unwrap());
        assert_eq!(format(&x), "-3/2");
        assert_eq!(format(&parse("4/2").unwrap()), "2");
        assert!(parse("abc").is_err());
    }
}
