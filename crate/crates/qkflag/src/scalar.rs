//! Exact rational scalars.
//!
//! All coefficient arithmetic is arbitrary-precision rational; there is no
//! floating point anywhere in the crate. `BigRational` keeps values in lowest
//! terms with a positive denominator, which the JSON encoding relies on.

use num::{BigInt, BigRational, One, Signed, Zero};

use crate::error::Error;

pub type Scalar = BigRational;

/// Scalar from a machine integer.
pub fn scalar_int(n: i64) -> Scalar {
    BigRational::from_integer(BigInt::from(n))
}

/// Parse `"a"` or `"a/b"` with optional leading sign. Rejects zero denominators.
pub fn parse_scalar(s: &str) -> Result<Scalar, Error> {
    let bad = |m: &str| Error::invalid("scalar", format!("{m}: {s:?}"));
    let (num_s, den_s) = match s.split_once('/') {
        Some((a, b)) => (a, Some(b)),
        None => (s, None),
    };
    let num: BigInt = num_s.trim().parse().map_err(|_| bad("bad numerator"))?;
    let den: BigInt = match den_s {
        Some(b) => b.trim().parse().map_err(|_| bad("bad denominator"))?,
        None => BigInt::one(),
    };
    if den.is_zero() {
        return Err(bad("zero denominator"));
    }
    Ok(BigRational::new(num, den))
}

/// Render as `"a"` for integers, `"a/b"` otherwise.
pub fn format_scalar(x: &Scalar) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// `x^k` for a possibly negative exponent. Panics on `0^k` with `k < 0`.
pub fn scalar_pow(x: &Scalar, k: i32) -> Scalar {
    if k >= 0 {
        num::pow::pow(x.clone(), k as usize)
    } else {
        assert!(!x.is_zero(), "zero scalar raised to negative power");
        num::pow::pow(x.recip(), (-k) as usize)
    }
}

/// True if `x` is positive. Used only for display decisions.
pub fn scalar_is_positive(x: &Scalar) -> bool {
    x.is_positive()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        for s in ["0", "7", "-3", "22/7", "-5/9"] {
            let v = parse_scalar(s).unwrap();
            assert_eq!(format_scalar(&v), s);
        }
        // Non-canonical inputs normalize: lowest terms, sign on the numerator.
        assert_eq!(format_scalar(&parse_scalar("4/6").unwrap()), "2/3");
        assert_eq!(format_scalar(&parse_scalar("1/-2").unwrap()), "-1/2");
        assert!(parse_scalar("1/0").is_err());
        assert!(parse_scalar("x").is_err());
    }

    #[test]
    fn pow_handles_negative_exponents() {
        let x = parse_scalar("2/3").unwrap();
        assert_eq!(scalar_pow(&x, 2), parse_scalar("4/9").unwrap());
        assert_eq!(scalar_pow(&x, -2), parse_scalar("9/4").unwrap());
        assert_eq!(scalar_pow(&x, 0), scalar_int(1));
    }
}
