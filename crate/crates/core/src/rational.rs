//! Exact rational arithmetic helpers used by the capacity-region code.
//!
//! Region membership and corner points must be exact, so everything here is
//! arbitrary precision; floats only appear at the edges (config parsing and
//! display).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Rational from an integer.
pub fn rat_int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

/// Rational `num/den`.
pub fn rat(num: i64, den: i64) -> Rational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Exact rational value of a finite float (every finite f64 is rational).
pub fn rat_from_f64(x: f64) -> Result<Rational> {
    BigRational::from_float(x)
        .ok_or_else(|| Error::InvalidInput(format!("{x} is not a finite number")))
}

/// Parses "3", "3/2", or a decimal like "0.75" into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = |m: &str| Error::InvalidInput(format!("cannot parse '{s}' as a rational: {m}"));
    if let Some((num, den)) = s.split_once('/') {
        let num: BigInt = num.trim().parse().map_err(|_| bad("bad numerator"))?;
        let den: BigInt = den.trim().parse().map_err(|_| bad("bad denominator"))?;
        if den.is_zero() {
            return Err(bad("zero denominator"));
        }
        return Ok(BigRational::new(num, den));
    }
    if let Ok(n) = s.parse::<BigInt>() {
        return Ok(BigRational::from_integer(n));
    }
    let x: f64 = s.parse().map_err(|_| bad("not a number"))?;
    rat_from_f64(x)
}

/// Lowest-terms display: "2", "-3/4".
pub fn rat_to_string(r: &Rational) -> String {
    if r.denom() == &BigInt::from(1) {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Nearest f64 (for CSV output and plotting; never used for decisions).
pub fn rat_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Compact display for coefficients: exact decimal when one exists ("0.5"),
/// otherwise a fraction ("1/3").
pub fn rat_coeff_string(r: &Rational) -> String {
    if r.denom() == &BigInt::from(1) {
        return r.numer().to_string();
    }
    // A rational has a finite decimal expansion iff its denominator is 2^a 5^b.
    let mut d = r.denom().abs();
    for p in [2u8, 5u8] {
        let p = BigInt::from(p);
        while (&d % &p).is_zero() {
            d /= &p;
        }
    }
    if d == BigInt::from(1) {
        let f = rat_to_f64(r);
        if let Some(back) = BigRational::from_float(f) {
            if &back == r {
                return format!("{f}");
            }
        }
    }
    rat_to_string(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("3").unwrap(), rat_int(3));
        assert_eq!(parse_rational("3/2").unwrap(), rat(3, 2));
        assert_eq!(parse_rational("0.75").unwrap(), rat(3, 4));
        assert_eq!(parse_rational("-1/4").unwrap(), rat(-1, 4));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
    }

    #[test]
    fn display_forms() {
        assert_eq!(rat_to_string(&rat(4, 2)), "2");
        assert_eq!(rat_to_string(&rat(3, 2)), "3/2");
        assert_eq!(rat_coeff_string(&rat(1, 2)), "0.5");
        assert_eq!(rat_coeff_string(&rat(1, 3)), "1/3");
        assert_eq!(rat_coeff_string(&rat_int(2)), "2");
    }

    #[test]
    fn exact_float_round_trip() {
        assert_eq!(rat_from_f64(0.5).unwrap(), rat(1, 2));
        assert_eq!(rat_from_f64(1.0).unwrap(), rat_int(1));
        assert!(rat_from_f64(f64::NAN).is_err());
    }
}
