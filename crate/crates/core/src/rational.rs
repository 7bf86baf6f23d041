//! Exact rational scalars.
//!
//! Every coordinate, volume and support value in the crate is a
//! [`Rational`]: an arbitrary-precision fraction kept in lowest terms with a
//! positive denominator. Text form is `"p/q"` or a plain integer `"p"`.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

/// Sum of many rationals, reduced once at the end. Cheaper than repeated
/// `+=` when the denominators are unrelated.
#[derive(Clone, Debug)]
pub struct RationalSum {
    num: BigInt,
    den: BigInt,
}

impl Default for RationalSum {
    fn default() -> Self {
        RationalSum { num: BigInt::zero(), den: BigInt::one() }
    }
}

impl RationalSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, r: &Rational) {
        if r.denom() == &self.den {
            self.num += r.numer();
        } else {
            self.num = &self.num * r.denom() + r.numer() * &self.den;
            self.den *= r.denom();
        }
    }

    pub fn sub(&mut self, r: &Rational) {
        if r.denom() == &self.den {
            self.num -= r.numer();
        } else {
            self.num = &self.num * r.denom() - r.numer() * &self.den;
            self.den *= r.denom();
        }
    }

    pub fn finish(self) -> Rational {
        Rational::new(self.num, self.den)
    }
}

/// Integer-valued rational.
pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// `p/q` reduced to lowest terms. Panics if `q == 0`.
pub fn frac(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

/// Parses `"p/q"` or `"p"`; surrounding whitespace is ignored.
pub fn parse_rational(text: &str) -> Result<Rational, String> {
    let text = text.trim();
    if text.is_empty() {
        return Err("empty rational".to_string());
    }
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num = BigInt::from_str(num).map_err(|_| format!("invalid numerator in '{text}'"))?;
    let den = BigInt::from_str(den).map_err(|_| format!("invalid denominator in '{text}'"))?;
    if den.is_zero() {
        return Err(format!("zero denominator in '{text}'"));
    }
    Ok(Rational::new(num, den))
}

/// Lowest-terms text form; integers print without a denominator.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Nearest `f64`; only for reporting and Monte-Carlo comparisons.
pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Numerator and denominator too large for a direct conversion.
        let shift = r.numer().bits().max(r.denom().bits()).saturating_sub(900);
        let n = (r.numer() >> shift).to_f64().unwrap_or(f64::NAN);
        let d = (r.denom() >> shift).to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Smallest rational with denominator `2^bits` that is `>= r`.
pub fn round_up(r: &Rational, bits: u32) -> Rational {
    let scale = BigInt::one() << bits;
    let scaled = r * Rational::from_integer(scale.clone());
    Rational::new(scaled.ceil().to_integer(), scale)
}

/// Largest rational with denominator `2^bits` that is `<= r`.
pub fn round_down(r: &Rational, bits: u32) -> Rational {
    let scale = BigInt::one() << bits;
    let scaled = r * Rational::from_integer(scale.clone());
    Rational::new(scaled.floor().to_integer(), scale)
}

/// `r^e` for a non-negative integer exponent.
pub fn pow(r: &Rational, e: u32) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..e {
        acc *= r;
    }
    acc
}

/// `r^e` where `e` must be an integer (possibly negative).
pub fn pow_rational_exponent(r: &Rational, e: &Rational) -> Option<Rational> {
    if !e.is_integer() {
        return None;
    }
    let k = e.to_integer().to_i64()?;
    let base = pow(r, k.unsigned_abs() as u32);
    if k < 0 {
        if base.is_zero() {
            return None;
        }
        Some(base.recip())
    } else {
        Some(base)
    }
}

pub fn sign(r: &Rational) -> i32 {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}

/// Serde adapters that (de)serialize rationals as strings.
pub mod serde_str {
    use super::{format_rational, parse_rational, Rational};
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        parse_rational(&text).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unreduced_sum_matches() {
        let mut acc = RationalSum::new();
        let mut plain = zero();
        for k in 1..40i64 {
            let r = frac(k * k - 7, 3 * k + 1);
            if k % 3 == 0 {
                acc.sub(&r);
                plain -= &r;
            } else {
                acc.add(&r);
                plain += &r;
            }
        }
        assert_eq!(acc.finish(), plain);
    }

    #[test]
    fn parses_fractions_and_integers() {
        assert_eq!(parse_rational("1/3").unwrap(), frac(1, 3));
        assert_eq!(parse_rational(" -4 ").unwrap(), int(-4));
        assert_eq!(parse_rational("2/-4").unwrap(), frac(-1, 2));
        assert_eq!(parse_rational("6/8").unwrap(), frac(3, 4));
    }

    #[test]
    fn rejects_malformed() {
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("").is_err());
        assert!(parse_rational("a/2").is_err());
        assert!(parse_rational("1.5").is_err());
    }

    #[test]
    fn formats_lowest_terms() {
        assert_eq!(format_rational(&frac(2, 4)), "1/2");
        assert_eq!(format_rational(&frac(-6, 3)), "-2");
        assert_eq!(format_rational(&zero()), "0");
    }

    #[test]
    fn rounding_brackets_value() {
        let r = frac(1, 3);
        let lo = round_down(&r, 10);
        let hi = round_up(&r, 10);
        assert!(lo <= r && r <= hi);
        assert_eq!(&hi - &lo, frac(1, 1024));
        assert_eq!(round_up(&frac(1, 2), 4), frac(1, 2));
    }

    #[test]
    fn integer_powers() {
        assert_eq!(pow(&frac(2, 3), 3), frac(8, 27));
        assert_eq!(pow_rational_exponent(&int(2), &int(-2)), Some(frac(1, 4)));
        assert_eq!(pow_rational_exponent(&int(2), &frac(1, 2)), None);
    }

    #[test]
    fn huge_values_convert_to_float() {
        let big = Rational::new(BigInt::from(3) << 5000, BigInt::from(2) << 5000);
        assert!((to_f64(&big) - 1.5).abs() < 1e-12);
    }
}
