//! Exact rationals and their canonical text forms.
//!
//! All quantities in the crate are [`Rational`] values (arbitrary precision,
//! always in lowest terms with a positive denominator). Text output uses the
//! canonical `"p/q"` form, or `"p"` when the denominator is one. Decimal
//! renderings exist for display only.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// `num / den` reduced to lowest terms. Panics on a zero denominator.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// Canonical `"p/q"` form (`"p"` for integers).
pub fn to_canonical(q: &Rational) -> String {
    // num-rational's Display already prints `p` or `p/q` in lowest terms.
    q.to_string()
}

/// Parse `"p"`, `"-p"` or `"p/q"`. The result is reduced; a zero denominator is rejected.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("invalid rational literal {s:?}"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = n.parse().map_err(|_| bad())?;
    let den: BigInt = d.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

/// Decimal rendering with `digits` significant digits, rounding half to even.
/// Trailing zeros after the decimal point are dropped.
pub fn to_decimal(q: &Rational, digits: u32) -> String {
    assert!(digits > 0);
    if q.is_zero() {
        return "0".to_string();
    }
    let negative = q.is_negative();
    let a = q.abs();
    let ten = BigInt::from(10);

    // exponent e with 10^e <= a < 10^(e+1)
    let mut e: i64 = a.numer().to_string().len() as i64 - a.denom().to_string().len() as i64;
    loop {
        let p = pow10(e);
        if a < p {
            e -= 1;
        } else if a >= pow10(e + 1) {
            e += 1;
        } else {
            break;
        }
    }

    let shift = digits as i64 - 1 - e;
    let scaled = &a * pow10(shift);
    let mut n = round_half_even(&scaled);
    let mut shift = shift;
    if n >= num_traits::pow(ten.clone(), digits as usize) {
        // rounding carried into a new leading digit
        n = round_half_even(&(&a * pow10(shift - 1)));
        shift -= 1;
    }

    let mut s = n.to_string();
    let out = if shift <= 0 {
        s.extend(std::iter::repeat_n('0', (-shift) as usize));
        s
    } else {
        let shift = shift as usize;
        if s.len() <= shift {
            let zeros = "0".repeat(shift - s.len());
            s = format!("0.{zeros}{s}");
        } else {
            s.insert(s.len() - shift, '.');
        }
        let trimmed = s.trim_end_matches('0').trim_end_matches('.');
        trimmed.to_string()
    };
    if negative {
        format!("-{out}")
    } else {
        out
    }
}

fn pow10(e: i64) -> Rational {
    let p = num_traits::pow(BigInt::from(10), e.unsigned_abs() as usize);
    if e >= 0 {
        Rational::from_integer(p)
    } else {
        Rational::new(BigInt::one(), p)
    }
}

fn round_half_even(x: &Rational) -> BigInt {
    let (q, r) = x.numer().div_mod_floor(x.denom());
    let twice: BigInt = &r * 2u32;
    match twice.cmp(x.denom()) {
        std::cmp::Ordering::Less => q,
        std::cmp::Ordering::Greater => q + 1,
        std::cmp::Ordering::Equal => {
            if q.is_even() {
                q
            } else {
                q + 1
            }
        }
    }
}

/// Least common multiple of the reduced denominators.
pub fn denominator_lcm<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
}

/// Serde adapter: a [`Rational`] as its canonical string.
pub mod serde_str {
    use super::{parse_rational, to_canonical, Rational};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&to_canonical(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for `Vec<Rational>`.
pub mod serde_vec {
    use super::{parse_rational, to_canonical, Rational};
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(to_canonical).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        raw.iter()
            .map(|s| parse_rational(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_forms() {
        assert_eq!(to_canonical(&rat(2, -6)), "-1/3");
        assert_eq!(to_canonical(&rat(4, 2)), "2");
        assert_eq!(to_canonical(&int(0)), "0");
        assert_eq!(parse_rational(" 6/-4 ").unwrap(), rat(-3, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn decimals() {
        assert_eq!(to_decimal(&rat(1, 3), 12), "0.333333333333");
        assert_eq!(to_decimal(&rat(2, 3), 12), "0.666666666667");
        assert_eq!(to_decimal(&rat(71, 11), 12), "6.45454545455");
        assert_eq!(to_decimal(&int(18), 12), "18");
        assert_eq!(to_decimal(&rat(-1, 8), 12), "-0.125");
        assert_eq!(to_decimal(&rat(1, 3000), 3), "0.000333");
        assert_eq!(to_decimal(&rat(123456, 1), 3), "123000");
        // half-even: 0.125 at 2 digits -> 0.12, 0.375 -> 0.38
        assert_eq!(to_decimal(&rat(1, 8), 2), "0.12");
        assert_eq!(to_decimal(&rat(3, 8), 2), "0.38");
        // carry into a new digit
        assert_eq!(to_decimal(&rat(9999, 1000), 3), "10");
    }

    #[test]
    fn lcm_of_denominators() {
        let v = [rat(-1, 3), rat(1, 2), int(5)];
        assert_eq!(denominator_lcm(&v), BigInt::from(6));
    }
}
