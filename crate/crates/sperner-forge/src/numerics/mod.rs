//! Exact scalars: big rationals plus the algebraic-dyadic ring `Q[2^(1/L)]`.

mod dyadic;
mod interval;

pub use dyadic::{ad_clamp_unit, ad_compare, ad_from_pow2, root_cap, AlgebraicDyadic, DEFAULT_ROOT_CAP};
pub use interval::pow2_frac_bounds;

#[cfg(feature = "unsafe-float")]
pub use dyadic::ad_compare_f64;

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rational = BigRational;

pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn int(p: i64) -> Rational {
    Rational::from_integer(BigInt::from(p))
}

/// `2^e` for an integer exponent.
pub fn pow2(e: i64) -> Rational {
    let two = BigInt::from(2u8);
    if e >= 0 {
        Rational::from_integer(num_traits::pow(two, e as usize))
    } else {
        Rational::new(BigInt::one(), num_traits::pow(two, (-e) as usize))
    }
}

pub fn half() -> Rational {
    rat(1, 2)
}

/// `(x)_{[0,1]}`.
pub fn clamp_unit(x: &Rational) -> Rational {
    if x.is_negative() {
        Rational::zero()
    } else if *x > Rational::one() {
        Rational::one()
    } else {
        x.clone()
    }
}

pub fn floor_int(x: &Rational) -> BigInt {
    x.numer().div_floor(x.denom())
}

/// Canonical `"p/q"` form (the denominator is always written).
pub fn fmt_rational(x: &Rational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Accepts `"p/q"`, integers and finite decimals such as `"0.05"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(Rational::new(p, q));
    }
    if let Some((ip, fp)) = s.split_once('.') {
        if fp.is_empty() || !fp.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let neg = ip.starts_with('-');
        let ip = if ip.is_empty() || ip == "-" { "0" } else { ip };
        let whole: BigInt = ip.parse().map_err(|_| bad())?;
        let frac: BigInt = fp.parse().map_err(|_| bad())?;
        let scale = num_traits::pow(BigInt::from(10u8), fp.len());
        let f = Rational::new(frac, scale);
        let w = Rational::from_integer(whole.abs());
        let v = w + f;
        return Ok(if neg { -v } else { v });
    }
    let p: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Rational::from_integer(p))
}

pub fn rational_to_f64(x: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or(f64::NAN)
}

/// Serde adapter writing rationals as `"p/q"` strings.
pub mod rational_str {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_rational(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for `Vec<Rational>`.
pub mod rational_vec {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(xs: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(xs.iter().map(fmt_rational))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Rational>, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        v.iter()
            .map(|s| parse_rational(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

/// Serde adapter for `Option<Rational>`.
pub mod rational_opt {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Option<Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
        match x {
            Some(v) => s.serialize_some(&fmt_rational(v)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<Rational>, D::Error> {
        Option::<String>::deserialize(d)?
            .map(|s| parse_rational(&s).map_err(serde::de::Error::custom))
            .transpose()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("3/6").unwrap(), rat(1, 2));
        assert_eq!(parse_rational("-2").unwrap(), int(-2));
        assert_eq!(parse_rational("0.05").unwrap(), rat(1, 20));
        assert_eq!(parse_rational("-1.25").unwrap(), rat(-5, 4));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert_eq!(fmt_rational(&int(2)), "2/1");
    }

    #[test]
    fn pow2_signs() {
        assert_eq!(pow2(3), int(8));
        assert_eq!(pow2(-3), rat(1, 8));
        assert_eq!(pow2(0), int(1));
    }
}
