use super::interval::pow2_frac_bounds;
use super::{floor_int, fmt_rational, parse_rational, pow2, Rational};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::cmp::Ordering;
use std::fmt;
use std::sync::OnceLock;

pub const DEFAULT_ROOT_CAP: u64 = 1 << 16;

/// Root-order cap; `SPERNER_FORGE_ROOT_CAP` overrides the default once per process.
pub fn root_cap() -> u64 {
    static CAP: OnceLock<u64> = OnceLock::new();
    *CAP.get_or_init(|| {
        std::env::var("SPERNER_FORGE_ROOT_CAP")
            .ok()
            .and_then(|v| v.trim().parse::<u64>().ok())
            .filter(|&v| v > 0)
            .unwrap_or(DEFAULT_ROOT_CAP)
    })
}

/// `Σ rᵢ·2^{qᵢ}` kept canonical: `qᵢ ∈ [0,1)` distinct and increasing, `rᵢ ≠ 0`.
///
/// Since `x^L − 2` is irreducible the powers `2^{j/L}` are linearly independent
/// over ℚ, so two values are equal iff their term lists are.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AlgebraicDyadic {
    terms: Vec<(Rational, Rational)>,
    root_order: u64,
}

fn check_order(order: &BigInt) -> Result<u64> {
    let cap = root_cap();
    match order.to_u64() {
        Some(v) if v <= cap => Ok(v),
        _ => Err(Error::RootOrderExceeded { order: order.to_string(), cap }),
    }
}

impl AlgebraicDyadic {
    pub fn zero() -> Self {
        AlgebraicDyadic { terms: Vec::new(), root_order: 1 }
    }

    pub fn one() -> Self {
        Self::from_rational(Rational::one())
    }

    pub fn from_rational(r: Rational) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        AlgebraicDyadic { terms: vec![(r, Rational::zero())], root_order: 1 }
    }

    pub fn from_int(v: i64) -> Self {
        Self::from_rational(Rational::from_integer(BigInt::from(v)))
    }

    /// Builds `Σ coef·2^exp` from arbitrary terms, folding integer parts of exponents.
    pub fn from_terms<I: IntoIterator<Item = (Rational, Rational)>>(terms: I) -> Result<Self> {
        let mut acc: Vec<(Rational, Rational)> = Vec::new();
        for (c, q) in terms {
            if c.is_zero() {
                continue;
            }
            let fl = floor_int(&q);
            let frac = &q - Rational::from_integer(fl.clone());
            let c = c * pow2(fl.to_i64().ok_or_else(|| Error::InvalidInput("exponent too large".into()))?);
            acc.push((c, frac));
        }
        Self::canonical(acc)
    }

    fn canonical(mut acc: Vec<(Rational, Rational)>) -> Result<Self> {
        acc.sort_by(|a, b| a.1.cmp(&b.1));
        let mut terms: Vec<(Rational, Rational)> = Vec::with_capacity(acc.len());
        for (c, q) in acc {
            match terms.last_mut() {
                Some(last) if last.1 == q => last.0 += c,
                _ => terms.push((c, q)),
            }
        }
        terms.retain(|(c, _)| !c.is_zero());
        let mut order = BigInt::one();
        for (_, q) in &terms {
            order = order.lcm(q.denom());
        }
        let root_order = check_order(&order)?;
        Ok(AlgebraicDyadic { terms, root_order })
    }

    /// `(coefficient, exponent)` pairs with exponents in `[0,1)`.
    pub fn terms(&self) -> &[(Rational, Rational)] {
        &self.terms
    }

    /// `L`: the value is a polynomial in `2^{1/L}`.
    pub fn root_order(&self) -> u64 {
        self.root_order
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_rational(&self) -> bool {
        self.terms.iter().all(|(_, q)| q.is_zero())
    }

    pub fn to_rational(&self) -> Option<Rational> {
        match self.terms.as_slice() {
            [] => Some(Rational::zero()),
            [(c, q)] if q.is_zero() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn neg(&self) -> Self {
        AlgebraicDyadic {
            terms: self.terms.iter().map(|(c, q)| (-c, q.clone())).collect(),
            root_order: self.root_order,
        }
    }

    pub fn scale(&self, r: &Rational) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        AlgebraicDyadic {
            terms: self.terms.iter().map(|(c, q)| (c * r, q.clone())).collect(),
            root_order: self.root_order,
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let mut acc = self.terms.clone();
        acc.extend(other.terms.iter().cloned());
        Self::canonical(acc)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    /// Adding a rational never changes the root order, so this cannot fail.
    pub fn add_rational(&self, r: &Rational) -> Self {
        let mut acc = self.terms.clone();
        acc.push((r.clone(), Rational::zero()));
        Self::canonical(acc).expect("rational shift keeps the root order")
    }

    pub fn sub_rational(&self, r: &Rational) -> Self {
        self.add_rational(&-r)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let mut acc = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (c1, q1) in &self.terms {
            for (c2, q2) in &other.terms {
                let mut c = c1 * c2;
                let mut q = q1 + q2;
                if q >= Rational::one() {
                    q -= Rational::one();
                    c *= Rational::from_integer(BigInt::from(2u8));
                }
                acc.push((c, q));
            }
        }
        Self::canonical(acc)
    }

    /// Rigorous enclosure `lo ≤ value ≤ hi` from `w`-bit bounds on each `2^q`.
    pub fn enclosure(&self, w: u32) -> (Rational, Rational) {
        let scale = Rational::from_integer(BigInt::one() << w as usize);
        let mut lo = Rational::zero();
        let mut hi = Rational::zero();
        for (c, q) in &self.terms {
            let (b_lo, b_hi) = pow2_frac_bounds(q, w);
            let l = Rational::from_integer(b_lo) / &scale;
            let h = Rational::from_integer(b_hi) / &scale;
            if c.is_positive() {
                lo += c * l;
                hi += c * h;
            } else {
                lo += c * h;
                hi += c * l;
            }
        }
        (lo, hi)
    }

    /// Exact sign. Nonzero values are separated from 0 at some finite precision,
    /// so refinement terminates.
    pub fn signum(&self) -> Ordering {
        if let Some(r) = self.to_rational() {
            return r.cmp(&Rational::zero());
        }
        let mut w = 64u32;
        loop {
            let (lo, hi) = self.enclosure(w);
            if lo.is_positive() {
                return Ordering::Greater;
            }
            if hi.is_negative() {
                return Ordering::Less;
            }
            w *= 2;
        }
    }

    pub fn cmp_rational(&self, r: &Rational) -> Ordering {
        self.sub_rational(r).signum()
    }

    pub fn abs(&self) -> Self {
        if self.signum() == Ordering::Less {
            self.neg()
        } else {
            self.clone()
        }
    }

    pub fn floor(&self) -> BigInt {
        if let Some(r) = self.to_rational() {
            return floor_int(&r);
        }
        // an irrational value is never an integer, so the enclosure eventually
        // sits strictly between two consecutive integers
        let mut w = 64u32;
        loop {
            let (lo, hi) = self.enclosure(w);
            let (a, b) = (floor_int(&lo), floor_int(&hi));
            if a == b {
                return a;
            }
            w *= 2;
        }
    }

    /// Midpoint of a 64-bit enclosure. For display and plotting only.
    pub fn to_f64(&self) -> f64 {
        let (lo, hi) = self.enclosure(64);
        super::rational_to_f64(&((lo + hi) / Rational::from_integer(BigInt::from(2u8))))
    }
}

impl From<Rational> for AlgebraicDyadic {
    fn from(r: Rational) -> Self {
        Self::from_rational(r)
    }
}

impl fmt::Display for AlgebraicDyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (c, q)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if q.is_zero() {
                write!(f, "{c}")?;
            } else {
                write!(f, "{c}*2^({q})")?;
            }
        }
        Ok(())
    }
}

/// `2^q` as a single term.
pub fn ad_from_pow2(q: &Rational) -> Result<AlgebraicDyadic> {
    check_order(q.denom())?;
    AlgebraicDyadic::from_terms([(Rational::one(), q.clone())])
}

pub fn ad_compare(a: &AlgebraicDyadic, b: &AlgebraicDyadic) -> Result<Ordering> {
    if let (Some(x), Some(y)) = (a.to_rational(), b.to_rational()) {
        return Ok(x.cmp(&y));
    }
    Ok(a.sub(b)?.signum())
}

/// Unvalidated comparison through `f64` sums. Values closer than the float
/// resolution may be misordered; for exploratory sweeps only.
#[cfg(feature = "unsafe-float")]
pub fn ad_compare_f64(a: &AlgebraicDyadic, b: &AlgebraicDyadic) -> Ordering {
    let approx = |v: &AlgebraicDyadic| -> f64 {
        v.terms().iter().map(|(c, q)| super::rational_to_f64(c) * super::rational_to_f64(q).exp2()).sum()
    };
    approx(a).partial_cmp(&approx(b)).unwrap_or(Ordering::Equal)
}

pub fn ad_clamp_unit(a: &AlgebraicDyadic) -> AlgebraicDyadic {
    if a.signum() == Ordering::Less {
        AlgebraicDyadic::zero()
    } else if a.cmp_rational(&Rational::one()) == Ordering::Greater {
        AlgebraicDyadic::one()
    } else {
        a.clone()
    }
}

#[derive(Serialize, Deserialize)]
struct Wire {
    #[serde(rename = "L")]
    l: u64,
    terms: Vec<(String, String)>,
}

impl Serialize for AlgebraicDyadic {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        Wire {
            l: self.root_order,
            terms: self.terms.iter().map(|(c, q)| (fmt_rational(c), fmt_rational(q))).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for AlgebraicDyadic {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let w = Wire::deserialize(d)?;
        let mut terms = Vec::with_capacity(w.terms.len());
        for (c, q) in &w.terms {
            terms.push((parse_rational(c).map_err(D::Error::custom)?, parse_rational(q).map_err(D::Error::custom)?));
        }
        AlgebraicDyadic::from_terms(terms).map_err(D::Error::custom)
    }
}
