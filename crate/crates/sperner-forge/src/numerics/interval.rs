//! Certified enclosures of `2^f`, `f ∈ [0,1)`, by fixed-point series with
//! directed rounding.

use super::Rational;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

type Cache = Mutex<HashMap<(Rational, u32), (BigInt, BigInt)>>;

fn cache() -> &'static Cache {
    static C: OnceLock<Cache> = OnceLock::new();
    C.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Bounds on `ln 2` in units of `2^-w`, from `ln 2 = Σ_{k≥1} 1/(k 2^k)`.
fn ln2_bounds(w: u32) -> (BigInt, BigInt) {
    let terms = w as usize + 2;
    let mut s = BigInt::zero();
    for k in 1..=terms {
        if k > w as usize {
            break;
        }
        let num = BigInt::one() << (w as usize - k);
        s += num / BigInt::from(k);
    }
    // each floor loses < 1 ulp; the tail past `terms` is < 2^-terms < 1 ulp
    let hi = &s + BigInt::from(terms + 1);
    (s, hi)
}

/// Lower bound on `exp(x)·2^w`, `x = x_fix·2^-w ∈ [0,1)`.
fn exp_lower(x_fix: &BigInt, w: u32) -> BigInt {
    let one = BigInt::one() << w as usize;
    let mut t = one.clone();
    let mut sum = one.clone();
    let mut k = 1u64;
    loop {
        t = (&t * x_fix) / (&one * BigInt::from(k));
        if t.is_zero() {
            break;
        }
        sum += &t;
        k += 1;
    }
    sum
}

/// Upper bound on `exp(x)·2^w`, `x = x_fix·2^-w ∈ [0,1)`.
fn exp_upper(x_fix: &BigInt, w: u32) -> BigInt {
    let one = BigInt::one() << w as usize;
    let mut t = one.clone();
    let mut sum = one.clone();
    let mut k = 1u64;
    loop {
        let d = &one * BigInt::from(k);
        t = (&t * x_fix).div_ceil(&d);
        sum += &t;
        if t <= BigInt::one() {
            // tail after term k is at most term k when x < 1
            sum += &t;
            break;
        }
        k += 1;
    }
    sum
}

/// Returns `(lo, hi)` with `lo ≤ 2^f · 2^w ≤ hi` for `f ∈ [0, 1)`.
pub fn pow2_frac_bounds(f: &Rational, w: u32) -> (BigInt, BigInt) {
    assert!(*f >= Rational::zero() && *f < Rational::one(), "fractional exponent out of range");
    if f.is_zero() {
        let v = BigInt::one() << w as usize;
        return (v.clone(), v);
    }
    let key = (f.clone(), w);
    if let Some(v) = cache().lock().unwrap().get(&key) {
        return v.clone();
    }
    let (l_lo, l_hi) = ln2_bounds(w);
    let (a, b) = (f.numer(), f.denom());
    let x_lo = (a * l_lo).div_floor(b);
    let x_hi = (a * l_hi).div_ceil(b);
    let out = (exp_lower(&x_lo, w), exp_upper(&x_hi, w));
    cache().lock().unwrap().insert(key, out.clone());
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rat;

    // Oracle: (lo/2^w)^b ≤ 2^a ≤ (hi/2^w)^b, decided on integers.
    fn brackets(a: u32, b: u32, w: u32) -> bool {
        let (lo, hi) = pow2_frac_bounds(&rat(a as i64, b as i64), w);
        let target = BigInt::one() << (a as usize + (w as usize) * b as usize);
        num_traits::pow(lo.clone(), b as usize) <= target
            && num_traits::pow(hi.clone(), b as usize) >= target
            && &hi - &lo < BigInt::from(64 + 4 * w)
    }

    #[test]
    fn enclosures_are_valid_and_tight() {
        for b in 2..9u32 {
            for a in 1..b {
                for w in [32u32, 64, 128] {
                    assert!(brackets(a, b, w), "2^({a}/{b}) at w={w}");
                }
            }
        }
    }

    #[test]
    fn sqrt2_digits() {
        let (lo, hi) = pow2_frac_bounds(&rat(1, 2), 64);
        let approx = |v: &BigInt| v.to_string().parse::<f64>().unwrap() / 2f64.powi(64);
        assert!((approx(&lo) - std::f64::consts::SQRT_2).abs() < 1e-15);
        assert!((approx(&hi) - std::f64::consts::SQRT_2).abs() < 1e-15);
    }
}
