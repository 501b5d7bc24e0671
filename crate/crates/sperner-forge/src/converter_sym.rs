//! The shrunk converter: factor `α(z) = 2^{−20(2n−1)(0.05−z)₊}`, quasimetric
//! `d^α`, and the derived `rel^α` / `Ĉ^α_nn`.

use crate::base2d::{ad_max, BaseInstance, BasePoint, SwitchProbe, Temperature};
use crate::error::Result;
use crate::numerics::{ad_from_pow2, int, rat, AlgebraicDyadic as AD, Rational};
use num_traits::{One, Signed};
use std::cmp::Ordering;

#[derive(Clone, Debug)]
pub struct ShrinkContext {
    base: BaseInstance,
}

impl ShrinkContext {
    pub fn new(base: BaseInstance) -> Self {
        ShrinkContext { base }
    }

    pub fn base(&self) -> &BaseInstance {
        &self.base
    }

    pub fn n(&self) -> u32 {
        self.base.n()
    }

    /// `α(z)`: exactly `2^{−(2n−1)(1−20z)}` below `z = 0.05`, and 1 from there on.
    pub fn alpha(&self, z: &Rational) -> Result<AD> {
        if *z >= rat(1, 20) {
            return Ok(AD::one());
        }
        let q = -int(2 * self.n() as i64 - 1) * (Rational::one() - int(20) * z);
        ad_from_pow2(&q)
    }

    /// `d^α(x, y) = max{α(x₃)·|x₂−y₂|, |x₃−y₃|}` (α taken at `x`, so not symmetric).
    pub fn d_alpha(&self, x: &BasePoint, y: &BasePoint) -> Result<AD> {
        let a = self.alpha(&x.x3)?;
        let dx2 = x.x2.sub(&y.x2)?.abs();
        ad_max(a.mul(&dx2)?, AD::from((&x.x3 - &y.x3).abs()))
    }

    /// `g(y) = α(y₃)·(y₂ − 0.5)`, the signed `d^α`-distance to the bottom switch.
    pub fn g(&self, x: &BasePoint) -> Result<AD> {
        self.alpha(&x.x3)?.mul(&x.x2.sub_rational(&rat(1, 2)))
    }

    /// Nearest switch under `d^α`. Below `x₃ = 0.05` the only switch within
    /// `2ε²` is the segment `x₂ = 0.5`, at distance `|g(x)|`; from 0.05 on α = 1
    /// and the plain probe applies.
    pub fn nearest_switch_alpha(&self, x: &BasePoint) -> Result<SwitchProbe> {
        if x.x3 >= rat(1, 20) {
            return self.base.nearest_switch(x);
        }
        let color = self.base.color(x);
        let d = self.g(x)?.abs();
        let eps_sq = self.base.eps_sq();
        let two_eps_sq = eps_sq * int(2);
        Ok(if d.cmp_rational(&two_eps_sq) == Ordering::Less {
            let temperature = if d.cmp_rational(eps_sq) == Ordering::Less { Temperature::Hot } else { Temperature::Warm };
            SwitchProbe { color, distance: d, neighbor_color: Some(3 - color), temperature }
        } else {
            SwitchProbe { color, distance: AD::from(two_eps_sq), neighbor_color: None, temperature: Temperature::Cold }
        })
    }

    pub fn rel_alpha(&self, x: &BasePoint) -> Result<AD> {
        Ok(self.base.rel_from_probe(&self.nearest_switch_alpha(x)?))
    }

    pub fn cnn_hat_alpha(&self, x: &BasePoint) -> Result<u8> {
        Ok(BaseInstance::cnn_hat_from_probe(&self.nearest_switch_alpha(x)?))
    }
}

/// `|a − b| ≤ bound` for exact scalars.
pub fn within(a: &AD, b: &AD, bound: &Rational) -> Result<bool> {
    Ok(a.sub(b)?.abs().cmp_rational(bound) != Ordering::Greater)
}

/// Both values are 0 or 1 (the converted-coordinate equivalence).
pub fn both_integral(a: &AD, b: &AD) -> bool {
    let int01 = |v: &AD| v.is_zero() || *v == AD::one();
    int01(a) && int01(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::pow2;
    use crate::rect2d::{GeneratorKind, RectInstance};

    fn ctx(n_rect: u32) -> ShrinkContext {
        ShrinkContext::new(BaseInstance::new(RectInstance::generate(GeneratorKind::PlantedPath, n_rect, 5).unwrap()).unwrap())
    }

    fn bp(x2: Rational, x3: Rational) -> BasePoint {
        BasePoint::rational(x2, x3).unwrap()
    }

    #[test]
    fn alpha_examples() {
        let c = ctx(2);
        let n = c.n() as i64;
        assert_eq!(c.alpha(&int(0)).unwrap().to_rational(), Some(pow2(1 - 2 * n)));
        assert_eq!(c.alpha(&int(0)).unwrap().to_rational(), Some(c.base().eps_sq() * int(2)));
        assert_eq!(c.alpha(&rat(1, 20)).unwrap(), AD::one());
        assert_eq!(c.alpha(&rat(1, 2)).unwrap(), AD::one());
        let a = c.alpha(&rat(1, 40)).unwrap();
        assert_eq!(a, ad_from_pow2(&rat(-(2 * n - 1), 2)).unwrap());
        let (lo, hi) = a.enclosure(128);
        let f = 2f64.powf(-(2.0 * n as f64 - 1.0) / 2.0);
        assert!(crate::numerics::rational_to_f64(&lo) <= f * (1.0 + 1e-12));
        assert!(crate::numerics::rational_to_f64(&hi) >= f * (1.0 - 1e-12));
    }

    #[test]
    fn d_alpha_examples() {
        let c = ctx(2);
        let x = bp(rat(3, 10), rat(1, 5));
        let y = bp(rat(1, 2), rat(1, 5));
        assert_eq!(c.d_alpha(&x, &y).unwrap().to_rational(), Some(rat(1, 5)));
        let x = bp(rat(1, 4), int(0));
        let y = bp(rat(1, 2), int(0));
        assert_eq!(c.d_alpha(&x, &y).unwrap().to_rational(), Some(c.base().eps_sq() * int(2) * rat(1, 4)));
        assert!(c.d_alpha(&x, &x).unwrap().is_zero());
    }

    #[test]
    fn rel_alpha_examples() {
        let c = ctx(2);
        assert_eq!(c.rel_alpha(&bp(rat(1, 4), int(0))).unwrap().to_rational(), Some(rat(1, 4)));
        assert_eq!(c.rel_alpha(&bp(rat(1, 10), rat(3, 5))).unwrap(), AD::one());
        assert_eq!(c.rel_alpha(&bp(int(0), rat(1, 10))).unwrap().to_rational(), Some(rat(1, 2)));
        assert_eq!(c.nearest_switch_alpha(&bp(rat(1, 3), int(0))).unwrap().temperature, Temperature::Hot);
        let p = c.nearest_switch_alpha(&bp(int(0), rat(1, 25))).unwrap();
        assert_ne!(p.temperature, Temperature::Hot);
    }

    #[test]
    fn cnn_hat_alpha_examples() {
        let c = ctx(2);
        assert_eq!(c.cnn_hat_alpha(&bp(rat(1, 3), int(0))).unwrap(), 2);
        assert_eq!(c.cnn_hat_alpha(&bp(rat(1, 5), rat(1, 2))).unwrap(), 1);
        let x = bp(rat(1, 4), rat(1, 5));
        assert_eq!(c.cnn_hat_alpha(&x).unwrap(), c.base().cnn_hat(&x).unwrap());
    }
}
