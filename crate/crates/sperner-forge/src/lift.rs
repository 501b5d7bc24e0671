//! Recursive high-dimensional colourings `C^(k)` (warm-up) and `C^(k)_sym`
//! (symmetric) with full traces, Sperner-condition and symmetry validators,
//! a discrete view, and a witness builder for recovery tests.

use crate::base2d::{BaseInstance, BasePoint, SwitchProbe};
use crate::converter_sym::ShrinkContext;
use crate::error::{Error, Result};
use crate::numerics::{clamp_unit, int, rat, AlgebraicDyadic as AD, Rational};
use crate::simplex::{index_of, insert_zero, nontrivial_indices, project, GridSpec, SimplexPoint};
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Warmup,
    Symmetric,
}

impl std::str::FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "warmup" | "warm-up" => Ok(Mode::Warmup),
            "symmetric" | "sym" => Ok(Mode::Symmetric),
            _ => Err(Error::Parse(format!("unknown mode {s:?}"))),
        }
    }
}

/// Everything computed while colouring one point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trace {
    pub x: SimplexPoint,
    pub mode: Mode,
    /// Converted first coordinate (symmetric mode only).
    #[serde(with = "crate::numerics::rational_opt", default)]
    pub tilde_y0: Option<Rational>,
    /// `y^(2) … y^(k)`.
    pub projections: Vec<BasePoint>,
    /// `c^(2) … c^(k)`.
    pub palettes: Vec<[u32; 3]>,
    /// `C(y^(i))` for every level.
    pub base_colors: Vec<u8>,
    /// Converted coordinates `rel(y^(i))` for levels `2 … k−1`.
    pub converted: Vec<AD>,
    /// `Ĉ_nn(y^(i))` for levels `2 … k−1`.
    pub hat_neighbors: Vec<u8>,
    /// `i*(y^(i))` for every level.
    pub first_nonzero: Vec<u8>,
    pub color: u32,
}

impl Trace {
    pub fn final_projection(&self) -> &BasePoint {
        self.projections.last().expect("at least one level")
    }
}

#[derive(Clone, Debug)]
pub struct LiftedColoring {
    mode: Mode,
    k: usize,
    ctx: ShrinkContext,
    corrupt: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpernerViolation {
    pub point: SimplexPoint,
    pub color: u32,
    pub support: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpernerReport {
    pub checked: u64,
    pub violation_count: u64,
    /// The first few violations, as witnesses.
    pub violations: Vec<SpernerViolation>,
}

impl SpernerReport {
    pub fn ok(&self) -> bool {
        self.violation_count == 0
    }
}

/// Which grid points of Δ^k_m a Sperner-condition check visits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "scope")]
pub enum SpernerScope {
    Exhaustive,
    /// Grid points with at least one zero coordinate.
    Faces,
    /// Grid points with all coordinates positive, drawn uniformly.
    RandomInterior { count: u64, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymmetryViolation {
    /// The point of Δ^{k−1} the zeros are inserted into.
    pub base: SimplexPoint,
    pub i: usize,
    pub j: usize,
    pub color_i: u32,
    pub color_j: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymmetryReport {
    pub checked_pairs: u64,
    pub violation_count: u64,
    pub violations: Vec<SymmetryViolation>,
}

impl SymmetryReport {
    pub fn ok(&self) -> bool {
        self.violation_count == 0
    }
}

const KEEP_VIOLATIONS: usize = 16;

impl LiftedColoring {
    pub fn new(mode: Mode, k: usize, base: BaseInstance) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidInput(format!("lifted colourings need k ≥ 2, got {k}")));
        }
        Ok(LiftedColoring { mode, k, ctx: ShrinkContext::new(base), corrupt: false })
    }

    /// A deliberately broken copy that returns `k+1` whenever `x_{k+1} = 0`.
    pub fn corrupted(&self) -> Self {
        LiftedColoring { corrupt: true, ..self.clone() }
    }

    /// Same colouring over a fresh rect query tally.
    pub fn with_counter(&self) -> Self {
        LiftedColoring { ctx: ShrinkContext::new(self.ctx.base().with_counter()), ..self.clone() }
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn base(&self) -> &BaseInstance {
        self.ctx.base()
    }

    pub fn shrink(&self) -> &ShrinkContext {
        &self.ctx
    }

    pub fn eps(&self) -> &Rational {
        self.base().eps()
    }

    /// Exponent of the triangulation side length the hardness statement uses:
    /// `3kn` for the warm-up chain, `4kn` for the symmetric one.
    pub fn theorem_side_exponent(&self) -> u64 {
        let f = match self.mode {
            Mode::Warmup => 3,
            Mode::Symmetric => 4,
        };
        f * self.k as u64 * self.base().n() as u64
    }

    fn probe(&self, y: &BasePoint) -> Result<SwitchProbe> {
        match self.mode {
            Mode::Warmup => self.base().nearest_switch(y),
            Mode::Symmetric => self.ctx.nearest_switch_alpha(y),
        }
    }

    /// Converted coordinate of `y` under the mode's converter.
    pub fn convert(&self, y: &BasePoint) -> Result<AD> {
        Ok(self.base().rel_from_probe(&self.probe(y)?))
    }

    /// `(0.5 + 0.5ε⁻²(y₀ − 0.1))` clamped to `[0,1]`.
    pub fn tilde_y0(&self, y0: &Rational) -> Rational {
        let e2 = self.base().eps_sq();
        clamp_unit(&(rat(1, 2) + rat(1, 2) * (y0 - rat(1, 10)) / e2))
    }

    pub fn trace(&self, x: &SimplexPoint) -> Result<Trace> {
        let k = self.k;
        if x.dim() != k {
            return Err(Error::InvalidInput(format!("expected a point of Δ^{k}, got dimension {}", x.dim())));
        }
        // proj[ℓ] = P^{(ℓ)}(x) ∈ Δ^{k−ℓ}
        let mut proj = Vec::with_capacity(k);
        proj.push(x.clone());
        for l in 1..k {
            proj.push(project(&proj[l - 1], 1)?);
        }
        let (tilde_y0, y2) = match self.mode {
            Mode::Warmup => (None, BasePoint::from_simplex(&proj[k - 2])?),
            Mode::Symmetric => {
                let y0 = proj[k - 1].x(2).clone();
                let t = self.tilde_y0(&y0);
                let z = proj[k - 2].x(3).clone();
                let y = BasePoint::lifted(&AD::from(t.clone()), &z);
                (Some(t), y)
            }
        };
        let mut projections = vec![y2];
        let mut palettes = vec![[1u32, 2, 3]];
        let mut converted = Vec::with_capacity(k.saturating_sub(2));
        let mut hat_neighbors = Vec::with_capacity(k.saturating_sub(2));
        let mut base_colors = Vec::with_capacity(k - 1);
        for i in 3..=k {
            let prev = projections.last().unwrap();
            let p = self.probe(prev)?;
            let r = self.base().rel_from_probe(&p);
            let hat = BaseInstance::cnn_hat_from_probe(&p);
            let (j1, j2) = (p.color.min(hat), p.color.max(hat));
            let c = palettes.last().unwrap();
            let next = [c[j1 as usize - 1], c[j2 as usize - 1], i as u32 + 1];
            let z = proj[k - i].x(i + 1).clone();
            let y = BasePoint::lifted(&r, &z);
            base_colors.push(p.color);
            converted.push(r);
            hat_neighbors.push(hat);
            palettes.push(next);
            projections.push(y);
        }
        let last = projections.last().unwrap();
        let j = self.base().color(last);
        base_colors.push(j);
        let mut color = palettes.last().unwrap()[j as usize - 1];
        if self.corrupt && x.x(k + 1).is_zero() {
            color = k as u32 + 1;
        }
        let first_nonzero = projections.iter().map(BasePoint::first_nonzero).collect();
        Ok(Trace {
            x: x.clone(),
            mode: self.mode,
            tilde_y0,
            projections,
            palettes,
            base_colors,
            converted,
            hat_neighbors,
            first_nonzero,
            color,
        })
    }

    pub fn eval(&self, x: &SimplexPoint) -> Result<u32> {
        Ok(self.trace(x)?.color)
    }

    /// Checks `C(x) ∈ 𝓘_{>0}(x)` over a scope of grid points of Δ^k_m.
    pub fn validate_sperner_condition(&self, m: u32, scope: SpernerScope) -> Result<SpernerReport> {
        let grid = GridSpec::new(self.k, m)?;
        let big_n = grid.big_n();
        let mut report = SpernerReport { checked: 0, violation_count: 0, violations: Vec::new() };
        let check = |x: SimplexPoint, report: &mut SpernerReport| -> Result<()> {
            let c = self.eval(&x)?;
            let support = nontrivial_indices(&x);
            report.checked += 1;
            if !support.contains(&(c as usize)) {
                report.violation_count += 1;
                if report.violations.len() < KEEP_VIOLATIONS {
                    report.violations.push(SpernerViolation { point: x, color: c, support });
                }
            }
            Ok(())
        };
        match scope {
            SpernerScope::Exhaustive => {
                for c in grid.lattice_points() {
                    check(SimplexPoint::from_lattice(&c, big_n), &mut report)?;
                }
            }
            SpernerScope::Faces => {
                for c in grid.lattice_points().filter(|c| c.contains(&0)) {
                    check(SimplexPoint::from_lattice(&c, big_n), &mut report)?;
                }
            }
            SpernerScope::RandomInterior { count, seed } => {
                let parts = self.k as u64 + 1;
                if big_n < parts {
                    return Err(Error::InvalidInput(format!("grid m={m} has no interior points for k={}", self.k)));
                }
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                for _ in 0..count {
                    // positive compositions of N ↔ k cut positions among 1..N−1
                    let mut cuts: Vec<u64> =
                        rand::seq::index::sample(&mut rng, (big_n - 1) as usize, self.k).into_iter().map(|v| v as u64 + 1).collect();
                    cuts.sort_unstable();
                    cuts.push(big_n);
                    let mut prev = 0;
                    let c: Vec<u64> = cuts.iter().map(|&v| std::mem::replace(&mut prev, v)).zip(cuts.iter()).map(|(a, b)| b - a).collect();
                    check(SimplexPoint::from_lattice(&c, big_n), &mut report)?;
                }
            }
        }
        Ok(report)
    }

    /// `index(𝓘_{>0}(x), C(x))`, or `None` when the colour is not in the support.
    fn symmetry_key(&self, x: &SimplexPoint) -> Result<(usize, Option<usize>, u32)> {
        let support = nontrivial_indices(x);
        let c = self.eval(x)?;
        Ok((support.len(), index_of(&support, c as usize).ok(), c))
    }

    /// Scans zero-insertion pairs for violations of `∼_C` in any mode.
    ///
    /// For every grid point `u` of Δ^{k−1}_m and every pair `i < j` (restricted
    /// to `pairs` when given), `(u_{1:i−1}, 0, u_{i:k})` and `(u_{1:j−1}, 0, u_{j:k})`
    /// must carry the same colour index within their supports.
    pub fn symmetry_violations(&self, m: u32, pairs: Option<&[(usize, usize)]>) -> Result<SymmetryReport> {
        let k = self.k;
        let grid = GridSpec::new(k - 1, m)?;
        let big_n = grid.big_n();
        let all: Vec<(usize, usize)> = match pairs {
            Some(p) => p.to_vec(),
            None => (1..=k + 1).flat_map(|i| (i + 1..=k + 1).map(move |j| (i, j))).collect(),
        };
        for &(i, j) in &all {
            if !(1..=k + 1).contains(&i) || !(1..=k + 1).contains(&j) {
                return Err(Error::InvalidInput(format!("insertion pair ({i},{j}) outside 1..={}", k + 1)));
            }
        }
        let mut report = SymmetryReport { checked_pairs: 0, violation_count: 0, violations: Vec::new() };
        for c in grid.lattice_points() {
            let u = SimplexPoint::from_lattice(&c, big_n);
            let mut keys: Vec<Option<(usize, Option<usize>, u32)>> = vec![None; k + 2];
            for &(i, j) in &all {
                for v in [i, j] {
                    if keys[v].is_none() {
                        keys[v] = Some(self.symmetry_key(&insert_zero(&u, v))?);
                    }
                }
                let (a, b) = (keys[i].unwrap(), keys[j].unwrap());
                report.checked_pairs += 1;
                if (a.0, a.1) != (b.0, b.1) || a.1.is_none() {
                    report.violation_count += 1;
                    if report.violations.len() < KEEP_VIOLATIONS {
                        report.violations.push(SymmetryViolation { base: u.clone(), i, j, color_i: a.2, color_j: b.2 });
                    }
                }
            }
        }
        Ok(report)
    }

    /// The symmetric-Sperner condition; only meaningful for the symmetric chain.
    pub fn check_symmetry(&self, m: u32, pairs: Option<&[(usize, usize)]>) -> Result<SymmetryReport> {
        if self.mode != Mode::Symmetric {
            return Err(Error::ModeMismatch);
        }
        self.symmetry_violations(m, pairs)
    }

    /// The colouring restricted to the grid Δ^k_m.
    pub fn discrete_view(&self, m: u32) -> Result<DiscreteColoring<'_>> {
        Ok(DiscreteColoring { lc: self, grid: GridSpec::new(self.k, m)? })
    }

    fn target_t(u: &BasePoint) -> Result<(Rational, Rational)> {
        let u2 = u
            .x2
            .to_rational()
            .ok_or_else(|| Error::TargetOutOfRange("witness targets must have rational coordinates".into()))?;
        if u.x3.is_one() {
            return Err(Error::TargetOutOfRange("target at the apex has no converted coordinate".into()));
        }
        let t = &u2 / (Rational::one() - &u.x3);
        Ok((t, u.x3.clone()))
    }

    /// Inverse of the bottom-edge converter on the chain's first coordinate:
    /// returns `x₂` of `y^(2)` (warm-up) or `y₀` (symmetric) such that the
    /// converted coordinate reaching the last level equals `t`.
    fn chain_preimage(&self, t: &Rational) -> Rational {
        let e2 = self.base().eps_sq();
        let inv = |v: &Rational| rat(1, 2) + int(2) * e2 * (v - rat(1, 2));
        match self.mode {
            Mode::Warmup => {
                // each of the levels 2..k−1 maps a ↦ clamp(0.5 + (a−0.5)/(2ε²))
                let mut a = t.clone();
                for _ in 2..self.k {
                    a = inv(&a);
                }
                a
            }
            // the bottom edge is fixed by rel^α, so only the first conversion counts
            Mode::Symmetric => rat(1, 10) + int(2) * e2 * (t - rat(1, 2)),
        }
    }

    /// Points of Δ^k whose final projections `y^(k)` are exactly the targets,
    /// so that three base-trichromatic targets become three distinct lifted
    /// colours. Verified by a forward trace.
    pub fn build_witness(&self, targets: &[BasePoint; 3]) -> Result<[SimplexPoint; 3]> {
        let mut out = Vec::with_capacity(3);
        for u in targets {
            let x = if self.mode == Mode::Warmup && self.k == 2 {
                u.to_simplex().ok_or_else(|| Error::TargetOutOfRange("target must be rational".into()))?
            } else {
                let (t, z) = Self::target_t(u)?;
                let a = self.chain_preimage(&t);
                let mut c = vec![Rational::zero(); self.k + 1];
                let w = Rational::one() - &z;
                c[0] = &w * (Rational::one() - &a);
                c[1] = &w * &a;
                c[self.k] = z;
                SimplexPoint::new(c).map_err(|e| Error::TargetOutOfRange(e.to_string()))?
            };
            let tr = self.trace(&x)?;
            if tr.final_projection() != u {
                return Err(Error::TargetOutOfRange(format!(
                    "forward trace reaches {:?} instead of the target",
                    tr.final_projection().to_f64()
                )));
            }
            out.push(x);
        }
        Ok([out[0].clone(), out[1].clone(), out[2].clone()])
    }

    /// A point of Δ^k whose level-2 projection `y^(2)` is exactly `u`
    /// (a bottom-face embedding that exercises the simulation phase of recovery).
    pub fn embed_level2(&self, u: &BasePoint) -> Result<SimplexPoint> {
        let mut c = vec![Rational::zero(); self.k + 1];
        match self.mode {
            Mode::Warmup => {
                let s = u.to_simplex().ok_or_else(|| Error::TargetOutOfRange("target must be rational".into()))?;
                for (dst, v) in c.iter_mut().zip(s.coords()) {
                    *dst = v.clone();
                }
            }
            Mode::Symmetric => {
                let (t, z) = Self::target_t(u)?;
                let y0 = rat(1, 10) + int(2) * self.base().eps_sq() * (t - rat(1, 2));
                let w = Rational::one() - &z;
                c[0] = &w * (Rational::one() - &y0);
                c[1] = &w * &y0;
                c[2] = z;
            }
        }
        let x = SimplexPoint::new(c).map_err(|e| Error::TargetOutOfRange(e.to_string()))?;
        if self.trace(&x)?.projections[0] != *u {
            return Err(Error::TargetOutOfRange("level-2 projection misses the target".into()));
        }
        Ok(x)
    }
}

/// The colouring restricted to grid points; off-grid points are rejected.
pub struct DiscreteColoring<'a> {
    lc: &'a LiftedColoring,
    grid: GridSpec,
}

impl DiscreteColoring<'_> {
    pub fn grid(&self) -> GridSpec {
        self.grid
    }

    pub fn eval(&self, x: &SimplexPoint) -> Result<u32> {
        if !x.is_on_grid(self.grid.big_n()) {
            return Err(Error::InvalidInput("point is not on the grid".into()));
        }
        self.lc.eval(x)
    }

    pub fn eval_lattice(&self, c: &[u64]) -> Result<u32> {
        self.lc.eval(&SimplexPoint::from_lattice(c, self.grid.big_n()))
    }
}
