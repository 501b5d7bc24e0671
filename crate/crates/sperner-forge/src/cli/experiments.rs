//! End-to-end recovery pipeline and the oracle query benchmark.

use crate::base2d::{BaseInstance, BasePoint};
use crate::error::{Error, Result};
use crate::lift::{LiftedColoring, Mode, SpernerScope, SpernerViolation};
use crate::numerics::int;
use crate::recover::{recover, verify_c_solution, RecoveryOutcome};
use crate::rect2d::{GeneratorKind, RectInstance, RectSolution};
use crate::simplex::{random_point, SimplexPoint};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Parameters of a pipeline or benchmark run; `n` is the rect resolution
/// exponent (the base instance works at `ε = 2^{-(n+3)}`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub mode: Mode,
    pub k: usize,
    pub n: u32,
    pub kind: GeneratorKind,
    pub seed: u64,
    pub witnesses: usize,
    #[serde(default)]
    pub corrupt: bool,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n < 3 {
            return Err(Error::InvalidInput(format!("experiments need n ≥ 3, got {}", self.n)));
        }
        if self.k < 2 {
            return Err(Error::InvalidInput(format!("experiments need k ≥ 2, got {}", self.k)));
        }
        Ok(())
    }

    pub fn coloring(&self) -> Result<LiftedColoring> {
        self.validate()?;
        let rect = RectInstance::generate(self.kind, self.n, self.seed)?;
        let lc = LiftedColoring::new(self.mode, self.k, BaseInstance::new(rect)?)?;
        Ok(if self.corrupt { lc.corrupted() } else { lc })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PipelineReport {
    pub config: ExperimentConfig,
    pub planted_cell: RectSolution,
    pub witness_triples: Vec<[SimplexPoint; 3]>,
    pub outcomes: Vec<RecoveryOutcome>,
    pub sperner_violations: Vec<SpernerViolation>,
    pub all_verified: bool,
}

/// ε-close trichromatic base triples near a rect solution: neighbourhood
/// witnesses around seeded offsets of the solution's central node.
pub fn base_targets(base: &BaseInstance, cell: RectSolution, count: usize, seed: u64) -> Result<Vec<[BasePoint; 3]>> {
    let node = base.solution_node(cell);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<[BasePoint; 3]> = Vec::with_capacity(count);
    // offsets in units of ε/64, within ±ε/4
    let unit = base.eps() / int(64);
    for attempt in 0..64 * count + 64 {
        if out.len() == count {
            break;
        }
        let (dx, dy) = if attempt == 0 { (0, 0) } else { (rng.gen_range(-16i64..=16), rng.gen_range(-16i64..=16)) };
        let x2 = node.x2.add_rational(&(&unit * int(dx)));
        let x3 = &node.x3 + &unit * int(dy);
        let y = BasePoint::new(x2, x3)?;
        let pal = base.neighborhood_palette(&y)?;
        if !pal.is_trichromatic() {
            continue;
        }
        let t = [1, 2, 3].map(|c| pal.witness(c).expect("witness per colour").clone());
        if !out.contains(&t) {
            out.push(t);
        }
    }
    if out.is_empty() {
        return Err(Error::NoSolution("no trichromatic neighbourhood near the solution".into()));
    }
    Ok(out)
}

/// rect → base → lift → witnesses → recover → verify, as one report.
pub fn run_pipeline(config: &ExperimentConfig) -> Result<PipelineReport> {
    let lc = config.coloring()?;
    let base = lc.base();
    let rect = base.rect();
    let planted = match rect.planted_solution() {
        Some(s) => s,
        None => rect.solve_bruteforce()?,
    };
    let mut report = PipelineReport {
        config: config.clone(),
        planted_cell: planted,
        witness_triples: Vec::new(),
        outcomes: Vec::new(),
        sperner_violations: Vec::new(),
        all_verified: true,
    };
    if config.corrupt {
        let r = lc.validate_sperner_condition(3, SpernerScope::Faces)?;
        if !r.ok() {
            report.sperner_violations = r.violations;
            report.all_verified = false;
            return Ok(report);
        }
    }
    for targets in base_targets(base, planted, config.witnesses, config.seed)? {
        let xs = lc.build_witness(&targets)?;
        let verified = match recover(&lc, &xs) {
            Ok(out) => {
                let ok = verify_c_solution(base, &out.triple)?.valid && out.rect_cell.is_some_and(|c| rect.is_solution(c));
                report.outcomes.push(out);
                ok
            }
            Err(Error::NotASolution(_)) => false,
            Err(e) => return Err(e),
        };
        report.all_verified &= verified;
        report.witness_triples.push(xs);
    }
    report.all_verified &= !report.outcomes.is_empty();
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub k: usize,
    pub n: u32,
    pub queries_per_eval_mean: f64,
    pub max: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchSummary {
    pub rows: Vec<BenchRow>,
    /// Least-squares line `mean ≈ intercept + slope·k`.
    pub slope: f64,
    pub intercept: f64,
    /// Largest deviation from the line, relative to the largest mean.
    pub max_rel_residual: f64,
    pub tolerance: f64,
    pub linear_ok: bool,
}

/// Base-oracle queries per evaluation of the symmetric colouring over seeded
/// random points; the tally is reset before every evaluation.
pub fn bench_queries(n: u32, ks: &[usize], samples: usize, seed: u64, tolerance: f64) -> Result<BenchSummary> {
    if n < 3 {
        return Err(Error::InvalidInput(format!("bench needs n ≥ 3, got {n}")));
    }
    if ks.len() < 2 || ks.iter().any(|&k| k < 2) || samples == 0 {
        return Err(Error::InvalidInput("bench needs at least two k ≥ 2 and one sample".into()));
    }
    let rect = RectInstance::generate(GeneratorKind::PlantedPath, n, seed)?;
    let base = BaseInstance::new(rect)?;
    let mut rows = Vec::with_capacity(ks.len());
    for &k in ks {
        let lc = LiftedColoring::new(Mode::Symmetric, k, base.with_counter())?;
        let base = lc.base();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ k as u64);
        let (mut total, mut max) = (0u64, 0u64);
        for _ in 0..samples {
            let x = random_point(&mut rng, k, 1 << 10);
            base.reset_queries();
            lc.eval(&x)?;
            let q = base.oracle_queries();
            total += q;
            max = max.max(q);
        }
        rows.push(BenchRow { k, n, queries_per_eval_mean: total as f64 / samples as f64, max });
    }
    let pts: Vec<(f64, f64)> = rows.iter().map(|r| (r.k as f64, r.queries_per_eval_mean)).collect();
    let (slope, intercept) = least_squares_line(&pts);
    let scale = pts.iter().map(|p| p.1).fold(1.0, f64::max);
    let max_rel_residual = pts.iter().map(|p| (p.1 - intercept - slope * p.0).abs()).fold(0.0, f64::max) / scale;
    Ok(BenchSummary { rows, slope, intercept, max_rel_residual, tolerance, linear_ok: max_rel_residual <= tolerance })
}

/// `(slope, intercept)` of the least-squares line through `pts`.
pub fn least_squares_line(pts: &[(f64, f64)]) -> (f64, f64) {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

/// A point of the core cell `(i, j)` interior, for one-query evaluations.
pub fn core_cell_center(base: &BaseInstance, i: u64, j: u64) -> BasePoint {
    let a = base.node_point(i, j);
    let h = base.cell_side() / int(2);
    BasePoint::new(a.x2.add_rational(&h), &a.x3 + &h).expect("core cell centre lies in Δ²")
}
