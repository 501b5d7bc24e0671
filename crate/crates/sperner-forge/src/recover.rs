//! Solution recovery: from three points of Δ^k carrying three distinct lifted
//! colours, simulate their traces and extract an ε-close trichromatic triple
//! of the base instance, then a rect-Sperner cell.

use crate::base2d::{BaseInstance, BasePoint};
use crate::error::{Error, Result};
use crate::lift::LiftedColoring;
use crate::rect2d::RectSolution;
use crate::simplex::SimplexPoint;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Phase {
    /// A trichromatic neighbourhood was met at an intermediate level.
    Simulation,
    /// The final projections themselves form the triple.
    Final,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecoveryOutcome {
    pub phase: Phase,
    /// Level `i` at which the simulation phase fired.
    pub level: Option<usize>,
    pub triple: [BasePoint; 3],
    /// The rect cell read off the triple, when it lands on a solution.
    pub rect_cell: Option<RectSolution>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verification {
    pub valid: bool,
    pub rect_cell: Option<RectSolution>,
}

/// Checks pairwise `‖·‖_∞ ≤ ε` and three distinct base colours; when valid,
/// maps the triple to the rect cell at its lowest core-cell coordinates.
pub fn verify_c_solution(base: &BaseInstance, triple: &[BasePoint; 3]) -> Result<Verification> {
    let eps = base.eps();
    for a in 0..3 {
        for b in a + 1..3 {
            if !triple[a].within_linf(&triple[b], eps)? {
                return Ok(Verification { valid: false, rect_cell: None });
            }
        }
    }
    let mut colors: Vec<u8> = triple.iter().map(|p| base.color(p)).collect();
    colors.sort_unstable();
    colors.dedup();
    if colors.len() != 3 {
        return Ok(Verification { valid: false, rect_cell: None });
    }
    Ok(Verification { valid: true, rect_cell: rect_cell_of(base, triple) })
}

fn rect_cell_of(base: &BaseInstance, triple: &[BasePoint; 3]) -> Option<RectSolution> {
    let rect = base.rect();
    let last = rect.max_coord().checked_sub(1)?;
    let coords: Vec<(u64, u64)> = triple.iter().map(|p| base.rect_coords(p)).collect();
    let x = coords.iter().map(|c| c.0).min()?.min(last);
    let y = coords.iter().map(|c| c.1).min()?.min(last);
    let cell = RectSolution { x, y };
    rect.is_solution(cell).then_some(cell)
}

/// Recovers a base-instance solution from a lifted triple.
///
/// Levels `2 … k−1` are simulated for every point; the first trichromatic
/// neighbourhood found yields its witnesses. Otherwise the final projections
/// are returned. Either way the triple is re-verified, and a failure is
/// reported as [`Error::NotASolution`].
pub fn recover(lc: &LiftedColoring, triple: &[SimplexPoint; 3]) -> Result<RecoveryOutcome> {
    let base = lc.base();
    let traces = triple.iter().map(|x| lc.trace(x)).collect::<Result<Vec<_>>>()?;
    let k = lc.k();
    let mut found = None;
    'levels: for i in 2..k {
        for tr in &traces {
            let pal = base.neighborhood_palette(&tr.projections[i - 2])?;
            if pal.is_trichromatic() {
                let w = |c: u8| pal.witness(c).cloned().expect("palette has a witness per colour");
                found = Some((i, [w(1), w(2), w(3)]));
                break 'levels;
            }
        }
    }
    let (phase, level, out) = match found {
        Some((i, t)) => (Phase::Simulation, Some(i), t),
        None => {
            let f = |j: usize| traces[j].final_projection().clone();
            (Phase::Final, None, [f(0), f(1), f(2)])
        }
    };
    let v = verify_c_solution(base, &out)?;
    if !v.valid {
        return Err(Error::NotASolution(match phase {
            Phase::Simulation => format!("neighbourhood witnesses at level {} are not a solution", level.unwrap()),
            Phase::Final => "final projections are not an ε-close trichromatic triple".into(),
        }));
    }
    Ok(RecoveryOutcome { phase, level, triple: out, rect_cell: v.rect_cell })
}
