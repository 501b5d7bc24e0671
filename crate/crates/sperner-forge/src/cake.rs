//! The envy-free cake-cutting instance induced by a symmetric colouring: a
//! shared utility interpolated over the Freudenthal triangulation of cut
//! space, bundles, ε-approximate p'-out-of-p envy-freeness, and the map from
//! cake solutions back to trichromatic cells.

use crate::error::{Error, Result};
use crate::lift::{LiftedColoring, Mode};
use crate::numerics::{int, Rational};
use crate::simplex::{locate_cell, CutVector, KuhnCell, SimplexPoint};
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::sync::Mutex;

/// Shared utility and preference of every agent, induced by a symmetric
/// colouring on the grid Δ^k_m (pieces resolution `1/N`, `N = 2^m − 1`).
#[derive(Debug)]
pub struct UtilityModel {
    lc: LiftedColoring,
    m: u32,
    big_n: u64,
    colors: Mutex<HashMap<Vec<u64>, u32>>,
}

impl UtilityModel {
    pub fn new(lc: LiftedColoring, m: u32) -> Result<Self> {
        if lc.mode() != Mode::Symmetric {
            return Err(Error::ModeMismatch);
        }
        if !(1..=62).contains(&m) {
            return Err(Error::InvalidInput(format!("grid exponent must be in 1..=62, got {m}")));
        }
        Ok(UtilityModel { lc, m, big_n: (1u64 << m) - 1, colors: Mutex::new(HashMap::new()) })
    }

    pub fn k(&self) -> usize {
        self.lc.k()
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn big_n(&self) -> u64 {
        self.big_n
    }

    pub fn coloring(&self) -> &LiftedColoring {
        &self.lc
    }

    fn lattice_of(&self, x: &SimplexPoint) -> Result<Vec<u64>> {
        if x.dim() != self.k() {
            return Err(Error::InvalidInput(format!("expected a point of Δ^{}", self.k())));
        }
        let n = Rational::from_integer(BigInt::from(self.big_n));
        x.coords()
            .iter()
            .map(|c| {
                let v = c * &n;
                if v.is_integer() {
                    Ok(v.to_integer().to_u64().expect("coordinate within [0,1]"))
                } else {
                    Err(Error::InvalidInput("point is not on the grid".into()))
                }
            })
            .collect()
    }

    /// Colour of a grid point given as a lattice vector summing to `N` (cached).
    pub fn color_lattice(&self, c: &[u64]) -> Result<u32> {
        if let Some(&v) = self.colors.lock().unwrap().get(c) {
            return Ok(v);
        }
        let v = self.lc.eval(&SimplexPoint::from_lattice(c, self.big_n))?;
        self.colors.lock().unwrap().insert(c.to_vec(), v);
        Ok(v)
    }

    fn preference_lattice(&self, c: &[u64]) -> Result<usize> {
        Ok(self.color_lattice(c)? as usize - 1)
    }

    /// `P(x)`: the preferred piece (0-based) at a grid point, i.e. colour − 1.
    pub fn preference(&self, x: &SimplexPoint) -> Result<usize> {
        self.preference_lattice(&self.lattice_of(x)?)
    }

    fn pseudo_lattice(&self, c: &[u64], piece: usize) -> Result<Rational> {
        let n = self.big_n as i64;
        let k = self.k() as i64;
        Ok(if self.preference_lattice(c)? == piece {
            Rational::new(1.into(), (2 * n).into())
        } else if c[piece] == 0 {
            Rational::zero()
        } else {
            Rational::new(1.into(), (10 * k * k * n).into())
        })
    }

    /// `u'(x, X_piece)` at a grid point: `1/(2N)` for the preferred piece,
    /// `0` for an empty piece, `1/(10k²N)` otherwise.
    pub fn pseudo_utility_grid(&self, x: &SimplexPoint, piece: usize) -> Result<Rational> {
        self.check_piece(piece)?;
        self.pseudo_lattice(&self.lattice_of(x)?, piece)
    }

    fn check_piece(&self, piece: usize) -> Result<()> {
        if piece > self.k() {
            return Err(Error::InvalidInput(format!("piece {piece} out of range 0..={}", self.k())));
        }
        Ok(())
    }

    fn check_cut(&self, t: &CutVector) -> Result<()> {
        if t.k() != self.k() {
            return Err(Error::InvalidInput(format!("expected {} cuts, got {}", self.k(), t.k())));
        }
        Ok(())
    }

    pub fn locate(&self, t: &CutVector) -> Result<KuhnCell> {
        self.check_cut(t)?;
        Ok(locate_cell(t, self.big_n))
    }

    /// Utility of every piece at the point of `cell` with the cell's weights.
    pub fn utilities_in_cell(&self, cell: &KuhnCell) -> Result<Vec<Rational>> {
        let mut out = vec![Rational::zero(); self.k() + 1];
        for (corner, w) in cell.corner_points().iter().zip(&cell.weights) {
            if w.is_zero() {
                continue;
            }
            for (piece, acc) in out.iter_mut().enumerate() {
                *acc += w * self.pseudo_lattice(corner, piece)?;
            }
        }
        Ok(out)
    }

    /// `u(t, X_piece)`: barycentric interpolation of `u'` over the cell of `t`.
    pub fn utility(&self, t: &CutVector, piece: usize) -> Result<Rational> {
        self.check_piece(piece)?;
        Ok(self.utilities(t)?.swap_remove(piece))
    }

    pub fn utilities(&self, t: &CutVector) -> Result<Vec<Rational>> {
        self.utilities_in_cell(&self.locate(t)?)
    }

    pub fn bundle_utility(&self, t: &CutVector, bundle: &[usize]) -> Result<Rational> {
        let u = self.utilities(t)?;
        bundle_sum(&u, bundle)
    }

    /// ε-approximate envy-freeness for a shared utility: agent `d` is happy
    /// when its bundle is within ε of every bundle.
    pub fn check_ef(&self, t: &CutVector, bundling: &Bundling, epsilon: &Rational, required: usize) -> Result<EfReport> {
        if bundling.pieces() != self.k() + 1 {
            return Err(Error::InvalidInput(format!("bundling covers {} pieces, cake has {}", bundling.pieces(), self.k() + 1)));
        }
        let u = self.utilities(t)?;
        let bundle_utilities = bundling.bundles.iter().map(|b| bundle_sum(&u, b)).collect::<Result<Vec<_>>>()?;
        ef_from_utilities(bundle_utilities, &bundling.assignment, epsilon, required)
    }

    /// The cell containing `t` with its corner colours; the colours of the
    /// positively weighted corners are what a certified cut must make trichromatic.
    pub fn cake_solution_to_sperner(&self, t: &CutVector) -> Result<SpernerImage> {
        let cell = self.locate(t)?;
        let lattice = cell.corner_points();
        let colors = lattice.iter().map(|c| self.color_lattice(c)).collect::<Result<Vec<_>>>()?;
        let corners = lattice.iter().map(|c| SimplexPoint::from_lattice(c, self.big_n)).collect();
        Ok(SpernerImage { corners, weights: cell.weights, colors })
    }

    /// Every Freudenthal cell of sorted cut space at resolution `1/N`, with
    /// centroid weights.
    pub fn all_cells(&self) -> Vec<KuhnCell> {
        let k = self.k();
        let n = self.big_n;
        let mut out = Vec::new();
        let mut perms: Vec<Vec<usize>> = Vec::new();
        permutations(&mut (0..k).collect(), 0, &mut perms);
        let w = Rational::new(BigInt::one(), BigInt::from(k + 1));
        for z0 in sorted_vectors(k, n - 1) {
            for p in &perms {
                let mut z = z0.clone();
                let mut lattice = vec![z.clone()];
                let mut ok = true;
                for &i in p {
                    z[i] += 1;
                    if z.windows(2).any(|v| v[0] > v[1]) {
                        ok = false;
                        break;
                    }
                    lattice.push(z.clone());
                }
                if ok {
                    out.push(KuhnCell { big_n: n, lattice, weights: vec![w.clone(); k + 1] });
                }
            }
        }
        out
    }
}

fn sorted_vectors(k: usize, max: u64) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(k: usize, lo: u64, max: u64, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in lo..=max {
            cur.push(v);
            rec(k, v, max, cur, out);
            cur.pop();
        }
    }
    rec(k, 0, max, &mut cur, &mut out);
    out
}

fn permutations(items: &mut Vec<usize>, at: usize, out: &mut Vec<Vec<usize>>) {
    if at == items.len() {
        out.push(items.clone());
        return;
    }
    for i in at..items.len() {
        items.swap(at, i);
        permutations(items, at + 1, out);
        items.swap(at, i);
    }
}

/// All permutations of `0..p`.
pub fn assignments(p: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    permutations(&mut (0..p).collect(), 0, &mut out);
    out
}

fn bundle_sum(u: &[Rational], bundle: &[usize]) -> Result<Rational> {
    bundle
        .iter()
        .map(|&i| u.get(i).cloned().ok_or_else(|| Error::InvalidInput(format!("piece {i} out of range"))))
        .sum()
}

/// Happy agents (1-based) for given bundle utilities under a shared utility.
pub fn ef_from_utilities(bundle_utilities: Vec<Rational>, assignment: &[usize], epsilon: &Rational, required: usize) -> Result<EfReport> {
    if epsilon.is_negative() {
        return Err(Error::InvalidInput("epsilon must be nonnegative".into()));
    }
    if required < 1 || required > assignment.len() {
        return Err(Error::InvalidInput(format!("required must be in 1..={}", assignment.len())));
    }
    let max = bundle_utilities.iter().max().cloned().unwrap_or_else(Rational::zero);
    let happy_set: Vec<usize> = assignment
        .iter()
        .enumerate()
        .filter(|(_, &b)| &bundle_utilities[b] + epsilon >= max)
        .map(|(d, _)| d + 1)
        .collect();
    Ok(EfReport { satisfied: happy_set.len() >= required, happy_set, bundle_utilities })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EfReport {
    pub satisfied: bool,
    /// 1-based agent labels.
    pub happy_set: Vec<usize>,
    #[serde(with = "crate::numerics::rational_vec")]
    pub bundle_utilities: Vec<Rational>,
}

/// A partition of the pieces into bundles plus a bijection agents → bundles.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bundling {
    pub bundles: Vec<Vec<usize>>,
    /// `assignment[d]` is the bundle of agent `d + 1`.
    pub assignment: Vec<usize>,
}

impl Bundling {
    pub fn new(bundles: Vec<Vec<usize>>, assignment: Vec<usize>) -> Result<Self> {
        let pieces: usize = bundles.iter().map(Vec::len).sum();
        let mut seen = vec![false; pieces];
        for &i in bundles.iter().flatten() {
            if i >= pieces || std::mem::replace(&mut seen[i], true) {
                return Err(Error::InvalidInput("bundles must partition the piece indices".into()));
            }
        }
        if bundles.iter().any(Vec::is_empty) {
            return Err(Error::InvalidInput("bundles must be nonempty by index".into()));
        }
        let mut perm = assignment.clone();
        perm.sort_unstable();
        if perm != (0..bundles.len()).collect::<Vec<_>>() {
            return Err(Error::InvalidInput("assignment must be a bijection onto the bundles".into()));
        }
        Ok(Bundling { bundles, assignment })
    }

    pub fn identity(bundles: Vec<Vec<usize>>) -> Result<Self> {
        let p = bundles.len();
        Self::new(bundles, (0..p).collect())
    }

    pub fn pieces(&self) -> usize {
        self.bundles.iter().map(Vec::len).sum()
    }
}

/// All partitions of pieces `0..pieces` into exactly `p` nonempty bundles.
pub fn partitions(pieces: usize, p: usize) -> Vec<Vec<Vec<usize>>> {
    // restricted growth strings
    fn rec(i: usize, pieces: usize, p: usize, rgs: &mut Vec<usize>, used: usize, out: &mut Vec<Vec<Vec<usize>>>) {
        if i == pieces {
            if used == p {
                let mut b = vec![Vec::new(); p];
                for (piece, &blk) in rgs.iter().enumerate() {
                    b[blk].push(piece);
                }
                out.push(b);
            }
            return;
        }
        if p - used > pieces - i {
            return;
        }
        for blk in 0..=used.min(p - 1) {
            rgs.push(blk);
            rec(i + 1, pieces, p, rgs, used.max(blk + 1), out);
            rgs.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, pieces, p, &mut Vec::new(), 0, &mut out);
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpernerImage {
    pub corners: Vec<SimplexPoint>,
    #[serde(with = "crate::numerics::rational_vec")]
    pub weights: Vec<Rational>,
    pub colors: Vec<u32>,
}

impl SpernerImage {
    /// Distinct colours over all corners.
    pub fn color_set(&self) -> Vec<u32> {
        let mut c = self.colors.clone();
        c.sort_unstable();
        c.dedup();
        c
    }

    /// Distinct colours over the positively weighted corners.
    pub fn support_color_set(&self) -> Vec<u32> {
        let mut c: Vec<u32> = self.colors.iter().zip(&self.weights).filter(|(_, w)| w.is_positive()).map(|(&c, _)| c).collect();
        c.sort_unstable();
        c.dedup();
        c
    }
}

/// Equivalence-class representative: empty pieces first, then the nonempty
/// pieces in their original order.
pub fn canonical_cut(t: &CutVector) -> CutVector {
    let k = t.k();
    let lens: Vec<Rational> = (0..=k).map(|i| t.piece_len(i)).collect();
    let empty = lens.iter().filter(|l| l.is_zero()).count();
    let ordered = std::iter::repeat_n(Rational::zero(), empty).chain(lens.into_iter().filter(|l| !l.is_zero()));
    let mut acc = Rational::zero();
    let cuts = ordered
        .take(k)
        .map(|l| {
            acc += l;
            acc.clone()
        })
        .collect();
    CutVector::new(cuts).expect("prefix sums of piece lengths are sorted")
}

pub fn equivalent_cuts(a: &CutVector, b: &CutVector) -> bool {
    canonical_cut(a) == canonical_cut(b)
}

/// Feasible vertices of `{λ ≥ 0, Σλ = 1, A·λ ≤ b}` found by exact vertex
/// enumeration (every subset of `dim − 1` tight inequalities).
pub fn feasible_vertices(dim: usize, rows: &[(Vec<Rational>, Rational)]) -> Vec<Vec<Rational>> {
    let mut all: Vec<(Vec<Rational>, Rational)> = (0..dim)
        .map(|i| {
            let mut a = vec![Rational::zero(); dim];
            a[i] = -Rational::one();
            (a, Rational::zero())
        })
        .collect();
    all.extend(rows.iter().cloned());
    let feasible = |l: &[Rational]| all.iter().all(|(a, b)| a.iter().zip(l).map(|(x, y)| x * y).sum::<Rational>() <= *b);
    let mut out: Vec<Vec<Rational>> = Vec::new();
    let mut pick = Vec::with_capacity(dim - 1);
    fn choose(n: usize, r: usize, start: usize, pick: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if pick.len() == r {
            f(pick);
            return;
        }
        for i in start..n {
            pick.push(i);
            choose(n, r, i + 1, pick, f);
            pick.pop();
        }
    }
    choose(all.len(), dim - 1, 0, &mut pick, &mut |sel| {
        let mut m: Vec<Vec<Rational>> = vec![vec![Rational::one(); dim + 1]];
        for &s in sel {
            let mut row = all[s].0.clone();
            row.push(all[s].1.clone());
            m.push(row);
        }
        if let Some(l) = solve_square(m) {
            if feasible(&l) && !out.contains(&l) {
                out.push(l);
            }
        }
    });
    out
}

/// Solves a square system given as augmented rows; `None` when singular.
fn solve_square(mut m: Vec<Vec<Rational>>) -> Option<Vec<Rational>> {
    let n = m.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, piv);
        let inv = m[col][col].recip();
        for v in m[col].iter_mut() {
            *v *= &inv;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                let pivot_row = m[col].clone();
                for (v, p) in m[r].iter_mut().zip(&pivot_row) {
                    *v -= &f * p;
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n].clone()).collect())
}

/// Cut points in `cell` where all `p` bundles of `bundles` are within `ε` of
/// each other (the vertices of that region), as convex-combination weights.
pub fn happy_region_vertices(model: &UtilityModel, cell: &KuhnCell, bundles: &[Vec<usize>], epsilon: &Rational) -> Result<Vec<Vec<Rational>>> {
    let dim = cell.lattice.len();
    let corners = cell.corner_points();
    // v[i][b] = bundle b's pseudo-utility at corner i
    let mut v = vec![vec![Rational::zero(); bundles.len()]; dim];
    for (i, c) in corners.iter().enumerate() {
        for (b, bundle) in bundles.iter().enumerate() {
            for &piece in bundle {
                v[i][b] += model.pseudo_lattice(c, piece)?;
            }
        }
    }
    let mut rows = Vec::new();
    for a in 0..bundles.len() {
        for b in 0..bundles.len() {
            if a != b {
                // U_b − U_a ≤ ε
                rows.push(((0..dim).map(|i| &v[i][b] - &v[i][a]).collect(), epsilon.clone()));
            }
        }
    }
    Ok(feasible_vertices(dim, &rows))
}

/// The cut vector at convex weights `l` over the cell's corners.
pub fn cut_at(cell: &KuhnCell, l: &[Rational]) -> CutVector {
    let k = cell.lattice[0].len();
    let n = int(cell.big_n as i64);
    let cuts = (0..k)
        .map(|j| cell.lattice.iter().zip(l).map(|(z, w)| w * int(z[j] as i64)).sum::<Rational>() / &n)
        .collect();
    CutVector::new(cuts).expect("convex combination of sorted corners")
}

/// One row of the cake invariant audit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditRow {
    pub check: String,
    pub checked: u64,
    pub violations: u64,
}

impl AuditRow {
    fn new(check: &str) -> Self {
        AuditRow { check: check.into(), checked: 0, violations: 0 }
    }

    fn record(&mut self, ok: bool) {
        self.checked += 1;
        if !ok {
            self.violations += 1;
        }
    }
}

/// `u(t, X_j) > 0 ⇔ X_j` nonempty, at every corner, edge midpoint and centroid
/// of every cell.
pub fn audit_nonnegativity(model: &UtilityModel) -> Result<AuditRow> {
    let mut row = AuditRow::new("nonnegativity");
    let dim = model.k() + 1;
    for cell in model.all_cells() {
        let mut weights = vec![cell.weights.clone()];
        for a in 0..dim {
            let mut w = vec![Rational::zero(); dim];
            w[a] = Rational::one();
            weights.push(w.clone());
            for b in a + 1..dim {
                let mut w = vec![Rational::zero(); dim];
                w[a] = Rational::new(1.into(), 2.into());
                w[b] = w[a].clone();
                weights.push(w);
            }
        }
        for w in weights {
            let t = cut_at(&cell, &w);
            let u = model.utilities(&t)?;
            for (j, uj) in u.iter().enumerate() {
                row.record(uj.is_positive() == t.piece_len(j).is_positive() && !uj.is_negative());
            }
        }
    }
    Ok(row)
}

fn random_cut<R: rand::Rng>(rng: &mut R, k: usize, denom: u64) -> CutVector {
    CutVector::from_point(&crate::simplex::random_point(rng, k, denom))
}

/// `|u(t, X_j) − u(s, X_j)| ≤ ‖t − s‖₁` on random pairs; half the pairs are
/// close (within a few grid cells) so cell-crossing behaviour is exercised.
pub fn audit_lipschitz(model: &UtilityModel, pairs: u64, seed: u64) -> Result<AuditRow> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut row = AuditRow::new("lipschitz_l1");
    let k = model.k();
    let denom = 64 * model.big_n();
    for p in 0..pairs {
        let t = random_cut(&mut rng, k, denom);
        let s = if p % 2 == 0 {
            random_cut(&mut rng, k, denom)
        } else {
            let x = t.to_point();
            let mut c: Vec<i64> = x.coords().iter().map(|v| (v * int(denom as i64)).to_integer().to_i64().unwrap()).collect();
            for _ in 0..3 {
                let (a, b) = (rng.gen_range(0..=k), rng.gen_range(0..=k));
                let d = rng.gen_range(0..=48).min(c[a]);
                c[a] -= d;
                c[b] += d;
            }
            let c: Vec<u64> = c.into_iter().map(|v| v as u64).collect();
            CutVector::from_point(&SimplexPoint::from_lattice(&c, denom))
        };
        let (ut, us) = (model.utilities(&t)?, model.utilities(&s)?);
        let l1 = t.l1(&s);
        for (a, b) in ut.iter().zip(&us) {
            row.record((a - b).abs() <= l1);
        }
    }
    Ok(row)
}

/// Zero-insertion pairs `(u_{1:i−1}, 0, u_{i:k})`, `(u_{1:j−1}, 0, u_{j:k})`
/// give the same utility to corresponding pieces.
pub fn audit_symmetry(model: &UtilityModel, pairs: u64, seed: u64) -> Result<AuditRow> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut row = AuditRow::new("symmetry");
    let k = model.k();
    let denom = 8 * model.big_n();
    for p in 0..pairs {
        // every fourth pair on the grid itself, where preferences are defined
        let d = if p % 4 == 0 { model.big_n() } else { denom };
        let u = crate::simplex::random_point(&mut rng, k - 1, d);
        let i = rng.gen_range(1..=k);
        let j = rng.gen_range(i + 1..=k + 1);
        let a = CutVector::from_point(&crate::simplex::insert_zero(&u, i));
        let b = CutVector::from_point(&crate::simplex::insert_zero(&u, j));
        let (ua, ub) = (model.utilities(&a)?, model.utilities(&b)?);
        // piece q of `a` ↔ position in `u` ↔ piece of `b`
        let to_b = |q: usize| -> usize {
            if q == i - 1 {
                return j - 1;
            }
            let pos = if q < i - 1 { q } else { q - 1 };
            if pos < j - 1 {
                pos
            } else {
                pos + 1
            }
        };
        let ok = (0..=k).all(|q| ua[q] == ub[to_b(q)]);
        row.record(ok && canonical_cut(&a) == canonical_cut(&b));
    }
    Ok(row)
}

/// No bundling into `p` bundles (under any assignment) makes three agents
/// ε-happy at `ε = 1/(10N)` anywhere in a cell whose corners use ≤ 2 colours.
///
/// All agents share one utility, so agent `d` is happy iff its bundle is
/// within ε of the best bundle; the set of cuts where everyone is happy is
/// therefore the same polytope for every assignment, and it is empty iff
/// vertex enumeration finds no feasible vertex.
pub fn audit_two_colored_cells(model: &UtilityModel, p: usize) -> Result<AuditRow> {
    let mut row = AuditRow::new("two_colored_cells_not_3_happy");
    let eps = Rational::new(1.into(), (10 * model.big_n()).into());
    let parts = partitions(model.k() + 1, p);
    let n_assign = assignments(p).len() as u64;
    for cell in model.all_cells() {
        let mut colors = cell.corner_points().iter().map(|c| model.color_lattice(c)).collect::<Result<Vec<_>>>()?;
        colors.sort_unstable();
        colors.dedup();
        if colors.len() > 2 {
            continue;
        }
        for bundles in &parts {
            let feasible = happy_region_vertices(model, &cell, bundles, &eps)?;
            for _ in 0..n_assign {
                row.record(feasible.is_empty());
            }
        }
    }
    Ok(row)
}

/// Every cut certified 3-happy at `ε = 1/(10N)` — the vertices of each
/// cell's happy region plus all grid cuts — maps to a cell whose positively
/// weighted corners carry at least three colours.
pub fn audit_certified_cuts(model: &UtilityModel, p: usize) -> Result<AuditRow> {
    let mut row = AuditRow::new("certified_cuts_trichromatic");
    let eps = Rational::new(1.into(), (10 * model.big_n()).into());
    let parts = partitions(model.k() + 1, p);
    let consider = |t: &CutVector, bundles: &[Vec<usize>], row: &mut AuditRow| -> Result<()> {
        let b = Bundling::identity(bundles.to_vec())?;
        if model.check_ef(t, &b, &eps, p.min(3))?.satisfied {
            let img = model.cake_solution_to_sperner(t)?;
            row.record(img.support_color_set().len() >= 3);
        }
        Ok(())
    };
    for cell in model.all_cells() {
        for bundles in &parts {
            for l in happy_region_vertices(model, &cell, bundles, &eps)? {
                consider(&cut_at(&cell, &l), bundles, &mut row)?;
            }
        }
    }
    let grid = crate::simplex::GridSpec::new(model.k(), model.m())?;
    for x in grid.points() {
        let t = CutVector::from_point(&x);
        for bundles in &parts {
            consider(&t, bundles, &mut row)?;
        }
    }
    Ok(row)
}

/// The full cake invariant suite.
pub fn audit(model: &UtilityModel, pairs: u64, seed: u64) -> Result<Vec<AuditRow>> {
    Ok(vec![
        audit_nonnegativity(model)?,
        audit_lipschitz(model, pairs, seed)?,
        audit_symmetry(model, pairs, seed.wrapping_add(1))?,
        audit_two_colored_cells(model, 3)?,
        audit_certified_cuts(model, 3)?,
    ])
}
