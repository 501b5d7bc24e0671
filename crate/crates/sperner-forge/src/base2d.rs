//! The continuous base colouring of Δ² built around a rectangular instance,
//! with exact nearest-colour-switch probes, the coordinate converter `rel`,
//! the modified neighbouring colour and neighbourhood palettes.

use crate::error::{Error, Result};
use crate::numerics::{
    ad_compare, fmt_rational, int, parse_rational, pow2, rat, AlgebraicDyadic as AD, Rational,
};
use crate::rect2d::{RectInstance, RectSolution};
use crate::simplex::SimplexPoint;
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};
use std::sync::Arc;

/// A point of Δ² given by `(x₂, x₃)`; `x₁ = 1 − x₂ − x₃`.
///
/// `x₂` may be irrational (it is produced by converters involving `2^q`);
/// `x₃` always comes from projections of a rational input and stays rational.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BasePoint {
    pub x2: AD,
    pub x3: Rational,
}

impl BasePoint {
    pub fn new(x2: AD, x3: Rational) -> Result<Self> {
        let p = BasePoint { x2, x3 };
        if p.x2.signum() == Ordering::Less || p.x3.is_negative() || p.x1().signum() == Ordering::Less {
            return Err(Error::InvalidInput(format!("({}, {}) is not in Δ²", p.x2, p.x3)));
        }
        Ok(p)
    }

    pub fn rational(x2: Rational, x3: Rational) -> Result<Self> {
        Self::new(AD::from(x2), x3)
    }

    pub fn from_simplex(x: &SimplexPoint) -> Result<Self> {
        if x.dim() != 2 {
            return Err(Error::InvalidInput(format!("expected a point of Δ², got dimension {}", x.dim())));
        }
        Ok(BasePoint { x2: AD::from(x.x(2).clone()), x3: x.x(3).clone() })
    }

    /// `((1−z)(1−t), (1−z)t, z)`: the point of Δ² over converted coordinate `t` at height `z`.
    pub fn lifted(t: &AD, z: &Rational) -> Self {
        BasePoint { x2: t.scale(&(Rational::one() - z)), x3: z.clone() }
    }

    pub fn x1(&self) -> AD {
        self.x2.neg().add_rational(&(Rational::one() - &self.x3))
    }

    pub fn to_simplex(&self) -> Option<SimplexPoint> {
        let x2 = self.x2.to_rational()?;
        SimplexPoint::new(vec![Rational::one() - &x2 - &self.x3, x2, self.x3.clone()]).ok()
    }

    /// `i*`: index of the first nonzero coordinate.
    pub fn first_nonzero(&self) -> u8 {
        if self.x1().signum() == Ordering::Greater {
            1
        } else if self.x2.signum() == Ordering::Greater {
            2
        } else {
            3
        }
    }

    /// `d(x, y) = max{|x₂−y₂|, |x₃−y₃|}`.
    pub fn d(&self, other: &Self) -> Result<AD> {
        let a = self.x2.sub(&other.x2)?.abs();
        let b = AD::from((&self.x3 - &other.x3).abs());
        ad_max(a, b)
    }

    /// Whether all three barycentric coordinates differ by at most `bound`.
    pub fn within_linf(&self, other: &Self, bound: &Rational) -> Result<bool> {
        let dx2 = self.x2.sub(&other.x2)?;
        let dx3 = &self.x3 - &other.x3;
        let dx1 = dx2.add_rational(&dx3).neg();
        Ok(dx2.abs().cmp_rational(bound) != Ordering::Greater
            && dx3.abs() <= *bound
            && dx1.abs().cmp_rational(bound) != Ordering::Greater)
    }

    pub fn to_f64(&self) -> [f64; 3] {
        let x2 = self.x2.to_f64();
        let x3 = crate::numerics::rational_to_f64(&self.x3);
        [1.0 - x2 - x3, x2, x3]
    }
}

#[derive(Serialize, Deserialize)]
struct BasePointWire {
    #[serde(default, skip_deserializing)]
    x1: Option<AD>,
    x2: AD,
    x3: String,
}

impl Serialize for BasePoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        BasePointWire { x1: Some(self.x1()), x2: self.x2.clone(), x3: fmt_rational(&self.x3) }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for BasePoint {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let w = BasePointWire::deserialize(d)?;
        let x3 = parse_rational(&w.x3).map_err(D::Error::custom)?;
        BasePoint::new(w.x2, x3).map_err(D::Error::custom)
    }
}

pub(crate) fn ad_max(a: AD, b: AD) -> Result<AD> {
    Ok(if ad_compare(&a, &b)? == Ordering::Less { b } else { a })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Temperature {
    Hot,
    Warm,
    Cold,
}

/// Result of a nearest-colour-switch query.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SwitchProbe {
    /// Colour of the probed point.
    pub color: u8,
    /// Exact distance to the nearest switch; clamped to `2ε²` when cold.
    pub distance: AD,
    /// `C_nn`, known only when the point is not cold.
    pub neighbor_color: Option<u8>,
    pub temperature: Temperature,
}

/// Colour set of a neighbourhood `𝒩(y)` with one exact witness per colour.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Palette {
    pub colors: Vec<u8>,
    pub witnesses: Vec<(u8, BasePoint)>,
}

impl Palette {
    pub fn is_trichromatic(&self) -> bool {
        self.colors.len() == 3
    }

    pub fn witness(&self, color: u8) -> Option<&BasePoint> {
        self.witnesses.iter().find(|(c, _)| *c == color).map(|(_, p)| p)
    }
}

#[derive(Clone, Debug)]
struct Bound {
    v: AD,
    closed: bool,
}

/// An axis-aligned colour region with per-side open/closed flags (always
/// further intersected with Δ², i.e. `y₂ + y₃ ≤ 1`).
#[derive(Clone, Debug)]
struct Piece {
    lo2: (Rational, bool),
    hi2: (Rational, bool),
    lo3: (Rational, bool),
    hi3: (Rational, bool),
    color: u8,
}

impl Piece {
    fn new(lo2: (Rational, bool), hi2: (Rational, bool), lo3: (Rational, bool), hi3: (Rational, bool), color: u8) -> Self {
        Piece { lo2, hi2, lo3, hi3, color }
    }
}

fn tighter_lo(a: Bound, b: Bound) -> Result<Bound> {
    Ok(match ad_compare(&a.v, &b.v)? {
        Ordering::Greater => a,
        Ordering::Less => b,
        Ordering::Equal => Bound { v: a.v, closed: a.closed && b.closed },
    })
}

fn tighter_hi(a: Bound, b: Bound) -> Result<Bound> {
    Ok(match ad_compare(&a.v, &b.v)? {
        Ordering::Less => a,
        Ordering::Greater => b,
        Ordering::Equal => Bound { v: a.v, closed: a.closed && b.closed },
    })
}

fn nonempty(lo: &Bound, hi: &Bound) -> Result<bool> {
    Ok(match ad_compare(&lo.v, &hi.v)? {
        Ordering::Less => true,
        Ordering::Equal => lo.closed && hi.closed,
        Ordering::Greater => false,
    })
}

/// A closed box in the `(x₂, x₃)` plane.
#[derive(Clone, Debug)]
struct QueryBox {
    lo2: AD,
    hi2: AD,
    lo3: Rational,
    hi3: Rational,
}

impl QueryBox {
    fn around(p2: &AD, p3: &Rational, r: &Rational) -> Self {
        QueryBox { lo2: p2.sub_rational(r), hi2: p2.add_rational(r), lo3: p3 - r, hi3: p3 + r }
    }
}

/// A point of `piece ∩ boxes ∩ Δ²`, if any.
fn witness_in(piece: &Piece, boxes: &[&QueryBox]) -> Result<Option<BasePoint>> {
    let rb = |(v, c): &(Rational, bool)| Bound { v: AD::from(v.clone()), closed: *c };
    let (mut lo2, mut hi2, mut lo3, mut hi3) = (rb(&piece.lo2), rb(&piece.hi2), rb(&piece.lo3), rb(&piece.hi3));
    for b in boxes {
        lo2 = tighter_lo(lo2, Bound { v: b.lo2.clone(), closed: true })?;
        hi2 = tighter_hi(hi2, Bound { v: b.hi2.clone(), closed: true })?;
        lo3 = tighter_lo(lo3, Bound { v: AD::from(b.lo3.clone()), closed: true })?;
        hi3 = tighter_hi(hi3, Bound { v: AD::from(b.hi3.clone()), closed: true })?;
    }
    if !nonempty(&lo2, &hi2)? || !nonempty(&lo3, &hi3)? {
        return Ok(None);
    }
    let inf_sum = lo2.v.add(&lo3.v)?;
    match inf_sum.cmp_rational(&Rational::one()) {
        Ordering::Greater => return Ok(None),
        Ordering::Equal if !(lo2.closed && lo3.closed) => return Ok(None),
        _ => {}
    }
    // push open lower ends inwards by a shrinking fraction of the interval
    // until the point fits under the diagonal
    let x3_lo = lo3.v.to_rational().expect("x₃ bounds are rational");
    let x3_hi = hi3.v.to_rational().expect("x₃ bounds are rational");
    let mut t = rat(1, 2);
    loop {
        let p2 = if lo2.closed { lo2.v.clone() } else { lo2.v.add(&hi2.v.sub(&lo2.v)?.scale(&t))? };
        let p3 = if lo3.closed { x3_lo.clone() } else { &x3_lo + (&x3_hi - &x3_lo) * &t };
        if p2.add_rational(&p3).cmp_rational(&Rational::one()) != Ordering::Greater {
            return Ok(Some(BasePoint { x2: p2, x3: p3 }));
        }
        t /= int(2);
    }
}

/// The base colouring of Δ² around a rectangular instance with `n_rect = n − 3`.
#[derive(Clone, Debug)]
pub struct BaseInstance {
    rect: RectInstance,
    n: u32,
    eps: Rational,
    eps_sq: Rational,
    h: Rational,
    side: u64,
    /// Evaluations of `C` answered without a rect query (outside the core).
    outer: Arc<AtomicU64>,
}

impl BaseInstance {
    /// Wraps `rect` (resolution `n_rect ≥ 1`) into the base instance at `n = n_rect + 3`.
    pub fn new(rect: RectInstance) -> Result<Self> {
        let n = rect.n() + 3;
        if n < 4 {
            return Err(Error::InvalidInput("base instance needs a rect instance with n ≥ 1".into()));
        }
        let eps = pow2(-(n as i64));
        let eps_sq = &eps * &eps;
        let h = rat(8, 5) * &eps;
        let side = 1u64 << rect.n();
        Ok(BaseInstance { rect, n, eps, eps_sq, h, side, outer: Arc::new(AtomicU64::new(0)) })
    }

    pub fn rect(&self) -> &RectInstance {
        &self.rect
    }

    /// Converter resolution: `ε = 2^{-n}`.
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn eps(&self) -> &Rational {
        &self.eps
    }

    pub fn eps_sq(&self) -> &Rational {
        &self.eps_sq
    }

    /// Side of a core cell, `1.6ε`.
    pub fn cell_side(&self) -> &Rational {
        &self.h
    }

    /// Same instance with fresh query tallies.
    pub fn with_counter(&self) -> Self {
        BaseInstance { rect: self.rect.with_counter(), outer: Arc::new(AtomicU64::new(0)), ..self.clone() }
    }

    /// Rect queries issued so far.
    pub fn queries(&self) -> u64 {
        self.rect.queries()
    }

    /// Queries to the base colouring `C`: every rect query stands for one
    /// evaluation of `C` in the core, plus evaluations outside the core.
    pub fn oracle_queries(&self) -> u64 {
        self.rect.queries() + self.outer.load(AtomicOrdering::Relaxed)
    }

    pub fn reset_queries(&self) {
        self.rect.reset_queries();
        self.outer.store(0, AtomicOrdering::Relaxed);
    }

    /// Core cell `(i, j)` containing `x`, if `x` lies in the core region.
    pub fn core_cell(&self, x: &BasePoint) -> Option<(u64, u64)> {
        if x.x3 <= rat(1, 10) || x.x3 >= rat(3, 10) {
            return None;
        }
        if x.x2.cmp_rational(&rat(2, 5)) == Ordering::Less || x.x2.cmp_rational(&rat(3, 5)) != Ordering::Less {
            return None;
        }
        let i = x.x2.sub_rational(&rat(2, 5)).scale(&self.h.recip()).floor();
        let j = crate::numerics::floor_int(&((&x.x3 - rat(1, 10)) / &self.h));
        Some((i.to_u64().expect("core index"), j.to_u64().expect("core index")))
    }

    /// The colour `C(x)`; a core point costs exactly one rect query.
    pub fn color(&self, x: &BasePoint) -> u8 {
        if x.x3 <= rat(1, 10) {
            self.outer.fetch_add(1, AtomicOrdering::Relaxed);
            return if x.x2.cmp_rational(&rat(1, 2)) != Ordering::Greater { 1 } else { 2 };
        }
        match self.core_cell(x) {
            Some((i, j)) => self.rect.color(i, j),
            None => {
                self.outer.fetch_add(1, AtomicOrdering::Relaxed);
                3
            }
        }
    }

    pub fn color_simplex(&self, x: &SimplexPoint) -> Result<u8> {
        Ok(self.color(&BasePoint::from_simplex(x)?))
    }

    fn outer_pieces() -> Vec<Piece> {
        let (z, one) = (Rational::zero(), Rational::one());
        let (t1, t3, f2, h5, s3) = (rat(1, 10), rat(3, 10), rat(2, 5), rat(1, 2), rat(3, 5));
        vec![
            Piece::new((z.clone(), true), (h5.clone(), true), (z.clone(), true), (t1.clone(), true), 1),
            Piece::new((h5, false), (one.clone(), true), (z.clone(), true), (t1.clone(), true), 2),
            Piece::new((z, true), (f2.clone(), false), (t1.clone(), false), (one.clone(), true), 3),
            Piece::new((s3.clone(), true), (one.clone(), true), (t1, false), (one.clone(), true), 3),
            Piece::new((f2, true), (s3, false), (t3, true), (one, true), 3),
        ]
    }

    fn cell_piece(&self, i: u64, j: u64, color: u8) -> Piece {
        let (f2, t1) = (rat(2, 5), rat(1, 10));
        let hi = |k: u64| &self.h * Rational::from_integer(BigInt::from(k));
        Piece::new(
            (&f2 + hi(i), true),
            (&f2 + hi(i + 1), false),
            (&t1 + hi(j), j > 0),
            (&t1 + hi(j + 1), false),
            color,
        )
    }

    /// Index range of core cells `[o + h·i, o + h·(i+1)]` meeting `[lo, hi]` on
    /// one axis: in the interior when `closed` is false, anywhere otherwise.
    fn cell_range(&self, lo: &AD, hi: &AD, origin: &Rational, closed: bool) -> Option<(u64, u64)> {
        let inv = self.h.recip();
        let fl = |v: &AD| v.sub_rational(origin).scale(&inv).floor();
        let ce = |v: &AD| -(v.sub_rational(origin).scale(&inv).neg().floor());
        let (a, b) = if closed { (ce(lo) - BigInt::one(), fl(hi)) } else { (fl(lo), ce(hi) - BigInt::one()) };
        let max = BigInt::from(self.side - 1);
        let a = a.max(BigInt::zero());
        let b = b.min(max);
        if a > b {
            return None;
        }
        Some((a.to_u64()?, b.to_u64()?))
    }

    /// Exact `d`-distance from `(x₂, x₃)` to the closure of `piece ∩ Δ²`.
    fn distance_to(x2: &AD, x3: &Rational, piece: &Piece) -> Result<AD> {
        let (a2, b2, a3, b3) = (&piece.lo2.0, &piece.hi2.0, &piece.lo3.0, &piece.hi3.0);
        let mut r0 = AD::zero();
        for c in [
            x2.neg().add_rational(a2),
            x2.sub_rational(b2),
            AD::from(a3 - x3),
            AD::from(x3 - b3),
        ] {
            r0 = ad_max(r0, c)?;
        }
        let one = Rational::one();
        // smallest corner sum of the r-box intersected with the piece box
        let g = |r: &AD| -> Result<AD> {
            let u = ad_max(AD::from(a2.clone()), x2.sub(r)?)?;
            let v = ad_max(AD::from(a3.clone()), r.neg().add_rational(x3))?;
            u.add(&v)
        };
        if g(&r0)?.cmp_rational(&one) != Ordering::Greater {
            return Ok(r0);
        }
        let cands = [
            x2.sub_rational(a2),
            AD::from(x3 - a3),
            AD::from(x3 - &one + a2),
            x2.add_rational(&(a3 - &one)),
            x2.add_rational(&(x3 - &one)).scale(&rat(1, 2)),
        ];
        let mut best: Option<AD> = None;
        for c in cands {
            if ad_compare(&c, &r0)? == Ordering::Less || g(&c)?.cmp_rational(&one) == Ordering::Greater {
                continue;
            }
            best = Some(match best {
                Some(b) if ad_compare(&b, &c)? != Ordering::Greater => b,
                _ => c,
            });
        }
        Ok(best.expect("a feasible radius always exists inside Δ²"))
    }

    /// Nearest colour switch under `d`, with the `(distance, colour)` tie-break.
    pub fn nearest_switch(&self, x: &BasePoint) -> Result<SwitchProbe> {
        let own_cell = self.core_cell(x);
        let mut cache: HashMap<(u64, u64), u8> = HashMap::new();
        let color = match own_cell {
            Some(cell) => {
                let c = self.rect.color(cell.0, cell.1);
                cache.insert(cell, c);
                c
            }
            None => self.color(x),
        };
        let two_eps_sq = &self.eps_sq * int(2);
        let mut best: Option<(AD, u8)> = None;
        let consider = |d: AD, c: u8, best: &mut Option<(AD, u8)>| -> Result<()> {
            if d.cmp_rational(&two_eps_sq) != Ordering::Less {
                return Ok(());
            }
            let better = match best {
                None => true,
                Some((bd, bc)) => match ad_compare(&d, bd)? {
                    Ordering::Less => true,
                    Ordering::Equal => c < *bc,
                    Ordering::Greater => false,
                },
            };
            if better {
                *best = Some((d, c));
            }
            Ok(())
        };
        for piece in Self::outer_pieces() {
            if piece.color != color {
                let d = Self::distance_to(&x.x2, &x.x3, &piece)?;
                consider(d, piece.color, &mut best)?;
            }
        }
        let reach = QueryBox::around(&x.x2, &x.x3, &two_eps_sq);
        let irange = self.cell_range(&reach.lo2, &reach.hi2, &rat(2, 5), false);
        let jrange = self.cell_range(&AD::from(reach.lo3.clone()), &AD::from(reach.hi3.clone()), &rat(1, 10), false);
        if let (Some((i0, i1)), Some((j0, j1))) = (irange, jrange) {
            for i in i0..=i1 {
                for j in j0..=j1 {
                    let c = *cache.entry((i, j)).or_insert_with(|| self.rect.color(i, j));
                    if c != color {
                        let d = Self::distance_to(&x.x2, &x.x3, &self.cell_piece(i, j, c))?;
                        consider(d, c, &mut best)?;
                    }
                }
            }
        }
        Ok(match best {
            Some((d, c)) => {
                let temperature =
                    if d.cmp_rational(&self.eps_sq) == Ordering::Less { Temperature::Hot } else { Temperature::Warm };
                SwitchProbe { color, distance: d, neighbor_color: Some(c), temperature }
            }
            None => SwitchProbe {
                color,
                distance: AD::from(two_eps_sq),
                neighbor_color: None,
                temperature: Temperature::Cold,
            },
        })
    }

    /// The four-case converter evaluated on a probe.
    pub fn rel_from_probe(&self, p: &SwitchProbe) -> AD {
        match p.neighbor_color {
            Some(nc) => {
                let s = p.distance.scale(&(rat(1, 2) / &self.eps_sq));
                let v = if nc > p.color { s.neg().add_rational(&rat(1, 2)) } else { s.add_rational(&rat(1, 2)) };
                crate::numerics::ad_clamp_unit(&v)
            }
            None if p.color == 1 => AD::zero(),
            None => AD::one(),
        }
    }

    /// `rel(x) ∈ [0,1]`.
    pub fn rel(&self, x: &BasePoint) -> Result<AD> {
        Ok(self.rel_from_probe(&self.nearest_switch(x)?))
    }

    /// `Ĉ_nn(x)` computed from a probe.
    pub fn cnn_hat_from_probe(p: &SwitchProbe) -> u8 {
        match p.neighbor_color {
            Some(c) => c,
            None if p.color == 1 => 2,
            None => 1,
        }
    }

    pub fn cnn_hat(&self, x: &BasePoint) -> Result<u8> {
        Ok(Self::cnn_hat_from_probe(&self.nearest_switch(x)?))
    }

    /// Colours present in `𝒩(y)` (the closed `ε`-box around `y` within Δ²),
    /// each with an exact witness.
    ///
    /// Witnesses are chosen within `ε/32` of a common anchor when possible, so
    /// a trichromatic palette yields a triple that is pairwise `ε`-close in all
    /// three barycentric coordinates.
    pub fn neighborhood_palette(&self, y: &BasePoint) -> Result<Palette> {
        let half = &self.eps / int(2);
        let nbox = QueryBox::around(&y.x2, &y.x3, &half);
        let pieces = self.pieces_near(&nbox);
        let mut present: Vec<(u8, &Piece)> = Vec::new();
        for p in &pieces {
            if witness_in(p, &[&nbox])?.is_some() {
                present.push((p.color, p));
            }
        }
        let mut colors: Vec<u8> = present.iter().map(|(c, _)| *c).collect();
        colors.sort_unstable();
        colors.dedup();
        self.palette_with_witnesses(y, &nbox, colors, &present)
    }

    /// Colours present in the closed box of half-width `half` (in `x₂` and
    /// `x₃`) around `y`, within Δ².
    pub fn box_colors(&self, y: &BasePoint, half: &Rational) -> Result<Vec<u8>> {
        self.colors_in(&QueryBox::around(&y.x2, &y.x3, half))
    }

    /// Colours present in the closed square `[lo₂, lo₂+side] × [lo₃, lo₃+side]`
    /// intersected with Δ²; the square itself may stick out of Δ².
    pub fn square_colors(&self, lo2: &Rational, lo3: &Rational, side: &Rational) -> Result<Vec<u8>> {
        self.colors_in(&QueryBox { lo2: AD::from(lo2.clone()), hi2: AD::from(lo2 + side), lo3: lo3.clone(), hi3: lo3 + side })
    }

    fn colors_in(&self, qbox: &QueryBox) -> Result<Vec<u8>> {
        let mut colors = Vec::new();
        for p in &self.pieces_near(qbox) {
            if !colors.contains(&p.color) && witness_in(p, &[qbox])?.is_some() {
                colors.push(p.color);
            }
        }
        colors.sort_unstable();
        Ok(colors)
    }

    fn pieces_near(&self, nbox: &QueryBox) -> Vec<Piece> {
        let mut pieces = Self::outer_pieces();
        let irange = self.cell_range(&nbox.lo2, &nbox.hi2, &rat(2, 5), true);
        let jrange = self.cell_range(&AD::from(nbox.lo3.clone()), &AD::from(nbox.hi3.clone()), &rat(1, 10), true);
        if let (Some((i0, i1)), Some((j0, j1))) = (irange, jrange) {
            for i in i0..=i1 {
                for j in j0..=j1 {
                    let c = self.rect.color(i, j);
                    pieces.push(self.cell_piece(i, j, c));
                }
            }
        }
        pieces
    }

    fn palette_with_witnesses(&self, y: &BasePoint, nbox: &QueryBox, colors: Vec<u8>, present: &[(u8, &Piece)]) -> Result<Palette> {
        let eta = &self.eps / int(32);
        for anchor in self.anchors(nbox, y) {
            let abox = QueryBox::around(&anchor.x2, &anchor.x3, &eta);
            let mut ws = Vec::with_capacity(colors.len());
            for &c in &colors {
                for (pc, p) in present {
                    if *pc == c {
                        if let Some(w) = witness_in(p, &[nbox, &abox])? {
                            ws.push((c, w));
                            break;
                        }
                    }
                }
            }
            if ws.len() == colors.len() {
                return Ok(Palette { colors, witnesses: ws });
            }
        }
        let mut ws = Vec::with_capacity(colors.len());
        for &c in &colors {
            for (pc, p) in present {
                if *pc == c {
                    if let Some(w) = witness_in(p, &[nbox])? {
                        ws.push((c, w));
                        break;
                    }
                }
            }
        }
        Ok(Palette { colors, witnesses: ws })
    }

    /// Candidate anchors: colour-junction nodes inside the box, then `y` itself.
    fn anchors(&self, nbox: &QueryBox, y: &BasePoint) -> Vec<BasePoint> {
        let mut out = Vec::new();
        let node_range = |lo: &AD, hi: &AD, origin: &Rational| -> Option<(u64, u64)> {
            let inv = self.h.recip();
            // nodes origin + h·t with lo ≤ node ≤ hi
            let a = -(lo.sub_rational(origin).scale(&inv).neg().floor());
            let b = hi.sub_rational(origin).scale(&inv).floor();
            let a = a.max(BigInt::zero());
            let b = b.min(BigInt::from(self.side));
            if a > b {
                None
            } else {
                Some((a.to_u64()?, b.to_u64()?))
            }
        };
        if let (Some((i0, i1)), Some((j0, j1))) = (
            node_range(&nbox.lo2, &nbox.hi2, &rat(2, 5)),
            node_range(&AD::from(nbox.lo3.clone()), &AD::from(nbox.hi3.clone()), &rat(1, 10)),
        ) {
            for i in i0..=i1 {
                for j in j0..=j1 {
                    let x2 = rat(2, 5) + &self.h * Rational::from_integer(BigInt::from(i));
                    let x3 = rat(1, 10) + &self.h * Rational::from_integer(BigInt::from(j));
                    out.push(BasePoint { x2: AD::from(x2), x3 });
                }
            }
        }
        out.push(y.clone());
        out
    }

    /// Maps a point to rect-cell coordinates by the core floor formula, clamped
    /// to the rect grid.
    pub fn rect_coords(&self, x: &BasePoint) -> (u64, u64) {
        let inv = self.h.recip();
        let clampi = |v: BigInt| v.max(BigInt::zero()).min(BigInt::from(self.side - 1)).to_u64().unwrap();
        let i = clampi(x.x2.sub_rational(&rat(2, 5)).scale(&inv).floor());
        let j = clampi(crate::numerics::floor_int(&((&x.x3 - rat(1, 10)) * &inv)));
        (i, j)
    }

    /// Image of a rect node `(i, j)` in the core: the corner shared by cells
    /// `(i−1..i, j−1..j)`.
    pub fn node_point(&self, i: u64, j: u64) -> BasePoint {
        let x2 = rat(2, 5) + &self.h * Rational::from_integer(BigInt::from(i));
        let x3 = rat(1, 10) + &self.h * Rational::from_integer(BigInt::from(j));
        BasePoint { x2: AD::from(x2), x3 }
    }

    /// The node in the middle of a rect solution cell's 2×2 block of core cells.
    pub fn solution_node(&self, s: RectSolution) -> BasePoint {
        self.node_point(s.x + 1, s.y + 1)
    }
}
