//! The standard simplex Δ^k: points, projection steps, index utilities, cut
//! space, grid enumeration and Kuhn/Freudenthal cell location.

use crate::error::{Error, Result};
use crate::numerics::{floor_int, rational_vec, Rational};
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

/// A point of Δ^k, stored as its k+1 barycentric coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "PointWire", into = "PointWire")]
pub struct SimplexPoint {
    coords: Vec<Rational>,
}

#[derive(Serialize, Deserialize)]
struct PointWire {
    #[serde(with = "rational_vec")]
    coords: Vec<Rational>,
}

impl TryFrom<PointWire> for SimplexPoint {
    type Error = Error;
    fn try_from(w: PointWire) -> Result<Self> {
        SimplexPoint::new(w.coords)
    }
}

impl From<SimplexPoint> for PointWire {
    fn from(p: SimplexPoint) -> Self {
        PointWire { coords: p.coords }
    }
}

impl SimplexPoint {
    pub fn new(coords: Vec<Rational>) -> Result<Self> {
        if coords.len() < 2 {
            return Err(Error::InvalidInput("a simplex point needs at least 2 coordinates".into()));
        }
        if coords.iter().any(|c| c.is_negative()) {
            return Err(Error::InvalidInput("negative coordinate".into()));
        }
        let s: Rational = coords.iter().sum();
        if !s.is_one() {
            return Err(Error::InvalidInput(format!("coordinates sum to {s}, not 1")));
        }
        Ok(SimplexPoint { coords })
    }

    /// Vertex `e_i` (1-based) of Δ^k.
    pub fn vertex(k: usize, i: usize) -> Self {
        assert!((1..=k + 1).contains(&i));
        let mut coords = vec![Rational::zero(); k + 1];
        coords[i - 1] = Rational::one();
        SimplexPoint { coords }
    }

    /// Grid point `c / N` from integer coordinates summing to `N`.
    pub fn from_lattice(c: &[u64], big_n: u64) -> Self {
        debug_assert_eq!(c.iter().sum::<u64>(), big_n);
        let d = BigInt::from(big_n);
        SimplexPoint {
            coords: c.iter().map(|&v| Rational::new(BigInt::from(v), d.clone())).collect(),
        }
    }

    /// Dimension k (the point has k+1 coordinates).
    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    /// 1-based coordinate access, matching the usual x₁ … x_{k+1} indexing.
    pub fn x(&self, i: usize) -> &Rational {
        &self.coords[i - 1]
    }

    pub fn into_coords(self) -> Vec<Rational> {
        self.coords
    }

    pub fn linf(&self, other: &Self) -> Rational {
        assert_eq!(self.coords.len(), other.coords.len());
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| (a - b).abs())
            .max()
            .unwrap_or_else(Rational::zero)
    }

    /// Whether `(2^m − 1)·xᵢ` is integral for every coordinate.
    pub fn is_on_grid(&self, big_n: u64) -> bool {
        let n = Rational::from_integer(BigInt::from(big_n));
        self.coords.iter().all(|c| (c * &n).is_integer())
    }
}

/// One projection step `P(x) = x_{1:k} / (1 − x_{k+1})`, with the apex mapped to the apex.
pub fn project_once(x: &SimplexPoint) -> SimplexPoint {
    let k = x.dim();
    assert!(k >= 1);
    let last = &x.coords[k];
    if last.is_one() {
        return SimplexPoint::vertex(k - 1, k);
    }
    let denom = Rational::one() - last;
    SimplexPoint {
        coords: x.coords[..k].iter().map(|c| c / &denom).collect(),
    }
}

/// `P^{(ℓ)}(x)`: ℓ projection steps, allowed for ℓ ≤ k − 1.
pub fn project(x: &SimplexPoint, steps: usize) -> Result<SimplexPoint> {
    let k = x.dim();
    if steps + 1 > k {
        return Err(Error::DimensionTooSmall { steps, dim: k });
    }
    let mut y = x.clone();
    for _ in 0..steps {
        y = project_once(&y);
    }
    Ok(y)
}

/// 1-based indices of positive coordinates, increasing.
pub fn nontrivial_indices(x: &SimplexPoint) -> Vec<usize> {
    x.coords
        .iter()
        .enumerate()
        .filter(|(_, c)| c.is_positive())
        .map(|(i, _)| i + 1)
        .collect()
}

/// 1-based position of `v` in the increasing array `a`.
pub fn index_of(a: &[usize], v: usize) -> Result<usize> {
    a.binary_search(&v).map(|p| p + 1).map_err(|_| Error::NotPresent(v))
}

/// `(x_{1:i−1}, 0, x_{i:k})`: insert a zero coordinate at 1-based position `i`.
pub fn insert_zero(x: &SimplexPoint, i: usize) -> SimplexPoint {
    assert!((1..=x.coords.len() + 1).contains(&i));
    let mut coords = x.coords.clone();
    coords.insert(i - 1, Rational::zero());
    SimplexPoint { coords }
}

/// k sorted cut positions in [0,1]; piece `i` (0-based) is `(tᵢ, tᵢ₊₁)` with `t₀ = 0`, `t_{k+1} = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "CutWire", into = "CutWire")]
pub struct CutVector {
    cuts: Vec<Rational>,
}

#[derive(Serialize, Deserialize)]
struct CutWire {
    #[serde(with = "rational_vec")]
    cuts: Vec<Rational>,
}

impl TryFrom<CutWire> for CutVector {
    type Error = Error;
    fn try_from(w: CutWire) -> Result<Self> {
        CutVector::new(w.cuts)
    }
}

impl From<CutVector> for CutWire {
    fn from(c: CutVector) -> Self {
        CutWire { cuts: c.cuts }
    }
}

impl CutVector {
    pub fn new(cuts: Vec<Rational>) -> Result<Self> {
        if cuts.is_empty() {
            return Err(Error::InvalidInput("need at least one cut".into()));
        }
        let zero = Rational::zero();
        let one = Rational::one();
        let mut prev = &zero;
        for c in &cuts {
            if c < prev || *c > one {
                return Err(Error::InvalidInput("cuts must be sorted within [0,1]".into()));
            }
            prev = c;
        }
        Ok(CutVector { cuts })
    }

    pub fn cuts(&self) -> &[Rational] {
        &self.cuts
    }

    pub fn k(&self) -> usize {
        self.cuts.len()
    }

    /// `tᵢ = Σ_{j≤i} xⱼ`.
    pub fn from_point(x: &SimplexPoint) -> Self {
        let k = x.dim();
        let mut acc = Rational::zero();
        let mut cuts = Vec::with_capacity(k);
        for c in &x.coords[..k] {
            acc += c;
            cuts.push(acc.clone());
        }
        CutVector { cuts }
    }

    pub fn to_point(&self) -> SimplexPoint {
        let mut coords = Vec::with_capacity(self.cuts.len() + 1);
        let mut prev = Rational::zero();
        for c in &self.cuts {
            coords.push(c - &prev);
            prev = c.clone();
        }
        coords.push(Rational::one() - prev);
        SimplexPoint { coords }
    }

    /// Length of piece `i` (0-based).
    pub fn piece_len(&self, i: usize) -> Rational {
        let lo = if i == 0 { Rational::zero() } else { self.cuts[i - 1].clone() };
        let hi = if i == self.cuts.len() { Rational::one() } else { self.cuts[i].clone() };
        hi - lo
    }

    pub fn l1(&self, other: &Self) -> Rational {
        self.cuts.iter().zip(&other.cuts).map(|(a, b)| (a - b).abs()).sum()
    }
}

/// Grid of Δ^k at resolution exponent `m`: points with `(2^m − 1)·xᵢ ∈ ℤ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridSpec {
    pub k: usize,
    pub m: u32,
}

impl GridSpec {
    pub fn new(k: usize, m: u32) -> Result<Self> {
        if k < 1 || !(1..=62).contains(&m) {
            return Err(Error::InvalidInput(format!("grid needs k ≥ 1 and 1 ≤ m ≤ 62, got k={k}, m={m}")));
        }
        Ok(GridSpec { k, m })
    }

    /// N = 2^m − 1.
    pub fn big_n(&self) -> u64 {
        (1u64 << self.m) - 1
    }

    /// All grid points, as lattice vectors summing to N (lexicographic order).
    pub fn lattice_points(&self) -> Compositions {
        Compositions::new(self.big_n(), self.k + 1)
    }

    pub fn points(&self) -> impl Iterator<Item = SimplexPoint> {
        let n = self.big_n();
        self.lattice_points().map(move |c| SimplexPoint::from_lattice(&c, n))
    }

    pub fn random_point<R: Rng + ?Sized>(&self, rng: &mut R) -> SimplexPoint {
        random_point(rng, self.k, self.big_n())
    }
}

/// Iterator over compositions of `total` into `parts` nonnegative parts.
pub struct Compositions {
    cur: Option<Vec<u64>>,
    total: u64,
}

impl Compositions {
    pub fn new(total: u64, parts: usize) -> Self {
        assert!(parts >= 1);
        let mut first = vec![0; parts];
        first[parts - 1] = total;
        Compositions { cur: Some(first), total }
    }
}

impl Iterator for Compositions {
    type Item = Vec<u64>;
    fn next(&mut self) -> Option<Vec<u64>> {
        let out = self.cur.clone()?;
        let c = self.cur.as_mut().unwrap();
        let p = c.len();
        // next in lexicographic order: bump the rightmost position (before the
        // last) that still has mass to its right
        let mut advanced = false;
        if p > 1 {
            let mut i = p - 1;
            while i > 0 {
                i -= 1;
                let rest: u64 = c[i + 1..].iter().sum();
                if rest > 0 {
                    c[i] += 1;
                    let used: u64 = c[..=i].iter().sum();
                    for v in c[i + 1..].iter_mut() {
                        *v = 0;
                    }
                    c[p - 1] = self.total - used;
                    advanced = true;
                    break;
                }
            }
        }
        if !advanced {
            self.cur = None;
        }
        Some(out)
    }
}

/// Uniform grid point of Δ^k with denominator `denom` (stars and bars).
pub fn random_point<R: Rng + ?Sized>(rng: &mut R, k: usize, denom: u64) -> SimplexPoint {
    let mut cuts: Vec<u64> = (0..k).map(|_| rng.gen_range(0..=denom)).collect();
    cuts.sort_unstable();
    let mut c = Vec::with_capacity(k + 1);
    let mut prev = 0;
    for t in cuts {
        c.push(t - prev);
        prev = t;
    }
    c.push(denom - prev);
    SimplexPoint::from_lattice(&c, denom)
}

/// A Freudenthal cell containing a cut vector, with barycentric weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KuhnCell {
    pub big_n: u64,
    /// Corner cut vectors in units of `1/N`; always k+1 of them.
    pub lattice: Vec<Vec<u64>>,
    pub weights: Vec<Rational>,
}

impl KuhnCell {
    pub fn corners(&self) -> Vec<CutVector> {
        let d = BigInt::from(self.big_n);
        self.lattice
            .iter()
            .map(|z| CutVector {
                cuts: z.iter().map(|&v| Rational::new(BigInt::from(v), d.clone())).collect(),
            })
            .collect()
    }

    /// Corners as simplex grid points (lattice vectors summing to N).
    pub fn corner_points(&self) -> Vec<Vec<u64>> {
        self.lattice
            .iter()
            .map(|z| {
                let mut c = Vec::with_capacity(z.len() + 1);
                let mut prev = 0;
                for &t in z {
                    c.push(t - prev);
                    prev = t;
                }
                c.push(self.big_n - prev);
                c
            })
            .collect()
    }
}

/// Locates `t` in the Freudenthal triangulation of cut space at resolution `1/N`.
///
/// Corners are `z⁰ + (1/N)·Σ_{ℓ≤i} e_{π(ℓ)}` where π orders the fractional parts
/// of `N·t` decreasingly, ties going to the larger index first so every corner
/// stays sorted. Points on cell faces get zero-weight corners.
pub fn locate_cell(t: &CutVector, big_n: u64) -> KuhnCell {
    assert!(big_n >= 1);
    let k = t.k();
    let n_r = Rational::from_integer(BigInt::from(big_n));
    let mut base = Vec::with_capacity(k);
    let mut frac = Vec::with_capacity(k);
    for c in &t.cuts {
        let s = c * &n_r;
        let mut fl = floor_int(&s).to_u64().expect("cut within [0,1]");
        let mut f = &s - Rational::from_integer(BigInt::from(fl));
        if fl == big_n {
            fl -= 1;
            f = Rational::one();
        }
        base.push(fl);
        frac.push(f);
    }
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| frac[b].cmp(&frac[a]).then(b.cmp(&a)));
    let mut lattice = Vec::with_capacity(k + 1);
    let mut weights = Vec::with_capacity(k + 1);
    let mut z = base;
    lattice.push(z.clone());
    weights.push(Rational::one() - &frac[order[0]]);
    for (pos, &i) in order.iter().enumerate() {
        z[i] += 1;
        lattice.push(z.clone());
        let next = order.get(pos + 1).map(|&j| frac[j].clone()).unwrap_or_else(Rational::zero);
        weights.push(&frac[i] - next);
    }
    KuhnCell { big_n, lattice, weights }
}
