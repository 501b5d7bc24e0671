//! 2D rectangular Sperner instances: oracle with a query tally, boundary
//! validation, generators with planted solutions, and brute-force solving.

use crate::error::{Error, Result};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

/// Largest exponent for generated or custom instances (coordinates fit in u64 comfortably).
pub const MAX_RECT_N: u32 = 40;
/// Largest exponent accepted for dense tables (4^n bytes).
pub const MAX_TABLE_N: u32 = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GeneratorKind {
    TrivialSplit,
    PlantedPath,
}

impl std::str::FromStr for GeneratorKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "trivial-split" => Ok(GeneratorKind::TrivialSplit),
            "planted-path" => Ok(GeneratorKind::PlantedPath),
            _ => Err(Error::Parse(format!("unknown generator kind {s:?}"))),
        }
    }
}

/// Reproducible instance description: `{"kind": ..., "n": ..., "seed": ...}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceSpec {
    pub kind: GeneratorKind,
    pub n: u32,
    #[serde(default)]
    pub seed: u64,
}

/// Externally supplied instance, row-major: `colors[y·2^n + x]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DenseTable {
    pub n: u32,
    pub colors: Vec<u8>,
}

type ColorFn = dyn Fn(u64, u64) -> u8 + Send + Sync;

enum Source {
    /// Rows `0..=top` split at `splits[y]` (1 left of it, 2 from it on; side
    /// columns above row 0 are 3); rows above `top` are 3.
    Staircase { top: u64, splits: Vec<u64> },
    Table(Vec<u8>),
    Custom(Box<ColorFn>),
}

/// An oracle `Q_n² → {1,2,3}`. Every call to [`RectInstance::color`] bumps a
/// shared atomic tally; results are never cached.
#[derive(Clone)]
pub struct RectInstance {
    n: u32,
    source: Arc<Source>,
    tally: Arc<AtomicU64>,
}

impl fmt::Debug for RectInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match &*self.source {
            Source::Staircase { .. } => "staircase",
            Source::Table(_) => "table",
            Source::Custom(_) => "custom",
        };
        f.debug_struct("RectInstance")
            .field("n", &self.n)
            .field("source", &kind)
            .field("queries", &self.queries())
            .finish()
    }
}

/// A cell `(x*, y*)` whose four corners show all three colours.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RectSolution {
    pub x: u64,
    pub y: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundaryViolation {
    pub x: u64,
    pub y: u64,
    pub color: u8,
    pub message: String,
}

impl RectInstance {
    fn with_source(n: u32, source: Source) -> Self {
        RectInstance { n, source: Arc::new(source), tally: Arc::new(AtomicU64::new(0)) }
    }

    /// Bottom row split at `2^{n−1}`, everything above is 3. Valid for any n ≥ 1.
    pub fn trivial_split(n: u32) -> Result<Self> {
        if !(1..=MAX_RECT_N).contains(&n) {
            return Err(Error::InvalidInput(format!("rect n must be in 1..={MAX_RECT_N}, got {n}")));
        }
        Ok(Self::with_source(n, Source::Staircase { top: 0, splits: vec![1u64 << (n - 1)] }))
    }

    /// Deterministic synthetic instance with a known unique solution.
    pub fn generate(kind: GeneratorKind, n: u32, seed: u64) -> Result<Self> {
        if !(2..=MAX_RECT_N).contains(&n) {
            return Err(Error::InvalidInput(format!("generators need 2 ≤ n ≤ {MAX_RECT_N}, got {n}")));
        }
        match kind {
            GeneratorKind::TrivialSplit => Self::trivial_split(n),
            GeneratorKind::PlantedPath => {
                let max = (1u64 << n) - 1;
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let top = rng.gen_range(1..max);
                let mut splits = Vec::with_capacity(top as usize + 1);
                let mut s = rng.gen_range(2..max);
                for _ in 0..=top {
                    splits.push(s);
                    if s < max - 1 && rng.gen_bool(0.5) {
                        s += 1;
                    }
                }
                Ok(Self::with_source(n, Source::Staircase { top, splits }))
            }
        }
    }

    pub fn from_spec(spec: &InstanceSpec) -> Result<Self> {
        Self::generate(spec.kind, spec.n, spec.seed)
    }

    pub fn from_table(table: DenseTable) -> Result<Self> {
        let n = table.n;
        if !(1..=MAX_TABLE_N).contains(&n) {
            return Err(Error::InvalidInput(format!("table n must be in 1..={MAX_TABLE_N}, got {n}")));
        }
        let side = 1usize << n;
        if table.colors.len() != side * side {
            return Err(Error::InvalidInput(format!(
                "table for n={n} needs {} colours, got {}",
                side * side,
                table.colors.len()
            )));
        }
        if let Some(c) = table.colors.iter().find(|c| !(1..=3).contains(*c)) {
            return Err(Error::InvalidInput(format!("colour {c} outside 1..=3")));
        }
        Ok(Self::with_source(n, Source::Table(table.colors)))
    }

    /// Wraps an arbitrary colour function; it must return values in 1..=3.
    pub fn from_fn<F>(n: u32, f: F) -> Result<Self>
    where
        F: Fn(u64, u64) -> u8 + Send + Sync + 'static,
    {
        if !(1..=MAX_RECT_N).contains(&n) {
            return Err(Error::InvalidInput(format!("rect n must be in 1..={MAX_RECT_N}, got {n}")));
        }
        Ok(Self::with_source(n, Source::Custom(Box::new(f))))
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Largest coordinate, `2^n − 1`.
    pub fn max_coord(&self) -> u64 {
        (1u64 << self.n) - 1
    }

    fn raw_color(&self, x: u64, y: u64) -> u8 {
        let max = self.max_coord();
        assert!(x <= max && y <= max, "({x},{y}) outside Q_{}", self.n);
        match &*self.source {
            Source::Staircase { top, splits } => {
                if y > *top || (y >= 1 && (x == 0 || x == max)) {
                    3
                } else if x < splits[y as usize] {
                    1
                } else {
                    2
                }
            }
            Source::Table(c) => c[(y as usize) << self.n | x as usize],
            Source::Custom(f) => {
                let c = f(x, y);
                assert!((1..=3).contains(&c), "custom oracle returned colour {c}");
                c
            }
        }
    }

    /// Oracle query; counted exactly once.
    pub fn color(&self, x: u64, y: u64) -> u8 {
        self.tally.fetch_add(1, Ordering::Relaxed);
        self.raw_color(x, y)
    }

    pub fn queries(&self) -> u64 {
        self.tally.load(Ordering::Relaxed)
    }

    pub fn reset_queries(&self) {
        self.tally.store(0, Ordering::Relaxed);
    }

    /// Same oracle with a fresh tally; clones of the result share that tally.
    pub fn with_counter(&self) -> Self {
        RectInstance { n: self.n, source: Arc::clone(&self.source), tally: Arc::new(AtomicU64::new(0)) }
    }

    /// The planted cell, known by construction for generated instances.
    pub fn planted_solution(&self) -> Option<RectSolution> {
        match &*self.source {
            Source::Staircase { top, splits } => Some(RectSolution { x: splits[*top as usize] - 1, y: *top }),
            _ => None,
        }
    }

    /// Exhaustive check of the four boundary clauses. Uncounted.
    pub fn validate_boundary(&self) -> Vec<BoundaryViolation> {
        let max = self.max_coord();
        let mut out = Vec::new();
        let mut push = |x, y, color, msg: &str| {
            out.push(BoundaryViolation { x, y, color, message: msg.to_string() })
        };
        for x in 0..=max {
            let c = self.raw_color(x, 0);
            if x == 0 && c != 1 {
                push(x, 0, c, "corner (0,0) must be 1");
            } else if x == max && c != 2 {
                push(x, 0, c, "corner (max,0) must be 2");
            } else if c == 3 {
                push(x, 0, c, "bottom row must be 1 or 2");
            }
            let c = self.raw_color(x, max);
            if c != 3 {
                push(x, max, c, "top row must be 3");
            }
        }
        for y in 1..max {
            for x in [0, max] {
                let c = self.raw_color(x, y);
                if c != 3 {
                    push(x, y, c, "side columns must be 3 above row 0");
                }
            }
        }
        out
    }

    /// Whether the cell's four corners show three colours (4 counted queries).
    pub fn is_solution(&self, cell: RectSolution) -> bool {
        let max = self.max_coord();
        if cell.x >= max || cell.y >= max {
            return false;
        }
        let mut seen = [false; 4];
        for (dx, dy) in [(0, 0), (1, 0), (0, 1), (1, 1)] {
            seen[self.color(cell.x + dx, cell.y + dy) as usize] = true;
        }
        seen.iter().filter(|&&b| b).count() == 3
    }

    /// Lexicographically first trichromatic cell, ordered by `(x, y)`.
    pub fn solve_bruteforce(&self) -> Result<RectSolution> {
        let max = self.max_coord();
        for x in 0..max {
            for y in 0..max {
                let cell = RectSolution { x, y };
                if self.is_solution(cell) {
                    return Ok(cell);
                }
            }
        }
        Err(Error::NoSolution("no trichromatic cell; the boundary contract must be violated".into()))
    }

    /// Dense export (uncounted).
    pub fn to_table(&self) -> DenseTable {
        let max = self.max_coord();
        let mut colors = Vec::with_capacity(((max + 1) * (max + 1)) as usize);
        for y in 0..=max {
            for x in 0..=max {
                colors.push(self.raw_color(x, y));
            }
        }
        DenseTable { n: self.n, colors }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_split_n3() {
        let r = RectInstance::generate(GeneratorKind::TrivialSplit, 3, 0).unwrap();
        assert!(r.validate_boundary().is_empty());
        let s = r.solve_bruteforce().unwrap();
        assert_eq!(s, RectSolution { x: 3, y: 0 });
        assert_eq!(r.planted_solution(), Some(s));
        let corners = [r.color(3, 0), r.color(4, 0), r.color(3, 1), r.color(4, 1)];
        let mut sorted = corners;
        sorted.sort();
        assert_eq!(sorted, [1, 2, 3, 3]);
    }

    #[test]
    fn boundary_violations_are_reported() {
        let mut t = RectInstance::trivial_split(3).unwrap().to_table();
        t.colors[0] = 2;
        let r = RectInstance::from_table(t.clone()).unwrap();
        assert!(r.validate_boundary().iter().any(|v| v.message == "corner (0,0) must be 1"));
        t.colors[0] = 1;
        t.colors[7 * 8 + 3] = 1;
        let r = RectInstance::from_table(t).unwrap();
        let v = r.validate_boundary();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].message, "top row must be 3");
        assert_eq!((v[0].x, v[0].y), (3, 7));
    }

    #[test]
    fn planted_path_is_valid_and_solved() {
        for seed in 0..50 {
            for n in 2..6 {
                let r = RectInstance::generate(GeneratorKind::PlantedPath, n, seed).unwrap();
                assert!(r.validate_boundary().is_empty(), "n={n} seed={seed}");
                let planted = r.planted_solution().unwrap();
                assert!(r.is_solution(planted));
                let found = r.solve_bruteforce().unwrap();
                assert!(r.is_solution(found));
            }
        }
        let r = RectInstance::generate(GeneratorKind::PlantedPath, 4, 7).unwrap();
        assert!(r.validate_boundary().is_empty());
    }

    #[test]
    fn counter_counts_every_query() {
        let r = RectInstance::trivial_split(3).unwrap().with_counter();
        assert_eq!(r.queries(), 0);
        for x in 0..5 {
            r.color(x, 2);
        }
        assert_eq!(r.queries(), 5);
        r.color(0, 2);
        assert_eq!(r.queries(), 6);
        r.reset_queries();
        assert_eq!(r.queries(), 0);
    }

    #[test]
    fn counter_is_lossless_across_threads() {
        let r = RectInstance::trivial_split(4).unwrap().with_counter();
        std::thread::scope(|s| {
            for _ in 0..8 {
                let r = r.clone();
                s.spawn(move || {
                    for i in 0..1000u64 {
                        r.color(i % 16, (i / 16) % 16);
                    }
                });
            }
        });
        assert_eq!(r.queries(), 8000);
    }

    #[test]
    fn table_round_trip_and_json() {
        let r = RectInstance::generate(GeneratorKind::PlantedPath, 3, 11).unwrap();
        let t = r.to_table();
        let back = RectInstance::from_table(t.clone()).unwrap();
        assert_eq!(back.to_table(), t);
        let spec: InstanceSpec = serde_json::from_str(r#"{"kind":"planted-path","n":3,"seed":11}"#).unwrap();
        assert_eq!(RectInstance::from_spec(&spec).unwrap().to_table(), t);
        assert!(RectInstance::from_table(DenseTable { n: 1, colors: vec![1, 2, 4, 3] }).is_err());
    }
}
