//! Scaling harness for span closure.
//!
//! Each grid cell (n, k, p) builds block fixtures with blocks of size
//! n − ⌊n/2⌋ and ⌊n/2⌋ and k generators on side A, then saturates
//! Lin(A·h·A) and records the structural counters.
//!
//! List sizes: the closure walks X·e·X for every seed e of a list, with
//! X = {I} ∪ gens ∪ gens⁻¹. The raw count includes products with the
//! identity on either side. The per-list bound 4k²r counts only the
//! non-identity products, (|X| − 1)² ≤ 4k² per seed, and is checked in
//! that convention; the raw count is checked against |X|²·r.

use std::fmt::Write as _;
use std::str::FromStr;
use std::time::Instant;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Field;
use crate::platform::make_block_fixture;
use crate::span::span_closure;

pub const CSV_HEADER: &str = "n,k,p,seed,basis_dim,productive_lists,candidates,micros";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GridCell {
    pub n: usize,
    pub k: usize,
    pub p: u64,
}

/// Cartesian grid of cells, in canonical order (n, then k, then p).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grid {
    cells: Vec<GridCell>,
}

impl Grid {
    pub fn new(cells: Vec<GridCell>) -> Result<Self> {
        if cells.is_empty() {
            return Err(Error::Malformed("empty bench grid".into()));
        }
        for c in &cells {
            if c.n == 0 || c.k == 0 {
                return Err(Error::Malformed(format!("bad grid cell {c:?}")));
            }
            Field::new(c.p)?;
        }
        Ok(Grid { cells })
    }

    pub fn product(ns: &[usize], ks: &[usize], ps: &[u64]) -> Result<Self> {
        let mut cells = Vec::new();
        for &n in ns {
            for &k in ks {
                for &p in ps {
                    cells.push(GridCell { n, k, p });
                }
            }
        }
        Grid::new(cells)
    }

    pub fn cells(&self) -> &[GridCell] {
        &self.cells
    }
}

impl Default for Grid {
    /// n ∈ {2..5}, k ∈ {1..3}, p = 1009.
    fn default() -> Self {
        Grid::product(&[2, 3, 4, 5], &[1, 2, 3], &[1009]).expect("default grid is valid")
    }
}

fn parse_values(s: &str) -> Result<Vec<u64>> {
    let bad = || Error::Malformed(format!("bad grid values {s:?}"));
    let mut out = Vec::new();
    for item in s.split(',').map(str::trim).filter(|i| !i.is_empty()) {
        let range = item
            .split_once("..=")
            .or_else(|| item.split_once(".."))
            .or_else(|| item.split_once('-'));
        match range {
            Some((lo, hi)) => {
                let lo: u64 = lo.trim().parse().map_err(|_| bad())?;
                let hi: u64 = hi.trim().parse().map_err(|_| bad())?;
                out.extend(lo..=hi);
            }
            None => out.push(item.parse().map_err(|_| bad())?),
        }
    }
    Ok(out)
}

/// `n=2..5;k=1..3;p=1009`. Ranges are inclusive; lists are comma
/// separated; missing keys take the default grid's values.
impl FromStr for Grid {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (mut ns, mut ks, mut ps) = (vec![2, 3, 4, 5], vec![1, 2, 3], vec![1009]);
        for part in s.split(';').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, vals) = part
                .split_once('=')
                .ok_or_else(|| Error::Malformed(format!("bad grid entry {part:?}")))?;
            let vals = parse_values(vals)?;
            match key.trim() {
                "n" => ns = vals.into_iter().map(|v| v as usize).collect(),
                "k" => ks = vals.into_iter().map(|v| v as usize).collect(),
                "p" => ps = vals,
                other => return Err(Error::Malformed(format!("unknown grid key {other:?}"))),
            }
        }
        Grid::product(&ns, &ks, &ps)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub n: usize,
    pub r: usize,
    pub k: usize,
    pub p: u64,
    pub seed: u64,
    pub basis_dim: usize,
    pub productive_lists: usize,
    pub candidates: usize,
    /// Largest raw list, identity products included.
    pub max_list_size: usize,
    /// Largest list counting only non-identity products.
    pub max_list_size_strict: usize,
    /// Whether the closure certificate held.
    pub closed: bool,
    pub micros: u128,
    /// Bound violations, or the error that stopped this cell.
    pub violations: Vec<String>,
}

impl BenchRecord {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            self.n,
            self.k,
            self.p,
            self.seed,
            self.basis_dim,
            self.productive_lists,
            self.candidates,
            self.micros
        )
    }

    /// Everything except wall-clock time.
    pub fn counters(&self) -> (usize, usize, u64, u64, usize, usize, usize, usize, bool) {
        (
            self.n,
            self.k,
            self.p,
            self.seed,
            self.basis_dim,
            self.productive_lists,
            self.candidates,
            self.max_list_size,
            self.closed,
        )
    }
}

fn measure(cell: GridCell, seed: u64) -> BenchRecord {
    let r = cell.n * cell.n;
    let mut rec = BenchRecord {
        n: cell.n,
        r,
        k: cell.k,
        p: cell.p,
        seed,
        basis_dim: 0,
        productive_lists: 0,
        candidates: 0,
        max_list_size: 0,
        max_list_size_strict: 0,
        closed: false,
        micros: 0,
        violations: Vec::new(),
    };
    let mut run = || -> Result<()> {
        let field = Field::new(cell.p)?;
        let (n1, n2) = (cell.n - cell.n / 2, cell.n / 2);
        let fx = make_block_fixture(n1, n2, cell.k, cell.k, field, seed)?;
        let side = &fx.a_side;
        let start = Instant::now();
        let basis = span_closure(side, &fx.h)?;
        rec.micros = start.elapsed().as_micros();
        let stats = basis.stats();
        let x = side.symmetric_set().len();
        rec.basis_dim = basis.dim();
        rec.productive_lists = stats.productive_lists;
        rec.candidates = stats.candidates_examined;
        rec.max_list_size = stats.max_list_size();
        rec.max_list_size_strict = stats
            .list_sizes
            .iter()
            .map(|s| s / (x * x) * (x - 1) * (x - 1))
            .max()
            .unwrap_or(0);
        rec.closed = basis.closure_holds(side)?;

        let v = &mut rec.violations;
        if rec.productive_lists > r {
            v.push(format!("productive_lists {} > r = {r}", rec.productive_lists));
        }
        if rec.basis_dim > r {
            v.push(format!("basis_dim {} > r = {r}", rec.basis_dim));
        }
        let bound = 4 * cell.k * cell.k * r;
        if rec.max_list_size_strict > bound {
            v.push(format!("list size {} > 4k²r = {bound}", rec.max_list_size_strict));
        }
        if rec.max_list_size > x * x * r {
            v.push(format!("raw list size {} > |X|²r = {}", rec.max_list_size, x * x * r));
        }
        if !rec.closed {
            v.push("closure certificate failed".into());
        }
        Ok(())
    };
    if let Err(e) = run() {
        rec.violations.push(format!("error: {e}"));
    }
    rec
}

/// One record per (cell, seed) in grid order. Fixture seeds are drawn from
/// `rng` in that order, so a seeded rng gives identical counters.
pub fn bench_span_closure<R: Rng + ?Sized>(
    grid: &Grid,
    seeds_per_cell: usize,
    rng: &mut R,
) -> Vec<BenchRecord> {
    let mut out = Vec::with_capacity(grid.cells.len() * seeds_per_cell);
    for &cell in &grid.cells {
        for _ in 0..seeds_per_cell {
            let seed = rng.gen::<u64>();
            out.push(measure(cell, seed));
        }
    }
    out
}

pub fn to_csv(records: &[BenchRecord]) -> String {
    let mut s = String::from(CSV_HEADER);
    s.push('\n');
    for r in records {
        let _ = writeln!(s, "{}", r.csv_row());
    }
    s
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellSummary {
    pub n: usize,
    pub r: usize,
    pub k: usize,
    pub p: u64,
    pub runs: usize,
    pub median_basis_dim: f64,
    pub median_productive_lists: f64,
    pub median_candidates: f64,
    pub median_micros: f64,
    pub violations: usize,
}

/// Least-squares slope of log(y) against log(x). Informational only.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogLogFit {
    pub x: String,
    pub y: String,
    pub slope: f64,
    pub intercept: f64,
    pub points: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchSummary {
    pub records: usize,
    pub violations: usize,
    pub cells: Vec<CellSummary>,
    pub fits: Vec<LogLogFit>,
}

fn median(mut v: Vec<f64>) -> f64 {
    if v.is_empty() {
        return f64::NAN;
    }
    v.sort_by(|a, b| a.total_cmp(b));
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        (v[m - 1] + v[m]) / 2.0
    }
}

fn fit(x: &str, y: &str, pts: &[(f64, f64)]) -> Option<LogLogFit> {
    let pts: Vec<(f64, f64)> = pts
        .iter()
        .filter(|(a, b)| *a > 0.0 && *b > 0.0)
        .map(|(a, b)| (a.ln(), b.ln()))
        .collect();
    let m = pts.len() as f64;
    if pts.len() < 2 {
        return None;
    }
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |(sx, sy), (a, b)| (sx + a, sy + b));
    let (mx, my) = (sx / m, sy / m);
    let sxx: f64 = pts.iter().map(|(a, _)| (a - mx) * (a - mx)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = pts.iter().map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    Some(LogLogFit {
        x: x.into(),
        y: y.into(),
        slope,
        intercept: my - slope * mx,
        points: pts.len(),
    })
}

pub fn summarize(records: &[BenchRecord]) -> BenchSummary {
    let mut cells: Vec<CellSummary> = Vec::new();
    let mut keys: Vec<(usize, usize, u64)> = Vec::new();
    for r in records {
        if !keys.contains(&(r.n, r.k, r.p)) {
            keys.push((r.n, r.k, r.p));
        }
    }
    for (n, k, p) in keys {
        let rs: Vec<&BenchRecord> =
            records.iter().filter(|r| (r.n, r.k, r.p) == (n, k, p)).collect();
        let col = |f: &dyn Fn(&BenchRecord) -> f64| median(rs.iter().map(|r| f(r)).collect());
        cells.push(CellSummary {
            n,
            r: n * n,
            k,
            p,
            runs: rs.len(),
            median_basis_dim: col(&|r| r.basis_dim as f64),
            median_productive_lists: col(&|r| r.productive_lists as f64),
            median_candidates: col(&|r| r.candidates as f64),
            median_micros: col(&|r| r.micros as f64),
            violations: rs.iter().filter(|r| !r.ok()).count(),
        });
    }
    let by_r: Vec<(f64, f64)> = cells.iter().map(|c| (c.r as f64, c.median_candidates)).collect();
    let time_r: Vec<(f64, f64)> = cells.iter().map(|c| (c.r as f64, c.median_micros)).collect();
    let by_k: Vec<(f64, f64)> = cells.iter().map(|c| (c.k as f64, c.median_candidates)).collect();
    let fits = [
        fit("r", "candidates", &by_r),
        fit("r", "micros", &time_r),
        fit("k", "candidates", &by_k),
    ]
    .into_iter()
    .flatten()
    .collect();
    BenchSummary {
        records: records.len(),
        violations: records.iter().filter(|r| !r.ok()).count(),
        cells,
        fits,
    }
}
