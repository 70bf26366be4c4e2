//! Ulam discretisation of transfer operators on Δ.
//!
//! Δ is cut into an `n × n` grid of squares of side `δ = 1/((β−1)n)`, each
//! split along its anti-diagonal. Squares `(a, b)` with `a + b ≤ n − 2` lie
//! inside Δ and give two cells; squares on the hypotenuse (`a + b = n − 1`)
//! give only their lower triangle. All `n²` cells have area `δ²/2`.
//!
//! Matrix entries are Monte Carlo estimates: each source cell is sampled with
//! `m` points, `⌊√m⌋²` of them stratified over a regular subdivision of the
//! cell and the rest uniform. Rows are generated in parallel, each from its
//! own ChaCha8 stream (`seed`, stream = row index), so results do not depend
//! on the thread count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{GasketError, Result};
use crate::geometry::{greedy_step, lazy_step, snap_to_hull, Beta, Point, HULL_TOL};
use crate::measures::random_map::{tau, RandomMapSpec};

/// The map whose transfer operator is discretised.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum UlamMap {
    Greedy,
    Lazy,
    RandomR(RandomMapSpec),
}

/// One triangular cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cell {
    pub a: usize,
    pub b: usize,
    /// Upper-right triangle of the square rather than the lower-left one.
    pub upper: bool,
    pub vertices: [Point; 3],
}

impl Cell {
    pub fn centroid(&self) -> Point {
        let [p, q, r] = self.vertices;
        (p + q + r) * (1.0 / 3.0)
    }
}

/// Cell layout over Δ without a matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CellGrid {
    n: usize,
    hull: f64,
    cells: Vec<Cell>,
    lookup: Vec<u32>,
}

const NO_CELL: u32 = u32::MAX;

impl CellGrid {
    pub fn new(beta: &Beta, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(GasketError::InvalidParameter(format!(
                "grid n = {n} must be at least 2"
            )));
        }
        let hull = beta.hull();
        let d = hull / n as f64;
        let mut cells = Vec::with_capacity(n * n);
        let mut lookup = vec![NO_CELL; 2 * n * n];
        for a in 0..n {
            for b in 0..n - a {
                let (x0, y0) = (a as f64 * d, b as f64 * d);
                let (x1, y1) = ((a + 1) as f64 * d, (b + 1) as f64 * d);
                lookup[2 * (a * n + b)] = cells.len() as u32;
                cells.push(Cell {
                    a,
                    b,
                    upper: false,
                    vertices: [Point::new(x0, y0), Point::new(x1, y0), Point::new(x0, y1)],
                });
                if a + b + 2 <= n {
                    lookup[2 * (a * n + b) + 1] = cells.len() as u32;
                    cells.push(Cell {
                        a,
                        b,
                        upper: true,
                        vertices: [Point::new(x1, y1), Point::new(x0, y1), Point::new(x1, y0)],
                    });
                }
            }
        }
        Ok(CellGrid {
            n,
            hull,
            cells,
            lookup,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    /// Common area of every cell.
    pub fn cell_area(&self) -> f64 {
        let d = self.hull / self.n as f64;
        0.5 * d * d
    }

    /// Index of the cell containing `z`; points a hair outside Δ go to the
    /// nearest boundary cell.
    pub fn locate(&self, z: Point) -> usize {
        let n = self.n;
        let scale = n as f64 / self.hull;
        let (u, v) = (z.x * scale, z.y * scale);
        let a = (u.floor().max(0.0) as usize).min(n - 1);
        let b = (v.floor().max(0.0) as usize).min(n - 1 - a);
        let upper = (u - a as f64) + (v - b as f64) > 1.0;
        let idx = self.lookup[2 * (a * n + b) + usize::from(upper)];
        if idx == NO_CELL {
            self.lookup[2 * (a * n + b)] as usize
        } else {
            idx as usize
        }
    }

    /// Index of the cell `ψ` maps cell `i` onto.
    pub fn psi_cell(&self, i: usize) -> usize {
        let c = &self.cells[i];
        let n = self.n;
        let (b, upper) = if c.upper {
            (n - c.a - c.b - 2, true)
        } else {
            (n - c.a - c.b - 1, false)
        };
        self.lookup[2 * (c.a * n + b) + usize::from(upper)] as usize
    }

    /// Mass of a cell density in each of `bins × bins` squares over the
    /// bounding box of Δ, assigning each cell by its centroid.
    pub fn square_masses(&self, density: &[f64], bins: usize) -> Vec<f64> {
        let area = self.cell_area();
        let mut out = vec![0.0; bins * bins];
        for (cell, f) in self.cells.iter().zip(density) {
            out[square_bin(cell.centroid(), self.hull, bins)] += f * area;
        }
        out
    }
}

/// Row-major index (`row = y bin`, `col = x bin`) of a point in a
/// `bins × bins` grid over `[0, hull]²`.
pub fn square_bin(z: Point, hull: f64, bins: usize) -> usize {
    let idx = |c: f64| ((c / hull * bins as f64).floor().max(0.0) as usize).min(bins - 1);
    idx(z.y) * bins + idx(z.x)
}

/// Normalised histogram of points on a `bins × bins` grid over `[0, hull]²`.
pub fn square_histogram<I: IntoIterator<Item = Point>>(
    points: I,
    hull: f64,
    bins: usize,
) -> Vec<f64> {
    let mut out = vec![0.0; bins * bins];
    let mut total = 0usize;
    for z in points {
        out[square_bin(z, hull, bins)] += 1.0;
        total += 1;
    }
    if total > 0 {
        out.iter_mut().for_each(|c| *c /= total as f64);
    }
    out
}

/// `½ Σ |a_i − b_i|`.
pub fn total_variation(a: &[f64], b: &[f64]) -> f64 {
    0.5 * a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum::<f64>()
}

/// Sparse row-stochastic Ulam matrix over a [`CellGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct UlamGrid {
    grid: CellGrid,
    row_ptr: Vec<usize>,
    cols: Vec<u32>,
    vals: Vec<f64>,
}

fn uniform_in_triangle(rng: &mut ChaCha8Rng, v: [Point; 3]) -> Point {
    let (mut r1, mut r2): (f64, f64) = (rng.gen(), rng.gen());
    if r1 + r2 > 1.0 {
        r1 = 1.0 - r1;
        r2 = 1.0 - r2;
    }
    v[0] + (v[1] - v[0]) * r1 + (v[2] - v[0]) * r2
}

/// `k²` congruent sub-triangles of `v`.
fn subdivide(v: [Point; 3], k: usize) -> Vec<[Point; 3]> {
    let e1 = (v[1] - v[0]) * (1.0 / k as f64);
    let e2 = (v[2] - v[0]) * (1.0 / k as f64);
    let at = |i: usize, j: usize| v[0] + e1 * i as f64 + e2 * j as f64;
    let mut out = Vec::with_capacity(k * k);
    for i in 0..k {
        for j in 0..k - i {
            out.push([at(i, j), at(i + 1, j), at(i, j + 1)]);
            if i + j + 1 < k {
                out.push([at(i + 1, j + 1), at(i, j + 1), at(i + 1, j)]);
            }
        }
    }
    out
}

/// Stratified sample of `m` points in a cell.
fn sample_cell(rng: &mut ChaCha8Rng, cell: &Cell, m: usize) -> Vec<Point> {
    let k = (m as f64).sqrt().floor() as usize;
    let mut pts: Vec<Point> = subdivide(cell.vertices, k)
        .into_iter()
        .map(|t| uniform_in_triangle(rng, t))
        .collect();
    while pts.len() < m {
        pts.push(uniform_in_triangle(rng, cell.vertices));
    }
    pts
}

fn push_image(
    beta: &Beta,
    grid: &CellGrid,
    acc: &mut Vec<(u32, f64)>,
    z: Point,
    w: f64,
) -> Result<()> {
    let z = snap_to_hull(beta, z, HULL_TOL)?;
    acc.push((grid.locate(z) as u32, w));
    Ok(())
}

fn build_row(
    beta: &Beta,
    map: &UlamMap,
    grid: &CellGrid,
    row: usize,
    m: usize,
    seed: u64,
) -> Result<Vec<(u32, f64)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(row as u64);
    let pts = sample_cell(&mut rng, &grid.cells[row], m);
    let mut acc = Vec::new();
    for z in pts {
        match map {
            UlamMap::Greedy => push_image(beta, grid, &mut acc, greedy_step(beta, z)?.0, 1.0)?,
            UlamMap::Lazy => push_image(beta, grid, &mut acc, lazy_step(beta, z)?.0, 1.0)?,
            UlamMap::RandomR(spec) => {
                for (k, w) in spec.weights().into_iter().enumerate() {
                    push_image(beta, grid, &mut acc, tau(spec, k + 1, z)?, w)?;
                }
            }
        }
    }
    acc.sort_by_key(|&(c, _)| c);
    let mut merged: Vec<(u32, f64)> = Vec::with_capacity(acc.len());
    for (c, w) in acc {
        match merged.last_mut() {
            Some((last, total)) if *last == c => *total += w,
            _ => merged.push((c, w)),
        }
    }
    let sum: f64 = merged.iter().map(|&(_, w)| w).sum();
    merged.iter_mut().for_each(|(_, w)| *w /= sum);
    Ok(merged)
}

/// Estimate the Ulam matrix of `map` on an `n × n` grid with `m` samples per
/// cell.
pub fn build_ulam(beta: &Beta, map: &UlamMap, n: usize, m: usize, seed: u64) -> Result<UlamGrid> {
    if m < 16 {
        return Err(GasketError::InvalidParameter(format!(
            "samples per cell m = {m} must be at least 16"
        )));
    }
    if let UlamMap::RandomR(spec) = map {
        if spec.beta() != beta {
            return Err(GasketError::InvalidParameter(
                "random map built for a different beta".into(),
            ));
        }
    }
    let grid = CellGrid::new(beta, n)?;
    let rows: Vec<Vec<(u32, f64)>> = (0..grid.len())
        .into_par_iter()
        .map(|r| build_row(beta, map, &grid, r, m, seed))
        .collect::<Result<_>>()?;
    let mut row_ptr = Vec::with_capacity(rows.len() + 1);
    row_ptr.push(0);
    let mut cols = Vec::new();
    let mut vals = Vec::new();
    for row in rows {
        for (c, w) in row {
            cols.push(c);
            vals.push(w);
        }
        row_ptr.push(cols.len());
    }
    Ok(UlamGrid {
        grid,
        row_ptr,
        cols,
        vals,
    })
}

impl UlamGrid {
    /// Build directly from dense rows; rows are normalised to sum to 1.
    pub fn from_dense(grid: CellGrid, rows: &[Vec<f64>]) -> Result<Self> {
        if rows.len() != grid.len() || rows.iter().any(|r| r.len() != grid.len()) {
            return Err(GasketError::InvalidParameter(
                "matrix shape does not match the grid".into(),
            ));
        }
        let mut row_ptr = vec![0];
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        for row in rows {
            let sum: f64 = row.iter().sum();
            if sum.is_nan() || sum <= 0.0 || row.iter().any(|&w| w < 0.0 || !w.is_finite()) {
                return Err(GasketError::InvalidParameter(
                    "rows must be nonnegative with positive sum".into(),
                ));
            }
            for (c, &w) in row.iter().enumerate() {
                if w > 0.0 {
                    cols.push(c as u32);
                    vals.push(w / sum);
                }
            }
            row_ptr.push(cols.len());
        }
        Ok(UlamGrid {
            grid,
            row_ptr,
            cols,
            vals,
        })
    }

    pub fn grid(&self) -> &CellGrid {
        &self.grid
    }

    /// Nonzero entries `(column, weight)` of row `r`.
    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let span = self.row_ptr[r]..self.row_ptr[r + 1];
        self.cols[span.clone()]
            .iter()
            .zip(&self.vals[span])
            .map(|(&c, &w)| (c as usize, w))
    }

    pub fn row_sum(&self, r: usize) -> f64 {
        self.row(r).map(|(_, w)| w).sum()
    }

    /// Dense copy, for small grids.
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        (0..self.grid.len())
            .map(|r| {
                let mut row = vec![0.0; self.grid.len()];
                for (c, w) in self.row(r) {
                    row[c] = w;
                }
                row
            })
            .collect()
    }

    /// Push a cell density forward one step. All cells share one area, so
    /// densities transform like masses.
    pub fn transfer(&self, f: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.grid.len()];
        for (r, &fr) in f.iter().enumerate() {
            if fr == 0.0 {
                continue;
            }
            for (c, w) in self.row(r) {
                out[c] += fr * w;
            }
        }
        out
    }

    /// Area-weighted L¹ norm of a cell function.
    pub fn l1(&self, f: &[f64]) -> f64 {
        self.grid.cell_area() * f.iter().map(|v| v.abs()).sum::<f64>()
    }
}

/// Fixed point of [`UlamGrid::transfer`] by power iteration from the uniform
/// density, normalised to unit area-weighted mass at every step.
pub fn stationary_density(ulam: &UlamGrid, tol: f64, maxiter: usize) -> Result<Vec<f64>> {
    let n = ulam.grid.len();
    let area = ulam.grid.cell_area();
    let mut f = vec![1.0 / (area * n as f64); n];
    let mut residual = f64::INFINITY;
    for _ in 0..maxiter {
        let mut g = ulam.transfer(&f);
        let mass = ulam.l1(&g);
        g.iter_mut().for_each(|v| *v /= mass);
        residual = area * g.iter().zip(&f).map(|(a, b)| (a - b).abs()).sum::<f64>();
        f = g;
        if residual < tol {
            return Ok(f);
        }
    }
    Err(GasketError::NoConvergence {
        iterations: maxiter,
        residual,
    })
}
