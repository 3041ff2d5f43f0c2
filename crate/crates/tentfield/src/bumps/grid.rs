//! Discretization grids: the periodic alpha line, the plane cell grid, and
//! the Whitney-weighted cell measure.
//!
//! The alpha grid carries trigonometric polynomials of period `extent`; its
//! dual grid is the integer frequencies k/extent. The plane grid covers a
//! square in isometric (u, v) coordinates with n x n cells. The measure
//! assigns each cell area/d^2 where d is the curve distance of the center;
//! cells whose center is closer to the curve than one cell diameter get
//! weight zero, which in particular zeroes every cell the curve touches
//! (a touched cell has center distance at most half a diameter).

use serde::{Deserialize, Serialize};

use crate::error::TentError;
use crate::fftutil;
use crate::geometry::{PlaneVector, SingularCurve};

/// Uniform periodic grid on the alpha line.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AlphaGrid {
    n: usize,
    extent: f64,
    x0: f64,
}

impl AlphaGrid {
    /// Grid of `n` points covering `[x0, x0 + extent)` periodically.
    pub fn new(n: usize, extent: f64, x0: f64) -> Result<Self, TentError> {
        if n == 0 || !n.is_power_of_two() {
            return Err(TentError::config(format!(
                "alpha grid size must be a positive power of two, got {n}"
            )));
        }
        if !(extent > 0.0) || !extent.is_finite() {
            return Err(TentError::config(format!(
                "alpha grid extent must be positive, got {extent}"
            )));
        }
        Ok(AlphaGrid { n, extent, x0 })
    }

    /// Centered grid on `[-extent/2, extent/2)`.
    pub fn centered(n: usize, extent: f64) -> Result<Self, TentError> {
        Self::new(n, extent, -0.5 * extent)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn extent(&self) -> f64 {
        self.extent
    }

    pub fn x0(&self) -> f64 {
        self.x0
    }

    /// Sample spacing.
    pub fn dx(&self) -> f64 {
        self.extent / self.n as f64
    }

    /// Dual grid spacing, 1/extent.
    pub fn dxi(&self) -> f64 {
        1.0 / self.extent
    }

    /// The i-th sample point.
    pub fn point(&self, i: usize) -> f64 {
        self.x0 + self.dx() * i as f64
    }

    /// Signed frequency of DFT bin `i`.
    pub fn freq(&self, i: usize) -> f64 {
        fftutil::signed_index(i, self.n) as f64 / self.extent
    }

    /// All sample points.
    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(move |i| self.point(i))
    }

    /// Index range of sample points inside the closed interval, clamped to
    /// one period.
    pub fn indices_in(&self, lo: f64, hi: f64) -> std::ops::Range<usize> {
        let start = ((lo - self.x0) / self.dx()).ceil().max(0.0) as usize;
        let end = (((hi - self.x0) / self.dx()).floor() + 1.0).max(0.0) as usize;
        start.min(self.n)..end.min(self.n)
    }
}

/// Square cell grid in isometric plane coordinates.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VGrid {
    center: [f64; 2],
    extent: f64,
    n: usize,
}

impl VGrid {
    pub fn new(center: [f64; 2], extent: f64, n: usize) -> Result<Self, TentError> {
        if n == 0 {
            return Err(TentError::config("plane grid needs at least one cell"));
        }
        if !(extent > 0.0) || !extent.is_finite() {
            return Err(TentError::config(format!(
                "plane grid extent must be positive, got {extent}"
            )));
        }
        Ok(VGrid { center, extent, n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn extent(&self) -> f64 {
        self.extent
    }

    pub fn center(&self) -> [f64; 2] {
        self.center
    }

    /// Cell side length.
    pub fn cell_size(&self) -> f64 {
        self.extent / self.n as f64
    }

    pub fn n_cells(&self) -> usize {
        self.n * self.n
    }

    pub fn flat(&self, iu: usize, iv: usize) -> usize {
        iu * self.n + iv
    }

    /// Center of cell (iu, iv) in (u, v) coordinates.
    pub fn cell_center_uv(&self, iu: usize, iv: usize) -> [f64; 2] {
        let h = self.cell_size();
        [
            self.center[0] - 0.5 * self.extent + h * (iu as f64 + 0.5),
            self.center[1] - 0.5 * self.extent + h * (iv as f64 + 0.5),
        ]
    }

    /// Center of a flat-indexed cell as a plane vector.
    pub fn cell_center(&self, flat: usize) -> PlaneVector {
        let (iu, iv) = (flat / self.n, flat % self.n);
        let uv = self.cell_center_uv(iu, iv);
        PlaneVector::from_uv(uv)
    }

    /// Iterator over flat indices.
    pub fn cells(&self) -> std::ops::Range<usize> {
        0..self.n_cells()
    }
}

/// Whitney measure on the cells of a plane grid relative to a curve.
#[derive(Debug, Clone)]
pub struct GridMeasure {
    /// Weight area/d^2 per cell; exactly 0 near the curve.
    weights: Vec<f64>,
    /// Curve distance of each cell center.
    dists: Vec<f64>,
    cell_size: f64,
}

impl GridMeasure {
    pub fn new(grid: &VGrid, curve: &SingularCurve) -> Self {
        let h = grid.cell_size();
        let diag = h * std::f64::consts::SQRT_2;
        let area = h * h;
        let mut weights = Vec::with_capacity(grid.n_cells());
        let mut dists = Vec::with_capacity(grid.n_cells());
        for flat in grid.cells() {
            let c = grid.cell_center(flat);
            let d = curve.dist(c);
            dists.push(d);
            if d < diag {
                weights.push(0.0);
            } else {
                weights.push(area / (d * d));
            }
        }
        GridMeasure {
            weights,
            dists,
            cell_size: h,
        }
    }

    pub fn weight(&self, cell: usize) -> f64 {
        self.weights[cell]
    }

    pub fn dist(&self, cell: usize) -> f64 {
        self.dists[cell]
    }

    pub fn cell_size(&self) -> f64 {
        self.cell_size
    }

    pub fn n_cells(&self) -> usize {
        self.weights.len()
    }

    /// Total mass of the measure.
    pub fn total(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Largest center distance among positive-weight cells.
    pub fn max_active_dist(&self) -> f64 {
        self.weights
            .iter()
            .zip(&self.dists)
            .filter(|(w, _)| **w > 0.0)
            .fold(0.0f64, |m, (_, d)| m.max(*d))
    }
}

/// Boolean mask over (cell, alpha) pairs of a field.
#[derive(Debug, Clone, PartialEq)]
pub struct Mask {
    n_cells: usize,
    n_alpha: usize,
    bits: Vec<bool>,
}

impl Mask {
    pub fn filled(n_cells: usize, n_alpha: usize, value: bool) -> Self {
        Mask {
            n_cells,
            n_alpha,
            bits: vec![value; n_cells * n_alpha],
        }
    }

    pub fn n_cells(&self) -> usize {
        self.n_cells
    }

    pub fn n_alpha(&self) -> usize {
        self.n_alpha
    }

    pub fn get(&self, cell: usize, a: usize) -> bool {
        self.bits[cell * self.n_alpha + a]
    }

    pub fn set(&mut self, cell: usize, a: usize, value: bool) {
        self.bits[cell * self.n_alpha + a] = value;
    }

    /// Number of set entries.
    pub fn count(&self) -> usize {
        self.bits.iter().filter(|b| **b).count()
    }
}
