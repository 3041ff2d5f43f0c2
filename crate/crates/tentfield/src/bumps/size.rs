//! Tent size functionals of the embedded field over Whitney shells.
//!
//! For a tent (I, gamma) with Whitney parameter t the size is
//!
//! ```text
//! max( |I|^{-1/2} ||F||_{L^2_nu(I x (W_{gamma,t} \ U_gamma^j))},
//!      sup_{I x W_{gamma,t}} |F| )
//! ```
//!
//! with nu = d alpha x d mu and mu the Whitney measure on plane cells. The
//! square part excludes the small-coordinate cone U (where |(beta-gamma)_j|
//! is below delta2 |beta - gamma|); the sup part runs over the full shell.
//! The global size takes the maximum over a finite dyadic lattice of
//! intervals crossed with the curve samples, with t = 1/|I| per interval.

use rayon::prelude::*;

use crate::bumps::field::Field;
use crate::bumps::grid::AlphaGrid;
use crate::error::TentError;
use crate::geometry::{
    cone_membership, half_whitney_membership, whitney_membership, ConstantPack, HalfSide,
    Interval, PlaneVector, SingularCurve,
};

/// The two halves of the tent size; the size itself is their maximum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SizeParts {
    /// `|I|^{-1/2}` times the `L^2_nu` norm over `I x (W \ U)`.
    pub l2: f64,
    /// Sup of `|F|` over `I x W` (cone included).
    pub sup: f64,
}

impl SizeParts {
    pub fn value(&self) -> f64 {
        self.l2.max(self.sup)
    }
}

/// Size of the field over the tent `(interval, gamma)` at Whitney
/// parameter `t`. Masked samples and zero-weight cells contribute nothing.
pub fn local_size(
    field: &Field,
    interval: &Interval,
    gamma: PlaneVector,
    t: f64,
    curve: &SingularCurve,
    pack: &ConstantPack,
) -> SizeParts {
    let alpha = field.alpha();
    let range = alpha.indices_in(interval.lo(), interval.hi());
    if range.is_empty() {
        return SizeParts { l2: 0.0, sup: 0.0 };
    }
    let j = curve.cone_index();
    let da = alpha.dx();
    let mut sq = 0.0;
    let mut sup = 0.0f64;
    for cell in field.vgrid().cells() {
        let mu = field.measure().weight(cell);
        if mu == 0.0 {
            continue;
        }
        let beta = field.vgrid().cell_center(cell);
        if !whitney_membership(beta, gamma, t, curve, pack) {
            continue;
        }
        let mut cell_sq = 0.0;
        let mut cell_sup = 0.0f64;
        for a in range.clone() {
            let v = field.value(cell, a).norm_sqr();
            cell_sq += v;
            cell_sup = cell_sup.max(v);
        }
        sup = sup.max(cell_sup);
        if !cone_membership(beta, gamma, j, pack) {
            sq += cell_sq * mu;
        }
    }
    SizeParts {
        l2: (sq * da / interval.length).sqrt(),
        sup: sup.sqrt(),
    }
}

/// Time-global `L^2_nu` norm of the field over the Whitney shell minus the
/// cone, `W_{gamma,t} \ U_gamma^j`, or over one open half of it.
pub fn whitney_shell_l2(
    field: &Field,
    gamma: PlaneVector,
    t: f64,
    half: Option<HalfSide>,
    curve: &SingularCurve,
    pack: &ConstantPack,
) -> f64 {
    let j = curve.cone_index();
    let da = field.alpha().dx();
    let n = field.alpha().n();
    let mut sq = 0.0;
    for cell in field.vgrid().cells() {
        let mu = field.measure().weight(cell);
        if mu == 0.0 {
            continue;
        }
        let beta = field.vgrid().cell_center(cell);
        let keep = match half {
            None => {
                whitney_membership(beta, gamma, t, curve, pack)
                    && !cone_membership(beta, gamma, j, pack)
            }
            Some(side) => half_whitney_membership(beta, gamma, t, side, curve, pack),
        };
        if !keep {
            continue;
        }
        let s: f64 = (0..n).map(|a| field.value(cell, a).norm_sqr()).sum();
        sq += s * mu;
    }
    (sq * da).sqrt()
}

/// Finite dyadic lattice of intervals inside the alpha grid extent: level
/// `k` holds `2^k` adjacent intervals of length `extent / 2^k`.
#[derive(Debug, Clone)]
pub struct TentLattice {
    x0: f64,
    extent: f64,
    max_level: usize,
}

impl TentLattice {
    /// Levels `0..=max` where the finest interval still contains at least
    /// `min_points` grid points.
    pub fn dyadic(grid: &AlphaGrid, min_points: usize) -> Result<Self, TentError> {
        if min_points == 0 || min_points > grid.n() {
            return Err(TentError::config(
                "lattice needs 1 <= min_points <= grid size",
            ));
        }
        let mut max_level = 0usize;
        while grid.n() >> (max_level + 1) >= min_points {
            max_level += 1;
        }
        Ok(TentLattice {
            x0: grid.x0(),
            extent: grid.extent(),
            max_level,
        })
    }

    pub fn max_level(&self) -> usize {
        self.max_level
    }

    /// Total interval count, `2^{max_level + 1} - 1`.
    pub fn len(&self) -> usize {
        (1usize << (self.max_level + 1)) - 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// All intervals, coarse to fine.
    pub fn intervals(&self) -> Vec<Interval> {
        let mut out = Vec::with_capacity(self.len());
        for k in 0..=self.max_level {
            let len = self.extent / (1u64 << k) as f64;
            for p in 0..(1usize << k) {
                out.push(Interval::new(self.x0 + (p as f64 + 0.5) * len, len));
            }
        }
        out
    }
}

/// Maximum of [`local_size`] over the lattice intervals crossed with the
/// curve samples, with `t = 1/|I|` per interval.
///
/// Per interval the alpha sums and maxima are shared across curve samples,
/// so the cost is `O(levels x n_alpha x cells + tents x cells)` instead of
/// the naive `tents x cells x n_alpha`. The combination per tent follows
/// the same summation order as [`local_size`], so the result is bit-equal
/// to the naive maximum.
pub fn global_size(
    field: &Field,
    lattice: &TentLattice,
    curve: &SingularCurve,
    pack: &ConstantPack,
) -> f64 {
    let alpha = field.alpha();
    let vgrid = field.vgrid();
    let measure = field.measure();
    let j = curve.cone_index();

    let cells: Vec<(usize, PlaneVector, f64)> = vgrid
        .cells()
        .filter(|&c| measure.weight(c) > 0.0)
        .map(|c| (c, vgrid.cell_center(c), measure.weight(c)))
        .collect();
    if cells.is_empty() {
        return 0.0;
    }

    let intervals = lattice.intervals();
    let ranges: Vec<std::ops::Range<usize>> = intervals
        .iter()
        .map(|i| alpha.indices_in(i.lo(), i.hi()))
        .collect();

    // Per interval, per active cell: alpha sum of |F|^2 and max of |F|^2.
    let tables: Vec<(Vec<f64>, Vec<f64>)> = ranges
        .par_iter()
        .map(|range| {
            let mut sums = Vec::with_capacity(cells.len());
            let mut maxes = Vec::with_capacity(cells.len());
            for &(cell, _, _) in &cells {
                let mut s = 0.0;
                let mut m = 0.0f64;
                for a in range.clone() {
                    let v = field.value(cell, a).norm_sqr();
                    s += v;
                    m = m.max(v);
                }
                sums.push(s);
                maxes.push(m);
            }
            (sums, maxes)
        })
        .collect();

    curve
        .samples()
        .par_iter()
        .map(|&gamma| {
            // t-independent membership data per cell: the shell radius, the
            // upper Whitney constraint, and cone membership.
            let per_cell: Vec<(f64, bool, bool)> = cells
                .iter()
                .map(|&(_, beta, _)| {
                    (
                        beta.dist(gamma),
                        whitney_membership(beta, gamma, 0.0, curve, pack),
                        cone_membership(beta, gamma, j, pack),
                    )
                })
                .collect();
            let mut best = 0.0f64;
            for (idx, interval) in intervals.iter().enumerate() {
                if ranges[idx].is_empty() {
                    continue;
                }
                let t = 1.0 / interval.length;
                let (sums, maxes) = &tables[idx];
                let mut sq = 0.0;
                let mut sup = 0.0f64;
                for (ci, &(r, upper, in_cone)) in per_cell.iter().enumerate() {
                    if !(upper && t <= r) {
                        continue;
                    }
                    sup = sup.max(maxes[ci]);
                    if !in_cone {
                        sq += sums[ci] * cells[ci].2;
                    }
                }
                let val = (sq * alpha.dx() / interval.length).sqrt().max(sup.sqrt());
                best = best.max(val);
            }
            best
        })
        .reduce(|| 0.0, f64::max)
}
