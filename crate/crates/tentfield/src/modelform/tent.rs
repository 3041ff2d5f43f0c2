//! The tent estimate: the absolute model-form mass of one tent against
//! the product of global sizes, resolved by kernel annulus.
//!
//! A tent is an interval I on the alpha line over a curve point gamma.
//! Its mass restricts the model form to the Whitney shell W_{gamma, 1/|I|}
//! in the plane and, along the diagonal direction, to triples whose i-th
//! coordinate stays in I:
//!
//! ```text
//! LHS = int_{W} int_{alpha_i in I} |K(alpha, beta)|
//!         prod_j |F_j(alpha_j, beta)| dalpha dmu(beta).
//! ```
//!
//! The estimate under test bounds LHS by |I| times the product of the
//! three global sizes. Splitting the fiber lattice by the annulus index
//! k of d(beta) |P_V alpha| refines this: each annulus obeys the envelope
//! (1 + k) 2^{k(1-s)} up to one constant, and every contributing pair
//! satisfies the coordinate-spread bound |alpha_j - alpha_j'| <=
//! 2^{k+1} / d(beta), which the quadrature checks pair by pair. The
//! report carries the total, the per-annulus profile, the smallest
//! envelope constant covering the profile, and the spread-check count.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::bumps::Field;
use crate::error::TentError;
use crate::geometry::{
    whitney_membership, Axis, ConstantPack, Interval, PlaneVector, SingularCurve,
};

use super::kernel::KernelField;
use super::trilinear::{validated_embeddings, ModelFormParams};

const SQRT_3: f64 = 1.7320508075688772;

/// A tent: an interval on the alpha line over a plane point.
#[derive(Debug, Clone, Copy)]
pub struct TentRegion {
    pub interval: Interval,
    pub gamma: PlaneVector,
}

/// Outcome of the tent-estimate quadrature for one tent.
#[derive(Debug, Clone)]
pub struct TentEstimateReport {
    /// Absolute model-form mass of the tent.
    pub lhs: f64,
    /// Interval length |I|.
    pub interval_length: f64,
    /// The three global sizes the bound normalizes by.
    pub sizes: [f64; 3],
    /// LHS / (|I| prod_j sizes(j)).
    pub ratio: f64,
    /// Annulus-k contributions to LHS; they sum to it.
    pub per_annulus: Vec<f64>,
    /// Smallest c with per_annulus[k] <= c (1+k) 2^{k(1-s)} |I| prod sizes.
    pub envelope_constant: f64,
    /// Lattice pairs violating the coordinate-spread bound; zero expected.
    pub support_violations: usize,
    /// Plane cells of the Whitney shell entering the quadrature.
    pub shell_cells: usize,
}

/// Per-cell accumulation: mass by annulus plus the spread-check count.
struct CellTally {
    per_annulus: Vec<f64>,
    violations: usize,
}

/// Absolute-value interpolation of a stored field row at arbitrary alpha,
/// periodic in the grid extent. Interpolating moduli keeps the envelope
/// free of phase cancellation between neighboring samples.
fn row_abs(row: &[Complex64], alpha: f64, x0: f64, dx: f64) -> f64 {
    let n = row.len();
    let pos = (alpha - x0) / dx;
    let base = pos.floor();
    let frac = pos - base;
    let i0 = (base as i64).rem_euclid(n as i64) as usize;
    let i1 = (i0 + 1) % n;
    (1.0 - frac) * row[i0].norm() + frac * row[i1].norm()
}

/// Quadrature of the tent mass with the per-annulus resolution and the
/// normalized ratio. The three global sizes are supplied by the caller
/// (they are properties of the whole fields, not of the tent) and must be
/// positive.
#[allow(clippy::too_many_arguments)]
pub fn tent_estimate_ratio(
    kernels: &KernelField,
    fields: [&Field; 3],
    tent: &TentRegion,
    i: Axis,
    curve: &SingularCurve,
    pack: &ConstantPack,
    sizes: [f64; 3],
    params: &ModelFormParams,
) -> Result<TentEstimateReport, TentError> {
    params.validate()?;
    let embeddings = validated_embeddings(fields)?;
    if !(tent.interval.length > 0.0) || !tent.interval.length.is_finite() {
        return Err(TentError::config(format!(
            "tent interval length must be positive, got {}",
            tent.interval.length
        )));
    }
    for (j, s) in sizes.iter().enumerate() {
        if !(*s > 0.0) || !s.is_finite() {
            return Err(TentError::invalid(format!(
                "global size {j} is {s}; the tent ratio needs positive sizes"
            )));
        }
    }
    let base = fields[0];
    let vgrid = base.vgrid();
    let measure = base.measure();
    let alpha = base.alpha();
    let (x0, dx) = (alpha.x0(), alpha.dx());
    let t_whitney = 1.0 / tent.interval.length;
    let s = kernels.s();

    // Shell cells that can contribute: positive measure, in the Whitney
    // shell, and all three windows holding coefficients.
    let cells: Vec<usize> = vgrid
        .cells()
        .filter(|&cell| {
            if measure.weight(cell) == 0.0 {
                return false;
            }
            let beta = vgrid.cell_center(cell);
            if !whitney_membership(beta, tent.gamma, t_whitney, curve, pack) {
                return false;
            }
            let d = measure.dist(cell);
            embeddings
                .iter()
                .all(|emb| !emb.window_terms(beta.coord(emb.axis()), d).is_empty())
        })
        .collect();
    let shell_cells = cells.len();

    let tallies: Vec<CellTally> = cells
        .par_iter()
        .map(|&cell| -> Result<CellTally, TentError> {
            let slice = kernels.slice_at(cell).ok_or_else(|| {
                TentError::shape(format!(
                    "kernel field does not cover shell cell {cell}"
                ))
            })?;
            let d = measure.dist(cell);
            if (slice.dist() - d).abs() > 1e-9 * d {
                return Err(TentError::invalid(
                    "kernel slices disagree with the field measure about curve distance",
                ));
            }
            let rows: [&[Complex64]; 3] =
                [fields[0].row(cell), fields[1].row(cell), fields[2].row(cell)];
            let da = slice.dual_spacing() / d;
            let k_half = slice.k_half();
            let weight = measure.weight(cell);
            let kern_scale = d * d * da * da;
            // Diagonal nodes cover sqrt(3) (I - a_i); the i-th coordinate
            // stays in I exactly.
            let n_t = params.n_t;
            let dt = SQRT_3 * tent.interval.length / n_t as f64;
            let mut tally = CellTally {
                per_annulus: Vec::new(),
                violations: 0,
            };
            for ku in -k_half..=k_half {
                for kv in -k_half..=k_half {
                    let kmag = slice.ghat(ku, kv).norm();
                    if kmag == 0.0 {
                        continue;
                    }
                    let a = PlaneVector::from_uv([ku as f64 * da, kv as f64 * da]);
                    let coords = a.coords();
                    let k_ann = super::kernel::annulus_of_radius(d * a.norm());
                    let spread = (coords[0] - coords[1])
                        .abs()
                        .max((coords[1] - coords[2]).abs())
                        .max((coords[0] - coords[2]).abs());
                    if spread > (1.0 + 1e-12) * (1u64 << (k_ann + 1)) as f64 / d {
                        tally.violations += 1;
                    }
                    let a_i = a.coord(i);
                    let t_lo = SQRT_3 * (tent.interval.lo() - a_i);
                    let mut prod_int = 0.0;
                    for r in 0..n_t {
                        let t = t_lo + dt * (r as f64 + 0.5);
                        let shift = t / SQRT_3;
                        let mut p = 1.0;
                        for (row, c) in rows.iter().zip(coords) {
                            p *= row_abs(row, c + shift, x0, dx);
                            if p == 0.0 {
                                break;
                            }
                        }
                        prod_int += p;
                    }
                    if prod_int == 0.0 {
                        continue;
                    }
                    let mass = weight * kern_scale * kmag * prod_int * dt;
                    let idx = k_ann as usize;
                    if tally.per_annulus.len() <= idx {
                        tally.per_annulus.resize(idx + 1, 0.0);
                    }
                    tally.per_annulus[idx] += mass;
                }
            }
            Ok(tally)
        })
        .collect::<Result<Vec<_>, TentError>>()?;

    let mut per_annulus: Vec<f64> = Vec::new();
    let mut violations = 0usize;
    for t in &tallies {
        if per_annulus.len() < t.per_annulus.len() {
            per_annulus.resize(t.per_annulus.len(), 0.0);
        }
        for (k, v) in t.per_annulus.iter().enumerate() {
            per_annulus[k] += v;
        }
        violations += t.violations;
    }
    let lhs: f64 = per_annulus.iter().sum();
    let denom = tent.interval.length * sizes[0] * sizes[1] * sizes[2];
    let ratio = lhs / denom;
    let envelope_constant = per_annulus
        .iter()
        .enumerate()
        .map(|(k, v)| v / ((1.0 + k as f64) * 2f64.powf(k as f64 * (1.0 - s)) * denom))
        .fold(0.0f64, f64::max);
    Ok(TentEstimateReport {
        lhs,
        interval_length: tent.interval.length,
        sizes,
        ratio,
        per_annulus,
        envelope_constant,
        support_violations: violations,
        shell_cells,
    })
}
