//! The direct trilinear form and its kernel-side model realization.
//!
//! The direct form pairs a symbol with the spectra of three signals over
//! the frequency plane `xi_1 + xi_2 + xi_3 = 0`:
//!
//! ```text
//! Lambda_m(f_1, f_2, f_3)
//!   = sqrt(3) int m(xi_1, xi_2, -xi_1 - xi_2)
//!       fhat_1(xi_1) fhat_2(xi_2) fhat_3(-xi_1 - xi_2) d xi_1 d xi_2,
//! ```
//!
//! the sqrt(3) being the area density of the plane over its (xi_1, xi_2)
//! parametrization. For trigonometric polynomials on a common periodic
//! grid the spectra are coefficient lists on the dual lattice and the
//! integral collapses to the lattice sum over index triples summing to
//! zero, normalized so the constant symbol returns sqrt(3) times the
//! period integral of the pointwise product.
//!
//! The model form reaches the same number through the kernel: with
//! mu the Whitney measure on plane cells,
//!
//! ```text
//! int dmu(beta) int_{R^3} K(alpha, beta) prod_j F_j(alpha_j, beta) dalpha,
//! ```
//!
//! where the triple integral splits along `R^3 = V + span(1,1,1)` into a
//! fiber integral against the kernel, carried out exactly on the dual
//! lattice the kernel slice stores, and a diagonal integral over one
//! period of the grid, carried out by an n_t-point midpoint rule. The
//! embedded fields enter through their window coefficients, so both
//! integrals reduce to phase sums that are evaluated term by term; for
//! n_t above the diagonal bandwidth of the windowed spectra the midpoint
//! rule is exact and the value is independent of n_t. The two paths agree
//! up to the dual-lattice truncation of the kernel and the cell-size
//! resolution of the measure quadrature, both of which tighten under
//! refinement.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::bumps::{AlphaGrid, Embedding, Field};
use crate::error::TentError;
use crate::fftutil;
use crate::geometry::{project_to_plane, Axis, PlaneVector};
use crate::multiplier::MultiplierSpec;

use super::kernel::KernelField;

const SQRT_3: f64 = 1.7320508075688772;

/// Signed-index trigonometric coefficients of samples on the grid, with
/// the grid-origin phase folded in; entry i holds the coefficient of
/// frequency (k_lo + i) / extent.
fn spectrum(signal: &[Complex64], grid: &AlphaGrid) -> Vec<Complex64> {
    let n = grid.n();
    let mut buf = signal.to_vec();
    fftutil::dft_1d(&mut buf, true);
    let k_lo = -((n / 2) as i64);
    (k_lo..k_lo + n as i64)
        .map(|k| {
            let bin = k.rem_euclid(n as i64) as usize;
            let xi = k as f64 / grid.extent();
            let phase =
                Complex64::from_polar(1.0, -std::f64::consts::TAU * xi * grid.x0());
            buf[bin] * phase / n as f64
        })
        .collect()
}

/// The trilinear form of a symbol against three signals sampled on a
/// common periodic grid. Symbol evaluation errors at a lattice point
/// propagate; grids whose lattice avoids the singular support of the
/// symbol never hit them.
pub fn trilinear_direct(
    m: &MultiplierSpec,
    signals: [&[Complex64]; 3],
    grid: &AlphaGrid,
) -> Result<Complex64, TentError> {
    let n = grid.n();
    for s in signals {
        if s.len() != n {
            return Err(TentError::shape(format!(
                "signal length {} does not match the grid size {n}",
                s.len()
            )));
        }
    }
    let extent = grid.extent();
    let k_lo = -((n / 2) as i64);
    let k_hi = k_lo + n as i64 - 1;
    let dense: Vec<Vec<Complex64>> = signals.iter().map(|s| spectrum(s, grid)).collect();
    let sparse = |c: &[Complex64]| -> Vec<(i64, Complex64)> {
        c.iter()
            .enumerate()
            .filter(|(_, v)| v.norm_sqr() > 0.0)
            .map(|(i, &v)| (k_lo + i as i64, v))
            .collect()
    };
    let s1 = sparse(&dense[0]);
    let s2 = sparse(&dense[1]);
    let mut total = Complex64::new(0.0, 0.0);
    for &(k1, c1) in &s1 {
        let x1 = k1 as f64 / extent;
        for &(k2, c2) in &s2 {
            let k3 = -k1 - k2;
            if k3 < k_lo || k3 > k_hi {
                continue;
            }
            let c3 = dense[2][(k3 - k_lo) as usize];
            if c3.norm_sqr() == 0.0 {
                continue;
            }
            let x2 = k2 as f64 / extent;
            let xi = PlaneVector::new([x1, x2, -(x1 + x2)])?;
            total += m.eval(xi)? * (c1 * c2 * c3);
        }
    }
    Ok(total * (SQRT_3 * extent))
}

/// Quadrature parameters of the model form.
#[derive(Debug, Clone, Copy)]
pub struct ModelFormParams {
    /// Midpoint nodes for the diagonal integral over one grid period. The
    /// rule is exact, and the value n_t-independent, once n_t exceeds the
    /// diagonal bandwidth `3 * window support radius * extent` of the
    /// windowed spectra.
    pub n_t: usize,
}

impl Default for ModelFormParams {
    fn default() -> Self {
        ModelFormParams { n_t: 64 }
    }
}

impl ModelFormParams {
    pub fn validate(&self) -> Result<(), TentError> {
        if self.n_t == 0 || self.n_t > 1 << 20 {
            return Err(TentError::config(format!(
                "diagonal rule needs between 1 and 2^20 nodes, got {}",
                self.n_t
            )));
        }
        Ok(())
    }
}

/// Extracts the three spectral embeddings and checks the fields share
/// grids, measures, and carry the coordinate axes in order.
pub(crate) fn validated_embeddings<'a>(
    fields: [&'a Field; 3],
) -> Result<[&'a Embedding; 3], TentError> {
    let base = fields[0];
    let mut out = Vec::with_capacity(3);
    for (j, f) in fields.iter().enumerate() {
        let emb = f.spectral().ok_or_else(|| {
            TentError::invalid(format!(
                "field {j} carries no spectral embedding; quadratures need embedded fields"
            ))
        })?;
        if emb.axis() != Axis::ALL[j] {
            return Err(TentError::config(format!(
                "field {j} is embedded on coordinate {}, expected {j}",
                emb.axis().index()
            )));
        }
        let (a, b) = (f.alpha(), base.alpha());
        if a.n() != b.n() || a.extent() != b.extent() || a.x0() != b.x0() {
            return Err(TentError::shape("fields disagree on the alpha grid"));
        }
        let (v, w) = (f.vgrid(), base.vgrid());
        if v.n() != w.n() || v.extent() != w.extent() || v.center() != w.center() {
            return Err(TentError::shape("fields disagree on the plane grid"));
        }
        let (p, q) = (f.measure(), base.measure());
        if p.n_cells() != q.n_cells()
            || (0..p.n_cells()).any(|c| p.weight(c) != q.weight(c) || p.dist(c) != q.dist(c))
        {
            return Err(TentError::shape("fields disagree on the Whitney measure"));
        }
        out.push(emb);
    }
    Ok([out[0], out[1], out[2]])
}

/// Midpoint rule over the diagonal period for the phase of total
/// frequency `s`: `(sqrt(3) E / n_t) sum_r exp(2 pi i s E (r + 1/2) / n_t)`
/// with `E` the grid extent. Integer total index below n_t annihilates
/// exactly.
fn diagonal_rule(s: f64, extent: f64, n_t: usize) -> Complex64 {
    let step = std::f64::consts::TAU * s * extent / n_t as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for r in 0..n_t {
        acc += Complex64::from_polar(1.0, step * (r as f64 + 0.5));
    }
    acc * (SQRT_3 * extent / n_t as f64)
}

/// The model form: kernel slices against three embedded fields.
pub fn model_form_evaluate(
    kernels: &KernelField,
    fields: [&Field; 3],
    params: &ModelFormParams,
) -> Result<Complex64, TentError> {
    params.validate()?;
    let embeddings = validated_embeddings(fields)?;
    let cells = super::kernel::product_active_cells(fields)?;
    let base = fields[0];
    let vgrid = base.vgrid();
    let measure = base.measure();
    let extent = base.alpha().extent();
    // The diagonal rule annihilates every nonzero surviving total
    // frequency at this threshold; anything smaller is roundoff.
    let t_cut = SQRT_3 * extent * 1e-12;

    let contributions: Vec<Complex64> = cells
        .par_iter()
        .map(|&cell| -> Result<Complex64, TentError> {
            let slice = kernels.slice_at(cell).ok_or_else(|| {
                TentError::shape(format!(
                    "kernel field does not cover active cell {cell}"
                ))
            })?;
            let beta = vgrid.cell_center(cell);
            let d = measure.dist(cell);
            if (slice.dist() - d).abs() > 1e-9 * d {
                return Err(TentError::invalid(
                    "kernel slices disagree with the field measure about curve distance",
                ));
            }
            let terms: Vec<Vec<(f64, Complex64)>> = embeddings
                .iter()
                .map(|emb| emb.window_terms(beta.coord(emb.axis()), d))
                .collect();
            let da = slice.dual_spacing() / d;
            let mut scratch = Vec::new();
            let mut cell_acc = Complex64::new(0.0, 0.0);
            for &(x1, c1) in &terms[0] {
                for &(x2, c2) in &terms[1] {
                    let c12 = c1 * c2;
                    for &(x3, c3) in &terms[2] {
                        let tfac = diagonal_rule(x1 + x2 + x3, extent, params.n_t);
                        if tfac.norm() <= t_cut {
                            continue;
                        }
                        // Fiber phases only see the plane part of xi.
                        let q = project_to_plane([x1, x2, x3]).sub(beta);
                        let fiber = slice.phase_sum(q.to_uv(), &mut scratch);
                        cell_acc += c12 * c3 * tfac * fiber;
                    }
                }
            }
            let scale =
                measure.weight(cell) * slice.dist() * slice.dist() * da * da;
            Ok(cell_acc * scale)
        })
        .collect::<Result<Vec<_>, TentError>>()?;
    Ok(contributions.iter().sum())
}
