//! Fields over the alpha line times the plane grid, and the frequency-window
//! embedding that produces them from one-dimensional signals.
//!
//! A signal sampled on the alpha grid is identified with the trigonometric
//! polynomial through its samples. The embedding at plane point beta with
//! curve distance d multiplies the spectrum by the window
//! phihat((xi - beta_j)/d) and transforms back:
//! F(alpha, beta) = sum_k c_k phihat((xi_k - beta_j)/d) e^{2 pi i xi_k alpha},
//! where c_k are the trigonometric coefficients. On grid points this is an
//! inverse FFT of the windowed spectrum; the stored spectrum also evaluates
//! F exactly at arbitrary alpha, which downstream quadratures rely on.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::bumps::grid::{AlphaGrid, GridMeasure, Mask, VGrid};
use crate::bumps::profile::BumpProfile;
use crate::error::TentError;
use crate::fftutil;
use crate::geometry::Axis;

/// Relative floor under which a spectrum bin is treated as an exact zero.
/// The forward transform of a band-limited signal leaves roundoff dust of
/// order n * machine epsilon in every out-of-band bin; keeping it would
/// make every frequency window look occupied and poison support queries.
/// The floor sits three orders of magnitude above the worst dust for the
/// grid sizes in use and far below any honest coefficient.
const SPECTRAL_FLOOR: f64 = 1e-12;

/// Trigonometric spectrum of an embedded signal, for exact off-grid
/// evaluation of the embedded field.
#[derive(Debug, Clone)]
pub struct Embedding {
    j: Axis,
    extent: f64,
    /// Coefficients c_k in ascending signed order, k = k_lo .. k_lo + len.
    coeffs: Vec<Complex64>,
    k_lo: i64,
    profile: BumpProfile,
}

impl Embedding {
    /// Builds the spectrum of the trigonometric polynomial through the
    /// samples of `f` on `grid`.
    pub fn new(
        f: &[Complex64],
        j: Axis,
        grid: &AlphaGrid,
        profile: &BumpProfile,
    ) -> Result<Self, TentError> {
        if f.len() != grid.n() {
            return Err(TentError::shape(format!(
                "signal length {} does not match grid size {}",
                f.len(),
                grid.n()
            )));
        }
        let n = grid.n();
        let mut buf = f.to_vec();
        fftutil::dft_1d(&mut buf, true);
        let k_lo = -((n / 2) as i64);
        let mut coeffs = Vec::with_capacity(n);
        for k in k_lo..k_lo + n as i64 {
            let bin = k.rem_euclid(n as i64) as usize;
            let xi = k as f64 / grid.extent();
            let phase = Complex64::from_polar(
                1.0,
                -2.0 * std::f64::consts::PI * xi * grid.x0(),
            );
            coeffs.push(buf[bin] * phase / n as f64);
        }
        let peak = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let floor = peak * SPECTRAL_FLOOR;
        for c in coeffs.iter_mut() {
            if c.norm() <= floor {
                *c = Complex64::new(0.0, 0.0);
            }
        }
        Ok(Embedding {
            j,
            extent: grid.extent(),
            coeffs,
            k_lo,
            profile: profile.clone(),
        })
    }

    pub fn axis(&self) -> Axis {
        self.j
    }

    pub fn extent(&self) -> f64 {
        self.extent
    }

    /// The underlying signal value at arbitrary alpha (no window).
    pub fn signal_at(&self, alpha: f64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.norm_sqr() == 0.0 {
                continue;
            }
            let xi = (self.k_lo + i as i64) as f64 / self.extent;
            acc += c * Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * xi * alpha);
        }
        acc
    }

    /// Window coefficient indices for center `beta_j` and scale `d`.
    fn window_range(&self, beta_j: f64, d: f64) -> std::ops::Range<usize> {
        let r = self.profile.support_radius() * d;
        let lo = ((beta_j - r) * self.extent).ceil() as i64;
        let hi = ((beta_j + r) * self.extent).floor() as i64;
        let i_lo = (lo - self.k_lo).clamp(0, self.coeffs.len() as i64);
        let i_hi = (hi - self.k_lo + 1).clamp(0, self.coeffs.len() as i64);
        i_lo as usize..i_hi as usize
    }

    /// Embedded field value at arbitrary alpha for a plane point with
    /// j-coordinate `beta_j` and curve distance `d`.
    pub fn eval(&self, alpha: f64, beta_j: f64, d: f64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for i in self.window_range(beta_j, d) {
            let c = self.coeffs[i];
            if c.norm_sqr() == 0.0 {
                continue;
            }
            let xi = (self.k_lo + i as i64) as f64 / self.extent;
            let w = self.profile.phi_hat((xi - beta_j) / d);
            if w != 0.0 {
                acc += c * w * Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * xi * alpha);
            }
        }
        acc
    }

    /// Active window terms (frequency, windowed coefficient) at a plane
    /// point; used by quadratures that factor the phase themselves.
    pub fn window_terms(&self, beta_j: f64, d: f64) -> Vec<(f64, Complex64)> {
        let mut out = Vec::new();
        for i in self.window_range(beta_j, d) {
            let c = self.coeffs[i];
            if c.norm_sqr() == 0.0 {
                continue;
            }
            let xi = (self.k_lo + i as i64) as f64 / self.extent;
            let w = self.profile.phi_hat((xi - beta_j) / d);
            if w != 0.0 {
                out.push((xi, c * w));
            }
        }
        out
    }

    /// L2 norm of the underlying signal over one period.
    pub fn signal_l2(&self) -> f64 {
        (self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>() * self.extent).sqrt()
    }
}

/// Complex samples F(alpha, beta) over the alpha grid times the plane grid,
/// with the Whitney measure and an optional domain mask.
#[derive(Debug, Clone)]
pub struct Field {
    alpha: AlphaGrid,
    vgrid: VGrid,
    measure: GridMeasure,
    /// Row-major per cell: data[cell * n_alpha + a].
    data: Vec<Complex64>,
    mask: Option<Mask>,
    source_l2: Option<f64>,
    spectral: Option<Embedding>,
}

impl Field {
    pub fn zeros(alpha: AlphaGrid, vgrid: VGrid, measure: GridMeasure) -> Result<Self, TentError> {
        if measure.n_cells() != vgrid.n_cells() {
            return Err(TentError::shape(
                "measure cell count does not match the plane grid",
            ));
        }
        let data = vec![Complex64::new(0.0, 0.0); vgrid.n_cells() * alpha.n()];
        Ok(Field {
            alpha,
            vgrid,
            measure,
            data,
            mask: None,
            source_l2: None,
            spectral: None,
        })
    }

    /// Fills a field from an explicit function of (cell, alpha index).
    pub fn from_fn(
        alpha: AlphaGrid,
        vgrid: VGrid,
        measure: GridMeasure,
        mut f: impl FnMut(usize, usize) -> Complex64,
    ) -> Result<Self, TentError> {
        let mut field = Field::zeros(alpha, vgrid, measure)?;
        let n_alpha = field.alpha.n();
        for cell in 0..field.vgrid.n_cells() {
            for a in 0..n_alpha {
                field.data[cell * n_alpha + a] = f(cell, a);
            }
        }
        Ok(field)
    }

    pub fn alpha(&self) -> &AlphaGrid {
        &self.alpha
    }

    pub fn vgrid(&self) -> &VGrid {
        &self.vgrid
    }

    pub fn measure(&self) -> &GridMeasure {
        &self.measure
    }

    pub fn spectral(&self) -> Option<&Embedding> {
        self.spectral.as_ref()
    }

    pub fn source_l2(&self) -> Option<f64> {
        self.source_l2
    }

    pub fn mask(&self) -> Option<&Mask> {
        self.mask.as_ref()
    }

    pub fn set_mask(&mut self, mask: Option<Mask>) -> Result<(), TentError> {
        if let Some(m) = &mask {
            if m.n_cells() != self.vgrid.n_cells() || m.n_alpha() != self.alpha.n() {
                return Err(TentError::shape("mask shape does not match the field"));
            }
        }
        self.mask = mask;
        Ok(())
    }

    /// Raw sample, ignoring the mask.
    pub fn raw(&self, cell: usize, a: usize) -> Complex64 {
        self.data[cell * self.alpha.n() + a]
    }

    /// Masked sample: zero where the mask is cleared.
    pub fn value(&self, cell: usize, a: usize) -> Complex64 {
        match &self.mask {
            Some(m) if !m.get(cell, a) => Complex64::new(0.0, 0.0),
            _ => self.raw(cell, a),
        }
    }

    pub fn row(&self, cell: usize) -> &[Complex64] {
        let n = self.alpha.n();
        &self.data[cell * n..(cell + 1) * n]
    }

    pub fn row_mut(&mut self, cell: usize) -> &mut [Complex64] {
        let n = self.alpha.n();
        &mut self.data[cell * n..(cell + 1) * n]
    }

    /// Largest masked absolute value over the whole field.
    pub fn max_abs(&self) -> f64 {
        let mut m = 0.0f64;
        for cell in 0..self.vgrid.n_cells() {
            for a in 0..self.alpha.n() {
                m = m.max(self.value(cell, a).norm());
            }
        }
        m
    }
}

/// Embeds a signal: F(alpha, beta) with the frequency window at each
/// positive-distance plane cell.
///
/// Errors when even the widest active window is narrower than the dual grid
/// spacing 1/extent, since every window would then miss the discrete
/// spectrum entirely and the field would be structurally zero.
pub fn embed(
    f: &[Complex64],
    j: Axis,
    profile: &BumpProfile,
    alpha: &AlphaGrid,
    vgrid: &VGrid,
    measure: &GridMeasure,
) -> Result<Field, TentError> {
    if measure.n_cells() != vgrid.n_cells() {
        return Err(TentError::shape(
            "measure cell count does not match the plane grid",
        ));
    }
    let max_d = measure.max_active_dist();
    if 2.0 * profile.support_radius() * max_d < alpha.dxi() {
        return Err(TentError::config(format!(
            "alpha grid extent {} too short: widest frequency window ({:.3e}) is \
             narrower than the dual spacing {:.3e}",
            alpha.extent(),
            2.0 * profile.support_radius() * max_d,
            alpha.dxi()
        )));
    }
    let embedding = Embedding::new(f, j, alpha, profile)?;
    let n = alpha.n();
    let mut field = Field::zeros(alpha.clone(), vgrid.clone(), measure.clone())?;
    let rows: Vec<(usize, Vec<Complex64>)> = vgrid
        .cells()
        .collect::<Vec<_>>()
        .par_iter()
        .filter_map(|&cell| {
            let d = measure.dist(cell);
            if d == 0.0 {
                return None;
            }
            let beta = vgrid.cell_center(cell);
            let beta_j = beta.coord(j);
            let terms = embedding.window_terms(beta_j, d);
            if terms.is_empty() {
                return None;
            }
            let mut buf = vec![Complex64::new(0.0, 0.0); n];
            for (xi, c) in terms {
                let k = (xi * alpha.extent()).round() as i64;
                let bin = k.rem_euclid(n as i64) as usize;
                // Invert the centering phase so the inverse DFT lands on
                // absolute coordinates.
                let phase =
                    Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * xi * alpha.x0());
                buf[bin] = c * phase * n as f64;
            }
            fftutil::dft_1d(&mut buf, false);
            for v in buf.iter_mut() {
                *v /= n as f64;
            }
            Some((cell, buf))
        })
        .collect();
    for (cell, buf) in rows {
        field.row_mut(cell).copy_from_slice(&buf);
    }
    let l2 = (f.iter().map(|v| v.norm_sqr()).sum::<f64>() * alpha.dx()).sqrt();
    field.source_l2 = Some(l2);
    field.spectral = Some(embedding);
    Ok(field)
}
