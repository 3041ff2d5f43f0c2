//! The convolution kernel of the localized trilinear form, its Sobolev
//! condition, and the dyadic annulus decomposition of the pair space.
//!
//! At a plane point beta with curve distance d, the kernel is the plane
//! Fourier transform of the normalized-window localization of the symbol:
//!
//! ```text
//! K(alpha, beta) = int_V m(xi) chitilde_beta(xi) e^{-2 pi i alpha . xi} dH^2(xi),
//! chitilde_beta(xi) = chi((xi - beta)/d) / X(xi),
//! ```
//!
//! with chi the partition window and X the partition normalizer.
//! Substituting xi = beta + d y reduces everything to the unit-scale
//! window profile G(y) = m(beta + d y) chi(y) / X(beta + d y):
//!
//! ```text
//! K(alpha, beta) = d^2 e^{-2 pi i alpha . beta} Ghat(d P_V alpha),
//! ```
//!
//! so only the plane projection of alpha enters, and a slice stores Ghat
//! on the dual lattice of a padded window box. Substituting w = d alpha
//! in the weighted norm shows
//!
//! ```text
//! || (1 + |d alpha|^2)^{s/2} K(alpha, beta) ||_{L^2_alpha(V)} / d = ||G||_{H^s(V)},
//! ```
//!
//! a scale-free quantity: the condition ratio is the Sobolev lattice sum
//! of Ghat and does not depend on d. Its mass for s > 1 concentrates at
//! frequencies up to the reciprocal of the window transition scale, so
//! the lattice Nyquist must clear that band; the defaults do, and the
//! ratio is checked for stability under grid doubling where it is used.

use std::collections::HashMap;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::bumps::{normalized_window, Field, NormalizerModel, PartitionWeights, VGrid};
use crate::error::TentError;
use crate::fftutil;
use crate::geometry::{project_to_plane, PlaneVector, SingularCurve};
use crate::multiplier::MultiplierSpec;

/// Construction parameters for kernel slices.
#[derive(Debug, Clone)]
pub struct KernelParams {
    /// Samples per side of the window FFT; a power of two.
    pub n: usize,
    /// Box halfwidth as a multiple of the window support radius. Larger
    /// padding refines the dual lattice carrying the transform.
    pub pad: f64,
    /// When set, only the block of the dual lattice reaching plane points
    /// with `|P_V alpha| <= keep_alpha` is stored. Cropped slices evaluate
    /// the kernel but cannot certify the Sobolev condition.
    pub keep_alpha: Option<f64>,
    /// Chebyshev degree of the per-window normalizer surrogate.
    pub normalizer_degree: usize,
    /// Sobolev exponent carried into reports built on these slices.
    pub s: f64,
}

impl KernelParams {
    /// Defaults measured adequate for window profiles at any scale:
    /// 1024 samples across an 8-fold padded box put the lattice Nyquist
    /// far beyond the transition band of the window while sampling the
    /// transform a dozen points per oscillation.
    pub fn new(s: f64) -> Result<Self, TentError> {
        let params = KernelParams {
            n: 1024,
            pad: 8.0,
            keep_alpha: None,
            normalizer_degree: 8,
            s,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<(), TentError> {
        if self.n < 64 || !self.n.is_power_of_two() {
            return Err(TentError::config(format!(
                "kernel FFT side must be a power of two of at least 64, got {}",
                self.n
            )));
        }
        if !(self.pad >= 1.25) || !self.pad.is_finite() {
            return Err(TentError::config(format!(
                "kernel box padding must be at least 1.25, got {}",
                self.pad
            )));
        }
        if let Some(a) = self.keep_alpha {
            if !(a > 0.0) || !a.is_finite() {
                return Err(TentError::config(format!(
                    "kernel crop radius must be positive, got {a}"
                )));
            }
        }
        if self.normalizer_degree < 4 {
            return Err(TentError::config(format!(
                "normalizer surrogate degree must be at least 4, got {}",
                self.normalizer_degree
            )));
        }
        if !(self.s > 1.0) || !self.s.is_finite() {
            return Err(TentError::config(format!(
                "kernel Sobolev exponent must exceed 1, got {}",
                self.s
            )));
        }
        Ok(())
    }
}

/// The kernel at one plane point: the transform of the unit-scale window
/// profile on a centered block of the dual lattice of the padded box.
#[derive(Clone)]
pub struct KernelSlice {
    beta: PlaneVector,
    d: f64,
    /// Halfwidth of the sampled window box in unit-scale coordinates.
    halfwidth: f64,
    /// FFT side the slice was built with.
    n_fft: usize,
    /// Stored signed lattice indices run over -k_half ..= k_half per axis.
    k_half: i64,
    /// Row-major block of Ghat values, side (2 k_half + 1).
    values: Vec<Complex64>,
}

impl std::fmt::Debug for KernelSlice {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("KernelSlice")
            .field("beta", &self.beta)
            .field("d", &self.d)
            .field("halfwidth", &self.halfwidth)
            .field("n_fft", &self.n_fft)
            .field("k_half", &self.k_half)
            .field("values", &format_args!("[{} complex]", self.values.len()))
            .finish()
    }
}

impl KernelSlice {
    pub fn beta(&self) -> PlaneVector {
        self.beta
    }

    /// Curve distance of the slice point.
    pub fn dist(&self) -> f64 {
        self.d
    }

    /// Dual lattice spacing of the stored transform.
    pub fn dual_spacing(&self) -> f64 {
        1.0 / (2.0 * self.halfwidth)
    }

    /// Largest stored signed lattice index per axis.
    pub fn k_half(&self) -> i64 {
        self.k_half
    }

    /// Whether the slice keeps the whole usable lattice (everything up to
    /// the symmetric Nyquist block).
    pub fn is_full(&self) -> bool {
        self.k_half == (self.n_fft / 2) as i64 - 1
    }

    /// Largest plane radius `|P_V alpha|` reachable through the stored
    /// block without clipping.
    pub fn alpha_radius(&self) -> f64 {
        self.k_half as f64 * self.dual_spacing() / self.d
    }

    /// Transform value at signed lattice indices; zero outside the block.
    #[inline]
    pub fn ghat(&self, ku: i64, kv: i64) -> Complex64 {
        if ku.abs() > self.k_half || kv.abs() > self.k_half {
            return Complex64::new(0.0, 0.0);
        }
        let side = (2 * self.k_half + 1) as usize;
        let iu = (ku + self.k_half) as usize;
        let iv = (kv + self.k_half) as usize;
        self.values[iu * side + iv]
    }

    /// Copy of the slice restricted to the dual-lattice disc reaching out
    /// to plane radius `keep_alpha` around the base point (same units as
    /// [`alpha_radius`](Self::alpha_radius)). Never grows the block: a
    /// request beyond the stored lattice returns an unchanged copy. Useful
    /// for measuring how a model-form value converges as the kept lattice
    /// widens without rebuilding the transform.
    pub fn cropped(&self, keep_alpha: f64) -> KernelSlice {
        let want = (keep_alpha * self.d / self.dual_spacing()).ceil() as i64 + 1;
        let k_half = want.min(self.k_half).max(0);
        if k_half == self.k_half {
            return self.clone();
        }
        let side = (2 * k_half + 1) as usize;
        let mut values = Vec::with_capacity(side * side);
        for ku in -k_half..=k_half {
            for kv in -k_half..=k_half {
                values.push(self.ghat(ku, kv));
            }
        }
        KernelSlice {
            beta: self.beta,
            d: self.d,
            halfwidth: self.halfwidth,
            n_fft: self.n_fft,
            k_half,
            values,
        }
    }

    /// Lattice sum `sum_k Ghat[k] e^{2 pi i a_k . q}` over the stored dual
    /// lattice `a_k` in plane coordinates, with `q` a plane offset from the
    /// base point in uv components. Multiplied by `d^2 da^2` this is the
    /// fiber quadrature of the kernel against a unit phase, the workhorse
    /// of the model form. `scratch` is caller-owned storage reused across
    /// calls to keep the per-call cost at one table build plus one pass
    /// over the block.
    pub fn phase_sum(&self, q: [f64; 2], scratch: &mut Vec<Complex64>) -> Complex64 {
        let side = (2 * self.k_half + 1) as usize;
        let da = self.dual_spacing() / self.d;
        let th_u = std::f64::consts::TAU * da * q[0];
        let th_v = std::f64::consts::TAU * da * q[1];
        let gv = Complex64::from_polar(1.0, th_v);
        scratch.clear();
        scratch.reserve(side);
        let mut pv = Complex64::from_polar(1.0, th_v * -self.k_half as f64);
        for _ in 0..side {
            scratch.push(pv);
            pv *= gv;
        }
        let gu = Complex64::from_polar(1.0, th_u);
        let mut pu = Complex64::from_polar(1.0, th_u * -self.k_half as f64);
        let mut acc = Complex64::new(0.0, 0.0);
        for row in self.values.chunks_exact(side) {
            let mut row_acc = Complex64::new(0.0, 0.0);
            for (v, p) in row.iter().zip(scratch.iter()) {
                row_acc += v * p;
            }
            acc += pu * row_acc;
            pu *= gu;
        }
        acc
    }

    /// Transform of the window profile at an arbitrary plane frequency,
    /// bilinearly interpolated on the stored lattice; zero beyond it.
    pub fn profile_transform(&self, w: [f64; 2]) -> Complex64 {
        let dw = self.dual_spacing();
        let fu = w[0] / dw;
        let fv = w[1] / dw;
        let ku = fu.floor() as i64;
        let kv = fv.floor() as i64;
        let su = fu - ku as f64;
        let sv = fv - kv as f64;
        self.ghat(ku, kv) * ((1.0 - su) * (1.0 - sv))
            + self.ghat(ku + 1, kv) * (su * (1.0 - sv))
            + self.ghat(ku, kv + 1) * ((1.0 - su) * sv)
            + self.ghat(ku + 1, kv + 1) * (su * sv)
    }

    /// Kernel value on the plane fiber point `a`.
    pub fn eval_fiber(&self, a: PlaneVector) -> Complex64 {
        let auv = a.to_uv();
        let g = self.profile_transform([auv[0] * self.d, auv[1] * self.d]);
        let phase = -std::f64::consts::TAU * a.dot(self.beta);
        self.d * self.d * g * Complex64::from_polar(1.0, phase)
    }

    /// Kernel value at an arbitrary triple; only the plane projection
    /// enters, so diagonal fibers agree by construction.
    pub fn eval(&self, alpha: [f64; 3]) -> Complex64 {
        self.eval_fiber(project_to_plane(alpha))
    }

    /// Kernel mass `K(0, beta)`, the integral of the localized symbol.
    pub fn mass(&self) -> Complex64 {
        self.d * self.d * self.ghat(0, 0)
    }
}

/// Builds the kernel slice at `beta`: samples the unit-scale window
/// profile of the symbol on the padded box and transforms it.
pub fn kernel_from_multiplier(
    m: &MultiplierSpec,
    beta: PlaneVector,
    curve: &SingularCurve,
    weights: &PartitionWeights,
    params: &KernelParams,
) -> Result<KernelSlice, TentError> {
    params.validate()?;
    let d = curve.dist(beta);
    if d == 0.0 {
        return Err(TentError::domain(
            "kernel slice requested on the curve itself",
        ));
    }
    let profile = weights.profile();
    let support = profile.chi_support_radius();
    let halfwidth = params.pad * support;
    let n = params.n;
    let dy = 2.0 * halfwidth / n as f64;
    // Surrogate for the normalizer over the window footprint in the plane;
    // every nonzero window sample lies strictly inside this box.
    let model = NormalizerModel::fit(
        beta,
        support * d,
        curve,
        weights,
        params.normalizer_degree,
    )?;

    let rows: Vec<Vec<Complex64>> = (0..n)
        .into_par_iter()
        .map(|iu| -> Result<Vec<Complex64>, TentError> {
            let yu = dy * (iu as f64 + 0.5) - halfwidth;
            let mut row = vec![Complex64::new(0.0, 0.0); n];
            for (iv, slot) in row.iter_mut().enumerate() {
                let yv = dy * (iv as f64 + 0.5) - halfwidth;
                let r = (yu * yu + yv * yv).sqrt();
                if r >= support {
                    continue;
                }
                let chi = profile.chi(r);
                if chi == 0.0 {
                    continue;
                }
                let xi = beta.add(PlaneVector::from_uv([yu, yv]).scale(d));
                let x = model.eval(xi);
                if !(x > 0.0) || !x.is_finite() {
                    return Err(TentError::invalid(format!(
                        "partition normalizer surrogate returned {x} inside a window"
                    )));
                }
                *slot = m.eval(xi)? * (chi / x);
            }
            Ok(row)
        })
        .collect::<Result<Vec<_>, TentError>>()?;
    let mut buf: Vec<Complex64> = rows.into_iter().flatten().collect();
    fftutil::dft_2d(&mut buf, n, n, true);

    let full_half = (n / 2) as i64 - 1;
    let dw = 1.0 / (2.0 * halfwidth);
    let k_half = match params.keep_alpha {
        Some(a) => (((a * d / dw).ceil() as i64) + 1).min(full_half),
        None => full_half,
    };
    let side = (2 * k_half + 1) as usize;
    let mut values = vec![Complex64::new(0.0, 0.0); side * side];
    let scale = dy * dy;
    // Cell centers start half a step inside the box, so the transform
    // carries the offset phase e^{i pi k (n - 1) / n} per axis.
    let axis_phase = |k: i64| -> Complex64 {
        Complex64::from_polar(
            1.0,
            std::f64::consts::PI * k as f64 * (n as f64 - 1.0) / n as f64,
        )
    };
    for ku in -k_half..=k_half {
        let pu = axis_phase(ku);
        let bu = fftutil::bin_of_signed(ku, n);
        for kv in -k_half..=k_half {
            let pv = axis_phase(kv);
            let bv = fftutil::bin_of_signed(kv, n);
            let iu = (ku + k_half) as usize;
            let iv = (kv + k_half) as usize;
            values[iu * side + iv] = buf[bu * n + bv] * pu * pv * scale;
        }
    }
    Ok(KernelSlice {
        beta,
        d,
        halfwidth,
        n_fft: n,
        k_half,
        values,
    })
}

/// The weighted transform norm over the stored lattice, divided by the
/// curve distance: `||(1 + |d alpha|^2)^{s/2} K||_{L^2(V)} / d`, which the
/// displayed identity reduces to the Sobolev lattice sum of Ghat.
pub fn kernel_condition_ratio(slice: &KernelSlice, s: f64) -> Result<f64, TentError> {
    if !(s > 1.0) || !s.is_finite() {
        return Err(TentError::config(format!(
            "kernel condition needs a Sobolev exponent above 1, got {s}"
        )));
    }
    if !slice.is_full() {
        return Err(TentError::invalid(
            "kernel slice was cropped; the Sobolev condition needs the full dual lattice",
        ));
    }
    let dw = slice.dual_spacing();
    let side = (2 * slice.k_half + 1) as usize;
    let mut total = 0.0;
    for iu in 0..side {
        let wu = (iu as i64 - slice.k_half) as f64 * dw;
        for iv in 0..side {
            let wv = (iv as i64 - slice.k_half) as f64 * dw;
            let weight = (1.0 + wu * wu + wv * wv).powf(s);
            total += weight * slice.values[iu * side + iv].norm_sqr();
        }
    }
    Ok((total * dw * dw).sqrt())
}

/// Annulus index of a scaled plane radius `r = d(beta) |P_V alpha|`:
/// zero for `r <= 1`, otherwise the unique `k >= 1` with
/// `r` in `(2^{k-1}, 2^k]`. The dyadic cells are closed on the right, so
/// a radius hitting a power of two exactly belongs to the lower annulus.
pub fn annulus_of_radius(r: f64) -> u32 {
    if !(r > 1.0) {
        return 0;
    }
    (r.log2().ceil() as u32).max(1)
}

/// Annulus index of a triple relative to a plane point and curve.
pub fn annulus_index(alpha: [f64; 3], beta: PlaneVector, curve: &SingularCurve) -> u32 {
    annulus_of_radius(curve.dist(beta) * project_to_plane(alpha).norm())
}

/// Annulus indices over a fiber sample set crossed with a plane sample
/// set; by construction every pair carries exactly one index.
#[derive(Debug, Clone)]
pub struct AnnulusPartition {
    n_fiber: usize,
    indices: Vec<u32>,
    max_k: u32,
}

impl AnnulusPartition {
    pub fn build(
        fiber: &[PlaneVector],
        betas: &[PlaneVector],
        curve: &SingularCurve,
    ) -> Result<Self, TentError> {
        if fiber.is_empty() || betas.is_empty() {
            return Err(TentError::shape(
                "annulus partition needs nonempty fiber and plane sample sets",
            ));
        }
        let mut indices = Vec::with_capacity(fiber.len() * betas.len());
        let mut max_k = 0;
        for &beta in betas {
            let d = curve.dist(beta);
            for &a in fiber {
                let k = annulus_of_radius(d * a.norm());
                max_k = max_k.max(k);
                indices.push(k);
            }
        }
        Ok(AnnulusPartition {
            n_fiber: fiber.len(),
            indices,
            max_k,
        })
    }

    pub fn index(&self, beta_idx: usize, fiber_idx: usize) -> u32 {
        self.indices[beta_idx * self.n_fiber + fiber_idx]
    }

    pub fn max_k(&self) -> u32 {
        self.max_k
    }

    /// Pair counts per annulus, summing to the product-set size.
    pub fn counts(&self) -> Vec<usize> {
        let mut counts = vec![0usize; self.max_k as usize + 1];
        for &k in &self.indices {
            counts[k as usize] += 1;
        }
        counts
    }
}

/// Kernel slices attached to plane-grid cells, with the Sobolev exponent
/// the attached reports use.
#[derive(Clone)]
pub struct KernelField {
    s: f64,
    cells: Vec<usize>,
    slices: Vec<KernelSlice>,
    by_cell: HashMap<usize, usize>,
}

impl std::fmt::Debug for KernelField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("KernelField")
            .field("s", &self.s)
            .field("slices", &format_args!("[{} slices]", self.slices.len()))
            .finish()
    }
}

impl KernelField {
    /// Builds slices at the given cells of a plane grid, in parallel.
    pub fn build_at_cells(
        m: &MultiplierSpec,
        vgrid: &VGrid,
        curve: &SingularCurve,
        weights: &PartitionWeights,
        params: &KernelParams,
        cells: &[usize],
    ) -> Result<Self, TentError> {
        params.validate()?;
        let slices: Vec<KernelSlice> = cells
            .par_iter()
            .map(|&cell| {
                if cell >= vgrid.n_cells() {
                    return Err(TentError::shape(format!(
                        "cell {cell} outside the plane grid of {} cells",
                        vgrid.n_cells()
                    )));
                }
                kernel_from_multiplier(m, vgrid.cell_center(cell), curve, weights, params)
            })
            .collect::<Result<Vec<_>, TentError>>()?;
        let by_cell = cells
            .iter()
            .enumerate()
            .map(|(i, &c)| (c, i))
            .collect::<HashMap<_, _>>();
        Ok(KernelField {
            s: params.s,
            cells: cells.to_vec(),
            slices,
            by_cell,
        })
    }

    /// Builds slices exactly where the three embedded fields can make a
    /// nonzero product, the only cells a form quadrature visits.
    pub fn for_fields(
        m: &MultiplierSpec,
        fields: [&Field; 3],
        curve: &SingularCurve,
        weights: &PartitionWeights,
        params: &KernelParams,
    ) -> Result<Self, TentError> {
        let cells = product_active_cells(fields)?;
        Self::build_at_cells(m, fields[0].vgrid(), curve, weights, params, &cells)
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn len(&self) -> usize {
        self.slices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slices.is_empty()
    }

    pub fn cells(&self) -> &[usize] {
        &self.cells
    }

    pub fn slices(&self) -> &[KernelSlice] {
        &self.slices
    }

    pub fn slice_at(&self, cell: usize) -> Option<&KernelSlice> {
        self.by_cell.get(&cell).map(|&i| &self.slices[i])
    }

    /// Cover with every slice restricted to the dual-lattice disc of plane
    /// radius `keep_alpha`; see [`KernelSlice::cropped`].
    pub fn cropped(&self, keep_alpha: f64) -> KernelField {
        KernelField {
            s: self.s,
            cells: self.cells.clone(),
            slices: self.slices.iter().map(|sl| sl.cropped(keep_alpha)).collect(),
            by_cell: self.by_cell.clone(),
        }
    }
}

/// Cells where all three spectral windows hold coefficients and the
/// Whitney measure is positive: everywhere else the field product or the
/// measure vanishes identically.
pub fn product_active_cells(fields: [&Field; 3]) -> Result<Vec<usize>, TentError> {
    let embeddings = super::trilinear::validated_embeddings(fields)?;
    let vgrid = fields[0].vgrid();
    let measure = fields[0].measure();
    Ok(vgrid
        .cells()
        .filter(|&cell| {
            if measure.weight(cell) == 0.0 {
                return false;
            }
            let beta = vgrid.cell_center(cell);
            let d = measure.dist(cell);
            embeddings.iter().all(|emb| {
                !emb.window_terms(beta.coord(emb.axis()), d).is_empty()
            })
        })
        .collect())
}

/// Independent quadrature of the localized-symbol integral
/// `int m chitilde_beta dH^2`: polar panels around beta with radial knots
/// bracketing the window transition, the same layout the partition
/// normalizer itself is checked against. The normalizer is evaluated by
/// full quadrature, not the surrogate, so the comparison with a kernel
/// mass exercises the whole construction.
pub fn window_mass_quadrature(
    m: &MultiplierSpec,
    beta: PlaneVector,
    curve: &SingularCurve,
    weights: &PartitionWeights,
) -> Result<Complex64, TentError> {
    let d = curve.dist(beta);
    if d == 0.0 {
        return Err(TentError::domain("window mass requested on the curve"));
    }
    let support = weights.profile().chi_support_radius();
    // Fractions of the support radius bracketing the radial transition of
    // the window profile; inside the first knot the window is flat.
    let fractions = [0.0, 0.6, 0.68, 0.72, 0.76, 0.8, 0.84];
    let (nodes, gl_w) = crate::quad::gauss_legendre(48);
    let buv = beta.to_uv();
    let n_theta = 128usize;
    let dth = std::f64::consts::TAU / n_theta as f64;
    let mut total = Complex64::new(0.0, 0.0);
    for pair in fractions.windows(2) {
        let (lo, hi) = (pair[0] * support * d, pair[1] * support * d);
        let mid = 0.5 * (lo + hi);
        let half = 0.5 * (hi - lo);
        for (ts, ws) in nodes.iter().zip(gl_w) {
            let r = mid + half * ts;
            for it in 0..n_theta {
                let th = dth * (it as f64 + 0.5);
                let xi = PlaneVector::from_uv([buv[0] + r * th.cos(), buv[1] + r * th.sin()]);
                let w = normalized_window(xi, beta, curve, weights)?;
                if w == 0.0 {
                    continue;
                }
                total += m.eval(xi)? * (w * ws * half * r * dth);
            }
        }
    }
    Ok(total)
}
