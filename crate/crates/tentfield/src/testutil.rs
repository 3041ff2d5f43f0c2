//! Shared test fixtures: deterministic RNG, curve builders, and embedding
//! configurations whose frequency windows actually meet the dual grid.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bumps::grid::{AlphaGrid, GridMeasure, VGrid};
use crate::bumps::profile::{build_bumps, BumpProfile};
use crate::geometry::{Axis, CurveMode, PlaneVector, SingularCurve};

pub(crate) fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Unit vector along the cone axis of `j` in the plane.
pub(crate) fn cone_axis(j: Axis) -> PlaneVector {
    let mut c = [-1.0 / 3.0; 3];
    c[j.index()] = 2.0 / 3.0;
    let v = PlaneVector::new(c).unwrap();
    v.scale(1.0 / v.norm())
}

/// A plane unit vector orthogonal to the cone axis of `j`.
pub(crate) fn cone_perp(j: Axis) -> PlaneVector {
    let mut c = [0.0; 3];
    c[(j.index() + 1) % 3] = 1.0;
    c[(j.index() + 2) % 3] = -1.0;
    let v = PlaneVector::new(c).unwrap();
    v.scale(1.0 / v.norm())
}

/// Polyline along the cone axis of `j`, shifted by `offset`, spanning
/// parameter `[-half_len, half_len]` with a transverse wiggle that keeps
/// every pair inside the admissible cone at aperture theta0.
pub(crate) fn axis_polyline(
    j: Axis,
    theta0: f64,
    offset: PlaneVector,
    half_len: f64,
    n: usize,
    wiggle: f64,
) -> SingularCurve {
    let axis = cone_axis(j);
    let perp = cone_perp(j);
    let pts: Vec<PlaneVector> = (0..=n)
        .map(|k| {
            let t = -half_len + 2.0 * half_len * k as f64 / n as f64;
            offset
                .add(axis.scale(t))
                .add(perp.scale(wiggle * half_len * (2.5 * t / half_len).sin()))
        })
        .collect();
    SingularCurve::new(pts, j, theta0, CurveMode::Polyline).unwrap()
}

/// Embedding fixture: a distant large-scale curve so windows over the plane
/// grid are a few dual-grid bins wide.
///
/// Geometry: plane cells live in a block with j-coordinates tens to a few
/// hundred; the curve runs along the cone axis, displaced ~2.8e3 from the
/// block in the perpendicular direction, so curve distances d are ~2.8e3 and
/// window radii 0.32 * eps * d are around one unit, against dual spacing
/// 1/extent = 0.25. The curve is long enough that samples displaced along
/// the axis see the block at angles on both sides of the small-coordinate
/// cone boundary: the nearest samples see the cells inside the cone, samples
/// beyond ~0.3 d along the curve see them outside, so Whitney shells both
/// with and without the cone carve-out are exercised.
pub(crate) struct EmbedFixture {
    pub curve: SingularCurve,
    pub alpha: AlphaGrid,
    pub vgrid: VGrid,
    pub measure: GridMeasure,
    pub profile: BumpProfile,
    pub j: Axis,
}

pub(crate) fn embed_fixture(n_alpha: usize, n_cells: usize) -> EmbedFixture {
    let j = Axis::E1;
    let axis = cone_axis(j);
    let perp = cone_perp(j);
    let offset = axis.scale(350.0).add(perp.scale(-3000.0));
    let curve = axis_polyline(j, 0.1, offset, 2400.0, 48, 0.02);
    let alpha = AlphaGrid::centered(n_alpha, 4.0).unwrap();
    let vgrid = VGrid::new([400.0, 0.0], 400.0, n_cells).unwrap();
    let measure = GridMeasure::new(&vgrid, &curve);
    let profile = build_bumps(1e-3, 1e-5).unwrap();
    EmbedFixture {
        curve,
        alpha,
        vgrid,
        measure,
        profile,
        j,
    }
}

impl EmbedFixture {
    /// A signal whose spectrum hits the frequency windows of several cells:
    /// for each chosen cell, one grid frequency inside the window plateau.
    pub(crate) fn window_hitting_signal(&self, seed: u64) -> Vec<Complex64> {
        let mut r = rng(seed);
        let mut f = vec![Complex64::new(0.0, 0.0); self.alpha.n()];
        let cells: Vec<usize> = self
            .vgrid
            .cells()
            .filter(|&c| self.measure.dist(c) > 0.0)
            .collect();
        for pick in 0..8usize {
            let cell = cells[(pick * cells.len()) / 8];
            let beta_j = self.vgrid.cell_center(cell).coord(self.j);
            let k = (beta_j * self.alpha.extent()).round() as i64;
            let xi = k as f64 / self.alpha.extent();
            let amp = 0.2 + 0.8 * r.gen::<f64>();
            let ph = std::f64::consts::TAU * r.gen::<f64>();
            for (n, x) in self.alpha.points().enumerate() {
                f[n] += Complex64::from_polar(amp, ph + std::f64::consts::TAU * xi * x);
            }
        }
        f
    }
}

/// Fat-window desk fixture for kernel and form quadratures: a straight
/// two-sample curve (cheap distance queries), a compact plane patch around
/// one frequency site on the plane, and Gaussian-spectrum signals whose
/// carriers sit at the site coordinates.
///
/// The window scale is deliberately large (eps = 0.35; the partition
/// identities hold for any admissible eps): fat windows let modest cell
/// grids resolve the window-scale variation that the measure quadrature
/// must integrate, which is what makes two independent form evaluations
/// comparable on a desk budget.
pub(crate) struct DeskFixture {
    pub curve: SingularCurve,
    pub alpha: AlphaGrid,
    pub vgrid: VGrid,
    pub measure: GridMeasure,
    pub profile: BumpProfile,
    pub weights: crate::bumps::PartitionWeights,
    /// Carrier frequencies of the three signals; they sum to zero exactly.
    pub site: [f64; 3],
    /// Spectral radius of each signal around its carrier.
    pub sigma: f64,
}

pub(crate) fn desk_fixture(n_alpha: usize, n_v: usize) -> DeskFixture {
    let j = Axis::E3;
    // Straight line through the plane at u = -6 along the cone axis of
    // E3; every patch cell sees the curve at a distance of order u + 6.
    let offset = cone_perp(j).scale(-6.0);
    let curve = axis_polyline(j, 0.1, offset, 60.0, 1, 0.0);
    let extent = 16.0;
    let alpha = AlphaGrid::centered(n_alpha, extent).unwrap();
    // Integer dual-lattice carriers so the three of them sum to zero
    // exactly: k = (24, -37, 13) over extent 16.
    let site = [24.0 / extent, -37.0 / extent, 13.0 / extent];
    let uv = PlaneVector::new(site).unwrap().to_uv();
    // The signal spectra stay within ~0.45 of the site and each window
    // reaches at most 0.2 eps d ~ 0.7 beyond a needed frequency, so a
    // patch of halfwidth 2 covers every cell whose window can touch the
    // product spectrum, with room to spare; keeping the patch tight buys
    // measure-quadrature resolution at a fixed cell count.
    let vgrid = VGrid::new(uv, 2.0, n_v).unwrap();
    let measure = GridMeasure::new(&vgrid, &curve);
    let profile = build_bumps(0.35, 1e-3).unwrap();
    let weights = crate::bumps::PartitionWeights::new(profile.clone());
    DeskFixture {
        curve,
        alpha,
        vgrid,
        measure,
        profile,
        weights,
        site,
        sigma: 0.12,
    }
}

impl DeskFixture {
    /// Samples of signal `j`: Gaussian spectrum around the site carrier
    /// with deterministic random phases, band-limited well inside Nyquist.
    pub(crate) fn gaussian_signal(&self, j: Axis, seed: u64) -> Vec<Complex64> {
        let mut r = rng(seed.wrapping_mul(3).wrapping_add(j.index() as u64 + 1));
        let e = self.alpha.extent();
        let carrier = self.site[j.index()];
        let k_c = (carrier * e).round() as i64;
        let reach = (3.5 * self.sigma * e).ceil() as i64;
        let terms: Vec<(f64, Complex64)> = (k_c - reach..=k_c + reach)
            .map(|k| {
                let xi = k as f64 / e;
                let mag = (-((xi - carrier) / self.sigma).powi(2) / 2.0).exp();
                let ph = std::f64::consts::TAU * r.gen::<f64>();
                (xi, Complex64::from_polar(mag, ph))
            })
            .collect();
        self.alpha
            .points()
            .map(|x| {
                terms
                    .iter()
                    .map(|&(xi, c)| {
                        c * Complex64::from_polar(1.0, std::f64::consts::TAU * xi * x)
                    })
                    .sum()
            })
            .collect()
    }

    pub(crate) fn signals(&self, seed: u64) -> [Vec<Complex64>; 3] {
        [
            self.gaussian_signal(Axis::E1, seed),
            self.gaussian_signal(Axis::E2, seed),
            self.gaussian_signal(Axis::E3, seed),
        ]
    }

    /// The three signals embedded on the shared grids, axes in order.
    pub(crate) fn embedded_fields(&self, seed: u64) -> [crate::bumps::Field; 3] {
        let make = |j: Axis| {
            let f = self.gaussian_signal(j, seed);
            crate::bumps::embed(&f, j, &self.profile, &self.alpha, &self.vgrid, &self.measure)
                .unwrap()
        };
        [make(Axis::E1), make(Axis::E2), make(Axis::E3)]
    }

    /// A smooth test symbol: unit-modulus winding phase centered far below
    /// the patch, so it varies across windows without any singularity near
    /// them.
    pub(crate) fn smooth_symbol(&self) -> crate::multiplier::MultiplierSpec {
        crate::multiplier::MultiplierSpec::PointMikhlin {
            winding: 2,
            center: PlaneVector::from_uv([-1.0, -9.0]),
        }
    }
}
