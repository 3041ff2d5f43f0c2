//! Bump profiles: the mollified plateau function, the frequency window, the
//! spatial wave-packet profile, and the plane window.
//!
//! The base bump is eta(x) = exp(-1/(1-x^2))/Z on (-1,1) with Z fixed by
//! integral one. The plateau function is the convolution
//! etatilde = 1_{B_{3/20}} * D^1_{1/100} eta, evaluated exactly as a
//! difference of the eta distribution function at 100(x +- 3/20). It equals
//! 1 exactly for |x| <= 0.14 and 0 exactly for |x| >= 0.16, which sits
//! strictly inside the advertised plateau B_{1/10} and support B_{2/10}.
//!
//! The frequency window is phihat(xi) = etatilde(xi/(2 eps)); the plane
//! window is Phi(y) = etatilde(|y|); the partition profile is
//! chi(y) = etatilde(|y|/eps). The spatial profile phi is the inverse
//! transform of phihat under the e^{-2 pi i x xi} convention:
//! phi(z) = 2 eps * etatilde_check(2 eps z). The check transform is
//! tabulated once per process from a dense inverse FFT of etatilde samples
//! and interpolated by cubic Hermite pieces whose slopes come from the exact
//! transform of 2 pi i u etatilde(u).

use num_complex::Complex64;
use std::sync::OnceLock;

use crate::error::TentError;
use crate::fftutil;
use crate::quad;

/// Steps in the distribution-function table of eta over [-1, 1].
const CDF_STEPS: usize = 8192;
/// Length of the FFT that tabulates the check transform of etatilde.
const TIME_N: usize = 1 << 17;
/// Sample spacing of etatilde for that FFT; Nyquist frequency 1600.
const TIME_DU: f64 = 1.0 / 3200.0;
/// Largest tabulated frequency of the check transform; beyond it the
/// profile is treated as zero and the discarded tail bound is recorded.
const TIME_W_MAX: f64 = 1500.0;

/// Raw unnormalized bump exp(-1/(1-x^2)) on (-1,1).
fn eta_raw(x: f64) -> f64 {
    if x.abs() >= 1.0 {
        0.0
    } else {
        (-1.0 / (1.0 - x * x)).exp()
    }
}

/// Cubic Hermite table on a uniform grid: values and exact derivatives.
#[derive(Debug)]
struct HermiteTable {
    x0: f64,
    dx: f64,
    values: Vec<f64>,
    derivs: Vec<f64>,
}

impl HermiteTable {
    fn x_max(&self) -> f64 {
        self.x0 + self.dx * (self.values.len() - 1) as f64
    }

    fn eval(&self, x: f64) -> f64 {
        let t = (x - self.x0) / self.dx;
        let i = (t.floor() as usize).min(self.values.len() - 2);
        let s = t - i as f64;
        let (v0, v1) = (self.values[i], self.values[i + 1]);
        let (d0, d1) = (self.derivs[i] * self.dx, self.derivs[i + 1] * self.dx);
        let s2 = s * s;
        let s3 = s2 * s;
        (2.0 * s3 - 3.0 * s2 + 1.0) * v0
            + (s3 - 2.0 * s2 + s) * d0
            + (-2.0 * s3 + 3.0 * s2) * v1
            + (s3 - s2) * d1
    }
}

/// Process-wide tables shared by every profile; the scale eps only rescales
/// arguments, so nothing here depends on it.
struct BumpTables {
    /// Distribution function of normalized eta at uniform knots on [-1,1].
    cdf: HermiteTable,
    /// Unnormalized mass of the raw bump, the normalizer Z.
    eta_mass: f64,
    /// Check transform of etatilde on [0, TIME_W_MAX].
    time: HermiteTable,
    /// Integral of |check transform| over the real line.
    time_l1: f64,
    /// Max |check transform| on the last 5% of the table, an upper bound
    /// proxy for the truncated tail.
    time_tail: f64,
}

static TABLES: OnceLock<BumpTables> = OnceLock::new();

fn tables() -> &'static BumpTables {
    TABLES.get_or_init(build_tables)
}

fn build_tables() -> BumpTables {
    // Distribution function of eta by per-step Simpson; self-normalized so
    // the final knot is exactly 1 and the plateau identity is exact.
    let h = 2.0 / CDF_STEPS as f64;
    let mut raw = vec![0.0; CDF_STEPS + 1];
    let mut dens = vec![0.0; CDF_STEPS + 1];
    dens[0] = eta_raw(-1.0);
    for k in 0..CDF_STEPS {
        let a = -1.0 + h * k as f64;
        dens[k + 1] = eta_raw(a + h);
        raw[k + 1] = raw[k] + (h / 6.0) * (dens[k] + 4.0 * eta_raw(a + 0.5 * h) + dens[k + 1]);
    }
    let eta_mass = raw[CDF_STEPS];
    let values: Vec<f64> = raw.iter().map(|v| v / eta_mass).collect();
    let derivs: Vec<f64> = dens.iter().map(|v| v / eta_mass).collect();
    let cdf = HermiteTable {
        x0: -1.0,
        dx: h,
        values,
        derivs,
    };

    // Check transform of etatilde by a dense inverse DFT. The signal is
    // supported in |u| <= 0.16 so there is no truncation; sampling at
    // TIME_DU leaves only aliasing from beyond the Nyquist frequency,
    // which the tail bound below measures.
    let etat = |x: f64| {
        let hi = cdf_eval(&cdf, 100.0 * (x + 0.15));
        let lo = cdf_eval(&cdf, 100.0 * (x - 0.15));
        hi - lo
    };
    let mut buf_v = vec![Complex64::new(0.0, 0.0); TIME_N];
    let mut buf_d = vec![Complex64::new(0.0, 0.0); TIME_N];
    let support = (0.17 / TIME_DU).ceil() as i64;
    for n in -support..=support {
        let u = n as f64 * TIME_DU;
        let v = etat(u);
        if v != 0.0 {
            let idx = n.rem_euclid(TIME_N as i64) as usize;
            buf_v[idx] = Complex64::new(v, 0.0);
            // Derivative in w of the check transform: transform of
            // 2 pi i u etatilde(u); real by symmetry.
            buf_d[idx] = Complex64::new(0.0, 2.0 * std::f64::consts::PI * u * v);
        }
    }
    // Inverse kernel e^{+2 pi i u w}: the value table is even in w either
    // way, but the derivative table is odd and needs the true sign.
    fftutil::dft_1d(&mut buf_v, false);
    fftutil::dft_1d(&mut buf_d, false);
    let dw = 1.0 / (TIME_N as f64 * TIME_DU);
    let k_max = (TIME_W_MAX / dw).floor() as usize;
    let values: Vec<f64> = (0..=k_max).map(|k| buf_v[k].re * TIME_DU).collect();
    let derivs: Vec<f64> = (0..=k_max).map(|k| buf_d[k].re * TIME_DU).collect();
    let time = HermiteTable {
        x0: 0.0,
        dx: dw,
        values,
        derivs,
    };

    let time_l1 = 2.0 * table_abs_integral(&time);
    let tail_from = (0.95 * k_max as f64) as usize;
    let time_tail = time.values[tail_from..]
        .iter()
        .fold(0.0f64, |m, v| m.max(v.abs()));

    BumpTables {
        cdf,
        eta_mass,
        time,
        time_l1,
        time_tail,
    }
}

fn cdf_eval(cdf: &HermiteTable, t: f64) -> f64 {
    if t <= -1.0 {
        0.0
    } else if t >= 1.0 {
        1.0
    } else {
        cdf.eval(t)
    }
}

/// Integral of |table| over [x0, x_max] by per-interval Gauss-Legendre on
/// the Hermite cubic, which handles sign changes inside intervals.
fn table_abs_integral(table: &HermiteTable) -> f64 {
    let (nodes, weights) = quad::gauss_legendre(8);
    let mut total = 0.0;
    for i in 0..table.values.len() - 1 {
        let a = table.x0 + table.dx * i as f64;
        let mid = a + 0.5 * table.dx;
        let half = 0.5 * table.dx;
        let mut acc = 0.0;
        for (x, w) in nodes.iter().zip(weights) {
            acc += w * table.eval(mid + half * x).abs();
        }
        total += acc * half;
    }
    total
}

/// Normalized base bump eta as a free function.
pub fn eta_density(x: f64) -> f64 {
    eta_raw(x) / tables().eta_mass
}

/// Mollified plateau profile etatilde as a free function: 1 on
/// [-0.14, 0.14], 0 outside (-0.16, 0.16), smooth in between.
pub fn eta_tilde_value(x: f64) -> f64 {
    let cdf = &tables().cdf;
    cdf_eval(cdf, 100.0 * (x + 0.15)) - cdf_eval(cdf, 100.0 * (x - 0.15))
}

/// Plane window Phi(y) = etatilde(|y|) used to localize symbols. The window
/// has no scale parameter, so no profile instance is needed.
pub fn plane_window(y_norm: f64) -> f64 {
    eta_tilde_value(y_norm)
}

/// Immutable bump profile at partition scale `eps`.
///
/// All evaluators are closed-form rescalings of the shared tables; the
/// profile itself stores only the scale, the declared resolution, and
/// recorded norms.
#[derive(Debug, Clone)]
pub struct BumpProfile {
    eps: f64,
    resolution: f64,
    l1_phi: f64,
}

/// Builds the bump family at scale `eps` for grids with spacing
/// `resolution` (in the same frequency units as unit-distance windows).
///
/// Errors when the plateau ball of the frequency window, diameter
/// 4 eps/10, is crossed by fewer than 8 grid samples.
pub fn build_bumps(eps: f64, resolution: f64) -> Result<BumpProfile, TentError> {
    if !(eps > 0.0 && eps < 1.0) || !eps.is_finite() {
        return Err(TentError::domain(format!(
            "bump scale eps must lie in (0, 1), got {eps}"
        )));
    }
    if !(resolution > 0.0) || !resolution.is_finite() {
        return Err(TentError::config(format!(
            "resolution must be positive, got {resolution}"
        )));
    }
    let samples_across = 0.4 * eps / resolution;
    if samples_across < 8.0 {
        return Err(TentError::config(format!(
            "resolution {resolution} puts only {samples_across:.2} samples across the \
             frequency plateau of diameter {}; at least 8 required",
            0.4 * eps
        )));
    }
    let t = tables();
    Ok(BumpProfile {
        eps,
        resolution,
        l1_phi: t.time_l1,
    })
}

impl BumpProfile {
    /// Partition scale.
    pub fn eps(&self) -> f64 {
        self.eps
    }

    /// Declared grid resolution the profile was built for.
    pub fn resolution(&self) -> f64 {
        self.resolution
    }

    /// Normalized base bump eta.
    pub fn eta(&self, x: f64) -> f64 {
        eta_raw(x) / tables().eta_mass
    }

    /// Mollified plateau function etatilde: 1 on [-0.14, 0.14], 0 outside
    /// (-0.16, 0.16), smooth and strictly monotone in between.
    pub fn eta_tilde(&self, x: f64) -> f64 {
        eta_tilde_value(x)
    }

    /// Plane window Phi(y) = etatilde(|y|), used to localize symbols.
    pub fn plane_window(&self, y_norm: f64) -> f64 {
        self.eta_tilde(y_norm)
    }

    /// Partition profile chi at rescaled radius: chi for a point at
    /// distance `r` from the window center at unit distance scale.
    pub fn chi(&self, r: f64) -> f64 {
        self.eta_tilde(r / self.eps)
    }

    /// Frequency window phihat(xi) = etatilde(xi / (2 eps)).
    pub fn phi_hat(&self, xi: f64) -> f64 {
        self.eta_tilde(xi / (2.0 * self.eps))
    }

    /// Advertised plateau radius of the frequency window, 2 eps / 10.
    pub fn plateau_radius(&self) -> f64 {
        0.2 * self.eps
    }

    /// Advertised support radius of the frequency window, 4 eps / 10.
    pub fn support_radius(&self) -> f64 {
        0.4 * self.eps
    }

    /// Exact support radius of the frequency window: 0.32 eps, strictly
    /// inside the advertised bound.
    pub fn true_support_radius(&self) -> f64 {
        0.32 * self.eps
    }

    /// Support radius of the partition profile chi in rescaled distance:
    /// the advertised 2 eps / 10 bound.
    pub fn chi_support_radius(&self) -> f64 {
        0.2 * self.eps
    }

    /// Spatial profile phi(z) = 2 eps * check(2 eps z); real and even, and
    /// treated as zero beyond the tabulated range (tail bound recorded).
    pub fn phi_time(&self, z: f64) -> f64 {
        let w = (2.0 * self.eps * z).abs();
        let table = &tables().time;
        if w > table.x_max() {
            0.0
        } else {
            2.0 * self.eps * table.eval(w)
        }
    }

    /// Half-width of the spatial support actually tabulated, in z units.
    pub fn phi_time_extent(&self) -> f64 {
        tables().time.x_max() / (2.0 * self.eps)
    }

    /// L1 norm of phi; scale-invariant, computed once from the table.
    pub fn phi_l1(&self) -> f64 {
        self.l1_phi
    }

    /// Recorded bound on the truncated spectral tail of the spatial
    /// profile table.
    pub fn phi_tail_bound(&self) -> f64 {
        tables().time_tail
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Normalizer of the raw bump from an independent 40-digit computation.
    const ETA_MASS_ORACLE: f64 = 0.443_993_816_168_079_4;

    fn profile() -> BumpProfile {
        build_bumps(7.030_323_090_559_482e-4, 1e-5).unwrap()
    }

    #[test]
    fn eta_mass_matches_independent_oracle() {
        let _ = profile();
        assert!((tables().eta_mass - ETA_MASS_ORACLE).abs() < 1e-12);
    }

    #[test]
    fn eta_integrates_to_one_by_independent_quadrature() {
        // Composite Gauss-Legendre with panels not aligned to the CDF grid.
        let p = profile();
        let (nodes, weights) = quad::gauss_legendre(48);
        let panels = 7;
        let mut total = 0.0;
        for k in 0..panels {
            let a = -1.0 + 2.0 * k as f64 / panels as f64;
            let b = a + 2.0 / panels as f64;
            let mid = 0.5 * (a + b);
            let half = 0.5 * (b - a);
            for (x, w) in nodes.iter().zip(weights) {
                total += w * half * p.eta(mid + half * x);
            }
        }
        assert!((total - 1.0).abs() < 1e-10);
    }

    #[test]
    fn eta_center_value() {
        let p = profile();
        let expect = (-1.0f64).exp() / ETA_MASS_ORACLE;
        assert!((p.eta(0.0) - expect).abs() < 1e-12);
    }

    #[test]
    fn eta_tilde_plateau_and_support_are_exact() {
        let p = profile();
        assert_eq!(p.eta_tilde(0.0), 1.0);
        assert_eq!(p.eta_tilde(0.14), 1.0);
        assert_eq!(p.eta_tilde(-0.1399999), 1.0);
        assert_eq!(p.eta_tilde(0.1), 1.0);
        assert_eq!(p.eta_tilde(0.16), 0.0);
        assert_eq!(p.eta_tilde(-0.2), 0.0);
        assert_eq!(p.eta_tilde(5.0), 0.0);
        let mid = p.eta_tilde(0.15);
        assert!(mid > 0.0 && mid < 1.0);
        // Monotone decreasing across the shoulder.
        let mut prev = 1.0;
        for k in 0..=40 {
            let v = p.eta_tilde(0.14 + 0.02 * k as f64 / 40.0);
            assert!(v <= prev + 1e-15);
            prev = v;
        }
    }

    #[test]
    fn eta_tilde_matches_direct_convolution_quadrature() {
        // Independent evaluation of (1_B * dilated eta)(x) by quadrature.
        let p = profile();
        let (nodes, weights) = quad::gauss_legendre(64);
        for &x in &[0.139, 0.145, 0.1501, 0.155, 0.1599] {
            // integral over u in [x-0.15, x+0.15] of 100 eta(100 u) du,
            // restricted to |100u| < 1.
            let a = (x - 0.15_f64).max(-0.01);
            let b = (x + 0.15_f64).min(0.01);
            let mid = 0.5 * (a + b);
            let half = 0.5 * (b - a);
            let mut total = 0.0;
            for (t, w) in nodes.iter().zip(weights) {
                let u = mid + half * t;
                total += w * half * 100.0 * p.eta(100.0 * u);
            }
            assert!(
                (total - p.eta_tilde(x)).abs() < 1e-10,
                "x = {x}: quadrature {total} vs table {}",
                p.eta_tilde(x)
            );
        }
    }

    #[test]
    fn phi_hat_plateau_and_support() {
        let p = profile();
        let eps = p.eps();
        assert_eq!(p.phi_hat(0.0), 1.0);
        assert_eq!(p.phi_hat(eps / 10.0), 1.0);
        assert_eq!(p.phi_hat(0.2 * eps), 1.0);
        assert_eq!(p.phi_hat(0.28 * eps), 1.0);
        assert_eq!(p.phi_hat(0.4 * eps), 0.0);
        assert_eq!(p.phi_hat(0.33 * eps), 0.0);
        assert!(p.phi_hat(0.3 * eps) > 0.0 && p.phi_hat(0.3 * eps) < 1.0);
    }

    #[test]
    fn phi_time_inverts_to_phi_hat() {
        // Fourier pair check by direct oscillatory quadrature of the table:
        // integral of phi(z) e^{-2 pi i z xi} dz must reproduce phi_hat(xi).
        let p = profile();
        let table = &tables().time;
        let n = table.values.len() - 1;
        let dw = table.dx;
        for &v in &[0.0, 0.05, 0.1, 0.145, 0.15, 0.155, 0.17, 0.25] {
            // In rescaled units: integral of check(w) cos(2 pi w v) dw
            // over |w| <= W_MAX equals etatilde(v).
            let mut acc = 0.0;
            for k in 0..n {
                // Simpson on each interval using the Hermite midpoint.
                let a = dw * k as f64;
                let m = a + 0.5 * dw;
                let b = a + dw;
                let f = |w: f64| table.eval(w) * (2.0 * std::f64::consts::PI * w * v).cos();
                acc += (dw / 6.0) * (f(a) + 4.0 * f(m) + f(b));
            }
            let got = 2.0 * acc;
            let expect = p.eta_tilde(v);
            assert!(
                (got - expect).abs() < 1e-7,
                "v = {v}: inversion {got} vs etatilde {expect}"
            );
        }
    }

    #[test]
    fn phi_time_integrates_to_one() {
        // Signed integral of the table equals etatilde(0) = 1.
        let table = &tables().time;
        let (nodes, weights) = quad::gauss_legendre(8);
        let mut total = 0.0;
        for i in 0..table.values.len() - 1 {
            let a = table.x0 + table.dx * i as f64;
            let mid = a + 0.5 * table.dx;
            let half = 0.5 * table.dx;
            for (x, w) in nodes.iter().zip(weights) {
                total += w * half * table.eval(mid + half * x);
            }
        }
        // The table stops at TIME_W_MAX; the discarded superpolynomial tail
        // and the sub-Nyquist aliasing both sit near 1e-9, so the identity
        // holds only to that truncation budget, not to machine precision.
        assert!((2.0 * total - 1.0).abs() < 5e-9, "got {}", 2.0 * total);
    }

    #[test]
    fn phi_l1_exceeds_mass_and_tail_is_small() {
        let p = profile();
        // The signed integral is phihat(0) = 1, so the L1 norm is at least 1.
        // It is strictly larger: the indicator factor of etatilde contributes
        // a slowly decaying sin(0.3 pi w)/(pi w) envelope whose absolute mass
        // up to the smooth cutoff near w ~ 10^2 adds about 1.19. Measured
        // value 2.18858; the band below is a regression fence around it.
        assert!(p.phi_l1() >= 1.0);
        assert!(
            (2.17..2.20).contains(&p.phi_l1()),
            "L1 norm {}",
            p.phi_l1()
        );
        assert!(p.phi_tail_bound() < 1e-8, "tail {}", p.phi_tail_bound());
    }

    #[test]
    fn phi_time_scaling_consistency() {
        // Two scales must agree after rescaling: phi_eps(z) =
        // (eps1/eps2) phi_eps2(z eps1/eps2) with eps-dependent dilation.
        let p1 = build_bumps(1e-3, 1e-5).unwrap();
        let p2 = build_bumps(2e-3, 1e-5).unwrap();
        for &z in &[0.0, 10.0, 100.0, 1000.0] {
            let a = p1.phi_time(z);
            let b = 0.5 * p2.phi_time(0.5 * z);
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn resolution_gate() {
        let eps = 1e-3;
        assert!(build_bumps(eps, 0.4 * eps / 8.0).is_ok());
        let err = build_bumps(eps, 0.4 * eps / 7.9).unwrap_err();
        assert!(matches!(err, TentError::Config(_)));
        assert!(build_bumps(-1.0, 1e-5).is_err());
        assert!(build_bumps(0.0, 1e-5).is_err());
        assert!(build_bumps(1e-3, 0.0).is_err());
    }
}
