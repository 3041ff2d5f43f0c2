//! Wave packets: modulated, dilated copies of the spatial profile, sampled
//! on the periodic alpha grid.
//!
//! The packet at (alpha, beta) on axis j with d = d(beta) is
//! w(x) = e^{-2 pi i beta_j (x - alpha)} d phi(d (x - alpha)),
//! periodized over the grid period. The pairing with a signal is bilinear,
//! integral of f * w with no conjugation; phi is real and even, and with
//! this convention the pairing of f against the packet reproduces the
//! embedded field value at (alpha, beta) exactly for trigonometric
//! polynomials (both sides are finite sums over the same windowed spectrum).

use num_complex::Complex64;

use crate::bumps::grid::AlphaGrid;
use crate::bumps::profile::BumpProfile;
use crate::error::TentError;
use crate::geometry::{Axis, PlaneVector, SingularCurve};

/// Samples of the periodized wave packet on the alpha grid.
pub fn wave_packet(
    alpha: f64,
    beta: PlaneVector,
    j: Axis,
    curve: &SingularCurve,
    profile: &BumpProfile,
    grid: &AlphaGrid,
) -> Result<Vec<Complex64>, TentError> {
    let d = curve.dist(beta);
    if d == 0.0 {
        return Err(TentError::domain("wave packet centered on the curve"));
    }
    let beta_j = beta.coord(j);
    let ext = profile.phi_time_extent() / d;
    let period = grid.extent();
    let mut out = Vec::with_capacity(grid.n());
    for x in grid.points() {
        // Images x + m*period - alpha within the tabulated support.
        let m_lo = ((alpha - ext - x) / period).ceil() as i64;
        let m_hi = ((alpha + ext - x) / period).floor() as i64;
        let mut acc = Complex64::new(0.0, 0.0);
        for m in m_lo..=m_hi {
            let y = x + m as f64 * period - alpha;
            let amp = d * profile.phi_time(d * y);
            if amp != 0.0 {
                acc += Complex64::from_polar(1.0, -std::f64::consts::TAU * beta_j * y) * amp;
            }
        }
        out.push(acc);
    }
    Ok(out)
}

/// Bilinear pairing dx * sum f g over the grid, no conjugation.
pub fn pair_bilinear(f: &[Complex64], g: &[Complex64], dx: f64) -> Complex64 {
    f.iter().zip(g).map(|(a, b)| a * b).sum::<Complex64>() * dx
}

/// Discrete L1 norm dx * sum |g|.
pub fn l1_norm(g: &[Complex64], dx: f64) -> f64 {
    g.iter().map(|v| v.norm()).sum::<f64>() * dx
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bumps::field::embed;
    use crate::bumps::profile::build_bumps;
    use crate::fftutil;
    use crate::geometry::CurveMode;
    use crate::testutil::{cone_axis, embed_fixture};

    #[test]
    fn pairing_reproduces_embedded_field() {
        // Same grids as the embedding fixture but a wider profile so the
        // packet decays within a few periods.
        let fix = embed_fixture(4096, 10);
        let profile = build_bumps(4e-3, 1e-4).unwrap();
        let f = {
            // Signal with spectrum inside several windows at this scale.
            let mut f = vec![Complex64::new(0.0, 0.0); fix.alpha.n()];
            for (pick, amp, ph) in [(7usize, 0.9, 0.3), (33, 0.5, 1.7), (71, 1.2, 4.0)] {
                let beta_j = fix.vgrid.cell_center(pick).coord(fix.j);
                let k = (beta_j * fix.alpha.extent()).round() as i64;
                let xi = k as f64 / fix.alpha.extent();
                for (n, x) in fix.alpha.points().enumerate() {
                    f[n] += Complex64::from_polar(amp, ph + std::f64::consts::TAU * xi * x);
                }
            }
            f
        };
        let field = embed(
            &f,
            fix.j,
            &profile,
            &fix.alpha,
            &fix.vgrid,
            &fix.measure,
        )
        .unwrap();
        let emb = field.spectral().unwrap();
        let dx = fix.alpha.dx();
        let mut nontrivial = 0;
        for cell in [7usize, 33, 71, 50] {
            let beta = fix.vgrid.cell_center(cell);
            let d = fix.measure.dist(cell);
            for &alpha in &[0.0, fix.alpha.point(100), 0.7318] {
                let packet =
                    wave_packet(alpha, beta, fix.j, &fix.curve, &profile, &fix.alpha).unwrap();
                let paired = pair_bilinear(&f, &packet, dx);
                let direct = emb.eval(alpha, beta.coord(fix.j), d);
                // Absolute floor 1: signal amplitudes are order one, and the
                // packet carries table interpolation noise near 1e-9, so a
                // zero window must pair to zero only at that absolute scale.
                let scale = direct.norm().max(1.0);
                assert!(
                    (paired - direct).norm() / scale < 1e-8,
                    "cell {cell} alpha {alpha}: packet pairing {paired} vs embedding {direct}"
                );
                if direct.norm() > 0.1 {
                    nontrivial += 1;
                }
            }
        }
        assert!(nontrivial >= 3, "agreement only checked on zeros");
    }

    /// Far-point configuration: packet support fits inside one period and
    /// each oscillation lobe is densely sampled.
    fn far_point_setup() -> (SingularCurve, AlphaGrid, BumpProfile, PlaneVector, f64) {
        let profile = build_bumps(4e-3, 1e-4).unwrap();
        let axis = cone_axis(Axis::E1);
        let gamma = axis.scale(-1.3e5);
        let curve = SingularCurve::new(vec![gamma], Axis::E1, 0.1, CurveMode::PointCloud).unwrap();
        let grid = AlphaGrid::centered(1 << 16, 4.0).unwrap();
        let beta = axis.scale(366.0);
        let d = curve.dist(beta);
        (curve, grid, profile, beta, d)
    }

    #[test]
    fn packet_l1_norm_matches_profile_l1() {
        let (curve, grid, profile, beta, d) = far_point_setup();
        // Tabulated support must fit in half a period: no image overlap.
        assert!(profile.phi_time_extent() / d < 0.5 * grid.extent());
        let packet = wave_packet(0.31, beta, Axis::E1, &curve, &profile, &grid).unwrap();
        let got = l1_norm(&packet, grid.dx());
        let expect = profile.phi_l1();
        assert!(
            (got - expect).abs() / expect < 1e-3,
            "packet L1 {got} vs profile L1 {expect}"
        );
    }

    #[test]
    fn packet_frequency_support_is_centered_at_minus_beta_j() {
        let (curve, grid, profile, beta, d) = far_point_setup();
        let alpha0 = 0.125;
        let packet = wave_packet(alpha0, beta, Axis::E1, &curve, &profile, &grid).unwrap();
        let mut buf = packet.clone();
        // Forward transform matches the e^{-2 pi i x xi} convention, so the
        // modulation e^{-2 pi i beta_j x} reads out at xi = -beta_j.
        fftutil::dft_1d(&mut buf, true);
        let center = -beta.coord(Axis::E1);
        let radius = profile.true_support_radius() * d;
        assert!(radius > 1.0, "window must span many bins: {radius}");
        let peak = buf.iter().map(|v| v.norm()).fold(0.0f64, f64::max);
        assert!(peak > 0.0);
        let mut inside_mass = 0.0f64;
        for (i, v) in buf.iter().enumerate() {
            let xi = grid.freq(i);
            if (xi - center).abs() <= radius * 1.0001 {
                inside_mass = inside_mass.max(v.norm());
            } else {
                // The spatial profile is truncated at the end of its table
                // (values ~4e-9 there); the resulting edge kink leaks
                // sidelobes measured at ~1e-7 of the peak.
                assert!(
                    v.norm() <= 1e-6 * peak,
                    "leakage at xi {xi}: {} vs peak {peak}",
                    v.norm()
                );
            }
        }
        assert!(inside_mass == peak, "peak must sit inside the window");
        // Advertised radius also contains the support.
        assert!(profile.support_radius() * d >= radius);
    }

    #[test]
    fn packet_on_curve_is_domain_error() {
        let (curve, grid, profile, _, _) = far_point_setup();
        let on = cone_axis(Axis::E1).scale(-1.3e5);
        let err = wave_packet(0.0, on, Axis::E1, &curve, &profile, &grid).unwrap_err();
        assert!(matches!(err, TentError::Domain(_)));
    }
}
