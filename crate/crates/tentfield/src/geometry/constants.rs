//! Derived constants controlling the Whitney geometry.
//!
//! Every quantity is a function of the cone half-aperture parameter
//! `theta0 in [0, pi/6)`. The chain of definitions is
//!
//! ```text
//! delta0 = (sqrt(6)/3) cos(theta0 + pi/3)
//! theta1 = pi/18 - theta0/3
//! delta1 = sin(theta1)
//! delta2 = (sqrt(6)/3) cos(pi/3 + theta0 + theta1)
//! rho    = (delta2 - delta1) / (1 + delta1)
//! eps    = delta1 rho^2 / 2
//! c_s    = 4
//! c_f    = 11 / delta2
//! c      = max(3 c_s, 1/delta1)
//! m_strips = least integer exceeding 3 c_f / (2 delta0 (1 - delta1))
//! ```
//!
//! The inequalities bundled in [`ConstantPack::check_invariants`] are exactly
//! the ones the selection and pruning arguments consume; they hold on the
//! whole admissible `theta0` range.

use crate::error::TentError;
use serde::{Deserialize, Serialize};

/// All derived constants for a given cone parameter.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ConstantPack {
    /// Cone half-aperture parameter, in `[0, pi/6)`.
    pub theta0: f64,
    /// Lower bound for `|<gamma - gamma', e_j>| / |gamma - gamma'|` on curve pairs.
    pub delta0: f64,
    /// Auxiliary angle `pi/18 - theta0/3`.
    pub theta1: f64,
    /// Whitney comparability constant, `sin(theta1)`.
    pub delta1: f64,
    /// Cone exclusion aperture.
    pub delta2: f64,
    /// Frequency separation radius factor.
    pub rho: f64,
    /// Window scale for the partition of unity and the embedding windows.
    pub eps: f64,
    /// Spatial rectangle constant of the sup-norm selection.
    pub c_s: f64,
    /// Frequency rectangle constant of the sup-norm selection.
    pub c_f: f64,
    /// Tent elongation constant, `max(3 c_s, 1/delta1)`.
    pub c: f64,
    /// Number of frequency strips per side in the sup-norm selection.
    pub m_strips: u32,
}

impl ConstantPack {
    /// Derives the pack from `theta0`, rejecting parameters outside `[0, pi/6)`.
    pub fn derive(theta0: f64) -> Result<Self, TentError> {
        use std::f64::consts::PI;
        if !theta0.is_finite() || !(0.0..PI / 6.0).contains(&theta0) {
            return Err(TentError::domain(format!(
                "theta0 must lie in [0, pi/6), got {theta0}"
            )));
        }
        let s6_3 = 6.0_f64.sqrt() / 3.0;
        let delta0 = s6_3 * (theta0 + PI / 3.0).cos();
        let theta1 = PI / 18.0 - theta0 / 3.0;
        let delta1 = theta1.sin();
        let delta2 = s6_3 * (PI / 3.0 + theta0 + theta1).cos();
        let rho = (delta2 - delta1) / (1.0 + delta1);
        let eps = delta1 * rho * rho / 2.0;
        let c_s = 4.0_f64;
        let c_f = 11.0 / delta2;
        let c = (3.0 * c_s).max(1.0 / delta1);
        let ratio = 3.0 * c_f / (2.0 * delta0 * (1.0 - delta1));
        // Least integer strictly greater than the ratio.
        let m_strips = (ratio.floor() as u32) + 1;
        let pack = ConstantPack {
            theta0,
            delta0,
            theta1,
            delta1,
            delta2,
            rho,
            eps,
            c_s,
            c_f,
            c,
            m_strips,
        };
        pack.check_invariants()?;
        Ok(pack)
    }

    /// Verifies every ordering and pruning inequality the algorithms rely on.
    pub fn check_invariants(&self) -> Result<(), TentError> {
        let ConstantPack {
            delta0,
            delta1,
            delta2,
            rho,
            eps,
            c_s,
            c_f,
            c,
            m_strips,
            ..
        } = *self;
        let fail = |msg: &str| Err(TentError::domain(format!("constant invariant: {msg}")));
        if !(delta1 > 0.0 && delta1 < delta2) {
            return fail("0 < delta1 < delta2");
        }
        if !(delta2 < delta0 && delta0 < 1.0) {
            return fail("delta2 < delta0 < 1");
        }
        if !(rho > 0.0 && rho < 1.0) {
            return fail("rho in (0,1)");
        }
        if !(eps > 0.0 && eps < rho / 2.0) {
            return fail("0 < eps < rho/2");
        }
        if !(c_f >= 8.0 && c_f >= 4.0 * (rho + 1.0)) {
            return fail("c_f >= 8 and c_f >= 4(rho+1)");
        }
        if !(c >= 3.0 * c_s && c >= 1.0 / delta1) {
            return fail("c >= 3 c_s and c >= 1/delta1");
        }
        // Overlap constant of the two-scale window comparison; the frequency
        // pruning needs 4 eps / 10 * (1 + c_w) < rho.
        let c_w = (4.0 * eps / 10.0 + 1.0 / delta1) / (delta2 - 4.0 * eps / 10.0);
        if !(c_w > 0.0 && 4.0 * eps / 10.0 * (1.0 + c_w) < rho) {
            return fail("(4 eps/10)(1 + c_w) < rho");
        }
        // Two windows at commensurate scales stay rho-separated:
        // 8 eps / 10 < rho suffices and holds with large margin.
        if !(8.0 * eps / 10.0 < rho) {
            return fail("8 eps/10 < rho");
        }
        let ratio = 3.0 * c_f / (2.0 * delta0 * (1.0 - delta1));
        if !(f64::from(m_strips) > ratio && f64::from(m_strips) - 1.0 <= ratio) {
            return fail("m_strips is the least integer exceeding 3 c_f / (2 delta0 (1-delta1))");
        }
        Ok(())
    }

    /// Strip width used by both selection algorithms at Whitney parameter `t`.
    pub fn strip_width(&self, t: f64) -> f64 {
        self.delta0 * (1.0 - self.delta1) * t
    }

    /// Two-scale window comparison constant `c_w`.
    pub fn window_comparison(&self) -> f64 {
        (4.0 * self.eps / 10.0 + 1.0 / self.delta1) / (self.delta2 - 4.0 * self.eps / 10.0)
    }
}
