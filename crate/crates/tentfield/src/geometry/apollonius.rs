//! Apollonius balls: sublevel sets of distance ratios.
//!
//! For `r in (0,1)` the set `B_r(x0, x1) = {y : |y - x0| < r |y - x1|}` is an
//! open disc in the plane. Its center and radius follow from expanding the
//! defining inequality:
//!
//! ```text
//! center = (x0 - r^2 x1) / (1 - r^2),   radius = r |x0 - x1| / (1 - r^2)
//! ```

use super::plane::PlaneVector;
use crate::error::TentError;

/// An open disc in the plane.
#[derive(Debug, Clone, Copy)]
pub struct Ball {
    pub center: PlaneVector,
    pub radius: f64,
}

impl Ball {
    /// Open membership.
    pub fn contains(&self, y: PlaneVector) -> bool {
        y.dist(self.center) < self.radius
    }
}

/// The Apollonius ball `B_r(x0, x1) = {y : |y - x0| < r |y - x1|}`.
pub fn apollonius_ball(x0: PlaneVector, x1: PlaneVector, r: f64) -> Result<Ball, TentError> {
    if !(0.0 < r && r < 1.0) {
        return Err(TentError::domain(format!("radius ratio must be in (0,1), got {r}")));
    }
    let denom = 1.0 - r * r;
    let center = x0.sub(x1.scale(r * r)).scale(1.0 / denom);
    let radius = r * x0.dist(x1) / denom;
    Ok(Ball { center, radius })
}

/// Direct evaluation of the defining ratio inequality, independent of the
/// center/radius formulas; used to cross-check [`apollonius_ball`].
pub fn apollonius_ratio_membership(y: PlaneVector, x0: PlaneVector, x1: PlaneVector, r: f64) -> bool {
    y.dist(x0) < r * y.dist(x1)
}

/// The monotonicity hypothesis `r |x2 - x1| <= |x2 - x0| - |x1 - x0|`.
///
/// When it holds, `B_r(x0, x1)` is contained in `B_r(x0, x2)`.
pub fn apollonius_inclusion_hypothesis(
    x0: PlaneVector,
    x1: PlaneVector,
    x2: PlaneVector,
    r: f64,
) -> bool {
    r * x2.dist(x1) <= x2.dist(x0) - x1.dist(x0)
}
