//! Cone, Whitney, and tent region membership predicates.
//!
//! All inequalities are evaluated exactly as written, with closed or strict
//! comparisons as in the defining formulas; no tolerance slack is applied.

use super::constants::ConstantPack;
use super::curve::SingularCurve;
use super::plane::{Axis, PlaneVector};
use serde::{Deserialize, Serialize};

/// A closed interval given by center and length.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub center: f64,
    pub length: f64,
}

impl Interval {
    pub fn new(center: f64, length: f64) -> Self {
        Interval { center, length }
    }

    pub fn lo(&self) -> f64 {
        self.center - self.length / 2.0
    }

    pub fn hi(&self) -> f64 {
        self.center + self.length / 2.0
    }

    /// Closed containment `alpha in [lo, hi]`.
    pub fn contains(&self, alpha: f64) -> bool {
        alpha >= self.lo() && alpha <= self.hi()
    }

    /// Concentric dilation `k I`.
    pub fn dilate(&self, k: f64) -> Interval {
        Interval {
            center: self.center,
            length: self.length * k,
        }
    }

    /// Closed-interval intersection test; touching endpoints intersect.
    pub fn intersects(&self, other: &Interval) -> bool {
        self.lo() <= other.hi() && other.lo() <= self.hi()
    }

    /// Containment of `other` in `self` as closed sets.
    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lo() <= other.lo() && other.hi() <= self.hi()
    }
}

/// Which open half of the Whitney shell, split by the `j`-th coordinate
/// relative to the tent tip.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HalfSide {
    Below,
    Above,
}

/// Membership in the closed cone `U_gamma^j`:
/// `|<beta - gamma, e_j>| <= delta2 |beta - gamma|`.
pub fn cone_membership(
    beta: PlaneVector,
    gamma: PlaneVector,
    j: Axis,
    pack: &ConstantPack,
) -> bool {
    let d = beta.sub(gamma);
    d.coord(j).abs() <= pack.delta2 * d.norm()
}

/// Membership in the Whitney shell `W_{gamma,t}`:
/// `t <= |beta - gamma| <= (1/delta1) d_Gamma(beta)`.
pub fn whitney_membership(
    beta: PlaneVector,
    gamma: PlaneVector,
    t: f64,
    curve: &SingularCurve,
    pack: &ConstantPack,
) -> bool {
    let r = beta.dist(gamma);
    t <= r && r <= curve.dist(beta) / pack.delta1
}

/// Membership in one open half of `W_{gamma,t} \ U_gamma^j`, split by the
/// sign of `beta_j - gamma_j`. Points with `beta_j = gamma_j` lie inside the
/// cone (the coordinate difference vanishes), so the two halves partition
/// the set exactly.
pub fn half_whitney_membership(
    beta: PlaneVector,
    gamma: PlaneVector,
    t: f64,
    side: HalfSide,
    curve: &SingularCurve,
    pack: &ConstantPack,
) -> bool {
    let j = curve.cone_index();
    if cone_membership(beta, gamma, j, pack) {
        return false;
    }
    if !whitney_membership(beta, gamma, t, curve, pack) {
        return false;
    }
    match side {
        HalfSide::Below => beta.coord(j) < gamma.coord(j),
        HalfSide::Above => beta.coord(j) > gamma.coord(j),
    }
}

/// A tent: a time interval together with a curve point, standing for the
/// region `I x W_{gamma, 1/|I|}`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct TentRegion {
    pub interval: Interval,
    pub gamma: PlaneVector,
}

impl TentRegion {
    pub fn new(interval: Interval, gamma: PlaneVector) -> Self {
        TentRegion { interval, gamma }
    }

    /// Whitney parameter of the tent, `1/|I|`.
    pub fn whitney_t(&self) -> f64 {
        1.0 / self.interval.length
    }
}

/// Membership of `(alpha, beta)` in the tent region.
///
/// With `lift = None` the pair lives on `R x V` and `alpha in I` is required
/// directly. With `lift = Some(i)` the pair is read as the `i`-th coordinate
/// of a lifted triple in `R^3 x V`, constrained in that coordinate only; the
/// predicate on the given data is the same, the parameter documents which
/// projection the caller is testing.
pub fn tent_region_membership(
    alpha: f64,
    beta: PlaneVector,
    tent: &TentRegion,
    lift: Option<Axis>,
    curve: &SingularCurve,
    pack: &ConstantPack,
) -> bool {
    let _ = lift;
    tent.interval.contains(alpha)
        && whitney_membership(beta, tent.gamma, tent.whitney_t(), curve, pack)
}
