//! Geometry of the sum-zero plane: coordinates, derived constants, singular
//! curves, Whitney and cone regions, Apollonius balls, and tent regions.

mod apollonius;
mod constants;
mod curve;
mod plane;
mod regions;

pub use apollonius::{apollonius_ball, apollonius_inclusion_hypothesis, Ball};
pub use constants::ConstantPack;
pub use curve::{CurveMode, NearestPoint, SingularCurve, CONE_SLACK};
pub use plane::{project_to_plane, Axis, PlaneBasis, PlaneVector};
pub use regions::{
    cone_membership, half_whitney_membership, tent_region_membership, whitney_membership,
    HalfSide, Interval, TentRegion,
};
