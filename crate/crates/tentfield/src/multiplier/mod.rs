//! Multiplier specifications, localized Sobolev norms, and the
//! curve-adapted regularity norm.
//!
//! A symbol m on the plane V is admissible for the machinery when all of
//! its roughness hides inside the singular curve: at every point beta off
//! the curve, the rescaled localization m(beta + d(beta) y) Phi(y) must
//! have inhomogeneous Sobolev norm H^s bounded uniformly in beta, for some
//! s > 1. [`spec`] houses the symbol representations; [`sobolev`] houses
//! the localization, the H^s norm over the window's dual lattice, and the
//! sup over Whitney-graded sample points.

pub mod sobolev;
pub mod spec;

pub use sobolev::{
    hormander_norm, hormander_norm_graded, localize, sobolev_norm, whitney_graded_samples,
    HormanderReport, SobolevParams, WindowedSymbol, WINDOW_HALFWIDTH,
};
pub use spec::{builtin, BuiltinParams, MultiplierSpec, Profile1D, SampledMultiplier, Smoothness};
