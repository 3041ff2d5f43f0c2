//! Numerical verification toolkit for trilinear forms whose multiplier is
//! singular along a Lipschitz curve in frequency space.
//!
//! Everything happens on the plane `V = {xi : xi_1 + xi_2 + xi_3 = 0}` inside
//! `R^3`. A multiplier `m` on `V` is allowed to be rough along a curve `Gamma`
//! that is uniformly transverse to the three coordinate directions, and the
//! toolkit turns the structural ingredients of the associated boundedness
//! machinery into executable, testable numerics:
//!
//! * [`geometry`]: the plane, derived small constants, singular curves,
//!   Whitney and cone regions, Apollonius balls, tent regions.
//! * [`bumps`]: the smooth bump hierarchy, the Whitney partition of unity on
//!   `V \ Gamma`, grid measures, wave-packet embeddings, and size functionals.
//! * [`multiplier`]: multiplier specifications, localized Sobolev norms, and
//!   the curve-adapted regularity norm taken over Whitney-graded windows.
//! * [`modelform`]: localized kernels, annulus decompositions, the model-form
//!   quadrature, direct trilinear evaluation, and tent estimate ratios.
//! * [`selection`]: the sup-norm and square-function tent selection
//!   algorithms, their combination, the stopping-time iteration, and exact
//!   verification of the selection postconditions.
//!
//! Conventions used throughout:
//!
//! * Fourier transform with kernel `e^{-2 pi i x.xi}`.
//! * `V` carries the coordinates induced by the orthonormal basis
//!   `u1 = (1,-1,0)/sqrt(2)`, `u2 = (1,1,-2)/sqrt(6)`; in these coordinates
//!   planar Lebesgue measure equals two dimensional Hausdorff measure, and
//!   the factor `sqrt(3)` shows up only when integrating over `V`
//!   parametrized by `(xi_1, xi_2)`.
//! * All distances are Euclidean distances of `R^3` restricted to `V`.

pub mod bumps;
pub mod error;
pub mod geometry;
pub mod io;
pub mod modelform;
pub mod multiplier;
pub mod selection;

mod fftutil;
mod quad;

#[cfg(test)]
mod testutil;

pub use error::TentError;

/// Doc-tested snippets from the companion guide in `book/`.
///
/// Each chapter is included verbatim so `cargo test --doc` executes every
/// runnable snippet in the guide, keeping prose and library in sync.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/plane-and-curves.md")]
    mod plane_and_curves {}
    #[doc = include_str!("../../../book/src/constants.md")]
    mod constants {}
    #[doc = include_str!("../../../book/src/bumps-and-packets.md")]
    mod bumps_and_packets {}
    #[doc = include_str!("../../../book/src/multipliers-and-sobolev.md")]
    mod multipliers_and_sobolev {}
    #[doc = include_str!("../../../book/src/kernels-and-model-form.md")]
    mod kernels_and_model_form {}
    #[doc = include_str!("../../../book/src/sizes-and-tents.md")]
    mod sizes_and_tents {}
    #[doc = include_str!("../../../book/src/selection.md")]
    mod selection_ch {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
