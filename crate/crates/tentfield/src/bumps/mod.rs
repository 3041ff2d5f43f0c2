//! Smooth bump hierarchy, adapted partitions of unity, grids and measures,
//! wave-packet embeddings, and size functionals.
//!
//! The hierarchy starts from one normalized bump `eta` on `(-1, 1)` and a
//! mollified plateau profile `etatilde`; everything downstream (plane
//! windows `chi`, frequency windows `phihat`, spatial packets `phi`) is a
//! rescaling of those two, so plateau and support radii are exact by
//! construction. On top of the profiles sit:
//!
//! * [`grid`]: periodic alpha grids, plane cell grids, and the Whitney
//!   measure `d beta / d(beta)^2` restricted to grid cells.
//! * [`partition`]: the normalizer `X_Gamma` and normalized windows forming
//!   the partition of unity away from the curve.
//! * [`field`]: the embedding `F(alpha, beta)` of a signal into the
//!   curve-adapted phase plane, with its spectral form.
//! * [`wavepacket`]: explicit packets whose bilinear pairing against the
//!   signal reproduces the embedded field.
//! * [`size`]: local and global tent size functionals built from the
//!   embedded field over Whitney shells.

pub mod field;
pub mod grid;
pub mod partition;
pub mod profile;
pub mod size;
pub mod wavepacket;

pub use field::{embed, Embedding, Field};
pub use grid::{AlphaGrid, GridMeasure, Mask, VGrid};
pub use partition::{
    normalized_window, partition_normalizer, partition_normalizer_detailed, tabulate_normalizer,
    NormalizerModel, NormalizerValue, PartitionWeights,
};
pub use profile::{build_bumps, eta_density, eta_tilde_value, plane_window, BumpProfile};
pub use size::{global_size, local_size, whitney_shell_l2, SizeParts, TentLattice};
pub use wavepacket::{l1_norm, pair_bilinear, wave_packet};
