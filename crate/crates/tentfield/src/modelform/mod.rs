//! The localized kernel, the trilinear form and its model realization,
//! and the tent estimate.
//!
//! The chain runs: the partition of unity splits a symbol into windowed
//! pieces `m chitilde_beta`; each piece transforms into a kernel slice
//! `K(alpha, beta)`, constant along diagonal fibers and subject to the
//! scale-free Sobolev condition ([`kernel`]); pairing the slices with
//! embedded fields reproduces the trilinear form through a second,
//! independent quadrature path ([`trilinear`]); and restricting the
//! absolute pairing to one tent, resolved over dyadic annuli of the
//! fiber, yields the estimate justifying the selection machinery
//! ([`tent`]).

pub mod kernel;
pub mod tent;
pub mod trilinear;

pub use kernel::{
    annulus_index, annulus_of_radius, kernel_condition_ratio, kernel_from_multiplier,
    product_active_cells, window_mass_quadrature, AnnulusPartition, KernelField, KernelParams,
    KernelSlice,
};
pub use tent::{tent_estimate_ratio, TentEstimateReport, TentRegion};
pub use trilinear::{model_form_evaluate, trilinear_direct, ModelFormParams};
