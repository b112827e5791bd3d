#![forbid(unsafe_code)]

//! Desk-scale tempered ultrafunction calculus.
//!
//! The non-Archimedean construction is surrogated by a finite ladder of
//! levels. Level n carries a lattice of 2n^2 points with spacing
//! sqrt(pi)/n over the half-width n*sqrt(pi), the span of the lattice
//! waves exp(ikx), delta kernels that reproduce point values, a unitary
//! hyperfinite Fourier transform that exchanges the wave and kernel bases,
//! and the orthogonal projection of slowly increasing functions and
//! tempered distributions (given as D^m f) onto the level space. The
//! hyperreal layer tracks families of values across the ladder: pointwise
//! arithmetic, growth classification, and standard-part extraction.
//!
//! Start with the runnable examples (`cargo run --example delta_kernels`,
//! `--example fourier_unitarity`, ...) or the `ultrafn` batch binary.

pub mod cli;
pub mod delta;
pub mod error;
mod fft;
pub mod expr;
pub mod fourier;
pub mod grid;
pub mod levels;
pub mod projection;
pub mod verify;
pub mod vspace;

pub use error::{ExprError, UfError, UfResult};
pub use grid::{hyperfinite_sum, sigma_grid, GridKind, GridParams, HyperfiniteFamily, SigmaGrid};
pub use levels::{
    classify_growth, hyper_add, hyper_div, hyper_mul, hyper_sub, infinitely_close, shadow,
    shadow_extrapolated, GrowthClass, GrowthTag, HyperScalar, LevelLadder, ShadowResult,
    ShadowValue,
};
pub use vspace::{
    exp_wave, exp_wave_index, grid_pow, grid_sqrt, pointwise_product, position_op,
    ExtendedElement, GridSamples, LevelElement, TrigElement, UltraFunction,
};

pub use delta::{delta, delta_at_index, delta_off_grid, from_samples, to_samples};
pub use fourier::{
    check_intertwining, fourier, fourier_samples, fourier_samples_direct, inverse_fourier,
    FourierPlan, IntertwiningReport,
};
pub use projection::{
    catalog, distributional_fourier, integral_check, pair, project_distribution,
    project_function, trig_coefficients, DistributionSpec, IntegralCheck, ProjWarning,
    QuadratureConfig, SlowFunction,
};
