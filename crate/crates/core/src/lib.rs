//! Densities of the extremes, range and range-scaled terminal value of
//! Brownian motion, with a seeded Monte Carlo oracle and an OHLC s-stat
//! goodness-of-fit layer.
//!
//! The s-stat of a path is its terminal value divided by its range
//! (`max - min`); for Brownian motion its distribution is bimodal, symmetric
//! and independent of the horizon.

// `!(a > b)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod empirical;
pub mod error;
pub mod format;
pub mod kernels;
pub mod quad;
pub mod rng;
pub mod sdensity;
pub mod series;
pub mod simulation;

pub use analytic::{
    joint_range_terminal_density, psi_kernel, trivariate_density, trivariate_density_douady_form, Barriers,
    ProcessParams,
};
pub use empirical::{
    bar_s_stat, ingest_ohlc_csv, ks_test, ks_two_sample, qq_points, qq_two_sample, structural_quality_score, OhlcBar,
    SampleReport,
};
pub use error::{Error, Result};
pub use kernels::TimeScale;
pub use sdensity::{
    convergence_bound_check, s_cdf, s_density, s_density_one_sided, s_density_two_sided, s_quantile, SDensityTable,
    ScaledValue,
};
pub use series::SeriesControl;
pub use simulation::{
    mc_joint_histogram, s_stat, sample_s_stats, simulate_ensemble, simulate_path, EnsembleSpec, PathSpec,
    PathSummary, Process,
};
