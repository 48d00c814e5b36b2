//! Empirical side of the s-stat: OHLC bars, goodness of fit against the
//! theoretical distribution, and QQ point sets.

pub mod ks;
pub mod ohlc;
pub mod qq;
pub mod report;

pub use ks::{kolmogorov_survival, ks_test, ks_two_sample, KsOutcome};
pub use ohlc::{
    bar_s_stat, compress_wicks, ingest_ohlc_csv, synthesize_bars, write_ohlc_csv, Ingested, OhlcBar,
    RejectReason, RowDiagnostic, SyntheticBars,
};
pub use qq::{empirical_quantile, qq_points, qq_two_sample};
pub use report::{structural_quality_score, SampleReport};
