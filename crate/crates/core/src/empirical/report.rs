//! The structural data-quality report: s-stats of a sample tested against
//! the theoretical distribution, with QQ points and rejection bookkeeping.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::empirical::ks::{ks_test, ks_two_sample, KsOutcome, ASYMPTOTIC_MIN, MIN_SAMPLE};
use crate::empirical::ohlc::{bar_s_stat, OhlcBar, RejectReason, RowDiagnostic};
use crate::empirical::qq::{qq_points, qq_two_sample, QUANTILE_CONVENTION};
use crate::error::{Error, Result};
use crate::format::to_json_string;
use crate::sdensity::{s_quantile, SDensityTable};

/// QQ levels attached to every report unless a caller overrides them.
pub const DEFAULT_QQ_LEVELS: usize = 99;

const INTERPRETATION: &str = "Highs that are too low and lows that are too high shrink the \
bar range, which pushes s-stats toward -1 and +1: the upper QQ tail rises above the diagonal, \
the lower tail falls below it, and mass near 0 thins out. The opposite bend (tails inside the \
diagonal) points to ranges that are too wide or to mean-reverting bar dynamics.";

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Rejections {
    pub total: u64,
    pub by_reason: BTreeMap<RejectReason, u64>,
}

impl Rejections {
    pub fn add(&mut self, reason: RejectReason) {
        self.total += 1;
        *self.by_reason.entry(reason).or_default() += 1;
    }

    pub fn from_diagnostics(diagnostics: &[RowDiagnostic]) -> Self {
        let mut r = Rejections::default();
        for d in diagnostics {
            r.add(d.reason);
        }
        r
    }

    pub fn merge(&mut self, other: &Rejections) {
        for (&reason, &count) in &other.by_reason {
            *self.by_reason.entry(reason).or_default() += count;
        }
        self.total += other.total;
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportMetadata {
    pub reference: String,
    pub quantile_convention: &'static str,
    pub reference_table_resolution: Option<usize>,
    pub qq_levels: usize,
    pub p_value_method: String,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleReport {
    pub n: usize,
    pub ks_stat: f64,
    pub p_value: f64,
    pub rejected_bars: Rejections,
    /// `[reference quantile, sample quantile]` by increasing level.
    pub qq_points: Vec<[f64; 2]>,
    pub metadata: ReportMetadata,
}

fn p_value_method(ks: &KsOutcome) -> String {
    if ks.asymptotic {
        "asymptotic Kolmogorov distribution".to_string()
    } else {
        format!("asymptotic Kolmogorov distribution (effective n < {ASYMPTOTIC_MIN}: conservative, no exact small-sample table)")
    }
}

impl SampleReport {
    /// Test `sample` against the s-distribution tabulated in `table`.
    pub fn against_s_density(sample: &[f64], table: &SDensityTable, qq_levels: usize) -> Result<Self> {
        let ks = ks_test(sample, |x| table.cdf(x))?;
        let qq = qq_points(sample, |p| Ok(s_quantile(p, table)?.get()), qq_levels)?;
        Ok(SampleReport {
            n: ks.n,
            ks_stat: ks.statistic,
            p_value: ks.p_value,
            rejected_bars: Rejections::default(),
            qq_points: qq.into_iter().map(|(x, y)| [x, y]).collect(),
            metadata: ReportMetadata {
                reference: "s-density".to_string(),
                quantile_convention: QUANTILE_CONVENTION,
                reference_table_resolution: Some(table.resolution()),
                qq_levels,
                p_value_method: p_value_method(&ks),
                notes: Vec::new(),
            },
        })
    }

    /// Two-sample comparison of `sample` with `reference`.
    pub fn against_sample(sample: &[f64], reference: &[f64], qq_levels: usize) -> Result<Self> {
        let ks = ks_two_sample(sample, reference)?;
        let qq = qq_two_sample(sample, reference, qq_levels)?;
        Ok(SampleReport {
            n: ks.n,
            ks_stat: ks.statistic,
            p_value: ks.p_value,
            rejected_bars: Rejections::default(),
            qq_points: qq.into_iter().map(|(x, y)| [x, y]).collect(),
            metadata: ReportMetadata {
                reference: format!("sample (n = {})", reference.len()),
                quantile_convention: QUANTILE_CONVENTION,
                reference_table_resolution: None,
                qq_levels,
                p_value_method: p_value_method(&ks),
                notes: Vec::new(),
            },
        })
    }

    pub fn to_json(&self) -> Result<String> {
        to_json_string(self).map_err(|e| Error::Format(e.to_string()))
    }
}

/// s-stats of `bars` tested against the theoretical distribution.
///
/// Zero-range bars are counted under `ZERO_RANGE` and left out of the sample.
pub fn structural_quality_score(bars: &[OhlcBar], table: &SDensityTable) -> Result<SampleReport> {
    let mut rejected = Rejections::default();
    let mut sample = Vec::with_capacity(bars.len());
    for bar in bars {
        match bar_s_stat(bar) {
            Ok(v) => sample.push(v.get()),
            Err(_) => rejected.add(RejectReason::ZeroRange),
        }
    }
    if sample.len() < MIN_SAMPLE {
        return Err(Error::InsufficientSample {
            got: sample.len(),
            min: MIN_SAMPLE,
        });
    }
    let mut report = SampleReport::against_s_density(&sample, table, DEFAULT_QQ_LEVELS)?;
    report.rejected_bars = rejected;
    report.metadata.notes.push(
        "s-stat of a bar = (ln close - ln open) / (ln high - ln low); simulated paths use raw levels".to_string(),
    );
    report.metadata.notes.push(INTERPRETATION.to_string());
    Ok(report)
}
