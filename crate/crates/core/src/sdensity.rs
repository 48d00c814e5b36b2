//! Distribution of the range-scaled terminal value `a = X / (M - m)` of a
//! standard Brownian motion.
//!
//! The density does not depend on the horizon. Two series forms are provided:
//! the two-sided form summing over all nonzero `n` with Heaviside-signed
//! terms, and the one-sided form obtained by folding negative `n` onto
//! positive `n`. Both converge like `n^-3` term-wise, so a truncation at
//! `n_max = 100` leaves a pointwise error of order `1e-5`; [`s_density`]
//! optionally removes the leading `c / N^2` part of that error.

use std::io::Write;

use crate::error::{Error, Result};
use crate::format::fmt17;
use crate::series::SeriesControl;

/// A value of the s-stat, always in `[-1, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct ScaledValue(f64);

impl ScaledValue {
    pub fn new(a: f64) -> Result<Self> {
        if a.is_finite() && a.abs() <= 1.0 {
            Ok(ScaledValue(a))
        } else {
            Err(Error::domain(format!("scaled value must lie in [-1, 1], got {a}")))
        }
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }
}

impl From<ScaledValue> for f64 {
    fn from(v: ScaledValue) -> f64 {
        v.0
    }
}

/// Requested tail tolerances below this switch on the `c / N^2` extrapolation in [`s_density`].
pub const EXTRAPOLATION_THRESHOLD: f64 = 1e-8;

/// Term `n >= 1` of the one-sided series (the `n >= 2` family is empty at `n = 1`).
#[inline]
fn one_sided_term(a: f64, n: usize) -> f64 {
    let n = n as f64;
    let a2 = a * a;
    let q = 4.0 * n * n - a2;
    let mut t = 16.0 * (1.0 - a) * n.powi(3) * (4.0 * n * n + 3.0 * a2) / q.powi(3)
        - (8.0 * n.powi(3) * (1.0 - a) + 2.0 * n * a2) / (q * q);
    if n >= 2.0 {
        let k = n * n - 1.0;
        let d = 4.0 * n * n - (a - 2.0) * (a - 2.0);
        t -= n * (8.0 * k * (1.0 - a) - 2.0 * a2) / (d * d);
    }
    t
}

#[inline]
fn one_sided_constant(a: f64) -> f64 {
    2.0 / ((4.0 - a) * (4.0 - a))
}

/// One-sided series, truncated at `sc.n_max`. Depends on `|a|` only.
pub fn s_density_one_sided(a: ScaledValue, sc: &SeriesControl) -> f64 {
    let a = a.0.abs();
    let mut s = 0.0;
    for n in 1..=sc.n_max {
        s += one_sided_term(a, n);
    }
    s + one_sided_constant(a)
}

/// Two-sided series over `n` in `[-n_max, n_max] \ {0}`.
///
/// For `n = -1` the second and third families carry the factor `n (n + 1) = 0`
/// and are dropped before their (possibly zero) denominators are formed.
pub fn s_density_two_sided(a: ScaledValue, sc: &SeriesControl) -> f64 {
    let a = a.0.abs();
    let n_max = sc.n_max as i64;
    let mut s = 0.0;
    for n in (-n_max..=n_max).filter(|&n| n != 0) {
        let nf = n as f64;
        let sign_neg = if n < 0 { 1.0 } else { -1.0 }; // 2H(-n) - 1
        let sign_pos = -sign_neg; // 2H(n) - 1
        let d1 = sign_neg * a + 2.0 * nf.abs();
        let mut t = 4.0 * nf * nf * (1.0 - a) / (d1 * d1 * d1);
        let pair = nf * (nf + 1.0);
        if pair != 0.0 {
            let d2 = -a + 2.0 * nf + 2.0;
            let d3 = a + 2.0 * nf;
            t += sign_pos * pair / (d2 * d2) - sign_pos * pair / (d3 * d3);
        }
        s += t;
    }
    s
}

/// One-sided density with an optional tail correction.
///
/// When `sc.tail_tol` is below [`EXTRAPOLATION_THRESHOLD`] and `n_max >= 2`,
/// partial sums at `N` and `N/2` are combined as `S_N + (S_N - S_{N/2}) / 3`,
/// which cancels a tail of the form `c / N^2`. Otherwise this is
/// [`s_density_one_sided`].
pub fn s_density(a: ScaledValue, sc: &SeriesControl) -> f64 {
    if sc.tail_tol >= EXTRAPOLATION_THRESHOLD || sc.n_max < 2 {
        return s_density_one_sided(a, sc);
    }
    let a = a.0.abs();
    let half = sc.n_max / 2;
    let n_full = sc.n_max as f64;
    let n_half = half as f64;
    let mut s = one_sided_constant(a);
    let mut s_half = 0.0;
    for n in 1..=sc.n_max {
        s += one_sided_term(a, n);
        if n == half {
            s_half = s;
        }
    }
    // general weights for N and M = N/2 (M is N/2 rounded down)
    let (w_full, w_half) = (n_full * n_full, n_half * n_half);
    (w_full * s - w_half * s_half) / (w_full - w_half)
}

/// Partial sums of the s-density next to the dominating series used to show convergence.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct ConvergenceReport {
    pub a: f64,
    pub n_max: usize,
    pub partial_sum: f64,
    pub dominating_partial_sum: f64,
    /// `|term(n_max)|` of the one-sided series.
    pub last_term_magnitude: f64,
    /// `0 <= partial_sum <= dominating_partial_sum + slack`.
    pub bounded: bool,
}

/// Slack allowed when comparing the partial sum with the dominating bound.
pub const BOUND_SLACK: f64 = 1e-9;

/// Evaluate `sum_{n>=2} [80 n^3 (1-|a|) a^2 - 2 n a^2 + 2 a^2] / (4 n^2 (4n^2 - a^2)^2) + 2/(4-|a|)^2 + 1`
/// and the s-density partial sum at the same truncation.
pub fn convergence_bound_check(a: ScaledValue, n_max: usize) -> Result<ConvergenceReport> {
    let sc = SeriesControl::with_n_max(n_max)?;
    let partial_sum = s_density_one_sided(a, &sc);
    let x = a.0.abs();
    let a2 = x * x;
    let mut dominating = one_sided_constant(x) + 1.0;
    for n in 2..=n_max {
        let n = n as f64;
        let q = 4.0 * n * n - a2;
        dominating += (80.0 * n.powi(3) * (1.0 - x) * a2 - 2.0 * n * a2 + 2.0 * a2) / (4.0 * n * n * q * q);
    }
    let last_term_magnitude = one_sided_term(x, n_max).abs();
    Ok(ConvergenceReport {
        a: a.0,
        n_max,
        partial_sum,
        dominating_partial_sum: dominating,
        last_term_magnitude,
        bounded: partial_sum >= -BOUND_SLACK && partial_sum <= dominating + BOUND_SLACK,
    })
}

/// Tabulated density and CDF on a uniform grid over `[-1, 1]`.
///
/// Each cell is integrated with Simpson's rule using an extra density value
/// at its midpoint; 0 is always a grid node so the `|a|` kink there never
/// falls inside a cell. Between nodes the CDF is the exact integral of the
/// quadratic through the cell's three density values. The CDF is normalized
/// by the total mass, which is reported in `raw_total`.
#[derive(Debug, Clone)]
pub struct SDensityTable {
    resolution: usize,
    series: SeriesControl,
    grid: Vec<f64>,
    density: Vec<f64>,
    mid_density: Vec<f64>,
    cdf: Vec<f64>,
    raw_total: f64,
}

impl SDensityTable {
    /// Resolution used by reports and the CLI unless overridden.
    pub const DEFAULT_RESOLUTION: usize = 4096;
    /// Smallest resolution accepted by [`s_cdf`] and [`s_quantile`].
    pub const MIN_QUERY_RESOLUTION: usize = 2048;

    /// Build a table with `resolution` cells (must be even and >= 2).
    pub fn new(resolution: usize, sc: &SeriesControl) -> Result<Self> {
        if resolution < 2 || !resolution.is_multiple_of(2) {
            return Err(Error::domain(format!("resolution must be even and >= 2, got {resolution}")));
        }
        let res = resolution as f64;
        let node = |i: usize| (2.0 * i as f64 - res) / res;
        let eval = |a: f64| s_density(ScaledValue(a), sc);
        let grid: Vec<f64> = (0..=resolution).map(node).collect();
        let density: Vec<f64> = grid.iter().map(|&a| eval(a)).collect();
        let mid_density: Vec<f64> = (0..resolution)
            .map(|i| eval((2.0 * i as f64 + 1.0 - res) / res))
            .collect();
        let width = 2.0 / res;
        let mut cdf = Vec::with_capacity(resolution + 1);
        let mut acc = 0.0;
        cdf.push(0.0);
        for i in 0..resolution {
            acc += width / 6.0 * (density[i] + 4.0 * mid_density[i] + density[i + 1]);
            cdf.push(acc);
        }
        let raw_total = acc;
        for c in &mut cdf {
            *c /= raw_total;
        }
        Ok(SDensityTable {
            resolution,
            series: *sc,
            grid,
            density,
            mid_density,
            cdf,
            raw_total,
        })
    }

    /// The default table: 4096 cells, default series control.
    pub fn standard() -> Self {
        Self::new(Self::DEFAULT_RESOLUTION, &SeriesControl::default()).expect("valid default resolution")
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn series(&self) -> &SeriesControl {
        &self.series
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn density(&self) -> &[f64] {
        &self.density
    }

    pub fn cdf_values(&self) -> &[f64] {
        &self.cdf
    }

    /// Simpson integral of the density before normalization.
    pub fn raw_total(&self) -> f64 {
        self.raw_total
    }

    fn cell_of(&self, a: f64) -> usize {
        let pos = (a + 1.0) * self.resolution as f64 / 2.0;
        (pos.floor() as usize).min(self.resolution - 1)
    }

    /// Interpolated CDF at any real `a` (0 below -1, 1 above 1). Accuracy
    /// assumes at least [`Self::MIN_QUERY_RESOLUTION`] cells; [`s_cdf`] enforces that.
    pub fn cdf(&self, a: f64) -> f64 {
        self.cdf_at(a)
    }

    fn cdf_at(&self, a: f64) -> f64 {
        if a <= -1.0 {
            return 0.0;
        }
        if a >= 1.0 {
            return 1.0;
        }
        let k = self.cell_of(a);
        let width = 2.0 / self.resolution as f64;
        let tau = ((a - self.grid[k]) / width).clamp(0.0, 1.0);
        let (t2, t3) = (tau * tau, tau * tau * tau);
        let i0 = 2.0 * t3 / 3.0 - 1.5 * t2 + tau;
        let im = 2.0 * t2 - 4.0 * t3 / 3.0;
        let i1 = 2.0 * t3 / 3.0 - 0.5 * t2;
        let mass = width * (self.density[k] * i0 + self.mid_density[k] * im + self.density[k + 1] * i1);
        (self.cdf[k] + mass / self.raw_total).clamp(0.0, 1.0)
    }

    /// Write the `a,s,cdf` table, one row per grid node.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "a,s,cdf")?;
        for i in 0..=self.resolution {
            writeln!(out, "{},{},{}", fmt17(self.grid[i]), fmt17(self.density[i]), fmt17(self.cdf[i]))?;
        }
        Ok(())
    }

    fn check_queryable(&self) -> Result<()> {
        if self.resolution < Self::MIN_QUERY_RESOLUTION {
            return Err(Error::domain(format!(
                "table resolution {} is below the {} required for CDF queries",
                self.resolution,
                Self::MIN_QUERY_RESOLUTION
            )));
        }
        Ok(())
    }
}

/// `P(s-stat < a)`.
pub fn s_cdf(a: ScaledValue, table: &SDensityTable) -> Result<f64> {
    table.check_queryable()?;
    Ok(table.cdf_at(a.0))
}

/// Tolerance on `a` for [`s_quantile`].
pub const QUANTILE_TOL: f64 = 1e-10;

/// Inverse of [`s_cdf`] by bisection.
pub fn s_quantile(p: f64, table: &SDensityTable) -> Result<ScaledValue> {
    table.check_queryable()?;
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::domain(format!("probability must lie in [0, 1], got {p}")));
    }
    if p == 0.0 {
        return Ok(ScaledValue(-1.0));
    }
    if p == 1.0 {
        return Ok(ScaledValue(1.0));
    }
    // bracket by cell first, then bisect inside it
    let k = table.cdf.partition_point(|&c| c < p).clamp(1, table.resolution);
    let (mut lo, mut hi) = (table.grid[k - 1], table.grid[k]);
    while hi - lo > QUANTILE_TOL {
        let mid = 0.5 * (lo + hi);
        if table.cdf_at(mid) < p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(ScaledValue(0.5 * (lo + hi)))
}

/// `sup_a |a s(a)|` over the table grid; converts a relative perturbation of the
/// range into a bound on the CDF shift.
pub fn max_abs_a_density(table: &SDensityTable) -> f64 {
    table
        .grid
        .iter()
        .zip(&table.density)
        .map(|(a, s)| (a * s).abs())
        .fold(0.0, f64::max)
}
