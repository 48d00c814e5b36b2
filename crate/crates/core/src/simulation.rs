//! Seeded Monte Carlo paths for the Wiener process and AR(1), reduced to
//! their terminal value and running extrema.
//!
//! Path `i` of an ensemble always uses random stream `i` of the ensemble
//! seed, and results are collected in path order, so outputs do not depend
//! on the number of worker threads.

use std::io::Write;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::format::fmt17;
use crate::rng::PathRng;
use crate::sdensity::ScaledValue;

/// `-zeta(1/2) / sqrt(2 pi)`: the maximum of a random walk sampled every `dt`
/// sits this many `sigma sqrt(dt)` below the continuous maximum, to first order.
pub const DISCRETE_EXTREMUM_SHIFT: f64 = 0.582_597_157_939_010_6;

/// Longest AR(1) path allowed for an explosive coefficient (`|rho| > 1`).
pub const MAX_EXPLOSIVE_STEPS: usize = 100_000;

/// First-order expected shortfall of a discretely sampled range.
pub fn discrete_range_bias(sigma: f64, dt: f64) -> f64 {
    2.0 * DISCRETE_EXTREMUM_SHIFT * sigma * dt.sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Process {
    /// `W_{k+1} = W_k + mu dt + sigma sqrt(dt) Z_k` with `dt = t / n_steps`.
    Wiener { mu: f64, sigma: f64, t: f64 },
    /// `W_{k+1} = rho W_k + eps_k` with unit-variance innovations.
    Ar1 { rho: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathSpec {
    pub process: Process,
    pub n_steps: usize,
    pub seed: u64,
}

impl PathSpec {
    pub fn wiener(mu: f64, sigma: f64, t: f64, n_steps: usize, seed: u64) -> Result<Self> {
        let spec = PathSpec {
            process: Process::Wiener { mu, sigma, t },
            n_steps,
            seed,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn ar1(rho: f64, n_steps: usize, seed: u64) -> Result<Self> {
        let spec = PathSpec {
            process: Process::Ar1 { rho },
            n_steps,
            seed,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_steps < 2 {
            return Err(Error::domain(format!("n_steps must be >= 2, got {}", self.n_steps)));
        }
        match self.process {
            Process::Wiener { mu, sigma, t } => {
                if !mu.is_finite() {
                    return Err(Error::domain(format!("mu must be finite, got {mu}")));
                }
                // sigma = 0 is allowed: it produces deterministic (possibly degenerate) paths
                if !(sigma.is_finite() && sigma >= 0.0) {
                    return Err(Error::domain(format!("sigma must be finite and >= 0, got {sigma}")));
                }
                if !(t.is_finite() && t > 0.0) {
                    return Err(Error::domain(format!("t must be finite and > 0, got {t}")));
                }
            }
            Process::Ar1 { rho } => {
                if !rho.is_finite() {
                    return Err(Error::domain(format!("rho must be finite, got {rho}")));
                }
                if rho.abs() > 1.0 && self.n_steps > MAX_EXPLOSIVE_STEPS {
                    return Err(Error::domain(format!(
                        "explosive AR(1) (rho = {rho}) is limited to {MAX_EXPLOSIVE_STEPS} steps"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Time step of a Wiener spec; 1 for AR(1).
    pub fn dt(&self) -> f64 {
        match self.process {
            Process::Wiener { t, .. } => t / self.n_steps as f64,
            Process::Ar1 { .. } => 1.0,
        }
    }
}

/// Terminal value and running extrema of one path (extrema include the start at 0).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathSummary {
    pub terminal: f64,
    pub maximum: f64,
    pub minimum: f64,
    pub range: f64,
}

impl PathSummary {
    pub fn new(terminal: f64, maximum: f64, minimum: f64) -> Result<Self> {
        if !(terminal.is_finite() && maximum.is_finite() && minimum.is_finite()) {
            return Err(Error::domain("path summary values must be finite"));
        }
        if !(minimum <= terminal && terminal <= maximum) {
            return Err(Error::domain(format!(
                "terminal {terminal} is outside [{minimum}, {maximum}]"
            )));
        }
        Ok(PathSummary {
            terminal,
            maximum,
            minimum,
            range: maximum - minimum,
        })
    }
}

/// Simulate path 0 of `spec.seed`.
pub fn simulate_path(spec: &PathSpec) -> Result<PathSummary> {
    simulate_indexed(spec, 0)
}

/// Simulate path `index` of `spec.seed`.
pub fn simulate_indexed(spec: &PathSpec, index: u64) -> Result<PathSummary> {
    spec.validate()?;
    let mut rng = PathRng::new(spec.seed, index);
    let (mut w, mut hi, mut lo) = (0.0f64, 0.0f64, 0.0f64);
    match spec.process {
        Process::Wiener { mu, sigma, .. } => {
            let dt = spec.dt();
            let drift = mu * dt;
            let vol = sigma * dt.sqrt();
            for _ in 0..spec.n_steps {
                w += drift + vol * rng.standard_normal();
                hi = hi.max(w);
                lo = lo.min(w);
            }
        }
        Process::Ar1 { rho } => {
            for _ in 0..spec.n_steps {
                w = rho * w + rng.standard_normal();
                hi = hi.max(w);
                lo = lo.min(w);
            }
        }
    }
    if !w.is_finite() || !hi.is_finite() || !lo.is_finite() {
        return Err(Error::domain(format!("path {index} left the finite range")));
    }
    Ok(PathSummary {
        terminal: w,
        maximum: hi,
        minimum: lo,
        range: hi - lo,
    })
}

/// Terminal value divided by range.
pub fn s_stat(summary: &PathSummary) -> Result<ScaledValue> {
    if !(summary.range > 0.0) {
        return Err(Error::DegeneratePath);
    }
    ScaledValue::new(summary.terminal / summary.range)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnsembleSpec {
    pub path: PathSpec,
    pub n_paths: usize,
}

impl EnsembleSpec {
    pub fn new(path: PathSpec, n_paths: usize) -> Result<Self> {
        if n_paths < 1 {
            return Err(Error::domain("n_paths must be >= 1"));
        }
        path.validate()?;
        Ok(EnsembleSpec { path, n_paths })
    }
}

/// All path summaries of an ensemble, in path order.
pub fn simulate_ensemble(spec: &EnsembleSpec) -> Result<Vec<PathSummary>> {
    spec.path.validate()?;
    (0..spec.n_paths as u64)
        .into_par_iter()
        .map(|i| simulate_indexed(&spec.path, i))
        .collect()
}

/// s-stats of an ensemble with the number of zero-range paths that were skipped.
#[derive(Debug, Clone, PartialEq)]
pub struct SStatSample {
    /// In path order, each in `[-1, 1]`.
    pub values: Vec<f64>,
    pub degenerate_paths: usize,
}

pub fn s_stats_of(summaries: &[PathSummary]) -> SStatSample {
    let mut values = Vec::with_capacity(summaries.len());
    let mut degenerate_paths = 0;
    for s in summaries {
        match s_stat(s) {
            Ok(v) => values.push(v.get()),
            Err(_) => degenerate_paths += 1,
        }
    }
    SStatSample { values, degenerate_paths }
}

pub fn sample_s_stats(spec: &EnsembleSpec) -> Result<SStatSample> {
    Ok(s_stats_of(&simulate_ensemble(spec)?))
}

/// Path counts of `(range, terminal)` on a rectangular window.
#[derive(Debug, Clone, PartialEq)]
pub struct JointHistogram {
    pub r_edges: Vec<f64>,
    pub x_edges: Vec<f64>,
    /// Row-major by range bin: `counts[i * x_bins + j]`.
    pub counts: Vec<u64>,
    pub out_of_window: u64,
    pub n_paths: u64,
}

impl JointHistogram {
    pub fn r_bins(&self) -> usize {
        self.r_edges.len() - 1
    }

    pub fn x_bins(&self) -> usize {
        self.x_edges.len() - 1
    }

    /// Fraction of paths falling in bin `(i, j)`.
    pub fn mass(&self, i: usize, j: usize) -> f64 {
        self.counts[i * self.x_bins() + j] as f64 / self.n_paths as f64
    }

    pub fn out_of_window_mass(&self) -> f64 {
        self.out_of_window as f64 / self.n_paths as f64
    }
}

/// Histogram of `(range, terminal)` over `[0, r_hi] x [-x_hi, x_hi]`.
pub fn mc_joint_histogram(
    spec: &EnsembleSpec,
    r_bins: usize,
    x_bins: usize,
    r_hi: f64,
    x_hi: f64,
) -> Result<JointHistogram> {
    if !matches!(spec.path.process, Process::Wiener { .. }) {
        return Err(Error::domain("joint histogram requires a Wiener process"));
    }
    if r_bins < 1 || x_bins < 1 {
        return Err(Error::domain("histogram needs at least one bin per axis"));
    }
    if !(r_hi > 0.0 && x_hi > 0.0 && r_hi.is_finite() && x_hi.is_finite()) {
        return Err(Error::domain("histogram window must be finite and positive"));
    }
    let summaries = simulate_ensemble(spec)?;
    let r_edges: Vec<f64> = (0..=r_bins).map(|i| r_hi * i as f64 / r_bins as f64).collect();
    let x_edges: Vec<f64> = (0..=x_bins)
        .map(|j| -x_hi + 2.0 * x_hi * j as f64 / x_bins as f64)
        .collect();
    let mut counts = vec![0u64; r_bins * x_bins];
    let mut out_of_window = 0u64;
    for s in &summaries {
        let ri = (s.range / r_hi * r_bins as f64).floor();
        let xi = ((s.terminal + x_hi) / (2.0 * x_hi) * x_bins as f64).floor();
        if ri >= 0.0 && ri < r_bins as f64 && xi >= 0.0 && xi < x_bins as f64 {
            counts[ri as usize * x_bins + xi as usize] += 1;
        } else {
            out_of_window += 1;
        }
    }
    Ok(JointHistogram {
        r_edges,
        x_edges,
        counts,
        out_of_window,
        n_paths: summaries.len() as u64,
    })
}

/// Write `path_index,terminal,maximum,minimum,range,s_stat`; `s_stat` is empty for zero-range paths.
pub fn write_ensemble_csv<W: Write>(summaries: &[PathSummary], mut out: W) -> Result<()> {
    writeln!(out, "path_index,terminal,maximum,minimum,range,s_stat")?;
    for (i, s) in summaries.iter().enumerate() {
        let stat = s_stat(s).map(|v| fmt17(v.get())).unwrap_or_default();
        writeln!(
            out,
            "{i},{},{},{},{},{stat}",
            fmt17(s.terminal),
            fmt17(s.maximum),
            fmt17(s.minimum),
            fmt17(s.range)
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vanishing_volatility_follows_the_drift_line() {
        let spec = PathSpec::wiener(1.0, 1e-12, 1.0, 1000, 5).unwrap();
        let s = simulate_path(&spec).unwrap();
        assert!((s.terminal - 1.0).abs() < 1e-9);
        assert!((s.maximum - 1.0).abs() < 1e-9);
        assert_eq!(s.minimum, 0.0);
        assert!((s.range - 1.0).abs() < 1e-9);
        assert!((s_stat(&s).unwrap().get() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn same_seed_same_path() {
        let spec = PathSpec::ar1(0.99, 500, 11).unwrap();
        assert_eq!(simulate_path(&spec).unwrap(), simulate_path(&spec).unwrap());
        let other = PathSpec::ar1(0.99, 500, 12).unwrap();
        assert_ne!(simulate_path(&spec).unwrap(), simulate_path(&other).unwrap());
    }

    #[test]
    fn spec_validation() {
        assert!(PathSpec::wiener(0.0, 1.0, 1.0, 1, 0).is_err());
        assert!(PathSpec::wiener(f64::NAN, 1.0, 1.0, 10, 0).is_err());
        assert!(PathSpec::wiener(0.0, -1.0, 1.0, 10, 0).is_err());
        assert!(PathSpec::wiener(0.0, 1.0, 0.0, 10, 0).is_err());
        assert!(PathSpec::ar1(f64::INFINITY, 10, 0).is_err());
        assert!(PathSpec::ar1(1.0005, MAX_EXPLOSIVE_STEPS + 1, 0).is_err());
        assert!(PathSpec::ar1(1.0005, 1500, 0).is_ok());
        let p = PathSpec::ar1(1.0, 10, 0).unwrap();
        assert!(EnsembleSpec::new(p, 0).is_err());
    }

    #[test]
    fn explosive_ar1_overflow_is_reported() {
        let spec = PathSpec::ar1(2.0, 5000, 1).unwrap();
        assert!(simulate_path(&spec).is_err());
    }

    #[test]
    fn s_stat_arithmetic() {
        let s = PathSummary::new(1.0, 1.0, 0.0).unwrap();
        assert_eq!(s_stat(&s).unwrap().get(), 1.0);
        let s = PathSummary::new(0.0, 0.5, -0.5).unwrap();
        assert_eq!(s_stat(&s).unwrap().get(), 0.0);
        let s = PathSummary::new(-0.3, 0.2, -0.8).unwrap();
        assert!((s_stat(&s).unwrap().get() + 0.3).abs() < 1e-15);
        let flat = PathSummary::new(0.0, 0.0, 0.0).unwrap();
        assert!(matches!(s_stat(&flat), Err(Error::DegeneratePath)));
        assert!(PathSummary::new(2.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn degenerate_paths_are_counted() {
        let spec = EnsembleSpec::new(PathSpec::wiener(0.0, 0.0, 1.0, 10, 0).unwrap(), 25).unwrap();
        let sample = sample_s_stats(&spec).unwrap();
        assert!(sample.values.is_empty());
        assert_eq!(sample.degenerate_paths, 25);
    }

    #[test]
    fn summaries_respect_invariants() {
        let spec = EnsembleSpec::new(PathSpec::wiener(0.3, 1.4, 2.0, 200, 9).unwrap(), 2000).unwrap();
        for s in simulate_ensemble(&spec).unwrap() {
            assert!(s.minimum <= s.terminal && s.terminal <= s.maximum);
            assert!(s.minimum <= 0.0 && s.maximum >= 0.0);
            assert!(s.range >= s.terminal.abs());
            let v = s_stat(&s).unwrap().get();
            assert!((-1.0..=1.0).contains(&v));
        }
    }

    #[test]
    fn ensemble_is_independent_of_thread_count() {
        let spec = EnsembleSpec::new(PathSpec::wiener(0.0, 1.0, 1.0, 300, 77).unwrap(), 3000).unwrap();
        let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let four = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
        let a = one.install(|| simulate_ensemble(&spec).unwrap());
        let b = four.install(|| simulate_ensemble(&spec).unwrap());
        assert_eq!(a, b);
        // path i of an ensemble is simulate_indexed(i)
        assert_eq!(a[17], simulate_indexed(&spec.path, 17).unwrap());
    }

    #[test]
    fn histogram_counting() {
        let spec = EnsembleSpec::new(PathSpec::wiener(0.0, 1.0, 1.0, 200, 3).unwrap(), 20_000).unwrap();
        let h = mc_joint_histogram(&spec, 20, 20, 3.0, 1.5).unwrap();
        let inside: u64 = h.counts.iter().sum();
        assert_eq!(inside + h.out_of_window, h.n_paths);
        let total: f64 = (0..20).flat_map(|i| (0..20).map(move |j| (i, j))).map(|(i, j)| h.mass(i, j)).sum();
        assert!((total + h.out_of_window_mass() - 1.0).abs() < 1e-12);
        // bins entirely in |x| > r are empty
        for i in 0..20 {
            for j in 0..20 {
                let r_top = h.r_edges[i + 1];
                let (x_lo, x_hi) = (h.x_edges[j], h.x_edges[j + 1]);
                if x_lo >= r_top || x_hi <= -r_top {
                    assert_eq!(h.counts[i * 20 + j], 0);
                }
            }
        }
        let ar = EnsembleSpec::new(PathSpec::ar1(1.0, 10, 0).unwrap(), 10).unwrap();
        assert!(mc_joint_histogram(&ar, 2, 2, 1.0, 1.0).is_err());
    }

    #[test]
    fn csv_rows() {
        let rows = [PathSummary::new(0.5, 1.0, 0.0).unwrap(), PathSummary::new(0.0, 0.0, 0.0).unwrap()];
        let mut buf = Vec::new();
        write_ensemble_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines[0], "path_index,terminal,maximum,minimum,range,s_stat");
        assert!(lines[1].starts_with("0,5.0000000000000000e-1,"));
        assert!(lines[1].ends_with(",5.0000000000000000e-1"));
        assert!(lines[2].ends_with(","));
    }
}
