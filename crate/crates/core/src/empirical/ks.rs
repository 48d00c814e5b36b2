//! One- and two-sample Kolmogorov-Smirnov tests with asymptotic p-values.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Smallest sample accepted by the tests.
pub const MIN_SAMPLE: usize = 8;

/// Below this effective size the asymptotic p-value is flagged as conservative.
pub const ASYMPTOTIC_MIN: usize = 35;

const SERIES_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct KsOutcome {
    /// Size of the (first) sample.
    pub n: usize,
    /// Size of the second sample for two-sample tests.
    pub m: Option<usize>,
    pub statistic: f64,
    pub p_value: f64,
    /// False when the effective size is below [`ASYMPTOTIC_MIN`].
    pub asymptotic: bool,
}

impl KsOutcome {
    pub fn rejects_at(&self, alpha: f64) -> bool {
        self.p_value < alpha
    }
}

/// `P(K > lambda)` for the Kolmogorov distribution.
///
/// Uses the alternating series `2 sum (-1)^(k-1) exp(-2 k^2 lambda^2)` for
/// `lambda >= 1.18` and the Jacobi-transformed series for smaller `lambda`,
/// where the alternating one converges slowly.
pub fn kolmogorov_survival(lambda: f64) -> f64 {
    if lambda.is_nan() {
        return f64::NAN;
    }
    if lambda <= 0.0 {
        return 1.0;
    }
    if lambda < 1.18 {
        let c = -PI * PI / (8.0 * lambda * lambda);
        let mut sum = 0.0;
        for k in 1..=100 {
            let j = (2 * k - 1) as f64;
            let term = (c * j * j).exp();
            sum += term;
            if term < SERIES_EPS {
                break;
            }
        }
        (1.0 - (2.0 * PI).sqrt() / lambda * sum).clamp(0.0, 1.0)
    } else {
        let mut sum = 0.0;
        let mut sign = 1.0;
        for k in 1..=100 {
            let kf = k as f64;
            let term = (-2.0 * kf * kf * lambda * lambda).exp();
            sum += sign * term;
            if term < SERIES_EPS {
                break;
            }
            sign = -sign;
        }
        (2.0 * sum).clamp(0.0, 1.0)
    }
}

fn sorted_finite(sample: &[f64]) -> Result<Vec<f64>> {
    if let Some(bad) = sample.iter().find(|x| !x.is_finite()) {
        return Err(Error::domain(format!("sample contains a non-finite value ({bad})")));
    }
    let mut v = sample.to_vec();
    v.sort_by(f64::total_cmp);
    Ok(v)
}

/// Test `sample` against a continuous reference CDF.
pub fn ks_test<F: Fn(f64) -> f64>(sample: &[f64], reference_cdf: F) -> Result<KsOutcome> {
    let n = sample.len();
    if n < MIN_SAMPLE {
        return Err(Error::InsufficientSample { got: n, min: MIN_SAMPLE });
    }
    let sorted = sorted_finite(sample)?;
    let nf = n as f64;
    let mut d = 0.0f64;
    for (i, &x) in sorted.iter().enumerate() {
        let f = reference_cdf(x);
        let above = (i + 1) as f64 / nf - f;
        let below = f - i as f64 / nf;
        d = d.max(above.abs()).max(below.abs());
    }
    Ok(KsOutcome {
        n,
        m: None,
        statistic: d,
        p_value: kolmogorov_survival(nf.sqrt() * d),
        asymptotic: n >= ASYMPTOTIC_MIN,
    })
}

/// Two-sample test of `a` against `b`.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<KsOutcome> {
    for s in [a, b] {
        if s.len() < MIN_SAMPLE {
            return Err(Error::InsufficientSample {
                got: s.len(),
                min: MIN_SAMPLE,
            });
        }
    }
    let (xa, xb) = (sorted_finite(a)?, sorted_finite(b)?);
    let (n, m) = (xa.len(), xb.len());
    let (nf, mf) = (n as f64, m as f64);
    let (mut i, mut j) = (0, 0);
    let mut d = 0.0f64;
    while i < n && j < m {
        // step past every copy of the smaller value in both samples
        let v = xa[i].min(xb[j]);
        while i < n && xa[i] <= v {
            i += 1;
        }
        while j < m && xb[j] <= v {
            j += 1;
        }
        d = d.max((i as f64 / nf - j as f64 / mf).abs());
    }
    let effective = nf * mf / (nf + mf);
    Ok(KsOutcome {
        n,
        m: Some(m),
        statistic: d,
        p_value: kolmogorov_survival(effective.sqrt() * d),
        asymptotic: effective >= ASYMPTOTIC_MIN as f64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::PathRng;

    #[test]
    fn kolmogorov_reference_values() {
        // 1% and 5% critical points of the Kolmogorov distribution
        assert!((kolmogorov_survival(1.627_61) - 0.01).abs() < 1e-5);
        assert!((kolmogorov_survival(1.358_10) - 0.05).abs() < 1e-5);
        assert_eq!(kolmogorov_survival(0.0), 1.0);
        assert!(kolmogorov_survival(0.1) > 0.999_999);
        // both branches agree where they meet
        let lo = kolmogorov_survival(1.18 - 1e-12);
        let hi = kolmogorov_survival(1.18);
        assert!((lo - hi).abs() < 1e-10);
        assert!(kolmogorov_survival(5.0) < 1e-20);
    }

    #[test]
    fn exact_quantile_sample_hits_half_step() {
        let n = 1000;
        let sample: Vec<f64> = (1..=n).map(|i| (i as f64 - 0.5) / n as f64).collect();
        let r = ks_test(&sample, |x| x.clamp(0.0, 1.0)).unwrap();
        assert!((r.statistic - 0.0005).abs() < 1e-12);
    }

    #[test]
    fn small_samples() {
        assert!(matches!(
            ks_test(&[0.1; 7], |x| x),
            Err(Error::InsufficientSample { got: 7, min: 8 })
        ));
        let r = ks_test(&[0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8], |x| x).unwrap();
        assert!(!r.asymptotic);
        assert!(ks_test(&[f64::NAN; 10], |x| x).is_err());
        assert!(ks_two_sample(&[0.0; 8], &[0.0; 3]).is_err());
    }

    #[test]
    fn permutation_invariance() {
        let mut rng = PathRng::new(1, 0);
        let mut xs: Vec<f64> = (0..500).map(|_| rng.uniform()).collect();
        let a = ks_test(&xs, |x| x).unwrap();
        xs.reverse();
        xs.swap(3, 300);
        let b = ks_test(&xs, |x| x).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn two_sample_against_brute_force() {
        let mut rng = PathRng::new(2, 0);
        let a: Vec<f64> = (0..300).map(|_| (rng.uniform() * 20.0).floor()).collect();
        let b: Vec<f64> = (0..200).map(|_| (rng.uniform() * 22.0).floor()).collect();
        let r = ks_two_sample(&a, &b).unwrap();
        // sup over all observed points of |F_a - F_b|, ties included
        let ecdf = |s: &[f64], x: f64| s.iter().filter(|&&v| v <= x).count() as f64 / s.len() as f64;
        let brute = a
            .iter()
            .chain(&b)
            .map(|&x| (ecdf(&a, x) - ecdf(&b, x)).abs())
            .fold(0.0, f64::max);
        assert!((r.statistic - brute).abs() < 1e-15);
        assert_eq!(r.m, Some(200));
    }

    #[test]
    fn identical_samples_do_not_reject() {
        let xs: Vec<f64> = (0..100).map(|i| i as f64).collect();
        let r = ks_two_sample(&xs, &xs).unwrap();
        assert_eq!(r.statistic, 0.0);
        assert_eq!(r.p_value, 1.0);
    }
}
