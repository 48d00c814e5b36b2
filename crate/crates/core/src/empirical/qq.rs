//! QQ point sets. Empirical quantiles use linear interpolation of order
//! statistics (Hyndman-Fan type 7).

use crate::error::{Error, Result};

pub const QUANTILE_CONVENTION: &str = "type-7 (linear interpolation of order statistics)";

/// Type-7 quantile of an ascending, nonempty slice.
pub fn empirical_quantile(sorted: &[f64], p: f64) -> f64 {
    let n = sorted.len();
    if n == 1 {
        return sorted[0];
    }
    let h = (n - 1) as f64 * p.clamp(0.0, 1.0);
    let lo = h.floor() as usize;
    if lo + 1 >= n {
        return sorted[n - 1];
    }
    sorted[lo] + (h - lo as f64) * (sorted[lo + 1] - sorted[lo])
}

/// Probability levels `(j - 0.5) / levels` for `j = 1..=levels`.
pub fn levels(count: usize) -> Vec<f64> {
    (1..=count).map(|j| (j as f64 - 0.5) / count as f64).collect()
}

fn prepare(sample: &[f64], count: usize) -> Result<Vec<f64>> {
    if count < 2 {
        return Err(Error::domain(format!("need at least 2 QQ levels, got {count}")));
    }
    if sample.is_empty() {
        return Err(Error::domain("QQ plot of an empty sample"));
    }
    if sample.iter().any(|x| !x.is_finite()) {
        return Err(Error::domain("sample contains a non-finite value"));
    }
    let mut v = sample.to_vec();
    v.sort_by(f64::total_cmp);
    Ok(v)
}

/// `(reference_quantile(p), sample_quantile(p))` at each level, in level order.
pub fn qq_points<Q>(sample: &[f64], reference_quantile: Q, count: usize) -> Result<Vec<(f64, f64)>>
where
    Q: Fn(f64) -> Result<f64>,
{
    let sorted = prepare(sample, count)?;
    levels(count)
        .into_iter()
        .map(|p| Ok((reference_quantile(p)?, empirical_quantile(&sorted, p))))
        .collect()
}

/// `(quantile of reference, quantile of sample)` for two empirical samples.
pub fn qq_two_sample(sample: &[f64], reference: &[f64], count: usize) -> Result<Vec<(f64, f64)>> {
    let a = prepare(sample, count)?;
    let b = prepare(reference, count)?;
    Ok(levels(count)
        .into_iter()
        .map(|p| (empirical_quantile(&b, p), empirical_quantile(&a, p)))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn type7_matches_hand_values() {
        let xs = [1.0, 2.0, 4.0, 8.0];
        assert_eq!(empirical_quantile(&xs, 0.0), 1.0);
        assert_eq!(empirical_quantile(&xs, 1.0), 8.0);
        // h = 3 * 0.5 = 1.5 -> halfway between 2 and 4
        assert_eq!(empirical_quantile(&xs, 0.5), 3.0);
        assert!((empirical_quantile(&xs, 0.9) - 6.8).abs() < 1e-12);
        assert_eq!(empirical_quantile(&[5.0], 0.3), 5.0);
    }

    #[test]
    fn reference_sample_sits_on_the_diagonal() {
        // uniform on [-1, 1]; sample placed at the type-7 plotting positions
        let quantile = |p: f64| 2.0 * p - 1.0;
        let n = 501;
        let sample: Vec<f64> = (0..n).map(|i| quantile(i as f64 / (n - 1) as f64)).collect();
        let pts = qq_points(&sample, |p| Ok(quantile(p)), 99).unwrap();
        assert_eq!(pts.len(), 99);
        for (x, y) in pts {
            assert!((x - y).abs() < 1e-9);
        }
    }

    #[test]
    fn antisymmetric_sample_gives_point_symmetry() {
        let half = [0.05, 0.2, 0.33, 0.6, 0.91];
        let sample: Vec<f64> = half.iter().flat_map(|&x| [x, -x]).collect();
        let pts = qq_points(&sample, |p| Ok(2.0 * p - 1.0), 10).unwrap();
        for j in 0..10 {
            let (x, y) = pts[j];
            let (mx, my) = pts[9 - j];
            assert!((x + mx).abs() < 1e-12 && (y + my).abs() < 1e-12);
        }
    }

    #[test]
    fn errors_and_two_sample() {
        assert!(qq_points(&[], Ok, 10).is_err());
        assert!(qq_points(&[1.0], Ok, 1).is_err());
        let a = [3.0, 1.0, 2.0];
        let pts = qq_two_sample(&a, &a, 5).unwrap();
        assert!(pts.iter().all(|(x, y)| x == y));
        let ls = levels(4);
        assert_eq!(ls, vec![0.125, 0.375, 0.625, 0.875]);
    }
}
