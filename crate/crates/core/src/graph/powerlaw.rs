//! Power-law fitting of degree sequences.
//!
//! The exponent is the continuous maximum-likelihood estimate with the usual
//! half-integer shift for discrete data,
//!
//! ```text
//! gamma = 1 + n_tail / sum_{k_i >= k_min} ln(k_i / (k_min - 1/2))
//! ```
//!
//! When no lower cutoff is given, every observed degree with a large enough
//! tail is tried and the one minimizing the Kolmogorov–Smirnov distance
//! between the empirical and fitted tail distributions wins.

use super::{Graph, GraphError};

/// Smallest tail the estimator accepts.
pub const MIN_TAIL_SIZE: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerLawFit {
    pub exponent: f64,
    pub k_min: usize,
    pub tail_size: usize,
    pub ks_distance: f64,
}

/// Scale-free iff the exponent lies strictly between 2 and 3.
pub fn classify_scale_free(exponent: f64) -> bool {
    exponent > 2.0 && exponent < 3.0
}

pub fn fit_power_law(g: &Graph, k_min: Option<usize>) -> Result<PowerLawFit, GraphError> {
    fit_power_law_degrees(&g.degrees(), k_min)
}

pub fn fit_power_law_degrees(degrees: &[usize], k_min: Option<usize>) -> Result<PowerLawFit, GraphError> {
    let mut tail: Vec<usize> = degrees.iter().copied().filter(|&d| d >= 1).collect();
    tail.sort_unstable();

    if let Some(k_min) = k_min {
        if k_min == 0 {
            return Err(GraphError::InvalidParameter("k_min must be at least 1".into()));
        }
        let start = tail.partition_point(|&d| d < k_min);
        return fit_sorted_tail(&tail[start..], k_min);
    }

    let mut best: Option<PowerLawFit> = None;
    let mut start = 0;
    while start < tail.len() && tail.len() - start >= MIN_TAIL_SIZE {
        let k = tail[start];
        let fit = fit_sorted_tail(&tail[start..], k)?;
        if best.is_none_or(|b| fit.ks_distance < b.ks_distance) {
            best = Some(fit);
        }
        start = tail.partition_point(|&d| d <= k);
    }
    best.ok_or(GraphError::InsufficientTail {
        tail_size: tail.len(),
        required: MIN_TAIL_SIZE,
    })
}

/// `tail` is sorted ascending and every entry is `>= k_min`.
fn fit_sorted_tail(tail: &[usize], k_min: usize) -> Result<PowerLawFit, GraphError> {
    let n = tail.len();
    if n < MIN_TAIL_SIZE {
        return Err(GraphError::InsufficientTail {
            tail_size: n,
            required: MIN_TAIL_SIZE,
        });
    }
    let shift = k_min as f64 - 0.5;
    let log_sum: f64 = tail.iter().map(|&k| (k as f64 / shift).ln()).sum();
    let exponent = 1.0 + n as f64 / log_sum;

    let mut ks: f64 = 0.0;
    let mut i = 0;
    while i < n {
        let k = tail[i];
        let mut j = i;
        while j < n && tail[j] == k {
            j += 1;
        }
        let empirical = j as f64 / n as f64;
        let model = 1.0 - ((k as f64 + 0.5) / shift).powf(1.0 - exponent);
        ks = ks.max((empirical - model).abs());
        i = j;
    }
    Ok(PowerLawFit {
        exponent,
        k_min,
        tail_size: n,
        ks_distance: ks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classification_boundaries() {
        assert!(classify_scale_free(2.72));
        assert!(classify_scale_free(2.87));
        assert!(!classify_scale_free(3.0));
        assert!(!classify_scale_free(2.0));
        assert!(!classify_scale_free(8.22));
        assert!(!classify_scale_free(1.5));
    }

    #[test]
    fn small_tail_is_rejected_with_size() {
        let degs = vec![3; 9];
        let err = fit_power_law_degrees(&degs, Some(3)).unwrap_err();
        assert_eq!(
            err,
            GraphError::InsufficientTail {
                tail_size: 9,
                required: MIN_TAIL_SIZE
            }
        );
        assert!(matches!(
            fit_power_law_degrees(&degs, None),
            Err(GraphError::InsufficientTail { tail_size: 9, .. })
        ));
    }

    #[test]
    fn pinned_estimate_matches_closed_form() {
        let degs: Vec<usize> = (1..=40).collect();
        let fit = fit_power_law_degrees(&degs, Some(5)).unwrap();
        let expected = 1.0 + 36.0 / (5..=40).map(|k| (k as f64 / 4.5).ln()).sum::<f64>();
        assert!((fit.exponent - expected).abs() < 1e-12);
        assert_eq!(fit.tail_size, 36);
    }

    #[test]
    fn zero_k_min_is_invalid() {
        assert!(fit_power_law_degrees(&[1; 20], Some(0)).is_err());
    }
}
