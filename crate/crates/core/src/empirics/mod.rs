//! Empirical distribution functions, KS and Levy distances, experiment
//! reports and the Monte Carlo experiments.

mod distance;
mod experiments;
mod report;

pub use distance::{ks_distance, ks_two_sample, levy_distance, Cdf};
pub use experiments::*;
pub use report::ExperimentReport;

use crate::error::{Error, Result};

/// Asymptotic standard deviation of `sqrt(n) KS` under the null (Kolmogorov
/// distribution), used as a rough Monte Carlo standard error.
pub const KS_STDERR_FACTOR: f64 = 0.26;

/// Right-continuous empirical CDF of a sample.
#[derive(Debug, Clone, PartialEq)]
pub struct Ecdf {
    values: Vec<f64>,
}

impl Ecdf {
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Domain("empirical CDF of an empty sample".into()));
        }
        if values.iter().any(|v| v.is_nan()) {
            return Err(Error::Domain("sample contains NaN".into()));
        }
        values.sort_by(f64::total_cmp);
        Ok(Ecdf { values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Sorted sample.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `#{v <= x} / n`.
    pub fn eval(&self, x: f64) -> f64 {
        self.values.partition_point(|v| *v <= x) as f64 / self.len() as f64
    }

    /// `#{v < x} / n`.
    pub fn eval_left(&self, x: f64) -> f64 {
        self.values.partition_point(|v| *v < x) as f64 / self.len() as f64
    }

    pub fn quantile(&self, p: f64) -> f64 {
        quantile_sorted(&self.values, p)
    }
}

/// Linear-interpolation quantile (type 7) of a sorted, nonempty slice.
pub fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    assert!(!sorted.is_empty(), "quantile of an empty sample");
    let p = p.clamp(0.0, 1.0);
    let h = p * (sorted.len() - 1) as f64;
    let i = h.floor() as usize;
    if i + 1 >= sorted.len() {
        return sorted[sorted.len() - 1];
    }
    sorted[i] + (h - i as f64) * (sorted[i + 1] - sorted[i])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ecdf_steps() {
        let e = Ecdf::new(vec![3.0, 1.0, 2.0, 2.0]).unwrap();
        assert_eq!(e.values(), &[1.0, 2.0, 2.0, 3.0]);
        assert_eq!(e.eval(0.5), 0.0);
        assert_eq!(e.eval(2.0), 0.75);
        assert_eq!(e.eval_left(2.0), 0.25);
        assert_eq!(e.eval(3.0), 1.0);
        assert!(Ecdf::new(vec![]).is_err());
        assert!(Ecdf::new(vec![f64::NAN]).is_err());
    }

    #[test]
    fn quantiles() {
        let v = [1.0, 2.0, 3.0, 4.0, 5.0];
        assert_eq!(quantile_sorted(&v, 0.5), 3.0);
        assert_eq!(quantile_sorted(&v, 0.9), 4.6);
        assert_eq!(quantile_sorted(&v, 1.0), 5.0);
        assert_eq!(quantile_sorted(&[7.0], 0.3), 7.0);
    }
}
