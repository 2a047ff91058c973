//! Levy's coupling of the normalized i.i.d. sum `S_hat = n^{-1/alpha} sum_{k<=n} x_k`
//! with its Poisson-randomized version `S_bar = n^{-1/alpha} sum_{k<=N} x_k`,
//! `N ~ Poisson(n)`, both read off one sample path.

use crate::empirics::{ks_two_sample, quantile_sorted, Ecdf, ExperimentReport};
use crate::error::{Error, Result};
use crate::rng::{replicates, RngStream};
use crate::tailmodel::TailModel;
use rand_distr::{Distribution, Poisson};
use serde::Serialize;

/// Half-width of the fluctuation window `|j - n| <= C sqrt(n)`, in units of `sqrt(n)`.
pub const FLUCTUATION_WINDOW: f64 = 3.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoupledPair {
    pub s_hat: f64,
    pub s_bar: f64,
    pub n: u64,
    /// Realized Poisson count.
    pub big_n: u64,
    /// `n^{-1/alpha} |sum_{k = min(n,N)+1}^{max(n,N)} x_k|`.
    pub gap: f64,
    /// `n^{-1/alpha} max_{|j - n| <= C sqrt(n)} |S_j - S_n|`.
    pub max_fluctuation: f64,
}

fn check_model(model: &TailModel) -> Result<()> {
    if model.alpha() >= 1.0 {
        return Err(Error::Contract(format!(
            "coupling is implemented for the uncentered regime alpha < 1, got {}",
            model.alpha()
        )));
    }
    let mass = model.total_mass();
    if !((mass - 1.0).abs() <= 1e-12) {
        return Err(Error::Domain(format!(
            "coupling needs a probability tail with T(x0) = 1, got {mass}"
        )));
    }
    Ok(())
}

/// Draws `N ~ Poisson(n)`, then `max(N, n + C sqrt(n))` variates from the model.
pub fn coupled_pair(model: &TailModel, n: u64, rng: &mut RngStream) -> Result<CoupledPair> {
    if n == 0 {
        return Err(Error::Domain("coupling needs n >= 1".into()));
    }
    let poisson = Poisson::new(n as f64).map_err(|e| Error::Domain(e.to_string()))?;
    let big_n = poisson.sample(rng.rng()) as u64;
    coupled_pair_with_count(model, n, big_n, rng)
}

/// [`coupled_pair`] with the Poisson count supplied by the caller.
pub fn coupled_pair_with_count(
    model: &TailModel,
    n: u64,
    big_n: u64,
    rng: &mut RngStream,
) -> Result<CoupledPair> {
    check_model(model)?;
    if n == 0 {
        return Err(Error::Domain("coupling needs n >= 1".into()));
    }
    let scale = (n as f64).powf(-1.0 / model.alpha());
    let w = (FLUCTUATION_WINDOW * (n as f64).sqrt()).ceil() as u64;
    let lo_win = n.saturating_sub(w);
    let hi_win = n + w;
    let (lo, hi) = (n.min(big_n), n.max(big_n));
    let total = hi.max(hi_win);

    let mass = model.total_mass();
    let mut prefix = 0.0; // sum of the first min(n, N) terms
    let mut between = 0.0; // terms min+1 ..= max
    let mut window_base = 0.0; // S_{lo_win}
    let mut window = Vec::with_capacity((hi_win - lo_win) as usize);
    let mut running = 0.0;
    for j in 1..=total {
        let x = model.quantile_unchecked(rng.uniform_open0() * mass);
        running += x;
        if j <= lo {
            prefix += x;
        } else if j <= hi {
            between += x;
        }
        if j == lo_win {
            window_base = running;
        }
        if j > lo_win && j <= hi_win {
            window.push(running - window_base);
        }
    }
    // S_j - S_n over the window, measured from S_{lo_win}
    let at_n = window.get((n - lo_win) as usize - 1).copied().unwrap_or(0.0);
    let max_fluctuation = window
        .iter()
        .map(|v| (v - at_n).abs())
        .fold(at_n.abs(), f64::max)
        * scale;
    let (s_hat, s_bar) = if n <= big_n {
        (prefix * scale, (prefix + between) * scale)
    } else {
        ((prefix + between) * scale, prefix * scale)
    };
    Ok(CoupledPair { s_hat, s_bar, n, big_n, gap: between * scale, max_fluctuation })
}

/// One row of a gap curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GapRow {
    pub n: u64,
    pub median_gap: f64,
    pub q90_gap: f64,
    /// Two-sample KS distance between the `s_hat` and `s_bar` samples.
    pub ks: f64,
    pub median_fluctuation: f64,
}

#[derive(Debug, Clone)]
pub struct GapCurve {
    pub rows: Vec<GapRow>,
    pub report: ExperimentReport,
}

fn simulate(model: &TailModel, n: u64, reps: usize, seed: u64, lane: u16) -> Result<Vec<CoupledPair>> {
    check_model(model)?;
    replicates(seed, lane, reps, |rng| coupled_pair(model, n, rng))
        .into_iter()
        .collect()
}

/// Median and 0.9-quantile of the gap for each `n`.
///
/// The statistic is the fraction of adjacent pairs of `n` (in the given
/// order) whose median gap fails to decrease; it passes at 0.
pub fn coupling_gap_curve(
    model: &TailModel,
    n_list: &[u64],
    reps: usize,
    seed: u64,
) -> Result<GapCurve> {
    if reps == 0 {
        return Err(Error::Domain("need at least one replicate".into()));
    }
    if n_list.is_empty() || n_list.iter().any(|&n| n < 10) {
        return Err(Error::Domain("gap curve needs a nonempty list of n >= 10".into()));
    }
    let mut rows = Vec::with_capacity(n_list.len());
    let mut median_se: f64 = 0.0;
    for (i, &n) in n_list.iter().enumerate() {
        let pairs = simulate(model, n, reps, seed, i as u16)?;
        let mut gaps: Vec<f64> = pairs.iter().map(|p| p.gap).collect();
        gaps.sort_by(f64::total_cmp);
        let mut fl: Vec<f64> = pairs.iter().map(|p| p.max_fluctuation).collect();
        fl.sort_by(f64::total_cmp);
        let hat = Ecdf::new(pairs.iter().map(|p| p.s_hat).collect())?;
        let bar = Ecdf::new(pairs.iter().map(|p| p.s_bar).collect())?;
        if reps > 1 {
            // binomial interval for the median, half-width one sd
            let d = 0.5 / (reps as f64).sqrt();
            let se = 0.5 * (quantile_sorted(&gaps, 0.5 + d) - quantile_sorted(&gaps, 0.5 - d));
            median_se = median_se.max(se);
        }
        rows.push(GapRow {
            n,
            median_gap: quantile_sorted(&gaps, 0.5),
            q90_gap: quantile_sorted(&gaps, 0.9),
            ks: ks_two_sample(&hat, &bar),
            median_fluctuation: quantile_sorted(&fl, 0.5),
        });
    }
    let pairs = rows.len().saturating_sub(1);
    let failing = rows.windows(2).filter(|w| !(w[1].median_gap < w[0].median_gap)).count();
    let statistic = if pairs == 0 { 0.0 } else { failing as f64 / pairs as f64 };
    let mut report = ExperimentReport::new("coupling_gap_curve", seed)
        .param("alpha", &model.alpha())
        .param("n_list", n_list)
        .param("reps", &reps)
        .param("window", &FLUCTUATION_WINDOW);
    report.stderr = (reps > 1).then_some(median_se);
    report.detail("rows", &rows);
    Ok(GapCurve { rows, report: report.finish(statistic, 0.0) })
}

/// Standard deviation of `N - n` relative to `sqrt(n)`; passes within 5%.
pub fn coupling_count_experiment(model: &TailModel, n: u64, reps: usize, seed: u64) -> Result<ExperimentReport> {
    if reps < 2 {
        return Err(Error::Domain("need at least two replicates".into()));
    }
    let pairs = simulate(model, n, reps, seed, 0)?;
    let devs: Vec<f64> = pairs.iter().map(|p| p.big_n as f64 - n as f64).collect();
    let mean = devs.iter().sum::<f64>() / reps as f64;
    let var = devs.iter().map(|d| (d - mean) * (d - mean)).sum::<f64>() / (reps - 1) as f64;
    let ratio = var.sqrt() / (n as f64).sqrt();
    let report = ExperimentReport::new("coupling_count", seed)
        .param("alpha", &model.alpha())
        .param("n", &n)
        .param("reps", &reps)
        .with_stderr(ratio / (2.0 * (reps as f64 - 1.0)).sqrt())
        .with_detail("mean_deviation", &mean)
        .with_detail("sd_over_sqrt_n", &ratio);
    Ok(report.finish((ratio - 1.0).abs(), 0.05))
}

/// Two-sample KS distance between the `s_hat` and `s_bar` samples.
pub fn coupling_ks_experiment(
    model: &TailModel,
    n: u64,
    reps: usize,
    tolerance: f64,
    seed: u64,
) -> Result<ExperimentReport> {
    let pairs = simulate(model, n, reps, seed, 0)?;
    let hat = Ecdf::new(pairs.iter().map(|p| p.s_hat).collect())?;
    let bar = Ecdf::new(pairs.iter().map(|p| p.s_bar).collect())?;
    let ks = ks_two_sample(&hat, &bar);
    let report = ExperimentReport::new("coupling_ks", seed)
        .param("alpha", &model.alpha())
        .param("n", &n)
        .param("reps", &reps)
        .with_stderr(crate::empirics::KS_STDERR_FACTOR * (2.0 / reps as f64).sqrt());
    Ok(report.finish(ks, tolerance))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn half() -> TailModel {
        TailModel::pure(0.5, 1.0, 1.0).unwrap()
    }

    #[test]
    fn forced_count_equal_to_n_has_no_gap() {
        let p = coupled_pair_with_count(&half(), 100, 100, &mut RngStream::new(1, 1)).unwrap();
        assert_eq!(p.gap, 0.0);
        assert_eq!(p.s_hat, p.s_bar);
    }

    #[test]
    fn shared_prefix_and_gap_identity() {
        let m = half();
        for (n, big_n) in [(100u64, 90u64), (100, 117), (50, 0)] {
            let p = coupled_pair_with_count(&m, n, big_n, &mut RngStream::new(5, n + big_n)).unwrap();
            // replay the stream
            let mut r = RngStream::new(5, n + big_n);
            let xs: Vec<f64> = (0..n.max(big_n)).map(|_| m.quantile(r.uniform_open0()).unwrap()).collect();
            let scale = (n as f64).powi(-2);
            let s = |k: u64| xs[..k as usize].iter().sum::<f64>() * scale;
            assert!((p.s_hat - s(n)).abs() <= 1e-12 * p.s_hat.abs());
            assert!((p.s_bar - s(big_n)).abs() <= 1e-12 * p.s_bar.abs().max(1e-300));
            let lo = n.min(big_n) as usize;
            let hi = n.max(big_n) as usize;
            let gap = xs[lo..hi].iter().sum::<f64>() * scale;
            assert!((p.gap - gap).abs() <= 1e-12 * gap.max(1e-300));
            assert!(p.max_fluctuation >= 0.0);
        }
    }

    #[test]
    fn contract_violations() {
        let m = TailModel::pure(1.5, 1.0, 1.0).unwrap();
        assert!(matches!(coupled_pair(&m, 10, &mut RngStream::new(0, 0)), Err(Error::Contract(_))));
        let unnormalized = TailModel::pure(0.5, 2.0, 1.0).unwrap();
        assert!(coupled_pair(&unnormalized, 10, &mut RngStream::new(0, 0)).is_err());
    }

    #[test]
    fn single_replicate_has_no_stderr() {
        let c = coupling_gap_curve(&half(), &[10, 20], 1, 3).unwrap();
        assert_eq!(c.report.stderr, None);
        assert_eq!(c.rows.len(), 2);
    }
}
