use super::{ks_distance, ks_two_sample, quantile_sorted, Ecdf, ExperimentReport, KS_STDERR_FACTOR};
use crate::charfn::{cdf_from_cf, dyadic_gamma, erlang_cdf, levy_half_stable_cdf, CdfTable, CfExponent};
use crate::error::{Error, Result};
use crate::rng::{replicates, RngStream};
use crate::sampling::{petersburg_sum, LepageSampler, LepageTerms};
use crate::tailmodel::TailModel;
use serde::Serialize;

/// Tolerance of the CDF tables used as oracles.
pub const ORACLE_TOL: f64 = 1e-9;
/// Right end of the dense part of oracle tables; beyond it the tail is extrapolated.
pub const ORACLE_TABLE_MAX: f64 = 512.0;

fn ks_stderr(reps: usize) -> f64 {
    KS_STDERR_FACTOR / (reps as f64).sqrt()
}

fn two_sample_stderr(a: usize, b: usize) -> f64 {
    KS_STDERR_FACTOR * (1.0 / a as f64 + 1.0 / b as f64).sqrt()
}

/// `S_n / n - log2 n` for `reps` St. Petersburg sums.
pub fn centered_petersburg_sums(n: u64, reps: usize, seed: u64, lane: u16) -> Vec<f64> {
    let log_n = (n as f64).log2();
    replicates(seed, lane, reps, |rng| petersburg_sum(n, rng) as f64 / n as f64 - log_n)
}

/// Oracle table of `G_gamma` covering the sample range.
pub fn g_gamma_table(gamma: f64, sample: &[f64]) -> Result<CdfTable> {
    let h = if gamma == 1.0 { CfExponent::petersburg_g() } else { CfExponent::g_gamma(gamma)? };
    let (min, max) = sample
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    let lo = min.max(-10.0).min(0.0);
    let hi = max.min(ORACLE_TABLE_MAX).max(lo + 1.0);
    CdfTable::semistable(&h, lo, hi, ORACLE_TOL)
}

/// Weak law `S_n / (n log2 n) -> 1`: the empirical probability of a relative
/// deviation above 1/2 against the `G_{gamma_n}` prediction
/// `P(|W| > log2(n) / 2)`.
pub fn feller_experiment(n: u64, reps: usize, seed: u64) -> Result<ExperimentReport> {
    if n < 2 || reps < 100 {
        return Err(Error::Domain(format!("feller needs n >= 2 and reps >= 100, got n = {n}, reps = {reps}")));
    }
    let log_n = (n as f64).log2();
    let w = centered_petersburg_sums(n, reps, seed, 0);
    // S_n/(n log2 n) - 1 = W / log2 n
    let exceed = |eps: f64| w.iter().filter(|v| (**v / log_n).abs() > eps).count() as f64 / reps as f64;
    let (e50, e25) = (exceed(0.5), exceed(0.25));
    let gamma = dyadic_gamma(n);
    let h = CfExponent::g_gamma(gamma)?;
    let c = 0.5 * log_n;
    let predicted = cdf_from_cf(&h, -c, ORACLE_TOL)? + 1.0 - cdf_from_cf(&h, c, ORACLE_TOL)?;
    let stderr = (e50 * (1.0 - e50) / reps as f64).sqrt();
    let report = ExperimentReport::new("feller", seed)
        .param("n", &n)
        .param("reps", &reps)
        .with_stderr(stderr)
        .with_detail("gamma", &gamma)
        .with_detail("exceedance_0.5", &e50)
        .with_detail("exceedance_0.25", &e25)
        .with_detail("predicted_0.5", &predicted);
    Ok(report.finish((e50 - predicted).abs(), 0.02 + 3.0 * stderr))
}

/// KS distance of `S_{2^k} / 2^k - k` to `G`.
pub fn martin_lof_experiment(k: u32, reps: usize, seed: u64) -> Result<ExperimentReport> {
    if !(4..=20).contains(&k) || reps < 10_000 {
        return Err(Error::Domain(format!("mlof needs 4 <= k <= 20 and reps >= 1e4, got k = {k}, reps = {reps}")));
    }
    let sample = centered_petersburg_sums(1u64 << k, reps, seed, 0);
    let table = g_gamma_table(1.0, &sample)?;
    let ks = ks_distance(&Ecdf::new(sample)?, &table);
    Ok(ExperimentReport::new("martin_lof", seed)
        .param("k", &k)
        .param("reps", &reps)
        .with_stderr(ks_stderr(reps))
        .finish(ks, 0.02))
}

/// Sample and KS distance of `S_n / n - log2 n` against `G_{gamma_n}`.
fn merging_point(n: u64, reps: usize, seed: u64, lane: u16) -> Result<(Vec<f64>, f64)> {
    let sample = centered_petersburg_sums(n, reps, seed, lane);
    let table = g_gamma_table(dyadic_gamma(n), &sample)?;
    let ecdf = Ecdf::new(sample)?;
    let ks = ks_distance(&ecdf, &table);
    Ok((ecdf.values().to_vec(), ks))
}

/// Sup-distance between the law of `S_n / n - log2 n` and `G_{gamma_n}`,
/// `gamma_n = n / 2^{floor(log2 n)}`.
pub fn merging_experiment(n: u64, reps: usize, seed: u64) -> Result<ExperimentReport> {
    if n < 16 || reps < 10_000 {
        return Err(Error::Domain(format!("merging needs n >= 16 and reps >= 1e4, got n = {n}, reps = {reps}")));
    }
    let (_, ks) = merging_point(n, reps, seed, 0)?;
    Ok(ExperimentReport::new("merging", seed)
        .param("n", &n)
        .param("reps", &reps)
        .with_stderr(ks_stderr(reps))
        .with_detail("gamma", &dyadic_gamma(n))
        .finish(ks, 0.03))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepPoint {
    pub n: u64,
    pub gamma: f64,
    pub ks: f64,
}

#[derive(Debug, Clone)]
pub struct MergingSweep {
    pub points: Vec<SweepPoint>,
    /// Max sup-distance over the octave, tolerance 0.04.
    pub report: ExperimentReport,
    /// Two-sample KS between the batches at `2^k` and `2^{k+1}`, tolerance 0.015.
    pub closure: ExperimentReport,
}

impl MergingSweep {
    pub fn pass(&self) -> bool {
        self.report.pass && self.closure.pass
    }
}

/// Merging along one octave: `n_i = round(2^k (1 + i / m))`, `i = 0..=m`.
pub fn merging_sweep(k: u32, points_per_octave: u32, reps: usize, seed: u64) -> Result<MergingSweep> {
    if !(8..=40).contains(&k) || points_per_octave == 0 || reps < 2 {
        return Err(Error::Domain(format!(
            "sweep needs 8 <= k <= 40, at least one point per octave and reps >= 2, got k = {k}"
        )));
    }
    let base = (k as f64).exp2();
    let mut points = Vec::new();
    let mut first = Vec::new();
    let mut last = Vec::new();
    for i in 0..=points_per_octave {
        let n = (base * (1.0 + i as f64 / points_per_octave as f64)).round() as u64;
        let (sample, ks) = merging_point(n, reps, seed, i as u16)?;
        points.push(SweepPoint { n, gamma: dyadic_gamma(n), ks });
        if i == 0 {
            first = sample;
        } else if i == points_per_octave {
            last = sample;
        }
    }
    let max_ks = points.iter().map(|p| p.ks).fold(0.0, f64::max);
    let params = |r: ExperimentReport| {
        r.param("k", &k).param("points_per_octave", &points_per_octave).param("reps", &reps)
    };
    let mut report = params(ExperimentReport::new("merging_sweep", seed)).with_stderr(ks_stderr(reps));
    report.detail("points", &points);
    let closure_ks = ks_two_sample(&Ecdf::new(first)?, &Ecdf::new(last)?);
    let closure = params(ExperimentReport::new("merging_sweep_closure", seed))
        .with_stderr(two_sample_stderr(reps, reps))
        .finish(closure_ks, 0.015);
    Ok(MergingSweep { points, report: report.finish(max_ks, 0.04), closure })
}

/// p-th smallest of `n` uniforms.
fn uniform_order_statistic(p: usize, n: usize, rng: &mut RngStream, buf: &mut Vec<f64>) -> f64 {
    buf.clear();
    if p <= 32 {
        // keep the p smallest in ascending order
        for _ in 0..n {
            let u = rng.uniform();
            if buf.len() < p {
                let at = buf.partition_point(|v| *v <= u);
                buf.insert(at, u);
            } else if u < buf[p - 1] {
                buf.pop();
                let at = buf.partition_point(|v| *v <= u);
                buf.insert(at, u);
            }
        }
        buf[p - 1]
    } else {
        buf.extend((0..n).map(|_| rng.uniform()));
        let (_, v, _) = buf.select_nth_unstable_by(p - 1, f64::total_cmp);
        *v
    }
}

#[derive(Debug, Clone)]
pub struct OrderStatistics {
    /// Largest absolute z-score of the sample mean and variance against the
    /// exact moments, tolerance 3.
    pub moments: ExperimentReport,
    /// KS distance of `n y_p` to the Gamma(p, 1) law.
    pub ks: ExperimentReport,
}

impl OrderStatistics {
    pub fn pass(&self) -> bool {
        self.moments.pass && self.ks.pass
    }
}

/// Exact `E y_p` and `Var y_p` of the p-th smallest of `n` uniforms.
pub fn order_statistic_moments(p: u64, n: u64) -> (f64, f64) {
    let (p, n) = (p as f64, n as f64);
    (p / (n + 1.0), p * (n - p + 1.0) / ((n + 1.0) * (n + 1.0) * (n + 2.0)))
}

pub fn order_statistics_experiment(
    p: usize,
    n: usize,
    reps: usize,
    ks_tolerance: f64,
    seed: u64,
) -> Result<OrderStatistics> {
    if !(p >= 1 && p <= n) || reps < 2 {
        return Err(Error::Domain(format!("need 1 <= p <= n and reps >= 2, got p = {p}, n = {n}")));
    }
    let ys = replicates(seed, 0, reps, |rng| {
        let mut buf = Vec::new();
        uniform_order_statistic(p, n, rng, &mut buf)
    });
    let r = reps as f64;
    let mean = ys.iter().sum::<f64>() / r;
    let m2 = ys.iter().map(|y| (y - mean).powi(2)).sum::<f64>() / r;
    let m4 = ys.iter().map(|y| (y - mean).powi(4)).sum::<f64>() / r;
    let var = m2 * r / (r - 1.0);
    let (exact_mean, exact_var) = order_statistic_moments(p as u64, n as u64);
    let mean_se = (var / r).sqrt();
    let var_se = ((m4 - m2 * m2) / r).sqrt();
    let z_mean = (mean - exact_mean) / mean_se;
    let z_var = (var - exact_var) / var_se;
    let params = |rep: ExperimentReport| rep.param("p", &p).param("n", &n).param("reps", &reps);
    let moments = params(ExperimentReport::new("order_statistics_moments", seed))
        .with_stderr(1.0)
        .with_detail("mean", &mean)
        .with_detail("exact_mean", &exact_mean)
        .with_detail("variance", &var)
        .with_detail("exact_variance", &exact_var)
        .with_detail("z_mean", &z_mean)
        .with_detail("z_variance", &z_var)
        .finish(z_mean.abs().max(z_var.abs()), 3.0);
    let scaled = Ecdf::new(ys.iter().map(|y| y * n as f64).collect())?;
    let erlang = |x: f64| erlang_cdf(p as u32, x);
    let ks = params(ExperimentReport::new("order_statistics_ks", seed))
        .with_stderr(ks_stderr(reps))
        .finish(ks_distance(&scaled, &erlang), ks_tolerance);
    Ok(OrderStatistics { moments, ks })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NegligibilityRow {
    pub alpha: f64,
    /// Median of `max |x_p| / sum |x_k|`.
    pub median_ratio: f64,
    /// Median of `max x_p^2 / sum x_k^2`.
    pub median_square_ratio: f64,
}

/// Median ratios `max |x_p| / sum |x_k|` for symmetric Pareto samples with
/// `P(|x| > u) = u^{-alpha}`, `u >= 1`.
///
/// The statistic is the largest shortfall against the expected behaviour:
/// median at least 0.2 for `alpha < 1` (the maximum carries the sum) and at
/// most 0.05 for `alpha > 2`; it passes at 0.
pub fn negligibility_experiment(alpha_list: &[f64], n: usize, reps: usize, seed: u64) -> Result<ExperimentReport> {
    if n < 1000 || reps == 0 || alpha_list.is_empty() {
        return Err(Error::Domain("negligibility needs n >= 1000, reps >= 1 and some alpha".into()));
    }
    if alpha_list.iter().any(|a| !(*a > 0.0 && a.is_finite())) {
        return Err(Error::Domain("alpha values must be positive".into()));
    }
    let mut rows = Vec::new();
    let mut shortfall: f64 = 0.0;
    for (i, &alpha) in alpha_list.iter().enumerate() {
        let inv = 1.0 / alpha;
        let ratios = replicates(seed, i as u16, reps, |rng| {
            let (mut max, mut sum, mut max2, mut sum2) = (0.0f64, 0.0, 0.0f64, 0.0);
            for _ in 0..n {
                let x = rng.sign() * rng.uniform_open0().powf(-inv);
                let a = x.abs();
                max = max.max(a);
                sum += a;
                max2 = max2.max(x * x);
                sum2 += x * x;
            }
            (max / sum, max2 / sum2)
        });
        let mut r1: Vec<f64> = ratios.iter().map(|r| r.0).collect();
        let mut r2: Vec<f64> = ratios.iter().map(|r| r.1).collect();
        r1.sort_by(f64::total_cmp);
        r2.sort_by(f64::total_cmp);
        let row = NegligibilityRow {
            alpha,
            median_ratio: quantile_sorted(&r1, 0.5),
            median_square_ratio: quantile_sorted(&r2, 0.5),
        };
        if alpha < 1.0 {
            shortfall = shortfall.max(0.2 - row.median_ratio);
        } else if alpha > 2.0 {
            shortfall = shortfall.max(row.median_ratio - 0.05);
        }
        rows.push(row);
    }
    let mut report = ExperimentReport::new("negligibility", seed)
        .param("alpha_list", alpha_list)
        .param("n", &n)
        .param("reps", &reps);
    report.detail("rows", &rows);
    Ok(report.finish(shortfall.max(0.0), 0.0))
}

/// Two-sample KS between `n^{-1/alpha} sum_{k <= 2^k} x_k` for pure-tail draws
/// (sign-randomized in symmetric mode) and LePage series draws. Per-rank
/// distances compare `n^{-1/alpha} rho_p` with `Z_p^{-1/alpha}`, p = 1, 2, 3.
pub fn lepage_limit_experiment(
    alpha: f64,
    k: u32,
    reps: usize,
    symmetric: bool,
    seed: u64,
) -> Result<ExperimentReport> {
    if k > 30 || reps < 2 {
        return Err(Error::Domain(format!("lepage needs k <= 30 and reps >= 2, got k = {k}")));
    }
    let sampler = LepageSampler::new(alpha, LepageTerms::Auto, symmetric)?;
    let model = TailModel::pure(alpha, 1.0, 1.0)?;
    let n = 1u64 << k;
    let scale = (n as f64).powf(-1.0 / alpha);
    let direct = replicates(seed, 0, reps, |rng| {
        let mut sum = 0.0;
        let mut top = [0.0f64; 3];
        for _ in 0..n {
            let x = model.quantile_unchecked(rng.uniform_open0());
            let v = if symmetric { rng.sign() * x } else { x };
            sum += v;
            if x > top[2] {
                top[2] = x;
                top.sort_by(|a, b| b.total_cmp(a));
            }
        }
        (sum * scale, top.map(|t| t * scale))
    });
    let series = replicates(seed, 1, reps, |rng| {
        let (v, terms) = sampler.sample_with_terms(rng);
        (v, [terms[0].abs(), terms[1].abs(), terms[2].abs()])
    });
    let a = Ecdf::new(direct.iter().map(|d| d.0).collect())?;
    let b = Ecdf::new(series.iter().map(|d| d.0).collect())?;
    let ks = ks_two_sample(&a, &b);
    let rank_ks: Vec<f64> = (0..3)
        .map(|p| {
            let x = Ecdf::new(direct.iter().map(|d| d.1[p]).collect())?;
            let y = Ecdf::new(series.iter().map(|d| d.1[p]).collect())?;
            Ok(ks_two_sample(&x, &y))
        })
        .collect::<Result<_>>()?;
    let mut report = ExperimentReport::new("lepage_limit", seed)
        .param("alpha", &alpha)
        .param("k", &k)
        .param("reps", &reps)
        .param("symmetric", &symmetric)
        .with_stderr(two_sample_stderr(reps, reps))
        .with_detail("terms", &sampler.terms())
        .with_detail("rank_ks", &rank_ks);
    if alpha == 0.5 && !symmetric {
        report.detail("direct_vs_closed_form", &ks_distance(&a, &levy_half_stable_cdf));
        report.detail("series_vs_closed_form", &ks_distance(&b, &levy_half_stable_cdf));
    }
    Ok(report.finish(ks, 0.015))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_order_moments() {
        let (m, v) = order_statistic_moments(3, 9);
        assert!((m - 0.3).abs() < 1e-15);
        assert!((v - 21.0 / 1100.0).abs() < 1e-15);
        let (m, _) = order_statistic_moments(10, 10);
        assert!((m - 10.0 / 11.0).abs() < 1e-15);
    }

    #[test]
    fn order_statistic_selection_agrees() {
        for &(p, n) in &[(1usize, 50usize), (3, 9), (40, 100), (100, 100)] {
            let mut buf = Vec::new();
            let got = uniform_order_statistic(p, n, &mut RngStream::new(2, p as u64), &mut buf);
            let mut r = RngStream::new(2, p as u64);
            let mut all: Vec<f64> = (0..n).map(|_| r.uniform()).collect();
            all.sort_by(f64::total_cmp);
            assert_eq!(got, all[p - 1]);
        }
    }

    #[test]
    fn feller_smoke() {
        let r = feller_experiment(4, 100, 1).unwrap();
        assert_eq!(r.experiment, "feller");
        assert_eq!(r.pass, r.statistic <= r.tolerance);
        let e50 = r.details["exceedance_0.5"].as_f64().unwrap();
        let e25 = r.details["exceedance_0.25"].as_f64().unwrap();
        assert!(e25 >= e50);
    }

    #[test]
    fn domain_checks() {
        assert!(martin_lof_experiment(3, 10_000, 0).is_err());
        assert!(merging_experiment(8, 10_000, 0).is_err());
        assert!(merging_sweep(7, 8, 100, 0).is_err());
        assert!(order_statistics_experiment(0, 5, 10, 0.01, 0).is_err());
        assert!(negligibility_experiment(&[0.5], 10, 10, 0).is_err());
    }

    #[test]
    fn sweep_endpoints_are_dyadic() {
        let s = merging_sweep(8, 2, 50, 3).unwrap();
        assert_eq!(s.points.first().unwrap().gamma, 1.0);
        assert_eq!(s.points.last().unwrap().gamma, 1.0);
        assert_eq!(s.points.iter().map(|p| p.n).collect::<Vec<_>>(), vec![256, 384, 512]);
    }
}
