//! Seeded samplers: St. Petersburg draws, quantile-transform draws from tail
//! models, Poisson point processes with a prescribed intensity tail, their
//! centered sums, and the LePage series.

use crate::error::{Error, Result};
use crate::rng::RngStream;
use crate::tailmodel::TailModel;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

/// Largest expected Poisson point count accepted by the point samplers.
pub const MAX_EXPECTED_POINTS: f64 = 1e9;
/// Target for the neglected fluctuation of an auto-truncated LePage series.
pub const LEPAGE_TAIL_TOL: f64 = 1e-6;
/// Upper bound on the number of explicit LePage terms.
pub const LEPAGE_MAX_TERMS: usize = 1 << 12;
const LEPAGE_MIN_TERMS: usize = 16;

/// What has been applied to the raw draws of a batch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Transform {
    Raw,
    Centered,
    Normed,
}

/// Draws plus everything needed to regenerate them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleBatch {
    pub values: Vec<f64>,
    /// Tail model document of the generating law.
    pub model: serde_json::Value,
    pub seed: u64,
    pub stream_id: u64,
    pub transform: Transform,
    pub symmetrized: bool,
}

impl SampleBatch {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// `X = 2^k` with `k = floor(log2(1/u)) + 1`, so `P(X = 2^k) = 2^{-k}` for
/// uniform `u` on (0, 1].
pub fn petersburg_from_uniform(u: f64) -> f64 {
    let k = (1.0 / u).log2().floor() + 1.0;
    k.exp2()
}

/// Exponent `k` of one St. Petersburg draw.
///
/// Same map as [`petersburg_from_uniform`] applied to `u = (r + 1) / 2^53`
/// with `r` the top 53 bits of a word: `k = lz(r) - 10`, computed without
/// floating point.
#[inline]
pub fn petersburg_exponent(rng: &mut RngStream) -> u32 {
    let r = rng.next_u64() >> 11;
    r.leading_zeros() - 10
}

/// Exact sum of `n` St. Petersburg draws.
pub fn petersburg_sum(n: u64, rng: &mut RngStream) -> u128 {
    let mut total: u128 = 0;
    for _ in 0..n {
        total += 1u128 << petersburg_exponent(rng);
    }
    total
}

/// `n` independent St. Petersburg payoffs.
pub fn sample_petersburg(n: usize, rng: &mut RngStream) -> Result<SampleBatch> {
    if n == 0 {
        return Err(Error::Domain("sample size must be at least 1".into()));
    }
    let values = (0..n)
        .map(|_| (petersburg_exponent(rng) as f64).exp2())
        .collect();
    Ok(SampleBatch {
        values,
        model: serde_json::to_value(TailModel::petersburg().to_doc()).expect("model serializes"),
        seed: rng.seed(),
        stream_id: rng.stream_id(),
        transform: Transform::Raw,
        symmetrized: false,
    })
}

/// Draws `x = quantile(U T(x0))`, optionally with an independent random sign.
pub fn sample_tail_model(
    model: &TailModel,
    n: usize,
    rng: &mut RngStream,
    symmetrize: bool,
) -> Result<SampleBatch> {
    if n == 0 {
        return Err(Error::Domain("sample size must be at least 1".into()));
    }
    let mass = model.total_mass();
    if !mass.is_finite() {
        return Err(Error::Domain(
            "model has infinite mass above x0 = 0 and is not a probability law".into(),
        ));
    }
    let mut values = Vec::with_capacity(n);
    for _ in 0..n {
        let x = model.quantile(rng.uniform_open0() * mass)?;
        values.push(if symmetrize { rng.sign() * x } else { x });
    }
    Ok(SampleBatch {
        values,
        model: serde_json::to_value(model.to_doc()).expect("model serializes"),
        seed: rng.seed(),
        stream_id: rng.stream_id(),
        transform: Transform::Raw,
        symmetrized: symmetrize,
    })
}

/// Points above a cutoff of a Poisson process on (0, inf) whose intensity
/// measure has tail `T`, in decreasing order.
#[derive(Debug, Clone)]
pub struct PoissonPointSet {
    pub points: Vec<f64>,
    pub cutoff: f64,
    /// Unit-rate arrivals `Gamma_1 < Gamma_2 < ...` with `points[p] = T^{<-}(Gamma_p)`.
    pub arrival_times: Vec<f64>,
    pub intensity: TailModel,
}

impl PoissonPointSet {
    pub fn sum(&self) -> f64 {
        self.points.iter().sum()
    }
}

fn expected_points(model: &TailModel, cutoff: f64) -> Result<f64> {
    if !(cutoff > 0.0) {
        return Err(Error::Domain(format!("cutoff t = {cutoff} must be positive")));
    }
    let level = model.tail_clamped(cutoff);
    if !(level < MAX_EXPECTED_POINTS) {
        return Err(Error::Resource(format!(
            "expected point count T(t) = {level:e} exceeds {MAX_EXPECTED_POINTS:e}"
        )));
    }
    Ok(level)
}

/// Maps unit-rate Poisson arrivals through the tail quantile, stopping at the
/// first arrival `>= T(t)`. The count is Poisson with mean `T(t)`.
pub fn sample_poisson_points(
    model: &TailModel,
    cutoff: f64,
    rng: &mut RngStream,
) -> Result<PoissonPointSet> {
    let level = expected_points(model, cutoff)?;
    let mut points = Vec::new();
    let mut arrival_times = Vec::new();
    let mut arrival = rng.exp1();
    while arrival < level {
        points.push(model.quantile_unchecked(arrival));
        arrival_times.push(arrival);
        arrival += rng.exp1();
    }
    Ok(PoissonPointSet {
        points,
        cutoff,
        arrival_times,
        intensity: model.clone(),
    })
}

/// Sum of the points above a cutoff minus the regime-dependent centering.
///
/// Centering: none for `alpha < 1` or for symmetric (sign-randomized)
/// points; `int_{(t, inf)} x dmu` for `alpha > 1`; the truncated mean
/// `int_{(t, 1]} x dmu` for `alpha = 1`.
#[derive(Debug, Clone)]
pub struct PoissonSumSampler {
    model: TailModel,
    cutoff: f64,
    level: f64,
    centering: f64,
    symmetric: bool,
}

impl PoissonSumSampler {
    pub fn new(model: &TailModel, cutoff: f64, symmetric: bool) -> Result<Self> {
        let level = expected_points(model, cutoff)?;
        let alpha = model.alpha();
        if !(alpha < 2.0) {
            return Err(Error::Domain(format!("Poisson sums need alpha < 2, got {alpha}")));
        }
        let eff = cutoff.max(model.x0());
        let centering = if symmetric || alpha < 1.0 {
            0.0
        } else if alpha > 1.0 {
            model.first_moment_above(eff)?
        } else {
            let one = model.x0().max(1.0);
            if eff < one {
                model.first_moment_between(eff, one)?
            } else {
                -model.first_moment_between(one, eff)?
            }
        };
        Ok(PoissonSumSampler {
            model: model.clone(),
            cutoff,
            level,
            centering,
            symmetric,
        })
    }

    pub fn centering(&self) -> f64 {
        self.centering
    }

    pub fn cutoff(&self) -> f64 {
        self.cutoff
    }

    pub fn sample(&self, rng: &mut RngStream) -> f64 {
        let mut sum = 0.0;
        let mut arrival = rng.exp1();
        while arrival < self.level {
            let y = self.model.quantile_unchecked(arrival);
            sum += if self.symmetric { rng.sign() * y } else { y };
            arrival += rng.exp1();
        }
        sum - self.centering
    }
}

/// One draw of the centered Poisson sum; see [`PoissonSumSampler`].
pub fn sample_semistable_poisson_sum(
    model: &TailModel,
    cutoff: f64,
    symmetric: bool,
    rng: &mut RngStream,
) -> Result<f64> {
    Ok(PoissonSumSampler::new(model, cutoff, symmetric)?.sample(rng))
}

/// Number of explicit terms of a LePage series.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LepageTerms {
    Auto,
    Fixed(usize),
}

/// `sum_p eps_p Z_p^{-1/alpha}` with `Z_p` the arrival times of a unit-rate
/// Poisson process and `eps_p` uniform signs (or all `+1`).
///
/// The series is cut after `P` terms; the remainder, a Poisson sum over
/// arrivals beyond `Z_P`, is replaced by its conditional mean
/// `Z_P^{1-1/alpha} / (1/alpha - 1)` in positive mode and by a centered
/// Gaussian with the conditional variance `Z_P^{1-2/alpha} / (2/alpha - 1)`
/// in symmetric mode. `Auto` picks the smallest `P` (at least 16, at most
/// [`LEPAGE_MAX_TERMS`]) with `sum_{p > P} p^{-2/alpha} < 1e-6` (symmetric)
/// or `sum_{p > P} p^{-1/alpha} < 1e-6` (positive).
#[derive(Debug, Clone, Copy)]
pub struct LepageSampler {
    alpha: f64,
    symmetric: bool,
    terms: usize,
}

impl LepageSampler {
    pub fn new(alpha: f64, terms: LepageTerms, symmetric: bool) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 2.0) {
            return Err(Error::Domain(format!("LePage series needs alpha in (0, 2), got {alpha}")));
        }
        if !symmetric && alpha >= 1.0 {
            return Err(Error::Contract(format!(
                "positive LePage series diverges without centering for alpha = {alpha} >= 1"
            )));
        }
        let terms = match terms {
            LepageTerms::Fixed(0) => {
                return Err(Error::Domain("LePage series needs at least one term".into()))
            }
            LepageTerms::Fixed(p) => p,
            LepageTerms::Auto => auto_terms(if symmetric { 2.0 / alpha } else { 1.0 / alpha }),
        };
        Ok(LepageSampler { alpha, symmetric, terms })
    }

    pub fn terms(&self) -> usize {
        self.terms
    }

    /// Draws one value and writes the explicit signed terms into `out` (if given).
    fn draw(&self, rng: &mut RngStream, mut out: Option<&mut Vec<f64>>) -> f64 {
        let inv = 1.0 / self.alpha;
        let mut arrival = 0.0;
        let mut sum = 0.0;
        for _ in 0..self.terms {
            arrival += rng.exp1();
            let mut term = power_neg(arrival, inv);
            if self.symmetric {
                term *= rng.sign();
            }
            if let Some(v) = out.as_deref_mut() {
                v.push(term);
            }
            sum += term;
        }
        let rest = if self.symmetric {
            let var = arrival.powf(1.0 - 2.0 * inv) / (2.0 * inv - 1.0);
            let z: f64 = StandardNormal.sample(rng.rng());
            var.sqrt() * z
        } else {
            arrival.powf(1.0 - inv) / (inv - 1.0)
        };
        sum + rest
    }

    pub fn sample(&self, rng: &mut RngStream) -> f64 {
        self.draw(rng, None)
    }

    /// Draws one value together with its explicit terms `eps_p Z_p^{-1/alpha}`.
    pub fn sample_with_terms(&self, rng: &mut RngStream) -> (f64, Vec<f64>) {
        let mut terms = Vec::with_capacity(self.terms);
        let v = self.draw(rng, Some(&mut terms));
        (v, terms)
    }
}

fn auto_terms(exponent: f64) -> usize {
    // sum_{p > P} p^{-a} <= int_P^inf x^{-a} dx = P^{1-a} / (a - 1)
    let e = exponent - 1.0;
    let p = (LEPAGE_TAIL_TOL * e).powf(-1.0 / e).ceil();
    if p.is_finite() {
        (p as usize).clamp(LEPAGE_MIN_TERMS, LEPAGE_MAX_TERMS)
    } else {
        LEPAGE_MAX_TERMS
    }
}

/// One LePage draw; see [`LepageSampler`].
pub fn sample_lepage(
    alpha: f64,
    terms: LepageTerms,
    symmetric: bool,
    rng: &mut RngStream,
) -> Result<f64> {
    Ok(LepageSampler::new(alpha, terms, symmetric)?.sample(rng))
}

/// `x^{-e}` with fast paths for the common exponents.
#[inline]
pub(crate) fn power_neg(x: f64, e: f64) -> f64 {
    if e == 2.0 {
        1.0 / (x * x)
    } else if e == 1.0 {
        1.0 / x
    } else {
        x.powf(-e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn petersburg_uniform_map() {
        assert_eq!(petersburg_from_uniform(0.3), 4.0);
        assert_eq!(petersburg_from_uniform(0.6), 2.0);
        assert_eq!(petersburg_from_uniform(1.0), 2.0);
    }

    #[test]
    fn integer_exponent_matches_uniform_map() {
        let mut a = RngStream::new(11, 0);
        let mut b = RngStream::new(11, 0);
        for _ in 0..100_000 {
            let k = petersburg_exponent(&mut a);
            let r = b.next_u64() >> 11;
            let u = (r + 1) as f64 / (1u64 << 53) as f64;
            assert_eq!((k as f64).exp2(), petersburg_from_uniform(u));
        }
        // extreme words
        assert_eq!(((1u64 << 53) - 1).leading_zeros() - 10, 1);
        assert_eq!(0u64.leading_zeros() - 10, 54);
    }

    #[test]
    fn petersburg_batches_reproducible() {
        let a = sample_petersburg(50, &mut RngStream::new(1, 3)).unwrap();
        let b = sample_petersburg(50, &mut RngStream::new(1, 3)).unwrap();
        assert_eq!(a, b);
        assert!(a.values.iter().all(|v| v.log2().fract() == 0.0 && *v >= 2.0));
        assert!(sample_petersburg(0, &mut RngStream::new(1, 3)).is_err());
    }

    #[test]
    fn tail_model_draw_via_quantile() {
        let m = TailModel::pure(0.5, 1.0, 1.0).unwrap();
        assert_eq!(m.quantile(0.25).unwrap(), 16.0);
        let infinite = TailModel::pure(0.5, 1.0, 0.0).unwrap();
        assert!(sample_tail_model(&infinite, 5, &mut RngStream::new(0, 0), false).is_err());
    }

    #[test]
    fn poisson_points_are_power_images_of_arrivals() {
        let m = TailModel::pure(0.5, 1.0, 0.0).unwrap();
        let set = sample_poisson_points(&m, 1e-4, &mut RngStream::new(4, 0)).unwrap();
        assert!(!set.points.is_empty());
        for (y, g) in set.points.iter().zip(&set.arrival_times) {
            assert_abs_diff_eq!(*y, g.powf(-2.0), epsilon = 1e-12 * y);
            assert!(*y > set.cutoff);
        }
        assert!(set.points.windows(2).all(|w| w[0] > w[1]));
    }

    #[test]
    fn poisson_point_bound() {
        let m = TailModel::pure(0.5, 1.0, 0.0).unwrap();
        assert!(matches!(
            sample_poisson_points(&m, 1e-20, &mut RngStream::new(0, 0)),
            Err(Error::Resource(_))
        ));
        assert!(sample_poisson_points(&m, 0.0, &mut RngStream::new(0, 0)).is_err());
    }

    #[test]
    fn empty_process_sums_to_zero() {
        let m = TailModel::pure(0.5, 1.0, 0.0).unwrap();
        // T(t) = 1e-12: the first arrival is beyond the level
        let t = 1e24;
        for i in 0..20 {
            let v = sample_semistable_poisson_sum(&m, t, false, &mut RngStream::new(8, i)).unwrap();
            assert_eq!(v, 0.0);
        }
    }

    #[test]
    fn centering_by_regime() {
        let half = TailModel::pure(0.5, 1.0, 0.0).unwrap();
        assert_eq!(PoissonSumSampler::new(&half, 1e-3, false).unwrap().centering(), 0.0);
        let three_halves = TailModel::pure(1.5, 1.0, 0.0).unwrap();
        let s = PoissonSumSampler::new(&three_halves, 1e-2, false).unwrap();
        assert_abs_diff_eq!(s.centering(), 3.0 * 0.1f64.powf(-1.0), epsilon = 1e-9);
        assert_eq!(PoissonSumSampler::new(&three_halves, 1e-2, true).unwrap().centering(), 0.0);
        let p = TailModel::petersburg_intensity();
        let s = PoissonSumSampler::new(&p, (-12f64).exp2(), false).unwrap();
        assert_abs_diff_eq!(s.centering(), 12.0, epsilon = 1e-12);
    }

    #[test]
    fn lepage_contracts() {
        assert!(matches!(
            LepageSampler::new(1.0, LepageTerms::Auto, false),
            Err(Error::Contract(_))
        ));
        assert!(LepageSampler::new(2.0, LepageTerms::Auto, true).is_err());
        assert!(LepageSampler::new(0.5, LepageTerms::Fixed(0), false).is_err());
        assert_eq!(LepageSampler::new(0.5, LepageTerms::Auto, true).unwrap().terms(), 70);
        assert_eq!(LepageSampler::new(0.25, LepageTerms::Auto, false).unwrap().terms(), 70);
        assert_eq!(LepageSampler::new(0.5, LepageTerms::Auto, false).unwrap().terms(), LEPAGE_MAX_TERMS);
        assert_eq!(
            LepageSampler::new(1.5, LepageTerms::Auto, true).unwrap().terms(),
            LEPAGE_MAX_TERMS
        );
    }

    #[test]
    fn lepage_terms_decrease_in_modulus() {
        let s = LepageSampler::new(0.8, LepageTerms::Fixed(40), true).unwrap();
        let (_, terms) = s.sample_with_terms(&mut RngStream::new(2, 2));
        assert_eq!(terms.len(), 40);
        assert!(terms.windows(2).all(|w| w[0].abs() > w[1].abs()));
    }
}
