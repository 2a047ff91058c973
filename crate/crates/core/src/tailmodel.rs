//! Heavy-tail models `T(x) = P(X > x) = c x^{-alpha} psi(log_q x)` with a
//! periodic modulation `psi` of period `1/alpha`.

use crate::error::{Error, Result};
use crate::quad;
use serde::{Deserialize, Serialize};

/// Number of points in the monotonicity check (spread over two periods).
const MONOTONE_CHECK_POINTS: usize = 1024;
/// Minimum resolution of a user-supplied modulation grid.
pub const MIN_GRID_POINTS: usize = 64;

/// Periodic modulation of a power tail.
#[derive(Debug, Clone, PartialEq)]
pub enum Psi {
    /// `psi == v`; the pure power tail.
    Const(f64),
    /// `psi(u) = 2^{frac(u)}`, which turns `x^{-1}` into `2^{-floor(log2 x)}`.
    Petersburg,
    /// One period sampled on a uniform grid starting at `u = 0`, linearly
    /// interpolated and wrapped.
    Grid(Vec<f64>),
}

/// An immutable, validated tail model.
#[derive(Debug, Clone, PartialEq)]
pub struct TailModel {
    alpha: f64,
    q: u32,
    c: f64,
    psi: Psi,
    x0: f64,
}

impl TailModel {
    pub fn new(alpha: f64, q: u32, c: f64, psi: Psi, x0: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 2.0) {
            return Err(Error::Validation(format!("alpha = {alpha} outside (0, 2]")));
        }
        if q < 2 {
            return Err(Error::Validation(format!("base q = {q} must be at least 2")));
        }
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::Validation(format!("scale c = {c} must be positive")));
        }
        if !(x0 >= 0.0 && x0.is_finite()) {
            return Err(Error::Validation(format!("x0 = {x0} must be finite and >= 0")));
        }
        match &psi {
            Psi::Const(v) => {
                if !(*v > 0.0 && v.is_finite()) {
                    return Err(Error::Validation(format!("constant psi = {v} must be positive")));
                }
            }
            Psi::Petersburg => {
                // psi has period 1, so the period condition forces alpha = 1;
                // the closed forms below assume dyadic blocks.
                if alpha != 1.0 || q != 2 {
                    return Err(Error::Validation(
                        "petersburg modulation requires alpha = 1 and q = 2".into(),
                    ));
                }
            }
            Psi::Grid(values) => {
                if values.len() < MIN_GRID_POINTS {
                    return Err(Error::Validation(format!(
                        "psi grid has {} points, need at least {MIN_GRID_POINTS}",
                        values.len()
                    )));
                }
                if let Some(v) = values.iter().find(|v| !(**v > 0.0 && v.is_finite())) {
                    return Err(Error::Validation(format!(
                        "psi grid value {v} is not positive and finite"
                    )));
                }
            }
        }
        let model = TailModel { alpha, q, c, psi, x0 };
        model.check_monotone()?;
        Ok(model)
    }

    /// Pure power tail `c x^{-alpha}` for `x >= x0`.
    pub fn pure(alpha: f64, c: f64, x0: f64) -> Result<Self> {
        Self::new(alpha, 2, c, Psi::Const(1.0), x0)
    }

    /// The St. Petersburg tail: `T(x) = 2^{-floor(log2 x)}` for `x >= 2`.
    pub fn petersburg() -> Self {
        Self::new(1.0, 2, 1.0, Psi::Petersburg, 2.0).expect("builtin model is valid")
    }

    /// The St. Petersburg tail extended to a Levy measure on `(0, inf)`:
    /// atoms of mass `2^{-l}` at every `2^l`, `l` in Z.
    pub fn petersburg_intensity() -> Self {
        Self::new(1.0, 2, 1.0, Psi::Petersburg, 0.0).expect("builtin model is valid")
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    pub fn q(&self) -> u32 {
        self.q
    }
    pub fn c(&self) -> f64 {
        self.c
    }
    pub fn psi(&self) -> &Psi {
        &self.psi
    }
    pub fn x0(&self) -> f64 {
        self.x0
    }

    /// Same model with a different lower support bound.
    pub fn with_x0(&self, x0: f64) -> Result<Self> {
        Self::new(self.alpha, self.q, self.c, self.psi.clone(), x0)
    }

    /// Length of one period of `psi` in `log_q x` units.
    pub fn period(&self) -> f64 {
        1.0 / self.alpha
    }

    /// `T(x0)`, the total mass above `x0` (infinite when `x0 = 0`).
    pub fn total_mass(&self) -> f64 {
        if self.x0 == 0.0 {
            f64::INFINITY
        } else {
            self.raw_tail(self.x0)
        }
    }

    pub fn psi_at(&self, u: f64) -> f64 {
        match &self.psi {
            Psi::Const(v) => *v,
            Psi::Petersburg => (u - u.floor()).exp2(),
            Psi::Grid(values) => {
                let m = values.len();
                let w = u / self.period();
                let pos = (w - w.floor()) * m as f64;
                let i = (pos.floor() as usize).min(m - 1);
                let f = pos - i as f64;
                values[i] * (1.0 - f) + values[(i + 1) % m] * f
            }
        }
    }

    fn psi_bounds(&self) -> (f64, f64) {
        match &self.psi {
            Psi::Const(v) => (*v, *v),
            Psi::Petersburg => (1.0, 2.0),
            Psi::Grid(values) => values
                .iter()
                .fold((f64::INFINITY, 0.0f64), |(lo, hi), v| (lo.min(*v), hi.max(*v))),
        }
    }

    fn log_q(&self, x: f64) -> f64 {
        if self.q == 2 {
            x.log2()
        } else {
            x.ln() / (self.q as f64).ln()
        }
    }

    /// Tail formula without the domain check.
    fn raw_tail(&self, x: f64) -> f64 {
        match &self.psi {
            Psi::Const(v) => self.c * v * x.powf(-self.alpha),
            Psi::Petersburg => self.c * (-(floor_log2(x) as f64)).exp2(),
            Psi::Grid(_) => self.c * x.powf(-self.alpha) * self.psi_at(self.log_q(x)),
        }
    }

    /// `T(x) = P(X > x)`; requires `x >= x0` and `x > 0`.
    pub fn tail(&self, x: f64) -> Result<f64> {
        if !(x >= self.x0 && x > 0.0) {
            return Err(Error::Domain(format!(
                "tail evaluated at x = {x} below the support bound x0 = {}",
                self.x0
            )));
        }
        Ok(self.raw_tail(x))
    }

    /// Tail with the convention that the measure puts no mass below `x0`.
    pub(crate) fn tail_clamped(&self, x: f64) -> f64 {
        if x <= self.x0 {
            self.total_mass()
        } else {
            self.raw_tail(x)
        }
    }

    /// Generalized inverse `inf{x >= x0 : T(x) <= u}` for `0 < u <= T(x0)`.
    pub fn quantile(&self, u: f64) -> Result<f64> {
        let mass = self.total_mass();
        if !(u > 0.0 && u <= mass) {
            return Err(Error::Domain(format!(
                "quantile level u = {u} outside (0, {mass}]"
            )));
        }
        Ok(self.quantile_unchecked(u))
    }

    pub(crate) fn quantile_unchecked(&self, u: f64) -> f64 {
        match &self.psi {
            Psi::Const(v) => {
                let r = (self.c * v) / u;
                let x = if self.alpha == 0.5 {
                    r * r
                } else if self.alpha == 1.0 {
                    r
                } else {
                    r.powf(1.0 / self.alpha)
                };
                x.max(self.x0)
            }
            Psi::Petersburg => {
                // smallest k with c 2^{-k} <= u
                let mut k = (self.c / u).log2().ceil() as i32;
                while self.c * (-(k as f64)).exp2() > u {
                    k += 1;
                }
                while self.c * (-((k - 1) as f64)).exp2() <= u {
                    k -= 1;
                }
                (k as f64).exp2().max(self.x0)
            }
            Psi::Grid(_) => self.bisect_quantile(u),
        }
    }

    fn bisect_quantile(&self, u: f64) -> f64 {
        let (pmin, pmax) = self.psi_bounds();
        let inv = 1.0 / self.alpha;
        // c x^{-a} pmin > u below lo_bound and c x^{-a} pmax <= u above hi_bound
        let mut lo = (self.c * pmin / u).powf(inv).max(self.x0);
        if self.raw_tail_or_mass(lo) <= u {
            return lo;
        }
        let mut hi = (self.c * pmax / u).powf(inv).max(lo);
        while self.raw_tail(hi) > u {
            hi *= 1.0 + 1e-9;
        }
        while hi / lo - 1.0 > 1e-13 {
            let mid = (lo * hi).sqrt();
            if mid <= lo || mid >= hi {
                break;
            }
            if self.raw_tail(mid) <= u {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi
    }

    fn raw_tail_or_mass(&self, x: f64) -> f64 {
        if x <= 0.0 {
            f64::INFINITY
        } else {
            self.raw_tail(x)
        }
    }

    fn check_monotone(&self) -> Result<()> {
        let u0 = if self.x0 > 0.0 { self.log_q(self.x0) } else { 0.0 };
        let span = 2.0 * self.period();
        let qf = self.q as f64;
        let mut prev = f64::INFINITY;
        for i in 0..MONOTONE_CHECK_POINTS {
            let u = u0 + span * i as f64 / (MONOTONE_CHECK_POINTS - 1) as f64;
            let x = qf.powf(u).max(self.x0);
            if x <= 0.0 {
                continue;
            }
            let t = self.raw_tail(x);
            if t > prev * (1.0 + 1e-12) {
                return Err(Error::Validation(format!(
                    "tail increases near x = {x:.6e}; T must be nonincreasing"
                )));
            }
            prev = t;
        }
        Ok(())
    }

    /// `int_a^b u^k T(u) du` for `x0 <= a <= b` (`a > 0`).
    pub fn tail_moment_integral(&self, k: u32, a: f64, b: f64) -> Result<f64> {
        if !(a > 0.0 && a >= self.x0 && b >= a) {
            return Err(Error::Domain(format!(
                "tail integral bounds [{a}, {b}] invalid for x0 = {}",
                self.x0
            )));
        }
        if a == b {
            return Ok(0.0);
        }
        let kp1 = k as f64 + 1.0;
        match &self.psi {
            Psi::Const(v) => {
                let e = kp1 - self.alpha;
                let cv = self.c * v;
                Ok(if e.abs() < 1e-14 {
                    cv * (b / a).ln()
                } else {
                    cv * (b.powf(e) - a.powf(e)) / e
                })
            }
            Psi::Petersburg => {
                // T is constant c 2^{-j} on [2^j, 2^{j+1})
                let mut acc = 0.0;
                let mut comp = 0.0;
                let mut lo = a;
                while lo < b {
                    let j = floor_log2(lo);
                    let hi = ((j + 1) as f64).exp2().min(b);
                    let level = self.c * (-(j as f64)).exp2();
                    let piece = level * (hi.powf(kp1) - lo.powf(kp1)) / kp1;
                    neumaier_add(&mut acc, &mut comp, piece);
                    lo = hi;
                }
                Ok(acc + comp)
            }
            Psi::Grid(values) => {
                // Split at grid knots; integrate in s = ln u where the integrand is smooth.
                let step = self.period() / values.len() as f64;
                let ln_q = (self.q as f64).ln();
                let ua = self.log_q(a);
                let ub = self.log_q(b);
                let mut acc = 0.0;
                let mut comp = 0.0;
                let mut u = ua;
                while u < ub {
                    let mut idx = (u / step).floor() + 1.0;
                    if idx * step <= u {
                        idx += 1.0;
                    }
                    let next = (idx * step).min(ub);
                    let (sa, sb) = (u * ln_q, next * ln_q);
                    let f = |s: f64| {
                        let x = s.exp();
                        x.powf(kp1) * self.raw_tail(x)
                    };
                    let scale = f(sa).abs().max(f(sb).abs()) * (sb - sa);
                    let piece = quad::integrate(f, sa, sb, scale * 1e-12, 1e-11)?;
                    neumaier_add(&mut acc, &mut comp, piece);
                    u = next;
                }
                Ok(acc + comp)
            }
        }
    }

    /// `int_{(a, b]} x dmu(x)` of the measure with tail `T`, by parts.
    pub fn first_moment_between(&self, a: f64, b: f64) -> Result<f64> {
        Ok(a * self.raw_tail(a) - b * self.raw_tail(b) + self.tail_moment_integral(0, a, b)?)
    }

    /// `int_{(a, inf)} x dmu(x)`; finite only for `alpha > 1`.
    ///
    /// Uses the self-similarity `T(q^{1/alpha} x) = T(x) / q`: the integral of
    /// `T` over successive period blocks is a geometric series.
    pub fn first_moment_above(&self, a: f64) -> Result<f64> {
        if self.alpha <= 1.0 {
            return Err(Error::Domain(format!(
                "mean above a cutoff is infinite for alpha = {}",
                self.alpha
            )));
        }
        let ratio = (self.q as f64).powf(1.0 / self.alpha - 1.0);
        let block_end = a * (self.q as f64).powf(self.period());
        let block = self.tail_moment_integral(0, a, block_end)?;
        Ok(a * self.raw_tail(a) + block / (1.0 - ratio))
    }

    /// `x^2 T(x) / E[X^2; X <= x]`: tends to 0 exactly in the Gaussian domain.
    pub fn gaussian_criterion_ratio(&self, x: f64) -> Result<f64> {
        if !(x > self.x0) {
            return Err(Error::Domain(format!(
                "criterion needs x = {x} above x0 = {}",
                self.x0
            )));
        }
        let lower = if self.x0 > 0.0 {
            self.x0
        } else {
            // x^2 T(x) and the integral vanish at 0 for alpha < 2
            (x * 1e-12).max(f64::MIN_POSITIVE)
        };
        let tx = self.raw_tail(x);
        let boundary = if self.x0 > 0.0 { self.x0 * self.x0 * self.raw_tail(self.x0) } else { 0.0 };
        let m2 = -x * x * tx + boundary + 2.0 * self.tail_moment_integral(1, lower, x)?;
        Ok(x * x * tx / m2)
    }

    /// JSON document form.
    pub fn to_doc(&self) -> TailModelDoc {
        let psi = match &self.psi {
            Psi::Const(v) => PsiDoc {
                kind: PsiKind::Const,
                values: if *v == 1.0 { None } else { Some(vec![*v]) },
            },
            Psi::Petersburg => PsiDoc { kind: PsiKind::Petersburg, values: None },
            Psi::Grid(values) => PsiDoc { kind: PsiKind::Grid, values: Some(values.clone()) },
        };
        TailModelDoc { alpha: self.alpha, q: self.q, c: self.c, x0: self.x0, psi }
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let doc: TailModelDoc =
            serde_json::from_str(s).map_err(|e| Error::Validation(format!("bad model JSON: {e}")))?;
        Self::try_from(doc)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_doc()).expect("model document serializes")
    }
}

/// Serialized tail model:
/// `{"alpha", "q", "c", "x0", "psi": {"kind": "const"|"petersburg"|"grid", "values": [...]}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailModelDoc {
    pub alpha: f64,
    pub q: u32,
    pub c: f64,
    pub x0: f64,
    pub psi: PsiDoc,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PsiDoc {
    pub kind: PsiKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PsiKind {
    Const,
    Petersburg,
    Grid,
}

impl TryFrom<TailModelDoc> for TailModel {
    type Error = Error;

    fn try_from(doc: TailModelDoc) -> Result<Self> {
        let psi = match doc.psi.kind {
            PsiKind::Const => match doc.psi.values.as_deref() {
                None | Some([]) => Psi::Const(1.0),
                Some([v]) => Psi::Const(*v),
                Some(_) => {
                    return Err(Error::Validation("const psi takes at most one value".into()))
                }
            },
            PsiKind::Petersburg => Psi::Petersburg,
            PsiKind::Grid => Psi::Grid(doc.psi.values.unwrap_or_default()),
        };
        TailModel::new(doc.alpha, doc.q, doc.c, psi, doc.x0)
    }
}

/// Gaussian-domain ratio for an arbitrary tail function on `[x0, inf)`.
///
/// The truncated second moment is computed by adaptive quadrature; use this
/// for tails that are not of the modulated power form (bounded variables,
/// mixtures).
pub fn gaussian_criterion_ratio_of<F: Fn(f64) -> f64>(tail: F, x0: f64, x: f64) -> Result<f64> {
    if !(x > x0) {
        return Err(Error::Domain(format!("criterion needs x = {x} above x0 = {x0}")));
    }
    let tx = tail(x);
    let integral = quad::integrate(|u| u * tail(u), x0, x, 0.0, 1e-10)?;
    let m2 = -x * x * tx + x0 * x0 * tail(x0) + 2.0 * integral;
    Ok(x * x * tx / m2)
}

/// `floor(log2 x)` for positive finite `x`, exact.
pub(crate) fn floor_log2(x: f64) -> i32 {
    let bits = x.to_bits();
    let exp = ((bits >> 52) & 0x7ff) as i32;
    if exp == 0 {
        // subnormal
        let e = x.log2().floor() as i32;
        if (e as f64).exp2() > x {
            e - 1
        } else {
            e
        }
    } else {
        exp - 1023
    }
}

#[inline]
pub(crate) fn neumaier_add(sum: &mut f64, comp: &mut f64, x: f64) {
    let t = *sum + x;
    if sum.abs() >= x.abs() {
        *comp += (*sum - t) + x;
    } else {
        *comp += (x - t) + *sum;
    }
    *sum = t;
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn pure_half() -> TailModel {
        TailModel::pure(0.5, 1.0, 1.0).unwrap()
    }

    #[test]
    fn petersburg_tail_values() {
        let m = TailModel::petersburg();
        assert_eq!(m.tail(2.0).unwrap(), 0.5);
        assert_eq!(m.tail(4.0).unwrap(), 0.25);
        assert_eq!(m.tail(3.0).unwrap(), 0.5);
        assert_eq!(m.tail(8.0).unwrap(), 0.125);
    }

    #[test]
    fn pure_tail_values() {
        let m = pure_half();
        assert_eq!(m.tail(1.0).unwrap(), 1.0);
        assert_eq!(m.tail(4.0).unwrap(), 0.5);
        assert!(matches!(m.tail(0.5), Err(Error::Domain(_))));
    }

    #[test]
    fn quantile_examples() {
        let p = TailModel::petersburg();
        assert_eq!(p.quantile(0.3).unwrap(), 4.0);
        assert_eq!(p.quantile(0.5).unwrap(), 2.0);
        assert_eq!(pure_half().quantile(0.25).unwrap(), 16.0);
        assert!(p.quantile(0.0).is_err());
        assert!(p.quantile(0.6).is_err());
    }

    #[test]
    fn petersburg_masses_exact() {
        let m = TailModel::petersburg();
        for k in 2..=30 {
            let x = (k as f64).exp2();
            let left = m.tail(x * (1.0 - f64::EPSILON)).unwrap();
            let mass = left - m.tail(x).unwrap();
            assert_eq!(mass, (-(k as f64)).exp2(), "k = {k}");
        }
    }

    #[test]
    fn rejects_bad_models() {
        assert!(TailModel::new(0.0, 2, 1.0, Psi::Const(1.0), 1.0).is_err());
        assert!(TailModel::new(2.5, 2, 1.0, Psi::Const(1.0), 1.0).is_err());
        assert!(TailModel::new(1.0, 1, 1.0, Psi::Const(1.0), 1.0).is_err());
        assert!(TailModel::new(0.5, 2, 1.0, Psi::Petersburg, 2.0).is_err());
        assert!(TailModel::new(1.0, 2, 1.0, Psi::Grid(vec![1.0; 10]), 1.0).is_err());
        // strongly oscillating modulation makes T increase
        let wild: Vec<f64> = (0..64)
            .map(|i| 1.0 + 0.9 * (2.0 * std::f64::consts::PI * 5.0 * i as f64 / 64.0).sin())
            .collect();
        assert!(matches!(
            TailModel::new(1.0, 2, 1.0, Psi::Grid(wild), 1.0),
            Err(Error::Validation(_))
        ));
    }

    #[test]
    fn gaussian_ratio_pure_tails() {
        let m = TailModel::pure(0.5, 1.0, 1.0).unwrap();
        assert_abs_diff_eq!(m.gaussian_criterion_ratio(1e6).unwrap(), 3.0, epsilon = 1e-3);
        let m = TailModel::pure(1.9, 1.0, 1.0).unwrap();
        // (2 - 1.9) / 1.9 plus an x^{-0.1} finite-size correction
        let r = m.gaussian_criterion_ratio(1e6).unwrap();
        let exact = {
            let (a, x) = (1.9f64, 1e6f64);
            let m2 = -x.powf(2.0 - a) + 1.0 + 2.0 * (x.powf(2.0 - a) - 1.0) / (2.0 - a);
            x.powf(2.0 - a) / m2
        };
        assert_abs_diff_eq!(r, exact, epsilon = 1e-9);
        assert!(m.gaussian_criterion_ratio(1.0).is_err());
    }

    #[test]
    fn gaussian_ratio_bounded_variable() {
        // uniform on [1, 3]
        let tail = |u: f64| ((3.0 - u) / 2.0).clamp(0.0, 1.0);
        assert_eq!(gaussian_criterion_ratio_of(tail, 1.0, 5.0).unwrap(), 0.0);
        assert_eq!(gaussian_criterion_ratio_of(tail, 1.0, 3.5).unwrap(), 0.0);
        // agrees with the closed-form path on a pure tail
        let m = TailModel::pure(1.2, 1.0, 1.0).unwrap();
        let generic = gaussian_criterion_ratio_of(|u| u.powf(-1.2), 1.0, 1e3).unwrap();
        assert_abs_diff_eq!(generic, m.gaussian_criterion_ratio(1e3).unwrap(), epsilon = 1e-8);
    }

    #[test]
    fn gaussian_ratio_stabilizes() {
        let m = TailModel::pure(0.5, 1.0, 1.0).unwrap();
        let errs: Vec<f64> = [1e3, 1e4, 1e5, 1e6]
            .iter()
            .map(|x| (m.gaussian_criterion_ratio(*x).unwrap() - 3.0).abs())
            .collect();
        assert!(errs.windows(2).all(|w| w[1] < w[0]), "{errs:?}");
    }

    #[test]
    fn moments_match_closed_forms() {
        let m = TailModel::pure(1.5, 1.0, 0.0).unwrap();
        // int_{(a, inf)} x dmu = alpha/(alpha-1) a^{1-alpha}
        let a = 0.01;
        assert_abs_diff_eq!(
            m.first_moment_above(a).unwrap(),
            3.0 * a.powf(-0.5),
            epsilon = 1e-10
        );
        let p = TailModel::petersburg_intensity();
        // atoms 2^j, j = -k+1..0, each contributes 1
        assert_abs_diff_eq!(
            p.first_moment_between((-10f64).exp2(), 1.0).unwrap(),
            10.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn grid_model_quantile_inverts_tail() {
        let values: Vec<f64> = (0..128)
            .map(|i| 1.0 + 0.1 * (2.0 * std::f64::consts::PI * i as f64 / 128.0).cos())
            .collect();
        let m = TailModel::new(1.5, 3, 2.0, Psi::Grid(values), 1.0).unwrap();
        for &u in &[1e-6, 0.01, 0.3, 1.0] {
            let x = m.quantile(u).unwrap();
            assert!(m.tail(x).unwrap() <= u * (1.0 + 1e-9));
            if x > m.x0() {
                assert!(m.tail(x * (1.0 - 1e-11)).unwrap() > u * (1.0 - 1e-9));
            }
        }
    }

    #[test]
    fn grid_first_moment_uses_self_similarity() {
        let values: Vec<f64> = (0..64)
            .map(|i| 1.0 + 0.05 * (2.0 * std::f64::consts::PI * i as f64 / 64.0).sin())
            .collect();
        let m = TailModel::new(1.5, 2, 1.0, Psi::Grid(values), 0.0).unwrap();
        let a = 0.37;
        let direct = a * m.tail(a).unwrap() + m.tail_moment_integral(0, a, 1e9).unwrap();
        // truncation beyond 1e9 is about 2 * 1e9^{-1/2}
        let rest = 2.0 * 1.05 * 1e9f64.powf(-0.5);
        let closed = m.first_moment_above(a).unwrap();
        assert!((closed - direct).abs() < rest, "{closed} vs {direct}");
    }

    #[test]
    fn json_roundtrip() {
        let m = TailModel::petersburg();
        let s = m.to_json();
        assert_eq!(TailModel::from_json(&s).unwrap(), m);
        let s = r#"{"alpha": 0.5, "q": 2, "c": 1.0, "x0": 1.0, "psi": {"kind": "const"}}"#;
        assert_eq!(TailModel::from_json(s).unwrap(), pure_half());
        assert!(TailModel::from_json(r#"{"alpha": 0.5}"#).is_err());
    }

    #[test]
    fn floor_log2_exact() {
        assert_eq!(floor_log2(1.0), 0);
        assert_eq!(floor_log2(3.999), 1);
        assert_eq!(floor_log2(4.0), 2);
        assert_eq!(floor_log2(0.75), -1);
        assert_eq!(floor_log2(1e-310), (1e-310f64).log2().floor() as i32);
    }
}
