//! Characteristic functions in exponent form `phi(t) = exp(h(t))`, the
//! semistable family `G_gamma`, and CDF recovery by Gil-Pelaez inversion.

use crate::error::{Error, Result};
use crate::quad;
use num_complex::Complex64;
use rayon::prelude::*;
use statrs::function::erf::erfc;
use statrs::function::gamma::gamma;
use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;
use std::sync::Arc;

/// Default truncation tolerance of series exponents.
pub const DEFAULT_SERIES_TOL: f64 = 1e-12;
/// Smallest tolerance accepted by the inversion routines.
pub const MIN_INVERSION_TOL: f64 = 1e-10;
/// Largest frequency cutoff tried before declaring non-decay.
pub const MAX_FREQUENCY_CUTOFF: f64 = 1e6;

/// `e^{iu} - 1 - iu`, accurate for small `u`.
#[inline]
fn expm1_minus_iu(u: f64) -> Complex64 {
    let half = (0.5 * u).sin();
    let re = -2.0 * half * half;
    let im = if u.abs() < 0.25 {
        let u2 = u * u;
        // sin u - u
        -u * u2
            * (1.0 / 6.0
                - u2 * (1.0 / 120.0
                    - u2 * (1.0 / 5040.0
                        - u2 * (1.0 / 362_880.0
                            - u2 * (1.0 / 39_916_800.0 - u2 / 6_227_020_800.0)))))
    } else {
        u.sin() - u
    };
    Complex64::new(re, im)
}

#[derive(Default)]
struct ComplexSum {
    re: f64,
    re_c: f64,
    im: f64,
    im_c: f64,
}

impl ComplexSum {
    #[inline]
    fn add(&mut self, z: Complex64) {
        crate::tailmodel::neumaier_add(&mut self.re, &mut self.re_c, z.re);
        crate::tailmodel::neumaier_add(&mut self.im, &mut self.im_c, z.im);
    }
    fn total(&self) -> Complex64 {
        Complex64::new(self.re + self.re_c, self.im + self.im_c)
    }
}

/// The exponent `g(t)` of the Martin-Lof limit law `G`:
///
/// `g(t) = sum_{l <= 0} (e^{it2^l} - 1 - it2^l) 2^{-l} + sum_{l >= 1} (e^{it2^l} - 1) 2^{-l}`.
///
/// The lower sum stops at `l = -M` with `t^2 2^{-M} < tol/2` (terms are bounded
/// by `u^2/2`); the upper sum stops at `l = L` with `2 * 2^{-L+1} < tol/2`
/// (terms are bounded by `2 * 2^{-l}`).
pub fn g_exponent(t: f64, tol: f64) -> Complex64 {
    g_series(t, tol, i32::MAX)
}

/// `g` with the atoms `2^l`, `l > cap`, removed from the Levy measure except
/// for their total mass: the upper sum stops at `cap` and `-2^{-cap}` is added.
fn g_series(t: f64, tol: f64, cap: i32) -> Complex64 {
    let dropped = if cap == i32::MAX { 0.0 } else { -(-(cap as f64)).exp2() };
    if t == 0.0 {
        return Complex64::new(dropped, 0.0);
    }
    let half_tol = 0.5 * tol;
    let t2 = t * t;
    let mut m = 0i32;
    while t2 * (-(m as f64)).exp2() >= half_tol {
        m += 1;
    }
    let mut upper = 1i32;
    while upper < cap && 4.0 * (-(upper as f64)).exp2() >= half_tol {
        upper += 1;
    }
    let mut acc = ComplexSum::default();
    acc.add(Complex64::new(dropped, 0.0));
    // smallest terms first
    for l in -m..=0 {
        let scale = (l as f64).exp2();
        acc.add(expm1_minus_iu(t * scale) / scale);
    }
    for l in (1..=upper).rev() {
        let scale = (l as f64).exp2();
        let (s, c) = (t * scale).sin_cos();
        acc.add(Complex64::new(c - 1.0, s) / scale);
    }
    acc.total()
}

/// Exponent of `G_gamma`: `gamma g(t/gamma) - i t log2(gamma)` for `gamma` in `[1, 2)`.
pub fn g_gamma_exponent(t: f64, gamma: f64, tol: f64) -> Result<Complex64> {
    if !(1.0..2.0).contains(&gamma) {
        return Err(Error::Domain(format!("gamma = {gamma} outside [1, 2)")));
    }
    Ok(g_gamma_unchecked(t, gamma, tol))
}

#[inline]
fn g_gamma_unchecked(t: f64, gamma: f64, tol: f64) -> Complex64 {
    gamma * g_exponent(t / gamma, tol / gamma) - Complex64::new(0.0, t * gamma.log2())
}

/// The dyadic position `n / 2^{floor(log2 n)}` of `n` in its octave.
pub fn dyadic_gamma(n: u64) -> f64 {
    assert!(n >= 1, "dyadic position of 0");
    let k = 63 - n.leading_zeros();
    n as f64 / (k as f64).exp2()
}

/// Tag identifying the base law of an exponent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CfKind {
    PetersburgG,
    GGamma(f64),
    Cauchy,
    Gaussian,
    OneSidedStable { alpha: f64, scale: f64 },
    Custom,
}

impl fmt::Display for CfKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CfKind::PetersburgG => write!(f, "petersburg_g"),
            CfKind::GGamma(g) => write!(f, "g_gamma({g})"),
            CfKind::Cauchy => write!(f, "cauchy"),
            CfKind::Gaussian => write!(f, "gaussian"),
            CfKind::OneSidedStable { alpha, scale } => {
                write!(f, "one_sided_stable({alpha}, {scale})")
            }
            CfKind::Custom => write!(f, "custom"),
        }
    }
}

type CustomFn = Arc<dyn Fn(f64) -> Complex64 + Send + Sync>;

/// A characteristic function in exponent form, closed under convolution
/// powers and affine changes of the variable.
///
/// Evaluates `power * h_base(dilation * t) + i * shift * t`, i.e. the law of
/// `dilation * X` convolved `power` times, then shifted by `shift`.
#[derive(Clone)]
pub struct CfExponent {
    kind: CfKind,
    custom: Option<CustomFn>,
    power: f64,
    dilation: f64,
    shift: f64,
    tol: f64,
}

impl fmt::Debug for CfExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CfExponent")
            .field("kind", &self.kind)
            .field("power", &self.power)
            .field("dilation", &self.dilation)
            .field("shift", &self.shift)
            .field("tol", &self.tol)
            .finish()
    }
}

impl CfExponent {
    fn base(kind: CfKind) -> Self {
        CfExponent {
            kind,
            custom: None,
            power: 1.0,
            dilation: 1.0,
            shift: 0.0,
            tol: DEFAULT_SERIES_TOL,
        }
    }

    pub fn petersburg_g() -> Self {
        Self::base(CfKind::PetersburgG)
    }

    pub fn g_gamma(gamma: f64) -> Result<Self> {
        if !(1.0..2.0).contains(&gamma) {
            return Err(Error::Domain(format!("gamma = {gamma} outside [1, 2)")));
        }
        Ok(Self::base(CfKind::GGamma(gamma)))
    }

    /// Standard Cauchy, `h(t) = -|t|`.
    pub fn cauchy() -> Self {
        Self::base(CfKind::Cauchy)
    }

    /// Standard normal, `h(t) = -t^2/2`.
    pub fn gaussian() -> Self {
        Self::base(CfKind::Gaussian)
    }

    /// Totally skewed stable law on `(0, inf)` with Laplace exponent
    /// `c Gamma(1 - alpha) s^alpha`, i.e. the Poisson sum for the Levy tail
    /// `c x^{-alpha}`:
    ///
    /// `h(t) = -c Gamma(1 - alpha) |t|^alpha exp(-i sign(t) pi alpha / 2)`.
    pub fn one_sided_stable(alpha: f64, c: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::Domain(format!("alpha = {alpha} outside (0, 1)")));
        }
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::Domain(format!("scale c = {c} must be positive")));
        }
        Ok(Self::base(CfKind::OneSidedStable { alpha, scale: c }))
    }

    /// Wraps an arbitrary exponent. The caller is responsible for `h(0) = 0`,
    /// Hermitian symmetry and `Re h <= 0`.
    pub fn custom<F>(h: F) -> Self
    where
        F: Fn(f64) -> Complex64 + Send + Sync + 'static,
    {
        CfExponent { custom: Some(Arc::new(h)), ..Self::base(CfKind::Custom) }
    }

    pub fn kind(&self) -> CfKind {
        self.kind
    }

    pub fn power(&self) -> f64 {
        self.power
    }

    pub fn truncation_tolerance(&self) -> f64 {
        self.tol
    }

    /// Changes the series truncation tolerance of series-backed kinds.
    pub fn with_truncation_tolerance(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    /// The `k`-th convolution power: exponent `k h(t)`.
    pub fn convolution_power(&self, k: f64) -> Result<Self> {
        if !(k > 0.0 && k.is_finite()) {
            return Err(Error::Domain(format!("convolution power k = {k} must be positive")));
        }
        Ok(CfExponent {
            power: self.power * k,
            shift: self.shift * k,
            ..self.clone()
        })
    }

    /// Law of `a X`: exponent `h(a t)`.
    pub fn dilate(&self, a: f64) -> Self {
        CfExponent {
            dilation: self.dilation * a,
            shift: self.shift * a,
            ..self.clone()
        }
    }

    /// Law of `X + b`: exponent `h(t) + i b t`.
    pub fn shift(&self, b: f64) -> Self {
        CfExponent { shift: self.shift + b, ..self.clone() }
    }

    fn eval_base(&self, t: f64) -> Complex64 {
        match self.kind {
            CfKind::PetersburgG => g_exponent(t, self.tol / self.power),
            CfKind::GGamma(gamma) => g_gamma_unchecked(t, gamma, self.tol / self.power),
            CfKind::Cauchy => Complex64::new(-t.abs(), 0.0),
            CfKind::Gaussian => Complex64::new(-0.5 * t * t, 0.0),
            CfKind::OneSidedStable { alpha, scale } => {
                if t == 0.0 {
                    return Complex64::new(0.0, 0.0);
                }
                let modulus = scale * gamma(1.0 - alpha) * t.abs().powf(alpha);
                let angle = -t.signum() * PI * alpha / 2.0;
                -modulus * Complex64::from_polar(1.0, angle)
            }
            CfKind::Custom => (self.custom.as_ref().expect("custom exponent has a function"))(t),
        }
    }

    /// `h(t)`.
    pub fn eval(&self, t: f64) -> Complex64 {
        self.power * self.eval_base(self.dilation * t) + Complex64::new(0.0, self.shift * t)
    }

    /// `h` of the law with the Levy atoms of base index above `cap` removed
    /// (their total mass kept as a constant), for the series kinds.
    fn eval_capped(&self, t: f64, cap: i32) -> Complex64 {
        let u = self.dilation * t;
        let tol = self.tol / self.power;
        let base = match self.kind {
            CfKind::PetersburgG => g_series(u, tol, cap),
            CfKind::GGamma(gamma) => {
                gamma * g_series(u / gamma, tol / gamma, cap) - Complex64::new(0.0, u * gamma.log2())
            }
            _ => self.eval_base(u),
        };
        self.power * base + Complex64::new(0.0, self.shift * t)
    }

    /// `phi(t) = exp(h(t))`.
    pub fn cf(&self, t: f64) -> Complex64 {
        self.eval(t).exp()
    }
}

/// Smallest power-of-two frequency beyond which `|phi(t)|/t` stays below
/// `tol / 100` at a few probe points.
pub fn frequency_cutoff(h: &CfExponent, tol: f64) -> Result<f64> {
    let bound = 1e-2 * tol;
    let mut cut = 1.0;
    while cut <= MAX_FREQUENCY_CUTOFF {
        let ok = [1.0, 1.25, 1.5, 2.0].iter().all(|m| {
            let t = m * cut;
            h.eval(t).re.exp() / t < bound
        });
        if ok {
            return Ok(cut);
        }
        cut *= 2.0;
    }
    Err(Error::Numeric(format!(
        "characteristic function of {} does not decay below {bound:e} before t = {MAX_FREQUENCY_CUTOFF:e}",
        h.kind()
    )))
}

/// Exponent actually inverted.
///
/// The series kinds have Levy atoms at `d 2^l / gamma` for every `l`, which
/// makes `h` rough at all small scales (a Weierstrass-type sum) and defeats
/// any quadrature error estimate. With `X = Y + Z`, `Z >= z_min` the
/// compound-Poisson part of the atoms beyond a level, and `Y` having a
/// doubly-exponentially light left tail,
/// `P(X <= x) = P(N_Z = 0) P(Y <= x) + O(P(Y <= x - z_min))`,
/// so for `z_min` far above `|x|` it suffices to invert the defective
/// transform `exp(h_Y(t) - lambda)`, whose frequencies are bounded by `z_min`.
struct Inversion<'a> {
    h: &'a CfExponent,
    cap: Option<i32>,
    /// `exp(h(0))`: mass of the inverted (possibly defective) measure
    mass: f64,
    /// largest frequency present in `h`
    freq: f64,
}

/// Margin, in units of the law's scale, below which the left tail of the
/// truncated law is treated as empty.
const LEFT_TAIL_MARGIN: f64 = 40.0;

impl<'a> Inversion<'a> {
    fn new(h: &'a CfExponent, xabs: f64) -> Self {
        let gamma = match h.kind {
            CfKind::PetersburgG => Some(1.0),
            CfKind::GGamma(g) => Some(g),
            _ => None,
        };
        match gamma {
            Some(gamma) if h.dilation > 0.0 => {
                let reach = 2.0 * (xabs + h.shift.abs())
                    + LEFT_TAIL_MARGIN * h.dilation * h.power.max(1.0);
                // smallest dropped atom d 2^{cap+1} / gamma >= reach
                let cap = (reach * gamma / (2.0 * h.dilation)).log2().ceil().max(1.0) as i32;
                let freq = h.dilation * (cap as f64).exp2() / gamma;
                let mass = h.eval_capped(0.0, cap).re.exp();
                Inversion { h, cap: Some(cap), mass, freq }
            }
            _ => Inversion { h, cap: None, mass: 1.0, freq: 0.0 },
        }
    }

    #[inline]
    fn eval(&self, t: f64) -> Complex64 {
        match self.cap {
            Some(cap) => self.h.eval_capped(t, cap),
            None => self.h.eval(t),
        }
    }

    /// Largest log-substitution depth needed below `t1`: the integrand on
    /// `[0, t1 e^{-S}]` is bounded by `|h(tau) - h(0)| + tau |x|`.
    fn small_region_depth(&self, t1: f64, xmax: f64, tol: f64) -> f64 {
        let h0 = self.eval(0.0);
        let mut depth: f64 = 8.0;
        while depth < 700.0 {
            let tau = t1 * (-depth).exp();
            if (self.eval(tau) - h0).norm() + tau * xmax < 1e-4 * tol {
                break;
            }
            depth += 8.0;
        }
        depth
    }
}

/// `Im(exp(h(t) - i t x))`.
#[inline]
fn im_shifted_cf(h: Complex64, t: f64, x: f64) -> f64 {
    h.re.exp() * (h.im - t * x).sin()
}

/// `F(x)` from `h` by Gil-Pelaez inversion,
/// `F(x) = 1/2 - (1/pi) int_0^inf Im(e^{-itx} phi(t)) / t dt`, to absolute
/// error `tol`.
///
/// Near the origin the integrand behaves like `Im h(t)/t - x`, which may be
/// singular (`t^{alpha-1}` for one-sided stable laws, `log t` for the
/// semistable family). That piece, `[0, t1]`, is integrated after the
/// substitution `t = t1 e^{-s}`, which turns it into the bounded, decaying
/// `Im(exp(h(t) - itx))` in `s`.
pub fn cdf_from_cf(h: &CfExponent, x: f64, tol: f64) -> Result<f64> {
    if !(tol >= MIN_INVERSION_TOL) {
        return Err(Error::Domain(format!("inversion tolerance {tol:e} below {MIN_INVERSION_TOL:e}")));
    }
    let cut = frequency_cutoff(h, tol)?;
    // error budget on the integral is pi * tol
    let budget = PI * tol;
    let ax = x.abs();
    let inv = Inversion::new(h, ax);
    let scale = 1.0 + ax + inv.freq;
    let t1 = (1.0 / scale).min(cut);

    let depth = inv.small_region_depth(t1, ax, tol);
    let small = quad::integrate_with_limit(
        |s| {
            let tau = t1 * (-s).exp();
            im_shifted_cf(inv.eval(tau), tau, x)
        },
        0.0,
        depth,
        0.1 * budget,
        0.0,
        20_000,
    )?;

    let width = (4.0 / scale).min(2.0);
    let panels = ((cut - t1) / width).ceil().max(1.0) as usize;
    let step = (cut - t1) / panels as f64;
    let panel_tol = 0.5 * budget / panels as f64;
    let mut main = 0.0;
    let mut comp = 0.0;
    for i in 0..panels {
        let a = t1 + step * i as f64;
        let b = if i + 1 == panels { cut } else { a + step };
        let piece = quad::integrate(|t| im_shifted_cf(inv.eval(t), t, x) / t, a, b, panel_tol, 0.0)?;
        crate::tailmodel::neumaier_add(&mut main, &mut comp, piece);
    }
    let f = 0.5 * inv.mass - (small + main + comp) / PI;
    Ok(f.clamp(0.0, 1.0))
}

/// Tabulated CDF obtained by batch inversion, with linear interpolation
/// between nodes.
///
/// Nodes sharing a frequency band reuse the same quadrature nodes and
/// exponent evaluations, so a table of thousands of points costs about as
/// much as a few dozen single inversions.
#[derive(Debug, Clone)]
pub struct CdfTable {
    xs: Vec<f64>,
    fs: Vec<f64>,
    tol: f64,
    /// Power-law index used to extrapolate the right tail past the last node.
    tail_index: f64,
    /// Period in `x` of `x^index (1 - F(x))` on the log scale, when the tail
    /// is log-periodic rather than a pure power.
    tail_ratio: Option<f64>,
}

impl CdfTable {
    /// Inverts `h` at every node (sorted, distinct) with a common cutoff.
    pub fn from_cf(h: &CfExponent, nodes: &[f64], tol: f64) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::Domain("empty node list".into()));
        }
        if nodes.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::Domain("table nodes must be strictly increasing".into()));
        }
        if !(tol >= MIN_INVERSION_TOL) {
            return Err(Error::Domain(format!("inversion tolerance {tol:e} below {MIN_INVERSION_TOL:e}")));
        }
        let cut = frequency_cutoff(h, tol)?;
        let mut fs = vec![0.0; nodes.len()];
        // bands by octave of |x|
        let band_of = |x: f64| -> i32 { x.abs().max(1.0).log2().ceil() as i32 };
        let mut order: Vec<usize> = (0..nodes.len()).collect();
        order.sort_by_key(|&i| band_of(nodes[i]));
        let mut start = 0;
        while start < order.len() {
            let band = band_of(nodes[order[start]]);
            let mut end = start;
            while end < order.len() && band_of(nodes[order[end]]) == band {
                end += 1;
            }
            let xmax = (band as f64).exp2();
            let rule = BandRule::new(h, xmax, cut, tol);
            let idx = &order[start..end];
            let values: Vec<f64> = idx.par_iter().map(|&i| rule.cdf(nodes[i])).collect();
            for (&i, v) in idx.iter().zip(values) {
                fs[i] = v;
            }
            start = end;
        }
        Ok(CdfTable { xs: nodes.to_vec(), fs, tol, tail_index: 1.0, tail_ratio: None })
    }

    /// Table for the semistable family: step `0.01` on `[lo, min(hi, 32)]`
    /// and geometric ratio `1.01` beyond. Past the last node the tail uses
    /// `1 - F(2x) = (1 - F(x)) / 2`.
    pub fn semistable(h: &CfExponent, lo: f64, hi: f64, tol: f64) -> Result<Self> {
        let mut nodes = Vec::new();
        let dense_hi = hi.min(32.0);
        let n = ((dense_hi - lo) / 0.01).ceil().max(1.0) as usize;
        for i in 0..=n {
            nodes.push(lo + (dense_hi - lo) * i as f64 / n as f64);
        }
        let mut x = dense_hi;
        while x < hi {
            x = (x * 1.01).min(hi);
            if x > *nodes.last().unwrap() {
                nodes.push(x);
            }
        }
        let mut table = Self::from_cf(h, &nodes, tol)?;
        table.tail_index = 1.0;
        table.tail_ratio = Some(2.0);
        Ok(table)
    }

    pub fn with_tail_index(mut self, index: f64) -> Self {
        self.tail_index = index;
        self
    }

    pub fn nodes(&self) -> &[f64] {
        &self.xs
    }

    pub fn values(&self) -> &[f64] {
        &self.fs
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    /// Interpolated CDF; constant below the first node, extrapolated tail past the last.
    pub fn eval(&self, x: f64) -> f64 {
        let n = self.xs.len();
        if x <= self.xs[0] {
            return self.fs[0];
        }
        if x > self.xs[n - 1] {
            let last = self.xs[n - 1];
            if last <= 0.0 {
                return self.fs[n - 1];
            }
            if let Some(r) = self.tail_ratio.filter(|r| last / r >= self.xs[0]) {
                // fold x back into (last / r, last]
                let m = ((x / last).ln() / r.ln()).ceil();
                let y = (x / r.powf(m)).min(last);
                return 1.0 - (1.0 - self.interpolate(y)) * r.powf(-m * self.tail_index);
            }
            return 1.0 - (1.0 - self.fs[n - 1]) * (last / x).powf(self.tail_index);
        }
        self.interpolate(x)
    }

    fn interpolate(&self, x: f64) -> f64 {
        let n = self.xs.len();
        if x >= self.xs[n - 1] {
            return self.fs[n - 1];
        }
        let j = self.xs.partition_point(|v| *v <= x);
        let (x0, x1) = (self.xs[j - 1], self.xs[j]);
        let w = (x - x0) / (x1 - x0);
        self.fs[j - 1] * (1.0 - w) + self.fs[j] * w
    }
}

/// Composite fixed rule for one frequency band.
struct BandRule {
    /// contribution of node k: `a_k sin(b_k - tau_k x)`
    tau: Vec<f64>,
    amp: Vec<f64>,
    phase: Vec<f64>,
    mass: f64,
}

impl BandRule {
    fn new(h: &CfExponent, xmax: f64, cut: f64, tol: f64) -> Self {
        let inv = Inversion::new(h, xmax);
        let scale = 1.0 + xmax + inv.freq;
        let t1 = (1.0 / scale).min(cut);
        let depth = inv.small_region_depth(t1, xmax, tol);
        let mut nodes: Vec<(f64, f64)> = Vec::new(); // (tau, weight)
        let push_panel = |nodes: &mut Vec<(f64, f64)>, a: f64, b: f64, small: bool| {
            let c = 0.5 * (a + b);
            let hw = 0.5 * (b - a);
            for j in 0..8 {
                let offsets: &[f64] = if j == 7 { &[0.0] } else { &[-1.0, 1.0] };
                for sgn in offsets {
                    let s = c + sgn * hw * quad::XGK[j];
                    let w = quad::WGK[j] * hw;
                    if small {
                        nodes.push((t1 * (-s).exp(), w));
                    } else {
                        nodes.push((s, w / s));
                    }
                }
            }
        };
        let small_panels = (depth / 0.5).ceil() as usize;
        for i in 0..small_panels {
            let a = depth * i as f64 / small_panels as f64;
            let b = depth * (i + 1) as f64 / small_panels as f64;
            push_panel(&mut nodes, a, b, true);
        }
        let width = (4.0 / scale).min(2.0);
        let panels = ((cut - t1) / width).ceil().max(1.0) as usize;
        for i in 0..panels {
            let a = t1 + (cut - t1) * i as f64 / panels as f64;
            let b = t1 + (cut - t1) * (i + 1) as f64 / panels as f64;
            push_panel(&mut nodes, a, b, false);
        }
        let evals: Vec<Complex64> = nodes.par_iter().map(|(tau, _)| inv.eval(*tau)).collect();
        let mut tau = Vec::with_capacity(nodes.len());
        let mut amp = Vec::with_capacity(nodes.len());
        let mut phase = Vec::with_capacity(nodes.len());
        for ((t, w), e) in nodes.iter().zip(evals) {
            let a = w * e.re.exp();
            if a != 0.0 {
                tau.push(*t);
                amp.push(a);
                phase.push(e.im);
            }
        }
        BandRule { tau, amp, phase, mass: inv.mass }
    }

    fn cdf(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        let mut comp = 0.0;
        for k in 0..self.tau.len() {
            let term = self.amp[k] * (self.phase[k] - self.tau[k] * x).sin();
            crate::tailmodel::neumaier_add(&mut acc, &mut comp, term);
        }
        (0.5 * self.mass - (acc + comp) / PI).clamp(0.0, 1.0)
    }
}

/// CDF of the Gamma(p, 1) law for integer `p >= 1`.
pub fn erlang_cdf(p: u32, x: f64) -> f64 {
    assert!(p >= 1, "Erlang shape must be at least 1");
    if x <= 0.0 {
        return 0.0;
    }
    let mut term = 1.0;
    let mut sum = 1.0;
    for j in 1..p {
        term *= x / j as f64;
        sum += term;
    }
    (1.0 - (-x).exp() * sum).clamp(0.0, 1.0)
}

/// CDF of the one-sided 1/2-stable law with Laplace transform `exp(-sqrt(pi s))`:
/// `erfc(sqrt(pi / (4x)))`.
pub fn levy_half_stable_cdf(x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    erfc((PI / (4.0 * x)).sqrt())
}

pub fn cauchy_cdf(x: f64) -> f64 {
    0.5 + x.atan() / PI
}

pub fn normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x * FRAC_1_SQRT_2)
}
