use super::Ecdf;
use crate::charfn::CdfTable;

/// A distribution function with access to left limits.
pub trait Cdf {
    fn eval(&self, x: f64) -> f64;

    /// `F(x-)`; equal to `eval` for continuous laws.
    fn eval_left(&self, x: f64) -> f64 {
        self.eval(x)
    }
}

impl<F: Fn(f64) -> f64> Cdf for F {
    fn eval(&self, x: f64) -> f64 {
        self(x)
    }
}

impl Cdf for Ecdf {
    fn eval(&self, x: f64) -> f64 {
        Ecdf::eval(self, x)
    }

    fn eval_left(&self, x: f64) -> f64 {
        Ecdf::eval_left(self, x)
    }
}

impl Cdf for CdfTable {
    fn eval(&self, x: f64) -> f64 {
        CdfTable::eval(self, x)
    }
}

/// Calls `f(v, lo, hi)` for each distinct sample value `v` with
/// `lo = F_hat(v-)` and `hi = F_hat(v)`.
fn for_each_jump(e: &Ecdf, mut f: impl FnMut(f64, f64, f64)) {
    let v = e.values();
    let n = v.len() as f64;
    let mut i = 0;
    while i < v.len() {
        let mut j = i + 1;
        while j < v.len() && v[j] == v[i] {
            j += 1;
        }
        f(v[i], i as f64 / n, j as f64 / n);
        i = j;
    }
}

/// `sup_x |F_hat(x) - F(x)|`, exact: between jumps of `F_hat` the extremes
/// of the monotone `F` sit at `F(v)` and `F(w-)` for consecutive jumps `v < w`.
pub fn ks_distance<F: Cdf + ?Sized>(e: &Ecdf, f: &F) -> f64 {
    let mut d: f64 = 0.0;
    for_each_jump(e, |v, lo, hi| {
        d = d.max((hi - f.eval(v)).abs()).max((lo - f.eval_left(v)).abs());
    });
    d
}

/// Two-sample KS distance `sup_x |F_a(x) - F_b(x)|`.
pub fn ks_two_sample(a: &Ecdf, b: &Ecdf) -> f64 {
    let (x, y) = (a.values(), b.values());
    let (na, nb) = (x.len() as f64, y.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < x.len() || j < y.len() {
        let v = match (x.get(i), y.get(j)) {
            (Some(&p), Some(&q)) => p.min(q),
            (Some(&p), None) => p,
            (None, Some(&q)) => q,
            (None, None) => unreachable!(),
        };
        while i < x.len() && x[i] == v {
            i += 1;
        }
        while j < y.len() && y[j] == v {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

/// Levy distance `inf{eps : F(x-eps) - eps <= F_hat(x) <= F(x+eps) + eps for all x}`,
/// by bisection on `eps` to within `grid_step`. Returns the upper end of the
/// final bracket, so the value never understates the distance and never
/// exceeds the KS distance.
pub fn levy_distance<F: Cdf + ?Sized>(e: &Ecdf, f: &F, grid_step: f64) -> f64 {
    assert!(grid_step > 0.0, "grid step must be positive");
    let holds = |eps: f64| {
        let mut ok = true;
        for_each_jump(e, |v, lo, hi| {
            if ok && (hi > f.eval(v + eps) + eps || f.eval_left(v - eps) - eps > lo) {
                ok = false;
            }
        });
        ok
    };
    let mut hi = ks_distance(e, f).min(1.0);
    let mut lo = 0.0;
    if holds(0.0) {
        return 0.0;
    }
    while hi - lo > grid_step {
        let mid = 0.5 * (lo + hi);
        if holds(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}
