//! The acceptance criteria, shared by `selftest` and the acceptance test target.

use semistable::charfn::{
    cauchy_cdf, cdf_from_cf, g_exponent, levy_half_stable_cdf, normal_cdf, DEFAULT_SERIES_TOL,
};
use semistable::coupling::{coupling_count_experiment, coupling_gap_curve, coupling_ks_experiment};
use semistable::empirics::{
    feller_experiment, ks_distance, ks_two_sample, martin_lof_experiment, merging_experiment, merging_sweep,
    negligibility_experiment, order_statistics_experiment,
};
use semistable::rng::replicates;
use semistable::sampling::{LepageSampler, LepageTerms, PoissonSumSampler};
use semistable::{CfExponent, Ecdf, ExperimentReport, TailModel};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

/// `(t, Re g(t), Im g(t))` from a 400-bit fixed-point evaluation of the series.
pub const G_ORACLE: [(f64, f64, f64); 5] = [
    (0.5, -1.1885147117929484, 0.5952564149600581),
    (1.0, -2.377029423585897, 0.19051282992011612),
    (2.0, -4.754058847171794, -1.6189743401597678),
    (5.0, -11.54600980517889, -11.416273845390151),
    (10.0, -23.09201961035778, -32.8325476907803),
];

/// One comparison; holds when `value <= limit`.
#[derive(Debug, Clone)]
pub struct Check {
    pub label: String,
    pub value: f64,
    pub limit: f64,
}

impl Check {
    pub fn new(label: impl Into<String>, value: f64, limit: f64) -> Self {
        Check { label: label.into(), value, limit }
    }

    pub fn holds(&self) -> bool {
        self.value <= self.limit
    }
}

fn from_report(label: &str, r: &ExperimentReport) -> Check {
    Check::new(label, r.statistic, r.tolerance)
}

pub struct Settings {
    pub seed: u64,
    /// Truncation tolerance of the g series in criterion 1.
    pub g_tol: f64,
    /// Binary used by the determinism criterion.
    pub exe: Option<PathBuf>,
}

impl Settings {
    pub fn new(seed: u64) -> Self {
        Settings { seed, g_tol: DEFAULT_SERIES_TOL, exe: None }
    }
}

type Runner = fn(&Settings) -> Result<Vec<Check>, String>;

pub struct Criterion {
    pub id: u32,
    pub name: &'static str,
    /// Included in the default selftest.
    pub fast: bool,
    /// Wall-clock budget in seconds.
    pub budget: f64,
    run: Runner,
}

pub struct Outcome {
    pub id: u32,
    pub name: &'static str,
    pub checks: Vec<Check>,
    pub error: Option<String>,
    pub seconds: f64,
}

impl Outcome {
    pub fn pass(&self) -> bool {
        self.error.is_none() && self.checks.iter().all(Check::holds)
    }

    /// `PASS|FAIL  id name  label value <= limit; ...  (seconds)`
    pub fn line(&self) -> String {
        let body = match &self.error {
            Some(e) => format!("error: {e}"),
            None => self
                .checks
                .iter()
                .map(|c| format!("{} {:.3e} <= {:.3e}", c.label, c.value, c.limit))
                .collect::<Vec<_>>()
                .join("; "),
        };
        format!(
            "{}  {:>2} {:<22} {}  ({:.1} s)",
            if self.pass() { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            body,
            self.seconds
        )
    }
}

pub fn criteria() -> Vec<Criterion> {
    vec![
        Criterion { id: 1, name: "cf-identities", fast: true, budget: 1.0, run: cf_identities },
        Criterion { id: 2, name: "inversion-oracles", fast: true, budget: 30.0, run: inversion_oracles },
        Criterion { id: 3, name: "poisson-construction", fast: true, budget: 60.0, run: poisson_construction },
        Criterion { id: 4, name: "lepage-equivalence", fast: true, budget: 60.0, run: lepage_equivalence },
        Criterion { id: 5, name: "martin-lof-limit", fast: false, budget: 180.0, run: martin_lof },
        Criterion { id: 6, name: "merging", fast: false, budget: 600.0, run: merging },
        Criterion { id: 7, name: "feller-weak-law", fast: true, budget: 120.0, run: feller },
        Criterion { id: 8, name: "order-statistics", fast: false, budget: 180.0, run: order_statistics },
        Criterion { id: 9, name: "coupling", fast: false, budget: 180.0, run: coupling },
        Criterion { id: 10, name: "negligibility", fast: true, budget: 120.0, run: negligibility },
        Criterion { id: 11, name: "determinism", fast: true, budget: 120.0, run: determinism },
    ]
}

pub fn evaluate(c: &Criterion, s: &Settings) -> Outcome {
    let start = Instant::now();
    let result = (c.run)(s);
    let seconds = start.elapsed().as_secs_f64();
    let (mut checks, error) = match result {
        Ok(checks) => (checks, None),
        Err(e) => (Vec::new(), Some(e)),
    };
    checks.push(Check::new("seconds", seconds, c.budget));
    Outcome { id: c.id, name: c.name, checks, error, seconds }
}

fn err(e: semistable::Error) -> String {
    e.to_string()
}

fn cf_identities(s: &Settings) -> Result<Vec<Check>, String> {
    let g = |t: f64| g_exponent(t, s.g_tol);
    let mut telescoping: f64 = 0.0;
    for i in 0..1000 {
        let t = -50.0 + 100.0 * i as f64 / 999.0;
        let (a, b) = (g(t), g(t / 2.0));
        let d = (a.re - 2.0 * b.re).hypot(a.im - 2.0 * b.im + t);
        telescoping = telescoping.max(d);
    }
    let oracle = G_ORACLE
        .iter()
        .map(|&(t, re, im)| {
            let v = g(t);
            (v.re - re).abs().max((v.im - im).abs())
        })
        .fold(0.0, f64::max);
    Ok(vec![Check::new("telescoping", telescoping, 1e-10), Check::new("oracle", oracle, 1e-12)])
}

fn inversion_oracles(_: &Settings) -> Result<Vec<Check>, String> {
    let tol = 1e-8;
    let worst = |h: &CfExponent, xs: &[f64], f: fn(f64) -> f64| -> Result<f64, String> {
        let mut w: f64 = 0.0;
        for &x in xs {
            w = w.max((cdf_from_cf(h, x, tol).map_err(err)? - f(x)).abs());
        }
        Ok(w)
    };
    let lin: Vec<f64> = (0..=200).map(|i| -10.0 + 0.1 * i as f64).collect();
    let log: Vec<f64> = (0..=200).map(|i| 0.1 * 1000f64.powf(i as f64 / 200.0)).collect();
    let half = CfExponent::one_sided_stable(0.5, 1.0).map_err(err)?;
    Ok(vec![
        Check::new("cauchy", worst(&CfExponent::cauchy(), &lin, cauchy_cdf)?, 1e-6),
        Check::new("normal", worst(&CfExponent::gaussian(), &[0.0, 1.0, -1.0, 1.959964], normal_cdf)?, 1e-6),
        Check::new("half-stable", worst(&half, &log, levy_half_stable_cdf)?, 1e-6),
    ])
}

const POISSON_REPS: usize = 100_000;

fn poisson_sample(seed: u64) -> Result<Vec<f64>, String> {
    let model = TailModel::pure(0.5, 1.0, 0.0).map_err(err)?;
    let sampler = PoissonSumSampler::new(&model, 1e-6, false).map_err(err)?;
    Ok(replicates(seed, 0, POISSON_REPS, |rng| sampler.sample(rng)))
}

fn poisson_construction(s: &Settings) -> Result<Vec<Check>, String> {
    let e = Ecdf::new(poisson_sample(s.seed)?).map_err(err)?;
    Ok(vec![Check::new("ks", ks_distance(&e, &levy_half_stable_cdf), 0.01)])
}

fn lepage_equivalence(s: &Settings) -> Result<Vec<Check>, String> {
    let sampler = LepageSampler::new(0.5, LepageTerms::Auto, false).map_err(err)?;
    let series = Ecdf::new(replicates(s.seed, 1, POISSON_REPS, |rng| sampler.sample(rng))).map_err(err)?;
    let poisson = Ecdf::new(poisson_sample(s.seed)?).map_err(err)?;
    Ok(vec![
        Check::new("ks", ks_distance(&series, &levy_half_stable_cdf), 0.01),
        Check::new("vs-poisson", ks_two_sample(&series, &poisson), 0.01),
    ])
}

fn martin_lof(s: &Settings) -> Result<Vec<Check>, String> {
    Ok(vec![from_report("ks", &martin_lof_experiment(14, 200_000, s.seed).map_err(err)?)])
}

fn merging(s: &Settings) -> Result<Vec<Check>, String> {
    let single = merging_experiment(1536, 200_000, s.seed).map_err(err)?;
    let sweep = merging_sweep(10, 8, 100_000, s.seed).map_err(err)?;
    Ok(vec![
        from_report("ks-1536", &single),
        from_report("sweep-max", &sweep.report),
        from_report("closure", &sweep.closure),
    ])
}

fn feller(s: &Settings) -> Result<Vec<Check>, String> {
    Ok(vec![from_report("gap", &feller_experiment(1 << 16, 2000, s.seed).map_err(err)?)])
}

fn order_statistics(s: &Settings) -> Result<Vec<Check>, String> {
    let mut checks = Vec::new();
    for (p, n) in [(1, 10), (3, 9), (5, 100)] {
        let r = order_statistics_experiment(p, n, 100_000, 1.0, s.seed).map_err(err)?;
        checks.push(from_report(&format!("moments-z({p},{n})"), &r.moments));
    }
    let y1 = order_statistics_experiment(1, 10_000, 100_000, 0.01, s.seed).map_err(err)?;
    let y3 = order_statistics_experiment(3, 10_000, 100_000, 0.012, s.seed).map_err(err)?;
    checks.push(from_report("ks-exp", &y1.ks));
    checks.push(from_report("ks-erlang3", &y3.ks));
    Ok(checks)
}

fn coupling(s: &Settings) -> Result<Vec<Check>, String> {
    let model = TailModel::pure(0.5, 1.0, 1.0).map_err(err)?;
    let count = coupling_count_experiment(&model, 10_000, 10_000, s.seed).map_err(err)?;
    let curve = coupling_gap_curve(&model, &[100, 1000, 10_000], 1000, s.seed).map_err(err)?;
    let ks = coupling_ks_experiment(&model, 10_000, 100_000, 0.01, s.seed).map_err(err)?;
    Ok(vec![
        from_report("count-sd", &count),
        from_report("gap-not-decreasing", &curve.report),
        from_report("ks", &ks),
    ])
}

fn negligibility(s: &Settings) -> Result<Vec<Check>, String> {
    let r = negligibility_experiment(&[0.5, 2.5], 10_000, 1000, s.seed).map_err(err)?;
    let rows = r.details["rows"].as_array().ok_or("missing rows")?;
    let ratio = |i: usize| rows[i]["median_ratio"].as_f64().unwrap_or(f64::NAN);
    // written as value <= limit
    Ok(vec![Check::new("alpha-0.5-shortfall", 0.2 - ratio(0), 0.0), Check::new("alpha-2.5", ratio(1), 0.05)])
}

/// Small configurations of every data-producing subcommand.
pub const DETERMINISM_RUNS: &[&[&str]] = &[
    &["sample", "--model", "petersburg", "--n", "200", "--format", "csv"],
    &["sample", "--model", "pure", "--alpha", "1.5", "--n", "200", "--symmetric", "--format", "json"],
    &["cdf", "--law", "g", "--grid", "-2:6:0.5", "--format", "csv"],
    &["merging", "--n", "24", "--reps", "10000", "--format", "json"],
    &["mlof", "--k", "4", "--reps", "10000", "--format", "csv"],
    &["feller", "--n", "64", "--reps", "500", "--format", "json"],
    &["coupling", "--n-list", "10,100", "--reps", "200", "--format", "csv"],
    &["lepage", "--alpha", "0.5", "--k", "6", "--reps", "2000", "--format", "json"],
    &["orderstats", "--p", "2", "--n", "50", "--reps", "2000", "--format", "json"],
    &["negligibility", "--alpha-list", "0.5,2.5", "--n", "1000", "--reps", "30", "--format", "csv"],
    &["sweep", "--k", "8", "--points", "2", "--reps", "2000", "--format", "csv"],
];

/// Runs `exe` and returns the bytes of the artifact and its sidecar.
fn artifact_bytes(exe: &Path, args: &[&str], seed: u64, threads: u32, out: &Path) -> Result<Vec<u8>, String> {
    let sidecar = crate::output::sidecar_path(out);
    let _ = std::fs::remove_file(out);
    let _ = std::fs::remove_file(&sidecar);
    let status = Command::new(exe)
        .args(args)
        .arg("--seed")
        .arg(seed.to_string())
        .arg("--threads")
        .arg(threads.to_string())
        .arg("--out")
        .arg(out)
        .stdout(std::process::Stdio::null())
        .stderr(std::process::Stdio::null())
        .status()
        .map_err(|e| format!("cannot run {}: {e}", exe.display()))?;
    // 3 only reports a failed tolerance at these toy sizes
    if !matches!(status.code(), Some(0) | Some(3)) {
        return Err(format!("{} exited with {status}", args[0]));
    }
    let mut bytes = std::fs::read(out).map_err(|e| format!("{}: {e}", args[0]))?;
    if let Ok(extra) = std::fs::read(&sidecar) {
        bytes.extend(extra);
    }
    Ok(bytes)
}

fn determinism(s: &Settings) -> Result<Vec<Check>, String> {
    let exe = s.exe.as_deref().ok_or("no binary to run")?;
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut mismatches = 0;
    for args in DETERMINISM_RUNS {
        let out = dir.path().join(format!("{}.out", args[0]));
        let one = artifact_bytes(exe, args, s.seed, 1, &out)?;
        let four = artifact_bytes(exe, args, s.seed, 4, &out)?;
        let again = artifact_bytes(exe, args, s.seed, 4, &out)?;
        if one != four || four != again || one.is_empty() {
            mismatches += 1;
        }
    }
    Ok(vec![Check::new("mismatched-artifacts", mismatches as f64, 0.0)])
}
