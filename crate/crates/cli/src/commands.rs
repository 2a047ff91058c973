use crate::args::*;
use crate::output::{Cell, Table};
use semistable::charfn::{dyadic_gamma, CdfTable};
use semistable::coupling::{coupling_count_experiment, coupling_gap_curve, coupling_ks_experiment};
use semistable::empirics::{
    feller_experiment, lepage_limit_experiment, martin_lof_experiment, merging_experiment, merging_sweep,
    negligibility_experiment, order_statistics_experiment,
};
use semistable::sampling::{sample_petersburg, sample_tail_model};
use semistable::{CfExponent, Error, ExperimentReport, Result, RngStream, TailModel};
use serde_json::{json, Value};

/// Result of one data-producing subcommand.
pub struct Run {
    pub summaries: Vec<Value>,
    pub table: Table,
    pub pass: bool,
    /// One line per report for stderr.
    pub status: Vec<String>,
}

impl Run {
    fn from_reports(reports: Vec<ExperimentReport>, table: Option<Table>) -> Self {
        let table = table.unwrap_or_else(|| report_table(&reports));
        Run {
            pass: reports.iter().all(|r| r.pass),
            status: reports.iter().map(status_line).collect(),
            summaries: reports.iter().map(|r| serde_json::to_value(r).expect("report serializes")).collect(),
            table,
        }
    }
}

fn status_line(r: &ExperimentReport) -> String {
    format!(
        "{}: statistic {:.4e}, tolerance {:.4e}: {}",
        r.experiment,
        r.statistic,
        r.tolerance,
        if r.pass { "PASS" } else { "FAIL" }
    )
}

fn report_table(reports: &[ExperimentReport]) -> Table {
    let mut t = Table::new(&["experiment_index", "statistic", "stderr", "tolerance", "pass"]);
    for (i, r) in reports.iter().enumerate() {
        t.push(vec![
            Cell::Int(i as u64),
            r.statistic.into(),
            r.stderr.into(),
            r.tolerance.into(),
            r.pass.into(),
        ]);
    }
    t
}

pub fn sample(a: &SampleArgs, seed: u64) -> Result<Run> {
    let mut rng = RngStream::new(seed, 0);
    let batch = match (&a.model_file, a.model) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Domain(format!("cannot read {}: {e}", path.display())))?;
            sample_tail_model(&TailModel::from_json(&text)?, a.n, &mut rng, a.symmetric)?
        }
        (None, ModelKind::Petersburg) => {
            let mut b = sample_petersburg(a.n, &mut rng)?;
            if a.symmetric {
                for v in &mut b.values {
                    *v *= rng.sign();
                }
                b.symmetrized = true;
            }
            b
        }
        (None, ModelKind::Pure) => {
            sample_tail_model(&TailModel::pure(a.alpha, a.c, a.x0)?, a.n, &mut rng, a.symmetric)?
        }
    };
    let mut table = Table::new(&["index", "value"]);
    for (i, v) in batch.values.iter().enumerate() {
        table.push(vec![Cell::Int(i as u64), Cell::Float(*v)]);
    }
    let summary = serde_json::to_value(&batch).expect("batch serializes");
    Ok(Run { summaries: vec![summary], table, pass: true, status: vec![format!("sample: {} values", a.n)] })
}

pub fn cdf(a: &CdfArgs) -> Result<Run> {
    let h = match a.law {
        Law::G => CfExponent::petersburg_g(),
        Law::GGamma => CfExponent::g_gamma(a.gamma)?,
        Law::Cauchy => CfExponent::cauchy(),
        Law::Normal => CfExponent::gaussian(),
        Law::Stable => CfExponent::one_sided_stable(a.alpha, a.c)?,
    };
    let xs = a.grid.points();
    let table = CdfTable::from_cf(&h, &xs, a.tol)?;
    let fs = table.values();
    let monotone = fs.windows(2).all(|w| w[1] >= w[0]);
    let mut t = Table::new(&["x", "F"]);
    for (x, f) in xs.iter().zip(fs) {
        t.push(vec![Cell::Float(*x), Cell::Float(*f)]);
    }
    let summary = json!({
        "law": h.kind().to_string(),
        "rows": xs.len(),
        "tol": a.tol,
        "monotone": monotone,
    });
    let status = format!("cdf: {} rows of {}", xs.len(), h.kind());
    Ok(Run { summaries: vec![summary], table: t, pass: true, status: vec![status] })
}

pub fn merging(a: &MergingArgs, seed: u64) -> Result<Run> {
    Ok(Run::from_reports(vec![merging_experiment(a.n, a.reps, seed)?], None))
}

pub fn mlof(a: &MlofArgs, seed: u64) -> Result<Run> {
    Ok(Run::from_reports(vec![martin_lof_experiment(a.k, a.reps, seed)?], None))
}

pub fn feller(a: &FellerArgs, seed: u64) -> Result<Run> {
    Ok(Run::from_reports(vec![feller_experiment(a.n, a.reps, seed)?], None))
}

pub fn coupling(a: &CouplingArgs, seed: u64) -> Result<Run> {
    let model = TailModel::pure(a.alpha, 1.0, 1.0)?;
    match a.check {
        CouplingCheck::Gap => {
            let curve = coupling_gap_curve(&model, &a.n_list, a.reps, seed)?;
            let mut t = Table::new(&["n", "median_gap", "q90_gap", "ks", "median_fluctuation"]);
            for r in &curve.rows {
                t.push(vec![
                    r.n.into(),
                    r.median_gap.into(),
                    r.q90_gap.into(),
                    r.ks.into(),
                    r.median_fluctuation.into(),
                ]);
            }
            Ok(Run::from_reports(vec![curve.report], Some(t)))
        }
        CouplingCheck::Count => Ok(Run::from_reports(vec![coupling_count_experiment(&model, a.n, a.reps, seed)?], None)),
        CouplingCheck::Ks => Ok(Run::from_reports(
            vec![coupling_ks_experiment(&model, a.n, a.reps, a.tolerance, seed)?],
            None,
        )),
    }
}

pub fn lepage(a: &LepageArgs, seed: u64) -> Result<Run> {
    Ok(Run::from_reports(vec![lepage_limit_experiment(a.alpha, a.k, a.reps, a.symmetric, seed)?], None))
}

pub fn orderstats(a: &OrderstatsArgs, seed: u64) -> Result<Run> {
    let r = order_statistics_experiment(a.p, a.n, a.reps, a.ks_tol, seed)?;
    Ok(Run::from_reports(vec![r.moments, r.ks], None))
}

pub fn negligibility(a: &NegligibilityArgs, seed: u64) -> Result<Run> {
    let r = negligibility_experiment(&a.alpha_list, a.n, a.reps, seed)?;
    let mut t = Table::new(&["alpha", "median_ratio", "median_square_ratio"]);
    for row in r.details["rows"].as_array().into_iter().flatten() {
        let f = |k: &str| Cell::Float(row[k].as_f64().unwrap_or(f64::NAN));
        t.push(vec![f("alpha"), f("median_ratio"), f("median_square_ratio")]);
    }
    Ok(Run::from_reports(vec![r], Some(t)))
}

pub fn sweep(a: &SweepArgs, seed: u64) -> Result<Run> {
    let s = merging_sweep(a.k, a.points, a.reps, seed)?;
    let mut t = Table::new(&["n", "gamma", "ks"]);
    for p in &s.points {
        debug_assert_eq!(p.gamma, dyadic_gamma(p.n));
        t.push(vec![p.n.into(), p.gamma.into(), p.ks.into()]);
    }
    Ok(Run::from_reports(vec![s.report, s.closure], Some(t)))
}
