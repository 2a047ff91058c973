use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::path::PathBuf;

/// Seed used when neither `--seed` nor `SEMISTABLE_SEED` is given.
pub const DEFAULT_SEED: u64 = 0xC5D0_0B5E_55AA_1234;

#[derive(Parser, Debug)]
#[command(
    name = "semistable",
    version,
    about = "Semistable laws: samplers, CDF tables and limit-theorem experiments"
)]
pub struct Cli {
    /// Master seed, decimal or 0x-prefixed hex [default: 0xC5D00B5E55AA1234]
    #[arg(long, global = true, env = "SEMISTABLE_SEED", value_parser = parse_seed)]
    pub seed: Option<u64>,

    /// Worker threads; outputs do not depend on this
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..=1024))]
    pub threads: Option<u64>,

    /// Output file; stdout when absent
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Jsonl,
}

impl Format {
    pub fn name(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
            Format::Jsonl => "jsonl",
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Draw i.i.d. variates from a tail model
    Sample(SampleArgs),
    /// Tabulate a CDF by characteristic-function inversion
    Cdf(CdfArgs),
    /// S_n/n - log2 n against G_{gamma_n}
    Merging(MergingArgs),
    /// S_{2^k}/2^k - k against G
    Mlof(MlofArgs),
    /// Weak law S_n/(n log2 n) -> 1 against the G_{gamma_n} prediction
    Feller(FellerArgs),
    /// Coupling of the i.i.d. sum with its Poisson-randomized version
    Coupling(CouplingArgs),
    /// Normalized i.i.d. sums against the LePage series
    Lepage(LepageArgs),
    /// Uniform order statistics: exact moments and the Erlang limit
    Orderstats(OrderstatsArgs),
    /// Max-to-sum ratio across tail indices
    Negligibility(NegligibilityArgs),
    /// Merging along one octave of n
    Sweep(SweepArgs),
    /// Fast subset of the acceptance criteria
    Selftest(SelftestArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Sample(_) => "sample",
            Command::Cdf(_) => "cdf",
            Command::Merging(_) => "merging",
            Command::Mlof(_) => "mlof",
            Command::Feller(_) => "feller",
            Command::Coupling(_) => "coupling",
            Command::Lepage(_) => "lepage",
            Command::Orderstats(_) => "orderstats",
            Command::Negligibility(_) => "negligibility",
            Command::Sweep(_) => "sweep",
            Command::Selftest(_) => "selftest",
        }
    }

    /// Parameters echoed into every artifact.
    pub fn params(&self) -> serde_json::Value {
        let v = match self {
            Command::Sample(a) => serde_json::to_value(a),
            Command::Cdf(a) => serde_json::to_value(a),
            Command::Merging(a) => serde_json::to_value(a),
            Command::Mlof(a) => serde_json::to_value(a),
            Command::Feller(a) => serde_json::to_value(a),
            Command::Coupling(a) => serde_json::to_value(a),
            Command::Lepage(a) => serde_json::to_value(a),
            Command::Orderstats(a) => serde_json::to_value(a),
            Command::Negligibility(a) => serde_json::to_value(a),
            Command::Sweep(a) => serde_json::to_value(a),
            Command::Selftest(a) => serde_json::to_value(a),
        };
        v.expect("arguments serialize")
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    /// P(X = 2^k) = 2^-k
    Petersburg,
    /// T(x) = c x^-alpha above x0
    Pure,
}

#[derive(Args, Debug, Serialize)]
pub struct SampleArgs {
    #[arg(long, value_enum, default_value = "petersburg")]
    pub model: ModelKind,
    /// Tail model as JSON, overrides --model
    #[arg(long)]
    pub model_file: Option<PathBuf>,
    #[arg(long, default_value_t = 1000)]
    pub n: usize,
    #[arg(long, default_value_t = 0.5)]
    pub alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    pub c: f64,
    #[arg(long, default_value_t = 1.0)]
    pub x0: f64,
    /// Attach independent random signs
    #[arg(long)]
    pub symmetric: bool,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Law {
    /// Martin-Lof limit G
    G,
    /// G_gamma, 1 <= gamma < 2
    GGamma,
    Cauchy,
    Normal,
    /// One-sided stable with tail c x^-alpha, 0 < alpha < 1
    Stable,
}

/// `lo:hi:step`, giving `floor((hi - lo) / step) + 1` points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Grid {
    pub lo: f64,
    pub hi: f64,
    pub step: f64,
}

impl Grid {
    pub fn len(&self) -> usize {
        // slack absorbs representation error in step, e.g. 20 / 0.1
        ((self.hi - self.lo) / self.step * (1.0 + 1e-12)).floor() as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.lo + i as f64 * self.step).collect()
    }
}

pub fn parse_grid(s: &str) -> Result<Grid, String> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(format!("expected lo:hi:step, got {s:?}"));
    }
    let num = |p: &str| p.trim().parse::<f64>().map_err(|e| format!("{p:?}: {e}"));
    let g = Grid { lo: num(parts[0])?, hi: num(parts[1])?, step: num(parts[2])? };
    if !(g.lo.is_finite() && g.hi.is_finite() && g.step.is_finite()) {
        return Err("grid bounds must be finite".into());
    }
    if !(g.step > 0.0) || g.hi < g.lo {
        return Err("grid needs step > 0 and hi >= lo".into());
    }
    if (g.hi - g.lo) / g.step > 1e7 {
        return Err("grid has more than 1e7 points".into());
    }
    Ok(g)
}

pub fn parse_seed(s: &str) -> Result<u64, String> {
    let t = s.trim().replace('_', "");
    let r = match t.strip_prefix("0x").or_else(|| t.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => t.parse::<u64>(),
    };
    r.map_err(|e| format!("invalid seed {s:?}: {e}"))
}

#[derive(Args, Debug, Serialize)]
pub struct CdfArgs {
    #[arg(long, value_enum, default_value = "g")]
    pub law: Law,
    #[arg(long, value_parser = parse_grid, default_value = "-5:15:0.1", allow_hyphen_values = true)]
    pub grid: Grid,
    /// Inversion tolerance
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    #[arg(long, default_value_t = 1.5)]
    pub gamma: f64,
    #[arg(long, default_value_t = 0.5)]
    pub alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    pub c: f64,
}

#[derive(Args, Debug, Serialize)]
pub struct MergingArgs {
    #[arg(long, default_value_t = 1536)]
    pub n: u64,
    #[arg(long, default_value_t = 200_000)]
    pub reps: usize,
}

#[derive(Args, Debug, Serialize)]
pub struct MlofArgs {
    #[arg(long, default_value_t = 14)]
    pub k: u32,
    #[arg(long, default_value_t = 200_000)]
    pub reps: usize,
}

#[derive(Args, Debug, Serialize)]
pub struct FellerArgs {
    #[arg(long, default_value_t = 1 << 16)]
    pub n: u64,
    #[arg(long, default_value_t = 2000)]
    pub reps: usize,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CouplingCheck {
    /// Median gap across --n-list
    Gap,
    /// Spread of the Poisson count at --n
    Count,
    /// Two-sample KS between the two sums at --n
    Ks,
}

#[derive(Args, Debug, Serialize)]
pub struct CouplingArgs {
    #[arg(long, value_enum, default_value = "gap")]
    pub check: CouplingCheck,
    /// Tail index of T(x) = x^-alpha on x >= 1, below 1
    #[arg(long, default_value_t = 0.5)]
    pub alpha: f64,
    #[arg(long, value_delimiter = ',', default_value = "100,1000,10000")]
    pub n_list: Vec<u64>,
    #[arg(long, default_value_t = 10_000)]
    pub n: u64,
    #[arg(long, default_value_t = 1000)]
    pub reps: usize,
    /// KS tolerance for --check ks
    #[arg(long, default_value_t = 0.01)]
    pub tolerance: f64,
}

#[derive(Args, Debug, Serialize)]
pub struct LepageArgs {
    #[arg(long, default_value_t = 0.5)]
    pub alpha: f64,
    #[arg(long, default_value_t = 14)]
    pub k: u32,
    #[arg(long, default_value_t = 100_000)]
    pub reps: usize,
    #[arg(long)]
    pub symmetric: bool,
}

#[derive(Args, Debug, Serialize)]
pub struct OrderstatsArgs {
    #[arg(long, default_value_t = 1)]
    pub p: usize,
    #[arg(long, default_value_t = 10_000)]
    pub n: usize,
    #[arg(long, default_value_t = 100_000)]
    pub reps: usize,
    #[arg(long, default_value_t = 0.01)]
    pub ks_tol: f64,
}

#[derive(Args, Debug, Serialize)]
pub struct NegligibilityArgs {
    #[arg(long, value_delimiter = ',', default_value = "0.5,2.5")]
    pub alpha_list: Vec<f64>,
    #[arg(long, default_value_t = 10_000)]
    pub n: usize,
    #[arg(long, default_value_t = 1000)]
    pub reps: usize,
}

#[derive(Args, Debug, Serialize)]
pub struct SweepArgs {
    #[arg(long, default_value_t = 10)]
    pub k: u32,
    #[arg(long, default_value_t = 8)]
    pub points: u32,
    #[arg(long, default_value_t = 100_000)]
    pub reps: usize,
}

#[derive(Args, Debug, Serialize)]
pub struct SelftestArgs {
    /// Run only these criteria (comma-separated numbers)
    #[arg(long, value_delimiter = ',')]
    pub only: Vec<u32>,
    /// Run every criterion, not just the fast subset
    #[arg(long)]
    pub all: bool,
    /// Truncation tolerance of the g series (test hook)
    #[arg(long, hide = true)]
    pub g_tol: Option<f64>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_lengths() {
        assert_eq!(parse_grid("-5:15:0.1").unwrap().len(), 201);
        assert_eq!(parse_grid("0:1:0.3").unwrap().len(), 4);
        assert_eq!(parse_grid("2:2:1").unwrap().len(), 1);
        assert!(parse_grid("0:1").is_err());
        assert!(parse_grid("1:0:0.1").is_err());
        assert!(parse_grid("0:1:0").is_err());
    }

    #[test]
    fn seeds() {
        assert_eq!(parse_seed("0xC5D0_0B5E_55AA_1234").unwrap(), DEFAULT_SEED);
        assert_eq!(parse_seed("42").unwrap(), 42);
        assert!(parse_seed("x").is_err());
    }

    #[test]
    fn grammar_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
