use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::collections::BTreeMap;

/// Outcome of one Monte Carlo experiment. `pass` holds exactly when
/// `statistic <= tolerance`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub experiment: String,
    pub params: BTreeMap<String, Value>,
    pub statistic: f64,
    /// `None` when not applicable (for example a single replicate).
    pub stderr: Option<f64>,
    pub seed: u64,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub details: BTreeMap<String, Value>,
}

fn to_value<T: Serialize + ?Sized>(v: &T) -> Value {
    serde_json::to_value(v).expect("report values serialize")
}

impl ExperimentReport {
    pub fn new(experiment: &str, seed: u64) -> Self {
        ExperimentReport {
            experiment: experiment.to_string(),
            params: BTreeMap::new(),
            statistic: f64::NAN,
            stderr: None,
            seed,
            tolerance: f64::NAN,
            pass: false,
            details: BTreeMap::new(),
        }
    }

    pub fn param<T: Serialize + ?Sized>(mut self, key: &str, value: &T) -> Self {
        self.params.insert(key.to_string(), to_value(value));
        self
    }

    pub fn with_stderr(mut self, stderr: f64) -> Self {
        self.stderr = Some(stderr);
        self
    }

    pub fn with_detail<T: Serialize + ?Sized>(mut self, key: &str, value: &T) -> Self {
        self.detail(key, value);
        self
    }

    pub fn detail<T: Serialize + ?Sized>(&mut self, key: &str, value: &T) {
        self.details.insert(key.to_string(), to_value(value));
    }

    /// Sets the statistic and tolerance and derives `pass`.
    pub fn finish(mut self, statistic: f64, tolerance: f64) -> Self {
        self.statistic = statistic;
        self.tolerance = tolerance;
        self.pass = statistic <= tolerance;
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_flag_follows_tolerance() {
        let r = ExperimentReport::new("x", 1).param("n", &4).finish(0.1, 0.2);
        assert!(r.pass);
        let r = ExperimentReport::new("x", 1).finish(0.3, 0.2);
        assert!(!r.pass);
        let r = ExperimentReport::new("x", 1).finish(f64::NAN, 0.2);
        assert!(!r.pass);
    }

    #[test]
    fn json_fields() {
        let r = ExperimentReport::new("merging", 7).param("n", &1536).finish(0.01, 0.03);
        let v: Value = serde_json::from_str(&r.to_json()).unwrap();
        for key in ["experiment", "params", "statistic", "stderr", "seed", "tolerance", "pass"] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert!(v["stderr"].is_null());
        assert!(v.get("details").is_none());
        let back: ExperimentReport = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
    }
}
