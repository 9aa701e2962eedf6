use std::collections::BTreeMap;

use serde::Serialize;

use super::config::{Check, ExperimentConfig, Prediction};

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PathEstimate {
    pub stream_index: u64,
    pub values: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnsembleSummary {
    pub count: usize,
    pub mean: f64,
    pub median: f64,
    pub standard_error: f64,
    pub min: f64,
    pub max: f64,
}

impl EnsembleSummary {
    pub fn of(values: &[f64]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        let n = values.len();
        let mean = values.iter().sum::<f64>() / n as f64;
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        let median = if n % 2 == 1 {
            sorted[n / 2]
        } else {
            0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
        };
        let standard_error = if n > 1 {
            let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1) as f64;
            (var / n as f64).sqrt()
        } else {
            0.0
        };
        Some(Self {
            count: n,
            mean,
            median,
            standard_error,
            min: sorted[0],
            max: sorted[n - 1],
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub metric: String,
    pub min: Option<f64>,
    pub max: Option<f64>,
    pub value: Option<f64>,
    pub passed: bool,
}

impl CheckOutcome {
    pub fn evaluate(check: &Check, metrics: &BTreeMap<String, f64>) -> Self {
        let value = metrics.get(&check.metric).copied();
        let passed = value.is_some_and(|v| {
            !v.is_nan() && check.min.is_none_or(|m| v >= m) && check.max.is_none_or(|m| v <= m)
        });
        Self {
            metric: check.metric.clone(),
            min: check.min,
            max: check.max,
            value,
            passed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub schema_version: String,
    pub preset: String,
    pub config: ExperimentConfig,
    pub per_path: Vec<PathEstimate>,
    pub summary: Option<EnsembleSummary>,
    pub metrics: BTreeMap<String, f64>,
    pub details: serde_json::Value,
    pub prediction: Option<Prediction>,
    pub asserted: bool,
    pub checks: Vec<CheckOutcome>,
    pub passed: bool,
    pub error: Option<String>,
    /// Only filled when timing is requested, so default reports stay byte-identical.
    pub wall_clock_seconds: Option<f64>,
}

impl ExperimentReport {
    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report serializes");
        text.push('\n');
        text
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn summary_statistics() {
        let s = EnsembleSummary::of(&[3.0, 1.0, 2.0, 4.0]).unwrap();
        assert_eq!(s.mean, 2.5);
        assert_eq!(s.median, 2.5);
        assert!((s.standard_error - (5.0f64 / 3.0 / 4.0).sqrt()).abs() < 1e-15);
        assert_eq!((s.min, s.max), (1.0, 4.0));
        assert_eq!(EnsembleSummary::of(&[2.0]).unwrap().standard_error, 0.0);
        assert!(EnsembleSummary::of(&[]).is_none());
    }

    #[test]
    fn check_bounds() {
        let metrics = BTreeMap::from([("a".to_string(), 1.5), ("nan".to_string(), f64::NAN)]);
        let check = |metric: &str, min, max| Check {
            metric: metric.into(),
            min,
            max,
        };
        assert!(CheckOutcome::evaluate(&check("a", Some(1.0), Some(2.0)), &metrics).passed);
        assert!(!CheckOutcome::evaluate(&check("a", Some(1.6), None), &metrics).passed);
        assert!(!CheckOutcome::evaluate(&check("missing", None, None), &metrics).passed);
        assert!(!CheckOutcome::evaluate(&check("nan", None, None), &metrics).passed);
    }
}
