use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

/// Residual summary of one check. `passed == (max_abs_residual <= tolerance)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    pub max_abs_residual: f64,
    pub mean_abs_residual: f64,
    pub min_abs_residual: f64,
    pub tolerance: f64,
    pub sample_count: usize,
    pub passed: bool,
    pub metadata: BTreeMap<String, Value>,
}

impl CheckReport {
    /// Summarise `residuals`; any NaN makes the maximum NaN and fails the check.
    pub fn from_residuals(name: impl Into<String>, residuals: &[f64], tolerance: f64) -> Self {
        let nan = residuals.iter().any(|r| r.is_nan());
        let (max, min) = if residuals.is_empty() {
            (0.0, 0.0)
        } else if nan {
            (f64::NAN, f64::NAN)
        } else {
            residuals
                .iter()
                .fold((f64::NEG_INFINITY, f64::INFINITY), |(hi, lo), r| {
                    (hi.max(*r), lo.min(*r))
                })
        };
        let mean = if residuals.is_empty() {
            0.0
        } else {
            residuals.iter().sum::<f64>() / residuals.len() as f64
        };
        Self {
            name: name.into(),
            max_abs_residual: max,
            mean_abs_residual: mean,
            min_abs_residual: min,
            tolerance,
            sample_count: residuals.len(),
            passed: max <= tolerance,
            metadata: BTreeMap::new(),
        }
    }

    pub fn with(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.metadata.insert(key.to_string(), value.into());
        self
    }

    /// Tighten `passed`; used when extra conditions beyond the residual bound
    /// must hold. The residual invariant is kept by raising the reported
    /// maximum to infinity.
    pub fn fail_because(mut self, reason: &str) -> Self {
        self.passed = false;
        self.max_abs_residual = f64::INFINITY;
        self.metadata.insert("failure".into(), Value::from(reason));
        self
    }
}
