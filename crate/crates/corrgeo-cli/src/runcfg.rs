//! Resolved run configuration echoed into JSON reports.
//!
//! Precedence: command-line flags over config-file values over defaults.

use std::path::Path;

use corrgeo::{LogConfig, MetricParams};
use serde::{Deserialize, Serialize};

use crate::io::FileFormat;

/// Optional JSON config file; every field may be omitted.
#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub p_values: Option<Vec<f64>>,
    pub samples: Option<usize>,
    pub t_min: Option<f64>,
    pub t_max: Option<f64>,
    pub max_iters: Option<usize>,
    pub horizontality_tol: Option<f64>,
    pub roundtrip_tol: Option<f64>,
    pub fd_step: Option<f64>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("{}: {e}", path.display()))?;
        serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
    }
}

/// Fully resolved settings for one command invocation.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub alpha: f64,
    pub beta: f64,
    pub p_values: Vec<f64>,
    pub samples: usize,
    pub t_min: f64,
    pub t_max: f64,
    pub max_iters: usize,
    pub horizontality_tol: f64,
    pub roundtrip_tol: f64,
    pub fd_step: f64,
    pub format: String,
    pub input_format: String,
}

impl Default for RunConfig {
    fn default() -> Self {
        let log = LogConfig::default();
        Self {
            alpha: 1.0,
            beta: 0.0,
            p_values: vec![-1.0, 0.0, 1.0, 2.0],
            samples: 201,
            t_min: -0.5,
            t_max: 1.5,
            max_iters: log.max_iters,
            horizontality_tol: log.horizontality_tol,
            roundtrip_tol: log.roundtrip_tol,
            fd_step: log.fd_step,
            format: "csv".to_string(),
            input_format: "auto".to_string(),
        }
    }
}

impl RunConfig {
    pub fn apply_file(&mut self, file: &FileConfig) {
        if let Some(v) = file.alpha {
            self.alpha = v;
        }
        if let Some(v) = file.beta {
            self.beta = v;
        }
        if let Some(ref v) = file.p_values {
            self.p_values = v.clone();
        }
        if let Some(v) = file.samples {
            self.samples = v;
        }
        if let Some(v) = file.t_min {
            self.t_min = v;
        }
        if let Some(v) = file.t_max {
            self.t_max = v;
        }
        if let Some(v) = file.max_iters {
            self.max_iters = v;
        }
        if let Some(v) = file.horizontality_tol {
            self.horizontality_tol = v;
        }
        if let Some(v) = file.roundtrip_tol {
            self.roundtrip_tol = v;
        }
        if let Some(v) = file.fd_step {
            self.fd_step = v;
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        if !(self.alpha.is_finite() && self.alpha > 0.0) {
            return Err(format!("alpha must be positive, got {}", self.alpha));
        }
        if !self.beta.is_finite() {
            return Err("beta must be finite".to_string());
        }
        if self.samples < 2 {
            return Err(format!("samples must be at least 2, got {}", self.samples));
        }
        if self.t_min >= self.t_max || !(self.t_min.is_finite() && self.t_max.is_finite()) {
            return Err(format!("need t_min < t_max, got [{}, {}]", self.t_min, self.t_max));
        }
        if !(self.horizontality_tol > 0.0 && self.fd_step > 0.0) {
            return Err("tolerances must be positive".to_string());
        }
        Ok(())
    }

    pub fn metric_params(&self) -> Result<MetricParams, String> {
        MetricParams::new(self.alpha, self.beta).map_err(|e| e.to_string())
    }

    pub fn log_config(&self) -> LogConfig {
        LogConfig {
            max_iters: self.max_iters,
            horizontality_tol: self.horizontality_tol,
            roundtrip_tol: self.roundtrip_tol,
            fd_step: self.fd_step,
        }
    }

    pub fn set_formats(&mut self, output: FileFormat, input: Option<FileFormat>) {
        self.format = output.label().to_string();
        self.input_format = input.map(|f| f.label().to_string()).unwrap_or_else(|| "auto".into());
    }

    pub fn sample_times(&self) -> Vec<f64> {
        let n = self.samples;
        (0..n)
            .map(|k| self.t_min + (self.t_max - self.t_min) * k as f64 / (n - 1) as f64)
            .collect()
    }
}
