//! Optional TOML layer between command-line flags and built-in defaults.
//!
//! The file is flat: every key is a flag name, e.g.
//!
//! ```toml
//! dataset = "zachary"
//! replicates = 4999
//! seed = 7
//! alt-p01 = 0.05
//! ```
//!
//! Keys a command does not use are ignored; unknown keys are an error.

use std::path::{Path, PathBuf};

use anyhow::Context;
use serde::Deserialize;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct FileConfig {
    pub dataset: Option<String>,
    pub edges: Option<PathBuf>,
    pub covariates: Option<PathBuf>,
    pub output: Option<PathBuf>,
    pub format: Option<String>,
    pub seed: Option<u64>,
    pub replicates: Option<usize>,
    pub exact_limit: Option<usize>,
    pub statistic: Option<String>,
    pub statistics: Option<String>,
    pub no_bound: Option<bool>,
    pub null: Option<String>,
    pub null_p: Option<f64>,
    pub alt: Option<String>,
    pub alt_p: Option<f64>,
    pub alt_p00: Option<f64>,
    pub alt_p01: Option<f64>,
    pub alt_p11: Option<f64>,
    pub calibration: Option<usize>,
    pub model: Option<String>,
    pub n: Option<usize>,
    pub p: Option<f64>,
    pub groups: Option<String>,
    pub p00: Option<f64>,
    pub p01: Option<f64>,
    pub p11: Option<f64>,
    pub degrees: Option<String>,
    pub degrees_from: Option<String>,
    pub name: Option<String>,
}

impl FileConfig {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }
}

/// Flag if given, else the file's value.
pub fn layer<T>(flag: Option<T>, file: &Option<T>) -> Option<T>
where
    T: Clone,
{
    flag.or_else(|| file.clone())
}
