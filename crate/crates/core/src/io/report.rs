use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypothesis::{RocCurve, TestReport};

/// Serialization format for results.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
        }
    }
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(Error::Invalid(format!("unknown format '{other}'"))),
        }
    }
}

/// A result that can be written as CSV or JSON. Floats use Rust's
/// shortest round-trip formatting, so both forms parse back exactly.
pub trait Record: Serialize {
    fn to_csv(&self) -> String;
}

impl Record for TestReport {
    /// Header plus one row.
    fn to_csv(&self) -> String {
        format!(
            "statistic,observed,log_scale,tail,p_value,replicates,exceedances,seed,method\n\
             {},{},{},{},{},{},{},{},{}\n",
            self.statistic_name,
            self.observed,
            self.log_scale,
            self.tail.as_str(),
            self.p_value,
            self.replicates,
            self.exceedances,
            self.seed,
            serde_json::to_value(self.method)
                .ok()
                .and_then(|v| v.as_str().map(str::to_owned))
                .unwrap_or_default(),
        )
    }
}

impl Record for RocCurve {
    /// One `fpr,tpr` row per point, then `# auc=<value>`.
    fn to_csv(&self) -> String {
        let mut out = String::new();
        for (fpr, tpr) in &self.points {
            let _ = writeln!(out, "{fpr},{tpr}");
        }
        let _ = writeln!(out, "# auc={}", self.auc);
        out
    }
}

pub fn write_results<R: Record + ?Sized>(record: &R, format: Format) -> String {
    match format {
        Format::Csv => record.to_csv(),
        Format::Json => {
            let mut s = serde_json::to_string_pretty(record).expect("results serialize to JSON");
            s.push('\n');
            s
        }
    }
}

/// Reads back the points and AUC trailer written by [`Record::to_csv`] for
/// a [`RocCurve`].
pub fn parse_roc_csv(text: &str) -> Result<(Vec<(f64, f64)>, f64)> {
    let mut points = Vec::new();
    let mut auc = None;
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let err = |m: &str| Error::Parse {
            line: line_no,
            message: m.to_string(),
        };
        if let Some(v) = line.strip_prefix("# auc=") {
            auc = Some(v.trim().parse::<f64>().map_err(|_| err("bad auc value"))?);
            continue;
        }
        let (a, b) = line
            .split_once(',')
            .ok_or_else(|| err("expected 'fpr,tpr'"))?;
        let fpr = a.trim().parse::<f64>().map_err(|_| err("bad fpr"))?;
        let tpr = b.trim().parse::<f64>().map_err(|_| err("bad tpr"))?;
        points.push((fpr, tpr));
    }
    let auc = auc.ok_or_else(|| Error::Invalid("missing '# auc=' trailer".into()))?;
    Ok((points, auc))
}
