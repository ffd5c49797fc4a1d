//! Test statistics for network structure, Monte Carlo and importance-sampled
//! p-values, and ROC power curves.

mod chi2;
mod montecarlo;
mod roc;
mod statistics;

pub use chi2::{chi2_pvalue, chi2_test, regularized_gamma_q, stat_chi2, Chi2Statistic};
pub use montecarlo::{mc_pvalue, mc_pvalue_weighted, normalized_weights, run_test, McSummary};
pub use roc::{
    fit_fd_alternate, roc_curve, roc_upper_bound, run_roc, trapezoid_auc, RocCurve, RocExperiment,
    RocOutput, WeightedScore,
};
pub use statistics::{
    log_lr_exact, log_lr_fd_spectral, log_lr_spectral, stat_degree_variance, stat_lr_exact,
    stat_lr_fd_spectral, stat_lr_spectral, FnStatistic, Statistic, TestStatistic,
};

use serde::{Deserialize, Serialize};

/// Which tail of the statistic's null distribution rejects.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tail {
    Upper,
    Lower,
}

impl Tail {
    /// True when `simulated` is at least as extreme as `observed`.
    #[inline]
    pub fn is_extreme(self, simulated: f64, observed: f64) -> bool {
        match self {
            Tail::Upper => simulated >= observed,
            Tail::Lower => simulated <= observed,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Tail::Upper => "upper",
            Tail::Lower => "lower",
        }
    }
}

/// How a p-value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PValueMethod {
    /// Chi-square reference distribution.
    Asymptotic,
    /// `(1 + exceedances) / (replicates + 1)`.
    MonteCarlo,
    /// Self-normalized importance-weighted exceedance probability, floored
    /// at `1 / (replicates + 1)`.
    ImportanceSampling,
}

/// Outcome of one hypothesis test.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestReport {
    pub statistic_name: String,
    /// Observed statistic. Likelihood-ratio statistics are reported as
    /// natural logs (`log_scale = true`).
    pub observed: f64,
    pub log_scale: bool,
    pub tail: Tail,
    pub p_value: f64,
    pub replicates: usize,
    /// Simulated values at least as extreme as the observed one.
    pub exceedances: usize,
    pub seed: u64,
    pub method: PValueMethod,
}
