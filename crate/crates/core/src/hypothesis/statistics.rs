use std::fmt;
use std::str::FromStr;

use super::Tail;
use crate::error::{Error, Result};
use crate::graph::{Covariates, Graph};
use crate::inference::{
    fit_exact_with_limit, fit_given, fit_spectral, mle_er, DEFAULT_EXHAUSTIVE_LIMIT,
};
use crate::models::loglik_er;

/// Sample variance of the degree sequence, `1/(n-1) Σ (d_i - mean)^2`.
pub fn stat_degree_variance(g: &Graph) -> Result<f64> {
    let n = g.n();
    if n < 2 {
        return Err(Error::TooFewNodes { n, min: 2 });
    }
    let degrees = g.degree_sequence();
    let mean = degrees.sum() as f64 / n as f64;
    let ss: f64 = degrees.0.iter().map(|&d| (d as f64 - mean).powi(2)).sum();
    Ok(ss / (n - 1) as f64)
}

fn er_profile(g: &Graph) -> Result<f64> {
    Ok(loglik_er(g, &mle_er(g)?))
}

/// `ln T_LR`: maximized Erdős–Rényi loglik minus the exhaustively
/// maximized block-model loglik.
pub fn log_lr_exact(g: &Graph, limit: usize) -> Result<f64> {
    Ok(er_profile(g)? - fit_exact_with_limit(g, limit)?.loglik)
}

/// Generalized likelihood ratio with the group maximization done
/// exhaustively; in `(0, 1]`.
pub fn stat_lr_exact(g: &Graph) -> Result<f64> {
    Ok(log_lr_exact(g, DEFAULT_EXHAUSTIVE_LIMIT)?.exp())
}

/// `ln` of the spectral approximation to `T_LR`.
pub fn log_lr_spectral(g: &Graph) -> Result<f64> {
    Ok(er_profile(g)? - fit_spectral(g)?.loglik)
}

/// Likelihood ratio with the Fiedler split in place of the exhaustive
/// group maximization; in `(0, 1]` and never below [`stat_lr_exact`].
pub fn stat_lr_spectral(g: &Graph) -> Result<f64> {
    Ok(log_lr_spectral(g)?.exp())
}

/// `ln` of the fixed-degree statistic: minus the block-model loglik at
/// the spectral fit.
pub fn log_lr_fd_spectral(g: &Graph) -> Result<f64> {
    Ok(-fit_spectral(g)?.loglik)
}

/// Inverse block-model likelihood at the spectral fit; at least 1. The
/// uniform fixed-degree null likelihood is constant on its support, so it
/// is dropped from the ratio and small values still reject.
pub fn stat_lr_fd_spectral(g: &Graph) -> Result<f64> {
    Ok(log_lr_fd_spectral(g)?.exp())
}

/// Anything that can score a graph for a Monte Carlo test.
pub trait TestStatistic: Sync {
    fn name(&self) -> String;
    fn evaluate(&self, g: &Graph) -> Result<f64>;
}

/// Wraps a closure as a named statistic.
pub struct FnStatistic<F> {
    pub name: String,
    pub f: F,
}

impl<F> FnStatistic<F>
where
    F: Fn(&Graph) -> Result<f64> + Sync,
{
    pub fn new(name: impl Into<String>, f: F) -> Self {
        Self {
            name: name.into(),
            f,
        }
    }
}

impl<F> TestStatistic for FnStatistic<F>
where
    F: Fn(&Graph) -> Result<f64> + Sync,
{
    fn name(&self) -> String {
        self.name.clone()
    }

    fn evaluate(&self, g: &Graph) -> Result<f64> {
        (self.f)(g)
    }
}

/// The built-in statistics. Likelihood-ratio members evaluate on the log
/// scale, which preserves their ordering and avoids underflow.
#[derive(Debug, Clone, PartialEq)]
pub enum Statistic {
    DegreeVariance,
    LrExact {
        limit: usize,
    },
    LrSpectral,
    LrFdSpectral,
    /// Likelihood ratio against the block model at known labels.
    LrKnown(Covariates),
    /// Fixed-degree statistic at known labels.
    LrFdKnown(Covariates),
}

impl Statistic {
    pub fn tail(&self) -> Tail {
        match self {
            Statistic::DegreeVariance => Tail::Upper,
            // Small ratios, including the fixed-degree one whose numerator
            // is constant over the null's support, indicate structure.
            _ => Tail::Lower,
        }
    }

    pub fn is_log_scale(&self) -> bool {
        !matches!(self, Statistic::DegreeVariance)
    }

    pub fn key(&self) -> &'static str {
        match self {
            Statistic::DegreeVariance => "degvar",
            Statistic::LrExact { .. } => "lr",
            Statistic::LrSpectral => "lr-spectral",
            Statistic::LrFdSpectral => "lr-fd-spectral",
            Statistic::LrKnown(_) => "lr-known",
            Statistic::LrFdKnown(_) => "lr-fd-known",
        }
    }
}

impl fmt::Display for Statistic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

impl FromStr for Statistic {
    type Err = Error;

    /// Parses the label-free statistics.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "degvar" => Ok(Statistic::DegreeVariance),
            "lr" => Ok(Statistic::LrExact {
                limit: DEFAULT_EXHAUSTIVE_LIMIT,
            }),
            "lr-spectral" => Ok(Statistic::LrSpectral),
            "lr-fd-spectral" => Ok(Statistic::LrFdSpectral),
            other => Err(Error::Invalid(format!("unknown statistic '{other}'"))),
        }
    }
}

impl TestStatistic for Statistic {
    fn name(&self) -> String {
        self.key().to_string()
    }

    fn evaluate(&self, g: &Graph) -> Result<f64> {
        match self {
            Statistic::DegreeVariance => stat_degree_variance(g),
            Statistic::LrExact { limit } => log_lr_exact(g, *limit),
            Statistic::LrSpectral => log_lr_spectral(g),
            Statistic::LrFdSpectral => log_lr_fd_spectral(g),
            Statistic::LrKnown(c) => Ok(er_profile(g)? - fit_given(g, c)?.loglik),
            Statistic::LrFdKnown(c) => Ok(-fit_given(g, c)?.loglik),
        }
    }
}
