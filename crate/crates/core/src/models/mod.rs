//! Random graph models: Erdős–Rényi, the two-group stochastic block model,
//! and fixed-degree models sampled by sequential importance sampling.

mod bernoulli;
mod fixed_degree;

pub use bernoulli::{
    bernoulli_loglik, loglik_er, loglik_sbm, loglik_sbm_counts, sample_er, sample_er_with,
    sample_sbm, sample_sbm_with,
};
pub use fixed_degree::{is_graphical, sample_fixed_degree, FixedDegreeSampler, Proposal};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Block, Covariates, DegreeSequence, Graph};
use crate::rng::Rng;

/// Link probability of the Erdős–Rényi model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErParams {
    p: f64,
}

impl ErParams {
    pub fn new(p: f64) -> Result<Self> {
        check_probability(p)?;
        Ok(Self { p })
    }

    pub fn p(&self) -> f64 {
        self.p
    }
}

/// Within- and between-group link probabilities of the two-group block
/// model; `p10 = p01`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SbmParams {
    pub p00: f64,
    pub p01: f64,
    pub p11: f64,
}

impl SbmParams {
    pub fn new(p00: f64, p01: f64, p11: f64) -> Result<Self> {
        for p in [p00, p01, p11] {
            check_probability(p)?;
        }
        Ok(Self { p00, p01, p11 })
    }

    /// All three probabilities equal to `p`.
    pub fn uniform(p: f64) -> Result<Self> {
        Self::new(p, p, p)
    }

    pub fn block(&self, b: Block) -> f64 {
        match b {
            Block::ZeroZero => self.p00,
            Block::ZeroOne => self.p01,
            Block::OneOne => self.p11,
        }
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize) -> f64 {
        self.block(Block::of(a, b))
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.p00, self.p01, self.p11]
    }

    /// Parameters after swapping the two group labels.
    pub fn swapped(&self) -> Self {
        Self {
            p00: self.p11,
            p01: self.p01,
            p11: self.p00,
        }
    }
}

fn check_probability(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::InvalidProbability(p))
    }
}

/// A sampled graph and the log of its unnormalized importance weight.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraphSample {
    pub graph: Graph,
    pub log_weight: f64,
}

/// A source of independent graphs.
pub trait GraphSampler: Sync {
    fn sample(&self, rng: &mut Rng) -> Result<Graph>;
}

impl<F> GraphSampler for F
where
    F: Fn(&mut Rng) -> Result<Graph> + Sync,
{
    fn sample(&self, rng: &mut Rng) -> Result<Graph> {
        self(rng)
    }
}

/// A source of importance-weighted graphs.
pub trait WeightedGraphSampler: Sync {
    fn sample_weighted(&self, rng: &mut Rng) -> Result<WeightedGraphSample>;
}

/// A fully specified null or alternate model.
#[derive(Debug, Clone, PartialEq)]
pub enum GraphModel {
    ErdosRenyi {
        n: usize,
        params: ErParams,
    },
    BlockModel {
        covariates: Covariates,
        params: SbmParams,
    },
    /// Uniform over simple graphs with the given degrees.
    FixedDegree {
        degrees: DegreeSequence,
    },
    /// Fixed-degree graphs weighted in proportion to their block-model
    /// likelihood.
    FixedDegreeBlock {
        degrees: DegreeSequence,
        covariates: Covariates,
        params: SbmParams,
    },
}

impl GraphModel {
    pub fn node_count(&self) -> usize {
        match self {
            GraphModel::ErdosRenyi { n, .. } => *n,
            GraphModel::BlockModel { covariates, .. } => covariates.len(),
            GraphModel::FixedDegree { degrees } | GraphModel::FixedDegreeBlock { degrees, .. } => {
                degrees.len()
            }
        }
    }

    pub fn is_fixed_degree(&self) -> bool {
        matches!(
            self,
            GraphModel::FixedDegree { .. } | GraphModel::FixedDegreeBlock { .. }
        )
    }

    pub fn name(&self) -> &'static str {
        match self {
            GraphModel::ErdosRenyi { .. } => "er",
            GraphModel::BlockModel { .. } => "sbm",
            GraphModel::FixedDegree { .. } => "fixed-degree",
            GraphModel::FixedDegreeBlock { .. } => "fixed-degree-sbm",
        }
    }

    /// Checks parameters that the variants cannot enforce by construction.
    pub fn validate(&self) -> Result<()> {
        match self {
            GraphModel::ErdosRenyi { n, .. } if *n < 2 => Err(Error::TooFewNodes { n: *n, min: 2 }),
            GraphModel::BlockModel { covariates, .. } => covariates.check_binary(),
            GraphModel::FixedDegree { degrees } => fixed_degree::check_sequence(degrees),
            GraphModel::FixedDegreeBlock {
                degrees,
                covariates,
                ..
            } => {
                covariates.check_binary()?;
                covariates.check_len(degrees.len())?;
                fixed_degree::check_sequence(degrees)
            }
            _ => Ok(()),
        }
    }
}

impl GraphSampler for GraphModel {
    /// Unweighted draw; fixed-degree models need their weights and are
    /// rejected here.
    fn sample(&self, rng: &mut Rng) -> Result<Graph> {
        match self {
            GraphModel::ErdosRenyi { n, params } => sample_er_with(*n, params, rng),
            GraphModel::BlockModel { covariates, params } => {
                sample_sbm_with(covariates, params, rng)
            }
            _ => Err(Error::Invalid(format!(
                "{} draws are importance weighted",
                self.name()
            ))),
        }
    }
}

impl WeightedGraphSampler for GraphModel {
    fn sample_weighted(&self, rng: &mut Rng) -> Result<WeightedGraphSample> {
        match self {
            GraphModel::ErdosRenyi { n, params } => Ok(WeightedGraphSample {
                graph: sample_er_with(*n, params, rng)?,
                log_weight: 0.0,
            }),
            GraphModel::BlockModel { covariates, params } => Ok(WeightedGraphSample {
                graph: sample_sbm_with(covariates, params, rng)?,
                log_weight: 0.0,
            }),
            GraphModel::FixedDegree { degrees } => {
                FixedDegreeSampler::new(degrees.clone())?.sample_weighted(rng)
            }
            GraphModel::FixedDegreeBlock {
                degrees,
                covariates,
                params,
            } => {
                // Proposals lean toward the block structure; the sampler's
                // weight targets the uniform law and the likelihood factor
                // turns it into the block-weighted one.
                let draw =
                    FixedDegreeSampler::with_block_bias(degrees.clone(), covariates, params)?
                        .sample_weighted(rng)?;
                let lik = loglik_sbm(&draw.graph, covariates, params)?;
                Ok(WeightedGraphSample {
                    log_weight: draw.log_weight + lik,
                    graph: draw.graph,
                })
            }
        }
    }
}
