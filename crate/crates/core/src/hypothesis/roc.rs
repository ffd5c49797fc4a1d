use log::debug;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::montecarlo::{normalized_weights, simulate_weighted_graphs};
use super::statistics::TestStatistic;
use super::{Statistic, Tail};
use crate::error::{Error, Result};
use crate::graph::{BlockCounts, Covariates, Graph};
use crate::inference::{mle_er, mle_sbm_given_c};
use crate::models::{loglik_sbm_counts, FixedDegreeSampler, GraphModel, SbmParams};

/// One simulated statistic value and its importance weight.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightedScore {
    pub score: f64,
    pub weight: f64,
}

impl WeightedScore {
    pub fn new(score: f64, weight: f64) -> Self {
        Self { score, weight }
    }

    /// Unit-weight scores.
    pub fn unweighted(scores: &[f64]) -> Vec<Self> {
        scores.iter().map(|&s| Self::new(s, 1.0)).collect()
    }
}

/// Receiver operating characteristic: `(fpr, tpr)` points from `(0, 0)` to
/// `(1, 1)`, nondecreasing in both coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RocCurve {
    pub points: Vec<(f64, f64)>,
    pub auc: f64,
    pub weighted: bool,
}

pub fn trapezoid_auc(points: &[(f64, f64)]) -> f64 {
    points
        .windows(2)
        .map(|w| (w[1].0 - w[0].0) * (w[0].1 + w[1].1) / 2.0)
        .sum()
}

fn check_weights(sample: &[WeightedScore], arm: &str) -> Result<()> {
    if sample.is_empty() {
        return Err(Error::EmptySample);
    }
    if sample.iter().any(|s| s.score.is_nan()) {
        return Err(Error::Invalid(format!("{arm} sample contains NaN")));
    }
    if sample
        .iter()
        .any(|s| !s.weight.is_finite() || s.weight < 0.0)
    {
        return Err(Error::DegenerateWeights(format!(
            "{arm} weights must be finite and non-negative"
        )));
    }
    if sample.iter().all(|s| s.weight == 0.0) {
        return Err(Error::DegenerateWeights(format!(
            "{arm} weights are all zero"
        )));
    }
    Ok(())
}

/// Sweeps a rejection threshold over the pooled scores. At each distinct
/// score the curve moves to the weighted fractions of null (x) and
/// alternate (y) scores that would be rejected; tied scores move both
/// coordinates at once.
pub fn roc_curve(null: &[WeightedScore], alt: &[WeightedScore], tail: Tail) -> Result<RocCurve> {
    check_weights(null, "null")?;
    check_weights(alt, "alternate")?;
    // Orient so that larger keys are rejected first.
    let key = |s: f64| match tail {
        Tail::Upper => s,
        Tail::Lower => -s,
    };
    let mut pooled: Vec<(f64, f64, bool)> = null
        .iter()
        .map(|s| (key(s.score), s.weight, false))
        .chain(alt.iter().map(|s| (key(s.score), s.weight, true)))
        .collect();
    pooled.sort_by(|a, b| b.0.total_cmp(&a.0));

    // Cumulative sums in sweep order; the totals are the final sums so the
    // last point is exactly (1, 1).
    let mut fp = Vec::new();
    let mut tp = Vec::new();
    let (mut cum_null, mut cum_alt) = (0.0, 0.0);
    let mut i = 0;
    while i < pooled.len() {
        let threshold = pooled[i].0;
        while i < pooled.len() && pooled[i].0 == threshold {
            if pooled[i].2 {
                cum_alt += pooled[i].1;
            } else {
                cum_null += pooled[i].1;
            }
            i += 1;
        }
        fp.push(cum_null);
        tp.push(cum_alt);
    }
    let mut points = vec![(0.0, 0.0)];
    for (f, t) in fp.iter().zip(&tp) {
        let p = (f / cum_null, t / cum_alt);
        if points.last() != Some(&p) {
            points.push(p);
        }
    }
    let weighted = [null, alt]
        .iter()
        .any(|arm| arm.iter().any(|s| s.weight != arm[0].weight));
    Ok(RocCurve {
        auc: trapezoid_auc(&points),
        points,
        weighted,
    })
}

/// A power comparison: the same simulated null and alternate graphs are
/// scored by every statistic, and optionally by the likelihood ratio at
/// known labels to give the upper-bound curve.
#[derive(Debug, Clone, PartialEq)]
pub struct RocExperiment {
    pub null: GraphModel,
    pub alternate: GraphModel,
    pub statistics: Vec<Statistic>,
    pub bound_covariates: Option<Covariates>,
    pub replicates: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RocOutput {
    /// Keyed by statistic name, in request order.
    pub curves: Vec<(String, RocCurve)>,
    pub upper_bound: Option<RocCurve>,
}

// Calibration draws for the fixed-degree alternate use streams far from the
// ones used by the experiment itself.
const CALIBRATION_STREAM: u64 = 1 << 62;

impl RocExperiment {
    /// Erdős–Rényi null and block-model alternate, both at the MLEs of
    /// `g` (the latter under the known labels `c`).
    pub fn fitted(
        g: &Graph,
        c: &Covariates,
        statistics: Vec<Statistic>,
        replicates: usize,
        seed: u64,
    ) -> Result<Self> {
        Ok(Self {
            null: GraphModel::ErdosRenyi {
                n: g.n(),
                params: mle_er(g)?,
            },
            alternate: GraphModel::BlockModel {
                covariates: c.clone(),
                params: mle_sbm_given_c(g, c)?,
            },
            statistics,
            bound_covariates: Some(c.clone()),
            replicates,
            seed,
        })
    }

    /// Uniform fixed-degree null at the degrees of `g`; the alternate
    /// reweights fixed-degree graphs by a block-model likelihood whose
    /// parameters come from [`fit_fd_alternate`] with `calibration` draws.
    pub fn fitted_fixed_degree(
        g: &Graph,
        c: &Covariates,
        statistics: Vec<Statistic>,
        replicates: usize,
        seed: u64,
        calibration: usize,
    ) -> Result<Self> {
        let degrees = g.degree_sequence();
        let params = fit_fd_alternate(g, c, calibration, seed)?;
        Ok(Self {
            null: GraphModel::FixedDegree {
                degrees: degrees.clone(),
            },
            alternate: GraphModel::FixedDegreeBlock {
                degrees,
                covariates: c.clone(),
                params,
            },
            statistics,
            bound_covariates: Some(c.clone()),
            replicates,
            seed,
        })
    }

    fn bound_statistic(&self) -> Option<Statistic> {
        let c = self.bound_covariates.clone()?;
        Some(if self.null.is_fixed_degree() {
            Statistic::LrFdKnown(c)
        } else {
            Statistic::LrKnown(c)
        })
    }

    pub fn run(&self) -> Result<RocOutput> {
        run_roc(self)
    }
}

fn score_all(stat: &Statistic, graphs: &[Graph]) -> Result<Vec<f64>> {
    let scores: Vec<Result<f64>> = graphs.par_iter().map(|g| stat.evaluate(g)).collect();
    scores
        .into_iter()
        .enumerate()
        .map(|(replicate, s)| {
            s.map_err(|e| Error::Replicate {
                replicate,
                source: Box::new(e),
            })
        })
        .collect()
}

fn zip_scores(scores: Vec<f64>, weights: &[f64]) -> Vec<WeightedScore> {
    scores
        .into_iter()
        .zip(weights)
        .map(|(s, &w)| WeightedScore::new(s, w))
        .collect()
}

/// Draws `replicates` graphs from each arm (null on streams
/// `0..replicates`, alternate on the next `replicates`) and builds one
/// curve per statistic plus the optional bound.
pub fn run_roc(exp: &RocExperiment) -> Result<RocOutput> {
    exp.null.validate()?;
    exp.alternate.validate()?;
    let n = exp.null.node_count();
    if exp.alternate.node_count() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            found: exp.alternate.node_count(),
        });
    }
    if let Some(c) = &exp.bound_covariates {
        c.check_binary()?;
        c.check_len(n)?;
    }
    let reps = exp.replicates;
    let (null_graphs, null_lw) = simulate_weighted_graphs(&exp.null, reps, exp.seed, 0)?;
    let (alt_graphs, alt_lw) =
        simulate_weighted_graphs(&exp.alternate, reps, exp.seed, reps as u64)?;
    let null_w = normalized_weights(&null_lw)?;
    let alt_w = normalized_weights(&alt_lw)?;
    let weighted = exp.null.is_fixed_degree() || exp.alternate.is_fixed_degree();

    let curve = |stat: &Statistic| -> Result<RocCurve> {
        let null_scores = zip_scores(score_all(stat, &null_graphs)?, &null_w);
        let alt_scores = zip_scores(score_all(stat, &alt_graphs)?, &alt_w);
        let mut curve = roc_curve(&null_scores, &alt_scores, stat.tail())?;
        curve.weighted = weighted;
        debug!("{}: auc {:.4}", stat.key(), curve.auc);
        Ok(curve)
    };
    let curves = exp
        .statistics
        .iter()
        .map(|s| Ok((s.key().to_string(), curve(s)?)))
        .collect::<Result<Vec<_>>>()?;
    let upper_bound = exp.bound_statistic().map(|s| curve(&s)).transpose()?;
    Ok(RocOutput {
        curves,
        upper_bound,
    })
}

/// ROC of the likelihood ratio evaluated at the true labels, with block
/// parameters profiled per replicate.
pub fn roc_upper_bound(
    g: &Graph,
    true_c: &Covariates,
    null: &GraphModel,
    alt: &GraphModel,
    replicates: usize,
    seed: u64,
) -> Result<RocCurve> {
    true_c.check_binary()?;
    true_c.check_len(g.n())?;
    let exp = RocExperiment {
        null: null.clone(),
        alternate: alt.clone(),
        statistics: Vec::new(),
        bound_covariates: Some(true_c.clone()),
        replicates,
        seed,
    };
    Ok(run_roc(&exp)?.upper_bound.expect("bound requested"))
}

const FD_EDGE: f64 = 1e-4;
const FD_INITIAL_STEP: f64 = 0.05;
const FD_MIN_STEP: f64 = 1e-4;
const FD_MAX_ITER: usize = 10_000;

// Weighted median of `values` with weights proportional to exp(log_w).
fn weighted_median(values: &[f64], log_w: &[f64]) -> Option<f64> {
    let max = log_w.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return None;
    }
    let mut pairs: Vec<(f64, f64)> = values
        .iter()
        .zip(log_w)
        .map(|(&v, &w)| (v, (w - max).exp()))
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let total: f64 = pairs.iter().map(|p| p.1).sum();
    let mut cum = 0.0;
    for (v, w) in &pairs {
        cum += w;
        if cum >= total / 2.0 {
            return Some(*v);
        }
    }
    pairs.last().map(|p| p.0)
}

struct FdCalibration {
    observed: BlockCounts,
    pool: Vec<BlockCounts>,
    pool_log_w: Vec<f64>,
}

impl FdCalibration {
    fn objective(&self, params: &SbmParams) -> f64 {
        let ll: Vec<f64> = self
            .pool
            .iter()
            .map(|c| loglik_sbm_counts(c, params))
            .collect();
        let log_w: Vec<f64> = ll
            .iter()
            .zip(&self.pool_log_w)
            .map(|(a, b)| a + b)
            .collect();
        match weighted_median(&ll, &log_w) {
            Some(median) => (loglik_sbm_counts(&self.observed, params) - median).abs(),
            None => f64::INFINITY,
        }
    }
}

/// Block parameters for the fixed-degree alternate: coordinate descent on
/// `(p00, p01, p11)` minimizing the gap between the observed loglik and the
/// weighted median loglik of likelihood-reweighted fixed-degree draws.
///
/// One pool of `proposals` fixed-degree draws, biased toward the block MLEs
/// and weighted toward the uniform law, is reweighted for every candidate,
/// so the objective is a deterministic function of the parameters. The search starts at the block MLEs (moved `1e-4` inside
/// the unit interval), tries steps of `±0.05` on each coordinate in turn,
/// and halves the step whenever no move improves, stopping below `1e-4`.
pub fn fit_fd_alternate(
    g: &Graph,
    c: &Covariates,
    proposals: usize,
    seed: u64,
) -> Result<SbmParams> {
    let observed = g.conformal_partition(c)?;
    let start = mle_sbm_given_c(g, c)?;
    let mut theta = start.as_array().map(|p| p.clamp(FD_EDGE, 1.0 - FD_EDGE));
    let proposal = FixedDegreeSampler::with_block_bias(
        g.degree_sequence(),
        c,
        &SbmParams::new(theta[0], theta[1], theta[2])?,
    )?;
    let (graphs, pool_log_w) =
        simulate_weighted_graphs(&proposal, proposals, seed, CALIBRATION_STREAM)?;
    let pool = graphs
        .iter()
        .map(|h| h.conformal_partition(c))
        .collect::<Result<Vec<_>>>()?;
    let cal = FdCalibration {
        observed,
        pool,
        pool_log_w,
    };

    let to_params = |t: [f64; 3]| SbmParams {
        p00: t[0],
        p01: t[1],
        p11: t[2],
    };
    let mut best = cal.objective(&to_params(theta));
    let mut step = FD_INITIAL_STEP;
    let mut iterations = 0;
    while step >= FD_MIN_STEP && iterations < FD_MAX_ITER {
        iterations += 1;
        let mut improved = false;
        for coord in 0..3 {
            for dir in [1.0, -1.0] {
                let mut cand = theta;
                cand[coord] = (cand[coord] + dir * step).clamp(FD_EDGE, 1.0 - FD_EDGE);
                if cand == theta {
                    continue;
                }
                let value = cal.objective(&to_params(cand));
                if value < best {
                    best = value;
                    theta = cand;
                    improved = true;
                }
            }
        }
        if !improved {
            step /= 2.0;
        }
    }
    debug!(
        "fixed-degree alternate {:?} after {iterations} iterations, gap {best:.4}",
        theta
    );
    SbmParams::new(theta[0], theta[1], theta[2])
}
