use rayon::prelude::*;

use super::statistics::TestStatistic;
use super::{PValueMethod, Statistic, Tail, TestReport};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::models::{GraphModel, GraphSampler, WeightedGraphSampler};
use crate::rng::replicate_stream;

/// Simulated statistic values with self-normalized weights (summing to 1).
#[derive(Debug, Clone, PartialEq)]
pub struct McSummary {
    pub scores: Vec<f64>,
    pub weights: Vec<f64>,
}

/// Converts log weights to self-normalized weights.
pub fn normalized_weights(log_weights: &[f64]) -> Result<Vec<f64>> {
    if log_weights.is_empty() {
        return Err(Error::EmptySample);
    }
    if log_weights
        .iter()
        .any(|w| w.is_nan() || *w == f64::INFINITY)
    {
        return Err(Error::DegenerateWeights(
            "NaN or infinite log weight".into(),
        ));
    }
    let max = log_weights
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return Err(Error::DegenerateWeights("all weights are zero".into()));
    }
    let raw: Vec<f64> = log_weights.iter().map(|&w| (w - max).exp()).collect();
    let total: f64 = raw.iter().sum();
    Ok(raw.into_iter().map(|w| w / total).collect())
}

// Runs `f` once per replicate on its own stream, starting at stream
// `first`. Results are in replicate order; the lowest-indexed failure is
// reported.
pub(crate) fn per_replicate<R, F>(replicates: usize, seed: u64, first: u64, f: F) -> Result<Vec<R>>
where
    R: Send,
    F: Fn(&mut crate::rng::Rng) -> Result<R> + Sync,
{
    if replicates == 0 {
        return Err(Error::NoReplicates);
    }
    let results: Vec<Result<R>> = (0..replicates)
        .into_par_iter()
        .map(|r| f(&mut replicate_stream(seed, first + r as u64)))
        .collect();
    results
        .into_iter()
        .enumerate()
        .map(|(replicate, res)| {
            res.map_err(|e| Error::Replicate {
                replicate,
                source: Box::new(e),
            })
        })
        .collect()
}

pub(crate) fn simulate<S, T>(
    null: &S,
    statistic: &T,
    replicates: usize,
    seed: u64,
) -> Result<Vec<f64>>
where
    S: GraphSampler + ?Sized,
    T: TestStatistic + ?Sized,
{
    per_replicate(replicates, seed, 0, |rng| {
        statistic.evaluate(&null.sample(rng)?)
    })
}

pub(crate) fn simulate_weighted_graphs<S>(
    sampler: &S,
    replicates: usize,
    seed: u64,
    first: u64,
) -> Result<(Vec<Graph>, Vec<f64>)>
where
    S: WeightedGraphSampler + ?Sized,
{
    let draws = per_replicate(replicates, seed, first, |rng| sampler.sample_weighted(rng))?;
    Ok(draws.into_iter().map(|d| (d.graph, d.log_weight)).unzip())
}

/// Simulates `statistic` under an importance-weighted sampler.
pub fn simulate_weighted<S, T>(
    sampler: &S,
    statistic: &T,
    replicates: usize,
    seed: u64,
) -> Result<McSummary>
where
    S: WeightedGraphSampler + ?Sized,
    T: TestStatistic + ?Sized,
{
    let pairs = per_replicate(replicates, seed, 0, |rng| {
        let draw = sampler.sample_weighted(rng)?;
        Ok((statistic.evaluate(&draw.graph)?, draw.log_weight))
    })?;
    let (scores, log_weights): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
    Ok(McSummary {
        weights: normalized_weights(&log_weights)?,
        scores,
    })
}

/// Monte Carlo p-value `(1 + #extreme) / (replicates + 1)`, with ties
/// counted as extreme. Deterministic in `seed`.
pub fn mc_pvalue<S, T>(
    observed: f64,
    tail: Tail,
    null: &S,
    statistic: &T,
    replicates: usize,
    seed: u64,
) -> Result<TestReport>
where
    S: GraphSampler + ?Sized,
    T: TestStatistic + ?Sized,
{
    let simulated = simulate(null, statistic, replicates, seed)?;
    let exceedances = simulated
        .iter()
        .filter(|&&s| tail.is_extreme(s, observed))
        .count();
    Ok(TestReport {
        statistic_name: statistic.name(),
        observed,
        log_scale: false,
        tail,
        p_value: (1 + exceedances) as f64 / (replicates + 1) as f64,
        replicates,
        exceedances,
        seed,
        method: PValueMethod::MonteCarlo,
    })
}

/// Self-normalized importance-sampling estimate of the probability that the
/// statistic is at least as extreme as `observed` under the sampler's
/// target, floored at `1 / (replicates + 1)`.
pub fn mc_pvalue_weighted<S, T>(
    observed: f64,
    tail: Tail,
    sampler: &S,
    statistic: &T,
    replicates: usize,
    seed: u64,
) -> Result<TestReport>
where
    S: WeightedGraphSampler + ?Sized,
    T: TestStatistic + ?Sized,
{
    let sim = simulate_weighted(sampler, statistic, replicates, seed)?;
    let mut exceedances = 0;
    let mut mass = 0.0;
    for (&s, &w) in sim.scores.iter().zip(&sim.weights) {
        if tail.is_extreme(s, observed) {
            exceedances += 1;
            mass += w;
        }
    }
    let floor = 1.0 / (replicates + 1) as f64;
    Ok(TestReport {
        statistic_name: statistic.name(),
        observed,
        log_scale: false,
        tail,
        p_value: mass.clamp(floor, 1.0),
        replicates,
        exceedances,
        seed,
        method: PValueMethod::ImportanceSampling,
    })
}

/// Tests `g` with one of the built-in statistics against `null`, choosing
/// the weighted estimator for fixed-degree nulls.
pub fn run_test(
    g: &Graph,
    statistic: &Statistic,
    null: &GraphModel,
    replicates: usize,
    seed: u64,
) -> Result<TestReport> {
    null.validate()?;
    if null.node_count() != g.n() {
        return Err(Error::LengthMismatch {
            expected: g.n(),
            found: null.node_count(),
        });
    }
    let observed = statistic.evaluate(g)?;
    let mut report = if null.is_fixed_degree() {
        mc_pvalue_weighted(
            observed,
            statistic.tail(),
            null,
            statistic,
            replicates,
            seed,
        )?
    } else {
        mc_pvalue(
            observed,
            statistic.tail(),
            null,
            statistic,
            replicates,
            seed,
        )?
    };
    report.log_scale = statistic.is_log_scale();
    Ok(report)
}
