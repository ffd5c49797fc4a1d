use rand::Rng as _;

use super::{ErParams, SbmParams};
use crate::error::{Error, Result};
use crate::graph::{BlockCounts, Covariates, Graph};
use crate::rng::{self, Rng};

/// Log likelihood of `links` successes in `pairs` Bernoulli(`p`) trials,
/// with `0 * ln 0 = 0`. Impossible configurations give `-inf`.
pub fn bernoulli_loglik(links: usize, pairs: usize, p: f64) -> f64 {
    let non_links = pairs - links;
    let mut ll = 0.0;
    if links > 0 {
        ll += links as f64 * p.ln();
    }
    if non_links > 0 {
        ll += non_links as f64 * (-p).ln_1p();
    }
    ll
}

pub fn loglik_er(g: &Graph, params: &ErParams) -> f64 {
    bernoulli_loglik(g.edge_count(), g.pair_count(), params.p())
}

pub fn loglik_sbm(g: &Graph, c: &Covariates, params: &SbmParams) -> Result<f64> {
    Ok(loglik_sbm_counts(&g.conformal_partition(c)?, params))
}

/// Block-model log likelihood from block counts alone.
pub fn loglik_sbm_counts(counts: &BlockCounts, params: &SbmParams) -> f64 {
    let p = params.as_array();
    (0..3)
        .map(|b| bernoulli_loglik(counts.links[b], counts.pairs[b], p[b]))
        .sum()
}

pub fn sample_er(n: usize, params: &ErParams, seed: u64) -> Result<Graph> {
    sample_er_with(n, params, &mut rng::from_seed(seed))
}

pub fn sample_er_with(n: usize, params: &ErParams, rng: &mut Rng) -> Result<Graph> {
    if n < 2 {
        return Err(Error::TooFewNodes { n, min: 2 });
    }
    let mut g = Graph::empty(n)?;
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.random_bool(params.p()) {
                g.set(i, j);
            }
        }
    }
    Ok(g)
}

pub fn sample_sbm(c: &Covariates, params: &SbmParams, seed: u64) -> Result<Graph> {
    sample_sbm_with(c, params, &mut rng::from_seed(seed))
}

pub fn sample_sbm_with(c: &Covariates, params: &SbmParams, rng: &mut Rng) -> Result<Graph> {
    c.check_binary()?;
    let n = c.len();
    let mut g = Graph::empty(n)?;
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.random_bool(params.get(c.label(i), c.label(j))) {
                g.set(i, j);
            }
        }
    }
    Ok(g)
}
