//! Parameter estimation and recovery of a binary group split.
//!
//! With labels known the block-model MLEs are block sample proportions.
//! With labels latent, [`fit_exact`] scans every canonical labelling and
//! [`fit_spectral`] splits nodes on the signs of the Fiedler vector.

use log::debug;
use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Block, BlockCounts, Covariates, Graph};
use crate::models::{bernoulli_loglik, loglik_sbm_counts, ErParams, SbmParams};

/// Largest graph [`fit_exact`] accepts by default (2^19 canonical labellings).
pub const DEFAULT_EXHAUSTIVE_LIMIT: usize = 20;

/// Eigenvalues within `ZERO_TOL * n` of zero are treated as zero.
pub const ZERO_TOL: f64 = 1e-8;

const EIGEN_EPS: f64 = 1e-14;
const EIGEN_MAX_ITER: usize = 10_000;

// Logliks closer than this are ties, broken toward the smaller labelling.
const TIE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FitMethod {
    Exact,
    Spectral,
    Given,
}

/// A block-model fit: labels, block MLEs under those labels, and the
/// resulting log likelihood.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub covariates: Covariates,
    pub params: SbmParams,
    pub loglik: f64,
    pub method: FitMethod,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomposition {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Unit-norm eigenvector for `eigenvalues[1]`.
    pub fiedler_vector: Vec<f64>,
}

impl SpectralDecomposition {
    pub fn algebraic_connectivity(&self) -> f64 {
        self.eigenvalues[1]
    }
}

/// Sample proportion of linked pairs.
pub fn mle_er(g: &Graph) -> Result<ErParams> {
    if g.n() < 2 {
        return Err(Error::TooFewNodes { n: g.n(), min: 2 });
    }
    ErParams::new(g.edge_count() as f64 / g.pair_count() as f64)
}

/// Block sample proportions; empty blocks get parameter 0.
pub fn mle_sbm_given_c(g: &Graph, c: &Covariates) -> Result<SbmParams> {
    Ok(params_from_counts(&g.conformal_partition(c)?))
}

pub(crate) fn params_from_counts(counts: &BlockCounts) -> SbmParams {
    let prop = |b: Block| {
        let pairs = counts.pairs(b);
        if pairs == 0 {
            0.0
        } else {
            counts.links(b) as f64 / pairs as f64
        }
    };
    SbmParams {
        p00: prop(Block::ZeroZero),
        p01: prop(Block::ZeroOne),
        p11: prop(Block::OneOne),
    }
}

/// Profile log likelihood: the block-model likelihood at its MLEs for `c`.
pub fn fit_given(g: &Graph, c: &Covariates) -> Result<FitResult> {
    let counts = g.conformal_partition(c)?;
    let params = params_from_counts(&counts);
    Ok(FitResult {
        covariates: c.clone(),
        params,
        loglik: loglik_sbm_counts(&counts, &params),
        method: FitMethod::Given,
    })
}

fn profile_loglik(counts: &BlockCounts) -> f64 {
    (0..3)
        .map(|b| {
            let (links, pairs) = (counts.links[b], counts.pairs[b]);
            if pairs == 0 {
                0.0
            } else {
                bernoulli_loglik(links, pairs, links as f64 / pairs as f64)
            }
        })
        .sum()
}

pub fn fit_exact(g: &Graph) -> Result<FitResult> {
    fit_exact_with_limit(g, DEFAULT_EXHAUSTIVE_LIMIT)
}

/// Maximizes the profile likelihood over all labellings with node 0 in
/// group 0. Labellings are visited in Gray-code order so each step moves a
/// single node; among ties the lexicographically smallest labelling wins.
pub fn fit_exact_with_limit(g: &Graph, limit: usize) -> Result<FitResult> {
    let n = g.n();
    if n > limit || n > 63 {
        return Err(Error::ExhaustiveLimit { n, limit });
    }
    if n < 2 {
        return Err(Error::TooFewNodes { n, min: 2 });
    }
    let neighbors: Vec<Vec<usize>> = (0..n).map(|i| g.neighbors(i).collect()).collect();

    // Start from the all-zero labelling.
    let mut labels = vec![0usize; n];
    let mut sizes = [n, 0];
    let mut links = [g.edge_count(), 0, 0];
    let mut mask = 0u64;
    let mut best_mask = 0u64;
    let mut best = profile_loglik(&BlockCounts {
        links,
        pairs: BlockCounts::pairs_for(n, 0),
    });

    let steps = 1u64 << (n - 1);
    for k in 1..steps {
        // Gray code k ^ (k >> 1) differs from its predecessor in bit tz(k).
        let bit = k.trailing_zeros() as usize;
        let node = n - 1 - bit;
        let from = labels[node];
        let to = 1 - from;
        for &u in &neighbors[node] {
            let lu = labels[u];
            links[Block::of(from, lu) as usize] -= 1;
            links[Block::of(to, lu) as usize] += 1;
        }
        labels[node] = to;
        sizes[from] -= 1;
        sizes[to] += 1;
        mask ^= 1 << bit;

        let ll = profile_loglik(&BlockCounts {
            links,
            pairs: BlockCounts::pairs_for(sizes[0], sizes[1]),
        });
        if ll > best + TIE_TOL || (ll >= best - TIE_TOL && mask < best_mask) {
            best = best.max(ll);
            best_mask = mask;
        }
    }

    let c = Covariates::from_mask(best_mask, n);
    let mut fit = fit_given(g, &c)?;
    fit.method = FitMethod::Exact;
    Ok(fit)
}

/// Eigen-decomposition of the combinatorial Laplacian and its Fiedler
/// vector.
///
/// When the second eigenvalue is zero (a disconnected graph) the solver's
/// basis of the kernel is arbitrary; the Fiedler vector is then taken as
/// the first kernel vector's component orthogonal to the constant vector.
/// The sign is fixed so the first entry of non-negligible magnitude is
/// positive.
pub fn fiedler(g: &Graph) -> Result<SpectralDecomposition> {
    let n = g.n();
    if n < 2 {
        return Err(Error::TooFewNodes { n, min: 2 });
    }
    let lap = g.combinatorial_laplacian().matrix;
    let eig = SymmetricEigen::try_new(lap.clone(), EIGEN_EPS, EIGEN_MAX_ITER)
        .ok_or(Error::EigenFailure)?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let zero_tol = ZERO_TOL * n as f64;

    let mut v: DVector<f64> = if eigenvalues[1].abs() <= zero_tol {
        let kernel: Vec<usize> = order
            .iter()
            .copied()
            .filter(|&i| eig.eigenvalues[i].abs() <= zero_tol)
            .collect();
        if kernel.len() > 2 {
            debug!(
                "Laplacian kernel has dimension {}; Fiedler vector is not unique",
                kernel.len()
            );
        }
        orthogonal_kernel_vector(&eig.eigenvectors, &kernel)
    } else {
        let multiplicity = eigenvalues
            .iter()
            .filter(|&&x| (x - eigenvalues[1]).abs() <= zero_tol.max(1e-9 * eigenvalues[1]))
            .count();
        if multiplicity > 1 {
            debug!("second eigenvalue has multiplicity {multiplicity}; using the solver's first eigenvector");
        }
        eig.eigenvectors.column(order[1]).into_owned()
    };

    v /= v.norm();
    let scale = v.amax();
    if let Some(first) = v.iter().copied().find(|x| x.abs() > 1e-8 * scale) {
        if first < 0.0 {
            v.neg_mut();
        }
    }
    Ok(SpectralDecomposition {
        eigenvalues,
        fiedler_vector: v.iter().copied().collect(),
    })
}

fn orthogonal_kernel_vector(vectors: &DMatrix<f64>, kernel: &[usize]) -> DVector<f64> {
    let n = vectors.nrows();
    let ones = DVector::from_element(n, 1.0 / (n as f64).sqrt());
    let mut best: Option<DVector<f64>> = None;
    for &col in kernel {
        let x = vectors.column(col).into_owned();
        let proj = &x - &ones * ones.dot(&x);
        if proj.norm() > 1e-6 {
            return proj;
        }
        if best.as_ref().is_none_or(|b| proj.norm() > b.norm()) {
            best = Some(proj);
        }
    }
    best.expect("kernel has at least two vectors")
}

/// Splits nodes on the sign of the Fiedler vector (`>= 0` to group 0) and
/// fits block MLEs under that split.
pub fn fit_spectral(g: &Graph) -> Result<FitResult> {
    let dec = fiedler(g)?;
    let labels = dec
        .fiedler_vector
        .iter()
        .map(|&x| usize::from(x < 0.0))
        .collect();
    let c = Covariates::binary(labels)?;
    let mut fit = fit_given(g, &c)?;
    fit.method = FitMethod::Spectral;
    Ok(fit)
}
