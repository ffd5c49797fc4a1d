//! Hypothesis tests for group structure in network data.
//!
//! The crate models a network as a simple undirected [`Graph`] with
//! optional binary node labels ([`Covariates`]). It provides:
//!
//! - Erdős–Rényi, two-group stochastic block and fixed-degree random graph
//!   models ([`models`]);
//! - maximum-likelihood fitting with known labels, by exhaustive search
//!   over labellings, or by spectral bisection ([`inference`]);
//! - contingency-table, degree-variance and likelihood-ratio tests with
//!   Monte Carlo or importance-sampled p-values, and ROC power curves
//!   ([`hypothesis`]);
//! - text formats and the built-in reference datasets ([`io`]).
//!
//! ```
//! use netstruct::{builtin, fit_spectral, mle_er};
//!
//! let karate = builtin("zachary").unwrap();
//! assert_eq!(mle_er(&karate.graph).unwrap().p(), 78.0 / 561.0);
//! let fit = fit_spectral(&karate.graph).unwrap();
//! assert_eq!(fit.covariates.len(), 34);
//! ```

pub mod error;
pub mod graph;
pub mod hypothesis;
pub mod inference;
pub mod io;
pub mod models;
pub mod rng;

pub use error::{Error, Result};
pub use graph::{Block, BlockCounts, Covariates, DegreeSequence, Graph, Laplacian, Permutation};
pub use hypothesis::{
    chi2_pvalue, chi2_test, mc_pvalue, mc_pvalue_weighted, roc_curve, roc_upper_bound, run_roc,
    run_test, stat_chi2, stat_degree_variance, stat_lr_exact, stat_lr_fd_spectral,
    stat_lr_spectral, PValueMethod, RocCurve, RocExperiment, Statistic, Tail, TestReport,
    TestStatistic, WeightedScore,
};
pub use inference::{
    fiedler, fit_exact, fit_given, fit_spectral, mle_er, mle_sbm_given_c, FitMethod, FitResult,
    SpectralDecomposition,
};
pub use io::{builtin, load_covariates, load_edge_list, write_results, Dataset, Format};
pub use models::{
    is_graphical, loglik_er, loglik_sbm, sample_er, sample_fixed_degree, sample_sbm, ErParams,
    GraphModel, SbmParams,
};
