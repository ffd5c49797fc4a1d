//! Edge-list and covariate text formats, result serialization, and the
//! built-in reference datasets.
//!
//! Edge lists hold one `i j` pair per line with 1-based node indices, an
//! optional leading `n <count>` line and `#` comments:
//!
//! ```text
//! # a path on four nodes
//! n 4
//! 1 2
//! 2 3
//! 3 4
//! ```
//!
//! Covariate files hold one `index label` line per node.

mod edgelist;
mod report;

use std::fs;
use std::path::Path;

pub use edgelist::{parse_covariates, parse_edge_list, write_covariates, write_edge_list};
pub use report::{parse_roc_csv, write_results, Format, Record};

use crate::error::{Error, Result};
use crate::graph::{Covariates, Graph};

/// A graph with optional node labels.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub name: String,
    pub graph: Graph,
    pub covariates: Option<Covariates>,
}

impl Dataset {
    pub fn new(
        name: impl Into<String>,
        graph: Graph,
        covariates: Option<Covariates>,
    ) -> Result<Self> {
        if let Some(c) = &covariates {
            c.check_len(graph.n())?;
        }
        Ok(Self {
            name: name.into(),
            graph,
            covariates,
        })
    }
}

/// Parses an edge list into an unlabelled dataset.
pub fn load_edge_list(text: &str) -> Result<Dataset> {
    Dataset::new("edges", parse_edge_list(text)?, None)
}

/// Parses covariates for `n` nodes; see [`parse_covariates`].
pub fn load_covariates(text: &str, n: usize, k: Option<usize>) -> Result<Covariates> {
    parse_covariates(text, n, k)
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))
}

/// Reads an edge-list file and, optionally, a covariate file. The dataset
/// is named after the edge file's stem.
pub fn read_dataset(edges: &Path, covariates: Option<&Path>) -> Result<Dataset> {
    let with_path = |e: Error| Error::Invalid(format!("{}: {e}", edges.display()));
    let graph = parse_edge_list(&read(edges)?).map_err(with_path)?;
    let covariates = covariates
        .map(|p| {
            parse_covariates(&read(p)?, graph.n(), None)
                .map_err(|e| Error::Invalid(format!("{}: {e}", p.display())))
        })
        .transpose()?;
    let name = edges
        .file_stem()
        .map_or_else(|| "edges".to_string(), |s| s.to_string_lossy().into_owned());
    Dataset::new(name, graph, covariates)
}

const ZACHARY_EDGES: &str = include_str!("../../data/zachary.edges");
const ZACHARY_LABELS: &str = include_str!("../../data/zachary.labels");

const EXAMPLE1: [[u8; 10]; 10] = [
    [0, 0, 1, 0, 1, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 1, 1, 0, 0, 0],
    [1, 0, 0, 1, 1, 0, 0, 0, 0, 1],
    [0, 0, 1, 0, 0, 1, 0, 1, 1, 0],
    [1, 0, 1, 0, 0, 0, 0, 0, 0, 0],
    [0, 1, 0, 1, 0, 0, 0, 0, 0, 1],
    [0, 1, 0, 0, 0, 0, 0, 0, 0, 1],
    [0, 0, 0, 1, 0, 0, 0, 0, 1, 0],
    [0, 0, 0, 1, 0, 0, 0, 1, 0, 1],
    [0, 0, 1, 0, 0, 1, 1, 0, 1, 0],
];
const EXAMPLE1_LABELS: [usize; 10] = [1, 0, 0, 0, 1, 0, 1, 1, 1, 0];

pub const BUILTIN_NAMES: [&str; 2] = ["zachary", "example1"];

/// Built-in datasets:
///
/// - `zachary`: the 34-member karate club friendship network (78 ties)
///   labelled by the faction each member joined after the club split
///   (groups of 16 and 18).
/// - `example1`: a 10-node toy network with binary labels.
pub fn builtin(name: &str) -> Result<Dataset> {
    match name {
        "zachary" => {
            let graph = parse_edge_list(ZACHARY_EDGES)?;
            let c = parse_covariates(ZACHARY_LABELS, graph.n(), Some(2))?;
            Dataset::new("zachary", graph, Some(c))
        }
        "example1" => Dataset::new(
            "example1",
            Graph::from_matrix(&EXAMPLE1)?,
            Some(Covariates::binary(EXAMPLE1_LABELS.to_vec())?),
        ),
        other => Err(Error::UnknownDataset(other.to_string())),
    }
}
