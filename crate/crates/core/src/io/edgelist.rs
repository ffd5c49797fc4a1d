use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::{Covariates, Graph};

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

// Non-empty lines with comments stripped, paired with 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let body = raw.split('#').next().unwrap_or("");
        let fields: Vec<&str> = body.split_whitespace().collect();
        (!fields.is_empty()).then_some((i + 1, fields))
    })
}

fn parse_index(field: &str, line: usize) -> Result<usize> {
    match field.parse::<usize>() {
        Ok(0) => Err(parse_err(line, "node indices are 1-based")),
        Ok(v) => Ok(v),
        Err(_) => Err(parse_err(line, format!("'{field}' is not a node index"))),
    }
}

/// Parses an edge list of 1-based `i j` lines. An optional first line
/// `n <count>` fixes the node count (otherwise the largest index is used);
/// `#` starts a comment.
pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut n: Option<usize> = None;
    let mut pairs: Vec<(usize, usize, usize)> = Vec::new();
    for (line, fields) in content_lines(text) {
        if fields[0] == "n" {
            if n.is_some() || !pairs.is_empty() {
                return Err(parse_err(line, "the 'n' header must precede all edges"));
            }
            if fields.len() != 2 {
                return Err(parse_err(line, "expected 'n <count>'"));
            }
            let count = fields[1]
                .parse::<usize>()
                .map_err(|_| parse_err(line, format!("'{}' is not a node count", fields[1])))?;
            n = Some(count);
            continue;
        }
        if fields.len() != 2 {
            return Err(parse_err(
                line,
                format!("expected two node indices, found {} fields", fields.len()),
            ));
        }
        let i = parse_index(fields[0], line)?;
        let j = parse_index(fields[1], line)?;
        pairs.push((line, i, j));
    }
    let n = match n {
        Some(n) => n,
        None => pairs
            .iter()
            .map(|&(_, i, j)| i.max(j))
            .max()
            .ok_or_else(|| parse_err(0, "no 'n' header and no edges"))?,
    };
    let mut g = Graph::empty(n).map_err(|e| parse_err(1, e.to_string()))?;
    for (line, i, j) in pairs {
        g.try_add_edge(i - 1, j - 1).map_err(|e| {
            let message = match e {
                Error::NodeOutOfRange { index, n } => {
                    format!("node {} out of range for {n} nodes", index + 1)
                }
                Error::SelfLoop { node } => format!("self-loop at node {}", node + 1),
                Error::DuplicateEdge { i, j } => format!("duplicate edge {} {}", i + 1, j + 1),
                other => other.to_string(),
            };
            parse_err(line, message)
        })?;
    }
    Ok(g)
}

/// Canonical edge list: `n <count>` header then `i j` with `i < j`,
/// ascending, 1-based.
pub fn write_edge_list(g: &Graph) -> String {
    let mut out = format!("n {}\n", g.n());
    for (i, j) in g.edges() {
        let _ = writeln!(out, "{} {}", i + 1, j + 1);
    }
    out
}

/// Parses `index label` lines (1-based index, one per node). `k` defaults
/// to the larger of 2 and one past the largest label.
pub fn parse_covariates(text: &str, n: usize, k: Option<usize>) -> Result<Covariates> {
    let mut labels: Vec<Option<usize>> = vec![None; n];
    let mut seen = 0;
    for (line, fields) in content_lines(text) {
        if fields.len() != 2 {
            return Err(parse_err(
                line,
                format!("expected 'index label', found {} fields", fields.len()),
            ));
        }
        let index = parse_index(fields[0], line)?;
        if index > n {
            return Err(parse_err(
                line,
                format!("node {index} out of range for {n} nodes"),
            ));
        }
        let label = fields[1]
            .parse::<usize>()
            .map_err(|_| parse_err(line, format!("'{}' is not a label", fields[1])))?;
        if let Some(k) = k {
            if label >= k {
                return Err(parse_err(line, format!("label {label} not in 0..{k}")));
            }
        }
        if labels[index - 1].replace(label).is_some() {
            return Err(parse_err(line, format!("node {index} labelled twice")));
        }
        seen += 1;
    }
    if seen != n {
        let missing = labels.iter().position(Option::is_none).map_or(0, |i| i + 1);
        return Err(Error::Invalid(format!(
            "covariates cover {seen} of {n} nodes; node {missing} is missing"
        )));
    }
    let labels: Vec<usize> = labels.into_iter().flatten().collect();
    let k = k.unwrap_or_else(|| labels.iter().max().map_or(2, |&m| (m + 1).max(2)));
    Covariates::new(labels, k)
}

pub fn write_covariates(c: &Covariates) -> String {
    let mut out = String::new();
    for (i, l) in c.labels().iter().enumerate() {
        let _ = writeln!(out, "{} {}", i + 1, l);
    }
    out
}
