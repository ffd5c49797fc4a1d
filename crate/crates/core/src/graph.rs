//! Simple undirected graphs, node covariates and the structural quantities
//! the models are built from: degrees, block counts and the combinatorial
//! Laplacian.
//!
//! Node indices are 0-based throughout the library. Text formats in
//! [`crate::io`] are 1-based.

use std::collections::VecDeque;
use std::fmt;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A simple undirected graph stored as a dense symmetric adjacency matrix
/// with a zero diagonal.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    adj: Vec<bool>,
    edges: usize,
}

impl Graph {
    /// The graph on `n` nodes with no links.
    pub fn empty(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::TooFewNodes { n, min: 1 });
        }
        Ok(Self {
            n,
            adj: vec![false; n * n],
            edges: 0,
        })
    }

    pub fn complete(n: usize) -> Result<Self> {
        let mut g = Self::empty(n)?;
        for i in 0..n {
            for j in (i + 1)..n {
                g.set(i, j);
            }
        }
        Ok(g)
    }

    /// Builds a graph from a 0/1 adjacency matrix. Rejects asymmetric
    /// matrices, nonzero diagonals and entries other than 0 or 1.
    pub fn from_matrix<R: AsRef<[u8]>>(rows: &[R]) -> Result<Self> {
        let n = rows.len();
        let mut g = Self::empty(n)?;
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != n {
                return Err(Error::NotSquare {
                    row: i,
                    found: row.len(),
                    expected: n,
                });
            }
            for (j, &value) in row.iter().enumerate() {
                if value > 1 {
                    return Err(Error::NonBinaryEntry { i, j, value });
                }
            }
        }
        for i in 0..n {
            if rows[i].as_ref()[i] != 0 {
                return Err(Error::SelfLoop { node: i });
            }
            for j in (i + 1)..n {
                let a = rows[i].as_ref()[j];
                if a != rows[j].as_ref()[i] {
                    return Err(Error::NotSymmetric { i, j });
                }
                if a == 1 {
                    g.set(i, j);
                }
            }
        }
        Ok(g)
    }

    /// Builds a graph from 0-based node pairs. Each unordered pair may appear
    /// once.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::empty(n)?;
        for &(i, j) in edges {
            g.try_add_edge(i, j)?;
        }
        Ok(g)
    }

    pub(crate) fn try_add_edge(&mut self, i: usize, j: usize) -> Result<()> {
        for index in [i, j] {
            if index >= self.n {
                return Err(Error::NodeOutOfRange { index, n: self.n });
            }
        }
        if i == j {
            return Err(Error::SelfLoop { node: i });
        }
        if self.has_edge(i, j) {
            return Err(Error::DuplicateEdge {
                i: i.min(j),
                j: i.max(j),
            });
        }
        self.set(i, j);
        Ok(())
    }

    // Callers guarantee i != j, both in range, and the pair currently unlinked.
    pub(crate) fn set(&mut self, i: usize, j: usize) {
        debug_assert!(i != j && !self.adj[i * self.n + j]);
        self.adj[i * self.n + j] = true;
        self.adj[j * self.n + i] = true;
        self.edges += 1;
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adj[i * self.n + j]
    }

    pub fn edge_count(&self) -> usize {
        self.edges
    }

    /// Number of unordered node pairs, `C(n, 2)`.
    pub fn pair_count(&self) -> usize {
        self.n * (self.n - 1) / 2
    }

    /// Edges as `(i, j)` with `i < j`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |i| {
            ((i + 1)..self.n)
                .filter(move |&j| self.has_edge(i, j))
                .map(move |j| (i, j))
        })
    }

    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        let row = &self.adj[i * self.n..(i + 1) * self.n];
        row.iter()
            .enumerate()
            .filter_map(|(j, &linked)| linked.then_some(j))
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adj[i * self.n..(i + 1) * self.n]
            .iter()
            .filter(|&&a| a)
            .count()
    }

    pub fn degree_sequence(&self) -> DegreeSequence {
        DegreeSequence((0..self.n).map(|i| self.degree(i)).collect())
    }

    /// Dense 0/1 rows, mainly for display and interchange.
    pub fn to_matrix(&self) -> Vec<Vec<u8>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| u8::from(self.has_edge(i, j))).collect())
            .collect()
    }

    /// Returns the permutation-similar graph `Π A Π'`: node `i` of `self`
    /// becomes node `perm.image(i)` of the result.
    pub fn permute(&self, perm: &Permutation) -> Result<Graph> {
        if perm.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                found: perm.len(),
            });
        }
        let mut out = Graph::empty(self.n)?;
        for (i, j) in self.edges() {
            out.set(perm.image(i), perm.image(j));
        }
        Ok(out)
    }

    /// Link and pair counts within and across the two covariate groups.
    pub fn conformal_partition(&self, c: &Covariates) -> Result<BlockCounts> {
        c.check_binary()?;
        c.check_len(self.n)?;
        let mut links = [0usize; 3];
        for (i, j) in self.edges() {
            links[Block::of(c.label(i), c.label(j)) as usize] += 1;
        }
        let [n0, n1] = c.binary_group_sizes();
        Ok(BlockCounts {
            links,
            pairs: BlockCounts::pairs_for(n0, n1),
        })
    }

    /// `L = D - A`.
    pub fn combinatorial_laplacian(&self) -> Laplacian {
        let n = self.n;
        let mut m = DMatrix::<f64>::zeros(n, n);
        for i in 0..n {
            let mut deg = 0usize;
            for j in self.neighbors(i) {
                m[(i, j)] = -1.0;
                deg += 1;
            }
            m[(i, i)] = deg as f64;
        }
        Laplacian { matrix: m }
    }

    /// Number of connected components, by breadth-first traversal.
    pub fn connected_components(&self) -> usize {
        self.component_labels().1
    }

    /// Component index per node (in order of first appearance) and the
    /// number of components.
    pub fn component_labels(&self) -> (Vec<usize>, usize) {
        let mut label = vec![usize::MAX; self.n];
        let mut count = 0;
        let mut queue = VecDeque::new();
        for start in 0..self.n {
            if label[start] != usize::MAX {
                continue;
            }
            label[start] = count;
            queue.push_back(start);
            while let Some(u) = queue.pop_front() {
                for v in self.neighbors(u) {
                    if label[v] == usize::MAX {
                        label[v] = count;
                        queue.push_back(v);
                    }
                }
            }
            count += 1;
        }
        (label, count)
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Graph(n = {}, edges = {})", self.n, self.edges)?;
        for i in 0..self.n {
            let row: String = (0..self.n)
                .map(|j| if self.has_edge(i, j) { '1' } else { '0' })
                .collect();
            writeln!(f, "  {row}")?;
        }
        Ok(())
    }
}

/// Categorical node labels in `0..k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Covariates {
    labels: Vec<usize>,
    k: usize,
}

impl Covariates {
    pub fn new(labels: Vec<usize>, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::Invalid("category count must be at least 1".into()));
        }
        for (node, &label) in labels.iter().enumerate() {
            if label >= k {
                return Err(Error::LabelOutOfRange { node, label, k });
            }
        }
        Ok(Self { labels, k })
    }

    /// Binary labels (`k = 2`).
    pub fn binary(labels: Vec<usize>) -> Result<Self> {
        Self::new(labels, 2)
    }

    /// Binary labels from the low bits of a mask: node `i` takes bit `n-1-i`,
    /// so numeric order of masks equals lexicographic order of label vectors.
    pub fn from_mask(mask: u64, n: usize) -> Self {
        let labels = (0..n)
            .map(|i| ((mask >> (n - 1 - i)) & 1) as usize)
            .collect();
        Self { labels, k: 2 }
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    #[inline]
    pub fn label(&self, i: usize) -> usize {
        self.labels[i]
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn is_binary(&self) -> bool {
        self.k <= 2
    }

    /// Swaps labels 0 and 1.
    pub fn flipped(&self) -> Result<Self> {
        self.check_binary()?;
        Ok(Self {
            labels: self.labels.iter().map(|&l| 1 - l).collect(),
            k: 2,
        })
    }

    /// Relabels so node 0 carries label 0.
    pub fn canonical(&self) -> Result<Self> {
        self.check_binary()?;
        if self.labels.first() == Some(&1) {
            self.flipped()
        } else {
            Ok(Self {
                labels: self.labels.clone(),
                k: 2,
            })
        }
    }

    /// True when `self` and `other` induce the same two-way split.
    pub fn same_partition(&self, other: &Covariates) -> bool {
        if self.len() != other.len() {
            return false;
        }
        let same = self.labels.iter().zip(&other.labels).all(|(a, b)| a == b);
        let swapped = self.labels.iter().zip(&other.labels).all(|(a, b)| a != b);
        same || swapped
    }

    pub fn group_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.k];
        for &l in &self.labels {
            sizes[l] += 1;
        }
        sizes
    }

    pub(crate) fn binary_group_sizes(&self) -> [usize; 2] {
        let ones = self.labels.iter().filter(|&&l| l == 1).count();
        [self.labels.len() - ones, ones]
    }

    pub(crate) fn check_binary(&self) -> Result<()> {
        if self.is_binary() {
            Ok(())
        } else {
            Err(Error::NonBinaryCovariates { k: self.k })
        }
    }

    pub(crate) fn check_len(&self, n: usize) -> Result<()> {
        if self.labels.len() == n {
            Ok(())
        } else {
            Err(Error::LengthMismatch {
                expected: n,
                found: self.labels.len(),
            })
        }
    }
}

/// Per-node degrees.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DegreeSequence(pub Vec<usize>);

impl DegreeSequence {
    pub fn new(degrees: Vec<usize>) -> Self {
        Self(degrees)
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sum(&self) -> usize {
        self.0.iter().sum()
    }
}

/// The three blocks of a two-group conformal partition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Block {
    ZeroZero = 0,
    ZeroOne = 1,
    OneOne = 2,
}

impl Block {
    pub const ALL: [Block; 3] = [Block::ZeroZero, Block::ZeroOne, Block::OneOne];

    #[inline]
    pub fn of(a: usize, b: usize) -> Block {
        match a + b {
            0 => Block::ZeroZero,
            1 => Block::ZeroOne,
            _ => Block::OneOne,
        }
    }
}

/// Observed links and node-pair totals for each block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BlockCounts {
    pub links: [usize; 3],
    pub pairs: [usize; 3],
}

impl BlockCounts {
    pub fn pairs_for(n0: usize, n1: usize) -> [usize; 3] {
        [
            n0 * n0.saturating_sub(1) / 2,
            n0 * n1,
            n1 * n1.saturating_sub(1) / 2,
        ]
    }

    pub fn links(&self, b: Block) -> usize {
        self.links[b as usize]
    }

    pub fn pairs(&self, b: Block) -> usize {
        self.pairs[b as usize]
    }

    pub fn non_links(&self, b: Block) -> usize {
        self.pairs(b) - self.links(b)
    }

    pub fn total_links(&self) -> usize {
        self.links.iter().sum()
    }

    pub fn total_pairs(&self) -> usize {
        self.pairs.iter().sum()
    }
}

/// A graph Laplacian. Only the combinatorial completion `D - A` is built.
#[derive(Debug, Clone, PartialEq)]
pub struct Laplacian {
    pub matrix: DMatrix<f64>,
}

impl Laplacian {
    pub fn n(&self) -> usize {
        self.matrix.nrows()
    }
}

/// A bijection on node indices; `image(i)` is the new position of node `i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &p in &images {
            if p >= n {
                return Err(Error::InvalidPermutation(format!(
                    "index {p} out of range for length {n}"
                )));
            }
            if std::mem::replace(&mut seen[p], true) {
                return Err(Error::InvalidPermutation(format!("index {p} repeated")));
            }
        }
        Ok(Self(images))
    }

    pub fn identity(n: usize) -> Self {
        Self((0..n).collect())
    }

    /// The stable sort that places all nodes labelled 0 first, then label 1,
    /// and so on, each group in original order.
    pub fn sorting(c: &Covariates) -> Self {
        let mut order: Vec<usize> = (0..c.len()).collect();
        order.sort_by_key(|&i| c.label(i));
        let mut images = vec![0; c.len()];
        for (pos, &node) in order.iter().enumerate() {
            images[node] = pos;
        }
        Self(images)
    }

    #[inline]
    pub fn image(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.0.len()];
        for (i, &p) in self.0.iter().enumerate() {
            inv[p] = i;
        }
        Self(inv)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Self {
        Self(other.0.iter().map(|&p| self.0[p]).collect())
    }

    /// Covariates carried along with the nodes.
    pub fn apply_covariates(&self, c: &Covariates) -> Result<Covariates> {
        c.check_len(self.len())?;
        let mut labels = vec![0; c.len()];
        for i in 0..c.len() {
            labels[self.image(i)] = c.label(i);
        }
        Covariates::new(labels, c.k())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::builtin;

    fn triangle() -> Graph {
        Graph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap()
    }

    fn two_triangles() -> Graph {
        Graph::from_edges(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap()
    }

    #[test]
    fn rejects_invalid_matrices() {
        assert_eq!(
            Graph::from_matrix(&[[0u8, 1], [0, 0]]),
            Err(Error::NotSymmetric { i: 0, j: 1 })
        );
        assert_eq!(
            Graph::from_matrix(&[[1u8, 0], [0, 0]]),
            Err(Error::SelfLoop { node: 0 })
        );
        assert!(matches!(
            Graph::from_matrix(&[[0u8, 2], [2, 0]]),
            Err(Error::NonBinaryEntry { .. })
        ));
        assert!(matches!(
            Graph::from_matrix(&[vec![0u8, 1], vec![1]]),
            Err(Error::NotSquare { .. })
        ));
        assert!(Graph::from_edges(3, &[(0, 1), (1, 0)]).is_err());
        assert!(Graph::from_edges(3, &[(0, 3)]).is_err());
        assert!(Graph::empty(0).is_err());
    }

    #[test]
    fn example1_degrees() {
        let d = builtin("example1").unwrap().graph.degree_sequence();
        // 1-based node 1 has degree 2, node 3 has degree 4.
        assert_eq!(d.0[0], 2);
        assert_eq!(d.0[2], 4);
        assert_eq!(d.sum(), 28);
    }

    #[test]
    fn edgeless_degrees() {
        let g = Graph::empty(5).unwrap();
        assert_eq!(g.degree_sequence().0, vec![0; 5]);
    }

    #[test]
    fn example1_sorted_matches_printed_matrix() {
        let ds = builtin("example1").unwrap();
        let c = ds.covariates.unwrap();
        let perm = Permutation::sorting(&c);
        let permuted = ds.graph.permute(&perm).unwrap();
        let expected: [[u8; 10]; 10] = [
            [0, 0, 0, 1, 0, 0, 0, 1, 0, 0],
            [0, 0, 1, 0, 1, 1, 1, 0, 0, 0],
            [0, 1, 0, 1, 0, 0, 0, 0, 1, 1],
            [1, 0, 1, 0, 1, 0, 0, 0, 0, 0],
            [0, 1, 0, 1, 0, 0, 0, 1, 0, 1],
            [0, 1, 0, 0, 0, 0, 1, 0, 0, 0],
            [0, 1, 0, 0, 0, 1, 0, 0, 0, 0],
            [1, 0, 0, 0, 1, 0, 0, 0, 0, 0],
            [0, 0, 1, 0, 0, 0, 0, 0, 0, 1],
            [0, 0, 1, 0, 1, 0, 0, 0, 1, 0],
        ];
        assert_eq!(permuted, Graph::from_matrix(&expected).unwrap());
        let sorted_c = perm.apply_covariates(&c).unwrap();
        assert_eq!(sorted_c.labels(), &[0, 0, 0, 0, 0, 1, 1, 1, 1, 1]);
    }

    #[test]
    fn permutation_identity_and_inverse() {
        let g = builtin("example1").unwrap().graph;
        assert_eq!(g.permute(&Permutation::identity(10)).unwrap(), g);
        let p = Permutation::new(vec![3, 1, 4, 0, 9, 2, 6, 5, 8, 7]).unwrap();
        let back = g.permute(&p).unwrap().permute(&p.inverse()).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn invalid_permutations() {
        assert!(Permutation::new(vec![0, 0, 1]).is_err());
        assert!(Permutation::new(vec![0, 3, 1]).is_err());
        let g = triangle();
        assert!(g.permute(&Permutation::identity(4)).is_err());
    }

    #[test]
    fn example1_conformal_partition() {
        let ds = builtin("example1").unwrap();
        let counts = ds
            .graph
            .conformal_partition(ds.covariates.as_ref().unwrap())
            .unwrap();
        assert_eq!(counts.links, [5, 7, 2]);
        assert_eq!(counts.pairs, [10, 25, 10]);
    }

    #[test]
    fn edgeless_conformal_partition() {
        let g = Graph::empty(4).unwrap();
        let c = Covariates::binary(vec![0, 1, 1, 0]).unwrap();
        let counts = g.conformal_partition(&c).unwrap();
        assert_eq!(counts.links, [0, 0, 0]);
        assert_eq!(counts.total_pairs(), 6);
    }

    #[test]
    fn conformal_partition_requires_binary() {
        let g = triangle();
        let c = Covariates::new(vec![0, 1, 2], 3).unwrap();
        assert_eq!(
            g.conformal_partition(&c),
            Err(Error::NonBinaryCovariates { k: 3 })
        );
        let short = Covariates::binary(vec![0, 1]).unwrap();
        assert!(g.conformal_partition(&short).is_err());
    }

    #[test]
    fn triangle_laplacian() {
        let l = triangle().combinatorial_laplacian();
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { 2.0 } else { -1.0 };
                assert_eq!(l.matrix[(i, j)], want);
            }
        }
        let mut ev: Vec<f64> = l.matrix.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        approx::assert_abs_diff_eq!(ev[0], 0.0, epsilon = 1e-12);
        approx::assert_abs_diff_eq!(ev[1], 3.0, epsilon = 1e-12);
        approx::assert_abs_diff_eq!(ev[2], 3.0, epsilon = 1e-12);
    }

    #[test]
    fn edgeless_laplacian_is_zero() {
        let l = Graph::empty(4).unwrap().combinatorial_laplacian();
        assert!(l.matrix.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn example1_laplacian_rows_sum_to_zero() {
        let l = builtin("example1").unwrap().graph.combinatorial_laplacian();
        for row in l.matrix.row_iter() {
            assert_eq!(row.sum(), 0.0);
        }
        let min = l.matrix.symmetric_eigenvalues().min();
        approx::assert_abs_diff_eq!(min, 0.0, epsilon = 1e-10);
    }

    #[test]
    fn component_counts() {
        assert_eq!(two_triangles().connected_components(), 2);
        assert_eq!(Graph::empty(4).unwrap().connected_components(), 4);
        assert_eq!(builtin("zachary").unwrap().graph.connected_components(), 1);
    }

    #[test]
    fn covariate_helpers() {
        let c = Covariates::from_mask(0b0101, 4);
        assert_eq!(c.labels(), &[0, 1, 0, 1]);
        assert_eq!(c.flipped().unwrap().labels(), &[1, 0, 1, 0]);
        assert!(c.same_partition(&c.flipped().unwrap()));
        assert_eq!(c.flipped().unwrap().canonical().unwrap(), c);
        assert!(Covariates::binary(vec![0, 2]).is_err());
    }
}
