//! Correlation graphs, predecessor sets and disjoint node groups.
//!
//! A pair of nodes is strongly correlated when its pairwise metric is at
//! least the threshold `tau`; weak pairs and the diagonal hold 0 in the
//! adjacency matrix. Nonzero entries are the edges.

use std::fmt;
use std::str::FromStr;

use crate::entropy::{joint_entropy, mutual_information};
use crate::error::{Error, Result};
use crate::source::JointSource;

/// Pairwise similarity used to fill the adjacency matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Metric {
    /// `I(X_i; X_j)` in bits.
    #[default]
    MutualInformation,
    /// `I(X_i; X_j) / min(H(X_i), H(X_j))`, with 0/0 taken as 0.
    NormalizedMi,
}

impl Metric {
    pub fn id(self) -> &'static str {
        match self {
            Metric::MutualInformation => "mutual_information",
            Metric::NormalizedMi => "normalized_mi",
        }
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mutual_information" => Ok(Metric::MutualInformation),
            "normalized_mi" => Ok(Metric::NormalizedMi),
            other => Err(Error::UnknownMetric(other.to_string())),
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

/// Evaluates `metric` on nodes `i` and `j` (0-based). Symmetric in `(i, j)`.
pub fn pairwise_metric(source: &JointSource, i: usize, j: usize, metric: Metric) -> Result<f64> {
    if i == j {
        return Err(Error::SameNode(i));
    }
    // Fixed argument order keeps the value bit-identical for (i, j) and (j, i).
    let (a, b) = (i.min(j), i.max(j));
    let mi = mutual_information(source, a, b)?;
    match metric {
        Metric::MutualInformation => Ok(mi),
        Metric::NormalizedMi => {
            let ha = joint_entropy(source, &[a])?.bits();
            let hb = joint_entropy(source, &[b])?.bits();
            let denom = ha.min(hb);
            if denom <= 0.0 {
                Ok(0.0)
            } else {
                Ok((mi / denom).min(1.0))
            }
        }
    }
}

/// Symmetric, zero-diagonal adjacency matrix of strong correlations.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationGraph {
    matrix: Vec<Vec<f64>>,
    tau: f64,
    metric_id: String,
}

impl CorrelationGraph {
    /// Validates an explicit matrix: square, symmetric, zero diagonal,
    /// non-negative, and every nonzero entry at least `tau`.
    pub fn from_matrix(matrix: Vec<Vec<f64>>, tau: f64, metric_id: impl Into<String>) -> Result<Self> {
        check_tau(tau)?;
        let n = matrix.len();
        let bad = |m: String| Err(Error::InvalidGraph(m));
        for (i, row) in matrix.iter().enumerate() {
            if row.len() != n {
                return bad(format!("row {} has {} entries, expected {n}", i + 1, row.len()));
            }
            if row[i] != 0.0 {
                return bad(format!("diagonal entry {} is nonzero", i + 1));
            }
            for (j, &c) in row.iter().enumerate() {
                if !(c.is_finite() && c >= 0.0) {
                    return bad(format!("entry ({}, {}) is {c}", i + 1, j + 1));
                }
                if c != matrix[j][i] {
                    return bad(format!("entry ({}, {}) breaks symmetry", i + 1, j + 1));
                }
                if c != 0.0 && c < tau {
                    return bad(format!("entry ({}, {}) = {c} is below tau", i + 1, j + 1));
                }
            }
        }
        Ok(CorrelationGraph {
            matrix,
            tau,
            metric_id: metric_id.into(),
        })
    }

    /// Unit-weight graph over `n` nodes with the given 0-based edges.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut matrix = vec![vec![0.0; n]; n];
        for &(i, j) in edges {
            if i >= n || j >= n {
                return Err(Error::IndexOutOfRange { index: i.max(j), n });
            }
            if i == j {
                return Err(Error::InvalidGraph(format!("self-loop at node {}", i + 1)));
            }
            matrix[i][j] = 1.0;
            matrix[j][i] = 1.0;
        }
        CorrelationGraph::from_matrix(matrix, 0.0, "explicit")
    }

    pub fn complete(n: usize) -> Self {
        let edges: Vec<_> = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .collect();
        CorrelationGraph::from_edges(n, &edges).expect("complete graph is valid")
    }

    pub fn empty(n: usize) -> Self {
        CorrelationGraph::from_edges(n, &[]).expect("empty graph is valid")
    }

    pub fn n(&self) -> usize {
        self.matrix.len()
    }

    pub fn matrix(&self) -> &[Vec<f64>] {
        &self.matrix
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn metric_id(&self) -> &str {
        &self.metric_id
    }

    pub fn is_edge(&self, i: usize, j: usize) -> bool {
        self.matrix[i][j] != 0.0
    }

    pub fn edge_count(&self) -> usize {
        (0..self.n())
            .map(|i| (0..i).filter(|&j| self.is_edge(i, j)).count())
            .sum()
    }
}

fn check_tau(tau: f64) -> Result<()> {
    // +inf is allowed: it keeps every pair weak.
    if tau.is_nan() || tau < 0.0 {
        return Err(Error::InvalidThreshold(tau));
    }
    Ok(())
}

/// Keeps `metric(i, j)` where it reaches `tau`, zero elsewhere.
#[allow(clippy::needless_range_loop)]
pub fn build_graph(source: &JointSource, tau: f64, metric: Metric) -> Result<CorrelationGraph> {
    check_tau(tau)?;
    let n = source.n_vars();
    let mut matrix = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let c = pairwise_metric(source, i, j, metric)?;
            if c >= tau {
                matrix[i][j] = c;
                matrix[j][i] = c;
            }
        }
    }
    CorrelationGraph::from_matrix(matrix, tau, metric.id())
}

/// For each node `i`, the earlier nodes `j < i` it shares an edge with.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PredecessorSets {
    pub sets: Vec<Vec<usize>>,
}

pub fn predecessor_sets(graph: &CorrelationGraph) -> PredecessorSets {
    PredecessorSets {
        sets: (0..graph.n())
            .map(|i| (0..i).filter(|&j| graph.is_edge(i, j)).collect())
            .collect(),
    }
}

/// Disjoint node groups `T_1..T_k` covering every node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    groups: Vec<Vec<usize>>,
    n: usize,
}

impl Partition {
    /// Validates that `groups` are non-empty, pairwise disjoint and cover
    /// `0..n`. Member order is kept as given.
    pub fn new(groups: Vec<Vec<usize>>, n: usize) -> Result<Self> {
        let mut owner: Vec<Option<usize>> = vec![None; n];
        for (g, group) in groups.iter().enumerate() {
            if group.is_empty() {
                return Err(Error::InvalidPartition(format!("group {} is empty", g + 1)));
            }
            for &i in group {
                if i >= n {
                    return Err(Error::InvalidPartition(format!(
                        "node {} out of range for {n} nodes",
                        i + 1
                    )));
                }
                if let Some(prev) = owner[i].replace(g) {
                    return Err(Error::InvalidPartition(format!(
                        "node {} appears in groups {} and {}",
                        i + 1,
                        prev + 1,
                        g + 1
                    )));
                }
            }
        }
        if let Some(missing) = owner.iter().position(Option::is_none) {
            return Err(Error::InvalidPartition(format!(
                "node {} is not covered",
                missing + 1
            )));
        }
        Ok(Partition { groups, n })
    }

    pub fn singletons(n: usize) -> Self {
        Partition {
            groups: (0..n).map(|i| vec![i]).collect(),
            n,
        }
    }

    pub fn whole(n: usize) -> Self {
        Partition {
            groups: vec![(0..n).collect()],
            n,
        }
    }

    pub fn groups(&self) -> &[Vec<usize>] {
        &self.groups
    }

    pub fn n_nodes(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.groups.len()
    }

    fn group_of(&self) -> Vec<usize> {
        let mut owner = vec![0; self.n];
        for (g, group) in self.groups.iter().enumerate() {
            for &i in group {
                owner[i] = g;
            }
        }
        owner
    }
}

/// Connected components of the edge set, ordered by smallest member with
/// members ascending.
#[allow(clippy::needless_range_loop)]
pub fn disjoint_partition(graph: &CorrelationGraph) -> Partition {
    let n = graph.n();
    let mut seen = vec![false; n];
    let mut groups = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut stack = vec![start];
        let mut members = Vec::new();
        while let Some(u) = stack.pop() {
            members.push(u);
            for v in 0..n {
                if !seen[v] && graph.is_edge(u, v) {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        members.sort_unstable();
        groups.push(members);
    }
    Partition { groups, n }
}

/// True iff no edge joins two different groups.
pub fn verify_disjoint(graph: &CorrelationGraph, partition: &Partition) -> Result<bool> {
    if partition.n_nodes() != graph.n() {
        return Err(Error::InvalidPartition(format!(
            "partition covers {} nodes, graph has {}",
            partition.n_nodes(),
            graph.n()
        )));
    }
    let owner = partition.group_of();
    let n = graph.n();
    Ok((0..n).all(|i| (0..i).all(|j| !graph.is_edge(i, j) || owner[i] == owner[j])))
}
