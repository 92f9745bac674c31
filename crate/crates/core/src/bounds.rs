//! Structured lower bounds on the total rate `R_T = sum_i R_i`.
//!
//! Each bound replaces the chain-rule conditioning sets of the joint
//! entropy with smaller ones chosen from a structural assumption (Markov
//! chain, sparse correlation graph, disjoint groups). Dropping conditioning
//! never lowers an entropy, so every bound is at least `H(X_1..X_N)`; the
//! excess is reported as the penalty of the assumption.
//!
//! Positions in orderings and the mixed-bound parameters `k`, `r` are
//! 1-based to match the usual statement of the bounds; node indices are
//! 0-based like the rest of the crate.

use std::fmt::Write as _;

use crate::entropy::{check_permutation, conditional_entropy, total_entropy, EntropyValue};
use crate::error::{Error, Result};
use crate::grouping::{CorrelationGraph, Partition};
use crate::source::JointSource;

/// Tolerance for the dominance check `total >= H(X_1..X_N)`.
pub const DOMINANCE_TOL: f64 = 1e-9;

/// One `H(X_target | X_given)` summand.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundTerm {
    pub target: usize,
    pub given: Vec<usize>,
    pub value: EntropyValue,
}

impl BoundTerm {
    /// `H(X3|X2,X1)` style label with 1-based node numbers.
    pub fn label(&self) -> String {
        let mut s = format!("H(X{}", self.target + 1);
        for (i, g) in self.given.iter().enumerate() {
            let sep = if i == 0 { '|' } else { ',' };
            let _ = write!(s, "{sep}X{}", g + 1);
        }
        s.push(')');
        s
    }
}

/// Subtotal of one disjoint group.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupSubtotal {
    pub members: Vec<usize>,
    pub total: EntropyValue,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub config_name: String,
    /// Node order the terms follow.
    pub ordering: Vec<usize>,
    pub terms: Vec<BoundTerm>,
    /// Right-hand side of the bound, `sum` of the terms.
    pub total: EntropyValue,
    pub joint_entropy: EntropyValue,
    /// `total - H(X_1..X_N)` in bits/symbol.
    pub penalty: f64,
    /// Per-group subtotals; empty for bounds without groups.
    pub groups: Vec<GroupSubtotal>,
}

impl BoundReport {
    fn assemble(
        source: &JointSource,
        config_name: String,
        ordering: Vec<usize>,
        terms: Vec<BoundTerm>,
        groups: Vec<GroupSubtotal>,
    ) -> Self {
        let total: EntropyValue = terms.iter().map(|t| t.value).sum();
        let joint_entropy = total_entropy(source);
        BoundReport {
            config_name,
            ordering,
            terms,
            total,
            joint_entropy,
            penalty: total - joint_entropy,
            groups,
        }
    }

    /// Penalty as a percentage of the joint entropy.
    pub fn penalty_pct(&self) -> f64 {
        percentage(self.penalty, self.joint_entropy.bits())
    }

    /// Whether the bound is no tighter than the joint entropy.
    pub fn dominates(&self) -> bool {
        self.penalty >= -DOMINANCE_TOL
    }
}

fn percentage(penalty: f64, joint: f64) -> f64 {
    if joint > 0.0 {
        100.0 * penalty / joint
    } else if penalty.abs() <= DOMINANCE_TOL {
        0.0
    } else {
        f64::INFINITY
    }
}

pub fn identity(n: usize) -> Vec<usize> {
    (0..n).collect()
}

fn term(source: &JointSource, target: usize, given: Vec<usize>) -> Result<BoundTerm> {
    let value = conditional_entropy(source, &[target], &given)?;
    Ok(BoundTerm {
        target,
        given,
        value,
    })
}

/// Nodes at 1-based positions `to` down to `from` of `ordering`.
fn positions_desc(ordering: &[usize], from: usize, to: usize) -> Vec<usize> {
    (from..=to).rev().map(|p| ordering[p - 1]).collect()
}

/// Chain-rule bound; equals the joint entropy for any ordering.
pub fn bound_full(source: &JointSource, ordering: &[usize]) -> Result<BoundReport> {
    check_permutation(source.n_vars(), ordering)?;
    let terms = (1..=ordering.len())
        .map(|p| term(source, ordering[p - 1], positions_desc(ordering, 1, p - 1)))
        .collect::<Result<_>>()?;
    Ok(BoundReport::assemble(
        source,
        "full".into(),
        ordering.to_vec(),
        terms,
        vec![],
    ))
}

/// Markov-chain bound: every node conditioned on its predecessor only.
pub fn bound_markov(source: &JointSource, ordering: &[usize]) -> Result<BoundReport> {
    check_permutation(source.n_vars(), ordering)?;
    let terms = (1..=ordering.len())
        .map(|p| term(source, ordering[p - 1], positions_desc(ordering, p.max(2) - 1, p - 1)))
        .collect::<Result<_>>()?;
    Ok(BoundReport::assemble(
        source,
        "markov".into(),
        ordering.to_vec(),
        terms,
        vec![],
    ))
}

/// Mixed bound: full conditioning up to position `k`, a Markov segment
/// over positions `k+1..=k+r+1`, then conditioning back to position `k+r`
/// for the rest. Requires `k >= 2` and `k + r + 1 < N`.
pub fn bound_mixed(source: &JointSource, ordering: &[usize], k: usize, r: usize) -> Result<BoundReport> {
    let n = source.n_vars();
    check_permutation(n, ordering)?;
    if k < 2 || k + r + 1 >= n {
        return Err(Error::InvalidMixedParams { k, r, n });
    }
    let terms = (1..=n)
        .map(|p| {
            let given = if p <= k {
                positions_desc(ordering, 1, p - 1)
            } else if p <= k + r + 1 {
                positions_desc(ordering, p - 1, p - 1)
            } else {
                positions_desc(ordering, k + r, p - 1)
            };
            term(source, ordering[p - 1], given)
        })
        .collect::<Result<_>>()?;
    Ok(BoundReport::assemble(
        source,
        format!("mixed(k={k},r={r})"),
        ordering.to_vec(),
        terms,
        vec![],
    ))
}

/// Adjacency bound: node at position `i` conditioned on the earlier nodes
/// it shares an edge with. With the identity ordering these are exactly
/// the predecessor sets of the graph.
pub fn bound_adjacency(
    source: &JointSource,
    graph: &CorrelationGraph,
    ordering: &[usize],
) -> Result<BoundReport> {
    let n = source.n_vars();
    if graph.n() != n {
        return Err(Error::NodeCountMismatch {
            graph: graph.n(),
            source_n: n,
        });
    }
    check_permutation(n, ordering)?;
    let terms = ordering
        .iter()
        .enumerate()
        .map(|(pos, &node)| {
            let given = ordering[..pos]
                .iter()
                .copied()
                .filter(|&j| graph.is_edge(node, j))
                .collect();
            term(source, node, given)
        })
        .collect::<Result<_>>()?;
    let name = if graph.metric_id() == "explicit" {
        "adjacency".to_string()
    } else {
        format!("adjacency(tau={})", graph.tau())
    };
    Ok(BoundReport::assemble(
        source,
        name,
        ordering.to_vec(),
        terms,
        vec![],
    ))
}

fn grouped(
    source: &JointSource,
    partition: &Partition,
    name: &str,
    markov: bool,
) -> Result<BoundReport> {
    if partition.n_nodes() != source.n_vars() {
        return Err(Error::InvalidPartition(format!(
            "partition covers {} nodes, source has {}",
            partition.n_nodes(),
            source.n_vars()
        )));
    }
    let mut terms = Vec::with_capacity(source.n_vars());
    let mut groups = Vec::with_capacity(partition.k());
    for members in partition.groups() {
        let first = terms.len();
        for p in 1..=members.len() {
            let from = if markov { p.max(2) - 1 } else { 1 };
            terms.push(term(source, members[p - 1], positions_desc(members, from, p - 1))?);
        }
        groups.push(GroupSubtotal {
            members: members.clone(),
            total: terms[first..].iter().map(|t| t.value).sum(),
        });
    }
    let ordering = partition.groups().concat();
    Ok(BoundReport::assemble(
        source,
        name.into(),
        ordering,
        terms,
        groups,
    ))
}

/// Disjoint-group bound: per-group chain rule, groups added.
pub fn bound_disjoint(source: &JointSource, partition: &Partition) -> Result<BoundReport> {
    grouped(source, partition, "disjoint", false)
}

/// Disjoint-group bound with a Markov chain inside each group.
pub fn bound_disjoint_markov(source: &JointSource, partition: &Partition) -> Result<BoundReport> {
    grouped(source, partition, "disjoint-markov", true)
}

/// One bound configuration to evaluate.
#[derive(Debug, Clone, PartialEq)]
pub enum BoundRequest {
    Full { ordering: Vec<usize> },
    Markov { ordering: Vec<usize> },
    Mixed { ordering: Vec<usize>, k: usize, r: usize },
    Adjacency { graph: CorrelationGraph, ordering: Vec<usize> },
    Disjoint { partition: Partition },
    DisjointMarkov { partition: Partition },
}

impl BoundRequest {
    pub fn evaluate(&self, source: &JointSource) -> Result<BoundReport> {
        match self {
            BoundRequest::Full { ordering } => bound_full(source, ordering),
            BoundRequest::Markov { ordering } => bound_markov(source, ordering),
            BoundRequest::Mixed { ordering, k, r } => bound_mixed(source, ordering, *k, *r),
            BoundRequest::Adjacency { graph, ordering } => bound_adjacency(source, graph, ordering),
            BoundRequest::Disjoint { partition } => bound_disjoint(source, partition),
            BoundRequest::DisjointMarkov { partition } => bound_disjoint_markov(source, partition),
        }
    }

    // Tie-break order in comparison tables.
    fn rank(&self) -> u8 {
        match self {
            BoundRequest::Full { .. } => 0,
            BoundRequest::Markov { .. } => 1,
            BoundRequest::Mixed { .. } => 2,
            BoundRequest::Adjacency { .. } => 3,
            BoundRequest::Disjoint { .. } => 4,
            BoundRequest::DisjointMarkov { .. } => 5,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonRow {
    pub config: String,
    pub total: EntropyValue,
    pub penalty: f64,
    pub penalty_pct: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport {
    pub joint_entropy: EntropyValue,
    /// Sorted ascending by total.
    pub rows: Vec<ComparisonRow>,
    pub reports: Vec<BoundReport>,
}

/// Evaluates every request and sorts by total.
///
/// Totals within [`DOMINANCE_TOL`] of the joint entropy sort as exact ties,
/// broken by bound kind then request order, so the chain-rule bound leads.
pub fn compare_bounds(source: &JointSource, configs: &[BoundRequest]) -> Result<ComparisonReport> {
    if configs.is_empty() {
        return Err(Error::NoConfigs);
    }
    let reports = configs
        .iter()
        .map(|c| c.evaluate(source))
        .collect::<Result<Vec<_>>>()?;
    let mut order: Vec<usize> = (0..reports.len()).collect();
    let key = |i: usize| {
        let p = reports[i].penalty;
        if p.abs() <= DOMINANCE_TOL {
            0.0
        } else {
            p
        }
    };
    order.sort_by(|&a, &b| {
        key(a)
            .total_cmp(&key(b))
            .then(configs[a].rank().cmp(&configs[b].rank()))
            .then(a.cmp(&b))
    });
    let reports: Vec<BoundReport> = order.into_iter().map(|i| reports[i].clone()).collect();
    let rows = reports
        .iter()
        .map(|r| ComparisonRow {
            config: r.config_name.clone(),
            total: r.total,
            penalty: r.penalty,
            penalty_pct: r.penalty_pct(),
        })
        .collect();
    Ok(ComparisonReport {
        joint_entropy: total_entropy(source),
        rows,
        reports,
    })
}
