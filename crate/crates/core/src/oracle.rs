//! Brute-force reference computations.
//!
//! Nothing here goes through the entropy engine's marginalization: every
//! quantity is summed directly over decoded symbol tuples, so agreement
//! between the two is evidence that both are right. The seeded generators
//! at the bottom build the randomized corpora the checks run on.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::entropy::conditional_entropy;
use crate::error::{Error, Result};
use crate::grouping::Partition;
use crate::source::{JointSource, MarkovChainSpec};

/// Reference value next to the engine's value for one quantity.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleReport {
    pub checked_quantity: String,
    pub reference_value: f64,
    pub engine_value: f64,
    pub abs_diff: f64,
}

fn validate(n: usize, targets: &[usize], given: &[usize]) -> Result<()> {
    if targets.is_empty() {
        return Err(Error::EmptySubset);
    }
    let mut role = vec![0u8; n];
    for (set, tag) in [(targets, 1u8), (given, 2u8)] {
        for &i in set {
            if i >= n {
                return Err(Error::IndexOutOfRange { index: i, n });
            }
            match role[i] {
                0 => role[i] = tag,
                t if t == tag => return Err(Error::DuplicateIndex(i)),
                _ => return Err(Error::OverlappingSets(i)),
            }
        }
    }
    Ok(())
}

fn decode(mut flat: usize, sizes: &[usize], out: &mut [usize]) {
    for (slot, &a) in out.iter_mut().zip(sizes).rev() {
        *slot = flat % a;
        flat /= a;
    }
}

/// `H(X_targets | X_given) = sum p(t, g) log2(p(g) / p(t, g))`, summed over
/// joint outcomes.
pub fn naive_entropy(source: &JointSource, targets: &[usize], given: &[usize]) -> Result<f64> {
    let sizes = source.alphabet_sizes();
    validate(sizes.len(), targets, given)?;
    let mut tg: BTreeMap<Vec<usize>, f64> = BTreeMap::new();
    let mut g: BTreeMap<Vec<usize>, f64> = BTreeMap::new();
    let mut symbols = vec![0; sizes.len()];
    for (flat, &p) in source.pmf().iter().enumerate() {
        if p == 0.0 {
            continue;
        }
        decode(flat, sizes, &mut symbols);
        let key_g: Vec<usize> = given.iter().map(|&i| symbols[i]).collect();
        let key_tg: Vec<usize> = targets
            .iter()
            .map(|&i| symbols[i])
            .chain(key_g.iter().copied())
            .collect();
        *tg.entry(key_tg).or_insert(0.0) += p;
        *g.entry(key_g).or_insert(0.0) += p;
    }
    let k = targets.len();
    let h: f64 = tg
        .iter()
        .filter(|(_, &p)| p > 0.0)
        .map(|(key, &p)| p * (g[&key[k..]] / p).log2())
        .sum();
    Ok(h.max(0.0))
}

/// Runs one conditional-entropy query through both the oracle and the engine.
pub fn compare_with_engine(
    source: &JointSource,
    targets: &[usize],
    given: &[usize],
) -> Result<OracleReport> {
    let reference_value = naive_entropy(source, targets, given)?;
    let engine_value = conditional_entropy(source, targets, given)?.bits();
    Ok(OracleReport {
        checked_quantity: format!("H({} | {})", one_based(targets), one_based(given)),
        reference_value,
        engine_value,
        abs_diff: (reference_value - engine_value).abs(),
    })
}

fn one_based(set: &[usize]) -> String {
    let names: Vec<String> = set.iter().map(|i| format!("X{}", i + 1)).collect();
    if names.is_empty() {
        "-".into()
    } else {
        names.join(",")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MarkovCheck {
    pub holds: bool,
    /// Largest `H(X_i | all earlier) - H(X_i | previous)` over positions `i >= 3`.
    pub max_deviation: f64,
}

/// Checks that each node, from the third position on, depends on the past
/// only through its immediate predecessor.
pub fn verify_markov_property(
    source: &JointSource,
    ordering: &[usize],
    tol: f64,
) -> Result<MarkovCheck> {
    let n = source.n_vars();
    let mut seen = vec![false; n];
    if ordering.len() != n || ordering.iter().any(|&i| i >= n || std::mem::replace(&mut seen[i], true)) {
        return Err(Error::NotPermutation { n });
    }
    let mut max_deviation: f64 = 0.0;
    for pos in 2..n {
        let node = ordering[pos];
        let full = naive_entropy(source, &[node], &ordering[..pos])?;
        let markov = naive_entropy(source, &[node], &[ordering[pos - 1]])?;
        // Conditioning on more never raises entropy, so the gap is
        // markov - full >= 0 up to rounding.
        max_deviation = max_deviation.max((markov - full).abs());
    }
    Ok(MarkovCheck {
        holds: max_deviation <= tol,
        max_deviation,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct IndependenceCheck {
    pub holds: bool,
    /// `sum_i H(X_{T_i}) - H(X_1..X_N)`, the total correlation across groups.
    pub deviation: f64,
}

/// Checks mutual independence of the partition's groups at the entropy level.
pub fn verify_group_independence(
    source: &JointSource,
    partition: &Partition,
    tol: f64,
) -> Result<IndependenceCheck> {
    let n = source.n_vars();
    if partition.n_nodes() != n {
        return Err(Error::InvalidPartition(format!(
            "partition covers {} nodes, source has {n}",
            partition.n_nodes()
        )));
    }
    let all: Vec<usize> = (0..n).collect();
    let joint = naive_entropy(source, &all, &[])?;
    let parts: f64 = partition
        .groups()
        .iter()
        .map(|g| naive_entropy(source, g, &[]))
        .sum::<Result<f64>>()?;
    let deviation = parts - joint;
    Ok(IndependenceCheck {
        holds: deviation.abs() <= tol,
        deviation,
    })
}

/// Random pmf over `sizes`; each cell is zeroed with probability
/// `zero_fraction` (at least one cell stays positive).
pub fn random_source<R: Rng>(rng: &mut R, sizes: &[usize], zero_fraction: f64) -> JointSource {
    let cells: usize = sizes.iter().product();
    let mut weights: Vec<f64> = (0..cells)
        .map(|_| {
            if rng.gen::<f64>() < zero_fraction {
                0.0
            } else {
                -(1.0 - rng.gen::<f64>()).ln()
            }
        })
        .collect();
    if weights.iter().all(|&w| w == 0.0) {
        let i = rng.gen_range(0..cells);
        weights[i] = 1.0;
    }
    let sum: f64 = weights.iter().sum();
    let pmf = weights.into_iter().map(|w| w / sum).collect();
    JointSource::new(sizes.to_vec(), pmf).expect("normalized random pmf")
}

fn random_distribution<R: Rng>(rng: &mut R, size: usize) -> Vec<f64> {
    let w: Vec<f64> = (0..size).map(|_| 0.05 - (1.0 - rng.gen::<f64>()).ln()).collect();
    let sum: f64 = w.iter().sum();
    w.into_iter().map(|x| x / sum).collect()
}

/// Random chain with dense (all-positive) transition rows.
pub fn random_markov_spec<R: Rng>(rng: &mut R, sizes: &[usize]) -> MarkovChainSpec {
    let initial = random_distribution(rng, sizes[0]);
    let transitions = sizes
        .windows(2)
        .map(|w| (0..w[0]).map(|_| random_distribution(rng, w[1])).collect())
        .collect();
    MarkovChainSpec::new(initial, transitions).expect("valid random chain")
}

pub fn random_permutation<R: Rng>(rng: &mut R, n: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}

/// Random disjoint `(targets, given)` pair over `n` nodes; targets non-empty.
pub fn random_query<R: Rng>(rng: &mut R, n: usize) -> (Vec<usize>, Vec<usize>) {
    loop {
        let mut targets = Vec::new();
        let mut given = Vec::new();
        for i in random_permutation(rng, n) {
            match rng.gen_range(0..3) {
                0 => targets.push(i),
                1 => given.push(i),
                _ => {}
            }
        }
        if !targets.is_empty() {
            return (targets, given);
        }
    }
}
