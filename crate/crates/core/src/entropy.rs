//! Exact Shannon entropies of a [`JointSource`], in bits.
//!
//! Every quantity is recomputed from the joint table; nothing is cached.
//! Conditional entropies use `H(A | B) = H(A, B) - H(B)`.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, Sub};

use crate::error::{Error, Result};
use crate::source::JointSource;

/// Non-negative entropy in bits/symbol.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default)]
pub struct EntropyValue(f64);

impl EntropyValue {
    pub const ZERO: EntropyValue = EntropyValue(0.0);

    /// Clamps float noise below zero to exactly zero.
    pub fn new(bits: f64) -> Self {
        EntropyValue(bits.max(0.0))
    }

    pub fn bits(self) -> f64 {
        self.0
    }
}

impl Add for EntropyValue {
    type Output = EntropyValue;

    fn add(self, rhs: Self) -> Self {
        EntropyValue(self.0 + rhs.0)
    }
}

impl Sub for EntropyValue {
    type Output = f64;

    fn sub(self, rhs: Self) -> f64 {
        self.0 - rhs.0
    }
}

impl Sum for EntropyValue {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        EntropyValue(iter.map(|v| v.0).sum())
    }
}

impl fmt::Display for EntropyValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

/// Marginal table over an ordered subset, row-major with the last subset
/// member fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct Marginal {
    pub alphabet_sizes: Vec<usize>,
    pub probs: Vec<f64>,
}

pub(crate) fn check_subset(n: usize, subset: &[usize]) -> Result<()> {
    let mut seen = vec![false; n];
    for &i in subset {
        if i >= n {
            return Err(Error::IndexOutOfRange { index: i, n });
        }
        if std::mem::replace(&mut seen[i], true) {
            return Err(Error::DuplicateIndex(i));
        }
    }
    Ok(())
}

pub(crate) fn check_permutation(n: usize, ordering: &[usize]) -> Result<()> {
    if ordering.len() != n || check_subset(n, ordering).is_err() {
        return Err(Error::NotPermutation { n });
    }
    Ok(())
}

/// Sums the joint table down to `subset`, keeping the subset's order.
pub fn marginal(source: &JointSource, subset: &[usize]) -> Result<Marginal> {
    check_subset(source.n_vars(), subset)?;
    Ok(marginal_unchecked(source, subset))
}

fn marginal_unchecked(source: &JointSource, subset: &[usize]) -> Marginal {
    let sizes = source.alphabet_sizes();
    let n = sizes.len();
    let sub_sizes: Vec<usize> = subset.iter().map(|&i| sizes[i]).collect();

    // weight[v]: stride of variable v inside the marginal table, 0 if summed out.
    let mut weight = vec![0usize; n];
    let mut stride = 1;
    for &v in subset.iter().rev() {
        weight[v] = stride;
        stride *= sizes[v];
    }
    let mut probs = vec![0.0; stride];

    // Odometer walk over the joint table in storage order.
    let mut digits = vec![0usize; n];
    let mut idx = 0usize;
    for &p in source.pmf() {
        probs[idx] += p;
        for v in (0..n).rev() {
            digits[v] += 1;
            idx += weight[v];
            if digits[v] < sizes[v] {
                break;
            }
            digits[v] = 0;
            idx -= weight[v] * sizes[v];
        }
    }
    Marginal {
        alphabet_sizes: sub_sizes,
        probs,
    }
}

fn shannon(probs: &[f64]) -> f64 {
    -probs
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| p * p.log2())
        .sum::<f64>()
}

/// `H(X_S)` for a possibly empty subset; `H(empty) = 0`.
pub(crate) fn entropy_of(source: &JointSource, subset: &[usize]) -> f64 {
    if subset.is_empty() {
        return 0.0;
    }
    // Canonical order makes the result independent of how the caller
    // listed the subset.
    let mut sorted = subset.to_vec();
    sorted.sort_unstable();
    shannon(&marginal_unchecked(source, &sorted).probs)
}

/// Joint entropy `H(X_S)` of a non-empty subset.
pub fn joint_entropy(source: &JointSource, subset: &[usize]) -> Result<EntropyValue> {
    if subset.is_empty() {
        return Err(Error::EmptySubset);
    }
    check_subset(source.n_vars(), subset)?;
    Ok(EntropyValue::new(entropy_of(source, subset)))
}

/// Entropy of all N variables.
pub fn total_entropy(source: &JointSource) -> EntropyValue {
    let all: Vec<usize> = (0..source.n_vars()).collect();
    EntropyValue::new(entropy_of(source, &all))
}

/// `H(X_targets | X_given)`; an empty `given` yields the joint entropy.
pub fn conditional_entropy(
    source: &JointSource,
    targets: &[usize],
    given: &[usize],
) -> Result<EntropyValue> {
    if targets.is_empty() {
        return Err(Error::EmptySubset);
    }
    let n = source.n_vars();
    check_subset(n, targets)?;
    check_subset(n, given)?;
    if let Some(&i) = targets.iter().find(|i| given.contains(i)) {
        return Err(Error::OverlappingSets(i));
    }
    let union: Vec<usize> = targets.iter().chain(given).copied().collect();
    Ok(EntropyValue::new(
        entropy_of(source, &union) - entropy_of(source, given),
    ))
}

/// Chain-rule terms `H(X_{o(i)} | X_{o(i-1)}, .., X_{o(0)})` for an ordering `o`.
pub fn chain_decomposition(source: &JointSource, ordering: &[usize]) -> Result<Vec<EntropyValue>> {
    check_permutation(source.n_vars(), ordering)?;
    let mut prev = 0.0;
    Ok((1..=ordering.len())
        .map(|len| {
            let h = entropy_of(source, &ordering[..len]);
            let term = EntropyValue::new(h - prev);
            prev = h;
            term
        })
        .collect())
}

/// Mutual information `I(X_i; X_j) = H(X_i) + H(X_j) - H(X_i, X_j)`.
pub fn mutual_information(source: &JointSource, i: usize, j: usize) -> Result<f64> {
    check_subset(source.n_vars(), &[i, j])?;
    let mi = entropy_of(source, &[i]) + entropy_of(source, &[j]) - entropy_of(source, &[i, j]);
    Ok(mi.max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    const H_QUARTER: f64 = 0.811_278_124_459_132_8;

    fn dsbs() -> JointSource {
        JointSource::new(vec![2, 2], vec![0.375, 0.125, 0.125, 0.375]).unwrap()
    }

    fn uniform2() -> JointSource {
        JointSource::new(vec![2, 2], vec![0.25; 4]).unwrap()
    }

    fn copy2() -> JointSource {
        JointSource::new(vec![2, 2], vec![0.5, 0.0, 0.0, 0.5]).unwrap()
    }

    #[test]
    fn binary_entropy_constant() {
        let h = -(0.25f64 * 0.25f64.log2() + 0.75 * 0.75f64.log2());
        assert!((h - H_QUARTER).abs() < 1e-15);
    }

    #[test]
    fn marginals() {
        assert_eq!(marginal(&uniform2(), &[0]).unwrap().probs, vec![0.5, 0.5]);
        assert_eq!(marginal(&dsbs(), &[1]).unwrap().probs, vec![0.5, 0.5]);
        assert_eq!(marginal(&dsbs(), &[0, 1]).unwrap().probs, dsbs().pmf());
        let swapped = marginal(&dsbs(), &[1, 0]).unwrap();
        assert_eq!(swapped.probs, vec![0.375, 0.125, 0.125, 0.375]);
    }

    #[test]
    fn marginal_keeps_subset_order() {
        let s = JointSource::new(vec![2, 3], vec![0.1, 0.2, 0.05, 0.3, 0.15, 0.2]).unwrap();
        let m = marginal(&s, &[1, 0]).unwrap();
        assert_eq!(m.alphabet_sizes, vec![3, 2]);
        assert_eq!(m.probs, vec![0.1, 0.3, 0.2, 0.15, 0.05, 0.2]);
    }

    #[test]
    fn marginal_rejects_bad_subsets() {
        assert_eq!(
            marginal(&dsbs(), &[0, 0]).unwrap_err(),
            Error::DuplicateIndex(0)
        );
        assert!(matches!(
            marginal(&dsbs(), &[2]).unwrap_err(),
            Error::IndexOutOfRange { index: 2, n: 2 }
        ));
    }

    #[test]
    fn joint_entropies() {
        assert_eq!(joint_entropy(&uniform2(), &[0, 1]).unwrap().bits(), 2.0);
        assert_eq!(joint_entropy(&copy2(), &[0, 1]).unwrap().bits(), 1.0);
        let h = joint_entropy(&dsbs(), &[0, 1]).unwrap().bits();
        assert!((h - (1.0 + H_QUARTER)).abs() < 1e-12);
        assert_eq!(joint_entropy(&dsbs(), &[]).unwrap_err(), Error::EmptySubset);
    }

    #[test]
    fn conditional_entropies() {
        assert_eq!(
            conditional_entropy(&uniform2(), &[0], &[1]).unwrap().bits(),
            1.0
        );
        assert_eq!(
            conditional_entropy(&copy2(), &[1], &[0]).unwrap().bits(),
            0.0
        );
        let h = conditional_entropy(&dsbs(), &[1], &[0]).unwrap().bits();
        assert!((h - H_QUARTER).abs() < 1e-12);
        assert_eq!(
            conditional_entropy(&dsbs(), &[0], &[0]).unwrap_err(),
            Error::OverlappingSets(0)
        );
        assert_eq!(
            conditional_entropy(&dsbs(), &[0, 1], &[]).unwrap(),
            joint_entropy(&dsbs(), &[0, 1]).unwrap()
        );
    }

    #[test]
    fn chain_terms() {
        assert_eq!(
            chain_decomposition(&uniform2(), &[0, 1]).unwrap(),
            vec![EntropyValue::new(1.0), EntropyValue::new(1.0)]
        );
        let terms = chain_decomposition(&dsbs(), &[0, 1]).unwrap();
        assert!((terms[0].bits() - 1.0).abs() < 1e-12);
        assert!((terms[1].bits() - H_QUARTER).abs() < 1e-12);
        assert_eq!(
            chain_decomposition(&dsbs(), &[0, 0]).unwrap_err(),
            Error::NotPermutation { n: 2 }
        );
        assert!(chain_decomposition(&dsbs(), &[0]).is_err());
    }

    #[test]
    fn mutual_information_values() {
        assert!(mutual_information(&uniform2(), 0, 1).unwrap().abs() < 1e-12);
        assert!((mutual_information(&copy2(), 0, 1).unwrap() - 1.0).abs() < 1e-12);
        let mi = mutual_information(&dsbs(), 0, 1).unwrap();
        assert!((mi - (1.0 - H_QUARTER)).abs() < 1e-12);
    }
}
