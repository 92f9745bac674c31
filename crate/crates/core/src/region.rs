//! The Slepian-Wolf admissible rate region for N sources.
//!
//! For every nonempty subset `S` of sources the region requires
//! `sum_{i in S} R_i >= H(X_S | X_{S^c})`, giving `2^N - 1` inequalities.
//! Subsets are encoded as bitmasks (bit `i` = source `i`, 0-based) and
//! always emitted in ascending mask order.

use crate::entropy::{chain_decomposition, check_permutation, entropy_of, EntropyValue};
use crate::error::{Error, Result};
use crate::source::JointSource;

/// Largest N whose region is enumerated.
pub const MAX_REGION_SOURCES: usize = 16;

/// Absolute slack allowed when testing membership.
pub const MEMBERSHIP_TOL: f64 = 1e-9;

/// Per-source rates in bits/symbol.
#[derive(Debug, Clone, PartialEq)]
pub struct RateVector(Vec<f64>);

impl RateVector {
    pub fn new(rates: Vec<f64>) -> Result<Self> {
        if let Some((index, &value)) = rates
            .iter()
            .enumerate()
            .find(|(_, r)| !(r.is_finite() && **r >= 0.0))
        {
            return Err(Error::InvalidRate { index, value });
        }
        Ok(RateVector(rates))
    }

    pub fn rates(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.0.iter().sum()
    }

    /// Rate mass on the sources in `mask`.
    pub fn subset_sum(&self, mask: u32) -> f64 {
        members(mask).map(|i| self.0[i]).sum()
    }
}

/// One region constraint `sum_{i in S} R_i >= H(X_S | X_{S^c})`.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionInequality {
    /// Bitmask of `S`.
    pub mask: u32,
    pub lower_bound: EntropyValue,
}

impl RegionInequality {
    /// 0-based members of `S`, ascending.
    pub fn subset(&self) -> Vec<usize> {
        members(self.mask).collect()
    }
}

pub(crate) fn members(mask: u32) -> impl Iterator<Item = usize> {
    (0..32).filter(move |i| mask & (1 << i) != 0)
}

/// Entropies of every subset, indexed by bitmask (`H(empty) = 0`).
fn subset_entropies(source: &JointSource) -> Vec<f64> {
    (0u32..1 << source.n_vars())
        .map(|mask| entropy_of(source, &members(mask).collect::<Vec<_>>()))
        .collect()
}

/// All `2^N - 1` inequalities in ascending mask order.
pub fn enumerate_inequalities(source: &JointSource) -> Result<Vec<RegionInequality>> {
    let n = source.n_vars();
    if n > MAX_REGION_SOURCES {
        return Err(Error::EnumerationCap {
            n,
            cap: MAX_REGION_SOURCES,
        });
    }
    let h = subset_entropies(source);
    let full = (1u32 << n) - 1;
    Ok((1..=full)
        .map(|mask| RegionInequality {
            mask,
            lower_bound: EntropyValue::new(h[full as usize] - h[(full & !mask) as usize]),
        })
        .collect())
}

/// Outcome of a membership test.
#[derive(Debug, Clone, PartialEq)]
pub struct Admissibility {
    pub admissible: bool,
    /// `(inequality, slack)` for every constraint, in mask order.
    pub slacks: Vec<(RegionInequality, f64)>,
}

impl Admissibility {
    pub fn violated(&self) -> impl Iterator<Item = &RegionInequality> {
        self.slacks
            .iter()
            .filter(|(_, s)| *s < -MEMBERSHIP_TOL)
            .map(|(q, _)| q)
    }
}

/// Checks `rates` against every inequality, allowing [`MEMBERSHIP_TOL`].
pub fn is_admissible(source: &JointSource, rates: &RateVector) -> Result<Admissibility> {
    let inequalities = enumerate_inequalities(source)?;
    slack_against(&inequalities, source.n_vars(), rates)
}

pub fn slack_against(
    inequalities: &[RegionInequality],
    n: usize,
    rates: &RateVector,
) -> Result<Admissibility> {
    if rates.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            actual: rates.len(),
        });
    }
    let slacks: Vec<_> = inequalities
        .iter()
        .map(|q| (q.clone(), rates.subset_sum(q.mask) - q.lower_bound.bits()))
        .collect();
    let admissible = slacks.iter().all(|(_, s)| *s >= -MEMBERSHIP_TOL);
    Ok(Admissibility { admissible, slacks })
}

/// Corner point for an ordering: source `ordering[i]` gets the i-th
/// chain-rule term.
pub fn corner_point(source: &JointSource, ordering: &[usize]) -> Result<RateVector> {
    check_permutation(source.n_vars(), ordering)?;
    let terms = chain_decomposition(source, ordering)?;
    let mut rates = vec![0.0; ordering.len()];
    for (&node, term) in ordering.iter().zip(terms) {
        rates[node] = term.bits();
    }
    RateVector::new(rates)
}

/// Dominant face of the two-source region.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoNodeBoundary {
    /// `(H(X_1), H(X_2|X_1))`.
    pub corner_a: (f64, f64),
    /// `(H(X_1|X_2), H(X_2))`.
    pub corner_b: (f64, f64),
    /// `H(X_1, X_2)`, the sum-rate line shared with cooperative encoding.
    pub sum_rate: f64,
    /// `H(X_1|X_2)`: the region lies right of `R_1 = r1_min`.
    pub r1_min: f64,
    /// `H(X_2|X_1)`: the region lies above `R_2 = r2_min`.
    pub r2_min: f64,
}

impl TwoNodeBoundary {
    /// Polyline vertices from corner A to corner B; one vertex when they
    /// coincide.
    pub fn vertices(&self) -> Vec<(f64, f64)> {
        let (a, b) = (self.corner_a, self.corner_b);
        if (a.0 - b.0).abs() <= 1e-12 && (a.1 - b.1).abs() <= 1e-12 {
            vec![a]
        } else {
            vec![a, b]
        }
    }
}

pub fn two_node_boundary(source: &JointSource) -> Result<TwoNodeBoundary> {
    if source.n_vars() != 2 {
        return Err(Error::NotTwoNodes(source.n_vars()));
    }
    let a = corner_point(source, &[0, 1])?;
    let b = corner_point(source, &[1, 0])?;
    let inequalities = enumerate_inequalities(source)?;
    let bound = |mask: u32| {
        inequalities
            .iter()
            .find(|q| q.mask == mask)
            .map(|q| q.lower_bound.bits())
            .expect("all masks enumerated")
    };
    Ok(TwoNodeBoundary {
        corner_a: (a.rates()[0], a.rates()[1]),
        corner_b: (b.rates()[0], b.rates()[1]),
        sum_rate: bound(0b11),
        r1_min: bound(0b01),
        r2_min: bound(0b10),
    })
}
