//! Joint distributions over N finite-alphabet sources.
//!
//! A [`JointSource`] stores one dense table in row-major mixed-radix order:
//! the last variable varies fastest, so the flat index of the symbol tuple
//! `(x_0, .., x_{N-1})` is `sum_i x_i * stride_i` with `stride_{N-1} = 1`.
//! Every entropy in the crate is computed from this table.

use crate::error::{Error, Result};
use crate::grouping::Partition;

/// Largest table a source may hold.
pub const MAX_CELLS: usize = 1 << 20;

/// Tolerance on the total probability mass.
pub const NORMALIZATION_TOL: f64 = 1e-9;

/// Entries at or above this value are clamped to zero instead of rejected.
pub const NEGATIVE_CLAMP: f64 = -1e-12;

/// Dense joint pmf over N discrete sources. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct JointSource {
    alphabet_sizes: Vec<usize>,
    strides: Vec<usize>,
    pmf: Vec<f64>,
}

/// Product of the alphabet sizes, or `SizeCap` once it passes [`MAX_CELLS`].
pub fn table_size(alphabet_sizes: &[usize]) -> Result<usize> {
    if alphabet_sizes.is_empty() || alphabet_sizes.contains(&0) {
        return Err(Error::InvalidAlphabet);
    }
    let mut cells: usize = 1;
    for &a in alphabet_sizes {
        cells = cells.saturating_mul(a);
        if cells > MAX_CELLS {
            return Err(Error::SizeCap {
                cells,
                cap: MAX_CELLS,
            });
        }
    }
    Ok(cells)
}

fn strides_for(alphabet_sizes: &[usize]) -> Vec<usize> {
    let mut strides = vec![1; alphabet_sizes.len()];
    for i in (0..alphabet_sizes.len().saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * alphabet_sizes[i + 1];
    }
    strides
}

impl JointSource {
    /// Validates `pmf` against `alphabet_sizes`.
    ///
    /// The table is checked, never renormalized. Entries in `[-1e-12, 0)`
    /// are clamped to zero.
    pub fn new(alphabet_sizes: Vec<usize>, mut pmf: Vec<f64>) -> Result<Self> {
        let cells = table_size(&alphabet_sizes)?;
        if pmf.len() != cells {
            return Err(Error::DimensionMismatch {
                expected: cells,
                actual: pmf.len(),
            });
        }
        for (index, p) in pmf.iter_mut().enumerate() {
            if !p.is_finite() {
                return Err(Error::NonFinite { index });
            }
            if *p < 0.0 {
                if *p >= NEGATIVE_CLAMP {
                    *p = 0.0;
                } else {
                    return Err(Error::NegativeProbability { index, value: *p });
                }
            }
        }
        let sum: f64 = pmf.iter().sum();
        if (sum - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::NotNormalized {
                sum,
                tol: NORMALIZATION_TOL,
            });
        }
        let strides = strides_for(&alphabet_sizes);
        Ok(JointSource {
            alphabet_sizes,
            strides,
            pmf,
        })
    }

    /// Builds `p(x_1..x_N) = initial(x_1) * prod_i T_i(x_i -> x_{i+1})`.
    pub fn from_markov_chain(spec: &MarkovChainSpec) -> Result<Self> {
        spec.validate()?;
        let sizes = spec.alphabet_sizes();
        let cells = table_size(&sizes)?;
        let mut pmf = Vec::with_capacity(cells);
        pmf.extend_from_slice(&spec.initial_dist);
        // Extend one variable at a time; each step appends the next axis as
        // the fastest-varying one.
        for transition in &spec.transitions {
            let next_size = transition[0].len();
            let mut extended = Vec::with_capacity(pmf.len() * next_size);
            for (flat, &p) in pmf.iter().enumerate() {
                let last = flat % transition.len();
                extended.extend(transition[last].iter().map(|&t| p * t));
            }
            pmf = extended;
        }
        JointSource::new(sizes, pmf)
    }

    /// Places each group's variables at the node indices of its partition
    /// block. `groups[g]`'s j-th variable becomes node `assignment.groups()[g][j]`.
    pub fn product_of_groups(groups: &[JointSource], assignment: &Partition) -> Result<Self> {
        let blocks = assignment.groups();
        if blocks.len() != groups.len() {
            return Err(Error::InvalidPartition(format!(
                "{} blocks for {} group sources",
                blocks.len(),
                groups.len()
            )));
        }
        let n = assignment.n_nodes();
        let mut sizes = vec![0; n];
        for (group, block) in groups.iter().zip(blocks) {
            if group.n_vars() != block.len() {
                return Err(Error::InvalidPartition(format!(
                    "block of {} nodes assigned a source with {} variables",
                    block.len(),
                    group.n_vars()
                )));
            }
            for (j, &node) in block.iter().enumerate() {
                sizes[node] = group.alphabet_sizes[j];
            }
        }
        let cells = table_size(&sizes)?;
        let strides = strides_for(&sizes);

        // For every node, the stride it contributes inside its own group table.
        let mut group_of = vec![0; n];
        let mut inner_stride = vec![0; n];
        for (g, (group, block)) in groups.iter().zip(blocks).enumerate() {
            for (j, &node) in block.iter().enumerate() {
                group_of[node] = g;
                inner_stride[node] = group.strides[j];
            }
        }

        let mut pmf = Vec::with_capacity(cells);
        let mut offsets = vec![0usize; groups.len()];
        for flat in 0..cells {
            offsets.iter_mut().for_each(|o| *o = 0);
            for node in 0..n {
                let symbol = (flat / strides[node]) % sizes[node];
                offsets[group_of[node]] += symbol * inner_stride[node];
            }
            let p = groups
                .iter()
                .zip(&offsets)
                .map(|(g, &o)| g.pmf[o])
                .product::<f64>();
            pmf.push(p);
        }
        JointSource::new(sizes, pmf)
    }

    /// Empirical pmf with additive smoothing:
    /// `(count(t) + smoothing) / (rows + smoothing * cells)`.
    pub fn from_samples<R: AsRef<[usize]>>(
        rows: &[R],
        alphabet_sizes: Vec<usize>,
        smoothing: f64,
    ) -> Result<Self> {
        if !(smoothing.is_finite() && smoothing >= 0.0) {
            return Err(Error::InvalidSmoothing(smoothing));
        }
        let cells = table_size(&alphabet_sizes)?;
        if rows.is_empty() {
            return Err(Error::EmptySamples);
        }
        let strides = strides_for(&alphabet_sizes);
        let mut counts = vec![0u64; cells];
        for (r, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != alphabet_sizes.len() {
                return Err(Error::RowWidth {
                    row: r + 1,
                    expected: alphabet_sizes.len(),
                    actual: row.len(),
                });
            }
            let mut flat = 0;
            for (c, (&symbol, &size)) in row.iter().zip(&alphabet_sizes).enumerate() {
                if symbol >= size {
                    return Err(Error::SymbolOutOfRange {
                        row: r + 1,
                        column: c + 1,
                        symbol,
                        size,
                    });
                }
                flat += symbol * strides[c];
            }
            counts[flat] += 1;
        }
        let denom = rows.len() as f64 + smoothing * cells as f64;
        let pmf = counts
            .iter()
            .map(|&c| (c as f64 + smoothing) / denom)
            .collect();
        JointSource::new(alphabet_sizes, pmf)
    }

    pub fn n_vars(&self) -> usize {
        self.alphabet_sizes.len()
    }

    pub fn alphabet_sizes(&self) -> &[usize] {
        &self.alphabet_sizes
    }

    pub fn pmf(&self) -> &[f64] {
        &self.pmf
    }

    pub fn strides(&self) -> &[usize] {
        &self.strides
    }

    /// Probability of one symbol tuple. Panics if the tuple is out of range.
    pub fn prob(&self, symbols: &[usize]) -> f64 {
        assert_eq!(symbols.len(), self.n_vars(), "symbol tuple length");
        let flat = symbols
            .iter()
            .zip(&self.alphabet_sizes)
            .zip(&self.strides)
            .map(|((&s, &a), &st)| {
                assert!(s < a, "symbol {s} outside alphabet of size {a}");
                s * st
            })
            .sum::<usize>();
        self.pmf[flat]
    }
}

/// First-order Markov chain `X_1 -> X_2 -> .. -> X_N`.
#[derive(Debug, Clone, PartialEq)]
pub struct MarkovChainSpec {
    /// Distribution of `X_1`.
    pub initial_dist: Vec<f64>,
    /// `transitions[i][a][b] = P(X_{i+2} = b | X_{i+1} = a)`, one
    /// row-stochastic matrix per link.
    pub transitions: Vec<Vec<Vec<f64>>>,
}

impl MarkovChainSpec {
    pub fn new(initial_dist: Vec<f64>, transitions: Vec<Vec<Vec<f64>>>) -> Result<Self> {
        let spec = MarkovChainSpec {
            initial_dist,
            transitions,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Alphabet sizes implied by the initial distribution and the matrices.
    pub fn alphabet_sizes(&self) -> Vec<usize> {
        std::iter::once(self.initial_dist.len())
            .chain(
                self.transitions
                    .iter()
                    .map(|t| t.first().map_or(0, Vec::len)),
            )
            .collect()
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidMarkovSpec(msg));
        if self.initial_dist.is_empty() {
            return bad("initial distribution is empty".into());
        }
        check_distribution(&self.initial_dist).map_err(|m| {
            Error::InvalidMarkovSpec(format!("initial distribution: {m}"))
        })?;
        let mut from_size = self.initial_dist.len();
        for (i, matrix) in self.transitions.iter().enumerate() {
            if matrix.len() != from_size {
                return bad(format!(
                    "transition {} has {} rows, expected {from_size}",
                    i + 1,
                    matrix.len()
                ));
            }
            let to_size = matrix[0].len();
            if to_size == 0 {
                return bad(format!("transition {} has empty rows", i + 1));
            }
            for (a, row) in matrix.iter().enumerate() {
                if row.len() != to_size {
                    return bad(format!("transition {} row {} is ragged", i + 1, a + 1));
                }
                check_distribution(row).map_err(|m| {
                    Error::InvalidMarkovSpec(format!("transition {} row {}: {m}", i + 1, a + 1))
                })?;
            }
            from_size = to_size;
        }
        Ok(())
    }
}

fn check_distribution(p: &[f64]) -> std::result::Result<(), String> {
    if let Some(v) = p.iter().find(|v| !v.is_finite() || **v < 0.0) {
        return Err(format!("invalid entry {v}"));
    }
    let sum: f64 = p.iter().sum();
    if (sum - 1.0).abs() > NORMALIZATION_TOL {
        return Err(format!("sums to {sum}"));
    }
    Ok(())
}
