//! Dirichlet marginal likelihood scores for variable subsets.

mod file;

use std::collections::BTreeMap;
use std::ops::{Add, Sub};

use rayon::prelude::*;
use statrs::function::gamma::ln_gamma;
use thiserror::Error;

use crate::dataset::{contingency, ContingencyTable, Dataset, DatasetError};
use crate::nodeset::{NodeSet, MAX_VARS};

pub use file::{read_score_file, write_score_file};

pub const DEFAULT_PSEUDOCOUNT: f64 = 0.5;
pub const DEFAULT_SCALE: i64 = 1000;

#[derive(Debug, Error, PartialEq)]
pub enum ScoreError {
    #[error("pseudocount must be positive and finite, got {0}")]
    BadPseudocount(f64),
    #[error("{0} variables exceed the {MAX_VARS}-variable limit")]
    TooManyVariables(usize),
    #[error("maximum subset size must be at least 1")]
    BadCap,
    #[error("scale factor must be at least 1, got {0}")]
    BadScale(i64),
    #[error("no score for subset {0}")]
    MissingEntry(NodeSet),
    #[error("score {value} for {subset} does not fit an integer after scaling by {factor}")]
    Overflow {
        subset: NodeSet,
        value: f64,
        factor: i64,
    },
    #[error("score file line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Dataset(#[from] DatasetError),
}

/// Symmetric Dirichlet prior: every cell of every table gets the same
/// pseudocount.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PriorSpec {
    per_cell_pseudocount: f64,
}

impl PriorSpec {
    pub fn new(per_cell_pseudocount: f64) -> Result<Self, ScoreError> {
        if per_cell_pseudocount > 0.0 && per_cell_pseudocount.is_finite() {
            Ok(PriorSpec {
                per_cell_pseudocount,
            })
        } else {
            Err(ScoreError::BadPseudocount(per_cell_pseudocount))
        }
    }

    pub fn per_cell_pseudocount(&self) -> f64 {
        self.per_cell_pseudocount
    }
}

impl Default for PriorSpec {
    fn default() -> Self {
        PriorSpec {
            per_cell_pseudocount: DEFAULT_PSEUDOCOUNT,
        }
    }
}

/// Log of the Dirichlet-multinomial marginal likelihood of a table,
/// `ln Γ(α) − ln Γ(n+α) + Σ_j [ln Γ(n_j+α_j) − ln Γ(α_j)]`.
///
/// Empty cells contribute exactly zero and are skipped, so a table with
/// no observations scores exactly `0.0`.
pub fn log_marginal(table: &ContingencyTable, prior: PriorSpec) -> f64 {
    let a = prior.per_cell_pseudocount;
    let k = table.cells.len() as f64;
    let alpha = k * a;
    let n: u64 = table.cells.iter().sum();
    if n == 0 {
        return 0.0;
    }
    let lg_a = ln_gamma(a);
    let cells: f64 = table
        .cells
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| ln_gamma(c as f64 + a) - lg_a)
        .sum();
    ln_gamma(alpha) - ln_gamma(n as f64 + alpha) + cells
}

/// Read access to per-subset scores, shared by real and integer tables.
pub trait SubsetScores {
    type Value: Copy + Default + PartialOrd + Add<Output = Self::Value> + Sub<Output = Self::Value>;

    fn n_vars(&self) -> usize;
    fn max_subset_size(&self) -> usize;
    fn score(&self, subset: NodeSet) -> Option<Self::Value>;
}

/// Real-valued log scores for every nonempty subset up to a size cap.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreTable {
    n_vars: usize,
    max_subset_size: usize,
    entries: BTreeMap<NodeSet, f64>,
}

impl ScoreTable {
    /// Wraps precomputed entries. Every nonempty subset of size at most
    /// `max_subset_size` must be present and no other subsets.
    pub fn from_entries(
        n_vars: usize,
        max_subset_size: usize,
        entries: BTreeMap<NodeSet, f64>,
    ) -> Result<Self, ScoreError> {
        check_shape(n_vars, max_subset_size, entries.keys().copied())?;
        Ok(ScoreTable {
            n_vars,
            max_subset_size,
            entries,
        })
    }

    pub fn entries(&self) -> &BTreeMap<NodeSet, f64> {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Copy with every entry transformed, e.g. for linearity checks.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> ScoreTable {
        ScoreTable {
            n_vars: self.n_vars,
            max_subset_size: self.max_subset_size,
            entries: self.entries.iter().map(|(&k, &v)| (k, f(v))).collect(),
        }
    }
}

impl SubsetScores for ScoreTable {
    type Value = f64;

    fn n_vars(&self) -> usize {
        self.n_vars
    }

    fn max_subset_size(&self) -> usize {
        self.max_subset_size
    }

    fn score(&self, subset: NodeSet) -> Option<f64> {
        self.entries.get(&subset).copied()
    }
}

/// Scores scaled by an integer factor and rounded, for solvers that only
/// accept integer weights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntScoreTable {
    n_vars: usize,
    max_subset_size: usize,
    scale_factor: i64,
    entries: BTreeMap<NodeSet, i64>,
}

impl IntScoreTable {
    pub fn from_entries(
        n_vars: usize,
        max_subset_size: usize,
        scale_factor: i64,
        entries: BTreeMap<NodeSet, i64>,
    ) -> Result<Self, ScoreError> {
        if scale_factor < 1 {
            return Err(ScoreError::BadScale(scale_factor));
        }
        check_shape(n_vars, max_subset_size, entries.keys().copied())?;
        Ok(IntScoreTable {
            n_vars,
            max_subset_size,
            scale_factor,
            entries,
        })
    }

    pub fn scale_factor(&self) -> i64 {
        self.scale_factor
    }

    pub fn entries(&self) -> &BTreeMap<NodeSet, i64> {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

impl SubsetScores for IntScoreTable {
    type Value = i64;

    fn n_vars(&self) -> usize {
        self.n_vars
    }

    fn max_subset_size(&self) -> usize {
        self.max_subset_size
    }

    fn score(&self, subset: NodeSet) -> Option<i64> {
        self.entries.get(&subset).copied()
    }
}

fn check_shape(
    n_vars: usize,
    cap: usize,
    keys: impl Iterator<Item = NodeSet>,
) -> Result<(), ScoreError> {
    if n_vars > MAX_VARS {
        return Err(ScoreError::TooManyVariables(n_vars));
    }
    if cap == 0 {
        return Err(ScoreError::BadCap);
    }
    let mut count = 0usize;
    for k in keys {
        if k.is_empty() || k.upper_bound() > n_vars || k.len() > cap {
            return Err(ScoreError::Parse {
                line: 0,
                message: format!("subset {k} outside the table's range"),
            });
        }
        count += 1;
    }
    if count != expected_entries(n_vars, cap) {
        let missing = NodeSet::all_nonempty(n_vars, cap)
            .into_iter()
            .next_back()
            .unwrap_or(NodeSet::EMPTY);
        return Err(ScoreError::MissingEntry(missing));
    }
    Ok(())
}

/// `Σ_{k=1..cap} C(n, k)`.
pub fn expected_entries(n_vars: usize, cap: usize) -> usize {
    let cap = cap.min(n_vars);
    let mut total = 0usize;
    let mut binom = 1usize;
    for k in 1..=cap {
        binom = binom * (n_vars - k + 1) / k;
        total += binom;
    }
    total
}

/// Scores every nonempty subset of at most `max_subset_size` variables.
pub fn build_score_table(
    dataset: &Dataset,
    prior: PriorSpec,
    max_subset_size: usize,
) -> Result<ScoreTable, ScoreError> {
    let n = dataset.n_vars();
    if n > MAX_VARS {
        return Err(ScoreError::TooManyVariables(n));
    }
    if max_subset_size == 0 {
        return Err(ScoreError::BadCap);
    }
    let cap = max_subset_size.min(n);
    let subsets = NodeSet::all_nonempty(n, cap);
    let scored: Vec<(NodeSet, f64)> = subsets
        .par_iter()
        .map(|&s| Ok((s, log_marginal(&contingency(dataset, s)?, prior))))
        .collect::<Result<_, DatasetError>>()?;
    Ok(ScoreTable {
        n_vars: n,
        max_subset_size: cap,
        entries: scored.into_iter().collect(),
    })
}

/// `Σ_c v(c) − Σ_s v(s)`, separators counted with multiplicity.
pub fn network_score<T: SubsetScores>(
    table: &T,
    cliques: &[NodeSet],
    separators: &[NodeSet],
) -> Result<T::Value, ScoreError> {
    let mut total = T::Value::default();
    for &c in cliques {
        total = total + table.score(c).ok_or(ScoreError::MissingEntry(c))?;
    }
    for &s in separators {
        total = total - table.score(s).ok_or(ScoreError::MissingEntry(s))?;
    }
    Ok(total)
}

/// Multiplies every score by `factor` and rounds half away from zero.
pub fn integer_scale(table: &ScoreTable, factor: i64) -> Result<IntScoreTable, ScoreError> {
    if factor < 1 {
        return Err(ScoreError::BadScale(factor));
    }
    // 2^63 is exactly representable; anything at or beyond it overflows.
    const LIMIT: f64 = 9_223_372_036_854_775_808.0;
    let mut entries = BTreeMap::new();
    for (&subset, &value) in &table.entries {
        let scaled = (value * factor as f64).round();
        if !scaled.is_finite() || !(-LIMIT..LIMIT).contains(&scaled) {
            return Err(ScoreError::Overflow {
                subset,
                value,
                factor,
            });
        }
        entries.insert(subset, scaled as i64);
    }
    Ok(IntScoreTable {
        n_vars: table.n_vars,
        max_subset_size: table.max_subset_size,
        scale_factor: factor,
        entries,
    })
}
