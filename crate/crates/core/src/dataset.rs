//! Categorical datasets and marginal contingency tables.

use std::collections::HashMap;

use thiserror::Error;

use crate::nodeset::{NodeSet, MAX_VARS};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DatasetError {
    #[error("empty header")]
    EmptyHeader,
    #[error("duplicate variable name {0:?} in header")]
    DuplicateName(String),
    #[error("line {line}: expected {expected} fields, found {found}")]
    RaggedRow {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("line {line}, column {column}: {value:?} is not a nonnegative integer")]
    NotAnInteger {
        line: usize,
        column: usize,
        value: String,
    },
    #[error("line {line}, column {column}: value {value} >= arity {arity}")]
    ValueOutOfRange {
        line: usize,
        column: usize,
        value: u32,
        arity: u32,
    },
    #[error("arity of {name:?} must be at least 2, got {arity}")]
    BadArity { name: String, arity: u32 },
    #[error("arity declared for unknown variable {0:?}")]
    UnknownVariable(String),
    #[error("{0} variables exceed the {MAX_VARS}-variable limit")]
    TooManyVariables(usize),
    #[error("empty subset")]
    EmptySubset,
    #[error("variable index {index} out of range for {n_vars} variables")]
    IndexOutOfRange { index: usize, n_vars: usize },
    #[error("contingency table over {0} would have more than 2^32 cells")]
    TooManyCells(NodeSet),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VariableSpec {
    pub name: String,
    pub arity: u32,
}

/// Arity declarations by variable name. Undeclared variables get their
/// arity inferred from the data.
#[derive(Debug, Clone, Default)]
pub struct AritySpec(pub HashMap<String, u32>);

impl AritySpec {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn declare(mut self, name: impl Into<String>, arity: u32) -> Self {
        self.0.insert(name.into(), arity);
        self
    }
}

/// Complete categorical data, immutable after load.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dataset {
    variables: Vec<VariableSpec>,
    rows: Vec<Vec<u32>>,
}

impl Dataset {
    pub fn new(variables: Vec<VariableSpec>, rows: Vec<Vec<u32>>) -> Result<Self, DatasetError> {
        if variables.is_empty() {
            return Err(DatasetError::EmptyHeader);
        }
        if variables.len() > MAX_VARS {
            return Err(DatasetError::TooManyVariables(variables.len()));
        }
        for (i, v) in variables.iter().enumerate() {
            if v.arity < 2 {
                return Err(DatasetError::BadArity {
                    name: v.name.clone(),
                    arity: v.arity,
                });
            }
            if variables[..i].iter().any(|w| w.name == v.name) {
                return Err(DatasetError::DuplicateName(v.name.clone()));
            }
        }
        for (r, row) in rows.iter().enumerate() {
            if row.len() != variables.len() {
                return Err(DatasetError::RaggedRow {
                    line: r + 2,
                    expected: variables.len(),
                    found: row.len(),
                });
            }
            for (c, (&value, var)) in row.iter().zip(&variables).enumerate() {
                if value >= var.arity {
                    return Err(DatasetError::ValueOutOfRange {
                        line: r + 2,
                        column: c + 1,
                        value,
                        arity: var.arity,
                    });
                }
            }
        }
        Ok(Dataset { variables, rows })
    }

    pub fn variables(&self) -> &[VariableSpec] {
        &self.variables
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    pub fn n_vars(&self) -> usize {
        self.variables.len()
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    /// A copy with rows in a different order.
    pub fn with_rows(&self, rows: Vec<Vec<u32>>) -> Result<Self, DatasetError> {
        Dataset::new(self.variables.clone(), rows)
    }
}

/// Parses a header line of names followed by rows of nonnegative integers.
///
/// Arities come from `spec` where declared, otherwise `max + 1` floored
/// at 2. Line numbers in errors are 1-based and count the header.
pub fn load_dataset(csv_text: &str, spec: Option<&AritySpec>) -> Result<Dataset, DatasetError> {
    let mut lines = csv_text
        .split('\n')
        .map(|l| l.strip_suffix('\r').unwrap_or(l))
        .enumerate();

    let header = match lines.next() {
        Some((_, h)) if !h.trim().is_empty() => h,
        _ => return Err(DatasetError::EmptyHeader),
    };
    let names: Vec<String> = header.split(',').map(|s| s.trim().to_string()).collect();
    if names.iter().any(|n| n.is_empty()) {
        return Err(DatasetError::EmptyHeader);
    }
    if names.len() > MAX_VARS {
        return Err(DatasetError::TooManyVariables(names.len()));
    }

    let mut rows = Vec::new();
    let mut line_numbers = Vec::new();
    for (i, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let lineno = i + 1;
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != names.len() {
            return Err(DatasetError::RaggedRow {
                line: lineno,
                expected: names.len(),
                found: fields.len(),
            });
        }
        let mut row = Vec::with_capacity(fields.len());
        for (c, f) in fields.iter().enumerate() {
            let f = f.trim();
            let value: u32 = f.parse().map_err(|_| DatasetError::NotAnInteger {
                line: lineno,
                column: c + 1,
                value: f.to_string(),
            })?;
            row.push(value);
        }
        rows.push(row);
        line_numbers.push(lineno);
    }

    if let Some(spec) = spec {
        if let Some(unknown) = spec.0.keys().find(|k| !names.contains(k)) {
            return Err(DatasetError::UnknownVariable(unknown.clone()));
        }
    }

    let mut variables = Vec::with_capacity(names.len());
    for (c, name) in names.into_iter().enumerate() {
        let declared = spec.and_then(|s| s.0.get(&name).copied());
        let arity = match declared {
            Some(a) => {
                if a < 2 {
                    return Err(DatasetError::BadArity { name, arity: a });
                }
                a
            }
            None => rows.iter().map(|r| r[c] + 1).max().unwrap_or(0).max(2),
        };
        variables.push(VariableSpec { name, arity });
    }

    // Report range violations against the original line numbers.
    for (row, &lineno) in rows.iter().zip(&line_numbers) {
        for (c, (&value, var)) in row.iter().zip(&variables).enumerate() {
            if value >= var.arity {
                return Err(DatasetError::ValueOutOfRange {
                    line: lineno,
                    column: c + 1,
                    value,
                    arity: var.arity,
                });
            }
        }
    }

    Dataset::new(variables, rows)
}

/// Joint outcome counts of a variable subset.
///
/// Cells are row-major over the subset's members in ascending index
/// order, last member fastest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContingencyTable {
    pub subset: NodeSet,
    pub cells: Vec<u64>,
    pub total: u64,
}

impl ContingencyTable {
    /// A table from raw cell counts, with the total derived.
    pub fn from_cells(subset: NodeSet, cells: Vec<u64>) -> Self {
        let total = cells.iter().sum();
        ContingencyTable {
            subset,
            cells,
            total,
        }
    }
}

pub fn contingency(dataset: &Dataset, subset: NodeSet) -> Result<ContingencyTable, DatasetError> {
    if subset.is_empty() {
        return Err(DatasetError::EmptySubset);
    }
    let n = dataset.n_vars();
    if subset.upper_bound() > n {
        let index = subset.iter().last().unwrap_or(0);
        return Err(DatasetError::IndexOutOfRange { index, n_vars: n });
    }
    let members = subset.to_vec();
    let mut size: u64 = 1;
    for &m in &members {
        size = size
            .checked_mul(dataset.variables[m].arity as u64)
            .filter(|&s| s <= u32::MAX as u64)
            .ok_or(DatasetError::TooManyCells(subset))?;
    }
    let mut cells = vec![0u64; size as usize];
    for row in &dataset.rows {
        let mut idx = 0usize;
        for &m in &members {
            idx = idx * dataset.variables[m].arity as usize + row[m] as usize;
        }
        cells[idx] += 1;
    }
    Ok(ContingencyTable {
        subset,
        cells,
        total: dataset.row_count() as u64,
    })
}
