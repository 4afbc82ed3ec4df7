//! Text score files.
//!
//! ```text
//! <n_vars>
//! <entry count>
//! <score> <k> <i_1> ... <i_k>
//! ```
//!
//! Entries are sorted by size and then lexicographically. Scores are
//! written with the shortest decimal that parses back to the same `f64`,
//! padded to at least six fractional digits.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::{expected_entries, ScoreError, ScoreTable, SubsetScores};
use crate::nodeset::{NodeSet, MAX_VARS};

pub fn write_score_file(table: &ScoreTable) -> String {
    let mut out = String::with_capacity(32 * (table.len() + 2));
    let _ = writeln!(out, "{}", table.n_vars());
    let _ = writeln!(out, "{}", table.len());
    for (subset, &score) in table.entries() {
        out.push_str(&format_score(score));
        let _ = write!(out, " {}", subset.len());
        for i in subset.iter() {
            let _ = write!(out, " {i}");
        }
        out.push('\n');
    }
    out
}

fn format_score(v: f64) -> String {
    // Display never uses exponent notation for f64.
    let mut s = if v == 0.0 {
        "0".to_string()
    } else {
        format!("{v}")
    };
    let frac = match s.find('.') {
        Some(dot) => s.len() - dot - 1,
        None => {
            s.push('.');
            0
        }
    };
    for _ in frac..6 {
        s.push('0');
    }
    s
}

pub fn read_score_file(text: &str) -> Result<ScoreTable, ScoreError> {
    let err = |line: usize, message: String| ScoreError::Parse { line, message };
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));

    let (ln, first) = lines.next().ok_or_else(|| err(1, "missing header".into()))?;
    let n_vars: usize = first
        .trim()
        .parse()
        .map_err(|_| err(ln, format!("bad variable count {first:?}")))?;
    if n_vars > MAX_VARS {
        return Err(ScoreError::TooManyVariables(n_vars));
    }
    let (ln, second) = lines.next().ok_or_else(|| err(2, "missing entry count".into()))?;
    let count: usize = second
        .trim()
        .parse()
        .map_err(|_| err(ln, format!("bad entry count {second:?}")))?;

    let mut entries = BTreeMap::new();
    let mut cap = 0usize;
    for (ln, line) in lines.by_ref() {
        if entries.len() == count {
            if line.trim().is_empty() {
                continue;
            }
            return Err(err(ln, "more entries than declared".into()));
        }
        let mut fields = line.split_ascii_whitespace();
        let score: f64 = fields
            .next()
            .ok_or_else(|| err(ln, "empty line".into()))?
            .parse()
            .map_err(|_| err(ln, "score is not a number".into()))?;
        if !score.is_finite() {
            return Err(err(ln, "score is not finite".into()));
        }
        let k: usize = fields
            .next()
            .ok_or_else(|| err(ln, "missing subset size".into()))?
            .parse()
            .map_err(|_| err(ln, "bad subset size".into()))?;
        let indices: Vec<usize> = fields
            .map(|f| f.parse::<usize>())
            .collect::<Result<_, _>>()
            .map_err(|_| err(ln, "bad variable index".into()))?;
        if k == 0 || indices.len() != k {
            return Err(err(
                ln,
                format!("subset size {k} but {} indices", indices.len()),
            ));
        }
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(err(ln, "indices must be strictly ascending".into()));
        }
        if let Some(&bad) = indices.iter().find(|&&i| i >= n_vars) {
            return Err(err(ln, format!("index {bad} out of range for {n_vars} variables")));
        }
        let subset = NodeSet::from_indices(indices);
        if entries.insert(subset, score).is_some() {
            return Err(err(ln, format!("duplicate subset {subset}")));
        }
        cap = cap.max(k);
    }
    if entries.len() != count {
        return Err(err(
            0,
            format!("declared {count} entries, found {}", entries.len()),
        ));
    }
    if count != expected_entries(n_vars, cap) {
        let missing = NodeSet::all_nonempty(n_vars, cap)
            .into_iter()
            .find(|s| !entries.contains_key(s))
            .unwrap_or(NodeSet::EMPTY);
        return Err(ScoreError::MissingEntry(missing));
    }
    ScoreTable::from_entries(n_vars, cap.max(1), entries)
}
