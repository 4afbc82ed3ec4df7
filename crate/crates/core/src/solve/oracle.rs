use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;

use super::SolveError;
use crate::chordal::{junction_forest, Graph, SpanningForest};
use crate::nodeset::NodeSet;
use crate::scoring::SubsetScores;

/// Largest `n` the oracle runs without an explicit opt-in.
pub const ORACLE_DEFAULT_LIMIT: usize = 6;
/// Largest `n` the oracle runs at all (2^28 graphs).
pub const ORACLE_HARD_LIMIT: usize = 8;

const CHUNK: u64 = 1 << 14;

/// `(graphs done, total)`, called from worker threads.
pub type Progress<'a> = &'a (dyn Fn(u64, u64) + Sync);

#[derive(Clone, Copy, Default)]
pub struct OracleOptions<'a> {
    /// Permits `n = 7, 8`.
    pub allow_large: bool,
    pub progress: Option<Progress<'a>>,
}

/// Best network over every graph on `n` nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleOutcome<V> {
    pub graph: Graph,
    pub cliques: Vec<NodeSet>,
    pub forest: SpanningForest,
    pub value: V,
    pub graphs_visited: u64,
    pub chordal_graphs: u64,
}

struct Best<V> {
    value: V,
    mask: u64,
}

/// Enumerates all `2^(n(n-1)/2)` graphs, keeps the chordal ones whose
/// cliques have table entries, and returns the highest-scoring network.
/// Ties go to the lexicographically smallest edge list.
pub fn exhaustive_optimum<T>(table: &T, opts: OracleOptions<'_>) -> Result<OracleOutcome<T::Value>, SolveError>
where
    T: SubsetScores + Sync,
    T::Value: Send + Sync,
{
    let n = table.n_vars();
    if n == 0 {
        return Err(SolveError::NoVariables);
    }
    if n > ORACLE_HARD_LIMIT {
        return Err(SolveError::OracleTooLarge {
            n,
            limit: ORACLE_HARD_LIMIT,
        });
    }
    if n > ORACLE_DEFAULT_LIMIT && !opts.allow_large {
        return Err(SolveError::NeedsAllowLarge(n));
    }

    // Dense lookup by bitmask; None marks subsets beyond the cap.
    let dense: Vec<Option<T::Value>> = (0u32..1 << n)
        .map(|bits| match bits {
            0 => None,
            b => table.score(NodeSet::from_bits(b)),
        })
        .collect();
    let value_of = |cliques: &[NodeSet], forest: &SpanningForest| -> Option<T::Value> {
        let mut total = T::Value::default();
        for c in cliques {
            total = total + dense[c.bits() as usize]?;
        }
        for e in &forest.edges {
            total = total - dense[e.label.bits() as usize]?;
        }
        Some(total)
    };

    let total = 1u64 << (n * (n - 1) / 2);
    let chunks = total.div_ceil(CHUNK);
    let done = AtomicU64::new(0);
    let (best, chordal) = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let lo = chunk * CHUNK;
            let hi = (lo + CHUNK).min(total);
            let mut best: Option<Best<T::Value>> = None;
            let mut chordal = 0u64;
            for mask in lo..hi {
                let Ok((cliques, forest)) = junction_forest(&Graph::from_edge_mask(n, mask)) else {
                    continue;
                };
                chordal += 1;
                let Some(value) = value_of(&cliques, &forest) else {
                    continue;
                };
                let cand = Best { value, mask };
                best = Some(match best {
                    Some(b) => better(n, b, cand),
                    None => cand,
                });
            }
            if let Some(report) = opts.progress {
                let d = done.fetch_add(hi - lo, Ordering::Relaxed) + (hi - lo);
                report(d, total);
            }
            (best, chordal)
        })
        .reduce(
            || (None, 0),
            |(a, ca), (b, cb)| {
                let best = match (a, b) {
                    (Some(a), Some(b)) => Some(better(n, a, b)),
                    (a, None) => a,
                    (None, b) => b,
                };
                (best, ca + cb)
            },
        );

    // The empty graph is chordal and needs only singletons, so some
    // network is always feasible for a complete table.
    let best = best.ok_or(SolveError::NoFeasibleNetwork)?;
    let graph = Graph::from_edge_mask(n, best.mask);
    let (cliques, forest) = junction_forest(&graph).expect("best graph is chordal");
    Ok(OracleOutcome {
        graph,
        cliques,
        forest,
        value: best.value,
        graphs_visited: total,
        chordal_graphs: chordal,
    })
}

fn better<V: PartialOrd>(n: usize, a: Best<V>, b: Best<V>) -> Best<V> {
    if a.value > b.value {
        return a;
    }
    if b.value > a.value {
        return b;
    }
    let ea = Graph::from_edge_mask(n, a.mask).edges();
    let eb = Graph::from_edge_mask(n, b.mask).edges();
    if ea <= eb {
        a
    } else {
        b
    }
}
