//! Weighted MaxSAT encoding of optimal chordal Markov network structure.
//!
//! Variables, in numbering order:
//!
//! * `x_c` for every clique candidate `c` (candidate order of the table),
//! * `e_{n,m}` for every node pair `n < m`,
//! * `s_{c,c'}` for every intersecting candidate pair,
//! * `leaf_{c,l}` for every candidate and leaf level `l = 0..=⌊m/2⌋`,
//! * circuit auxiliaries, allocated while clauses are generated.
//!
//! A hard-satisfying assignment selects cliques (`x`) and junction-forest
//! edges (`s`); the soft clauses make the falsified weight equal to
//! `offset` minus the integer network score.

mod circuit;
mod decode;
mod wcnf;

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::chordal::StructureReport;
use crate::nodeset::NodeSet;
use crate::scoring::{IntScoreTable, SubsetScores};

pub use circuit::{encode_cardinality, ClauseDb, Gate, Lit, Sig};
pub use decode::{canonical_assignment, decode_model, Assignment, Decoded};
pub use wcnf::{emit_wcnf, read_sidecar, write_sidecar, write_wcnf, Sidecar};

use circuit::CircuitBuilder;

pub const DEFAULT_MAX_VARS: usize = 10;

#[derive(Debug, Error, PartialEq)]
pub enum EncodeError {
    #[error("{n} variables exceed the encoder limit of {limit}")]
    TooManyVariables { n: usize, limit: usize },
    #[error("score table has no entry for {0}")]
    MissingEntry(NodeSet),
    #[error("clique {0} is not a candidate of this encoding")]
    NotRepresentable(NodeSet),
    #[error("cliques {0} and {1} do not intersect, so they cannot share a forest edge")]
    NotAnEdge(NodeSet, NodeSet),
    #[error("assignment has {found} variables, encoding has {expected}")]
    AssignmentSize { expected: usize, found: usize },
    #[error("hard clause {index} ({kind}) is violated: {clause:?}")]
    HardClauseViolated {
        index: usize,
        kind: ClauseKind,
        clause: Vec<Lit>,
    },
    #[error("decoded network fails verification: {0}")]
    Verification(StructureReport),
    #[error("model objective {objective} differs from network score {score}")]
    ObjectiveMismatch { objective: i64, score: i64 },
    #[error("sidecar line {line}: {message}")]
    Sidecar { line: usize, message: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClauseKind {
    Coverage,
    Antichain,
    EdgeDefinition,
    NonExtendable,
    Chordality,
    SeparatorSupport,
    Balancing,
    Acyclicity,
}

impl ClauseKind {
    pub const ALL: [ClauseKind; 8] = [
        ClauseKind::Coverage,
        ClauseKind::Antichain,
        ClauseKind::EdgeDefinition,
        ClauseKind::NonExtendable,
        ClauseKind::Chordality,
        ClauseKind::SeparatorSupport,
        ClauseKind::Balancing,
        ClauseKind::Acyclicity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ClauseKind::Coverage => "coverage",
            ClauseKind::Antichain => "antichain",
            ClauseKind::EdgeDefinition => "edge-definition",
            ClauseKind::NonExtendable => "non-extendable",
            ClauseKind::Chordality => "chordality",
            ClauseKind::SeparatorSupport => "separator-support",
            ClauseKind::Balancing => "balancing",
            ClauseKind::Acyclicity => "acyclicity",
        }
    }
}

impl fmt::Display for ClauseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClauseRange {
    pub kind: ClauseKind,
    pub start: usize,
    pub len: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EncoderConfig {
    pub max_vars: usize,
}

impl Default for EncoderConfig {
    fn default() -> Self {
        EncoderConfig {
            max_vars: DEFAULT_MAX_VARS,
        }
    }
}

/// Numbering of the logical variables. Deterministic in `(n_vars, cap)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarMap {
    n_vars: usize,
    candidates: Vec<NodeSet>,
    index: HashMap<NodeSet, usize>,
    pairs: Vec<(usize, usize)>,
    pair_index: HashMap<(usize, usize), usize>,
    incident: Vec<Vec<(usize, usize)>>,
    top_level: usize,
    edge_base: Lit,
    sep_base: Lit,
    leaf_base: Lit,
    first_aux: Lit,
}

impl VarMap {
    pub fn new(n_vars: usize, cap: usize) -> Self {
        let candidates = NodeSet::all_nonempty(n_vars, cap);
        let index: HashMap<NodeSet, usize> =
            candidates.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let m = candidates.len();
        let mut pairs = Vec::new();
        let mut incident = vec![Vec::new(); m];
        for a in 0..m {
            for b in a + 1..m {
                if candidates[a].intersects(candidates[b]) {
                    incident[a].push((b, pairs.len()));
                    incident[b].push((a, pairs.len()));
                    pairs.push((a, b));
                }
            }
        }
        let pair_index = pairs.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        let top_level = m / 2;
        let edge_base = 1 + m as Lit;
        let sep_base = edge_base + (n_vars * n_vars.saturating_sub(1) / 2) as Lit;
        let leaf_base = sep_base + pairs.len() as Lit;
        let first_aux = leaf_base + (m * (top_level + 1)) as Lit;
        VarMap {
            n_vars,
            candidates,
            index,
            pairs,
            pair_index,
            incident,
            top_level,
            edge_base,
            sep_base,
            leaf_base,
            first_aux,
        }
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn candidates(&self) -> &[NodeSet] {
        &self.candidates
    }

    pub fn candidate_index(&self, c: NodeSet) -> Option<usize> {
        self.index.get(&c).copied()
    }

    /// Intersecting candidate pairs `(a, b)`, `a < b`, in `s` order.
    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn pair_index(&self, a: usize, b: usize) -> Option<usize> {
        let key = if a < b { (a, b) } else { (b, a) };
        self.pair_index.get(&key).copied()
    }

    /// `(neighbour, pair index)` for every candidate intersecting `c`.
    pub fn incident(&self, c: usize) -> &[(usize, usize)] {
        &self.incident[c]
    }

    /// `⌊m/2⌋` for `m` candidates.
    pub fn top_level(&self) -> usize {
        self.top_level
    }

    pub fn x(&self, c: usize) -> Lit {
        debug_assert!(c < self.candidates.len());
        1 + c as Lit
    }

    pub fn e(&self, i: usize, j: usize) -> Lit {
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        debug_assert!(j < self.n_vars && i != j);
        let n = self.n_vars;
        let rank = i * n - i * (i + 1) / 2 + (j - i - 1);
        self.edge_base + rank as Lit
    }

    pub fn s(&self, pair: usize) -> Lit {
        self.sep_base + pair as Lit
    }

    pub fn leaf(&self, c: usize, level: usize) -> Lit {
        debug_assert!(level <= self.top_level);
        self.leaf_base + (c * (self.top_level + 1) + level) as Lit
    }

    /// First variable index not owned by a logical variable.
    pub fn first_aux(&self) -> Lit {
        self.first_aux
    }
}

/// A weighted MaxSAT instance plus what is needed to read models back.
#[derive(Debug, Clone)]
pub struct Encoding {
    pub varmap: VarMap,
    pub hard: ClauseDb,
    pub sections: Vec<ClauseRange>,
    pub soft: Vec<(Vec<Lit>, u64)>,
    /// Objective of an assignment is `offset − (weight of falsified soft clauses)`.
    pub offset: i64,
    pub gates: Vec<Gate>,
    pub var_count: usize,
}

impl Encoding {
    pub fn section(&self, kind: ClauseKind) -> Option<ClauseRange> {
        self.sections.iter().copied().find(|s| s.kind == kind)
    }

    pub fn section_len(&self, kind: ClauseKind) -> usize {
        self.section(kind).map_or(0, |s| s.len)
    }

    pub fn kind_of(&self, clause_index: usize) -> Option<ClauseKind> {
        self.sections
            .iter()
            .find(|s| (s.start..s.start + s.len).contains(&clause_index))
            .map(|s| s.kind)
    }

    pub fn soft_weight_sum(&self) -> u64 {
        self.soft.iter().map(|(_, w)| w).sum()
    }

    /// `offset − (weight of falsified soft clauses)`.
    pub fn objective(&self, a: &Assignment) -> i64 {
        let falsified: u64 = self
            .soft
            .iter()
            .filter(|(c, _)| !a.satisfies(c))
            .map(|(_, w)| w)
            .sum();
        self.offset - falsified as i64
    }

    /// Index of the first violated hard clause.
    pub fn first_violated(&self, a: &Assignment) -> Option<usize> {
        self.hard.iter().position(|c| !a.satisfies(c))
    }

    /// Indices of violated hard clauses of one kind.
    pub fn violated_in(&self, kind: ClauseKind, a: &Assignment) -> Vec<usize> {
        match self.section(kind) {
            None => Vec::new(),
            Some(r) => (r.start..r.start + r.len)
                .filter(|&i| !a.satisfies(self.hard.get(i)))
                .collect(),
        }
    }
}

/// Cycles through every node of `subset` (at least 3 nodes), each
/// undirected cycle once: the smallest node starts and the second node is
/// smaller than the last.
pub fn chordality_cycles(subset: &[usize]) -> Vec<Vec<usize>> {
    fn permute(rest: &mut Vec<usize>, k: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == rest.len() {
            if prefix[1] < prefix[prefix.len() - 1] {
                out.push(prefix.clone());
            }
            return;
        }
        for i in k..rest.len() {
            rest.swap(k, i);
            prefix.push(rest[k]);
            permute(rest, k + 1, prefix, out);
            prefix.pop();
            rest.swap(k, i);
        }
    }
    let mut sorted = subset.to_vec();
    sorted.sort_unstable();
    let mut out = Vec::new();
    if sorted.len() < 3 {
        return out;
    }
    let mut prefix = vec![sorted[0]];
    let mut rest = sorted[1..].to_vec();
    permute(&mut rest, 0, &mut prefix, &mut out);
    out.sort();
    out
}

pub fn build_encoding(table: &IntScoreTable) -> Result<Encoding, EncodeError> {
    build_encoding_with(table, &EncoderConfig::default())
}

pub fn build_encoding_with(
    table: &IntScoreTable,
    config: &EncoderConfig,
) -> Result<Encoding, EncodeError> {
    let n = table.n_vars();
    if n > config.max_vars {
        return Err(EncodeError::TooManyVariables {
            n,
            limit: config.max_vars,
        });
    }
    let vm = VarMap::new(n, table.max_subset_size());
    let weights: Vec<i64> = vm
        .candidates()
        .iter()
        .map(|&c| table.score(c).ok_or(EncodeError::MissingEntry(c)))
        .collect::<Result<_, _>>()?;

    let mut b = CircuitBuilder::new(vm.first_aux());
    let mut sections = Vec::new();
    let mut section = |b: &CircuitBuilder, kind: ClauseKind, start: usize| {
        sections.push(ClauseRange {
            kind,
            start,
            len: b.clauses.len() - start,
        });
    };
    let cands = vm.candidates().to_vec();

    // Every node lies in some chosen clique.
    let start = b.clauses.len();
    for node in 0..n {
        let clause: Vec<Lit> = (0..cands.len())
            .filter(|&c| cands[c].contains(node))
            .map(|c| vm.x(c))
            .collect();
        b.add(&clause);
    }
    section(&b, ClauseKind::Coverage, start);

    // No chosen clique inside another.
    let start = b.clauses.len();
    for big in 0..cands.len() {
        for small in 0..big {
            if cands[small].is_strict_subset(cands[big]) {
                b.add(&[-vm.x(small), -vm.x(big)]);
            }
        }
    }
    section(&b, ClauseKind::Antichain, start);

    // e_{i,j} ↔ some chosen clique contains {i, j}.
    let start = b.clauses.len();
    for (i, j) in crate::chordal::Graph::pairs(n) {
        let pair = NodeSet::from_indices([i, j]);
        let covering: Vec<usize> = (0..cands.len())
            .filter(|&c| pair.is_subset(cands[c]))
            .collect();
        let e = vm.e(i, j);
        let mut clause = vec![-e];
        clause.extend(covering.iter().map(|&c| vm.x(c)));
        b.add(&clause);
        for &c in &covering {
            b.add(&[-vm.x(c), e]);
        }
    }
    section(&b, ClauseKind::EdgeDefinition, start);

    // A chosen clique cannot be extended by an outside node.
    let start = b.clauses.len();
    for (c, &set) in cands.iter().enumerate() {
        for outside in 0..n {
            if set.contains(outside) {
                continue;
            }
            let mut clause = vec![-vm.x(c)];
            clause.extend(set.iter().map(|i| -vm.e(i, outside)));
            b.add(&clause);
        }
    }
    section(&b, ClauseKind::NonExtendable, start);

    // Every cycle of length >= 4 has a chord.
    let start = b.clauses.len();
    for subset in NodeSet::all_nonempty(n, n).into_iter().filter(|s| s.len() >= 4) {
        let members = subset.to_vec();
        for cycle in chordality_cycles(&members) {
            let k = cycle.len();
            let mut clause = Vec::with_capacity(k * (k - 1) / 2);
            for p in 0..k {
                clause.push(-vm.e(cycle[p], cycle[(p + 1) % k]));
            }
            for p in 0..k {
                for q in p + 2..k {
                    if p == 0 && q == k - 1 {
                        continue;
                    }
                    clause.push(vm.e(cycle[p], cycle[q]));
                }
            }
            b.add(&clause);
        }
    }
    section(&b, ClauseKind::Chordality, start);

    // s_{c,c'} → x_c ∧ x_{c'}.
    let start = b.clauses.len();
    for (p, &(c, d)) in vm.pairs().iter().enumerate() {
        b.add(&[-vm.s(p), vm.x(c)]);
        b.add(&[-vm.s(p), vm.x(d)]);
    }
    section(&b, ClauseKind::SeparatorSupport, start);

    // Chosen cliques containing a node = 1 + chosen separators containing it.
    let start = b.clauses.len();
    for node in 0..n {
        let left: Vec<Lit> = (0..cands.len())
            .filter(|&c| cands[c].contains(node))
            .map(|c| vm.x(c))
            .collect();
        let right: Vec<Lit> = vm
            .pairs()
            .iter()
            .enumerate()
            .filter(|(_, &(c, d))| cands[c].intersection(cands[d]).contains(node))
            .map(|(p, _)| vm.s(p))
            .collect();
        b.count_equality(&left, &right, 1);
    }
    section(&b, ClauseKind::Balancing, start);

    // Leaf levels: level 0 has at most one neighbour; level l+1 has at most
    // one neighbour that is not a level-l leaf; everything is a top-level leaf.
    let start = b.clauses.len();
    let top = vm.top_level();
    for c in 0..cands.len() {
        let incident: Vec<Lit> = vm.incident(c).iter().map(|&(_, p)| vm.s(p)).collect();
        b.at_most(&incident, 1, Some(-vm.leaf(c, 0)));
        for level in 0..top {
            let blocking: Vec<Lit> = vm
                .incident(c)
                .iter()
                .map(|&(d, p)| b.and_indicator(vm.s(p), -vm.leaf(d, level)))
                .collect();
            b.at_most(&blocking, 1, Some(-vm.leaf(c, level + 1)));
        }
        b.add(&[vm.leaf(c, top)]);
    }
    section(&b, ClauseKind::Acyclicity, start);

    // Objective terms: +v(c) per chosen clique, −v(c∩c') per chosen
    // separator edge. A term t·[lit] becomes soft (¬lit, −t) when t < 0 and
    // soft (lit, t) with t added to the offset when t > 0.
    let mut soft = Vec::new();
    let mut offset: i64 = 0;
    let mut term = |lit: Lit, t: i64, soft: &mut Vec<(Vec<Lit>, u64)>| match t.cmp(&0) {
        std::cmp::Ordering::Less => soft.push((vec![-lit], t.unsigned_abs())),
        std::cmp::Ordering::Greater => {
            soft.push((vec![lit], t as u64));
            offset += t;
        }
        std::cmp::Ordering::Equal => {}
    };
    for (c, &w) in weights.iter().enumerate() {
        term(vm.x(c), w, &mut soft);
    }
    for (p, &(c, d)) in vm.pairs().iter().enumerate() {
        let label = cands[c].intersection(cands[d]);
        let w = table.score(label).ok_or(EncodeError::MissingEntry(label))?;
        term(vm.s(p), -w, &mut soft);
    }

    let var_count = b.var_count();
    Ok(Encoding {
        varmap: vm,
        hard: b.clauses,
        sections,
        soft,
        offset,
        gates: b.gates,
        var_count,
    })
}
