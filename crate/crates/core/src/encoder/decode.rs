use super::circuit::CircuitBuilder;
use super::{EncodeError, Encoding, Lit};
use crate::chordal::{check_structure, ChordalNetwork, CliqueEdge, SpanningForest};
use crate::nodeset::NodeSet;
use crate::scoring::{network_score, IntScoreTable, ScoreError};

/// Total truth assignment; index 0 is unused.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment(Vec<bool>);

impl Assignment {
    pub fn all_false(var_count: usize) -> Self {
        Assignment(vec![false; var_count + 1])
    }

    /// From signed literals; unmentioned variables are false and literals
    /// beyond `var_count` are ignored.
    pub fn from_literals(var_count: usize, lits: impl IntoIterator<Item = Lit>) -> Self {
        let mut a = Assignment::all_false(var_count);
        for l in lits {
            let v = l.unsigned_abs() as usize;
            if l != 0 && v <= var_count {
                a.0[v] = l > 0;
            }
        }
        a
    }

    pub fn var_count(&self) -> usize {
        self.0.len() - 1
    }

    pub fn value(&self, var: usize) -> bool {
        self.0[var]
    }

    pub fn set(&mut self, var: usize, value: bool) {
        self.0[var] = value;
    }

    pub fn lit(&self, l: Lit) -> bool {
        let v = self.0[l.unsigned_abs() as usize];
        if l > 0 {
            v
        } else {
            !v
        }
    }

    pub fn satisfies(&self, clause: &[Lit]) -> bool {
        clause.iter().any(|&l| self.lit(l))
    }

    /// Signed literal list `1..=var_count`.
    pub fn to_literals(&self) -> Vec<Lit> {
        (1..self.0.len())
            .map(|v| if self.0[v] { v as Lit } else { -(v as Lit) })
            .collect()
    }
}

/// Sets every variable of `enc` to the value forced by a network: chosen
/// cliques, their edges, forest edges, true leaf levels, and all circuit
/// auxiliaries.
pub fn canonical_assignment(net: &ChordalNetwork, enc: &Encoding) -> Result<Assignment, EncodeError> {
    let vm = &enc.varmap;
    let mut a = Assignment::all_false(enc.var_count);
    let mut chosen = Vec::with_capacity(net.cliques.len());
    for &c in &net.cliques {
        let idx = vm.candidate_index(c).ok_or(EncodeError::NotRepresentable(c))?;
        chosen.push(idx);
        a.set(vm.x(idx) as usize, true);
        for i in c.iter() {
            for j in c.iter().filter(|&j| j > i) {
                a.set(vm.e(i, j) as usize, true);
            }
        }
    }
    let m = vm.candidates().len();
    let mut neighbours = vec![Vec::new(); m];
    for edge in &net.forest.edges {
        let (ca, cb) = (net.cliques[edge.a], net.cliques[edge.b]);
        let (ia, ib) = (chosen[edge.a], chosen[edge.b]);
        let p = vm.pair_index(ia, ib).ok_or(EncodeError::NotAnEdge(ca, cb))?;
        a.set(vm.s(p) as usize, true);
        neighbours[ia].push(ib);
        neighbours[ib].push(ia);
    }

    let mut leaf: Vec<bool> = neighbours.iter().map(|n| n.len() <= 1).collect();
    for level in 0..=vm.top_level() {
        if level > 0 {
            leaf = (0..m)
                .map(|c| neighbours[c].iter().filter(|&&d| !leaf[d]).count() <= 1)
                .collect();
        }
        for (c, &is_leaf) in leaf.iter().enumerate() {
            a.set(vm.leaf(c, level) as usize, is_leaf);
        }
    }

    CircuitBuilder::evaluate_gates(&enc.gates, &mut a.0);
    Ok(a)
}

/// A verified network read from a model, with its integer objective.
#[derive(Debug, Clone, PartialEq)]
pub struct Decoded {
    /// `score` holds the integer network score as a float.
    pub network: ChordalNetwork,
    pub objective: i64,
}

/// Reads the chosen cliques and forest edges from a model and re-verifies
/// them with the chordal module. Any violated hard clause, failed check or
/// objective mismatch is an error.
pub fn decode_model(
    enc: &Encoding,
    a: &Assignment,
    table: &IntScoreTable,
) -> Result<Decoded, EncodeError> {
    if a.var_count() != enc.var_count {
        return Err(EncodeError::AssignmentSize {
            expected: enc.var_count,
            found: a.var_count(),
        });
    }
    if let Some(index) = enc.first_violated(a) {
        return Err(EncodeError::HardClauseViolated {
            index,
            kind: enc.kind_of(index).expect("every clause has a section"),
            clause: enc.hard.get(index).to_vec(),
        });
    }
    let vm = &enc.varmap;
    let mut position = vec![usize::MAX; vm.candidates().len()];
    let mut cliques = Vec::new();
    for (idx, &c) in vm.candidates().iter().enumerate() {
        if a.lit(vm.x(idx)) {
            position[idx] = cliques.len();
            cliques.push(c);
        }
    }
    let mut edges = Vec::new();
    for (p, &(ia, ib)) in vm.pairs().iter().enumerate() {
        if a.lit(vm.s(p)) {
            let (pa, pb) = (position[ia], position[ib]);
            let label: NodeSet = vm.candidates()[ia].intersection(vm.candidates()[ib]);
            edges.push(CliqueEdge {
                a: pa.min(pb),
                b: pa.max(pb),
                label,
            });
        }
    }
    let forest = SpanningForest { edges };
    let report = check_structure(vm.n_vars(), &cliques, &forest);
    if !report.all_pass() {
        return Err(EncodeError::Verification(report));
    }
    let score = network_score(table, &cliques, &crate::chordal::separators_of(&forest))
        .map_err(|e| match e {
            ScoreError::MissingEntry(s) => EncodeError::MissingEntry(s),
            other => unreachable!("network_score only reports missing entries: {other}"),
        })?;
    let objective = enc.objective(a);
    if objective != score {
        return Err(EncodeError::ObjectiveMismatch { objective, score });
    }
    Ok(Decoded {
        network: ChordalNetwork {
            n_vars: vm.n_vars(),
            cliques,
            forest,
            score: score as f64,
        },
        objective,
    })
}
