use std::fmt;

use serde::{Deserialize, Serialize};

use super::{
    check_running_intersection, clique_graph, elimination_ordering, forest_is_acyclic,
    is_balanced, max_weight_spanning_forest, maximal_cliques, maximal_cliques_from_ordering,
    separators_of, ChordalError, Graph, SpanningForest,
};
use crate::nodeset::NodeSet;
use crate::scoring::{network_score, ScoreTable, SubsetScores};

/// Decomposable Markov network structure: maximal cliques joined by a
/// junction forest whose edge labels are the separators.
#[derive(Debug, Clone, PartialEq)]
pub struct ChordalNetwork {
    pub n_vars: usize,
    pub cliques: Vec<NodeSet>,
    pub forest: SpanningForest,
    /// Score under the table the network was built or decoded with.
    pub score: f64,
}

impl ChordalNetwork {
    pub fn separators(&self) -> Vec<NodeSet> {
        separators_of(&self.forest)
    }

    /// The graph whose edges are those of the cliques.
    pub fn graph(&self) -> Graph {
        Graph::from_cliques(self.n_vars, &self.cliques)
    }

    pub fn rescore<T: SubsetScores>(&self, table: &T) -> Result<T::Value, ChordalError> {
        Ok(network_score(table, &self.cliques, &self.separators())?)
    }
}

/// Maximal cliques and a maximum-weight spanning forest of the clique
/// graph for a chordal graph.
pub fn junction_forest(g: &Graph) -> Result<(Vec<NodeSet>, SpanningForest), ChordalError> {
    let order = elimination_ordering(g).ok_or(ChordalError::NotChordal)?;
    let cliques = maximal_cliques_from_ordering(g, &order);
    let cg = clique_graph(&cliques)?;
    Ok((cliques, max_weight_spanning_forest(&cg)))
}

pub fn network_from_graph(g: &Graph, table: &ScoreTable) -> Result<ChordalNetwork, ChordalError> {
    let (cliques, forest) = junction_forest(g)?;
    let score = network_score(table, &cliques, &separators_of(&forest))?;
    Ok(ChordalNetwork {
        n_vars: g.n(),
        cliques,
        forest,
        score,
    })
}

/// Outcome of each structural requirement on a network, computed from
/// scratch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureReport {
    /// Every variable lies in some clique.
    pub coverage: bool,
    /// No clique contains another, and the cliques are exactly the
    /// maximal cliques of the graph they induce.
    pub maximality: bool,
    pub chordality: bool,
    /// Forest edges join intersecting cliques, carry the intersection as
    /// label, and form no cycle.
    pub acyclicity: bool,
    pub balancing: bool,
    pub running_intersection: bool,
}

impl StructureReport {
    pub fn all_pass(&self) -> bool {
        self.coverage
            && self.maximality
            && self.chordality
            && self.acyclicity
            && self.balancing
            && self.running_intersection
    }

    pub fn failures(&self) -> Vec<&'static str> {
        [
            ("coverage", self.coverage),
            ("maximality", self.maximality),
            ("chordality", self.chordality),
            ("acyclicity", self.acyclicity),
            ("balancing", self.balancing),
            ("running-intersection", self.running_intersection),
        ]
        .into_iter()
        .filter(|(_, ok)| !ok)
        .map(|(name, _)| name)
        .collect()
    }
}

impl fmt::Display for StructureReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let failed = self.failures();
        if failed.is_empty() {
            f.write_str("all checks pass")
        } else {
            write!(f, "failed: {}", failed.join(", "))
        }
    }
}

/// Checks a clique list and forest against every structural requirement
/// without trusting how they were produced.
pub fn check_structure(
    n_vars: usize,
    cliques: &[NodeSet],
    forest: &SpanningForest,
) -> StructureReport {
    let in_range = cliques.iter().all(|c| !c.is_empty() && c.upper_bound() <= n_vars);
    let covered = cliques.iter().fold(NodeSet::EMPTY, |acc, &c| acc.union(c));
    let coverage = in_range && covered == NodeSet::full(n_vars);

    let antichain = cliques.iter().enumerate().all(|(i, &a)| {
        cliques
            .iter()
            .enumerate()
            .all(|(j, &b)| i == j || !a.is_subset(b))
    });
    let graph = in_range.then(|| Graph::from_cliques(n_vars, cliques));
    let maximality = antichain
        && graph.as_ref().is_some_and(|g| {
            let mut ours = cliques.to_vec();
            ours.sort();
            // Isolated variables outside every clique are not our concern here.
            let theirs: Vec<NodeSet> = maximal_cliques(g)
                .into_iter()
                .filter(|c| c.len() > 1 || covered.contains(c.iter().next().unwrap_or(0)))
                .collect();
            ours == theirs
        });
    let chordality = graph.as_ref().is_some_and(|g| elimination_ordering(g).is_some());

    let edges_valid = forest.edges.iter().all(|e| {
        e.a < e.b
            && e.b < cliques.len()
            && !e.label.is_empty()
            && e.label == cliques[e.a].intersection(cliques[e.b])
    });
    let acyclicity = edges_valid && forest_is_acyclic(cliques.len(), forest);
    let balancing = edges_valid && is_balanced(cliques, forest);
    let running_intersection = acyclicity && check_running_intersection(forest, cliques);

    StructureReport {
        coverage,
        maximality,
        chordality,
        acyclicity,
        balancing,
        running_intersection,
    }
}
