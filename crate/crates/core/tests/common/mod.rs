#![allow(dead_code)]

use std::collections::BTreeMap;

use chordnet::chordal::{random_chordal, CliqueEdge, Graph, SpanningForest};
use chordnet::dataset::{Dataset, VariableSpec};
use chordnet::scoring::IntScoreTable;
use chordnet::NodeSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Seeded random chordal graphs with n in [2, 12] and varied density.
pub fn chordal_corpus(count: u64) -> Vec<Graph> {
    const DENSITIES: [f64; 5] = [0.1, 0.2, 0.35, 0.5, 0.75];
    (0..count)
        .map(|seed| {
            let n = 2 + ((seed * 7) % 11) as usize;
            random_chordal(n, DENSITIES[(seed % 5) as usize], 10_000 + seed)
        })
        .collect()
}

/// Binary dataset where each column copies its predecessor with
/// probability `link`, so optimal networks are nontrivial.
pub fn chain_dataset(n: usize, rows: usize, link: f64, seed: u64) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let data: Vec<Vec<u32>> = (0..rows)
        .map(|_| {
            let mut row = vec![rng.random_range(0..2u32)];
            for i in 1..n {
                let v = if rng.random::<f64>() < link {
                    row[i - 1]
                } else {
                    rng.random_range(0..2)
                };
                row.push(v);
            }
            row
        })
        .collect();
    let vars = (0..n)
        .map(|i| VariableSpec {
            name: format!("v{i}"),
            arity: 2,
        })
        .collect();
    Dataset::new(vars, data).unwrap()
}

/// Integer table with arbitrary negative entries.
pub fn random_int_table(n: usize, seed: u64) -> IntScoreTable {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let entries: BTreeMap<NodeSet, i64> = NodeSet::all_nonempty(n, n)
        .into_iter()
        .map(|s| (s, -rng.random_range(1..200i64) * s.len() as i64))
        .collect();
    IntScoreTable::from_entries(n, n, 1000, entries).unwrap()
}

/// All graphs on `n` nodes.
pub fn all_graphs(n: usize) -> impl Iterator<Item = Graph> {
    (0u64..1 << (n * (n - 1) / 2)).map(move |m| Graph::from_edge_mask(n, m))
}

/// Definition-level chordality: no induced cycle on four or more nodes.
/// An induced subgraph is a chordless cycle iff it is connected and
/// 2-regular.
pub fn chordal_by_cycles(g: &Graph) -> bool {
    let n = g.n();
    NodeSet::all_nonempty(n, n)
        .into_iter()
        .filter(|s| s.len() >= 4)
        .all(|s| {
            let two_regular = s.iter().all(|v| g.neighbors(v).intersection(s).len() == 2);
            if !two_regular {
                return true;
            }
            // Connected?
            let start = s.iter().next().unwrap();
            let mut seen = NodeSet::singleton(start);
            let mut frontier = vec![start];
            while let Some(v) = frontier.pop() {
                for w in g.neighbors(v).intersection(s).iter() {
                    if !seen.contains(w) {
                        seen.insert(w);
                        frontier.push(w);
                    }
                }
            }
            seen != s
        })
}

/// Log marginal by the chain rule of Dirichlet-multinomial prediction,
/// one observation at a time, in cell order.
pub fn predictive_chain(cells: &[u64], a: f64) -> f64 {
    let alpha = a * cells.len() as f64;
    let mut seen = vec![0u64; cells.len()];
    let mut total = 0u64;
    let mut log_p = 0.0;
    for (j, &count) in cells.iter().enumerate() {
        for _ in 0..count {
            log_p += ((seen[j] as f64 + a) / (total as f64 + alpha)).ln();
            seen[j] += 1;
            total += 1;
        }
    }
    log_p
}

/// Every model of `clauses`, projected onto `project`, with one full
/// model per projection. Stops after `limit` projections.
pub fn projected_models(clauses: &[Vec<i32>], project: &[i32], limit: usize) -> Vec<Vec<i32>> {
    use varisat::{ExtendFormula, Lit, Solver};
    let mut solver = Solver::new();
    for c in clauses {
        let lits: Vec<Lit> = c.iter().map(|&l| Lit::from_dimacs(l as isize)).collect();
        solver.add_clause(&lits);
    }
    let mut out = Vec::new();
    while out.len() < limit && solver.solve().unwrap() {
        let model: Vec<i32> = solver
            .model()
            .unwrap()
            .iter()
            .map(|l| l.to_dimacs() as i32)
            .collect();
        let value = |v: i32| model.get(v as usize - 1).is_some_and(|&l| l > 0);
        let block: Vec<Lit> = project
            .iter()
            .map(|&v| Lit::from_dimacs(if value(v) { -v } else { v } as isize))
            .collect();
        out.push(model);
        if block.is_empty() {
            break;
        }
        solver.add_clause(&block);
    }
    out
}

pub fn satisfiable(clauses: &[Vec<i32>]) -> bool {
    !projected_models(clauses, &[], 1).is_empty()
}

/// Kruskal without sorting: keeps each edge, in the given order, that
/// joins two components.
pub fn greedy_forest(m: usize, edges: Vec<CliqueEdge>) -> SpanningForest {
    let mut comp: Vec<usize> = (0..m).collect();
    fn find(c: &mut [usize], x: usize) -> usize {
        if c[x] != x {
            let r = find(c, c[x]);
            c[x] = r;
        }
        c[x]
    }
    let mut out = Vec::new();
    for e in edges {
        let (ra, rb) = (find(&mut comp, e.a), find(&mut comp, e.b));
        if ra != rb {
            comp[ra] = rb;
            out.push(e);
        }
    }
    SpanningForest { edges: out }
}
