mod common;

use std::collections::BTreeSet;

use chordnet::chordal::{check_structure, clique_graph, junction_forest, separators_of, ChordalNetwork, SpanningForest};
use chordnet::encoder::{
    build_encoding, canonical_assignment, chordality_cycles, decode_model, Assignment, ClauseKind, Encoding, Lit,
};
use chordnet::scoring::{network_score, IntScoreTable};
use chordnet::solve::{exhaustive_optimum, OracleOptions};
use chordnet::NodeSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn network(g: &chordnet::chordal::Graph, t: &IntScoreTable) -> ChordalNetwork {
    let (cliques, forest) = junction_forest(g).unwrap();
    let score = network_score(t, &cliques, &separators_of(&forest)).unwrap();
    ChordalNetwork {
        n_vars: g.n(),
        cliques,
        forest,
        score: score as f64,
    }
}

fn sorted_labels(f: &SpanningForest) -> Vec<NodeSet> {
    let mut l = separators_of(f);
    l.sort();
    l
}

#[test]
fn canonical_assignments_are_models_up_to_five_nodes() {
    for n in 1..=5 {
        let t = common::random_int_table(n, n as u64);
        let enc = build_encoding(&t).unwrap();
        let mut graphs = 0;
        for g in common::all_graphs(n) {
            if junction_forest(&g).is_err() {
                continue;
            }
            graphs += 1;
            let net = network(&g, &t);
            let a = canonical_assignment(&net, &enc).unwrap();
            assert_eq!(enc.first_violated(&a), None, "n={n} {g:?}");
            assert_eq!(enc.objective(&a), net.score as i64);
            let d = decode_model(&enc, &a, &t).unwrap();
            assert_eq!(d.network.cliques, net.cliques);
            assert_eq!(sorted_labels(&d.network.forest), sorted_labels(&net.forest));
        }
        assert_eq!(graphs, [0, 1, 2, 8, 61, 822][n]);
    }
}

/// An undirected cycle as its set of edges.
fn cycle_edges(c: &[usize]) -> BTreeSet<(usize, usize)> {
    (0..c.len())
        .map(|i| {
            let (a, b) = (c[i], c[(i + 1) % c.len()]);
            (a.min(b), a.max(b))
        })
        .collect()
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let x = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

#[test]
fn every_cycle_is_emitted_exactly_once() {
    for nodes in [vec![0, 1, 2, 3], vec![1, 4, 6, 7, 9], vec![0, 2, 3, 5, 8, 9]] {
        let all: BTreeSet<_> = permutations(&nodes).iter().map(|p| cycle_edges(p)).collect();
        let emitted: Vec<_> = chordality_cycles(&nodes).iter().map(|c| cycle_edges(c)).collect();
        let distinct: BTreeSet<_> = emitted.iter().cloned().collect();
        assert_eq!(distinct.len(), emitted.len(), "duplicates for {nodes:?}");
        assert_eq!(distinct, all);
        let k = nodes.len();
        assert_eq!(emitted.len(), (1..k).product::<usize>() / 2);
    }
}

#[test]
fn numbering_and_clauses_are_deterministic() {
    let t = common::random_int_table(4, 3);
    let a = build_encoding(&t).unwrap();
    let b = build_encoding(&t).unwrap();
    assert_eq!(a.varmap, b.varmap);
    assert_eq!(a.hard, b.hard);
    assert_eq!(a.sections, b.sections);
    assert_eq!(a.gates, b.gates);
    // Numbering depends on (n, cap) only, not on the weights.
    let c = build_encoding(&common::random_int_table(4, 99)).unwrap();
    assert_eq!(a.varmap, c.varmap);
    assert_eq!(a.hard, c.hard);
}

fn section_clauses(enc: &Encoding, kind: ClauseKind) -> Vec<Vec<Lit>> {
    let r = enc.section(kind).unwrap();
    (r.start..r.start + r.len).map(|i| enc.hard.get(i).to_vec()).collect()
}

fn has_cycle(m: usize, edges: &[(usize, usize)]) -> bool {
    let mut comp: Vec<usize> = (0..m).collect();
    fn find(c: &mut [usize], x: usize) -> usize {
        if c[x] != x {
            let r = find(c, c[x]);
            c[x] = r;
        }
        c[x]
    }
    for &(a, b) in edges {
        let (ra, rb) = (find(&mut comp, a), find(&mut comp, b));
        if ra == rb {
            return true;
        }
        comp[ra] = rb;
    }
    false
}

#[test]
fn leaf_levels_accept_forests_and_reject_cycles() {
    let t = common::random_int_table(3, 5);
    let enc = build_encoding(&t).unwrap();
    let vm = &enc.varmap;
    let acyclic = section_clauses(&enc, ClauseKind::Acyclicity);
    let m = vm.candidates().len();
    let n_pairs = vm.pairs().len();
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let (mut cyclic_seen, mut forest_seen) = (0, 0);
    for trial in 0..300 {
        let size = 1 + trial % 6;
        let mut chosen = BTreeSet::new();
        while chosen.len() < size {
            chosen.insert(rng.random_range(0..n_pairs));
        }
        let mut clauses = acyclic.clone();
        for p in 0..n_pairs {
            let s = vm.s(p);
            clauses.push(vec![if chosen.contains(&p) { s } else { -s }]);
        }
        let edges: Vec<(usize, usize)> = chosen.iter().map(|&p| vm.pairs()[p]).collect();
        let cyclic = has_cycle(m, &edges);
        assert_eq!(common::satisfiable(&clauses), !cyclic, "{edges:?}");
        if cyclic {
            cyclic_seen += 1;
        } else {
            forest_seen += 1;
        }
    }
    assert!(cyclic_seen > 20 && forest_seen > 20);

    // Planted triangle {0}, {0,1}, {0,2}: all pairwise intersecting.
    let idx = |ix: &[usize]| vm.candidate_index(NodeSet::from_indices(ix.iter().copied())).unwrap();
    let tri = [idx(&[0]), idx(&[0, 1]), idx(&[0, 2])];
    let pair = |a: usize, b: usize| vm.s(vm.pair_index(a, b).unwrap());
    let mut clauses = acyclic.clone();
    clauses.push(vec![pair(tri[0], tri[1])]);
    clauses.push(vec![pair(tri[1], tri[2])]);
    clauses.push(vec![pair(tri[0], tri[2])]);
    assert!(!common::satisfiable(&clauses));
    clauses.pop();
    assert!(common::satisfiable(&clauses));
}

/// Number of balanced spanning forests of a chordal graph's clique graph,
/// by brute force over edge subsets.
fn junction_forest_count(g: &chordnet::chordal::Graph) -> usize {
    let (cliques, best) = junction_forest(g).unwrap();
    let cg = clique_graph(&cliques).unwrap();
    let k = best.edges.len();
    (0u32..1 << cg.edges.len())
        .filter(|m| m.count_ones() as usize == k)
        .filter(|&m| {
            let edges = (0..cg.edges.len())
                .filter(|&i| m >> i & 1 == 1)
                .map(|i| cg.edges[i])
                .collect();
            check_structure(g.n(), &cliques, &SpanningForest { edges }).all_pass()
        })
        .count()
}

#[test]
fn every_model_decodes_to_a_network_up_to_four_nodes() {
    for n in 1..=4 {
        let t = common::random_int_table(n, 40 + n as u64);
        let enc = build_encoding(&t).unwrap();
        let vm = &enc.varmap;
        let mut project: Vec<Lit> = (0..vm.candidates().len()).map(|c| vm.x(c)).collect();
        project.extend((0..vm.pairs().len()).map(|p| vm.s(p)));
        let models = common::projected_models(&enc.hard.to_vecs(), &project, 100_000);

        let expected: usize = common::all_graphs(n)
            .filter(|g| junction_forest(g).is_ok())
            .map(|g| junction_forest_count(&g))
            .sum();
        assert_eq!(models.len(), expected, "n = {n}");

        let mut best = i64::MIN;
        let mut graphs = BTreeSet::new();
        for m in &models {
            let a = Assignment::from_literals(enc.var_count, m.iter().copied());
            let d = decode_model(&enc, &a, &t).unwrap_or_else(|e| panic!("n={n}: {e}"));
            best = best.max(d.objective);
            graphs.insert(d.network.graph().edges());
        }
        assert_eq!(graphs.len(), [0, 1, 2, 8, 61][n]);
        let oracle = exhaustive_optimum(&t, OracleOptions::default()).unwrap();
        assert_eq!(best, oracle.value, "n = {n}");
    }
}
