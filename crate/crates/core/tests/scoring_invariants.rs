mod common;

use chordnet::chordal::{junction_forest, separators_of};
use chordnet::dataset::{contingency, ContingencyTable};
use chordnet::scoring::{
    build_score_table, integer_scale, log_marginal, network_score, PriorSpec, ScoreTable, SubsetScores,
};
use chordnet::solve::{exhaustive_optimum, OracleOptions};
use chordnet::NodeSet;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn matches_predictive_chain(cells in prop::collection::vec(0u64..300, 2..=16), a in 0.05f64..4.0) {
        let t = ContingencyTable::from_cells(NodeSet::singleton(0), cells.clone());
        let ours = log_marginal(&t, PriorSpec::new(a).unwrap());
        let chain = common::predictive_chain(&cells, a);
        prop_assert!((ours - chain).abs() <= 1e-9 * chain.abs().max(1.0), "{ours} vs {chain}");
    }

    #[test]
    fn empty_table_scores_zero(k in 1usize..=64, a in 0.01f64..10.0) {
        let t = ContingencyTable::from_cells(NodeSet::singleton(0), vec![0; k]);
        prop_assert_eq!(log_marginal(&t, PriorSpec::new(a).unwrap()), 0.0);
    }

    #[test]
    fn contingency_adds_over_row_partitions(seed in any::<u64>(), split in 0usize..=120) {
        let d = common::chain_dataset(4, 120, 0.6, seed);
        let (head, tail) = d.rows().split_at(split);
        let part_a = d.with_rows(head.to_vec()).unwrap();
        let part_b = d.with_rows(tail.to_vec()).unwrap();
        for s in NodeSet::all_nonempty(4, 4) {
            let whole = contingency(&d, s).unwrap();
            let ca = contingency(&part_a, s).unwrap();
            let cb = contingency(&part_b, s).unwrap();
            let sum: Vec<u64> = ca.cells.iter().zip(&cb.cells).map(|(x, y)| x + y).collect();
            prop_assert_eq!(&whole.cells, &sum);
            prop_assert_eq!(whole.cells.iter().sum::<u64>(), 120);
        }
    }

    #[test]
    fn marginalizing_a_pair_gives_the_single(seed in any::<u64>()) {
        let d = common::chain_dataset(3, 80, 0.5, seed);
        // {0,2}: cells indexed (v0, v2), v2 fastest.
        let pair = contingency(&d, NodeSet::from_indices([0, 2])).unwrap();
        let single = contingency(&d, NodeSet::singleton(0)).unwrap();
        let summed: Vec<u64> = pair.cells.chunks(2).map(|c| c.iter().sum()).collect();
        prop_assert_eq!(summed, single.cells);
    }

    #[test]
    fn scores_ignore_row_order(seed in any::<u64>()) {
        let d = common::chain_dataset(4, 60, 0.7, seed);
        let mut rows = d.rows().to_vec();
        rows.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let shuffled = d.with_rows(rows).unwrap();
        let p = PriorSpec::default();
        prop_assert_eq!(build_score_table(&d, p, 4).unwrap(), build_score_table(&shuffled, p, 4).unwrap());
    }

    #[test]
    fn network_score_is_linear(seed in any::<u64>(), n in 1usize..=8, density in 0.0f64..1.0) {
        let d = common::chain_dataset(n, 50, 0.5, seed);
        let t = build_score_table(&d, PriorSpec::default(), n).unwrap();
        let doubled: ScoreTable = t.map(|v| 2.0 * v);
        let g = chordnet::chordal::random_chordal(n, density, seed);
        let (c, f) = junction_forest(&g).unwrap();
        let s = separators_of(&f);
        let one = network_score(&t, &c, &s).unwrap();
        let two = network_score(&doubled, &c, &s).unwrap();
        prop_assert!((two - 2.0 * one).abs() <= 1e-9 * one.abs().max(1.0));
    }
}

/// With the top network ahead of every other by more than the largest
/// possible rounding drift, scaling to integers keeps it on top.
#[test]
fn argmax_survives_integer_scaling() {
    let mut checked = 0;
    for seed in 0..40 {
        let n = 4 + (seed % 2) as usize;
        let d = common::chain_dataset(n, 150, 0.55, seed);
        let t = build_score_table(&d, PriorSpec::default(), n).unwrap();
        let mut scores: Vec<f64> = common::all_graphs(n)
            .filter_map(|g| junction_forest(&g).ok())
            .map(|(c, f)| network_score(&t, &c, &separators_of(&f)).unwrap())
            .collect();
        scores.sort_by(|a, b| b.partial_cmp(a).unwrap());
        // Each network drifts by at most (|C|+|S|)/2 units of 1/1000 and
        // |C|+|S| <= 2n-1, so a gap of (2n-1)/1000 cannot flip the order.
        let gap = scores[0] - scores[1];
        if gap <= (2 * n - 1) as f64 / 1000.0 {
            continue;
        }
        checked += 1;
        let real = exhaustive_optimum(&t, OracleOptions::default()).unwrap();
        let ints = integer_scale(&t, 1000).unwrap();
        let int = exhaustive_optimum(&ints, OracleOptions::default()).unwrap();
        assert_eq!(real.graph, int.graph, "seed {seed}");
        assert_eq!(ints.n_vars(), n);
    }
    assert!(checked >= 20, "only {checked} instances had a verified gap");
}
