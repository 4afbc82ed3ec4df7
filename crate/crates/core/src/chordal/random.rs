use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Graph;
use crate::nodeset::NodeSet;

/// Random chordal graph: an Erdős–Rényi graph with edge probability
/// `density`, triangulated by eliminating nodes in a random order and
/// joining each node's remaining neighbours. That order is a perfect
/// elimination ordering of the result.
pub fn random_chordal(n: usize, density: f64, seed: u64) -> Graph {
    assert!(n >= 1, "random_chordal needs at least one node");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = Graph::empty(n);
    for (i, j) in Graph::pairs(n) {
        if rng.random::<f64>() < density {
            g.add_edge(i, j);
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    let mut remaining = NodeSet::full(n);
    for v in order {
        remaining = remaining.difference(NodeSet::singleton(v));
        let later = g.neighbors(v).intersection(remaining);
        for a in later.iter() {
            for b in later.iter().filter(|&b| b > a) {
                g.add_edge(a, b);
            }
        }
    }
    g
}
