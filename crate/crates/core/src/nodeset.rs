//! Subsets of variable indices.

use std::cmp::Ordering;
use std::fmt;

/// Largest number of variables a [`NodeSet`] can address.
pub const MAX_VARS: usize = 30;

/// A set of variable indices stored as a bit vector.
///
/// The same type names clique candidates, separators and arbitrary
/// subsets. Ordering is by cardinality first and then lexicographic on
/// the ascending member list, which is the order score files use.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct NodeSet(u32);

impl NodeSet {
    pub const EMPTY: NodeSet = NodeSet(0);

    pub fn from_bits(bits: u32) -> Self {
        NodeSet(bits)
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn singleton(i: usize) -> Self {
        debug_assert!(i < MAX_VARS);
        NodeSet(1 << i)
    }

    /// `{0, 1, ..., n-1}`.
    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_VARS);
        if n == 0 {
            NodeSet(0)
        } else {
            NodeSet(u32::MAX >> (32 - n))
        }
    }

    /// Builds a set from indices; returns `None` if an index is out of range
    /// or repeated.
    pub fn try_from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Option<Self> {
        let mut bits = 0u32;
        for i in indices {
            if i >= MAX_VARS || bits & (1 << i) != 0 {
                return None;
            }
            bits |= 1 << i;
        }
        Some(NodeSet(bits))
    }

    /// Panics on out-of-range indices; duplicates are merged.
    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Self {
        let mut bits = 0u32;
        for i in indices {
            assert!(i < MAX_VARS, "index {i} exceeds the {MAX_VARS}-variable limit");
            bits |= 1 << i;
        }
        NodeSet(bits)
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, i: usize) -> bool {
        i < 32 && self.0 & (1 << i) != 0
    }

    pub fn insert(&mut self, i: usize) {
        debug_assert!(i < MAX_VARS);
        self.0 |= 1 << i;
    }

    pub fn with(self, i: usize) -> Self {
        NodeSet(self.0 | (1 << i))
    }

    pub fn union(self, other: NodeSet) -> Self {
        NodeSet(self.0 | other.0)
    }

    pub fn intersection(self, other: NodeSet) -> Self {
        NodeSet(self.0 & other.0)
    }

    pub fn difference(self, other: NodeSet) -> Self {
        NodeSet(self.0 & !other.0)
    }

    pub fn intersects(self, other: NodeSet) -> bool {
        self.0 & other.0 != 0
    }

    pub fn is_subset(self, other: NodeSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_strict_subset(self, other: NodeSet) -> bool {
        self != other && self.is_subset(other)
    }

    /// Largest member plus one, or 0 for the empty set.
    pub fn upper_bound(self) -> usize {
        32 - self.0.leading_zeros() as usize
    }

    pub fn iter(self) -> Members {
        Members(self.0)
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// All nonempty subsets of `{0..n}` with at most `cap` members, in
    /// canonical order.
    pub fn all_nonempty(n: usize, cap: usize) -> Vec<NodeSet> {
        assert!(n <= MAX_VARS);
        let cap = cap.min(n);
        let mut out = Vec::new();
        for k in 1..=cap {
            push_combinations(n, k, &mut out);
        }
        out
    }

    /// Nonempty strict subsets, in no particular order.
    pub fn strict_subsets(self) -> impl Iterator<Item = NodeSet> {
        let full = self.0;
        // Standard submask walk: sub = (sub - 1) & full.
        let mut sub = full;
        std::iter::from_fn(move || {
            if sub == 0 {
                return None;
            }
            sub = (sub - 1) & full;
            if sub == 0 {
                None
            } else {
                Some(NodeSet(sub))
            }
        })
    }
}

fn push_combinations(n: usize, k: usize, out: &mut Vec<NodeSet>) {
    // Lexicographic k-combinations of 0..n.
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(NodeSet::from_indices(idx.iter().copied()));
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] < n - k + i {
                break;
            }
            if i == 0 {
                return;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

impl Ord for NodeSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.iter().cmp(other.iter()))
    }
}

impl PartialOrd for NodeSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for NodeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for NodeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

impl FromIterator<usize> for NodeSet {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        NodeSet::from_indices(iter)
    }
}

impl IntoIterator for NodeSet {
    type Item = usize;
    type IntoIter = Members;

    fn into_iter(self) -> Members {
        self.iter()
    }
}

/// Ascending iterator over the members of a [`NodeSet`].
#[derive(Clone)]
pub struct Members(u32);

impl Iterator for Members {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(i)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Members {}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_order_is_size_then_lex() {
        let sets = NodeSet::all_nonempty(3, 3);
        let lists: Vec<Vec<usize>> = sets.iter().map(|s| s.to_vec()).collect();
        assert_eq!(
            lists,
            vec![
                vec![0],
                vec![1],
                vec![2],
                vec![0, 1],
                vec![0, 2],
                vec![1, 2],
                vec![0, 1, 2]
            ]
        );
        let mut sorted = sets.clone();
        sorted.sort();
        assert_eq!(sorted, sets);
    }

    #[test]
    fn counts_match_binomials() {
        assert_eq!(NodeSet::all_nonempty(6, 6).len(), 63);
        assert_eq!(NodeSet::all_nonempty(8, 8).len(), 255);
        assert_eq!(NodeSet::all_nonempty(3, 2).len(), 6);
        assert_eq!(NodeSet::all_nonempty(6, 2).len(), 21);
        assert_eq!(NodeSet::all_nonempty(1, 1).len(), 1);
    }

    #[test]
    fn strict_subsets_of_triple() {
        let s = NodeSet::from_indices([0, 2, 4]);
        let mut subs: Vec<NodeSet> = s.strict_subsets().collect();
        subs.sort();
        assert_eq!(subs.len(), 6);
        assert!(subs.iter().all(|t| t.is_strict_subset(s)));
    }

    #[test]
    fn try_from_rejects_duplicates_and_range() {
        assert!(NodeSet::try_from_indices([1, 1]).is_none());
        assert!(NodeSet::try_from_indices([30]).is_none());
        assert_eq!(NodeSet::full(30).len(), 30);
    }
}
