//! Clause storage, variable allocation and sequential-counter circuits.

/// DIMACS literal: a nonzero variable index, negative for negation.
pub type Lit = i32;

/// Flat clause store.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ClauseDb {
    lits: Vec<Lit>,
    starts: Vec<usize>,
}

impl ClauseDb {
    pub fn push(&mut self, clause: &[Lit]) {
        self.starts.push(self.lits.len());
        self.lits.extend_from_slice(clause);
    }

    pub fn len(&self) -> usize {
        self.starts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.starts.is_empty()
    }

    pub fn get(&self, i: usize) -> &[Lit] {
        let end = self.starts.get(i + 1).copied().unwrap_or(self.lits.len());
        &self.lits[self.starts[i]..end]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[Lit]> + '_ {
        (0..self.len()).map(move |i| self.get(i))
    }

    pub fn literal_count(&self) -> usize {
        self.lits.len()
    }

    pub fn to_vecs(&self) -> Vec<Vec<Lit>> {
        self.iter().map(<[Lit]>::to_vec).collect()
    }
}

/// A signal in a circuit: a literal or a constant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sig {
    True,
    False,
    Lit(Lit),
}

impl Sig {
    pub fn eval(self, value: impl Fn(Lit) -> bool) -> bool {
        match self {
            Sig::True => true,
            Sig::False => false,
            Sig::Lit(l) => value(l),
        }
    }
}

/// Auxiliary variable defined as `same ∨ (lower ∧ input)`. Every counter
/// output and every indicator the encoder introduces has this shape, so an
/// assignment to the primary variables fixes all auxiliaries in order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Gate {
    pub var: Lit,
    pub same: Sig,
    pub lower: Sig,
    pub input: Lit,
}

/// Accumulates clauses and hands out fresh variables.
#[derive(Debug, Clone)]
pub struct CircuitBuilder {
    next_var: Lit,
    pub clauses: ClauseDb,
    pub gates: Vec<Gate>,
}

impl CircuitBuilder {
    /// `first_free` is the first unused variable index.
    pub fn new(first_free: Lit) -> Self {
        assert!(first_free >= 1);
        CircuitBuilder {
            next_var: first_free,
            clauses: ClauseDb::default(),
            gates: Vec::new(),
        }
    }

    pub fn fresh(&mut self) -> Lit {
        let v = self.next_var;
        self.next_var = v.checked_add(1).expect("variable index overflow");
        v
    }

    /// Number of variables allocated so far, primary ones included.
    pub fn var_count(&self) -> usize {
        (self.next_var - 1) as usize
    }

    pub fn add(&mut self, clause: &[Lit]) {
        self.clauses.push(clause);
    }

    /// Adds `guard ∨ clause`, or `clause` alone when unguarded.
    fn add_guarded(&mut self, guard: Option<Lit>, clause: &[Lit]) {
        match guard {
            None => self.add(clause),
            Some(g) => {
                let mut c = Vec::with_capacity(clause.len() + 1);
                c.push(g);
                c.extend_from_slice(clause);
                self.add(&c);
            }
        }
    }

    fn gate(&mut self, same: Sig, lower: Sig, input: Lit) -> Lit {
        let var = self.fresh();
        self.gates.push(Gate {
            var,
            same,
            lower,
            input,
        });
        var
    }

    /// Fresh `y` with `a ∧ b → y`.
    pub fn and_indicator(&mut self, a: Lit, b: Lit) -> Lit {
        let y = self.gate(Sig::False, Sig::Lit(a), b);
        self.add(&[-a, -b, y]);
        y
    }

    /// Sequential unary counter over `inputs`. Output `j` (1-based, up to
    /// `bound`) is true iff at least `j` inputs are true. With `exact` the
    /// outputs are tied in both directions, otherwise only upwards, which
    /// is enough for upper bounds. With `forbid_overflow`, more than
    /// `bound` true inputs is excluded (or-ed with the guard literal when
    /// given). Returns outputs `0..=min(len, bound)`, output 0 being the
    /// constant true.
    pub fn unary_counter(
        &mut self,
        inputs: &[Lit],
        bound: usize,
        exact: bool,
        forbid_overflow: Option<Option<Lit>>,
    ) -> Vec<Sig> {
        let mut prev: Vec<Sig> = vec![Sig::True];
        for (i, &x) in inputs.iter().enumerate() {
            if let (Some(guard), Some(&full)) = (forbid_overflow, prev.get(bound)) {
                match full {
                    Sig::True => self.add_guarded(guard, &[-x]),
                    Sig::Lit(f) => self.add_guarded(guard, &[-f, -x]),
                    Sig::False => {}
                }
            }
            let width = (i + 1).min(bound);
            let mut cur = Vec::with_capacity(width + 1);
            cur.push(Sig::True);
            for j in 1..=width {
                let same = prev.get(j).copied().unwrap_or(Sig::False);
                let lower = prev[j - 1];
                if (same, lower) == (Sig::False, Sig::True) {
                    // First input: the output is the input itself.
                    cur.push(Sig::Lit(x));
                    continue;
                }
                let out = self.gate(same, lower, x);
                // same → out
                if let Sig::Lit(s) = same {
                    self.add(&[-s, out]);
                }
                // lower ∧ x → out
                match lower {
                    Sig::True => self.add(&[-x, out]),
                    Sig::Lit(l) => self.add(&[-l, -x, out]),
                    Sig::False => {}
                }
                if exact {
                    // out → same ∨ lower
                    match (same, lower) {
                        (_, Sig::True) | (Sig::True, _) => {}
                        (Sig::Lit(s), Sig::Lit(l)) => self.add(&[-out, s, l]),
                        (Sig::False, Sig::Lit(l)) => self.add(&[-out, l]),
                        (Sig::Lit(s), Sig::False) => self.add(&[-out, s]),
                        (Sig::False, Sig::False) => self.add(&[-out]),
                    }
                    // out → same ∨ x
                    match same {
                        Sig::True => {}
                        Sig::Lit(s) => self.add(&[-out, s, x]),
                        Sig::False => self.add(&[-out, x]),
                    }
                }
                cur.push(Sig::Lit(out));
            }
            prev = cur;
        }
        prev
    }

    /// `guard ∨ (at most k of inputs)`.
    pub fn at_most(&mut self, inputs: &[Lit], k: usize, guard: Option<Lit>) {
        if inputs.len() <= k {
            return;
        }
        let (last, head) = inputs.split_last().expect("inputs longer than k");
        let prefix = self.unary_counter(head, k, false, Some(guard));
        match prefix.get(k) {
            Some(Sig::True) => self.add_guarded(guard, &[-last]),
            Some(&Sig::Lit(f)) => self.add_guarded(guard, &[-f, -last]),
            _ => {}
        }
    }

    /// `a ↔ b` over signals, folding constants.
    fn equate(&mut self, a: Sig, b: Sig) {
        match (a, b) {
            (Sig::True, Sig::True) | (Sig::False, Sig::False) => {}
            (Sig::True, Sig::False) | (Sig::False, Sig::True) => self.add(&[]),
            (Sig::True, Sig::Lit(l)) | (Sig::Lit(l), Sig::True) => self.add(&[l]),
            (Sig::False, Sig::Lit(l)) | (Sig::Lit(l), Sig::False) => self.add(&[-l]),
            (Sig::Lit(x), Sig::Lit(y)) => {
                if x != y {
                    self.add(&[-x, y]);
                    self.add(&[x, -y]);
                }
            }
        }
    }

    /// `count(left) = constant + count(right)`. An unsatisfiable bound
    /// yields the empty clause.
    pub fn count_equality(&mut self, left: &[Lit], right: &[Lit], constant: usize) {
        if constant > left.len() {
            self.add(&[]);
            return;
        }
        let right_bound = left.len() - constant;
        let lhs = self.unary_counter(left, left.len(), true, None);
        let rhs = self.unary_counter(right, right_bound, true, Some(None));
        for j in 0..=right_bound {
            let l = lhs.get(j + constant).copied().unwrap_or(Sig::False);
            let r = rhs.get(j).copied().unwrap_or(Sig::False);
            self.equate(l, r);
        }
    }

    /// Sets every gate variable from already-assigned inputs, in order.
    pub fn evaluate_gates(gates: &[Gate], values: &mut [bool]) {
        for g in gates {
            let lit = |l: Lit| {
                let v = values[l.unsigned_abs() as usize];
                if l > 0 {
                    v
                } else {
                    !v
                }
            };
            let same = g.same.eval(lit);
            let lower = g.lower.eval(lit);
            let input = lit(g.input);
            values[g.var as usize] = same || (lower && input);
        }
    }
}

/// Clauses asserting `count(left) = constant + count(right)`, built with
/// auxiliaries numbered from `first_aux`. Returns the clauses and the
/// number of auxiliaries used.
pub fn encode_cardinality(
    left: &[Lit],
    right: &[Lit],
    constant: usize,
    first_aux: Lit,
) -> (Vec<Vec<Lit>>, usize) {
    let mut b = CircuitBuilder::new(first_aux);
    b.count_equality(left, right, constant);
    let used = b.var_count() + 1 - first_aux as usize;
    (b.clauses.to_vecs(), used)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Brute force: does some extension of the primary assignment satisfy
    /// the clauses? Tiny instances only.
    fn satisfiable_with(clauses: &[Vec<Lit>], n_primary: usize, n_total: usize, mask: u32) -> bool {
        let aux = n_total - n_primary;
        (0u64..1 << aux).any(|a| {
            let val = |l: Lit| {
                let v = l.unsigned_abs() as usize;
                let bit = if v <= n_primary {
                    mask >> (v - 1) & 1 == 1
                } else {
                    a >> (v - n_primary - 1) & 1 == 1
                };
                if l > 0 {
                    bit
                } else {
                    !bit
                }
            };
            clauses.iter().all(|c| c.iter().any(|&l| val(l)))
        })
    }

    #[test]
    fn single_input_is_forced() {
        let (clauses, aux) = encode_cardinality(&[1], &[], 1, 2);
        assert_eq!(aux, 0);
        assert_eq!(clauses, vec![vec![1]]);
    }

    #[test]
    fn pair_is_exactly_one() {
        let (clauses, aux) = encode_cardinality(&[1, 2], &[], 1, 3);
        for mask in 0..4u32 {
            assert_eq!(
                satisfiable_with(&clauses, 2, 2 + aux, mask),
                mask.count_ones() == 1,
                "mask {mask:02b}"
            );
        }
    }

    #[test]
    fn impossible_bound_gives_empty_clause() {
        let (clauses, _) = encode_cardinality(&[], &[1], 1, 2);
        assert_eq!(clauses, vec![Vec::<Lit>::new()]);
    }

    #[test]
    fn equality_matches_brute_force() {
        for nl in 0..=4usize {
            for nr in 0..=4usize {
                for c in 0..=3usize {
                    let left: Vec<Lit> = (1..=nl as Lit).collect();
                    let right: Vec<Lit> = (nl as Lit + 1..=(nl + nr) as Lit).collect();
                    let n = nl + nr;
                    let (clauses, aux) = encode_cardinality(&left, &right, c, n as Lit + 1);
                    for mask in 0..1u32 << n {
                        let cl = (mask & ((1 << nl) - 1)).count_ones() as usize;
                        let cr = (mask >> nl).count_ones() as usize;
                        assert_eq!(
                            satisfiable_with(&clauses, n, n + aux, mask),
                            cl == c + cr,
                            "left {nl} right {nr} c {c} mask {mask:b}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn at_most_matches_brute_force_and_guard() {
        for len in 0..=5usize {
            for k in 0..=3usize {
                let inputs: Vec<Lit> = (1..=len as Lit).collect();
                let guard = len as Lit + 1;
                let mut b = CircuitBuilder::new(guard + 1);
                b.at_most(&inputs, k, Some(-guard));
                let clauses = b.clauses.to_vecs();
                let total = b.var_count();
                for mask in 0..1u32 << len {
                    let ok = mask.count_ones() as usize <= k;
                    // guard variable true activates the constraint
                    let on = mask | 1 << len;
                    assert_eq!(satisfiable_with(&clauses, len + 1, total, on), ok);
                    assert!(satisfiable_with(&clauses, len + 1, total, mask));
                }
            }
        }
    }

    #[test]
    fn gates_reproduce_a_satisfying_extension() {
        let left: Vec<Lit> = (1..=4).collect();
        let right: Vec<Lit> = (5..=9).collect();
        let mut b = CircuitBuilder::new(10);
        b.count_equality(&left, &right, 1);
        for mask in 0..1u32 << 9 {
            let cl = (mask & 0xF).count_ones();
            let cr = (mask >> 4).count_ones();
            if cl != 1 + cr {
                continue;
            }
            let mut values = vec![false; b.var_count() + 1];
            for (i, slot) in values[1..=9].iter_mut().enumerate() {
                *slot = mask >> i & 1 == 1;
            }
            CircuitBuilder::evaluate_gates(&b.gates, &mut values);
            let sat = b.clauses.iter().all(|c| {
                c.iter().any(|&l| {
                    let v = values[l.unsigned_abs() as usize];
                    if l > 0 {
                        v
                    } else {
                        !v
                    }
                })
            });
            assert!(sat, "mask {mask:b}");
        }
    }
}
