use std::fmt::Write as _;
use std::io::{self, Write};

use super::{Assignment, EncodeError, Encoding, Lit, VarMap};
use crate::chordal::{CliqueEdge, SpanningForest};
use crate::nodeset::{NodeSet, MAX_VARS};

/// Classic DIMACS WCNF with `top = Σ soft + 1` on every hard clause.
pub fn write_wcnf<W: Write>(enc: &Encoding, out: &mut W) -> io::Result<()> {
    let top = enc.soft_weight_sum() + 1;
    let n_clauses = enc.hard.len() + enc.soft.len();
    writeln!(out, "p wcnf {} {} {}", enc.var_count, n_clauses, top)?;
    let mut line = String::new();
    let mut emit = |out: &mut W, weight: u64, clause: &[Lit]| -> io::Result<()> {
        line.clear();
        write!(line, "{weight}").unwrap();
        for l in clause {
            write!(line, " {l}").unwrap();
        }
        line.push_str(" 0\n");
        out.write_all(line.as_bytes())
    };
    for clause in enc.hard.iter() {
        emit(out, top, clause)?;
    }
    for (clause, w) in &enc.soft {
        emit(out, *w, clause)?;
    }
    Ok(())
}

pub fn emit_wcnf(enc: &Encoding) -> String {
    let mut buf = Vec::new();
    write_wcnf(enc, &mut buf).expect("writing to memory cannot fail");
    String::from_utf8(buf).expect("WCNF is ASCII")
}

/// Candidate and separator variables with their meaning. Candidate
/// indices in `s` lines are 0-based positions among the `x` lines.
pub fn write_sidecar(vm: &VarMap) -> String {
    let mut s = String::new();
    writeln!(s, "c n_vars {}", vm.n_vars()).unwrap();
    for (idx, c) in vm.candidates().iter().enumerate() {
        write!(s, "x {} {}", vm.x(idx), c.len()).unwrap();
        for i in c.iter() {
            write!(s, " {i}").unwrap();
        }
        s.push('\n');
    }
    for (p, &(a, b)) in vm.pairs().iter().enumerate() {
        writeln!(s, "s {} {} {}", vm.s(p), a, b).unwrap();
    }
    s
}

/// Parsed `.vars` file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sidecar {
    pub n_vars: Option<usize>,
    pub candidates: Vec<(Lit, NodeSet)>,
    pub separators: Vec<(Lit, usize, usize)>,
}

pub fn read_sidecar(text: &str) -> Result<Sidecar, EncodeError> {
    let mut out = Sidecar {
        n_vars: None,
        candidates: Vec::new(),
        separators: Vec::new(),
    };
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let err = |message: String| EncodeError::Sidecar { line, message };
        let fields: Vec<&str> = raw.split_whitespace().collect();
        let nums = |from: usize| -> Result<Vec<i64>, EncodeError> {
            fields[from..]
                .iter()
                .map(|f| f.parse::<i64>().map_err(|_| err(format!("not an integer: {f:?}"))))
                .collect()
        };
        match fields.first().copied() {
            None => {}
            Some("c") => {
                if fields.get(1) == Some(&"n_vars") {
                    let n = fields
                        .get(2)
                        .and_then(|f| f.parse().ok())
                        .ok_or_else(|| err("bad n_vars comment".into()))?;
                    out.n_vars = Some(n);
                }
            }
            Some("x") => {
                let v = nums(1)?;
                if v.len() < 2 || v[0] < 1 || v[1] < 1 || v.len() != 2 + v[1] as usize {
                    return Err(err("expected `x <id> <k> <i_1> .. <i_k>`".into()));
                }
                let members = &v[2..];
                if members.iter().any(|&m| !(0..MAX_VARS as i64).contains(&m)) {
                    return Err(err("variable index out of range".into()));
                }
                let set = NodeSet::try_from_indices(members.iter().map(|&m| m as usize))
                    .ok_or_else(|| err("repeated variable index".into()))?;
                out.candidates.push((v[0] as Lit, set));
            }
            Some("s") => {
                let v = nums(1)?;
                if v.len() != 3 || v[0] < 1 || v[1] < 0 || v[2] < 0 {
                    return Err(err("expected `s <id> <c-index> <c'-index>`".into()));
                }
                let (a, b) = (v[1] as usize, v[2] as usize);
                let m = out.candidates.len();
                if a >= m || b >= m || a == b {
                    return Err(err(format!("candidate index out of range: {a} {b}")));
                }
                out.separators.push((v[0] as Lit, a, b));
            }
            Some(other) => return Err(err(format!("unknown line type {other:?}"))),
        }
    }
    Ok(out)
}

impl Sidecar {
    /// Chosen cliques and forest edges under a model, without any checks.
    pub fn decode(&self, a: &Assignment) -> (Vec<NodeSet>, SpanningForest) {
        let lit = |v: Lit| (v as usize) <= a.var_count() && a.value(v as usize);
        let mut position = vec![usize::MAX; self.candidates.len()];
        let mut cliques = Vec::new();
        for (idx, &(v, c)) in self.candidates.iter().enumerate() {
            if lit(v) {
                position[idx] = cliques.len();
                cliques.push(c);
            }
        }
        let mut edges = Vec::new();
        for &(v, ia, ib) in &self.separators {
            let (pa, pb) = (position[ia], position[ib]);
            if lit(v) && pa != usize::MAX && pb != usize::MAX {
                edges.push(CliqueEdge {
                    a: pa.min(pb),
                    b: pa.max(pb),
                    label: self.candidates[ia].1.intersection(self.candidates[ib].1),
                });
            }
        }
        (cliques, SpanningForest { edges })
    }
}
