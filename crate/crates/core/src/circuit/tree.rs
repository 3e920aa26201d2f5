use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::dnf::{quine_strip, Dnf, Term, TruthTable};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DecisionTree {
    Leaf(bool),
    Node {
        var: usize,
        lo: Box<DecisionTree>,
        hi: Box<DecisionTree>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TreeMode {
    /// Split on the smallest variable the current subfunction depends on.
    Greedy,
    /// Fewest leaves, by search over subcubes; `n <= 4`.
    Exact,
}

pub const EXACT_MAX_VARS: usize = 4;

impl DecisionTree {
    pub fn eval(&self, x: u64) -> bool {
        match self {
            DecisionTree::Leaf(b) => *b,
            DecisionTree::Node { var, lo, hi } => {
                if x >> var & 1 == 1 {
                    hi.eval(x)
                } else {
                    lo.eval(x)
                }
            }
        }
    }

    pub fn leaves(&self) -> usize {
        match self {
            DecisionTree::Leaf(_) => 1,
            DecisionTree::Node { lo, hi, .. } => lo.leaves() + hi.leaves(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            DecisionTree::Leaf(_) => 0,
            DecisionTree::Node { lo, hi, .. } => 1 + lo.depth().max(hi.depth()),
        }
    }

    /// No variable repeats along a root-to-leaf path.
    pub fn is_read_once_per_path(&self) -> bool {
        fn go(t: &DecisionTree, seen: u64) -> bool {
            match t {
                DecisionTree::Leaf(_) => true,
                DecisionTree::Node { var, lo, hi } => {
                    seen >> var & 1 == 0 && go(lo, seen | 1 << var) && go(hi, seen | 1 << var)
                }
            }
        }
        go(self, 0)
    }

    /// Paths to 1-leaves as terms.
    pub fn one_paths(&self) -> Vec<Term> {
        fn go(t: &DecisionTree, acc: Term, out: &mut Vec<Term>) {
            match t {
                DecisionTree::Leaf(true) => out.push(acc),
                DecisionTree::Leaf(false) => {}
                DecisionTree::Node { var, lo, hi } => {
                    go(lo, Term { neg: acc.neg | 1 << var, ..acc }, out);
                    go(hi, Term { pos: acc.pos | 1 << var, ..acc }, out);
                }
            }
        }
        let mut out = Vec::new();
        go(self, Term { pos: 0, neg: 0 }, &mut out);
        out
    }
}

/// A subcube: variables in `fixed` take the values in `vals`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
struct Cube {
    fixed: u64,
    vals: u64,
}

impl Cube {
    fn points(self, n: usize) -> impl Iterator<Item = u64> {
        let free = ((1u64 << n) - 1) & !self.fixed;
        let mut sub = free;
        let mut done = false;
        std::iter::from_fn(move || {
            if done {
                return None;
            }
            let x = sub | self.vals;
            if sub == 0 {
                done = true;
            } else {
                sub = (sub - 1) & free;
            }
            Some(x)
        })
    }

    fn constant(self, f: &TruthTable) -> Option<bool> {
        let mut pts = self.points(f.n());
        let first = f.eval(pts.next()?);
        pts.all(|x| f.eval(x) == first).then_some(first)
    }

    fn depends_on(self, f: &TruthTable, i: usize) -> bool {
        self.points(f.n()).any(|x| x >> i & 1 == 0 && f.eval(x) != f.eval(x | 1 << i))
    }

    fn split(self, i: usize) -> (Cube, Cube) {
        let fixed = self.fixed | 1 << i;
        (Cube { fixed, vals: self.vals }, Cube { fixed, vals: self.vals | 1 << i })
    }
}

pub fn build_decision_tree(f: &TruthTable, mode: TreeMode) -> Result<DecisionTree> {
    let root = Cube { fixed: 0, vals: 0 };
    match mode {
        TreeMode::Greedy => Ok(greedy(f, root)),
        TreeMode::Exact => {
            if f.n() > EXACT_MAX_VARS {
                return Err(Error::Budget {
                    what: "exact decision-tree variables",
                    needed: f.n() as u128,
                    limit: EXACT_MAX_VARS as u128,
                });
            }
            let mut memo = HashMap::new();
            Ok(exact(f, root, &mut memo).1)
        }
    }
}

fn greedy(f: &TruthTable, c: Cube) -> DecisionTree {
    if let Some(b) = c.constant(f) {
        return DecisionTree::Leaf(b);
    }
    let var = (0..f.n()).find(|&i| c.fixed >> i & 1 == 0 && c.depends_on(f, i)).expect("non-constant");
    let (lo, hi) = c.split(var);
    DecisionTree::Node {
        var,
        lo: Box::new(greedy(f, lo)),
        hi: Box::new(greedy(f, hi)),
    }
}

fn exact(f: &TruthTable, c: Cube, memo: &mut HashMap<Cube, (usize, DecisionTree)>) -> (usize, DecisionTree) {
    if let Some(hit) = memo.get(&c) {
        return hit.clone();
    }
    let best = if let Some(b) = c.constant(f) {
        (1, DecisionTree::Leaf(b))
    } else {
        (0..f.n())
            .filter(|&i| c.fixed >> i & 1 == 0 && c.depends_on(f, i))
            .map(|var| {
                let (lo, hi) = c.split(var);
                let (a, lt) = exact(f, lo, memo);
                let (b, ht) = exact(f, hi, memo);
                (a + b, DecisionTree::Node { var, lo: Box::new(lt), hi: Box::new(ht) })
            })
            .min_by_key(|(s, _)| *s)
            .expect("non-constant")
    };
    memo.insert(c, best.clone());
    best
}

/// 1-leaf paths as terms, then negative literals stripped. Errors when the
/// tree's function is not monotone.
pub fn dt_to_monotone_dnf(t: &DecisionTree, n: usize) -> Result<Dnf> {
    quine_strip(&Dnf::new(n, t.one_paths()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::count_minterms;

    #[test]
    fn tree_examples() {
        let x1 = TruthTable::from_fn(3, |x| x & 1 == 1).unwrap();
        let t = build_decision_tree(&x1, TreeMode::Greedy).unwrap();
        assert_eq!(t.leaves(), 2);
        let d = dt_to_monotone_dnf(&t, 3).unwrap();
        assert_eq!(d.terms, vec![Term { pos: 1, neg: 0 }]);
        let maj = TruthTable::majority(3).unwrap();
        for mode in [TreeMode::Greedy, TreeMode::Exact] {
            let t = build_decision_tree(&maj, mode).unwrap();
            assert!(t.is_read_once_per_path());
            let d = dt_to_monotone_dnf(&t, 3).unwrap().absorb();
            assert_eq!(d.terms.len(), 3);
            assert_eq!(d.truth_table().unwrap(), maj);
        }
        let and = TruthTable::from_fn(4, |x| x == 15).unwrap();
        let t = build_decision_tree(&and, TreeMode::Exact).unwrap();
        assert_eq!(t.leaves(), 5);
        assert_eq!(dt_to_monotone_dnf(&t, 4).unwrap().terms.len(), 1);
        let xor = TruthTable::from_fn(2, |x| x.count_ones() == 1).unwrap();
        let t = build_decision_tree(&xor, TreeMode::Greedy).unwrap();
        assert!(dt_to_monotone_dnf(&t, 2).is_err());
        assert!(build_decision_tree(&TruthTable::majority(5).unwrap(), TreeMode::Exact).is_err());
    }

    #[test]
    fn exact_never_beats_greedy_backwards() {
        for table in 0..1u64 << 8 {
            let f = TruthTable::from_fn(3, |x| table >> x & 1 == 1).unwrap();
            let g = build_decision_tree(&f, TreeMode::Greedy).unwrap();
            let e = build_decision_tree(&f, TreeMode::Exact).unwrap();
            assert!(e.leaves() <= g.leaves());
            for x in 0..8 {
                assert_eq!(g.eval(x), f.eval(x));
                assert_eq!(e.eval(x), f.eval(x));
            }
            if f.is_monotone() {
                let d = dt_to_monotone_dnf(&e, 3).unwrap();
                assert!(d.terms.len() >= count_minterms(&f));
            }
        }
    }
}
