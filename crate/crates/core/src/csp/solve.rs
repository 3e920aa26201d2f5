//! Polynomial-time satisfiability for the tractable fragments. Every solver
//! returns `true` for satisfiable instances, the complement of
//! `CSP-SAT`.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::clauses::{clauses_of, equations_of, Clause, ClauseShape};
use super::instance::CspInstance;
use crate::bits::BitSet;
use crate::error::Result;
use crate::lattice::Verdict;

/// A system of parity equations over `n` variables, one row per equation.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct XorSystem {
    pub n: usize,
    pub rows: Vec<(BitSet, bool)>,
}

impl XorSystem {
    pub fn new(n: usize) -> Self {
        XorSystem { n, rows: Vec::new() }
    }

    /// Adds `xor_{v in vars} x_v = rhs`; repeated variables cancel.
    pub fn add(&mut self, vars: &[usize], rhs: bool) {
        let mut row = BitSet::new(self.n);
        for &v in vars {
            row.set(v, !row.get(v));
        }
        self.rows.push((row, rhs));
    }

    /// Gaussian elimination over GF(2).
    pub fn solve(&self) -> Option<BitSet> {
        let words = self.n.div_ceil(64);
        let mut rows: Vec<(Vec<u64>, bool)> = self
            .rows
            .iter()
            .map(|(r, b)| (r.words().to_vec(), *b))
            .collect();
        let mut pivots = Vec::new();
        let mut rank = 0;
        for col in 0..self.n {
            let (w, bit) = (col / 64, 1u64 << (col % 64));
            let Some(p) = (rank..rows.len()).find(|&i| rows[i].0[w] & bit != 0) else {
                continue;
            };
            rows.swap(rank, p);
            let (pivot, prhs) = rows[rank].clone();
            for (i, row) in rows.iter_mut().enumerate() {
                if i != rank && row.0[w] & bit != 0 {
                    for k in 0..words {
                        row.0[k] ^= pivot[k];
                    }
                    row.1 ^= prhs;
                }
            }
            pivots.push(col);
            rank += 1;
        }
        if rows[rank..].iter().any(|(_, b)| *b) {
            return None;
        }
        // free variables are 0, so each pivot takes its row's right side
        let mut x = BitSet::new(self.n);
        for (i, &col) in pivots.iter().enumerate() {
            x.set(col, rows[i].1);
        }
        Some(x)
    }

    pub fn is_satisfiable(&self) -> bool {
        self.solve().is_some()
    }

    pub fn satisfied_by(&self, x: &BitSet) -> bool {
        self.rows.iter().all(|(r, b)| {
            let ones = r.words().iter().zip(x.words()).map(|(a, b)| (a & b).count_ones()).sum::<u32>();
            (ones % 2 == 1) == *b
        })
    }
}

/// The affine system of an instance whose relations are all affine.
pub fn xor_system(inst: &CspInstance) -> Result<XorSystem> {
    let eqs: Vec<_> = inst.set().iter().map(equations_of).collect::<Result<_>>()?;
    let mut sys = XorSystem::new(inst.n());
    for c in inst.constraints() {
        for e in &eqs[c.relation] {
            let vars: Vec<usize> = (0..c.vars.len()).filter(|i| e.coeffs >> i & 1 == 1).map(|i| c.vars[i]).collect();
            sys.add(&vars, e.rhs);
        }
    }
    Ok(sys)
}

pub fn solve_xor(inst: &CspInstance) -> Result<bool> {
    Ok(xor_system(inst)?.is_satisfiable())
}

fn instance_clauses(inst: &CspInstance, shape: ClauseShape) -> Result<Vec<Clause>> {
    let per: Vec<Vec<Clause>> = inst.set().iter().map(|r| clauses_of(r, shape)).collect::<Result<_>>()?;
    Ok(inst
        .constraints()
        .flat_map(|c| per[c.relation].iter().map(move |cl| cl.instantiate(&c.vars)).collect::<Vec<_>>())
        .filter(|cl| !cl.is_tautology())
        .collect())
}

fn dedup(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable();
    v.dedup();
    v
}

/// Forward chaining: mark variables forced to 1, starting from none, and
/// fail when a clause has all its negative variables marked and no
/// positive literal left.
pub fn solve_horn(inst: &CspInstance) -> Result<bool> {
    let clauses = instance_clauses(inst, ClauseShape::Horn)?;
    Ok(horn_marking(inst.n(), &clauses).is_some())
}

/// Least model of a Horn clause set, or `None`.
pub fn horn_marking(n: usize, clauses: &[Clause]) -> Option<BitSet> {
    let negs: Vec<Vec<usize>> = clauses.iter().map(|c| dedup(c.neg.clone())).collect();
    let mut waiting: Vec<usize> = negs.iter().map(Vec::len).collect();
    let mut watch = vec![Vec::new(); n];
    for (i, ns) in negs.iter().enumerate() {
        for &v in ns {
            watch[v].push(i);
        }
    }
    let mut marked = BitSet::new(n);
    let mut queue: VecDeque<usize> = (0..clauses.len()).filter(|&i| waiting[i] == 0).collect();
    while let Some(i) = queue.pop_front() {
        let &p = clauses[i].pos.first()?;
        if marked.get(p) {
            continue;
        }
        marked.insert(p);
        for &c in &watch[p] {
            waiting[c] -= 1;
            if waiting[c] == 0 {
                queue.push_back(c);
            }
        }
    }
    Some(marked)
}

/// Anti-Horn instances become Horn after flipping every variable.
pub fn solve_antihorn(inst: &CspInstance) -> Result<bool> {
    solve_horn(&negate_instance(inst)?)
}

/// The same bits over the coordinatewise-complemented relations.
pub fn negate_instance(inst: &CspInstance) -> Result<CspInstance> {
    inst.reinterpret(inst.set().negated())
}

/// Implication graph on literals `2v` (`x_v`) and `2v+1` (`¬x_v`);
/// unsatisfiable iff some `x_v` and `¬x_v` share a strongly connected
/// component.
pub fn solve_2sat(inst: &CspInstance) -> Result<bool> {
    let clauses = instance_clauses(inst, ClauseShape::TwoCnf)?;
    let n = inst.n();
    let mut adj = vec![Vec::new(); 2 * n];
    for c in &clauses {
        let lits: Vec<usize> = c.pos.iter().map(|&v| 2 * v).chain(c.neg.iter().map(|&v| 2 * v + 1)).collect();
        match lits[..] {
            [] => return Ok(false),
            [a] => adj[a ^ 1].push(a),
            [a, b] => {
                adj[a ^ 1].push(b);
                adj[b ^ 1].push(a);
            }
            _ => unreachable!("2-CNF clause has at most two literals"),
        }
    }
    let comp = scc(&adj);
    Ok((0..n).all(|v| comp[2 * v] != comp[2 * v + 1]))
}

/// Tarjan's algorithm, iterative. Returns a component id per node.
fn scc(adj: &[Vec<usize>]) -> Vec<usize> {
    let n = adj.len();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut comp = vec![usize::MAX; n];
    let mut stack = Vec::new();
    let mut next = 0;
    let mut ncomp = 0;
    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        let mut call = vec![(root, 0usize)];
        index[root] = next;
        low[root] = next;
        next += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut i)) = call.last_mut() {
            if *i < adj[v].len() {
                let w = adj[v][*i];
                *i += 1;
                if index[w] == usize::MAX {
                    index[w] = next;
                    low[w] = next;
                    next += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(u, _)) = call.last() {
                    low[u] = low[u].min(low[v]);
                }
                if low[v] == index[v] {
                    loop {
                        let w = stack.pop().unwrap();
                        on_stack[w] = false;
                        comp[w] = ncomp;
                        if w == v {
                            break;
                        }
                    }
                    ncomp += 1;
                }
            }
        }
    }
    comp
}

/// Positive clauses, implications and negative units: unsatisfiable iff
/// some positive clause has every variable forced to 0, where `¬y` forces
/// `y` and `x -> y` propagates forcing from `y` back to `x`.
pub fn solve_or_fragment(inst: &CspInstance) -> Result<bool> {
    let clauses = instance_clauses(inst, ClauseShape::OrFragment)?;
    let n = inst.n();
    let mut back = vec![Vec::new(); n];
    let mut forced = BitSet::new(n);
    let mut queue = VecDeque::new();
    let mut positive = Vec::new();
    for c in &clauses {
        match (c.pos.len(), c.neg.len()) {
            (_, 0) => positive.push(&c.pos),
            (0, 1) => {
                if !forced.get(c.neg[0]) {
                    forced.insert(c.neg[0]);
                    queue.push_back(c.neg[0]);
                }
            }
            (1, 1) => back[c.pos[0]].push(c.neg[0]),
            _ => unreachable!("clause outside the OR fragment"),
        }
    }
    while let Some(y) = queue.pop_front() {
        for &x in &back[y] {
            if !forced.get(x) {
                forced.insert(x);
                queue.push_back(x);
            }
        }
    }
    Ok(!positive.iter().any(|p| p.iter().all(|&v| forced.get(v))))
}

pub fn solve_nand_fragment(inst: &CspInstance) -> Result<bool> {
    solve_or_fragment(&negate_instance(inst)?)
}

/// Satisfiable iff the constant assignment satisfies every constraint;
/// exact when every relation contains the constant tuple or is empty.
pub fn solve_constant(inst: &CspInstance, value: bool) -> Result<bool> {
    let a = if value { BitSet::full(inst.n()) } else { BitSet::new(inst.n()) };
    inst.satisfied_by(&a)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Solver {
    ConstantZero,
    ConstantOne,
    OrFragment,
    NandFragment,
    Horn,
    AntiHorn,
    TwoSat,
    Affine,
}

impl Solver {
    pub const ALL: [Solver; 8] = [
        Solver::ConstantZero,
        Solver::ConstantOne,
        Solver::OrFragment,
        Solver::NandFragment,
        Solver::Horn,
        Solver::AntiHorn,
        Solver::TwoSat,
        Solver::Affine,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Solver::ConstantZero => "const0",
            Solver::ConstantOne => "const1",
            Solver::OrFragment => "or",
            Solver::NandFragment => "nand",
            Solver::Horn => "horn",
            Solver::AntiHorn => "antihorn",
            Solver::TwoSat => "2sat",
            Solver::Affine => "xor",
        }
    }

    pub fn from_name(s: &str) -> Option<Solver> {
        Solver::ALL.into_iter().find(|v| v.name() == s)
    }

    /// Clone whose containment in `Pol(S)` makes this solver exact.
    pub fn clone_name(self) -> &'static str {
        match self {
            Solver::ConstantZero => "I0",
            Solver::ConstantOne => "I1",
            Solver::OrFragment => "S02",
            Solver::NandFragment => "S12",
            Solver::Horn => "E2",
            Solver::AntiHorn => "V2",
            Solver::TwoSat => "D2",
            Solver::Affine => "L2",
        }
    }

    /// Satisfiability of `inst`.
    pub fn solve(self, inst: &CspInstance) -> Result<bool> {
        match self {
            Solver::ConstantZero => solve_constant(inst, false),
            Solver::ConstantOne => solve_constant(inst, true),
            Solver::OrFragment => solve_or_fragment(inst),
            Solver::NandFragment => solve_nand_fragment(inst),
            Solver::Horn => solve_horn(inst),
            Solver::AntiHorn => solve_antihorn(inst),
            Solver::TwoSat => solve_2sat(inst),
            Solver::Affine => solve_xor(inst),
        }
    }

    /// Whether every relation of the set compiles into this solver's form.
    pub fn accepts(self, set: &crate::boolfun::RelationSet) -> bool {
        let shape = match self {
            Solver::ConstantZero => return set.iter().all(|r| r.is_empty() || r.contains(0)),
            Solver::ConstantOne => {
                return set.iter().all(|r| r.is_empty() || r.contains((1u64 << r.arity()) - 1))
            }
            Solver::Affine => return set.iter().all(|r| equations_of(r).is_ok()),
            Solver::OrFragment => ClauseShape::OrFragment,
            Solver::NandFragment => ClauseShape::NandFragment,
            Solver::Horn => ClauseShape::Horn,
            Solver::AntiHorn => ClauseShape::AntiHorn,
            Solver::TwoSat => ClauseShape::TwoCnf,
        };
        set.iter().all(|r| clauses_of(r, shape).is_ok())
    }
}

/// First solver, in `Solver::ALL` order, whose clone the verdict lists as
/// preserved and whose compiler accepts every relation.
pub fn designated_solver(v: &Verdict, set: &crate::boolfun::RelationSet) -> Option<Solver> {
    Solver::ALL
        .into_iter()
        .find(|s| v.preserves(s.clone_name()) && s.accepts(set))
}
