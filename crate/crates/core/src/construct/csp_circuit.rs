use serde::{Deserialize, Serialize};

use crate::boolfun::RelationSet;
use crate::circuit::{Circuit, FaninMode};
use crate::csp::{clauses_of, Clause, ClauseShape, CspInstance};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum MonotoneFragment {
    Horn,
    AntiHorn,
    TwoSat,
    Or,
    Nand,
}

impl MonotoneFragment {
    /// Closure-based fragments first.
    pub const ALL: [MonotoneFragment; 5] = [
        MonotoneFragment::TwoSat,
        MonotoneFragment::Or,
        MonotoneFragment::Nand,
        MonotoneFragment::Horn,
        MonotoneFragment::AntiHorn,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MonotoneFragment::Horn => "horn",
            MonotoneFragment::AntiHorn => "antihorn",
            MonotoneFragment::TwoSat => "2sat",
            MonotoneFragment::Or => "or",
            MonotoneFragment::Nand => "nand",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        MonotoneFragment::ALL.into_iter().find(|f| f.name().eq_ignore_ascii_case(s))
    }

    fn shape(self) -> ClauseShape {
        match self {
            MonotoneFragment::Horn => ClauseShape::Horn,
            MonotoneFragment::AntiHorn => ClauseShape::AntiHorn,
            MonotoneFragment::TwoSat => ClauseShape::TwoCnf,
            MonotoneFragment::Or => ClauseShape::OrFragment,
            MonotoneFragment::Nand => ClauseShape::NandFragment,
        }
    }

    pub fn accepts(self, set: &RelationSet) -> bool {
        set.iter().all(|r| clauses_of(r, self.shape()).is_ok())
    }
}

/// A gate that may have folded to a constant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Val {
    False,
    True,
    Gate(usize),
}

fn and(c: &mut Circuit, vs: &[Val]) -> Val {
    let mut ops = Vec::new();
    for &v in vs {
        match v {
            Val::False => return Val::False,
            Val::True => {}
            Val::Gate(g) => ops.push(g),
        }
    }
    ops.sort_unstable();
    ops.dedup();
    if ops.is_empty() {
        Val::True
    } else {
        Val::Gate(c.and(ops))
    }
}

fn or(c: &mut Circuit, vs: &[Val]) -> Val {
    let mut ops = Vec::new();
    for &v in vs {
        match v {
            Val::True => return Val::True,
            Val::False => {}
            Val::Gate(g) => ops.push(g),
        }
    }
    ops.sort_unstable();
    ops.dedup();
    if ops.is_empty() {
        Val::False
    } else {
        Val::Gate(c.or(ops))
    }
}

/// Clauses contributed by each instance bit, with duplicate literals and
/// tautologies removed.
fn bit_clauses(set: &RelationSet, n: usize, shape: ClauseShape) -> Result<Vec<(usize, Vec<Clause>)>> {
    let inst = CspInstance::empty(set.clone(), n)?;
    let compiled = set.iter().map(|r| clauses_of(r, shape)).collect::<Result<Vec<_>>>()?;
    (0..inst.len())
        .map(|j| {
            let con = inst.decode(j)?;
            let cs = compiled[con.relation]
                .iter()
                .map(|cl| {
                    let mut cl = cl.instantiate(&con.vars);
                    cl.pos.sort_unstable();
                    cl.pos.dedup();
                    cl.neg.sort_unstable();
                    cl.neg.dedup();
                    cl
                })
                .filter(|cl| !cl.is_tautology())
                .collect();
            Ok((j, cs))
        })
        .collect()
}

/// Reflexive-transitive closure by `⌈log2 size⌉` rounds of squaring.
fn closure(c: &mut Circuit, mut r: Vec<Vec<Val>>) -> Vec<Vec<Val>> {
    let size = r.len();
    for (i, row) in r.iter_mut().enumerate() {
        row[i] = Val::True;
    }
    let mut reach = 1;
    while reach < size {
        let next = (0..size)
            .map(|p| {
                (0..size)
                    .map(|q| {
                        let terms: Vec<Val> = (0..size).map(|m| and(c, &[r[p][m], r[m][q]])).collect();
                        or(c, &terms)
                    })
                    .collect()
            })
            .collect();
        r = next;
        reach *= 2;
    }
    r
}

fn finish(mut c: Circuit, v: Val) -> Circuit {
    let g = match v {
        Val::False => c.constant(false),
        Val::True => c.constant(true),
        Val::Gate(g) => g,
    };
    c.set_outputs(vec![g]);
    c
}

/// Forward chaining: `n` rounds of marking variables forced to 1.
fn horn(set: &RelationSet, n: usize) -> Result<Circuit> {
    let bits = bit_clauses(set, n, ClauseShape::Horn)?;
    let mut c = Circuit::new(bits.len(), FaninMode::Unbounded);
    let mut mark = vec![Val::False; n];
    for _ in 0..=n {
        let mut next: Vec<Vec<Val>> = mark.iter().map(|&m| vec![m]).collect();
        for (j, cs) in &bits {
            let x = Val::Gate(c.input(*j));
            for cl in cs.iter().filter(|cl| cl.pos.len() == 1) {
                let mut body: Vec<Val> = cl.neg.iter().map(|&u| mark[u]).collect();
                body.push(x);
                let t = and(&mut c, &body);
                next[cl.pos[0]].push(t);
            }
        }
        let next: Vec<Val> = next.iter().map(|ts| or(&mut c, ts)).collect();
        if next == mark {
            break;
        }
        mark = next;
    }
    let mut fail = Vec::new();
    for (j, cs) in &bits {
        let x = Val::Gate(c.input(*j));
        for cl in cs.iter().filter(|cl| cl.pos.is_empty()) {
            let mut body: Vec<Val> = cl.neg.iter().map(|&u| mark[u]).collect();
            body.push(x);
            fail.push(and(&mut c, &body));
        }
    }
    let out = or(&mut c, &fail);
    Ok(finish(c, out))
}

/// Implication graph on literals (`2v` is `x_v`, `2v+1` is `¬x_v`);
/// unsatisfiable iff some `x_v` and `¬x_v` reach each other.
fn two_sat(set: &RelationSet, n: usize) -> Result<Circuit> {
    let bits = bit_clauses(set, n, ClauseShape::TwoCnf)?;
    let mut c = Circuit::new(bits.len(), FaninMode::Unbounded);
    let mut edges = vec![vec![Vec::new(); 2 * n]; 2 * n];
    let mut fail = Vec::new();
    for (j, cs) in &bits {
        let x = Val::Gate(c.input(*j));
        for cl in cs {
            let lits: Vec<usize> = cl.pos.iter().map(|&v| 2 * v).chain(cl.neg.iter().map(|&v| 2 * v + 1)).collect();
            match lits[..] {
                [] => fail.push(x),
                [a] => edges[a ^ 1][a].push(x),
                [a, b] => {
                    edges[a ^ 1][b].push(x);
                    edges[b ^ 1][a].push(x);
                }
                _ => unreachable!("2-CNF clause"),
            }
        }
    }
    let r: Vec<Vec<Val>> = edges.iter().map(|row| row.iter().map(|ts| or(&mut c, ts)).collect()).collect();
    let r = closure(&mut c, r);
    for v in 0..n {
        let t = and(&mut c, &[r[2 * v][2 * v + 1], r[2 * v + 1][2 * v]]);
        fail.push(t);
    }
    let out = or(&mut c, &fail);
    Ok(finish(c, out))
}

/// Forced zeros spread backwards along `x -> y`; unsatisfiable iff a
/// positive clause has all its variables forced to 0.
fn or_fragment(set: &RelationSet, n: usize) -> Result<Circuit> {
    let bits = bit_clauses(set, n, ClauseShape::OrFragment)?;
    let mut c = Circuit::new(bits.len(), FaninMode::Unbounded);
    let mut edges = vec![vec![Vec::new(); n]; n];
    let mut zero = vec![Vec::new(); n];
    let mut positive = Vec::new();
    for (j, cs) in &bits {
        let x = Val::Gate(c.input(*j));
        for cl in cs {
            match (&cl.pos[..], &cl.neg[..]) {
                (_, []) => positive.push((x, cl.pos.clone())),
                ([y], [u]) => edges[*u][*y].push(x),
                ([], [u]) => zero[*u].push(x),
                _ => unreachable!("OR-fragment clause"),
            }
        }
    }
    let r: Vec<Vec<Val>> = edges.iter().map(|row| row.iter().map(|ts| or(&mut c, ts)).collect()).collect();
    let r = closure(&mut c, r);
    let zero: Vec<Val> = zero.iter().map(|ts| or(&mut c, ts)).collect();
    let forced: Vec<Val> = (0..n)
        .map(|v| {
            let ts: Vec<Val> = (0..n).map(|u| and(&mut c, &[r[v][u], zero[u]])).collect();
            or(&mut c, &ts)
        })
        .collect();
    let mut fail = Vec::new();
    for (x, vars) in positive {
        let mut body: Vec<Val> = vars.iter().map(|&v| forced[v]).collect();
        body.push(x);
        fail.push(and(&mut c, &body));
    }
    let out = or(&mut c, &fail);
    Ok(finish(c, out))
}

/// AND/OR circuit over the `N` instance bits of `CSP(set)` on `n`
/// variables, outputting 1 iff the instance is unsatisfiable. Without an
/// explicit fragment the first one accepting every relation is used.
pub fn emit_monotone_csp_circuit(set: &RelationSet, n: usize, fragment: Option<MonotoneFragment>) -> Result<Circuit> {
    let frag = match fragment {
        Some(f) => f,
        None => MonotoneFragment::ALL.into_iter().find(|f| f.accepts(set)).ok_or_else(|| Error::Fragment {
            fragment: "monotone".into(),
            relation: set.label(),
        })?,
    };
    match frag {
        MonotoneFragment::Horn => horn(set, n),
        MonotoneFragment::AntiHorn => horn(&set.negated(), n),
        MonotoneFragment::TwoSat => two_sat(set, n),
        MonotoneFragment::Or => or_fragment(set, n),
        MonotoneFragment::Nand => or_fragment(&set.negated(), n),
    }
}
