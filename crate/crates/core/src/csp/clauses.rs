//! Compiling relations into conjunctions of clauses or parity equations of a
//! fixed shape. Each compiler checks that the conjunction equals the
//! relation and reports a fragment error otherwise.

use serde::{Deserialize, Serialize};

use crate::boolfun::Relation;
use crate::error::{Error, Result};

/// A disjunction of literals; `pos`/`neg` hold coordinates or variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Clause {
    pub pos: Vec<usize>,
    pub neg: Vec<usize>,
}

impl Clause {
    /// Renames coordinates through `vars`.
    pub fn instantiate(&self, vars: &[usize]) -> Clause {
        Clause {
            pos: self.pos.iter().map(|&i| vars[i]).collect(),
            neg: self.neg.iter().map(|&i| vars[i]).collect(),
        }
    }

    pub fn is_tautology(&self) -> bool {
        self.pos.iter().any(|p| self.neg.contains(p))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ClauseShape {
    /// At most one positive literal.
    Horn,
    /// At most one negative literal.
    AntiHorn,
    /// At most two literals.
    TwoCnf,
    /// Positive clauses, `x -> y` and `¬x`.
    OrFragment,
    /// Negative clauses, `x -> y` and `x`.
    NandFragment,
}

impl ClauseShape {
    pub fn name(self) -> &'static str {
        match self {
            ClauseShape::Horn => "Horn",
            ClauseShape::AntiHorn => "anti-Horn",
            ClauseShape::TwoCnf => "2-CNF",
            ClauseShape::OrFragment => "OR",
            ClauseShape::NandFragment => "NAND",
        }
    }

    fn admits(self, pos: u64, neg: u64) -> bool {
        let (p, q) = (pos.count_ones(), neg.count_ones());
        match self {
            ClauseShape::Horn => p <= 1,
            ClauseShape::AntiHorn => q <= 1,
            ClauseShape::TwoCnf => p + q <= 2,
            ClauseShape::OrFragment => q == 0 || (q == 1 && p <= 1),
            ClauseShape::NandFragment => p == 0 || (p == 1 && q <= 1),
        }
    }
}

fn mask_bits(m: u64) -> Vec<usize> {
    (0..64).filter(|i| m >> i & 1 == 1).collect()
}

/// Minimal clauses of `shape` implied by `r`, provided their conjunction is
/// exactly `r`.
pub fn clauses_of(r: &Relation, shape: ClauseShape) -> Result<Vec<Clause>> {
    let k = r.arity();
    let full = (1u64 << k) - 1;
    let holds = |pos: u64, neg: u64| r.tuples().all(|t| t & pos != 0 || !t & neg & full != 0);
    let mut implied: Vec<(u64, u64)> = Vec::new();
    for pos in 0..=full {
        let rest = full & !pos;
        let mut neg = rest;
        loop {
            if shape.admits(pos, neg) && holds(pos, neg) {
                implied.push((pos, neg));
            }
            if neg == 0 {
                break;
            }
            neg = (neg - 1) & rest;
        }
    }
    let minimal: Vec<(u64, u64)> = implied
        .iter()
        .copied()
        .filter(|&(p, q)| {
            !implied
                .iter()
                .any(|&(p2, q2)| (p2, q2) != (p, q) && p2 & !p == 0 && q2 & !q == 0)
        })
        .collect();
    let conj = Relation::from_fn(k, |t| minimal.iter().all(|&(p, q)| t & p != 0 || !t & q & full != 0));
    if conj.mask() != r.mask() {
        return Err(Error::Fragment {
            fragment: shape.name().to_string(),
            relation: r.label(),
        });
    }
    Ok(minimal
        .into_iter()
        .map(|(p, q)| Clause {
            pos: mask_bits(p),
            neg: mask_bits(q),
        })
        .collect())
}

/// Parity equation `xor_{i in coeffs} x_i = rhs` over coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Equation {
    pub coeffs: u64,
    pub rhs: bool,
}

/// Linear equations whose solution set is exactly `r`. The empty relation
/// compiles to `0 = 1`.
pub fn equations_of(r: &Relation) -> Result<Vec<Equation>> {
    let k = r.arity();
    let Some(t0) = r.tuples().next() else {
        return Ok(vec![Equation {
            coeffs: 0,
            rhs: true,
        }]);
    };
    let parity = |a: u64, t: u64| (a & t).count_ones() % 2 == 1;
    let eqs: Vec<Equation> = (1..1u64 << k)
        .filter(|&a| r.tuples().all(|t| parity(a, t) == parity(a, t0)))
        .map(|a| Equation {
            coeffs: a,
            rhs: parity(a, t0),
        })
        .collect();
    let hull = Relation::from_fn(k, |t| eqs.iter().all(|e| parity(e.coeffs, t) == e.rhs));
    if hull.mask() != r.mask() {
        return Err(Error::Fragment {
            fragment: "affine".into(),
            relation: r.label(),
        });
    }
    Ok(eqs)
}
