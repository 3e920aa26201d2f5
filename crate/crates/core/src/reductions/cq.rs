//! Bounded search for conjunctive-query definitions.
//!
//! A definition of a `k`-ary target over `S` with `m` auxiliary variables is a
//! conjunction of atoms `R(v_1, ..., v_r)`, `R ∈ S`, over variables
//! `0..k+m`; the first `k` are the target coordinates and the rest are
//! existentially quantified. The search works on truth tables over
//! `{0,1}^(k+m)`: a conjunction is the AND of its atoms' tables, and its
//! defined relation is the projection onto the low `k` coordinates.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::boolfun::{Relation, RelationSet, MAX_ARITY};
use crate::error::{Error, Result};

/// Search bounds: at most `aux_vars` quantified variables and `max_atoms`
/// atoms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CqBudget {
    pub aux_vars: usize,
    pub max_atoms: usize,
    /// Visited conjunction tables before the search gives up.
    pub max_states: usize,
}

impl Default for CqBudget {
    fn default() -> Self {
        CqBudget {
            aux_vars: 2,
            max_atoms: 4,
            max_states: 2_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Atom {
    /// Index into the `over` relation set.
    pub relation: usize,
    /// Variables; `< target arity` are target coordinates, the rest auxiliary.
    pub vars: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CqDefinition {
    pub target: Relation,
    pub over: RelationSet,
    pub aux_count: usize,
    pub atoms: Vec<Atom>,
}

impl CqDefinition {
    /// The trivial definition of a relation by itself.
    pub fn identity(target: &Relation, over: &RelationSet, index: usize) -> Self {
        CqDefinition {
            target: target.clone(),
            over: over.clone(),
            aux_count: 0,
            atoms: vec![Atom {
                relation: index,
                vars: (0..target.arity()).collect(),
            }],
        }
    }

    pub fn var_count(&self) -> usize {
        self.target.arity() + self.aux_count
    }

    /// Table over `{0,1}^(k+m)` of the conjunction of all atoms.
    pub fn conjunction_table(&self) -> Result<u64> {
        let v = self.var_count();
        if v > MAX_ARITY {
            return Err(Error::Arity {
                arity: v,
                max: MAX_ARITY,
            });
        }
        let mut t = full(v);
        for a in &self.atoms {
            let r = self.over.relations.get(a.relation).ok_or(Error::Index {
                index: a.relation,
                len: self.over.len(),
            })?;
            if a.vars.len() != r.arity() || a.vars.iter().any(|&x| x >= v) {
                return Err(Error::Invalid(format!("atom {a:?} does not fit")));
            }
            t &= atom_table(r, &a.vars, v);
        }
        Ok(t)
    }

    /// Exhaustive semantics check: the existential projection of the
    /// conjunction equals the target.
    pub fn verify(&self) -> Result<bool> {
        let t = self.conjunction_table()?;
        Ok(project(t, self.target.arity(), self.var_count()) == self.target.mask())
    }

    pub fn describe(&self) -> String {
        let name = |v: usize| {
            if v < self.target.arity() {
                format!("x{}", v + 1)
            } else {
                format!("y{}", v - self.target.arity() + 1)
            }
        };
        let body: Vec<String> = self
            .atoms
            .iter()
            .map(|a| {
                let vars: Vec<String> = a.vars.iter().map(|&v| name(v)).collect();
                format!("{}({})", self.over.relations[a.relation].label(), vars.join(","))
            })
            .collect();
        let quant = if self.aux_count > 0 {
            let ys: Vec<String> = (0..self.aux_count)
                .map(|i| name(self.target.arity() + i))
                .collect();
            format!("∃{} ", ys.join(","))
        } else {
            String::new()
        };
        format!("{quant}{}", if body.is_empty() { "⊤".into() } else { body.join(" ∧ ") })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum CqSearch {
    Found(CqDefinition),
    /// Every query within the bounds was examined.
    NotFound,
    /// The state cap was hit before the bounded space was exhausted.
    Incomplete,
}

fn full(v: usize) -> u64 {
    crate::boolfun::table_mask(v)
}

fn atom_table(r: &Relation, vars: &[usize], v: usize) -> u64 {
    let mut t = 0u64;
    for x in 0..(1u64 << v) {
        let mut tup = 0u64;
        for (i, &var) in vars.iter().enumerate() {
            tup |= ((x >> var) & 1) << i;
        }
        if r.contains(tup) {
            t |= 1 << x;
        }
    }
    t
}

/// Existential projection of a table over `v` variables onto the first `k`.
fn project(t: u64, k: usize, v: usize) -> u64 {
    let block = 1u32 << k;
    let low = full(k);
    let mut out = 0;
    for a in 0..(1u64 << (v - k)) {
        out |= (t >> (a as u32 * block)) & low;
    }
    out
}

/// Breadth-first search for the shortest conjunctive query defining
/// `target` over `over`, trying fewer auxiliary variables first.
pub fn find_cq(target: &Relation, over: &RelationSet, budget: &CqBudget) -> Result<CqSearch> {
    let k = target.arity();
    if let Some(i) = over.iter().position(|r| r.same_tuples(target)) {
        return Ok(CqSearch::Found(CqDefinition::identity(target, over, i)));
    }
    let mut incomplete = false;
    for aux in 0..=budget.aux_vars {
        let v = k + aux;
        if v > MAX_ARITY {
            incomplete = true;
            break;
        }
        let mut atoms: Vec<(u64, Atom)> = Vec::new();
        let mut seen_atoms = HashMap::new();
        for (ri, r) in over.iter().enumerate() {
            let ar = r.arity();
            let total = v.pow(ar as u32);
            for code in 0..total {
                let mut c = code;
                let vars: Vec<usize> = (0..ar)
                    .map(|_| {
                        let x = c % v;
                        c /= v;
                        x
                    })
                    .collect();
                let t = atom_table(r, &vars, v);
                if t == full(v) || project(t, k, v) & target.mask() != target.mask() {
                    continue;
                }
                if seen_atoms.insert(t, ()).is_none() {
                    atoms.push((
                        t,
                        Atom {
                            relation: ri,
                            vars,
                        },
                    ));
                }
            }
        }
        // parent pointers: table -> (previous table, atom index)
        let mut parent: HashMap<u64, (u64, usize)> = HashMap::new();
        let start = full(v);
        let goal = |t: u64| project(t, k, v) == target.mask();
        let rebuild = |parent: &HashMap<u64, (u64, usize)>, mut t: u64| {
            let mut used = Vec::new();
            while t != start {
                let (p, a) = parent[&t];
                used.push(atoms[a].1.clone());
                t = p;
            }
            used.reverse();
            CqDefinition {
                target: target.clone(),
                over: over.clone(),
                aux_count: aux,
                atoms: used,
            }
        };
        if goal(start) {
            return Ok(CqSearch::Found(rebuild(&parent, start)));
        }
        let mut frontier = vec![start];
        'levels: for _ in 0..budget.max_atoms {
            let mut next = Vec::new();
            for &t in &frontier {
                for (ai, &(at, _)) in atoms.iter().enumerate() {
                    let nt = t & at;
                    if nt == t || nt == start || parent.contains_key(&nt) {
                        continue;
                    }
                    if project(nt, k, v) & target.mask() != target.mask() {
                        continue;
                    }
                    parent.insert(nt, (t, ai));
                    if goal(nt) {
                        return Ok(CqSearch::Found(rebuild(&parent, nt)));
                    }
                    next.push(nt);
                    if parent.len() > budget.max_states {
                        incomplete = true;
                        break 'levels;
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            frontier = next;
        }
    }
    Ok(if incomplete {
        CqSearch::Incomplete
    } else {
        CqSearch::NotFound
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn found(s: CqSearch) -> CqDefinition {
        match s {
            CqSearch::Found(d) => d,
            other => panic!("expected a definition, got {other:?}"),
        }
    }

    #[test]
    fn equality_from_implication() {
        let over = RelationSet::new(vec![Relation::implication()]);
        let d = found(find_cq(&Relation::equality(), &over, &CqBudget::default()).unwrap());
        assert_eq!(d.aux_count, 0);
        assert_eq!(d.atoms.len(), 2);
        let mut vars: Vec<_> = d.atoms.iter().map(|a| a.vars.clone()).collect();
        vars.sort();
        assert_eq!(vars, vec![vec![0, 1], vec![1, 0]]);
        assert!(d.verify().unwrap());
    }

    #[test]
    fn relation_defines_itself() {
        let r = Relation::xor(3, true);
        let over = RelationSet::new(vec![r.clone()]);
        let d = found(find_cq(&r, &over, &CqBudget::default()).unwrap());
        assert_eq!(d.atoms.len(), 1);
        assert_eq!(d.atoms[0].vars, vec![0, 1, 2]);
    }

    #[test]
    fn xor4_through_auxiliary_parity() {
        let target = Relation::xor(4, false);
        let over = RelationSet::new(vec![Relation::xor(3, false)]);
        let d = found(find_cq(&target, &over, &CqBudget::default()).unwrap());
        assert_eq!(d.aux_count, 1);
        assert_eq!(d.atoms.len(), 2);
        assert!(d.verify().unwrap());
    }

    #[test]
    fn or2_cannot_define_equality() {
        let over = RelationSet::new(vec![Relation::or(2)]);
        assert_eq!(
            find_cq(&Relation::equality(), &over, &CqBudget::default()).unwrap(),
            CqSearch::NotFound
        );
    }

    #[test]
    fn projection_matches_brute_force() {
        // y1 ∧ (x1 ∨ y1) over 2 vars projects to "anything"
        let t: u64 = 0b1100;
        assert_eq!(project(t, 1, 2), 0b11);
        assert_eq!(project(0b0010, 1, 2), 0b10);
    }
}
