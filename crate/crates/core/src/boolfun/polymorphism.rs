use std::collections::{BTreeSet, HashSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{projection_table, BoolFun, Relation, RelationSet, MAX_ARITY};
use crate::budget::Budget;
use crate::error::{Error, Result};

/// A failed preservation check: applying `function` coordinatewise to
/// `tuples` (all members of `relation`) produced `image`, which is not.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PreservationFailure {
    pub function: BoolFun,
    pub relation: String,
    pub tuples: Vec<String>,
    pub image: String,
}

/// Coordinatewise application of `f` to the chosen tuples.
fn image(f: &BoolFun, arity: usize, chosen: &[u64]) -> u64 {
    let mut out = 0u64;
    for c in 0..arity {
        let mut arg = 0u64;
        for (i, t) in chosen.iter().enumerate() {
            arg |= ((t >> c) & 1) << i;
        }
        if f.eval(arg) {
            out |= 1 << c;
        }
    }
    out
}

/// Searches all `|R|^arity(f)` tuple choices for one whose image leaves `R`.
pub fn preservation_witness(
    f: &BoolFun,
    r: &Relation,
    budget: &Budget,
) -> Result<Option<PreservationFailure>> {
    let tuples: Vec<u64> = r.tuples().collect();
    let l = f.arity();
    let choices = (tuples.len() as u128).checked_pow(l as u32).unwrap_or(u128::MAX);
    Budget::check("preservation choices", choices, budget.preserve_choices)?;
    if tuples.is_empty() && l > 0 {
        return Ok(None);
    }
    let k = r.arity();
    let mut idx = vec![0usize; l];
    let mut chosen = vec![0u64; l];
    loop {
        for (c, &i) in chosen.iter_mut().zip(&idx) {
            *c = tuples[i];
        }
        let img = image(f, k, &chosen);
        if !r.contains(img) {
            return Ok(Some(PreservationFailure {
                function: *f,
                relation: r.label(),
                tuples: chosen.iter().map(|&t| r.tuple_string(t)).collect(),
                image: r.tuple_string(img),
            }));
        }
        // odometer
        let mut pos = 0;
        loop {
            if pos == l {
                return Ok(None);
            }
            idx[pos] += 1;
            if idx[pos] < tuples.len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// Whether `f` is a polymorphism of `r`.
pub fn preserves(f: &BoolFun, r: &Relation, budget: &Budget) -> Result<bool> {
    Ok(preservation_witness(f, r, budget)?.is_none())
}

pub fn preserves_set(f: &BoolFun, s: &RelationSet, budget: &Budget) -> Result<bool> {
    for r in s {
        if !preserves(f, r, budget)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// All polymorphisms of `s` with arity `1..=a`, in canonical order.
pub fn polymorphisms_up_to(s: &RelationSet, a: usize, budget: &Budget) -> Result<Vec<BoolFun>> {
    if a > budget.max_arity.min(MAX_ARITY) {
        return Err(Error::Arity {
            arity: a,
            max: budget.max_arity.min(MAX_ARITY),
        });
    }
    let candidates: u128 = (1..=a).map(|j| 1u128 << (1u32 << j)).sum();
    Budget::check("polymorphism candidates", candidates, budget.candidates)?;
    let mut out = Vec::new();
    for j in 1..=a {
        let count = 1u64 << (1u32 << j);
        let found: Result<Vec<Option<BoolFun>>> = (0..count)
            .into_par_iter()
            .map(|table| {
                let f = BoolFun::new(j, table)?;
                Ok(preserves_set(&f, s, budget)?.then_some(f))
            })
            .collect();
        out.extend(found?.into_iter().flatten());
    }
    Ok(out)
}

/// Incremental closure of the `arity`-ary fragment generated by a growing
/// set of generators. Stored functions are full `arity`-ary tables.
struct ClosureState {
    arity: usize,
    funcs: Vec<u64>,
    seen: HashSet<u64>,
    gens: Vec<(BoolFun, usize)>,
}

impl ClosureState {
    fn new(arity: usize) -> Self {
        let mut st = ClosureState {
            arity,
            funcs: Vec::new(),
            seen: HashSet::new(),
            gens: Vec::new(),
        };
        for i in 0..arity {
            st.push(projection_table(arity, i));
        }
        st
    }

    fn push(&mut self, t: u64) {
        if self.seen.insert(t) {
            self.funcs.push(t);
        }
    }

    fn contains(&self, f: &BoolFun) -> bool {
        f.arity() <= self.arity && self.seen.contains(&f.pad(self.arity).table())
    }

    fn add_generator(&mut self, g: BoolFun) {
        if !self.contains(&g) {
            self.gens.push((g, 0));
            self.saturate();
        }
    }

    /// Applies every generator to every tuple of stored functions that has
    /// not been tried yet, until nothing new appears.
    fn saturate(&mut self) {
        loop {
            let mut grew = false;
            for gi in 0..self.gens.len() {
                let (g, done) = self.gens[gi];
                let len = self.funcs.len();
                if done == len {
                    continue;
                }
                let k = g.arity();
                let mut fresh = Vec::new();
                if k == 0 {
                    fresh.push(g.compose_tables(&[], self.arity));
                } else {
                    let mut idx = vec![0usize; k];
                    let mut args = vec![0u64; k];
                    'outer: loop {
                        // only tuples touching at least one unprocessed function
                        if idx.iter().any(|&i| i >= done) {
                            for (a, &i) in args.iter_mut().zip(&idx) {
                                *a = self.funcs[i];
                            }
                            let t = g.compose_tables(&args, self.arity);
                            if !self.seen.contains(&t) {
                                fresh.push(t);
                            }
                        }
                        let mut pos = 0;
                        loop {
                            if pos == k {
                                break 'outer;
                            }
                            idx[pos] += 1;
                            if idx[pos] < len {
                                break;
                            }
                            idx[pos] = 0;
                            pos += 1;
                        }
                    }
                }
                self.gens[gi].1 = len;
                for t in fresh {
                    if self.seen.insert(t) {
                        self.funcs.push(t);
                        grew = true;
                    }
                }
            }
            if !grew && self.gens.iter().all(|&(_, d)| d == self.funcs.len()) {
                break;
            }
        }
    }
}

/// The functions of arity `1..=a` in the clone generated by `basis`.
///
/// Works on `a`-ary tables: the `a`-ary part of `[B]` is the set of terms
/// over `B` in `a` variables, and a function of smaller arity belongs to
/// `[B]` iff its padding to arity `a` does. Generators already derivable
/// from earlier ones are skipped.
pub fn closure_up_to(basis: &[BoolFun], a: usize, budget: &Budget) -> Result<Vec<BoolFun>> {
    if a == 0 || a > budget.max_arity.min(MAX_ARITY) {
        return Err(Error::Arity {
            arity: a,
            max: budget.max_arity.min(MAX_ARITY),
        });
    }
    let mut gens: Vec<BoolFun> = basis.to_vec();
    gens.sort();
    gens.dedup();
    let mut st = ClosureState::new(a);
    for g in gens {
        st.add_generator(g);
    }
    let top: BTreeSet<u64> = st.funcs.iter().copied().collect();
    let mut out = Vec::new();
    for j in 1..=a {
        let low = (1u64 << j) - 1;
        for table in 0..(1u64 << (1u32 << j)) {
            let f = BoolFun::new(j, table)?;
            let padded = BoolFun::from_fn(a, |x| f.eval(x & low));
            if top.contains(&padded.table()) {
                out.push(f);
            }
        }
    }
    Ok(out)
}
