use serde::{Deserialize, Serialize};

use super::bitred::BitReduction;
use super::cq::{find_cq, CqBudget, CqDefinition, CqSearch};
use crate::bits::BitSet;
use crate::boolfun::{polymorphisms_up_to, preserves_set, Relation, RelationSet};
use crate::budget::Budget;
use crate::csp::CspInstance;
use crate::error::{Error, Result};

/// Drops the equality relation at `eq` from the set. Every constraint
/// `R(x_1..x_k)` generates `R(y_1..y_k)` for all `y_i` joined to `x_i` by a
/// path of equality constraints; the output keeps exactly the generated
/// constraints and is equi-satisfiable with the input.
pub fn eliminate_equality_at(inst: &CspInstance, eq: usize) -> Result<CspInstance> {
    let set = inst.set();
    if eq >= set.len() || !set.relations[eq].same_tuples(&Relation::equality()) {
        return Err(Error::Invalid(format!("relation {eq} is not equality")));
    }
    let n = inst.n();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let cs: Vec<_> = inst.constraints().collect();
    for c in cs.iter().filter(|c| c.relation == eq) {
        let (a, b) = (find(&mut parent, c.vars[0]), find(&mut parent, c.vars[1]));
        parent[a] = b;
    }
    let mut class: Vec<Vec<usize>> = vec![Vec::new(); n];
    for v in 0..n {
        let r = find(&mut parent, v);
        class[r].push(v);
    }
    let members: Vec<Vec<usize>> = (0..n).map(|v| class[find(&mut parent, v)].clone()).collect();
    let mut rels = set.relations.clone();
    rels.remove(eq);
    let mut out_set = RelationSet::new(rels);
    out_set.name = set.name.clone();
    let mut out = CspInstance::empty(out_set, n)?;
    for c in cs.iter().filter(|c| c.relation != eq) {
        let r = if c.relation > eq { c.relation - 1 } else { c.relation };
        let choices: Vec<&Vec<usize>> = c.vars.iter().map(|&v| &members[v]).collect();
        let mut idx = vec![0usize; choices.len()];
        loop {
            let vars: Vec<usize> = idx.iter().zip(&choices).map(|(&i, ch)| ch[i]).collect();
            out.add(r, &vars)?;
            let Some(p) = (0..idx.len()).find(|&p| idx[p] + 1 < choices[p].len()) else {
                break;
            };
            idx[p] += 1;
            for q in idx.iter_mut().take(p) {
                *q = 0;
            }
        }
    }
    Ok(out)
}

/// `eliminate_equality_at` for the first equality relation of the set.
pub fn eliminate_equality(inst: &CspInstance) -> Result<CspInstance> {
    match inst.set().equality_index() {
        Some(eq) => eliminate_equality_at(inst, eq),
        None => Ok(inst.clone()),
    }
}

/// Replaces every constraint `R_r(V)` by the atoms of `defs[r]`, with the
/// definition's coordinates bound to `V` and its auxiliary variables fresh.
/// Each possible input bit owns a block of auxiliary variables, appended
/// after the original variables in bit order, so every output bit is an OR
/// of input bits.
pub fn cq_rewrite(inst: &CspInstance, defs: &[CqDefinition]) -> Result<(CspInstance, BitReduction)> {
    let set = inst.set();
    if defs.len() != set.len() {
        return Err(Error::Invalid(format!("{} definitions for {} relations", defs.len(), set.len())));
    }
    let over = defs.first().map(|d| d.over.clone()).unwrap_or_default();
    for (d, r) in defs.iter().zip(set) {
        if d.over != over {
            return Err(Error::Invalid("definitions use different target sets".into()));
        }
        if !d.target.same_tuples(r) {
            return Err(Error::Invalid(format!("definition for {} defines another relation", r.label())));
        }
        if !d.verify()? {
            return Err(Error::Invalid(format!("definition for {} fails its semantics check", r.label())));
        }
    }
    let big_n = inst.len();
    let mut aux_base = Vec::with_capacity(big_n);
    let mut next = inst.n();
    for r in 0..set.len() {
        let block = inst.offset(r + 1) - inst.offset(r);
        for _ in 0..block {
            aux_base.push(next);
            next += defs[r].aux_count;
        }
    }
    let mut out = CspInstance::empty(over, next)?;
    let mut red = BitReduction::new(big_n, out.len(), false);
    for j in 0..big_n {
        let c = inst.decode(j)?;
        let d = &defs[c.relation];
        let k = c.vars.len();
        for atom in &d.atoms {
            let vars: Vec<usize> = atom
                .vars
                .iter()
                .map(|&v| if v < k { c.vars[v] } else { aux_base[j] + v - k })
                .collect();
            let o = out.encode(atom.relation, &vars)?;
            red.or_into(o, j);
        }
    }
    red.normalize();
    let bits = red.apply(inst.bits())?;
    out = out.with_bits(bits)?;
    Ok((out, red))
}

/// The chain `CSP(S1) -> CSP(S2 ∪ {=}) -> CSP(S2)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolReduction {
    pub definitions: Vec<CqDefinition>,
    /// Instance over `S2 ∪ {=}` after rewriting.
    pub intermediate: CspInstance,
    /// The OR-reduction of the rewriting step.
    pub or_step: BitReduction,
    pub instance: CspInstance,
    /// `Pol(S2) ⊆ Pol(S1)` restricted to the checked arity, when checked.
    pub pol_inclusion: Option<bool>,
}

/// Defines every relation of the input's set by a conjunctive query over
/// `S2 ∪ {=}`, rewrites, then eliminates equality. `None` when some
/// definition is not found within the search bounds.
pub fn pol_reduce(inst: &CspInstance, s2: &RelationSet, cq: &CqBudget, budget: &Budget) -> Result<Option<PolReduction>> {
    let mut with_eq = s2.clone().with(Relation::equality());
    with_eq.name = s2.name.clone();
    let eq = with_eq.len() - 1;
    let mut defs = Vec::new();
    for r in inst.set() {
        match find_cq(r, &with_eq, cq)? {
            CqSearch::Found(d) => defs.push(d),
            CqSearch::NotFound | CqSearch::Incomplete => return Ok(None),
        }
    }
    let pol_inclusion = if budget.max_arity >= 2 {
        let pols = polymorphisms_up_to(s2, 2, budget)?;
        let mut ok = true;
        for f in &pols {
            ok &= preserves_set(f, inst.set(), budget)?;
        }
        Some(ok)
    } else {
        None
    };
    let (intermediate, or_step) = cq_rewrite(inst, &defs)?;
    let instance = eliminate_equality_at(&intermediate, eq)?;
    Ok(Some(PolReduction {
        definitions: defs,
        intermediate,
        or_step,
        instance,
        pol_inclusion,
    }))
}

/// Same bits over the complemented relations; the satisfying assignments
/// are complemented.
pub fn negate_relations(s: &RelationSet) -> RelationSet {
    s.negated()
}

/// Instance over the complemented relations together with its (identity)
/// projection.
pub fn negate_instance(inst: &CspInstance) -> Result<(CspInstance, BitReduction)> {
    let out = inst.reinterpret(inst.set().negated())?;
    Ok((out, identity_reduction(inst.len())))
}

pub fn identity_reduction(len: usize) -> BitReduction {
    let mut r = BitReduction::new(len, len, false);
    for j in 0..len {
        r.set(j, super::BitDef::Input(j));
    }
    r
}

/// Every relation `R` becomes the complement-closed `R'(a, x) = R(x) if
/// a = 0, R(¬x) if a = 1`, and every constraint `R(V)` becomes `R'(α, V)`
/// for one fresh variable `α = x_{n+1}`.
pub fn l2_to_l3_transform(inst: &CspInstance) -> Result<(CspInstance, BitReduction)> {
    let rels = inst
        .set()
        .iter()
        .map(|r| {
            let s = r.with_complement_switch()?;
            Ok(s.named(format!("{}'", r.label())))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut set = RelationSet::new(rels);
    set.name = inst.set().name.as_ref().map(|n| format!("{n}'"));
    let alpha = inst.n();
    let mut out = CspInstance::empty(set, alpha + 1)?;
    let mut red = BitReduction::new(inst.len(), out.len(), false);
    for j in 0..inst.len() {
        let c = inst.decode(j)?;
        let mut vars = vec![alpha];
        vars.extend(&c.vars);
        red.set(out.encode(c.relation, &vars)?, super::BitDef::Input(j));
    }
    out = out.with_bits(red.apply(inst.bits())?)?;
    Ok((out, red))
}

/// Applies a reduction to an instance's bits and reads them over `set`
/// with `n` variables.
pub fn apply_reduction(red: &BitReduction, inst: &CspInstance, set: RelationSet, n: usize) -> Result<CspInstance> {
    let bits: BitSet = red.apply(inst.bits())?;
    CspInstance::from_bits(set, n, bits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::csp::make_random;

    fn b() -> Budget {
        Budget::default()
    }

    #[test]
    fn equality_generation() {
        let set = RelationSet::new(vec![Relation::equality(), Relation::implication()]);
        let mut inst = CspInstance::empty(set, 3).unwrap();
        inst.add(0, &[0, 1]).unwrap();
        inst.add(1, &[1, 2]).unwrap();
        let out = eliminate_equality(&inst).unwrap();
        assert_eq!(out.set().len(), 1);
        assert!(out.contains(0, &[0, 2]).unwrap() && out.contains(0, &[1, 2]).unwrap());
        assert_eq!(out.constraints().count(), 2);
        let plain = CspInstance::empty(RelationSet::xor3(), 2).unwrap();
        assert_eq!(eliminate_equality(&plain).unwrap(), plain);
    }

    #[test]
    fn equality_elimination_preserves_value() {
        let set = RelationSet::new(vec![Relation::or(2), Relation::equality(), Relation::negative()]);
        for seed in 0..200 {
            let inst = make_random(&set, 4, 0.15, seed).unwrap();
            let out = eliminate_equality(&inst).unwrap();
            assert_eq!(inst.csp_sat_value(&b()).unwrap(), out.csp_sat_value(&b()).unwrap(), "seed {seed}");
        }
    }

    #[test]
    fn rewrite_equality_over_implication() {
        let s1 = RelationSet::new(vec![Relation::equality()]);
        let s2 = RelationSet::new(vec![Relation::implication()]);
        let def = match find_cq(&Relation::equality(), &s2, &CqBudget::default()).unwrap() {
            CqSearch::Found(d) => d,
            o => panic!("{o:?}"),
        };
        let mut inst = CspInstance::empty(s1, 3).unwrap();
        inst.add(0, &[0, 2]).unwrap();
        let (out, red) = cq_rewrite(&inst, &[def]).unwrap();
        assert!(red.is_monotone_or());
        assert!(out.contains(0, &[0, 2]).unwrap() && out.contains(0, &[2, 0]).unwrap());
        assert_eq!(out.constraints().count(), 2);
    }

    #[test]
    fn identity_rewrite_is_projection() {
        let s = RelationSet::horn3();
        let defs: Vec<_> = s.iter().enumerate().map(|(i, r)| CqDefinition::identity(r, &s, i)).collect();
        let inst = make_random(&s, 3, 0.1, 4).unwrap();
        let (out, red) = cq_rewrite(&inst, &defs).unwrap();
        assert_eq!(out, inst);
        assert!(red.is_projection());
    }

    #[test]
    fn pol_reduce_xor() {
        let s1 = RelationSet::new(vec![Relation::xor(2, true), Relation::xor(4, false)]);
        for seed in 0..40 {
            let inst = make_random(&s1, 4, 0.02, seed).unwrap();
            let pr = pol_reduce(&inst, &RelationSet::xor3(), &CqBudget::default(), &b()).unwrap().unwrap();
            assert!(pr.or_step.is_monotone_or());
            assert_eq!(pr.pol_inclusion, Some(true));
            assert_eq!(inst.csp_sat_value(&b()).unwrap(), pr.instance.csp_sat_value(&b()).unwrap());
        }
        let or2 = RelationSet::new(vec![Relation::or(2)]);
        let inst = CspInstance::empty(RelationSet::xor3(), 2).unwrap();
        let small = CqBudget { aux_vars: 1, max_atoms: 2, ..CqBudget::default() };
        assert!(pol_reduce(&inst, &or2, &small, &b()).unwrap().is_none());
    }

    #[test]
    fn transforms() {
        assert_eq!(negate_relations(&RelationSet::new(vec![Relation::or(2)])).relations[0].mask(), Relation::nand(2).mask());
        let s = RelationSet::horn3();
        let back = negate_relations(&negate_relations(&s));
        assert!(back.iter().zip(&s).all(|(a, b)| a.same_tuples(b)));
        let x = RelationSet::new(vec![Relation::xor(3, true)]);
        for seed in 0..100 {
            let inst = make_random(&x, 4, 0.05, seed).unwrap();
            let (out, red) = l2_to_l3_transform(&inst).unwrap();
            assert!(red.is_projection());
            assert_eq!(out.n(), 5);
            assert_eq!(inst.csp_sat_value(&b()).unwrap(), out.csp_sat_value(&b()).unwrap());
            let (neg, _) = negate_instance(&inst).unwrap();
            assert_eq!(inst.csp_sat_value(&b()).unwrap(), neg.csp_sat_value(&b()).unwrap());
        }
    }
}
