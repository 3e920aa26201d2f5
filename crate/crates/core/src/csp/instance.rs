use serde::{Deserialize, Serialize};

use crate::bits::BitSet;
use crate::boolfun::{Relation, RelationSet};
use crate::budget::Budget;
use crate::error::{Error, Result};

/// An `S`-formula over `n` variables as a point of `{0,1}^N`,
/// `N = sum_i n^{arity(R_i)}`.
///
/// Bit `offset(r) + rank(V)` is set iff the constraint `R_r(V)` is present.
/// `rank` reads `V` as a base-`n` number with coordinate 1 as the least
/// significant digit. Variables are 0-based.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CspInstance {
    set: RelationSet,
    n: usize,
    offsets: Vec<usize>,
    bits: BitSet,
}

/// One constraint application `R_r(vars)`.
#[derive(Clone, PartialEq, Eq, Debug, Hash, Serialize, Deserialize)]
pub struct Constraint {
    pub relation: usize,
    pub vars: Vec<usize>,
}

fn instance_len(set: &RelationSet, n: usize) -> Result<Vec<usize>> {
    let mut offsets = Vec::with_capacity(set.len() + 1);
    let mut total: usize = 0;
    offsets.push(0);
    for r in set {
        let block = u32::try_from(r.arity())
            .ok()
            .and_then(|a| n.checked_pow(a))
            .ok_or_else(|| Error::Invalid(format!("n^{} overflows", r.arity())))?;
        total = total
            .checked_add(block)
            .ok_or_else(|| Error::Invalid("instance length overflows".into()))?;
        offsets.push(total);
    }
    Ok(offsets)
}

impl CspInstance {
    /// The empty formula.
    pub fn empty(set: RelationSet, n: usize) -> Result<Self> {
        let offsets = instance_len(&set, n)?;
        let len = *offsets.last().unwrap();
        Ok(CspInstance {
            set,
            n,
            offsets,
            bits: BitSet::new(len),
        })
    }

    pub fn from_bits(set: RelationSet, n: usize, bits: BitSet) -> Result<Self> {
        let mut inst = CspInstance::empty(set, n)?;
        if bits.len() != inst.bits.len() {
            return Err(Error::Invalid(format!(
                "instance has {} bits, expected {}",
                bits.len(),
                inst.bits.len()
            )));
        }
        inst.bits = bits;
        Ok(inst)
    }

    pub fn from_constraints(set: RelationSet, n: usize, cs: &[Constraint]) -> Result<Self> {
        let mut inst = CspInstance::empty(set, n)?;
        for c in cs {
            inst.add(c.relation, &c.vars)?;
        }
        Ok(inst)
    }

    pub fn set(&self) -> &RelationSet {
        &self.set
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `N`.
    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &BitSet {
        &self.bits
    }

    pub fn offset(&self, r: usize) -> usize {
        self.offsets[r]
    }

    pub fn encode(&self, r: usize, vars: &[usize]) -> Result<usize> {
        let rel = self.set.relations.get(r).ok_or(Error::Index {
            index: r,
            len: self.set.len(),
        })?;
        if vars.len() != rel.arity() {
            return Err(Error::Arity {
                arity: vars.len(),
                max: rel.arity(),
            });
        }
        let mut rank = 0;
        for &v in vars.iter().rev() {
            if v >= self.n {
                return Err(Error::Index {
                    index: v,
                    len: self.n,
                });
            }
            rank = rank * self.n + v;
        }
        Ok(self.offsets[r] + rank)
    }

    pub fn decode(&self, j: usize) -> Result<Constraint> {
        if j >= self.len() {
            return Err(Error::Index {
                index: j,
                len: self.len(),
            });
        }
        let r = self.offsets.partition_point(|&o| o <= j) - 1;
        let mut rank = j - self.offsets[r];
        let vars = (0..self.set.relations[r].arity())
            .map(|_| {
                let v = rank % self.n;
                rank /= self.n;
                v
            })
            .collect();
        Ok(Constraint { relation: r, vars })
    }

    pub fn add(&mut self, r: usize, vars: &[usize]) -> Result<usize> {
        let j = self.encode(r, vars)?;
        self.bits.insert(j);
        Ok(j)
    }

    pub fn contains(&self, r: usize, vars: &[usize]) -> Result<bool> {
        Ok(self.bits.get(self.encode(r, vars)?))
    }

    pub fn with_bits(&self, bits: BitSet) -> Result<Self> {
        CspInstance::from_bits(self.set.clone(), self.n, bits)
    }

    /// Same bits read over another relation set of identical arities.
    pub fn reinterpret(&self, set: RelationSet) -> Result<Self> {
        let same = set.len() == self.set.len()
            && set.iter().zip(&self.set).all(|(a, b)| a.arity() == b.arity());
        if !same {
            return Err(Error::Invalid("relation arities differ".into()));
        }
        CspInstance::from_bits(set, self.n, self.bits.clone())
    }

    pub fn constraints(&self) -> impl Iterator<Item = Constraint> + '_ {
        self.bits.ones().map(|j| self.decode(j).expect("set bit in range"))
    }

    pub fn relation(&self, r: usize) -> &Relation {
        &self.set.relations[r]
    }

    /// Whether the constraint at bit `j` holds under `a`.
    pub fn eval_constraint(&self, j: usize, a: &BitSet) -> Result<bool> {
        if a.len() != self.n {
            return Err(Error::Invalid(format!(
                "assignment has {} values, instance has {} variables",
                a.len(),
                self.n
            )));
        }
        let c = self.decode(j)?;
        let t = c
            .vars
            .iter()
            .enumerate()
            .fold(0u64, |t, (i, &v)| t | (a.get(v) as u64) << i);
        Ok(self.set.relations[c.relation].contains(t))
    }

    pub fn satisfied_by(&self, a: &BitSet) -> Result<bool> {
        for j in self.bits.ones() {
            if !self.eval_constraint(j, a)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `CSP-SAT(w)`: true iff no assignment satisfies every present
    /// constraint. Enumerates assignments to the variables that occur.
    pub fn csp_sat_value(&self, budget: &Budget) -> Result<bool> {
        Ok(self.brute_force_model(budget)?.is_none())
    }

    /// A satisfying assignment found by enumeration, if any.
    pub fn brute_force_model(&self, budget: &Budget) -> Result<Option<BitSet>> {
        let cs: Vec<Constraint> = self.constraints().collect();
        let mut local = vec![usize::MAX; self.n];
        let mut used = Vec::new();
        for c in &cs {
            for &v in &c.vars {
                if local[v] == usize::MAX {
                    local[v] = used.len();
                    used.push(v);
                }
            }
        }
        Budget::check(
            "brute-force variables",
            used.len() as u128,
            budget.brute_force_vars.min(63) as u128,
        )?;
        let compiled: Vec<(u64, Vec<usize>)> = cs
            .iter()
            .map(|c| {
                let mask = self.set.relations[c.relation].mask();
                (mask, c.vars.iter().map(|&v| local[v]).collect())
            })
            .collect();
        let found = (0..1u64 << used.len()).find(|&a| {
            compiled.iter().all(|(mask, vars)| {
                let t = vars
                    .iter()
                    .enumerate()
                    .fold(0u64, |t, (i, &v)| t | (a >> v & 1) << i);
                mask >> t & 1 == 1
            })
        });
        Ok(found.map(|a| BitSet::from_indices(self.n, (0..used.len()).filter(|&i| a >> i & 1 == 1).map(|i| used[i]))))
    }

    /// One `name(x1,x2,...)` line per present constraint, 1-based.
    pub fn listing(&self) -> String {
        let mut out = String::new();
        for c in self.constraints() {
            let vars: Vec<String> = c.vars.iter().map(|v| format!("x{}", v + 1)).collect();
            out.push_str(&format!(
                "{}({})\n",
                self.set.relations[c.relation].label(),
                vars.join(",")
            ));
        }
        out
    }
}

#[derive(Serialize, Deserialize)]
struct InstanceRepr {
    relation_set: RelationSet,
    n: usize,
    set_bits: Vec<usize>,
}

impl Serialize for CspInstance {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        InstanceRepr {
            relation_set: self.set.clone(),
            n: self.n,
            set_bits: self.bits.ones().collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CspInstance {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = InstanceRepr::deserialize(d)?;
        let mut inst = CspInstance::empty(r.relation_set, r.n).map_err(D::Error::custom)?;
        for j in r.set_bits {
            if j >= inst.len() {
                return Err(D::Error::custom(format!("bit {j} out of range")));
            }
            inst.bits.insert(j);
        }
        Ok(inst)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn length_and_layout() {
        let inst = CspInstance::empty(RelationSet::xor3(), 4).unwrap();
        assert_eq!(inst.len(), 2 * 64);
        assert_eq!(inst.encode(0, &[0, 0, 0]).unwrap(), 0);
        assert_eq!(inst.encode(0, &[1, 0, 0]).unwrap(), 1);
        assert_eq!(inst.encode(0, &[0, 1, 0]).unwrap(), 4);
        assert_eq!(inst.encode(1, &[3, 3, 3]).unwrap(), 127);
        let h = CspInstance::empty(RelationSet::horn3(), 3).unwrap();
        assert_eq!(h.len(), 2 * 27 + 3);
        assert_eq!(h.decode(55).unwrap(), Constraint { relation: 2, vars: vec![1] });
    }

    #[test]
    fn eval_examples() {
        let mut inst = CspInstance::empty(RelationSet::new(vec![Relation::or(2)]), 2).unwrap();
        let j = inst.add(0, &[0, 1]).unwrap();
        assert!(inst.eval_constraint(j, &BitSet::from_mask(2, 0b01)).unwrap());
        assert!(!inst.eval_constraint(j, &BitSet::from_mask(2, 0b00)).unwrap());
        let x = CspInstance::empty(RelationSet::new(vec![Relation::xor(3, true)]), 2).unwrap();
        let j = x.encode(0, &[0, 0, 0]).unwrap();
        assert!(x.eval_constraint(j, &BitSet::from_mask(2, 1)).unwrap());
        let e = CspInstance::empty(RelationSet::new(vec![Relation::equality()]), 3).unwrap();
        for a in 0..8 {
            assert!(e.eval_constraint(e.encode(0, &[1, 1]).unwrap(), &BitSet::from_mask(3, a)).unwrap());
        }
        assert!(matches!(x.eval_constraint(99, &BitSet::new(2)), Err(Error::Index { .. })));
    }

    #[test]
    fn sat_value_examples() {
        let b = Budget::default();
        let set = RelationSet::new(vec![Relation::positive(), Relation::negative()]);
        let mut inst = CspInstance::empty(set, 2).unwrap();
        assert!(!inst.csp_sat_value(&b).unwrap());
        inst.add(0, &[0]).unwrap();
        assert!(!inst.csp_sat_value(&b).unwrap());
        inst.add(1, &[0]).unwrap();
        assert!(inst.csp_sat_value(&b).unwrap());
        // triangle Tseitin over xor3 with repeats: x12 ⊕ x13 = 1 etc. written
        // as xor3_1(a, b, c) with c pinned to 0 through xor3_0(c, c, c)
        let mut t = CspInstance::empty(RelationSet::xor3(), 4).unwrap();
        for (a, c) in [(0, 1), (0, 2), (1, 2)] {
            t.add(1, &[a, c, 3]).unwrap();
        }
        t.add(0, &[3, 3, 3]).unwrap();
        assert!(t.csp_sat_value(&b).unwrap());
        let small = Budget { brute_force_vars: 3, ..b };
        assert!(matches!(t.csp_sat_value(&small), Err(Error::Budget { .. })));
    }

    #[test]
    fn json_roundtrip() {
        let mut inst = CspInstance::empty(RelationSet::horn3(), 3).unwrap();
        inst.add(0, &[0, 1, 2]).unwrap();
        inst.add(2, &[1]).unwrap();
        let s = serde_json::to_string(&inst).unwrap();
        let back: CspInstance = serde_json::from_str(&s).unwrap();
        assert_eq!(back, inst);
        assert_eq!(inst.listing(), "horn_imp(x1,x2,x3)\npos(x2)\n");
    }
}
