//! Named clones of Post's lattice, basis-preservation checks and the
//! size/depth dichotomy verdicts for `CSP-SAT(S)`.
//!
//! `Pol(S)` is closed under composition, so `[B] ⊆ Pol(S)` holds exactly
//! when every function of the basis `B` preserves every relation of `S`.
//! The verdict sides are read off seven such containment checks.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::boolfun::{closure_up_to, preservation_witness, BoolFun, PreservationFailure, Relation, RelationSet};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::reductions::cq::{find_cq, CqBudget, CqDefinition, CqSearch};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CloneDescriptor {
    pub name: &'static str,
    pub basis: Vec<BoolFun>,
    /// Immediate subclones recorded in the catalog.
    pub covers: Vec<&'static str>,
}

/// Static clone data with the transitive closure of its order.
#[derive(Debug, Clone)]
pub struct Catalog {
    clones: Vec<CloneDescriptor>,
    below: BTreeMap<&'static str, BTreeSet<&'static str>>,
}

fn f3(f: impl Fn(bool, bool, bool) -> bool) -> BoolFun {
    BoolFun::from_fn(3, |x| f(x & 1 == 1, x & 2 == 2, x & 4 == 4))
}

fn f2(f: impl Fn(bool, bool) -> bool) -> BoolFun {
    BoolFun::from_fn(2, |x| f(x & 1 == 1, x & 2 == 2))
}

/// Clones whose containment in `Pol(S)` decides the two dichotomies.
pub const DECISIVE: [&str; 7] = ["I0", "I1", "E2", "V2", "D2", "S00", "S10"];

impl Catalog {
    pub fn standard() -> Self {
        let c0 = BoolFun::constant(1, false);
        let c1 = BoolFun::constant(1, true);
        let and = BoolFun::and2();
        let or = BoolFun::or2();
        let not = BoolFun::negation();
        let xor2 = BoolFun::parity(2);
        let xor3 = BoolFun::parity(3);
        let eqv = f2(|x, y| x == y);
        let maj = BoolFun::maj3();
        let entries: Vec<(&'static str, Vec<BoolFun>, Vec<&'static str>)> = vec![
            ("I2", vec![BoolFun::identity()], vec![]),
            ("I0", vec![c0], vec!["I2"]),
            ("I1", vec![c1], vec!["I2"]),
            ("I", vec![c0, c1], vec!["I0", "I1"]),
            ("N2", vec![not], vec!["I2"]),
            ("N", vec![not, c1], vec!["N2", "I"]),
            ("E2", vec![and], vec!["I2"]),
            ("E0", vec![and, c0], vec!["E2", "I0"]),
            ("E1", vec![and, c1], vec!["E2", "I1"]),
            ("E", vec![and, c0, c1], vec!["E0", "E1", "I"]),
            ("V2", vec![or], vec!["I2"]),
            ("V0", vec![or, c0], vec!["V2", "I0"]),
            ("V1", vec![or, c1], vec!["V2", "I1"]),
            ("V", vec![or, c0, c1], vec!["V0", "V1", "I"]),
            ("L2", vec![xor3], vec!["I2"]),
            ("L3", vec![xor3, not], vec!["L2", "N2"]),
            ("L0", vec![xor2], vec!["L2", "I0"]),
            ("L1", vec![eqv], vec!["L2", "I1"]),
            ("L", vec![xor2, c1], vec!["L0", "L1", "L3", "N"]),
            ("D2", vec![maj], vec!["I2"]),
            ("D1", vec![f3(|x, y, z| (x && y) || (x && !z) || (y && !z))], vec!["D2", "L2"]),
            ("D", vec![f3(|x, y, z| (x && !y) || (x && !z) || (!y && !z))], vec!["D1", "L3"]),
            ("M2", vec![and, or], vec!["E2", "V2", "D2"]),
            ("M0", vec![and, or, c0], vec!["M2", "E0", "V0"]),
            ("M1", vec![and, or, c1], vec!["M2", "E1", "V1"]),
            ("M", vec![and, or, c0, c1], vec!["M0", "M1", "E", "V"]),
            ("S00", vec![f3(|x, y, z| x || (y && z))], vec!["V2"]),
            ("S01", vec![f3(|x, y, z| x || (y && z)), c1], vec!["S00", "V1"]),
            ("S02", vec![f3(|x, y, z| x || (y && !z))], vec!["S00"]),
            ("S0", vec![BoolFun::implication()], vec!["S01", "S02"]),
            ("S10", vec![f3(|x, y, z| x && (y || z))], vec!["E2"]),
            ("S11", vec![f3(|x, y, z| x && (y || z)), c0], vec!["S10", "E0"]),
            ("S12", vec![f3(|x, y, z| x && (y || !z))], vec!["S10"]),
            ("S1", vec![f2(|x, y| x && !y)], vec!["S11", "S12"]),
            ("R2", vec![BoolFun::ite()], vec!["M2", "D1", "S02", "S12"]),
            ("R0", vec![and, xor2], vec!["R2", "M0", "L0", "S1"]),
            ("R1", vec![or, eqv], vec!["R2", "M1", "L1", "S0"]),
            ("BF", vec![and, not], vec!["R0", "R1", "M", "D", "L"]),
        ];
        let clones: Vec<CloneDescriptor> = entries
            .into_iter()
            .map(|(name, basis, covers)| CloneDescriptor {
                name,
                basis,
                covers,
            })
            .collect();
        let mut below: BTreeMap<&'static str, BTreeSet<&'static str>> = BTreeMap::new();
        // entries are listed so that every cover precedes its superclone
        for c in &clones {
            let mut set = BTreeSet::new();
            for &sub in &c.covers {
                set.insert(sub);
                if let Some(s) = below.get(sub) {
                    set.extend(s.iter().copied());
                }
            }
            below.insert(c.name, set);
        }
        Catalog { clones, below }
    }

    /// Catalog validated once per process.
    pub fn global() -> Result<&'static Catalog> {
        static CATALOG: OnceLock<std::result::Result<Catalog, Error>> = OnceLock::new();
        CATALOG
            .get_or_init(|| {
                let cat = Catalog::standard();
                let report = cat.validate()?;
                if report.passed() {
                    Ok(cat)
                } else {
                    Err(Error::Catalog(report.failures().join("; ")))
                }
            })
            .as_ref()
            .map_err(Clone::clone)
    }

    pub fn clones(&self) -> &[CloneDescriptor] {
        &self.clones
    }

    pub fn get(&self, name: &str) -> Result<&CloneDescriptor> {
        self.clones
            .iter()
            .find(|c| c.name == name)
            .ok_or_else(|| Error::UnknownClone(name.to_string()))
    }

    /// Recorded (transitively closed) inclusion `sub ⊆ sup`.
    pub fn recorded_subclone(&self, sub: &str, sup: &str) -> bool {
        sub == sup || self.below.get(sup).is_some_and(|s| s.contains(sub))
    }

    pub fn recorded_pairs(&self) -> Vec<(&'static str, &'static str)> {
        self.below
            .iter()
            .flat_map(|(&sup, subs)| subs.iter().map(move |&sub| (sub, sup)))
            .collect()
    }

    /// Checks every recorded inclusion by comparing arity-3 closures of the
    /// bases. Bases have arity at most 3, so the comparison is exact.
    pub fn validate(&self) -> Result<CatalogReport> {
        let budget = Budget {
            max_arity: 3,
            ..Budget::default()
        };
        let mut closures: BTreeMap<&str, HashSet<BoolFun>> = BTreeMap::new();
        for c in &self.clones {
            if c.basis.iter().any(|f| f.arity() > 3) {
                return Err(Error::Catalog(format!("{} has a basis function above arity 3", c.name)));
            }
            closures.insert(c.name, closure_up_to(&c.basis, 3, &budget)?.into_iter().collect());
        }
        let mut checks = Vec::new();
        for (sub, sup) in self.recorded_pairs() {
            let ok = closures[sub].is_subset(&closures[sup]);
            checks.push(InclusionCheck {
                sub: sub.to_string(),
                sup: sup.to_string(),
                holds: ok,
            });
        }
        let mut antisymmetry = Vec::new();
        for (a, b) in self.recorded_pairs() {
            if self.recorded_subclone(b, a) {
                antisymmetry.push(format!("{a} and {b} recorded below each other"));
            }
        }
        for c in &self.clones {
            for d in &self.clones {
                if c.name < d.name && closures[c.name] == closures[d.name] {
                    antisymmetry.push(format!("{} and {} have equal closures", c.name, d.name));
                }
            }
        }
        Ok(CatalogReport {
            checks,
            antisymmetry,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InclusionCheck {
    pub sub: String,
    pub sup: String,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogReport {
    pub checks: Vec<InclusionCheck>,
    pub antisymmetry: Vec<String>,
}

impl CatalogReport {
    pub fn passed(&self) -> bool {
        self.antisymmetry.is_empty() && self.checks.iter().all(|c| c.holds)
    }

    pub fn failures(&self) -> Vec<String> {
        self.checks
            .iter()
            .filter(|c| !c.holds)
            .map(|c| format!("{} ⊄ {}", c.sub, c.sup))
            .chain(self.antisymmetry.iter().cloned())
            .collect()
    }

    pub fn holds(&self, sub: &str, sup: &str) -> Option<bool> {
        self.checks
            .iter()
            .find(|c| c.sub == sub && c.sup == sup)
            .map(|c| c.holds)
    }
}

/// Standalone validation of the standard catalog.
pub fn validate_catalog() -> Result<CatalogReport> {
    Catalog::standard().validate()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CloneCheck {
    pub clone: String,
    pub contained: bool,
    /// Present when some basis function fails to preserve some relation.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<PreservationFailure>,
}

/// `[C] ⊆ Pol(S)`, decided by basis preservation. On failure the witness
/// names the basis function, the relation and the offending tuples.
pub fn clone_contained_in_pol(c: &CloneDescriptor, s: &RelationSet, budget: &Budget) -> Result<CloneCheck> {
    for f in &c.basis {
        for r in s {
            if let Some(w) = preservation_witness(f, r, budget)? {
                return Ok(CloneCheck {
                    clone: c.name.to_string(),
                    contained: false,
                    witness: Some(w),
                });
            }
        }
    }
    Ok(CloneCheck {
        clone: c.name.to_string(),
        contained: true,
        witness: None,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Side {
    Easy,
    Hard,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum EqualityExpressibility {
    Yes { query: String, definition: Box<CqDefinition> },
    NoWithinBounds,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub input: String,
    /// Catalog clones contained in `Pol(S)`, in catalog order.
    pub preserved: Vec<String>,
    pub trivial: bool,
    /// Which of I0, I1 witnesses triviality.
    pub trivial_via: Vec<String>,
    /// Names of empty or full relations in the input.
    pub degenerate: Vec<String>,
    pub size_side: Side,
    pub depth_side: Side,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub equality: Option<EqualityExpressibility>,
    pub hardness: Vec<String>,
    pub checks: Vec<CloneCheck>,
}

impl Verdict {
    pub fn preserves(&self, clone: &str) -> bool {
        self.preserved.iter().any(|c| c == clone)
    }
}

pub const XOR_L_HARD: &str = "⊕L-hard under AC0 many-one reductions";
pub const L_HARD: &str = "L-hard under AC0 many-one reductions";
pub const OR_FRAGMENT_CANDIDATE: &str =
    "mAC0_3 if S cannot express equality (no definition found within search bounds)";

/// Classifies `CSP-SAT(S)` on both dichotomies from basis-preservation
/// checks against every catalog clone.
pub fn classify(s: &RelationSet, budget: &Budget) -> Result<Verdict> {
    let cat = Catalog::global()?;
    let mut checks = Vec::with_capacity(cat.clones().len());
    for c in cat.clones() {
        checks.push(clone_contained_in_pol(c, s, budget)?);
    }
    let preserved: Vec<String> = checks
        .iter()
        .filter(|c| c.contained)
        .map(|c| c.clone.clone())
        .collect();
    let has = |n: &str| preserved.iter().any(|p| p == n);
    let has_empty = s.iter().any(Relation::is_empty);
    let trivial_via: Vec<String> = ["I0", "I1"]
        .into_iter()
        .filter(|n| has(n) && !has_empty)
        .map(String::from)
        .collect();
    let size_easy = ["I0", "I1", "E2", "V2", "D2"].iter().any(|n| has(n));
    let depth_easy = ["I0", "I1", "S00", "S10", "D2"].iter().any(|n| has(n));
    let mut v = Verdict {
        input: s.label(),
        trivial: !trivial_via.is_empty(),
        trivial_via,
        degenerate: s.iter().filter(|r| r.is_degenerate()).map(Relation::label).collect(),
        size_side: if size_easy { Side::Easy } else { Side::Hard },
        depth_side: if depth_easy { Side::Easy } else { Side::Hard },
        preserved,
        equality: None,
        hardness: Vec::new(),
        checks,
    };
    v.hardness = hardness_consequences(&v);
    Ok(v)
}

/// `classify` plus the bounded equality search, which refines the
/// L-hardness annotation.
pub fn classify_with_equality(s: &RelationSet, budget: &Budget, cq: &CqBudget) -> Result<Verdict> {
    let mut v = classify(s, budget)?;
    v.equality = Some(can_express_equality(s, cq)?);
    v.hardness = hardness_consequences(&v);
    Ok(v)
}

/// Searches for a conjunctive query over `S` (no equality atoms) that
/// defines binary equality.
pub fn can_express_equality(s: &RelationSet, cq: &CqBudget) -> Result<EqualityExpressibility> {
    Ok(match find_cq(&Relation::equality(), s, cq)? {
        CqSearch::Found(d) => EqualityExpressibility::Yes {
            query: d.describe(),
            definition: Box::new(d),
        },
        CqSearch::NotFound => EqualityExpressibility::NoWithinBounds,
        CqSearch::Incomplete => EqualityExpressibility::Unknown,
    })
}

/// Hardness labels implied by a verdict: depth-hard sets are ⊕L-hard, and
/// non-trivial sets outside the OR/NAND fragment are L-hard.
pub fn hardness_consequences(v: &Verdict) -> Vec<String> {
    let mut out = Vec::new();
    if v.depth_side == Side::Hard {
        out.push(XOR_L_HARD.to_string());
    }
    if !v.trivial {
        let sep = v.preserves("S02") || v.preserves("S12");
        let expresses_eq = matches!(v.equality, Some(EqualityExpressibility::Yes { .. }));
        if !sep || expresses_eq {
            out.push(L_HARD.to_string());
        } else {
            out.push(OR_FRAGMENT_CANDIDATE.to_string());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b() -> Budget {
        Budget::default()
    }

    #[test]
    fn catalog_validates() {
        let report = validate_catalog().unwrap();
        assert!(report.passed(), "{:?}", report.failures());
        for (sub, sup) in [("V2", "S00"), ("E2", "S10"), ("L2", "L3"), ("N2", "L3")] {
            assert_eq!(report.holds(sub, sup), Some(true), "{sub} ⊆ {sup}");
        }
        let cat = Catalog::standard();
        for c in cat.clones() {
            if c.name != "I2" {
                assert_eq!(report.holds("I2", c.name), Some(true), "I2 ⊆ {}", c.name);
            }
        }
    }

    #[test]
    fn broken_catalog_is_flagged() {
        let mut cat = Catalog::standard();
        // claim D2 ⊆ S00, which is false (majority is not 0-separating)
        cat.below.get_mut("S00").unwrap().insert("D2");
        let r = cat.validate().unwrap();
        assert_eq!(r.holds("D2", "S00"), Some(false));
        assert!(!r.passed());
    }

    #[test]
    fn containment_examples() {
        let cat = Catalog::standard();
        let horn = RelationSet::horn3();
        assert!(clone_contained_in_pol(cat.get("E2").unwrap(), &horn, &b()).unwrap().contained);
        let or2 = RelationSet::new(vec![Relation::or(2)]);
        assert!(clone_contained_in_pol(cat.get("I1").unwrap(), &or2, &b()).unwrap().contained);
        let x0 = RelationSet::new(vec![Relation::xor(3, false)]);
        let chk = clone_contained_in_pol(cat.get("D2").unwrap(), &x0, &b()).unwrap();
        assert!(!chk.contained);
        let w = chk.witness.unwrap();
        // replay the witness
        let tuples: Vec<&str> = w.tuples.iter().map(String::as_str).collect();
        let r = Relation::xor(3, false);
        let picked = Relation::from_tuple_strings(3, &tuples).unwrap();
        assert_eq!(picked.mask() & !r.mask(), 0);
        let img = Relation::from_tuple_strings(3, &[w.image.as_str()]).unwrap();
        assert_eq!(img.mask() & r.mask(), 0);
        assert!(matches!(cat.get("Q7"), Err(Error::UnknownClone(_))));
    }

    #[test]
    fn classification_goldens() {
        let v = classify(&RelationSet::xor3(), &b()).unwrap();
        assert_eq!((v.size_side, v.depth_side, v.trivial), (Side::Hard, Side::Hard, false));
        assert!(v.hardness.iter().any(|h| h == XOR_L_HARD));
        let v = classify(&RelationSet::horn3(), &b()).unwrap();
        assert_eq!((v.size_side, v.depth_side), (Side::Easy, Side::Hard));
        assert!(v.hardness.iter().any(|h| h == XOR_L_HARD));
        let v = classify(&RelationSet::antihorn3(), &b()).unwrap();
        assert_eq!((v.size_side, v.depth_side), (Side::Easy, Side::Hard));
        let v = classify(&RelationSet::new(vec![Relation::or(2)]), &b()).unwrap();
        assert!(v.trivial && v.trivial_via == vec!["I1".to_string()]);
        assert!(v.hardness.is_empty());
        let v = classify(&RelationSet::new(vec![Relation::nand(2)]), &b()).unwrap();
        assert!(v.trivial && v.trivial_via == vec!["I0".to_string()]);
    }

    #[test]
    fn empty_relation_is_not_trivial() {
        let s = RelationSet::new(vec![Relation::new(2, 0).unwrap().named("never")]);
        let v = classify(&s, &b()).unwrap();
        assert!(!v.trivial);
        assert_eq!(v.degenerate, vec!["never".to_string()]);
        assert_eq!(v.size_side, Side::Easy);
    }

    #[test]
    fn equality_expressibility() {
        let cq = CqBudget::default();
        let imp = RelationSet::new(vec![Relation::implication()]);
        assert!(matches!(can_express_equality(&imp, &cq).unwrap(), EqualityExpressibility::Yes { .. }));
        let eq = RelationSet::new(vec![Relation::equality()]);
        assert!(matches!(can_express_equality(&eq, &cq).unwrap(), EqualityExpressibility::Yes { .. }));
        let or2 = RelationSet::new(vec![Relation::or(2)]);
        assert_eq!(can_express_equality(&or2, &cq).unwrap(), EqualityExpressibility::NoWithinBounds);
    }

    #[test]
    fn or_fragment_annotation() {
        // {OR^2, ¬x}: S02 ⊆ Pol, no equality, not trivial
        let s = RelationSet::new(vec![Relation::or(2), Relation::negative()]);
        let v = classify_with_equality(&s, &b(), &CqBudget::default()).unwrap();
        assert!(v.preserves("S02") && !v.trivial);
        assert!(!v.hardness.iter().any(|h| h == L_HARD));
        // adding implication makes equality expressible
        let s = s.with(Relation::implication());
        let v = classify_with_equality(&s, &b(), &CqBudget::default()).unwrap();
        assert!(v.hardness.iter().any(|h| h == L_HARD));
    }
}
