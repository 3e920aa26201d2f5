use serde::{Deserialize, Serialize};

use super::{table_mask, MAX_ARITY};
use crate::error::{Error, Result};

/// A `k`-ary Boolean relation, stored as the set of accepted tuples.
///
/// Tuple `t` is accepted iff bit `t` of `tuples` is set, where coordinate 1
/// is the least significant bit of `t`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "RelationRepr", try_from = "RelationRepr")]
pub struct Relation {
    arity: u8,
    tuples: u64,
    name: Option<String>,
}

#[derive(Serialize, Deserialize)]
struct RelationRepr {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    arity: usize,
    tuples: Vec<String>,
}

impl From<Relation> for RelationRepr {
    fn from(r: Relation) -> Self {
        RelationRepr {
            tuples: r.tuples().map(|t| r.tuple_string(t)).collect(),
            arity: r.arity(),
            name: r.name,
        }
    }
}

impl TryFrom<RelationRepr> for Relation {
    type Error = Error;

    fn try_from(r: RelationRepr) -> Result<Self> {
        let strs: Vec<&str> = r.tuples.iter().map(String::as_str).collect();
        let rel = Relation::from_tuple_strings(r.arity, &strs)?;
        Ok(match r.name {
            Some(n) => rel.named(n),
            None => rel,
        })
    }
}

impl Relation {
    pub fn new(arity: usize, tuples: u64) -> Result<Self> {
        if arity == 0 || arity > MAX_ARITY {
            return Err(Error::Arity {
                arity,
                max: MAX_ARITY,
            });
        }
        if tuples & !table_mask(arity) != 0 {
            return Err(Error::Invalid(format!(
                "tuple mask {tuples:#x} exceeds arity {arity}"
            )));
        }
        Ok(Relation {
            arity: arity as u8,
            tuples,
            name: None,
        })
    }

    pub fn from_fn(arity: usize, f: impl Fn(u64) -> bool) -> Self {
        let mut tuples = 0;
        for t in 0..(1u64 << arity) {
            if f(t) {
                tuples |= 1 << t;
            }
        }
        Relation::new(arity, tuples).expect("arity in range")
    }

    /// Parses tuples written as bit strings, leftmost character = coordinate 1.
    pub fn from_tuple_strings(arity: usize, tuples: &[&str]) -> Result<Self> {
        let mut mask = 0u64;
        for s in tuples {
            mask |= 1 << parse_tuple(arity, s)?;
        }
        Relation::new(arity, mask)
    }

    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    /// Name, or a synthesized label from the tuple mask.
    pub fn label(&self) -> String {
        self.name
            .clone()
            .unwrap_or_else(|| format!("R{}_{:x}", self.arity, self.tuples))
    }

    #[inline]
    pub fn arity(&self) -> usize {
        self.arity as usize
    }

    #[inline]
    pub fn mask(&self) -> u64 {
        self.tuples
    }

    #[inline]
    pub fn contains(&self, t: u64) -> bool {
        (self.tuples >> t) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.tuples.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.tuples == 0
    }

    pub fn is_full(&self) -> bool {
        self.tuples == table_mask(self.arity())
    }

    /// Empty and full relations trivialize any CSP they appear in.
    pub fn is_degenerate(&self) -> bool {
        self.is_empty() || self.is_full()
    }

    pub fn tuples(&self) -> impl Iterator<Item = u64> + '_ {
        let mut m = self.tuples;
        std::iter::from_fn(move || {
            if m == 0 {
                None
            } else {
                let t = m.trailing_zeros() as u64;
                m &= m - 1;
                Some(t)
            }
        })
    }

    pub fn tuple_string(&self, t: u64) -> String {
        (0..self.arity())
            .map(|i| if (t >> i) & 1 == 1 { '1' } else { '0' })
            .collect()
    }

    /// Same tuples regardless of name.
    pub fn same_tuples(&self, other: &Relation) -> bool {
        self.arity == other.arity && self.tuples == other.tuples
    }

    /// Every tuple complemented coordinatewise.
    pub fn negated(&self) -> Relation {
        let all = (1u64 << self.arity) - 1;
        let mut r = Relation::from_fn(self.arity(), |t| self.contains(!t & all));
        r.name = self.name.as_ref().map(|n| format!("neg_{n}"));
        r
    }

    /// `{(0, x) : x in R} ∪ {(1, not x) : x in R}` with the new coordinate first.
    pub fn with_complement_switch(&self) -> Result<Relation> {
        let k = self.arity();
        let all = (1u64 << k) - 1;
        let mut r = Relation::new(k + 1, 0)?;
        for t in self.tuples() {
            r.tuples |= 1 << (t << 1);
            r.tuples |= 1 << (((!t & all) << 1) | 1);
        }
        r.name = self.name.as_ref().map(|n| format!("sw_{n}"));
        Ok(r)
    }

    // Named relations used throughout.

    /// `x_1 xor ... xor x_k = b`.
    pub fn xor(k: usize, b: bool) -> Relation {
        Relation::from_fn(k, |t| (t.count_ones() % 2 == 1) == b)
            .named(format!("xor{k}_{}", b as u8))
    }

    pub fn or(k: usize) -> Relation {
        Relation::from_fn(k, |t| t != 0).named(format!("or{k}"))
    }

    pub fn nand(k: usize) -> Relation {
        let all = (1u64 << k) - 1;
        Relation::from_fn(k, |t| t != all).named(format!("nand{k}"))
    }

    pub fn equality() -> Relation {
        Relation::from_fn(2, |t| t == 0 || t == 3).named("eq")
    }

    /// `x_1 -> x_2`.
    pub fn implication() -> Relation {
        Relation::from_fn(2, |t| t != 1).named("imp")
    }

    /// Unary `x`.
    pub fn positive() -> Relation {
        Relation::from_fn(1, |t| t == 1).named("pos")
    }

    /// Unary `not x`.
    pub fn negative() -> Relation {
        Relation::from_fn(1, |t| t == 0).named("neg")
    }

    /// Clause over coordinates: bit `i` of `pos` puts literal `x_{i+1}`,
    /// bit `i` of `neg` puts `not x_{i+1}`.
    pub fn clause(k: usize, pos: u64, neg: u64) -> Relation {
        Relation::from_fn(k, |t| t & pos != 0 || !t & neg != 0)
    }
}

impl std::fmt::Debug for Relation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}{{", self.label())?;
        for (i, t) in self.tuples().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}", self.tuple_string(t))?;
        }
        write!(f, "}}")
    }
}

fn parse_tuple(arity: usize, s: &str) -> Result<u64> {
    if s.len() != arity {
        return Err(Error::Invalid(format!(
            "tuple `{s}` has length {}, expected {arity}",
            s.len()
        )));
    }
    let mut t = 0;
    for (i, c) in s.chars().enumerate() {
        match c {
            '0' => {}
            '1' => t |= 1 << i,
            _ => return Err(Error::Invalid(format!("bad tuple character `{c}`"))),
        }
    }
    Ok(t)
}

/// An ordered, finite set of relations. Order fixes instance bit layout.
#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
pub struct RelationSet {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub relations: Vec<Relation>,
}

impl RelationSet {
    pub fn new(relations: Vec<Relation>) -> Self {
        RelationSet {
            name: None,
            relations,
        }
    }

    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn label(&self) -> String {
        self.name.clone().unwrap_or_else(|| "S".to_string())
    }

    pub fn len(&self) -> usize {
        self.relations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.relations.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Relation> {
        self.relations.iter()
    }

    pub fn with(mut self, r: Relation) -> Self {
        self.relations.push(r);
        self
    }

    pub fn max_arity(&self) -> usize {
        self.relations.iter().map(Relation::arity).max().unwrap_or(0)
    }

    /// Index of the first relation equal to binary equality.
    pub fn equality_index(&self) -> Option<usize> {
        let eq = Relation::equality();
        self.relations.iter().position(|r| r.same_tuples(&eq))
    }

    pub fn negated(&self) -> RelationSet {
        RelationSet {
            name: self.name.as_ref().map(|n| format!("neg_{n}")),
            relations: self.relations.iter().map(Relation::negated).collect(),
        }
    }

    /// `{xor3 = 0, xor3 = 1}`: instances are 3-XOR-SAT formulas.
    pub fn xor3() -> Self {
        RelationSet::new(vec![Relation::xor(3, false), Relation::xor(3, true)]).named("xor3")
    }

    /// 3-Horn: `(¬x1 ∨ ¬x2 ∨ x3)`, `(¬x1 ∨ ¬x2 ∨ ¬x3)`, `(x)`.
    pub fn horn3() -> Self {
        RelationSet::new(vec![
            Relation::clause(3, 0b100, 0b011).named("horn_imp"),
            Relation::nand(3).named("horn_neg"),
            Relation::positive(),
        ])
        .named("horn3")
    }

    /// 3-anti-Horn: `(x1 ∨ x2 ∨ ¬x3)`, `(x1 ∨ x2 ∨ x3)`, `(¬x)`.
    pub fn antihorn3() -> Self {
        RelationSet::new(vec![
            Relation::clause(3, 0b011, 0b100).named("ahorn_imp"),
            Relation::or(3).named("ahorn_pos"),
            Relation::negative(),
        ])
        .named("antihorn3")
    }

    /// 2-SAT clause shapes `(x1 ∨ x2)`, `(x1 ∨ ¬x2)`, `(¬x1 ∨ ¬x2)`.
    pub fn two_sat() -> Self {
        RelationSet::new(vec![
            Relation::or(2),
            Relation::clause(2, 0b01, 0b10).named("or_neg"),
            Relation::nand(2),
        ])
        .named("2sat")
    }

    /// `{OR^k, x, ¬x, →, =}`.
    pub fn or_fragment(k: usize) -> Self {
        RelationSet::new(vec![
            Relation::or(k),
            Relation::positive(),
            Relation::negative(),
            Relation::implication(),
            Relation::equality(),
        ])
        .named(format!("orfrag{k}"))
    }

    /// All 16 binary relations in mask order.
    pub fn all_binary() -> Vec<Relation> {
        (0..16u64)
            .map(|m| Relation::new(2, m).unwrap().named(format!("b{m:x}")))
            .collect()
    }

    /// Parses the text format: one `rel <name> <arity> : t1 t2 ...` per line,
    /// `#` comments, and an optional `set <name>` line.
    pub fn parse(text: &str) -> Result<Self> {
        let mut set = RelationSet::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let perr = |msg: String| Error::Parse {
                line: lineno + 1,
                msg,
            };
            let mut words = line.split_whitespace();
            match words.next() {
                Some("set") => {
                    set.name = Some(
                        words
                            .next()
                            .ok_or_else(|| perr("set needs a name".into()))?
                            .to_string(),
                    )
                }
                Some("rel") => {
                    let name = words.next().ok_or_else(|| perr("missing name".into()))?;
                    let arity: usize = words
                        .next()
                        .ok_or_else(|| perr("missing arity".into()))?
                        .parse()
                        .map_err(|_| perr("arity is not a number".into()))?;
                    if arity == 0 || arity > MAX_ARITY {
                        return Err(perr(format!("arity {arity} outside 1..={MAX_ARITY}")));
                    }
                    if words.next() != Some(":") {
                        return Err(perr("expected `:` after arity".into()));
                    }
                    let tuples: Vec<&str> = words.collect();
                    let rel = Relation::from_tuple_strings(arity, &tuples)
                        .map_err(|e| perr(e.to_string()))?
                        .named(name);
                    set.relations.push(rel);
                }
                Some(other) => return Err(perr(format!("unknown directive `{other}`"))),
                None => {}
            }
        }
        Ok(set)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if let Some(n) = &self.name {
            out.push_str(&format!("set {n}\n"));
        }
        for r in &self.relations {
            out.push_str(&format!("rel {} {} :", r.label(), r.arity()));
            for t in r.tuples() {
                out.push(' ');
                out.push_str(&r.tuple_string(t));
            }
            out.push('\n');
        }
        out
    }
}

impl<'a> IntoIterator for &'a RelationSet {
    type Item = &'a Relation;
    type IntoIter = std::slice::Iter<'a, Relation>;

    fn into_iter(self) -> Self::IntoIter {
        self.relations.iter()
    }
}
