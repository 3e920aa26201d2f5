use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::bits::BitSet;
use crate::error::{Error, Result};

/// One output bit of a reduction.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BitDef {
    Const(bool),
    Input(usize),
    Or(Vec<usize>),
}

impl BitDef {
    fn eval(&self, x: &BitSet) -> bool {
        match self {
            BitDef::Const(b) => *b,
            BitDef::Input(i) => x.get(*i),
            BitDef::Or(v) => v.iter().any(|&i| x.get(i)),
        }
    }
}

/// A map `{0,1}^in_len -> {0,1}^out_len` in which every output bit is a
/// constant, an input bit, or an OR of input bits. Bits not listed in
/// `defs` equal `fill`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitReduction {
    pub in_len: usize,
    pub out_len: usize,
    fill: bool,
    defs: BTreeMap<usize, BitDef>,
}

impl BitReduction {
    pub fn new(in_len: usize, out_len: usize, fill: bool) -> Self {
        BitReduction {
            in_len,
            out_len,
            fill,
            defs: BTreeMap::new(),
        }
    }

    pub fn set(&mut self, out: usize, def: BitDef) {
        assert!(out < self.out_len);
        self.defs.insert(out, def);
    }

    /// Adds `input` to the disjunction defining `out`.
    pub fn or_into(&mut self, out: usize, input: usize) {
        assert!(out < self.out_len && input < self.in_len);
        let d = self.defs.entry(out).or_insert(BitDef::Or(Vec::new()));
        match d {
            BitDef::Or(v) => {
                if !v.contains(&input) {
                    v.push(input)
                }
            }
            BitDef::Input(i) => {
                if *i != input {
                    *d = BitDef::Or(vec![*i, input])
                }
            }
            BitDef::Const(true) => {}
            BitDef::Const(false) => *d = BitDef::Input(input),
        }
    }

    pub fn def(&self, out: usize) -> BitDef {
        self.defs.get(&out).cloned().unwrap_or(BitDef::Const(self.fill))
    }

    pub fn defined(&self) -> impl Iterator<Item = (usize, &BitDef)> {
        self.defs.iter().map(|(&k, v)| (k, v))
    }

    /// Rewrites single-operand ORs as inputs and empty ORs as constant 0.
    pub fn normalize(&mut self) {
        for d in self.defs.values_mut() {
            if let BitDef::Or(v) = d {
                v.sort_unstable();
                match v[..] {
                    [] => *d = BitDef::Const(false),
                    [i] => *d = BitDef::Input(i),
                    _ => {}
                }
            }
        }
    }

    pub fn apply(&self, x: &BitSet) -> Result<BitSet> {
        if x.len() != self.in_len {
            return Err(Error::Invalid(format!("reduction input has {} bits, expected {}", x.len(), self.in_len)));
        }
        let mut out = if self.fill { BitSet::full(self.out_len) } else { BitSet::new(self.out_len) };
        for (&k, d) in &self.defs {
            out.set(k, d.eval(x));
        }
        Ok(out)
    }

    /// Every bit is a constant, an in-range input, or a nonempty OR of
    /// in-range inputs.
    pub fn is_monotone_or(&self) -> bool {
        self.defs.iter().all(|(&k, d)| {
            k < self.out_len
                && match d {
                    BitDef::Const(_) => true,
                    BitDef::Input(i) => *i < self.in_len,
                    BitDef::Or(v) => !v.is_empty() && v.iter().all(|&i| i < self.in_len),
                }
        })
    }

    /// No bit needs an OR of two or more inputs.
    pub fn is_projection(&self) -> bool {
        self.defs.values().all(|d| match d {
            BitDef::Or(v) => v.len() <= 1,
            _ => true,
        })
    }
}

#[derive(Serialize, Deserialize)]
struct Repr {
    in_len: usize,
    out_len: usize,
    bits: Vec<BitDef>,
}

impl Serialize for BitReduction {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        Repr {
            in_len: self.in_len,
            out_len: self.out_len,
            bits: (0..self.out_len).map(|k| self.def(k)).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for BitReduction {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = Repr::deserialize(d)?;
        if r.bits.len() != r.out_len {
            return Err(D::Error::custom("bits length differs from out_len"));
        }
        let mut red = BitReduction::new(r.in_len, r.out_len, false);
        for (k, b) in r.bits.into_iter().enumerate() {
            if b != BitDef::Const(false) {
                red.defs.insert(k, b);
            }
        }
        Ok(red)
    }
}
