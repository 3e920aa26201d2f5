//! Gate-level circuits over AND/OR/NOT/XOR with constants, plus DNFs,
//! truth tables and decision trees.

mod dnf;
mod tree;

pub use dnf::{count_minterms, minterm_dnf, monotone_functions, quine_strip, Dnf, Term, TruthTable};
pub use tree::{build_decision_tree, dt_to_monotone_dnf, DecisionTree, TreeMode};

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::bits::BitSet;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Gate {
    Input(usize),
    Const(bool),
    Not(usize),
    And(Vec<usize>),
    Or(Vec<usize>),
    Xor(Vec<usize>),
}

impl Gate {
    pub fn operands(&self) -> &[usize] {
        match self {
            Gate::Input(_) | Gate::Const(_) => &[],
            Gate::Not(a) => std::slice::from_ref(a),
            Gate::And(v) | Gate::Or(v) | Gate::Xor(v) => v,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Gate::Input(_) => "INPUT",
            Gate::Const(false) => "CONST0",
            Gate::Const(true) => "CONST1",
            Gate::Not(_) => "NOT",
            Gate::And(_) => "AND",
            Gate::Or(_) => "OR",
            Gate::Xor(_) => "XOR",
        }
    }

    fn is_leaf(&self) -> bool {
        matches!(self, Gate::Input(_) | Gate::Const(_))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum FaninMode {
    Bounded2,
    Unbounded,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Measures {
    /// Gates other than inputs, constants and negated inputs.
    pub size: usize,
    /// Longest path, counted in gates, from a leaf to an output. Inputs,
    /// constants and negated inputs are leaves.
    pub depth: usize,
    /// No NOT and no XOR gate.
    pub monotone: bool,
}

/// A circuit; gate operands always precede the gate.
///
/// Building goes through the `input`/`and`/... methods, which share
/// structurally identical gates.
#[derive(Debug, Clone)]
pub struct Circuit {
    n: usize,
    mode: FaninMode,
    gates: Vec<Gate>,
    outputs: Vec<usize>,
    index: HashMap<Gate, usize>,
}

impl PartialEq for Circuit {
    fn eq(&self, other: &Self) -> bool {
        (self.n, self.mode, &self.gates, &self.outputs) == (other.n, other.mode, &other.gates, &other.outputs)
    }
}

impl Eq for Circuit {}

impl Circuit {
    pub fn new(n: usize, mode: FaninMode) -> Self {
        Circuit {
            n,
            mode,
            gates: Vec::new(),
            outputs: Vec::new(),
            index: HashMap::new(),
        }
    }

    /// Checks the structural invariants of raw parts.
    pub fn from_parts(n: usize, mode: FaninMode, gates: Vec<Gate>, outputs: Vec<usize>) -> Result<Self> {
        for (i, g) in gates.iter().enumerate() {
            if let Some(&op) = g.operands().iter().find(|&&op| op >= i) {
                return Err(Error::Circuit(format!("gate {i} reads gate {op}, which does not precede it")));
            }
            match g {
                Gate::Input(k) if *k >= n => {
                    return Err(Error::Circuit(format!("gate {i} reads input {k} of {n}")));
                }
                Gate::And(v) | Gate::Or(v) | Gate::Xor(v) if v.is_empty() => {
                    return Err(Error::Circuit(format!("gate {i} has no operands")));
                }
                Gate::And(v) | Gate::Or(v) | Gate::Xor(v) if mode == FaninMode::Bounded2 && v.len() > 2 => {
                    return Err(Error::Circuit(format!("gate {i} has fan-in {} in a fan-in-2 circuit", v.len())));
                }
                _ => {}
            }
        }
        if let Some(&o) = outputs.iter().find(|&&o| o >= gates.len()) {
            return Err(Error::Circuit(format!("output {o} is not a gate")));
        }
        let index = gates.iter().enumerate().map(|(i, g)| (g.clone(), i)).collect();
        Ok(Circuit {
            n,
            mode,
            gates,
            outputs,
            index,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn fanin_mode(&self) -> FaninMode {
        self.mode
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn outputs(&self) -> &[usize] {
        &self.outputs
    }

    pub fn set_outputs(&mut self, outputs: Vec<usize>) {
        assert!(outputs.iter().all(|&o| o < self.gates.len()));
        self.outputs = outputs;
    }

    pub fn push(&mut self, g: Gate) -> usize {
        if let Some(&i) = self.index.get(&g) {
            return i;
        }
        debug_assert!(g.operands().iter().all(|&o| o < self.gates.len()));
        self.gates.push(g.clone());
        self.index.insert(g, self.gates.len() - 1);
        self.gates.len() - 1
    }

    pub fn input(&mut self, i: usize) -> usize {
        assert!(i < self.n, "input {i} of {}", self.n);
        self.push(Gate::Input(i))
    }

    pub fn constant(&mut self, b: bool) -> usize {
        self.push(Gate::Const(b))
    }

    pub fn not(&mut self, a: usize) -> usize {
        self.push(Gate::Not(a))
    }

    pub fn and(&mut self, ops: Vec<usize>) -> usize {
        self.nary(ops, Gate::And, true)
    }

    pub fn or(&mut self, ops: Vec<usize>) -> usize {
        self.nary(ops, Gate::Or, false)
    }

    pub fn xor(&mut self, ops: Vec<usize>) -> usize {
        self.nary(ops, Gate::Xor, false)
    }

    /// An AND/OR/XOR over `ops`: a constant when empty, the operand itself
    /// when single, a balanced tree in fan-in-2 mode.
    fn nary(&mut self, mut ops: Vec<usize>, make: fn(Vec<usize>) -> Gate, empty: bool) -> usize {
        match ops.len() {
            0 => self.constant(empty),
            1 => ops[0],
            _ if self.mode == FaninMode::Unbounded => self.push(make(ops)),
            _ => {
                while ops.len() > 1 {
                    ops = ops
                        .chunks(2)
                        .map(|c| if c.len() == 2 { self.push(make(c.to_vec())) } else { c[0] })
                        .collect();
                }
                ops[0]
            }
        }
    }

    /// Evaluates 64 inputs at once: bit `b` of `xs[i]` is input `i` of the
    /// `b`-th assignment. Returns one word per output.
    pub fn eval_sliced(&self, xs: &[u64]) -> Vec<u64> {
        assert_eq!(xs.len(), self.n);
        let mut val = vec![0u64; self.gates.len()];
        for (i, g) in self.gates.iter().enumerate() {
            val[i] = match g {
                Gate::Input(k) => xs[*k],
                Gate::Const(b) => if *b { !0 } else { 0 },
                Gate::Not(a) => !val[*a],
                Gate::And(v) => v.iter().fold(!0, |acc, &o| acc & val[o]),
                Gate::Or(v) => v.iter().fold(0, |acc, &o| acc | val[o]),
                Gate::Xor(v) => v.iter().fold(0, |acc, &o| acc ^ val[o]),
            };
        }
        self.outputs.iter().map(|&o| val[o]).collect()
    }

    pub fn evaluate(&self, x: &BitSet) -> Result<BitSet> {
        if x.len() != self.n {
            return Err(Error::Invalid(format!("{} inputs given, circuit has {}", x.len(), self.n)));
        }
        let xs: Vec<u64> = (0..self.n).map(|i| if x.get(i) { !0 } else { 0 }).collect();
        let out = self.eval_sliced(&xs);
        Ok(BitSet::from_indices(out.len(), (0..out.len()).filter(|&i| out[i] & 1 == 1)))
    }

    /// First output on input `x` (bit `i` is input `i`), `n <= 64`.
    pub fn eval_mask(&self, x: u64) -> bool {
        let xs: Vec<u64> = (0..self.n).map(|i| if x >> i & 1 == 1 { !0 } else { 0 }).collect();
        self.eval_sliced(&xs)[0] & 1 == 1
    }

    /// Truth table of every output, `n <= 24`.
    pub fn truth_tables(&self) -> Result<Vec<TruthTable>> {
        if self.n > 24 {
            return Err(Error::Budget {
                what: "truth-table inputs",
                needed: self.n as u128,
                limit: 24,
            });
        }
        let total = 1u64 << self.n;
        let mut tables = vec![BitSet::new(total as usize); self.outputs.len()];
        let mut base = 0u64;
        while base < total {
            let xs: Vec<u64> = (0..self.n)
                .map(|i| {
                    (0..64u64)
                        .filter(|b| ((base + b) >> i) & 1 == 1)
                        .fold(0, |w, b| w | 1 << b)
                })
                .collect();
            let out = self.eval_sliced(&xs);
            for (t, w) in tables.iter_mut().zip(out) {
                for b in 0..64.min(total - base) {
                    if w >> b & 1 == 1 {
                        t.insert((base + b) as usize);
                    }
                }
            }
            base += 64;
        }
        tables.into_iter().map(|t| TruthTable::from_bits(self.n, t)).collect()
    }

    pub fn truth_table(&self) -> Result<TruthTable> {
        Ok(self.truth_tables()?.swap_remove(0))
    }

    /// `NOT` applied directly to an input: a literal, not a gate.
    fn is_literal(&self, g: &Gate) -> bool {
        g.is_leaf() || matches!(g, Gate::Not(a) if matches!(self.gates[*a], Gate::Input(_)))
    }

    pub fn measures(&self) -> Measures {
        let mut depth = vec![0usize; self.gates.len()];
        for (i, g) in self.gates.iter().enumerate() {
            depth[i] = if self.is_literal(g) {
                0
            } else {
                1 + g.operands().iter().map(|&o| depth[o]).max().unwrap_or(0)
            };
        }
        // only gates feeding an output count
        let mut live = vec![false; self.gates.len()];
        for &o in &self.outputs {
            live[o] = true;
        }
        for i in (0..self.gates.len()).rev() {
            if live[i] {
                for &o in self.gates[i].operands() {
                    live[o] = true;
                }
            }
        }
        let live_gates = || self.gates.iter().zip(&live).filter(|(_, l)| **l).map(|(g, _)| g);
        Measures {
            size: live_gates().filter(|g| !self.is_literal(g)).count(),
            depth: self.outputs.iter().map(|&o| depth[o]).max().unwrap_or(0),
            monotone: !live_gates().any(|g| matches!(g, Gate::Not(_) | Gate::Xor(_))),
        }
    }

    /// Swaps AND with OR and CONST0 with CONST1. The result computes
    /// `¬c(¬x)` gatewise, with the same size and depth.
    pub fn dualize(&self) -> Result<Circuit> {
        let gates = self
            .gates
            .iter()
            .map(|g| match g {
                Gate::And(v) => Ok(Gate::Or(v.clone())),
                Gate::Or(v) => Ok(Gate::And(v.clone())),
                Gate::Const(b) => Ok(Gate::Const(!b)),
                Gate::Xor(_) => Err(Error::Circuit("cannot dualize a XOR gate".into())),
                g => Ok(g.clone()),
            })
            .collect::<Result<Vec<_>>>()?;
        Circuit::from_parts(self.n, self.mode, gates, self.outputs.clone())
    }

    /// Copies `other` into this circuit with its input `i` replaced by gate
    /// `inputs[i]`; returns the gates of its outputs.
    pub fn embed(&mut self, other: &Circuit, inputs: &[usize]) -> Vec<usize> {
        assert_eq!(inputs.len(), other.n);
        let mut map = Vec::with_capacity(other.gates.len());
        for g in &other.gates {
            let ops: Vec<usize> = g.operands().iter().map(|&o| map[o]).collect();
            let id = match g {
                Gate::Input(k) => inputs[*k],
                Gate::Const(b) => self.constant(*b),
                Gate::Not(_) => self.not(ops[0]),
                Gate::And(_) => self.and(ops),
                Gate::Or(_) => self.or(ops),
                Gate::Xor(_) => self.xor(ops),
            };
            map.push(id);
        }
        other.outputs.iter().map(|&o| map[o]).collect()
    }

    /// A random circuit with `size` internal gates; `monotone` restricts the
    /// gate set to AND/OR.
    pub fn random(n: usize, size: usize, mode: FaninMode, monotone: bool, seed: u64) -> Circuit {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut gates: Vec<Gate> = (0..n).map(Gate::Input).collect();
        gates.push(Gate::Const(false));
        gates.push(Gate::Const(true));
        let kinds = if monotone { 2 } else { 4 };
        for _ in 0..size {
            let len = gates.len();
            let fan = if mode == FaninMode::Bounded2 { 2 } else { rng.gen_range(1..=4) };
            let ops: Vec<usize> = (0..fan).map(|_| rng.gen_range(0..len)).collect();
            gates.push(match rng.gen_range(0..kinds) {
                0 => Gate::And(ops),
                1 => Gate::Or(ops),
                2 => Gate::Not(ops[0]),
                _ => Gate::Xor(ops),
            });
        }
        let last = gates.len() - 1;
        let outputs = vec![last, rng.gen_range(0..=last)];
        Circuit::from_parts(n, mode, gates, outputs).expect("well formed by construction")
    }
}

/// Memoized recursion from the outputs, kept separate from the sliced
/// evaluator so the two can be checked against each other.
pub fn evaluate_recursive(c: &Circuit, x: &[bool]) -> Vec<bool> {
    fn val(c: &Circuit, g: usize, x: &[bool], memo: &mut [Option<bool>]) -> bool {
        if let Some(v) = memo[g] {
            return v;
        }
        let v = match &c.gates[g] {
            Gate::Input(k) => x[*k],
            Gate::Const(b) => *b,
            Gate::Not(a) => !val(c, *a, x, memo),
            Gate::And(v) => v.iter().all(|&o| val(c, o, x, memo)),
            Gate::Or(v) => v.iter().any(|&o| val(c, o, x, memo)),
            Gate::Xor(v) => v.iter().filter(|&&o| val(c, o, x, memo)).count() % 2 == 1,
        };
        memo[g] = Some(v);
        v
    }
    let mut memo = vec![None; c.gates.len()];
    c.outputs.iter().map(|&o| val(c, o, x, &mut memo)).collect()
}

#[derive(Serialize, Deserialize)]
struct CircuitRepr {
    n: usize,
    fanin_mode: FaninMode,
    gates: Vec<Vec<Value>>,
    outputs: Vec<usize>,
}

impl Serialize for Circuit {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let gates = self
            .gates
            .iter()
            .map(|g| {
                let mut row = vec![Value::from(g.kind())];
                match g {
                    Gate::Input(k) => row.push(Value::from(*k)),
                    g => row.extend(g.operands().iter().map(|&o| Value::from(o))),
                }
                row
            })
            .collect();
        CircuitRepr {
            n: self.n,
            fanin_mode: self.mode,
            gates,
            outputs: self.outputs.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Circuit {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = CircuitRepr::deserialize(d)?;
        let mut gates = Vec::with_capacity(r.gates.len());
        for row in &r.gates {
            let kind = row.first().and_then(Value::as_str).ok_or_else(|| D::Error::custom("gate kind"))?;
            let ops = row[1..]
                .iter()
                .map(|v| v.as_u64().map(|x| x as usize).ok_or_else(|| D::Error::custom("operand")))
                .collect::<std::result::Result<Vec<_>, _>>()?;
            let one = || ops.first().copied().filter(|_| ops.len() == 1).ok_or_else(|| D::Error::custom(format!("{kind} takes one operand")));
            gates.push(match kind {
                "INPUT" => Gate::Input(one()?),
                "NOT" => Gate::Not(one()?),
                "CONST0" => Gate::Const(false),
                "CONST1" => Gate::Const(true),
                "AND" => Gate::And(ops),
                "OR" => Gate::Or(ops),
                "XOR" => Gate::Xor(ops),
                k => return Err(D::Error::custom(format!("unknown gate kind {k}"))),
            });
        }
        Circuit::from_parts(r.n, r.fanin_mode, gates, r.outputs).map_err(D::Error::custom)
    }
}
