use serde::{Deserialize, Serialize};

use super::{Circuit, FaninMode};
use crate::bits::BitSet;
use crate::error::{Error, Result};

/// Largest input count for an explicit truth table.
pub const MAX_TABLE_VARS: usize = 24;

/// Truth table of `f: {0,1}^n -> {0,1}`; bit `x` is `f(x)`, input `i` is
/// bit `i` of `x`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TruthTable {
    n: usize,
    bits: BitSet,
}

impl TruthTable {
    pub fn from_bits(n: usize, bits: BitSet) -> Result<Self> {
        if n > MAX_TABLE_VARS {
            return Err(Error::Budget {
                what: "truth-table inputs",
                needed: n as u128,
                limit: MAX_TABLE_VARS as u128,
            });
        }
        if bits.len() != 1 << n {
            return Err(Error::Invalid(format!("table of {} bits for {n} inputs", bits.len())));
        }
        Ok(TruthTable { n, bits })
    }

    pub fn from_fn(n: usize, f: impl Fn(u64) -> bool) -> Result<Self> {
        let bits = BitSet::from_indices(1 << n, (0..1u64 << n).filter(|&x| f(x)).map(|x| x as usize));
        TruthTable::from_bits(n, bits)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn eval(&self, x: u64) -> bool {
        self.bits.get(x as usize)
    }

    pub fn bits(&self) -> &BitSet {
        &self.bits
    }

    pub fn majority(n: usize) -> Result<Self> {
        TruthTable::from_fn(n, |x| 2 * x.count_ones() as usize > n)
    }

    /// A pair `x < y` (one extra bit) with `f(x) = 1`, `f(y) = 0`.
    pub fn monotonicity_violation(&self) -> Option<(u64, u64)> {
        for x in self.bits.ones() {
            let x = x as u64;
            for i in 0..self.n {
                let y = x | 1 << i;
                if y != x && !self.eval(y) {
                    return Some((x, y));
                }
            }
        }
        None
    }

    pub fn is_monotone(&self) -> bool {
        self.monotonicity_violation().is_none()
    }

    /// Minimal 1-inputs under the bitwise order, ascending.
    pub fn minterms(&self) -> Vec<u64> {
        self.bits
            .ones()
            .map(|x| x as u64)
            .filter(|&x| (0..self.n).all(|i| x >> i & 1 == 0 || !self.eval(x & !(1 << i))))
            .collect()
    }
}

/// Every monotone function on `n <= 5` inputs, by table value.
pub fn monotone_functions(n: usize) -> Result<Vec<TruthTable>> {
    if n > 5 {
        return Err(Error::Budget {
            what: "monotone function enumeration inputs",
            needed: n as u128,
            limit: 5,
        });
    }
    // f = f0 | f1 << half with f0 <= f1, both monotone in the other inputs
    let mut tables = vec![0u64, 1];
    for k in 1..=n {
        let half = 1u32 << (k - 1);
        let mut next: Vec<u64> = tables
            .iter()
            .flat_map(|&lo| tables.iter().filter(move |&&hi| lo & !hi == 0).map(move |&hi| lo | hi << half))
            .collect();
        next.sort_unstable();
        tables = next;
    }
    tables.into_iter().map(|t| TruthTable::from_bits(n, BitSet::from_mask(1 << n, t))).collect()
}

pub fn count_minterms(f: &TruthTable) -> usize {
    f.minterms().len()
}

/// A conjunction: bit `i` of `pos` is `x_{i+1}`, of `neg` is `¬x_{i+1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Term {
    pub pos: u64,
    pub neg: u64,
}

impl Term {
    pub fn weight(&self) -> u32 {
        (self.pos | self.neg).count_ones()
    }

    pub fn eval(&self, x: u64) -> bool {
        x & self.pos == self.pos && x & self.neg == 0
    }
}

/// Disjunction of terms over `n` variables; size is the term count.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Dnf {
    pub n: usize,
    pub terms: Vec<Term>,
}

impl Dnf {
    pub fn new(n: usize, terms: Vec<Term>) -> Self {
        Dnf { n, terms }
    }

    pub fn eval(&self, x: u64) -> bool {
        self.terms.iter().any(|t| t.eval(x))
    }

    pub fn truth_table(&self) -> Result<TruthTable> {
        TruthTable::from_fn(self.n, |x| self.eval(x))
    }

    pub fn is_negative_free(&self) -> bool {
        self.terms.iter().all(|t| t.neg == 0)
    }

    /// Terms deduplicated and sorted by weight, then lexicographically.
    pub fn canonical(mut self) -> Self {
        self.terms.sort_by_key(|t| (t.weight(), t.pos, t.neg));
        self.terms.dedup();
        self
    }

    /// Drops terms absorbed by another term.
    pub fn absorb(self) -> Self {
        let terms = self
            .terms
            .iter()
            .copied()
            .enumerate()
            .filter(|&(i, t)| {
                !self.terms.iter().enumerate().any(|(j, u)| {
                    j != i && u.pos & !t.pos == 0 && u.neg & !t.neg == 0 && (*u != t || j < i)
                })
            })
            .map(|(_, t)| t)
            .collect();
        Dnf::new(self.n, terms).canonical()
    }

    /// OR of ANDs over literals; negative literals use NOT gates.
    pub fn to_circuit(&self, mode: FaninMode) -> Circuit {
        let mut c = Circuit::new(self.n, mode);
        let mut ors = Vec::new();
        for t in &self.terms {
            let mut lits = Vec::new();
            for i in 0..self.n {
                if t.pos >> i & 1 == 1 {
                    lits.push(c.input(i));
                }
                if t.neg >> i & 1 == 1 {
                    let x = c.input(i);
                    lits.push(c.not(x));
                }
            }
            ors.push(c.and(lits));
        }
        let o = c.or(ors);
        c.set_outputs(vec![o]);
        c
    }

    /// One term per line, literals `x3` or `!x3`; the empty term is `1`.
    pub fn to_text(&self) -> String {
        let mut s = format!("n {}\n", self.n);
        for t in &self.terms {
            let lits: Vec<String> = (0..self.n)
                .filter_map(|i| {
                    if t.pos >> i & 1 == 1 {
                        Some(format!("x{}", i + 1))
                    } else if t.neg >> i & 1 == 1 {
                        Some(format!("!x{}", i + 1))
                    } else {
                        None
                    }
                })
                .collect();
            s.push_str(&if lits.is_empty() { "1".to_string() } else { lits.join(" ") });
            s.push('\n');
        }
        s
    }

    pub fn parse(text: &str) -> Result<Dnf> {
        let mut n = None;
        let mut terms = Vec::new();
        for (ln, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: &str| Error::Parse {
                line: ln + 1,
                msg: msg.to_string(),
            };
            if let Some(rest) = line.strip_prefix("n ") {
                n = Some(rest.trim().parse::<usize>().map_err(|_| err("bad variable count"))?);
                continue;
            }
            let n = n.ok_or_else(|| err("missing `n <count>` line"))?;
            let mut t = Term { pos: 0, neg: 0 };
            if line != "1" {
                for lit in line.split_whitespace() {
                    let (neg, var) = match lit.strip_prefix('!') {
                        Some(v) => (true, v),
                        None => (false, lit),
                    };
                    let i: usize = var
                        .strip_prefix('x')
                        .and_then(|v| v.parse().ok())
                        .filter(|&i| (1..=n).contains(&i))
                        .ok_or_else(|| err(&format!("bad literal `{lit}`")))?;
                    if neg {
                        t.neg |= 1 << (i - 1);
                    } else {
                        t.pos |= 1 << (i - 1);
                    }
                }
            }
            terms.push(t);
        }
        Ok(Dnf::new(n.ok_or(Error::Parse { line: 0, msg: "empty DNF file".into() })?, terms))
    }
}

/// Removes every negative literal. Requires the DNF to compute a monotone
/// function, in which case the result is equivalent.
pub fn quine_strip(d: &Dnf) -> Result<Dnf> {
    if let Some((lo, hi)) = d.truth_table()?.monotonicity_violation() {
        return Err(Error::NotMonotone { lo, hi });
    }
    let terms = d
        .terms
        .iter()
        .filter(|t| t.pos & t.neg == 0)
        .map(|t| Term { pos: t.pos, neg: 0 })
        .collect();
    Ok(Dnf::new(d.n, terms).canonical())
}

/// The canonical monotone DNF: one term per minterm.
pub fn minterm_dnf(f: &TruthTable) -> Result<Dnf> {
    if let Some((lo, hi)) = f.monotonicity_violation() {
        return Err(Error::NotMonotone { lo, hi });
    }
    Ok(Dnf::new(f.n(), f.minterms().into_iter().map(|pos| Term { pos, neg: 0 }).collect()).canonical())
}
