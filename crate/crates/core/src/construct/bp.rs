use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, FaninMode, Gate};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Guard {
    Const(bool),
    Lit { var: usize, positive: bool },
}

impl Guard {
    pub fn eval(self, x: u64) -> bool {
        match self {
            Guard::Const(b) => b,
            Guard::Lit { var, positive } => (x >> var & 1 == 1) == positive,
        }
    }
}

/// Edge from node `from` of layer `layer` to node `to` of layer `layer + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BpEdge {
    pub layer: usize,
    pub from: usize,
    pub to: usize,
    pub guard: Guard,
}

/// Layered branching program over `n` inputs with layers `0..=m`.
/// Parallel edges are allowed and count as distinct paths.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayeredBp {
    pub n: usize,
    pub widths: Vec<usize>,
    pub start: usize,
    pub accept: usize,
    pub edges: Vec<BpEdge>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PathMode {
    /// Parity of the number of accepting paths.
    Parity,
    /// Whether some accepting path exists.
    Reach,
}

impl LayeredBp {
    pub fn m(&self) -> usize {
        self.widths.len().saturating_sub(1)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Invalid(format!("branching program: {msg}")));
        if self.widths.len() < 2 || self.widths.contains(&0) {
            return bad("needs at least two nonempty layers".into());
        }
        if self.start >= self.widths[0] || self.accept >= self.widths[self.m()] {
            return bad("start or accept node out of range".into());
        }
        for e in &self.edges {
            if e.layer >= self.m() || e.from >= self.widths[e.layer] || e.to >= self.widths[e.layer + 1] {
                return bad(format!("edge {e:?} is not between consecutive layers"));
            }
            if let Guard::Lit { var, .. } = e.guard {
                if var >= self.n {
                    return bad(format!("guard reads input {var} of {}", self.n));
                }
            }
        }
        Ok(())
    }

    fn out_edges(&self) -> Vec<Vec<Vec<(usize, Guard)>>> {
        let mut out: Vec<Vec<Vec<(usize, Guard)>>> = self.widths.iter().map(|&w| vec![Vec::new(); w]).collect();
        for e in &self.edges {
            out[e.layer][e.from].push((e.to, e.guard));
        }
        out
    }

    /// Number of accepting paths enabled by `x`, by explicit path
    /// enumeration.
    pub fn count_paths(&self, x: u64) -> u64 {
        let out = self.out_edges();
        let m = self.m();
        let mut count = 0;
        let mut stack = vec![(0usize, self.start)];
        while let Some((t, u)) = stack.pop() {
            if t == m {
                count += (u == self.accept) as u64;
                continue;
            }
            for &(v, g) in &out[t][u] {
                if g.eval(x) {
                    stack.push((t + 1, v));
                }
            }
        }
        count
    }

    pub fn value(&self, x: u64, mode: PathMode) -> bool {
        let c = self.count_paths(x);
        match mode {
            PathMode::Parity => c % 2 == 1,
            PathMode::Reach => c > 0,
        }
    }

    /// Random program: every pair of nodes in consecutive layers gets an
    /// edge with probability `density`, guarded by a random literal or
    /// constant.
    pub fn random(n: usize, m: usize, max_width: usize, density: f64, seed: u64) -> LayeredBp {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut widths: Vec<usize> = (0..=m).map(|_| rng.gen_range(1..=max_width)).collect();
        widths[0] = 1;
        widths[m] = 1;
        let mut edges = Vec::new();
        for t in 0..m {
            for from in 0..widths[t] {
                for to in 0..widths[t + 1] {
                    // a second, parallel edge now and then
                    let copies = rng.gen_bool(density) as usize + rng.gen_bool(density / 4.0) as usize;
                    for _ in 0..copies {
                        let guard = match rng.gen_range(0..10) {
                            _ if n == 0 => Guard::Const(true),
                            0 => Guard::Const(true),
                            1 => Guard::Const(false),
                            _ => Guard::Lit {
                                var: rng.gen_range(0..n),
                                positive: rng.gen_bool(0.5),
                            },
                        };
                        edges.push(BpEdge { layer: t, from, to, guard });
                    }
                }
            }
        }
        LayeredBp {
            n,
            widths,
            start: 0,
            accept: 0,
            edges,
        }
    }
}

/// Smallest `k >= 1` with `k^d >= len`.
fn segments(len: usize, d: usize) -> usize {
    (1..=len.max(1)).find(|&k| k.checked_pow(d as u32).is_none_or(|p| p >= len)).unwrap_or(1)
}

struct Builder<'a> {
    bp: &'a LayeredBp,
    out: Vec<Vec<Vec<(usize, Guard)>>>,
    mode: PathMode,
    c: Circuit,
    memo: HashMap<(usize, usize, usize, usize, usize), usize>,
}

impl Builder<'_> {
    fn top(&mut self, mut terms: Vec<usize>) -> usize {
        if terms.is_empty() {
            let z = self.c.constant(false);
            terms.push(self.c.push(Gate::And(vec![z])));
        }
        match self.mode {
            PathMode::Parity => self.c.push(Gate::Xor(terms)),
            PathMode::Reach => self.c.push(Gate::Or(terms)),
        }
    }

    fn guard(&mut self, g: Guard) -> usize {
        match g {
            Guard::Const(b) => self.c.constant(b),
            Guard::Lit { var, positive } => {
                let x = self.c.input(var);
                if positive {
                    x
                } else {
                    self.c.not(x)
                }
            }
        }
    }

    /// Paths from node `u` of layer `a` to node `v` of layer `b`, as a gate
    /// of depth exactly `2 * level`.
    fn paths(&mut self, u: usize, a: usize, v: usize, b: usize, level: usize) -> usize {
        let key = (u, a, v, b, level);
        if let Some(&g) = self.memo.get(&key) {
            return g;
        }
        let mut terms = Vec::new();
        if level == 1 {
            let mut stack = vec![(a, u, Vec::new())];
            while let Some((t, w, guards)) = stack.pop() {
                if t == b {
                    if w == v {
                        let lits: Vec<usize> = guards.iter().map(|&g| self.guard(g)).collect();
                        terms.push(self.c.push(Gate::And(lits)));
                    }
                    continue;
                }
                for &(x, g) in &self.out[t][w] {
                    let mut next = guards.clone();
                    next.push(g);
                    stack.push((t + 1, x, next));
                }
            }
        } else {
            let len = b - a;
            let k = segments(len, level).min(len);
            let cuts: Vec<usize> = (0..=k).map(|i| a + i * len / k).collect();
            let inner: Vec<usize> = cuts[1..k].to_vec();
            let mut choice = vec![0usize; inner.len()];
            loop {
                let mut nodes = vec![u];
                nodes.extend(&choice);
                nodes.push(v);
                let parts: Vec<usize> = (0..k)
                    .map(|i| self.paths(nodes[i], cuts[i], nodes[i + 1], cuts[i + 1], level - 1))
                    .collect();
                terms.push(self.c.push(Gate::And(parts)));
                let Some(p) = (0..choice.len()).find(|&p| choice[p] + 1 < self.bp.widths[inner[p]]) else {
                    break;
                };
                choice[p] += 1;
                for q in choice.iter_mut().take(p) {
                    *q = 0;
                }
            }
        }
        let g = self.top(terms);
        self.memo.insert(key, g);
        g
    }
}

/// Depth-`2d` unbounded fan-in circuit for the path parity (XOR/AND
/// levels) or reachability (OR/AND levels) of the program. Each level
/// splits the current segment at `⌈len^(1/d)⌉`-balanced checkpoint layers
/// and sums, over all choices of checkpoint nodes, the product of the
/// segment values; the last level lists full paths.
pub fn checkpoint_circuit(bp: &LayeredBp, d: usize, mode: PathMode) -> Result<Circuit> {
    bp.validate()?;
    if d == 0 {
        return Err(Error::Invalid("depth parameter d must be at least 1".into()));
    }
    let mut b = Builder {
        bp,
        out: bp.out_edges(),
        mode,
        c: Circuit::new(bp.n, FaninMode::Unbounded),
        memo: HashMap::new(),
    };
    let o = b.paths(bp.start, 0, bp.accept, bp.m(), d);
    b.c.set_outputs(vec![o]);
    Ok(b.c)
}
