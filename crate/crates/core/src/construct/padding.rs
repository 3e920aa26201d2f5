use serde::{Deserialize, Serialize};

use super::threshold::{induced_subgraph_gates, pair_count, pair_index, threshold_gate, ThresholdMode};
use crate::bits::BitSet;
use crate::circuit::{minterm_dnf, Circuit, Dnf, FaninMode, Term, TruthTable};
use crate::error::{Error, Result};
use crate::graph::{odd_factor_fast, Graph};
use crate::reductions::{BitDef, BitReduction};

/// A circuit over the `pair_count(vertices)` edge indicators of a graph,
/// in lexicographic pair order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphPropertyCircuit {
    pub name: String,
    pub vertices: usize,
    pub circuit: Circuit,
}

/// Largest vertex count whose graphs fit a `u64` edge mask.
pub const MAX_MASK_VERTICES: usize = 11;

impl GraphPropertyCircuit {
    /// Monotone functions get their minterm DNF; others the DNF of their
    /// 1-inputs.
    pub fn from_table(name: &str, vertices: usize, f: &TruthTable) -> Result<Self> {
        if f.n() != pair_count(vertices) {
            return Err(Error::Invalid(format!("table has {} inputs, graph has {} pairs", f.n(), pair_count(vertices))));
        }
        let dnf = if f.is_monotone() {
            minterm_dnf(f)?
        } else {
            let full = (1u64 << f.n()) - 1;
            let terms = f.bits().ones().map(|x| Term { pos: x as u64, neg: full & !(x as u64) }).collect();
            Dnf::new(f.n(), terms)
        };
        Ok(GraphPropertyCircuit {
            name: name.to_string(),
            vertices,
            circuit: dnf.to_circuit(FaninMode::Unbounded),
        })
    }

    pub fn from_fn(name: &str, vertices: usize, f: impl Fn(&Graph) -> bool) -> Result<Self> {
        let tt = TruthTable::from_fn(pair_count(vertices), |m| f(&Graph::from_edge_mask(vertices, m).expect("small graph")))?;
        GraphPropertyCircuit::from_table(name, vertices, &tt)
    }

    /// "Some edge exists": the OR of all edge bits.
    pub fn edge_existence(vertices: usize) -> Self {
        let e = pair_count(vertices);
        let mut c = Circuit::new(e, FaninMode::Unbounded);
        let xs = (0..e).map(|i| c.input(i)).collect();
        let o = c.or(xs);
        c.set_outputs(vec![o]);
        GraphPropertyCircuit {
            name: "edge".into(),
            vertices,
            circuit: c,
        }
    }

    pub fn odd_factor(vertices: usize) -> Result<Self> {
        GraphPropertyCircuit::from_fn(&format!("oddfactor{vertices}"), vertices, odd_factor_fast)
    }

    pub fn eval(&self, g: &Graph) -> Result<bool> {
        if g.vertex_count() != self.vertices {
            return Err(Error::Invalid(format!("graph has {} vertices, property expects {}", g.vertex_count(), self.vertices)));
        }
        let mut x = BitSet::new(pair_count(self.vertices));
        for (a, b) in g.edges() {
            x.insert(pair_index(self.vertices, a, b));
        }
        Ok(self.circuit.evaluate(&x)?.get(0))
    }
}

pub fn edge_mask(g: &Graph) -> u64 {
    let v = g.vertex_count();
    g.edges().into_iter().fold(0, |m, (a, b)| m | 1 << pair_index(v, a, b))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Profile {
    /// Fan-in-2 counting thresholds.
    Nc1,
    /// Flat thresholds.
    Ac0,
    /// Flat thresholds; `f` may use XOR gates.
    Ac0Xor,
}

impl Profile {
    fn threshold(self) -> ThresholdMode {
        match self {
            Profile::Nc1 => ThresholdMode::LogDepth,
            Profile::Ac0 | Profile::Ac0Xor => ThresholdMode::Flat,
        }
    }
}

/// Padded property on `big_n` vertices,
/// `g(G) = [|E| > C(n,2)] ∨ [#non-isolated > n] ∨ f(clean(G))`, where
/// `clean(G)` is the subgraph induced by the non-isolated vertices (in
/// vertex order) padded to `n` vertices. Also returns the embedding of
/// `n`-vertex graphs that plants `G` on the first `n` vertices.
pub fn padded_graph_property(
    f: &GraphPropertyCircuit,
    big_n: usize,
    profile: Profile,
) -> Result<(GraphPropertyCircuit, BitReduction)> {
    let n = f.vertices;
    if big_n <= n || big_n > MAX_MASK_VERTICES {
        return Err(Error::Invalid(format!("padding {n} vertices to {big_n}")));
    }
    if profile != Profile::Ac0Xor && f.circuit.gates().iter().any(|g| matches!(g, crate::circuit::Gate::Xor(_))) {
        return Err(Error::Invalid("XOR gates need the AC0_XOR profile".into()));
    }
    if pair_count(n) <= 20 {
        if let Some((lo, hi)) = f.circuit.truth_table()?.monotonicity_violation() {
            return Err(Error::NotMonotone { lo, hi });
        }
    }
    let mode = profile.threshold();
    let e = pair_count(big_n);
    let mut c = Circuit::new(e, mode.fanin());
    let xs: Vec<usize> = (0..e).map(|i| c.input(i)).collect();
    let edge = |a: usize, b: usize| xs[pair_index(big_n, a.min(b), a.max(b))];
    let many_edges = threshold_gate(&mut c, &xs, pair_count(n) + 1, mode);
    let alpha: Vec<usize> = (0..big_n)
        .map(|a| {
            let inc: Vec<usize> = (0..big_n).filter(|&b| b != a).map(|b| edge(a, b)).collect();
            c.or(inc)
        })
        .collect();
    let many_vertices = threshold_gate(&mut c, &alpha, n + 1, mode);
    let clean = induced_subgraph_gates(&mut c, &edge, &alpha, n, mode);
    let fv = c.embed(&f.circuit, &clean)[0];
    let g = c.or(vec![many_edges, many_vertices, fv]);
    c.set_outputs(vec![g]);
    let mut embed = BitReduction::new(pair_count(n), e, false);
    for i in 0..n {
        for j in i + 1..n {
            embed.set(pair_index(big_n, i, j), BitDef::Input(pair_index(n, i, j)));
        }
    }
    Ok((
        GraphPropertyCircuit {
            name: format!("pad{big_n}({})", f.name),
            vertices: big_n,
            circuit: c,
        },
        embed,
    ))
}

/// `g(x, y) = f(x)` on `n + m` inputs.
pub fn pad_dummy_inputs(f: &Circuit, m: usize) -> Result<Circuit> {
    Circuit::from_parts(f.n() + m, f.fanin_mode(), f.gates().to_vec(), f.outputs().to_vec())
}
