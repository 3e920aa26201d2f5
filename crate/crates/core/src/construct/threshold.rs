use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, FaninMode};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ThresholdMode {
    /// Fan-in 2: pairwise merging of unary counters.
    LogDepth,
    /// Unbounded fan-in OR of ANDs over all `k`-subsets.
    Flat,
}

/// Sorted unary count of `xs`, truncated to length `cap`: entry `i` is
/// `weight >= i + 1`.
fn counter(c: &mut Circuit, xs: &[usize], cap: usize) -> Vec<usize> {
    if xs.len() <= 1 {
        return xs.iter().copied().take(cap).collect();
    }
    let (l, r) = xs.split_at(xs.len() / 2);
    let a = counter(c, l, cap);
    let b = counter(c, r, cap);
    let len = (a.len() + b.len()).min(cap);
    (1..=len)
        .map(|s| {
            let mut terms = Vec::new();
            for i in 0..=a.len().min(s) {
                let j = s - i;
                if j > b.len() {
                    continue;
                }
                terms.push(match (i, j) {
                    (0, _) => b[j - 1],
                    (_, 0) => a[i - 1],
                    _ => c.and(vec![a[i - 1], b[j - 1]]),
                });
            }
            c.or(terms)
        })
        .collect()
}

/// Gate computing `weight(xs) >= k` inside `c`.
pub fn threshold_gate(c: &mut Circuit, xs: &[usize], k: usize, mode: ThresholdMode) -> usize {
    if k == 0 {
        return c.constant(true);
    }
    if k > xs.len() {
        return c.constant(false);
    }
    match mode {
        ThresholdMode::LogDepth => counter(c, xs, k)[k - 1],
        ThresholdMode::Flat => {
            let mut terms = Vec::new();
            let mut pick: Vec<usize> = (0..k).collect();
            loop {
                let ands: Vec<usize> = pick.iter().map(|&i| xs[i]).collect();
                terms.push(c.and(ands));
                // next k-subset in lexicographic order
                let Some(p) = (0..k).rev().find(|&p| pick[p] < xs.len() - k + p) else {
                    break;
                };
                pick[p] += 1;
                for q in p + 1..k {
                    pick[q] = pick[q - 1] + 1;
                }
            }
            c.or(terms)
        }
    }
}

impl ThresholdMode {
    pub fn fanin(self) -> FaninMode {
        match self {
            ThresholdMode::LogDepth => FaninMode::Bounded2,
            ThresholdMode::Flat => FaninMode::Unbounded,
        }
    }
}

/// `THR_{k,n}(x) = [weight(x) >= k]` as a monotone circuit.
pub fn threshold_circuit(k: usize, n: usize, mode: ThresholdMode) -> Circuit {
    let mut c = Circuit::new(n, mode.fanin());
    let xs: Vec<usize> = (0..n).map(|i| c.input(i)).collect();
    let o = threshold_gate(&mut c, &xs, k, mode);
    c.set_outputs(vec![o]);
    c
}

/// Rank of the pair `(i, j)`, `i < j`, among the pairs of `0..v` in
/// lexicographic order.
pub fn pair_index(v: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < v);
    i * (2 * v - i - 1) / 2 + (j - i - 1)
}

pub fn pair_count(v: usize) -> usize {
    v * v.saturating_sub(1) / 2
}

/// Adjacency of `G[S]` among the first `k` selected vertices, as
/// `pair_count(k)` gates. Vertex `a` occupies slot `i` iff it is selected
/// and exactly `i` earlier vertices are selected.
pub fn induced_subgraph_gates(
    c: &mut Circuit,
    edge: &dyn Fn(usize, usize) -> usize,
    alpha: &[usize],
    k: usize,
    mode: ThresholdMode,
) -> Vec<usize> {
    let n = alpha.len();
    // slot[a][i]: vertex a is the (i+1)-th selected one
    let mut slot = vec![vec![None; k]; n];
    for a in 0..n {
        let prefix = &alpha[..a];
        for (i, s) in slot[a].iter_mut().enumerate() {
            if i > a {
                break;
            }
            let mut parts = vec![alpha[a]];
            if i > 0 {
                parts.push(threshold_gate(c, prefix, i, mode));
            }
            if i < a {
                let t = threshold_gate(c, prefix, i + 1, mode);
                parts.push(c.not(t));
            }
            *s = Some(c.and(parts));
        }
    }
    let mut out = Vec::with_capacity(pair_count(k));
    for i in 0..k {
        for j in i + 1..k {
            let mut terms = Vec::new();
            for a in 0..n {
                for b in a + 1..n {
                    if let (Some(sa), Some(sb)) = (slot[a][i], slot[b][j]) {
                        terms.push(c.and(vec![sa, sb, edge(a, b)]));
                    }
                }
            }
            out.push(c.or(terms));
        }
    }
    out
}

/// Inputs: the `pair_count(n)` edge bits of a graph on `n` vertices, then
/// the `n` bits of a vertex set `S`. Outputs: the `pair_count(k)` edge bits
/// of `G[S]` padded with isolated vertices. When `|S| > k` the first `k`
/// selected vertices are used.
pub fn induced_subgraph_circuit(n: usize, k: usize, mode: ThresholdMode) -> Circuit {
    let e = pair_count(n);
    let mut c = Circuit::new(e + n, mode.fanin());
    let edges: Vec<usize> = (0..e).map(|i| c.input(i)).collect();
    let alpha: Vec<usize> = (0..n).map(|i| c.input(e + i)).collect();
    let edge = |a: usize, b: usize| edges[pair_index(n, a, b)];
    let outs = induced_subgraph_gates(&mut c, &edge, &alpha, k, mode);
    c.set_outputs(outs);
    c
}

/// Reference extraction for `induced_subgraph_circuit`.
pub fn induced_subgraph_oracle(n: usize, edges: u64, set: u64, k: usize) -> u64 {
    let chosen: Vec<usize> = (0..n).filter(|&a| set >> a & 1 == 1).take(k).collect();
    let mut out = 0;
    for i in 0..chosen.len() {
        for j in i + 1..chosen.len() {
            if edges >> pair_index(n, chosen[i], chosen[j]) & 1 == 1 {
                out |= 1 << pair_index(k, i, j);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thresholds_match_popcount() {
        for n in 0..=8 {
            for k in 0..=n + 1 {
                for mode in [ThresholdMode::LogDepth, ThresholdMode::Flat] {
                    let c = threshold_circuit(k, n, mode);
                    assert!(c.measures().monotone);
                    let tt = c.truth_table().unwrap();
                    for x in 0..1u64 << n {
                        assert_eq!(tt.eval(x), x.count_ones() as usize >= k, "n {n} k {k} {mode:?}");
                    }
                    if mode == ThresholdMode::Flat {
                        assert!(c.measures().depth <= 2);
                    }
                }
            }
        }
        let c = threshold_circuit(2, 3, ThresholdMode::LogDepth);
        assert!(c.eval_mask(0b011) && !c.eval_mask(0b001));
    }

    #[test]
    fn pair_ranks() {
        let mut k = 0;
        for i in 0..6 {
            for j in i + 1..6 {
                assert_eq!(pair_index(6, i, j), k);
                k += 1;
            }
        }
        assert_eq!(k, pair_count(6));
    }

    #[test]
    fn induced_subgraph_exhaustive() {
        let n = 4;
        for k in [2, 3] {
            for mode in [ThresholdMode::LogDepth, ThresholdMode::Flat] {
                let c = induced_subgraph_circuit(n, k, mode);
                for edges in 0..1u64 << 6 {
                    for set in 0..16u64 {
                        if set.count_ones() as usize > k {
                            continue;
                        }
                        let x = edges | set << 6;
                        let xs: Vec<u64> = (0..10).map(|i| if x >> i & 1 == 1 { !0 } else { 0 }).collect();
                        let got = c.eval_sliced(&xs).iter().enumerate().fold(0u64, |a, (i, w)| a | (w & 1) << i);
                        assert_eq!(got, induced_subgraph_oracle(n, edges, set, k));
                    }
                }
            }
        }
        // triangle on {0,1,2} inside 4 vertices
        let tri = (1 << pair_index(4, 0, 1)) | (1 << pair_index(4, 0, 2)) | (1 << pair_index(4, 1, 2));
        assert_eq!(induced_subgraph_oracle(4, tri, 0b0111, 3), 0b111);
        assert_eq!(induced_subgraph_oracle(4, tri, 0, 3), 0);
    }
}
