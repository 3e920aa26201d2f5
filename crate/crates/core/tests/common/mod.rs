//! Reference implementations used by the integration tests. They share no
//! code with the library beyond its data types.

#![allow(dead_code)]

use postlab::csp::CspInstance;
use postlab::graph::Graph;

/// Satisfiability by trying every assignment of the `n` variables.
pub fn brute_sat(inst: &CspInstance) -> bool {
    let cs: Vec<(u64, usize, Vec<usize>)> = inst
        .constraints()
        .map(|c| {
            let r = inst.relation(c.relation);
            (r.mask(), r.arity(), c.vars)
        })
        .collect();
    // only the variables that occur matter
    let mut used: Vec<usize> = cs.iter().flat_map(|c| c.2.iter().copied()).collect();
    used.sort_unstable();
    used.dedup();
    assert!(used.len() <= 24, "{} variables is too many to enumerate", used.len());
    let mut pos = vec![0usize; inst.n()];
    for (i, &v) in used.iter().enumerate() {
        pos[v] = i;
    }
    (0..1u64 << used.len()).any(|a| {
        cs.iter().all(|(mask, _, vars)| {
            let t = vars.iter().enumerate().fold(0u64, |t, (i, &v)| t | (a >> pos[v] & 1) << i);
            mask >> t & 1 == 1
        })
    })
}

/// Sizes of connected components by depth-first search on an edge list.
pub fn component_sizes(v: usize, edges: &[(usize, usize)]) -> Vec<usize> {
    let mut adj = vec![Vec::new(); v];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut seen = vec![false; v];
    let mut sizes = Vec::new();
    for s in 0..v {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut stack = vec![s];
        let mut size = 0;
        while let Some(x) = stack.pop() {
            size += 1;
            for &y in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        sizes.push(size);
    }
    sizes
}

/// Pairs `(i, j)`, `i < j`, in lexicographic order.
pub fn pairs(v: usize) -> Vec<(usize, usize)> {
    (0..v).flat_map(|i| (i + 1..v).map(move |j| (i, j))).collect()
}

pub fn edges_of(v: usize, mask: u64) -> Vec<(usize, usize)> {
    pairs(v).into_iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, e)| e).collect()
}

/// Odd factor exists iff every component has an even number of vertices.
pub fn has_odd_factor(v: usize, mask: u64) -> bool {
    v > 0 && component_sizes(v, &edges_of(v, mask)).iter().all(|s| s % 2 == 0)
}

pub fn graph(v: usize, mask: u64) -> Graph {
    Graph::from_edges(v, &edges_of(v, mask)).unwrap()
}

/// Maps edge-mask bit `k` to the bit of the permuted pair.
pub fn pair_permutation(v: usize, perm: &[usize]) -> Vec<usize> {
    let ps = pairs(v);
    ps.iter()
        .map(|&(a, b)| {
            let (x, y) = (perm[a].min(perm[b]), perm[a].max(perm[b]));
            ps.iter().position(|&p| p == (x, y)).unwrap()
        })
        .collect()
}

pub fn permute_mask(mask: u64, map: &[usize]) -> u64 {
    map.iter().enumerate().fold(0, |m, (k, &to)| m | (mask >> k & 1) << to)
}

/// Monotone functions on `n` inputs as table words, by filtering all
/// tables (`n <= 4`).
pub fn monotone_tables(n: usize) -> Vec<u64> {
    let size = 1u64 << n;
    let monotone = |t: u64| {
        (0..size).all(|x| (0..n).all(|i| t >> x & 1 == 0 || t >> (x | 1 << i) & 1 == 1))
    };
    (0..1u64 << size).filter(|&t| monotone(t)).collect()
}

/// `(pos, neg)` terms, evaluated on every input.
pub fn dnf_table(n: usize, terms: &[(u64, u64)]) -> u64 {
    (0..1u64 << n)
        .filter(|&x| terms.iter().any(|&(p, q)| x & p == p && x & q == 0))
        .fold(0, |t, x| t | 1 << x)
}

/// Number of accepting paths of a layered program on input `x`, layer by
/// layer.
pub fn path_count(bp: &postlab::construct::LayeredBp, x: u64) -> u64 {
    use postlab::construct::Guard;
    let mut ways = vec![0u64; bp.widths[0]];
    ways[bp.start] = 1;
    for t in 0..bp.m() {
        let mut next = vec![0u64; bp.widths[t + 1]];
        for e in bp.edges.iter().filter(|e| e.layer == t) {
            let on = match e.guard {
                Guard::Const(b) => b,
                Guard::Lit { var, positive } => (x >> var & 1 == 1) == positive,
            };
            if on {
                next[e.to] += ways[e.from];
            }
        }
        ways = next;
    }
    ways[bp.accept]
}
