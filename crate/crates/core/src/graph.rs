//! Small simple graphs, odd factors and Tseitin parity systems.

use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::csp::XorSystem;
use crate::error::{Error, Result};

pub const MAX_VERTICES: usize = 64;

/// Simple undirected graph on at most 64 vertices, one adjacency word per
/// vertex. Edges are ordered lexicographically by `(i, j)`, `i < j`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct Graph {
    v: usize,
    adj: Vec<u64>,
}

impl Graph {
    pub fn new(v: usize) -> Result<Self> {
        if v > MAX_VERTICES {
            return Err(Error::Invalid(format!("{v} vertices exceeds {MAX_VERTICES}")));
        }
        Ok(Graph { v, adj: vec![0; v] })
    }

    pub fn from_edges(v: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::new(v)?;
        for &(a, b) in edges {
            g.add_edge(a, b)?;
        }
        Ok(g)
    }

    /// Bit `k` of `mask` selects the `k`-th pair of `K_v` in lexicographic
    /// order.
    pub fn from_edge_mask(v: usize, mask: u64) -> Result<Self> {
        let mut g = Graph::new(v)?;
        let mut k = 0;
        for i in 0..v {
            for j in i + 1..v {
                if k < 64 && mask >> k & 1 == 1 {
                    g.add_edge(i, j)?;
                }
                k += 1;
            }
        }
        Ok(g)
    }

    pub fn complete(v: usize) -> Result<Self> {
        let mut g = Graph::new(v)?;
        for i in 0..v {
            for j in i + 1..v {
                g.add_edge(i, j)?;
            }
        }
        Ok(g)
    }

    pub fn vertex_count(&self) -> usize {
        self.v
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|a| a.count_ones() as usize).sum::<usize>() / 2
    }

    pub fn add_edge(&mut self, a: usize, b: usize) -> Result<()> {
        if a == b {
            return Err(Error::Invalid(format!("self-loop at {a}")));
        }
        for x in [a, b] {
            if x >= self.v {
                return Err(Error::Index { index: x, len: self.v });
            }
        }
        self.adj[a] |= 1 << b;
        self.adj[b] |= 1 << a;
        Ok(())
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        a < self.v && self.adj[a] >> b & 1 == 1
    }

    pub fn neighbors(&self, a: usize) -> u64 {
        self.adj[a]
    }

    pub fn degree(&self, a: usize) -> usize {
        self.adj[a].count_ones() as usize
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.v {
            let mut higher = self.adj[i] & !((2u64 << i) - 1);
            while higher != 0 {
                out.push((i, higher.trailing_zeros() as usize));
                higher &= higher - 1;
            }
        }
        out
    }

    /// The graph with vertex `i` renamed to `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Graph> {
        let mut g = Graph::new(self.v)?;
        for (a, b) in self.edges() {
            g.add_edge(perm[a], perm[b])?;
        }
        Ok(g)
    }

    /// Sizes of connected components.
    pub fn component_sizes(&self) -> Vec<usize> {
        let mut parent: Vec<usize> = (0..self.v).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for (a, b) in self.edges() {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent[ra] = rb;
            }
        }
        let mut size = vec![0; self.v];
        for x in 0..self.v {
            let r = find(&mut parent, x);
            size[r] += 1;
        }
        size.into_iter().filter(|&s| s > 0).collect()
    }

    /// `v <count>` then one `e i j` line per edge, 1-based.
    pub fn to_text(&self) -> String {
        let mut s = format!("v {}\n", self.v);
        for (a, b) in self.edges() {
            s.push_str(&format!("e {} {}\n", a + 1, b + 1));
        }
        s
    }

    pub fn parse(text: &str) -> Result<Graph> {
        let mut g: Option<Graph> = None;
        for (ln, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: &str| Error::Parse {
                line: ln + 1,
                msg: msg.to_string(),
            };
            let parts: Vec<&str> = line.split_whitespace().collect();
            let num = |s: &str| s.parse::<usize>().map_err(|_| err("expected an integer"));
            match parts[..] {
                ["v", c] => g = Some(Graph::new(num(c)?).map_err(|e| err(&e.to_string()))?),
                ["e", a, b] => {
                    let g = g.as_mut().ok_or_else(|| err("edge before vertex count"))?;
                    let (a, b) = (num(a)?, num(b)?);
                    if a == 0 || b == 0 {
                        return Err(err("vertices are 1-based"));
                    }
                    g.add_edge(a - 1, b - 1).map_err(|e| err(&e.to_string()))?;
                }
                _ => return Err(err("expected `v <count>` or `e <i> <j>`")),
            }
        }
        g.ok_or(Error::Parse {
            line: 0,
            msg: "missing `v <count>` line".into(),
        })
    }
}

/// Every connected component has an even number of vertices.
pub fn odd_factor_fast(g: &Graph) -> bool {
    g.component_sizes().iter().all(|s| s % 2 == 0)
}

/// Searches edge subsets for one in which every vertex has odd degree.
/// Edges are decided in lexicographic order and a vertex's parity is
/// checked once its last incident edge is decided.
pub fn odd_factor_oracle(g: &Graph, budget: &Budget) -> Result<bool> {
    let edges = g.edges();
    Budget::check("odd-factor oracle edges", edges.len() as u128, budget.oracle_edges as u128)?;
    if g.v == 0 {
        return Ok(true);
    }
    // vertices whose last incident edge is edge k
    let mut closes = vec![0u64; edges.len()];
    for x in 0..g.v {
        match edges.iter().rposition(|&(a, b)| a == x || b == x) {
            Some(k) => closes[k] |= 1 << x,
            None => return Ok(false),
        }
    }
    fn go(k: usize, parity: u64, edges: &[(usize, usize)], closes: &[u64]) -> bool {
        if k == edges.len() {
            return true;
        }
        let (a, b) = edges[k];
        let flip = (1u64 << a) | (1 << b);
        [parity, parity ^ flip]
            .into_iter()
            .any(|p| closes[k] & !p == 0 && go(k + 1, p, edges, closes))
    }
    Ok(go(0, 0, &edges, &closes))
}

/// One variable per edge (lexicographic order), one equation
/// `sum_{e ∋ v} x_e = 1` per vertex.
pub fn tseitin_system(g: &Graph) -> XorSystem {
    let edges = g.edges();
    let mut sys = XorSystem::new(edges.len());
    for x in 0..g.v {
        let vars: Vec<usize> = (0..edges.len())
            .filter(|&k| edges[k].0 == x || edges[k].1 == x)
            .collect();
        sys.add(&vars, true);
    }
    sys
}

/// Bipartite graph with `n` vertices per side; bit `j` of `rows[i]` is the
/// edge between left `i` and right `j`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct BipGraph {
    pub n: usize,
    pub rows: Vec<u64>,
}

impl BipGraph {
    pub fn new(n: usize, rows: Vec<u64>) -> Result<Self> {
        if n > MAX_VERTICES / 2 {
            return Err(Error::Invalid(format!("{n} vertices per side exceeds {}", MAX_VERTICES / 2)));
        }
        if rows.len() != n || rows.iter().any(|&r| n < 64 && r >> n != 0) {
            return Err(Error::Invalid(format!("biadjacency matrix must be {n}x{n}")));
        }
        Ok(BipGraph { n, rows })
    }

    /// Row-major bits: bit `i*n + j` is entry `(i, j)`.
    pub fn from_mask(n: usize, mask: u64) -> Result<Self> {
        let rows = (0..n).map(|i| (mask >> (i * n)) & ((1u64 << n) - 1)).collect();
        BipGraph::new(n, rows)
    }

    pub fn from_matrix(m: &[Vec<bool>]) -> Result<Self> {
        let n = m.len();
        if m.iter().any(|r| r.len() != n) {
            return Err(Error::Invalid("biadjacency matrix must be square".into()));
        }
        let rows = m
            .iter()
            .map(|r| r.iter().enumerate().fold(0u64, |a, (j, &b)| a | (b as u64) << j))
            .collect();
        BipGraph::new(n, rows)
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i] >> j & 1 == 1
    }

    /// Left vertices `0..n`, right vertices `n..2n`.
    pub fn to_graph(&self) -> Graph {
        let mut g = Graph::new(2 * self.n).expect("at most 64 vertices");
        for i in 0..self.n {
            for j in 0..self.n {
                if self.get(i, j) {
                    g.add_edge(i, self.n + j).expect("valid edge");
                }
            }
        }
        g
    }
}

pub fn bip_odd_factor(b: &BipGraph) -> bool {
    odd_factor_fast(&b.to_graph())
}

/// Direct enumeration of edge subsets of the biadjacency matrix.
pub fn bip_odd_factor_oracle(b: &BipGraph, budget: &Budget) -> Result<bool> {
    let cells: Vec<(usize, usize)> = (0..b.n)
        .flat_map(|i| (0..b.n).map(move |j| (i, j)))
        .filter(|&(i, j)| b.get(i, j))
        .collect();
    Budget::check("bipartite oracle edges", cells.len() as u128, budget.oracle_edges as u128)?;
    let target = if b.n == 0 { 0 } else { (1u64 << (2 * b.n)) - 1 };
    Ok((0..1u64 << cells.len()).any(|s| {
        let mut parity = 0u64;
        for (k, &(i, j)) in cells.iter().enumerate() {
            if s >> k & 1 == 1 {
                parity ^= (1 << i) | (1 << (b.n + j));
            }
        }
        parity == target
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b() -> Budget {
        Budget::default()
    }

    #[test]
    fn odd_factor_examples() {
        let k2 = Graph::complete(2).unwrap();
        let tri = Graph::complete(3).unwrap();
        let mut both = Graph::new(5).unwrap();
        both.add_edge(0, 1).unwrap();
        for (x, y) in [(2, 3), (3, 4), (2, 4)] {
            both.add_edge(x, y).unwrap();
        }
        assert!(odd_factor_fast(&k2) && odd_factor_oracle(&k2, &b()).unwrap());
        assert!(!odd_factor_fast(&tri) && !odd_factor_oracle(&tri, &b()).unwrap());
        assert!(!odd_factor_fast(&both) && !odd_factor_oracle(&both, &b()).unwrap());
        let k4 = Graph::complete(4).unwrap();
        assert!(odd_factor_oracle(&k4, &b()).unwrap());
        assert!(!odd_factor_oracle(&Graph::new(1).unwrap(), &b()).unwrap());
        assert!(tseitin_system(&k2).is_satisfiable());
        assert!(!tseitin_system(&tri).is_satisfiable());
        let small = Budget { oracle_edges: 5, ..b() };
        assert!(odd_factor_oracle(&k4, &small).is_err());
    }

    #[test]
    fn all_graphs_on_five_vertices() {
        for mask in 0..1u64 << 10 {
            let g = Graph::from_edge_mask(5, mask).unwrap();
            let fast = odd_factor_fast(&g);
            assert_eq!(fast, odd_factor_oracle(&g, &b()).unwrap(), "{mask:b}");
            assert_eq!(fast, tseitin_system(&g).is_satisfiable(), "{mask:b}");
        }
    }

    #[test]
    fn bipartite() {
        let id = BipGraph::from_matrix(&[vec![true, false], vec![false, true]]).unwrap();
        assert!(bip_odd_factor(&id) && bip_odd_factor_oracle(&id, &b()).unwrap());
        let zero = BipGraph::new(2, vec![0, 0]).unwrap();
        assert!(!bip_odd_factor(&zero) && !bip_odd_factor_oracle(&zero, &b()).unwrap());
        assert!(BipGraph::from_matrix(&[vec![true, true]]).is_err());
        for m in 0..1u64 << 9 {
            let g = BipGraph::from_mask(3, m).unwrap();
            assert_eq!(bip_odd_factor(&g), bip_odd_factor_oracle(&g, &b()).unwrap());
        }
    }

    #[test]
    fn text_roundtrip() {
        let g = Graph::from_edges(4, &[(0, 1), (2, 3), (1, 3)]).unwrap();
        assert_eq!(Graph::parse(&g.to_text()).unwrap(), g);
        assert!(matches!(Graph::parse("v 3\ne 1 4\n"), Err(Error::Parse { line: 2, .. })));
        assert_eq!(Graph::from_edge_mask(4, 0b100001).unwrap().edges(), vec![(0, 1), (2, 3)]);
    }
}
