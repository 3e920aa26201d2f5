use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::instance::CspInstance;
use crate::boolfun::{Relation, RelationSet};
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Empty 3-XOR-SAT instance on `n` variables; `N = 2n^3`.
pub fn make_xorsat(n: usize) -> Result<CspInstance> {
    CspInstance::empty(RelationSet::xor3(), n)
}

/// Empty 3-Horn instance on `n` variables; `N = 2n^3 + n`.
pub fn make_hornsat(n: usize) -> Result<CspInstance> {
    CspInstance::empty(RelationSet::horn3(), n)
}

/// `{xor1_1, xor2_1, xor3_1, xor3_0}`.
pub fn tseitin_relations() -> RelationSet {
    RelationSet::new(vec![
        Relation::xor(1, true),
        Relation::xor(2, true),
        Relation::xor(3, true),
        Relation::xor(3, false),
    ])
    .named("tseitin")
}

/// Tseitin formula with chain rewriting of wide vertices.
pub fn make_tseitin(g: &Graph) -> Result<CspInstance> {
    make_tseitin_with(g, true)
}

/// One variable per edge in lexicographic order. A vertex of degree `d`
/// becomes `xor_d = 1` for `d <= 3`; wider vertices are split into a chain
/// of `xor3` atoms through fresh variables appended after the edges when
/// `chains` is set. An isolated vertex becomes the unsatisfiable
/// `xor2_1(x, x)`.
pub fn make_tseitin_with(g: &Graph, chains: bool) -> Result<CspInstance> {
    let edges = g.edges();
    let incident: Vec<Vec<usize>> = (0..g.vertex_count())
        .map(|x| (0..edges.len()).filter(|&k| edges[k].0 == x || edges[k].1 == x).collect())
        .collect();
    let wide: usize = incident.iter().map(|e| e.len().saturating_sub(3)).sum();
    if wide > 0 && !chains {
        let d = incident.iter().map(Vec::len).max().unwrap_or(0);
        return Err(Error::Invalid(format!("vertex of degree {d} needs chain rewriting")));
    }
    let isolated = incident.iter().any(Vec::is_empty);
    let n = (edges.len() + wide).max(isolated as usize);
    let mut inst = CspInstance::empty(tseitin_relations(), n)?;
    let mut fresh = edges.len();
    for e in &incident {
        match e[..] {
            [] => inst.add(1, &[0, 0])?,
            [a] => inst.add(0, &[a])?,
            [a, b] => inst.add(1, &[a, b])?,
            [a, b, c] => inst.add(2, &[a, b, c])?,
            _ => {
                let d = e.len();
                let mut acc = e[0];
                for &x in &e[1..d - 2] {
                    inst.add(3, &[acc, x, fresh])?;
                    acc = fresh;
                    fresh += 1;
                }
                inst.add(2, &[acc, e[d - 2], e[d - 1]])?
            }
        };
    }
    Ok(inst)
}

/// Each constraint application present independently with probability
/// `density`.
pub fn make_random(set: &RelationSet, n: usize, density: f64, seed: u64) -> Result<CspInstance> {
    if !(0.0..=1.0).contains(&density) {
        return Err(Error::Invalid(format!("density {density} outside [0, 1]")));
    }
    let mut inst = CspInstance::empty(set.clone(), n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bits = (0..inst.len()).filter(|_| rng.gen_bool(density)).collect::<Vec<_>>();
    inst = inst.with_bits(crate::bits::BitSet::from_indices(inst.len(), bits))?;
    Ok(inst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::budget::Budget;
    use crate::csp::solve_xor;

    #[test]
    fn sizes() {
        assert_eq!(make_xorsat(5).unwrap().len(), 250);
        assert_eq!(make_hornsat(4).unwrap().len(), 132);
    }

    #[test]
    fn tseitin_examples() {
        let b = Budget::default();
        let k2 = make_tseitin(&Graph::complete(2).unwrap()).unwrap();
        assert_eq!(k2.n(), 1);
        assert_eq!(k2.constraints().count(), 1);
        assert!(!k2.csp_sat_value(&b).unwrap());
        let tri = make_tseitin(&Graph::complete(3).unwrap()).unwrap();
        assert!(tri.csp_sat_value(&b).unwrap());
        assert!(!solve_xor(&tri).unwrap());
        let k5 = Graph::complete(5).unwrap();
        assert!(make_tseitin_with(&k5, false).is_err());
        let t = make_tseitin(&k5).unwrap();
        assert_eq!(t.n(), 10 + 5);
        assert!(t.csp_sat_value(&b).unwrap());
        let k6 = make_tseitin(&Graph::complete(6).unwrap()).unwrap();
        assert!(solve_xor(&k6).unwrap());
        let lone = make_tseitin(&Graph::new(1).unwrap()).unwrap();
        assert!(lone.csp_sat_value(&b).unwrap());
    }

    #[test]
    fn random_is_deterministic() {
        let a = make_random(&RelationSet::xor3(), 3, 0.2, 7).unwrap();
        assert_eq!(a, make_random(&RelationSet::xor3(), 3, 0.2, 7).unwrap());
        assert_ne!(a, make_random(&RelationSet::xor3(), 3, 0.2, 8).unwrap());
    }
}
