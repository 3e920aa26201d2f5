use serde::{Deserialize, Serialize};

use super::bitred::{BitDef, BitReduction};
use crate::bits::BitSet;
use crate::boolfun::RelationSet;
use crate::csp::CspInstance;
use crate::error::Result;
use crate::graph::BipGraph;

/// Fixed variable layout and constraint skeleton of the BipOddFactor to
/// 3-XOR-SAT reduction for `n x n` matrices.
///
/// Variables: `x_ij` (`i*n + j`), then the row chains `z`, then the column
/// chains `w`, each `n - 1` per line. Row `i` is `xor_j x_ij = 1` written
/// as `xor3_0(acc, x_ij, z)` steps closed by `xor3_1(z, z, z)`; columns
/// likewise. A zero entry `M_ij = 0` adds `xor3_0(x_ij, x_ij, x_ij)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BipXorLayout {
    pub n: usize,
    pub vars: usize,
    /// Constraint bits present for every matrix.
    pub structural: Vec<usize>,
    /// Bit of `x_ij = 0`, indexed `i*n + j`.
    pub zero_bits: Vec<usize>,
    empty: CspInstance,
}

impl BipXorLayout {
    pub fn new(n: usize) -> Result<Self> {
        let chain = n.saturating_sub(1);
        let vars = n * n + 2 * n * chain;
        let mut inst = CspInstance::empty(RelationSet::xor3(), vars)?;
        let (x0, x1) = (0, 1);
        let mut structural = Vec::new();
        let mut fresh = n * n;
        for line in 0..2 * n {
            let cell = |k: usize| if line < n { line * n + k } else { k * n + (line - n) };
            let mut acc = cell(0);
            for k in 1..n {
                structural.push(inst.add(x0, &[acc, cell(k), fresh])?);
                acc = fresh;
                fresh += 1;
            }
            structural.push(inst.add(x1, &[acc, acc, acc])?);
        }
        structural.sort_unstable();
        structural.dedup();
        let zero_bits = (0..n * n).map(|c| inst.encode(x0, &[c, c, c])).collect::<Result<_>>()?;
        let empty = CspInstance::empty(RelationSet::xor3(), vars)?;
        Ok(BipXorLayout {
            n,
            vars,
            structural,
            zero_bits,
            empty,
        })
    }

    /// `α(M)`: the system whose satisfiability is BipOddFactor(M).
    pub fn alpha(&self, m: &BipGraph) -> Result<CspInstance> {
        let mut bits = BitSet::new(self.empty.len());
        for &j in &self.structural {
            bits.insert(j);
        }
        for i in 0..self.n {
            for j in 0..self.n {
                if !m.get(i, j) {
                    bits.insert(self.zero_bits[i * self.n + j]);
                }
            }
        }
        self.empty.with_bits(bits)
    }

    /// `β = ¬α` as a monotone projection of the `n^2` matrix bits
    /// (row-major): structural bits are 0, zero-entry bits copy `M_ij`,
    /// every other bit is 1.
    pub fn beta(&self) -> BitReduction {
        let mut r = BitReduction::new(self.n * self.n, self.empty.len(), true);
        for &j in &self.structural {
            r.set(j, BitDef::Const(false));
        }
        for (c, &j) in self.zero_bits.iter().enumerate() {
            r.set(j, BitDef::Input(c));
        }
        r
    }

    pub fn instance_len(&self) -> usize {
        self.empty.len()
    }

    pub fn template(&self) -> &CspInstance {
        &self.empty
    }
}

/// `α(M)` together with the monotone projection `β`.
pub fn bip_oddfactor_to_xorsat(m: &BipGraph) -> Result<(CspInstance, BitReduction)> {
    let layout = BipXorLayout::new(m.n)?;
    Ok((layout.alpha(m)?, layout.beta()))
}

pub fn matrix_bits(m: &BipGraph) -> BitSet {
    BitSet::from_indices(
        m.n * m.n,
        (0..m.n).flat_map(|i| (0..m.n).map(move |j| (i, j))).filter(|&(i, j)| m.get(i, j)).map(|(i, j)| i * m.n + j),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::budget::Budget;
    use crate::csp::solve_xor;
    use crate::graph::{bip_odd_factor, bip_odd_factor_oracle};

    #[test]
    fn examples() {
        let id = BipGraph::new(2, vec![0b01, 0b10]).unwrap();
        let (sys, beta) = bip_oddfactor_to_xorsat(&id).unwrap();
        assert!(solve_xor(&sys).unwrap());
        assert!(beta.is_projection() && beta.is_monotone_or());
        let zero = BipGraph::new(2, vec![0, 0]).unwrap();
        assert!(!solve_xor(&bip_oddfactor_to_xorsat(&zero).unwrap().0).unwrap());
    }

    #[test]
    fn dual_of_xorsat_on_beta_matches_n3() {
        let layout = BipXorLayout::new(3).unwrap();
        let beta = layout.beta();
        let b = Budget::default();
        for mask in 0..1u64 << 9 {
            let m = BipGraph::from_mask(3, mask).unwrap();
            let y = beta.apply(&matrix_bits(&m)).unwrap();
            // dual(f)(y) = ¬f(¬y), f = CSP-SAT of 3-XOR-SAT
            let comp = layout.template().with_bits(y.complement()).unwrap();
            let dual = solve_xor(&comp).unwrap();
            assert_eq!(dual, bip_odd_factor(&m), "{mask:b}");
            assert_eq!(dual, bip_odd_factor_oracle(&m, &b).unwrap());
            assert_eq!(comp, layout.alpha(&m).unwrap());
        }
    }
}
