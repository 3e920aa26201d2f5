use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::instance::CspInstance;
use crate::bits::BitSet;
use crate::boolfun::RelationSet;
use crate::budget::Budget;
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MonotoneMode {
    /// Every cover pair `w < w + e_i` of `{0,1}^N`.
    Exhaustive,
    /// Random maximal chains from the empty string to the full one.
    Sampled { chains: usize, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonotoneReport {
    pub monotone: bool,
    /// `(lo, hi)` with `lo <= hi`, `f(lo) = 1`, `f(hi) = 0`.
    pub witness: Option<(Vec<usize>, Vec<usize>)>,
    pub evaluations: usize,
}

/// Monotonicity of an arbitrary `f: {0,1}^len -> {0,1}`.
pub fn check_monotone(
    len: usize,
    f: impl Fn(&BitSet) -> Result<bool>,
    mode: MonotoneMode,
    budget: &Budget,
) -> Result<MonotoneReport> {
    match mode {
        MonotoneMode::Exhaustive => {
            Budget::check("monotonicity bits", len as u128, budget.monotone_bits.min(32) as u128)?;
            let table: Vec<bool> = (0..1u64 << len)
                .map(|w| f(&BitSet::from_mask(len, w)))
                .collect::<Result<_>>()?;
            for w in 0..1u64 << len {
                if !table[w as usize] {
                    continue;
                }
                for i in 0..len {
                    let hi = w | 1 << i;
                    if !table[hi as usize] {
                        let set = |m: u64| BitSet::from_mask(len, m).ones().collect();
                        return Ok(MonotoneReport {
                            monotone: false,
                            witness: Some((set(w), set(hi))),
                            evaluations: table.len(),
                        });
                    }
                }
            }
            Ok(MonotoneReport {
                monotone: true,
                witness: None,
                evaluations: table.len(),
            })
        }
        MonotoneMode::Sampled { chains, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut order: Vec<usize> = (0..len).collect();
            let mut evaluations = 0;
            for _ in 0..chains {
                order.shuffle(&mut rng);
                let mut w = BitSet::new(len);
                let mut prev = f(&w)?;
                evaluations += 1;
                for &i in &order {
                    let lo: Vec<usize> = w.ones().collect();
                    w.insert(i);
                    let cur = f(&w)?;
                    evaluations += 1;
                    if prev && !cur {
                        return Ok(MonotoneReport {
                            monotone: false,
                            witness: Some((lo, w.ones().collect())),
                            evaluations,
                        });
                    }
                    prev = cur;
                }
            }
            Ok(MonotoneReport {
                monotone: true,
                witness: None,
                evaluations,
            })
        }
    }
}

/// Monotonicity of `CSP-SAT(S)` on `n` variables.
pub fn monotonicity_check(set: &RelationSet, n: usize, mode: MonotoneMode, budget: &Budget) -> Result<MonotoneReport> {
    let base = CspInstance::empty(set.clone(), n)?;
    check_monotone(base.len(), |w| base.with_bits(w.clone())?.csp_sat_value(budget), mode, budget)
}
