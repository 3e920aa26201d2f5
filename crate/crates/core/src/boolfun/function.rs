use serde::{Deserialize, Serialize};

use super::{projection_table, table_mask, MAX_ARITY};
use crate::error::{Error, Result};

/// A Boolean function `{0,1}^arity -> {0,1}`.
///
/// Ordering is by `(arity, table)`, which is the canonical order used for
/// every enumeration result.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BoolFun {
    arity: u8,
    table: u64,
}

impl BoolFun {
    pub fn new(arity: usize, table: u64) -> Result<Self> {
        if arity > MAX_ARITY {
            return Err(Error::Arity {
                arity,
                max: MAX_ARITY,
            });
        }
        if table & !table_mask(arity) != 0 {
            return Err(Error::Invalid(format!(
                "table {table:#x} has bits beyond 2^{arity}"
            )));
        }
        Ok(BoolFun {
            arity: arity as u8,
            table,
        })
    }

    pub fn from_fn(arity: usize, f: impl Fn(u64) -> bool) -> Self {
        assert!(arity <= MAX_ARITY);
        let mut table = 0;
        for x in 0..(1u64 << arity) {
            if f(x) {
                table |= 1 << x;
            }
        }
        BoolFun {
            arity: arity as u8,
            table,
        }
    }

    pub fn constant(arity: usize, value: bool) -> Self {
        BoolFun::from_fn(arity, |_| value)
    }

    /// Projection onto variable `i` (0-based).
    pub fn projection(arity: usize, i: usize) -> Self {
        assert!(i < arity);
        BoolFun {
            arity: arity as u8,
            table: projection_table(arity, i),
        }
    }

    pub fn identity() -> Self {
        BoolFun::projection(1, 0)
    }

    pub fn negation() -> Self {
        BoolFun::from_fn(1, |x| x & 1 == 0)
    }

    pub fn and2() -> Self {
        BoolFun::from_fn(2, |x| x == 3)
    }

    pub fn or2() -> Self {
        BoolFun::from_fn(2, |x| x != 0)
    }

    pub fn implication() -> Self {
        BoolFun::from_fn(2, |x| x & 1 == 0 || x & 2 != 0)
    }

    /// `x_1 xor ... xor x_n`.
    pub fn parity(n: usize) -> Self {
        BoolFun::from_fn(n, |x| x.count_ones() % 2 == 1)
    }

    /// Majority of an odd number of inputs.
    pub fn majority(n: usize) -> Self {
        BoolFun::from_fn(n, |x| 2 * x.count_ones() as usize > n)
    }

    pub fn maj3() -> Self {
        BoolFun::majority(3)
    }

    /// Threshold `weight(x) >= k`.
    pub fn threshold(n: usize, k: usize) -> Self {
        BoolFun::from_fn(n, |x| x.count_ones() as usize >= k)
    }

    /// If-then-else `x ? y : z`.
    pub fn ite() -> Self {
        BoolFun::from_fn(3, |x| if x & 1 == 1 { x & 2 != 0 } else { x & 4 != 0 })
    }

    #[inline]
    pub fn arity(&self) -> usize {
        self.arity as usize
    }

    #[inline]
    pub fn table(&self) -> u64 {
        self.table
    }

    #[inline]
    pub fn eval(&self, x: u64) -> bool {
        (self.table >> x) & 1 == 1
    }

    /// `dual(f)(x) = not f(not x)`.
    pub fn dual(&self) -> Self {
        let mask = (1u64 << self.arity) - 1;
        BoolFun::from_fn(self.arity(), |x| !self.eval(!x & mask))
    }

    /// Same function viewed at a larger arity, ignoring the new variables.
    pub fn pad(&self, arity: usize) -> Self {
        assert!(arity >= self.arity() && arity <= MAX_ARITY);
        let low = (1u64 << self.arity) - 1;
        BoolFun::from_fn(arity, |x| self.eval(x & low))
    }

    /// Applies `self` to argument tables `args` of a common arity, returning
    /// the table of `self(args[0], ..., args[k-1])`.
    pub fn compose_tables(&self, args: &[u64], arity: usize) -> u64 {
        debug_assert_eq!(args.len(), self.arity());
        let mask = table_mask(arity);
        let mut out = 0u64;
        let mut ones = self.table;
        while ones != 0 {
            let y = ones.trailing_zeros() as u64;
            ones &= ones - 1;
            let mut term = mask;
            for (i, &h) in args.iter().enumerate() {
                term &= if (y >> i) & 1 == 1 { h } else { !h };
            }
            out |= term;
        }
        out & mask
    }

    pub fn compose(&self, args: &[BoolFun]) -> Result<BoolFun> {
        if args.len() != self.arity() {
            return Err(Error::Invalid(format!(
                "composition needs {} arguments, got {}",
                self.arity(),
                args.len()
            )));
        }
        let arity = args.first().map_or(0, |a| a.arity());
        if args.iter().any(|a| a.arity() != arity) {
            return Err(Error::Invalid("arguments differ in arity".into()));
        }
        let tables: Vec<u64> = args.iter().map(|a| a.table).collect();
        BoolFun::new(arity, self.compose_tables(&tables, arity))
    }

    pub fn is_monotone(&self) -> bool {
        let n = self.arity();
        (0..(1u64 << n)).all(|x| {
            !self.eval(x) || (0..n).all(|i| self.eval(x | (1 << i)))
        })
    }

    pub fn is_linear(&self) -> bool {
        let n = self.arity();
        let b = self.eval(0);
        let c: u64 = (0..n)
            .filter(|&i| self.eval(1 << i) != b)
            .fold(0, |c, i| c | (1 << i));
        (0..(1u64 << n)).all(|x| self.eval(x) == (b ^ ((x & c).count_ones() % 2 == 1)))
    }

    pub fn properties(&self) -> FunctionProperties {
        let n = self.arity();
        let all_ones = (1u64 << n) - 1;
        let separating = |a: bool| -> (bool, Vec<bool>) {
            let preimage: Vec<u64> = (0..(1u64 << n)).filter(|&x| self.eval(x) == a).collect();
            // a coordinate "survives" a set T if every x in T has x_i = a
            let killed = |x: u64| if a { !x & all_ones } else { x & all_ones };
            let whole = preimage.iter().fold(0, |acc, &x| acc | killed(x)) != all_ones;
            // fewest elements of the preimage that together kill every coordinate
            let mut dist = vec![usize::MAX; 1 << n];
            dist[0] = 0;
            for mask in 0..(1usize << n) {
                if dist[mask] == usize::MAX {
                    continue;
                }
                for &x in &preimage {
                    let next = mask | killed(x) as usize;
                    if dist[mask] + 1 < dist[next] {
                        dist[next] = dist[mask] + 1;
                    }
                }
            }
            let min_kill = if n == 0 { usize::MAX } else { dist[all_ones as usize] };
            let degrees = (1..=n)
                .map(|k| preimage.len() < k || min_kill > k)
                .collect();
            (whole || n == 0 && preimage.is_empty(), degrees)
        };
        let (sep0, deg0) = separating(false);
        let (sep1, deg1) = separating(true);
        FunctionProperties {
            monotone: self.is_monotone(),
            linear: self.is_linear(),
            self_dual: self.dual() == *self,
            zero_reproducing: !self.eval(0),
            one_reproducing: self.eval(all_ones),
            zero_separating: sep0,
            one_separating: sep1,
            zero_separating_degree: deg0,
            one_separating_degree: deg1,
        }
    }
}

impl std::fmt::Debug for BoolFun {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "f{}:{:0width$b}",
            self.arity,
            self.table,
            width = 1 << self.arity
        )
    }
}

/// Post-lattice membership predicates of a single function.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctionProperties {
    pub monotone: bool,
    pub linear: bool,
    pub self_dual: bool,
    pub zero_reproducing: bool,
    pub one_reproducing: bool,
    pub zero_separating: bool,
    pub one_separating: bool,
    /// Entry `k-1` tells whether the function is 0-separating of degree `k`.
    pub zero_separating_degree: Vec<bool>,
    /// Entry `k-1` tells whether the function is 1-separating of degree `k`.
    pub one_separating_degree: Vec<bool>,
}
