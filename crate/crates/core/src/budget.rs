//! Enumeration budgets. Every exhaustive routine checks its workload
//! against one of these limits before starting.

use crate::error::{Error, Result};

pub const ENV_VAR: &str = "POSTLAB_BUDGET";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    /// Largest function arity for polymorphism/closure enumeration.
    pub max_arity: usize,
    /// Cap on `|R|^arity(f)` tuple choices in a single preservation test.
    pub preserve_choices: u128,
    /// Cap on candidate functions in `polymorphisms_up_to`.
    pub candidates: u128,
    /// Variables a brute-force satisfiability check may enumerate.
    pub brute_force_vars: usize,
    /// Instance length for exhaustive monotonicity checks.
    pub monotone_bits: usize,
    /// Edge count for the odd-factor subset oracle.
    pub oracle_edges: usize,
    /// Visited-state cap for conjunctive-query search.
    pub cq_states: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_arity: 4,
            preserve_choices: 1 << 24,
            candidates: 1 << 17,
            brute_force_vars: 22,
            monotone_bits: 20,
            oracle_edges: 24,
            cq_states: 2_000_000,
        }
    }
}

impl Budget {
    /// Defaults overridden by `POSTLAB_BUDGET`, a comma-separated list of
    /// `key=value` pairs (keys are the field names).
    pub fn from_env() -> Result<Self> {
        match std::env::var(ENV_VAR) {
            Ok(spec) => Budget::default().with_overrides(&spec),
            Err(_) => Ok(Budget::default()),
        }
    }

    pub fn with_overrides(mut self, spec: &str) -> Result<Self> {
        for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, value) = part.split_once('=').ok_or_else(|| Error::Invalid(format!("{ENV_VAR}: `{part}` is not key=value")))?;
            let value: u128 = value.trim().parse().map_err(|_| Error::Invalid(format!("{ENV_VAR}: `{value}` is not an integer")))?;
            match key.trim() {
                "max_arity" => self.max_arity = value as usize,
                "preserve_choices" => self.preserve_choices = value,
                "candidates" => self.candidates = value,
                "brute_force_vars" => self.brute_force_vars = value as usize,
                "monotone_bits" => self.monotone_bits = value as usize,
                "oracle_edges" => self.oracle_edges = value as usize,
                "cq_states" => self.cq_states = value as usize,
                other => {
                    return Err(Error::Invalid(format!("{ENV_VAR}: unknown key `{other}`")))
                }
            }
        }
        Ok(self)
    }

    pub(crate) fn check(what: &'static str, needed: u128, limit: u128) -> Result<()> {
        if needed > limit {
            Err(Error::Budget { what, needed, limit })
        } else {
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overrides_parse() {
        let b = Budget::default()
            .with_overrides("brute_force_vars=10, max_arity=3")
            .unwrap();
        assert_eq!(b.brute_force_vars, 10);
        assert_eq!(b.max_arity, 3);
        assert!(Budget::default().with_overrides("nope=1").is_err());
        assert!(Budget::default().with_overrides("max_arity").is_err());
    }
}
