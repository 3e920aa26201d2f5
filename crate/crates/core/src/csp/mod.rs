//! `CSP-SAT(S)` instances as bit strings, brute-force oracles, the
//! fragment solvers and instance generators.

pub mod clauses;
mod generate;
mod instance;
mod monotone;
mod solve;

pub use clauses::{clauses_of, equations_of, Clause, ClauseShape, Equation};
pub use generate::{make_hornsat, make_random, make_tseitin, make_tseitin_with, make_xorsat, tseitin_relations};
pub use instance::{Constraint, CspInstance};
pub use monotone::{check_monotone, monotonicity_check, MonotoneMode, MonotoneReport};
pub use solve::{
    designated_solver, horn_marking, negate_instance, solve_2sat, solve_antihorn, solve_constant, solve_horn,
    solve_nand_fragment, solve_or_fragment, solve_xor, xor_system, Solver, XorSystem,
};
