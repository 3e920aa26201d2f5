//! Classification of Boolean constraint satisfaction problems by their
//! polymorphisms, monotone reductions between them, and explicit circuit
//! constructions checked against brute-force oracles.

pub mod bits;
pub mod circuit;
pub mod construct;
pub mod boolfun;
pub mod budget;
pub mod csp;
pub mod error;
pub mod graph;
pub mod lattice;
pub mod reductions;
pub mod verify;

pub use bits::BitSet;
pub use boolfun::{BoolFun, Relation, RelationSet};
pub use budget::Budget;
pub use error::{Error, Result};
