//! Monotone reductions between constraint languages, as explicit maps on
//! instance bits.

mod bipartite;
mod bitred;
pub mod cq;
mod rewrite;

pub use bipartite::{bip_oddfactor_to_xorsat, matrix_bits, BipXorLayout};
pub use bitred::{BitDef, BitReduction};
pub use cq::{find_cq, Atom, CqBudget, CqDefinition, CqSearch};
pub use rewrite::{
    apply_reduction, cq_rewrite, eliminate_equality, eliminate_equality_at, identity_reduction, l2_to_l3_transform,
    negate_instance, negate_relations, pol_reduce, PolReduction,
};
