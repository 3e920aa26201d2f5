//! Boolean functions and relations as truth tables.
//!
//! Bit `i` of a table holds the value on the assignment whose binary
//! encoding is `i`, with variable 1 as the least significant bit. Arity is
//! capped at [`MAX_ARITY`] so every table fits in a `u64`.

mod function;
mod polymorphism;
mod relation;

pub use function::{BoolFun, FunctionProperties};
pub use polymorphism::{
    closure_up_to, polymorphisms_up_to, preservation_witness, preserves, preserves_set,
    PreservationFailure,
};
pub use relation::{Relation, RelationSet};

/// Largest arity representable by a single-word truth table.
pub const MAX_ARITY: usize = 6;

/// Mask with the low `2^arity` bits set.
#[inline]
pub fn table_mask(arity: usize) -> u64 {
    let bits = 1u32 << arity;
    if bits >= 64 {
        !0
    } else {
        (1u64 << bits) - 1
    }
}

/// Truth table of projection `x_{i+1}` at the given arity.
#[inline]
pub(crate) fn projection_table(arity: usize, i: usize) -> u64 {
    let mut t = 0u64;
    for x in 0..(1u64 << arity) {
        if (x >> i) & 1 == 1 {
            t |= 1 << x;
        }
    }
    t
}
