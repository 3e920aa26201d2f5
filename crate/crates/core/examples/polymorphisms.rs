//! Enumerates low-arity polymorphisms of relation sets and shows the
//! lattice membership predicates of familiar functions.
//!
//!     cargo run --example polymorphisms

use postlab::boolfun::{polymorphisms_up_to, preservation_witness, BoolFun};
use postlab::{Budget, RelationSet};

fn main() -> postlab::Result<()> {
    let budget = Budget::from_env()?;
    for s in [RelationSet::xor3(), RelationSet::horn3(), RelationSet::two_sat()] {
        let pols = polymorphisms_up_to(&s, 3, &budget)?;
        let per_arity: Vec<usize> = (1..=3).map(|a| pols.iter().filter(|f| f.arity() == a).count()).collect();
        println!("{}: polymorphisms of arity 1, 2, 3: {:?}", s.label(), per_arity);
    }

    for (name, f) in [("and", BoolFun::and2()), ("or", BoolFun::or2()), ("maj3", BoolFun::maj3()), ("xor3", BoolFun::parity(3))] {
        let p = f.properties();
        println!(
            "{name:<5} monotone {:<5} linear {:<5} self-dual {:<5} 0-rep {:<5} 1-rep {}",
            p.monotone, p.linear, p.self_dual, p.zero_reproducing, p.one_reproducing
        );
    }

    // AND is not a polymorphism of 3-XOR-SAT; show the offending tuples
    for r in RelationSet::xor3().iter() {
        if let Some(w) = preservation_witness(&BoolFun::and2(), r, &budget)? {
            println!("and breaks {}: {w:?}", r.label());
        }
    }
    Ok(())
}
