//! Classifies a few relation sets on both dichotomies and prints which
//! catalog clones each one preserves.
//!
//!     cargo run --example classify

use postlab::lattice::{classify_with_equality, Side};
use postlab::reductions::CqBudget;
use postlab::{Budget, Relation, RelationSet};

fn side(s: Side) -> &'static str {
    match s {
        Side::Easy => "easy",
        Side::Hard => "hard",
    }
}

fn main() -> postlab::Result<()> {
    let budget = Budget::from_env()?;
    let sets = [
        RelationSet::xor3(),
        RelationSet::horn3(),
        RelationSet::antihorn3(),
        RelationSet::two_sat(),
        RelationSet::or_fragment(3),
        RelationSet::new(vec![Relation::or(2)]).named("or2"),
        RelationSet::new(vec![Relation::nand(2)]).named("nand2"),
    ];
    println!("{:<10} {:<6} {:<6} {:<8} preserved", "set", "size", "depth", "trivial");
    for s in &sets {
        let v = classify_with_equality(s, &budget, &CqBudget::default())?;
        println!(
            "{:<10} {:<6} {:<6} {:<8} {}",
            s.label(),
            side(v.size_side),
            side(v.depth_side),
            v.trivial,
            v.preserved.join(" ")
        );
        for h in &v.hardness {
            println!("{:<10} -> {h}", "");
        }
    }
    Ok(())
}
