//! Monotone DNFs: stripping negative literals from a DNF of a monotone
//! function, and reading a monotone DNF off a decision tree.
//!
//!     cargo run --example quine

use postlab::circuit::{build_decision_tree, count_minterms, dt_to_monotone_dnf, quine_strip, Dnf, TreeMode, TruthTable};

fn main() -> postlab::Result<()> {
    let d = Dnf::parse("n 3\nx1 x2 !x3\nx1 x2 x3\nx2 x3\nx1 !x2 x3\n")?;
    let f = d.truth_table()?;
    println!("input DNF:\n{}monotone: {}", d.to_text(), f.is_monotone());
    let s = quine_strip(&d)?;
    println!("stripped:\n{}equivalent: {}", s.to_text(), s.truth_table()? == f);

    for n in [3, 5] {
        println!("majority of {n}: {} minterms", count_minterms(&TruthTable::majority(n)?));
    }

    let maj = TruthTable::majority(5)?;
    let t = build_decision_tree(&maj, TreeMode::Greedy)?;
    let dnf = dt_to_monotone_dnf(&t, 5)?;
    println!("decision tree for maj5: depth {}, {} leaves -> monotone DNF with {} terms", t.depth(), t.leaves(), dnf.terms.len());
    Ok(())
}
