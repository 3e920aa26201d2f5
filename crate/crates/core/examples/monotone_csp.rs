//! AND/OR circuits computing unsatisfiability of tractable constraint
//! languages, checked against brute force on random instances.
//!
//!     cargo run --example monotone_csp

use postlab::construct::{emit_monotone_csp_circuit, MonotoneFragment};
use postlab::csp::make_random;
use postlab::{Budget, RelationSet};

fn main() -> postlab::Result<()> {
    let budget = Budget::from_env()?;
    let cases = [
        (RelationSet::horn3(), MonotoneFragment::Horn),
        (RelationSet::antihorn3(), MonotoneFragment::AntiHorn),
        (RelationSet::two_sat(), MonotoneFragment::TwoSat),
        (RelationSet::or_fragment(2), MonotoneFragment::Or),
    ];
    for (set, frag) in cases {
        for n in [3, 4] {
            let c = emit_monotone_csp_circuit(&set, n, Some(frag))?;
            let ms = c.measures();
            let mut agree = 0;
            for seed in 0..100 {
                let inst = make_random(&set, n, 0.05, seed)?;
                agree += (c.evaluate(inst.bits())?.get(0) == inst.csp_sat_value(&budget)?) as u32;
            }
            println!(
                "{:<10} n={n} inputs {:>4} size {:>6} depth {:>3} monotone {} agrees {agree}/100",
                set.label(),
                c.n(),
                ms.size,
                ms.depth,
                ms.monotone
            );
        }
    }
    Ok(())
}
