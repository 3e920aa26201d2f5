//! Random instances of each tractable fragment, decided by the designated
//! polynomial-time solver and cross-checked by brute force.
//!
//!     cargo run --example solvers

use postlab::csp::{designated_solver, make_random, CspInstance};
use postlab::lattice::classify;
use postlab::{Budget, RelationSet};

fn main() -> postlab::Result<()> {
    let budget = Budget::from_env()?;
    let sets = [
        RelationSet::xor3(),
        RelationSet::horn3(),
        RelationSet::antihorn3(),
        RelationSet::two_sat(),
        RelationSet::or_fragment(3),
    ];
    for s in &sets {
        let v = classify(s, &budget)?;
        let solver = match designated_solver(&v, s) {
            Some(x) => x,
            None => {
                println!("{}: no designated solver", s.label());
                continue;
            }
        };
        // about 2n constraints, near the satisfiability threshold
        let density = 12.0 / CspInstance::empty(s.clone(), 6)?.len() as f64;
        let (mut sat, mut agree) = (0, 0);
        for seed in 0..100 {
            let inst = make_random(s, 6, density, seed)?;
            let got = solver.solve(&inst)?;
            sat += got as usize;
            agree += (got != inst.csp_sat_value(&budget)?) as usize;
        }
        println!("{:<10} solver {:<8} satisfiable {sat:>3}/100, agrees with brute force {agree}/100", s.label(), solver.name());
    }
    Ok(())
}
