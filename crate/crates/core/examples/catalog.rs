//! Validates the clone catalog: every recorded inclusion is confirmed by
//! closing the bases at arity 3.
//!
//!     cargo run --example catalog

use postlab::lattice::{validate_catalog, Catalog};

fn main() -> postlab::Result<()> {
    let cat = Catalog::standard();
    println!("{} clones", cat.clones().len());
    let report = validate_catalog()?;
    for pair in [("V2", "S00"), ("E2", "S10"), ("I2", "BF"), ("L2", "L3"), ("N2", "L3")] {
        println!("{} ⊆ {}: {:?}", pair.0, pair.1, report.holds(pair.0, pair.1));
    }
    println!("{} inclusion checks, all passed: {}", report.checks.len(), report.passed());
    Ok(())
}
