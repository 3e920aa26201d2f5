//! Odd factors: the component-parity test, the subset oracle and the
//! Tseitin system agree on every graph with few vertices.
//!
//!     cargo run --example oddfactor -- 6

use postlab::graph::{odd_factor_fast, odd_factor_oracle, tseitin_system, Graph};
use postlab::Budget;

fn main() -> postlab::Result<()> {
    let budget = Budget::from_env()?;
    let max_v: usize = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(5);
    for v in 1..=max_v {
        let pairs = v * (v - 1) / 2;
        let (mut yes, mut disagree) = (0u64, 0u64);
        for mask in 0..1u64 << pairs {
            let g = Graph::from_edge_mask(v, mask)?;
            let fast = odd_factor_fast(&g);
            yes += fast as u64;
            if fast != odd_factor_oracle(&g, &budget)? || fast != tseitin_system(&g).is_satisfiable() {
                disagree += 1;
            }
        }
        println!("{v} vertices: {yes:>7} of {:>7} graphs have an odd factor, {disagree} disagreements", 1u64 << pairs);
    }
    let triangle = Graph::from_edges(3, &[(0, 1), (1, 2), (0, 2)])?;
    println!("triangle components {:?}, odd factor {}", triangle.component_sizes(), odd_factor_fast(&triangle));
    Ok(())
}
