//! Depth reduction of a layered branching program: the circuit for depth
//! parameter d has depth exactly 2d, and its size falls as d grows.
//!
//!     cargo run --example checkpoint -- 9

use postlab::construct::{checkpoint_circuit, LayeredBp, PathMode};

fn main() -> postlab::Result<()> {
    let m: usize = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(9);
    let bp = LayeredBp::random(6, m, 3, 0.6, 5);
    println!("program: {} layers, widths {:?}, {} edges", bp.m(), bp.widths, bp.edges.len());
    for mode in [PathMode::Parity, PathMode::Reach] {
        for d in 1..=3 {
            let c = checkpoint_circuit(&bp, d, mode)?;
            let ms = c.measures();
            let tt = c.truth_table()?;
            let ok = (0..1u64 << bp.n).all(|x| tt.eval(x) == bp.value(x, mode));
            println!("{mode:?} d={d}: size {:>5} depth {} matches path count on all inputs: {ok}", ms.size, ms.depth);
        }
    }
    Ok(())
}
