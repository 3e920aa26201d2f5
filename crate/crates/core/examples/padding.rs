//! Padding a monotone graph property onto more vertices: the planted copy
//! of a small graph keeps its value, and vertex permutations do not matter.
//!
//!     cargo run --example padding

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use postlab::construct::{padded_graph_property, pair_count, GraphPropertyCircuit, Profile};
use postlab::graph::Graph;
use postlab::BitSet;

fn main() -> postlab::Result<()> {
    let f = GraphPropertyCircuit::odd_factor(4)?;
    let (g, embed) = padded_graph_property(&f, 6, Profile::Nc1)?;
    let ms = g.circuit.measures();
    println!(
        "{}: {} inputs, size {}, depth {}, NOT-free {}, monotone function {}",
        g.name,
        g.circuit.n(),
        ms.size,
        ms.depth,
        ms.monotone,
        g.circuit.truth_table()?.is_monotone()
    );

    let mut same = 0;
    for mask in 0..1u64 << pair_count(4) {
        let x = embed.apply(&BitSet::from_mask(pair_count(4), mask))?;
        same += (g.circuit.evaluate(&x)?.get(0) == f.eval(&Graph::from_edge_mask(4, mask)?)?) as u32;
    }
    println!("planted copies agree with f on {same}/{} graphs", 1 << pair_count(4));

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let h = Graph::from_edges(6, &[(0, 3), (1, 4), (2, 5)])?;
    let want = g.eval(&h)?;
    let mut perm: Vec<usize> = (0..6).collect();
    let stable = (0..50).all(|_| {
        perm.shuffle(&mut rng);
        g.eval(&h.permuted(&perm).unwrap()).unwrap() == want
    });
    println!("perfect matching on 6 vertices: g = {want}, stable under 50 permutations: {stable}");
    Ok(())
}
