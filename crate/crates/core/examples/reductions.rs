//! Monotone reductions: a conjunctive-query rewrite into 3-XOR-SAT, the
//! complement-switch transform, and the bipartite odd-factor projection.
//!
//!     cargo run --example reductions

use postlab::csp::{make_random, solve_xor};
use postlab::graph::{bip_odd_factor, BipGraph};
use postlab::reductions::{l2_to_l3_transform, matrix_bits, pol_reduce, BipXorLayout, CqBudget};
use postlab::{Budget, Relation, RelationSet};

fn main() -> postlab::Result<()> {
    let budget = Budget::from_env()?;
    let s1 = RelationSet::new(vec![Relation::xor(2, true), Relation::xor(4, false)]).named("xor24");
    let inst = make_random(&s1, 4, 0.03, 11)?;
    if let Some(pr) = pol_reduce(&inst, &RelationSet::xor3(), &CqBudget::default(), &budget)? {
        for d in &pr.definitions {
            println!("definition: {}", d.describe());
        }
        println!(
            "{} constraints over {} -> {} constraints over {}; value {} -> {}",
            inst.bits().count_ones(),
            inst.set().label(),
            pr.instance.bits().count_ones(),
            pr.instance.set().label(),
            inst.csp_sat_value(&budget)?,
            pr.instance.csp_sat_value(&budget)?
        );
    }

    let x = make_random(&RelationSet::xor3(), 4, 0.05, 2)?;
    let (y, red) = l2_to_l3_transform(&x)?;
    println!("complement switch: n {} -> {}, projection {}, value {} -> {}", x.n(), y.n(), red.is_projection(), x.csp_sat_value(&budget)?, y.csp_sat_value(&budget)?);

    let layout = BipXorLayout::new(3)?;
    let beta = layout.beta();
    let mut agree = 0;
    for mask in 0..1u64 << 9 {
        let m = BipGraph::from_mask(3, mask)?;
        let y = beta.apply(&matrix_bits(&m))?;
        let dual = solve_xor(&layout.template().with_bits(y.complement())?)?;
        agree += (dual == bip_odd_factor(&m)) as u32;
    }
    println!("bipartite odd factor vs dual of 3-XOR-SAT on β(M): {agree}/512 agree, β is a projection: {}", beta.is_projection());
    Ok(())
}
