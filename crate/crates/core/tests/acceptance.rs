//! Acceptance criteria. Each criterion runs at its stated scale and time
//! limit against reference oracles from `common`, and prints one line.
//! Set `POSTLAB_ACCEPTANCE=3,5` to run a subset.

mod common;

use std::io::Write;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use common::*;
use postlab::bits::BitSet;
use postlab::circuit::{
    build_decision_tree, count_minterms, dt_to_monotone_dnf, quine_strip, Circuit, Dnf, Gate, Term, TreeMode, TruthTable,
};
use postlab::construct::{
    checkpoint_circuit, emit_monotone_csp_circuit, padded_graph_property, BpEdge, GraphPropertyCircuit, Guard,
    LayeredBp, MonotoneFragment, PathMode, Profile,
};
use postlab::csp::{designated_solver, solve_xor, CspInstance};
use postlab::graph::{bip_odd_factor, odd_factor_fast, odd_factor_oracle, tseitin_system, BipGraph};
use postlab::lattice::{classify, validate_catalog, Catalog, Side};
use postlab::reductions::{
    cq_rewrite, eliminate_equality, find_cq, l2_to_l3_transform, matrix_bits, negate_relations, pol_reduce, BipXorLayout,
    BitDef, BitReduction, CqBudget, CqSearch,
};
use postlab::{Budget, Relation, RelationSet};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

/// Bypasses the test harness's output capture.
fn line(s: &str) {
    let mut e = std::io::stderr();
    let _ = writeln!(e, "{s}");
}

/// The first failure, for the summary line.
fn first<T: std::fmt::Debug>(bad: &[T]) -> String {
    bad.first().map(|b| format!(", first {b:?}")).unwrap_or_default()
}

fn selected(id: usize) -> bool {
    match std::env::var("POSTLAB_ACCEPTANCE") {
        Ok(list) => list.split(',').any(|x| x.trim().parse() == Ok(id)),
        Err(_) => true,
    }
}

/// `k` distinct random constraints over `set` on `n` variables.
fn random_instance(set: &RelationSet, n: usize, k: usize, rng: &mut impl Rng) -> CspInstance {
    let empty = CspInstance::empty(set.clone(), n).unwrap();
    let k = k.min(empty.len());
    let bits = rand::seq::index::sample(rng, empty.len(), k);
    empty.with_bits(BitSet::from_indices(empty.len(), bits)).unwrap()
}

fn criterion_1() -> Outcome {
    let b = Budget::default();
    let cases: Vec<(RelationSet, Side, Side, bool)> = vec![
        (RelationSet::xor3(), Side::Hard, Side::Hard, false),
        (RelationSet::horn3(), Side::Easy, Side::Hard, false),
        (RelationSet::antihorn3(), Side::Easy, Side::Hard, false),
        (RelationSet::new(vec![Relation::or(2)]), Side::Easy, Side::Easy, true),
        (RelationSet::new(vec![Relation::nand(2)]), Side::Easy, Side::Easy, true),
    ];
    let mut bad = Vec::new();
    for (s, size, depth, trivial) in &cases {
        let v = classify(s, &b).unwrap();
        if v.size_side != *size || v.depth_side != *depth || v.trivial != *trivial {
            bad.push(format!("{}: {:?}/{:?} trivial {}", s.label(), v.size_side, v.depth_side, v.trivial));
        }
    }
    let nand = classify(&RelationSet::new(vec![Relation::nand(2)]), &b).unwrap();
    if !nand.preserves("I0") {
        bad.push("nand2 does not preserve I0".into());
    }
    outcome(bad.is_empty(), if bad.is_empty() { "5 goldens exact".to_string() } else { bad.join("; ") })
}

fn criterion_2() -> Outcome {
    let b = Budget::default();
    let all = RelationSet::all_binary();
    let bad: Vec<String> = (0..1u32 << 16)
        .into_par_iter()
        .filter_map(|subset| {
            let set = RelationSet::new((0..16).filter(|i| subset >> i & 1 == 1).map(|i| all[i].clone()).collect());
            let v = classify(&set, &b).unwrap();
            if v.size_side != Side::Easy {
                return Some(format!("subset {subset:#06x}: size HARD"));
            }
            let Some(solver) = designated_solver(&v, &set) else {
                return Some(format!("subset {subset:#06x}: no designated solver"));
            };
            let mut rng = ChaCha8Rng::seed_from_u64(subset as u64);
            for _ in 0..20 {
                let k = rng.gen_range(1..=12);
                let inst = random_instance(&set, 4, k, &mut rng);
                if solver.solve(&inst).unwrap() != brute_sat(&inst) {
                    return Some(format!("subset {subset:#06x}: {} disagrees on {:?}", solver.name(), inst.bits().ones().collect::<Vec<_>>()));
                }
            }
            None
        })
        .collect();
    outcome(bad.is_empty(), format!("65536 sets, {} mismatches{}", bad.len(), first(&bad)))
}

fn criterion_3() -> Outcome {
    let b = Budget::default();
    let mut checked = 0u64;
    let mut bad = Vec::new();
    for v in 1..=7usize {
        let e = v * (v - 1) / 2;
        let found: Vec<u64> = (0..1u64 << e)
            .into_par_iter()
            .filter(|&mask| {
                let g = graph(v, mask);
                let want = has_odd_factor(v, mask);
                odd_factor_fast(&g) != want
                    || odd_factor_oracle(&g, &b).unwrap() != want
                    || tseitin_system(&g).is_satisfiable() != want
            })
            .collect();
        checked += 1 << e;
        bad.extend(found.into_iter().map(|m| (v, m)));
    }
    outcome(bad.is_empty(), format!("{checked} graphs, {} mismatches{}", bad.len(), first(&bad)))
}

fn random_bp(rng: &mut impl Rng) -> LayeredBp {
    let n = rng.gen_range(1..=8);
    let m = rng.gen_range(1..=9);
    let mut widths: Vec<usize> = (0..=m).map(|_| rng.gen_range(1..=3)).collect();
    widths[0] = 1;
    widths[m] = 1;
    let mut edges = Vec::new();
    for t in 0..m {
        for from in 0..widths[t] {
            for to in 0..widths[t + 1] {
                let copies = if rng.gen_bool(0.5) { 1 + rng.gen_bool(0.2) as usize } else { 0 };
                for _ in 0..copies {
                    let guard = if rng.gen_bool(0.1) {
                        Guard::Const(true)
                    } else {
                        Guard::Lit { var: rng.gen_range(0..n), positive: rng.gen_bool(0.6) }
                    };
                    edges.push(BpEdge { layer: t, from, to, guard });
                }
            }
        }
    }
    LayeredBp { n, widths, start: 0, accept: 0, edges }
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let bps: Vec<LayeredBp> = (0..200).map(|_| random_bp(&mut rng)).collect();
    let bad: Vec<String> = bps
        .par_iter()
        .enumerate()
        .flat_map_iter(|(i, bp)| {
            let mut out = Vec::new();
            for d in 1..=3 {
                for mode in [PathMode::Parity, PathMode::Reach] {
                    let c = checkpoint_circuit(bp, d, mode).unwrap();
                    let depth = c.measures().depth;
                    let tt = c.truth_table().unwrap();
                    let wrong = (0..1u64 << bp.n).find(|&x| {
                        let p = path_count(bp, x);
                        let want = match mode {
                            PathMode::Parity => p % 2 == 1,
                            PathMode::Reach => p > 0,
                        };
                        tt.eval(x) != want
                    });
                    if wrong.is_some() || depth != 2 * d {
                        out.push(format!("bp {i} d {d} {mode:?}: depth {depth}, input {wrong:?}"));
                    }
                }
            }
            out
        })
        .collect();
    outcome(bad.is_empty(), format!("200 programs x 3 depths x 2 modes, {} failures{}", bad.len(), first(&bad)))
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut bad = Vec::new();
    let mut notes = Vec::new();
    let props: Vec<(GraphPropertyCircuit, fn(usize, u64) -> bool)> = vec![
        (GraphPropertyCircuit::edge_existence(3), |_, m| m != 0),
        (GraphPropertyCircuit::odd_factor(4).unwrap(), has_odd_factor),
    ];
    for (f, oracle) in &props {
        let n = f.vertices;
        let small = n * (n - 1) / 2;
        for big_n in [6usize, 7] {
            let (g, embed) = padded_graph_property(f, big_n, Profile::Nc1).unwrap();
            let big = big_n * (big_n - 1) / 2;
            // g(embed(G)) = f(G)
            for mask in 0..1u64 << small {
                let x = embed.apply(&BitSet::from_mask(small, mask)).unwrap();
                if g.circuit.evaluate(&x).unwrap().get(0) != oracle(n, mask) {
                    bad.push(format!("{} N={big_n}: planted {mask:#x}", f.name));
                }
            }
            let tt = g.circuit.truth_table().unwrap();
            let val = |m: u64| tt.eval(m);
            // monotone: every single-edge step up keeps the value at least as large
            let chain_bad = (0..1u64 << big).find(|&m| val(m) && (0..big).any(|k| !val(m | 1 << k)));
            if let Some(m) = chain_bad {
                bad.push(format!("{} N={big_n}: not monotone above {m:#x}", f.name));
            }
            // isomorphism invariance on every graph
            let pool: Vec<Vec<usize>> = (0..500)
                .map(|_| {
                    let mut p: Vec<usize> = (0..big_n).collect();
                    p.shuffle(&mut rng);
                    pair_permutation(big_n, &p)
                })
                .collect();
            let seed: u64 = rng.gen();
            let iso_bad = (0..1u64 << big).into_par_iter().find_any(|&m| {
                let mut r = ChaCha8Rng::seed_from_u64(seed ^ m);
                (0..50).any(|_| val(permute_mask(m, &pool[r.gen_range(0..pool.len())])) != val(m))
            });
            if let Some(m) = iso_bad {
                bad.push(format!("{} N={big_n}: permutation changes value on {m:#x}", f.name));
            }
            notes.push(format!("{}@{big_n}", f.name));
        }
    }
    outcome(bad.is_empty(), format!("{}; {} failures{}", notes.join(" "), bad.len(), first(&bad)))
}

fn presentation(n: usize, table: u64, rng: &mut impl Rng) -> Vec<(u64, u64)> {
    let full = (1u64 << n) - 1;
    let ones: Vec<u64> = (0..1u64 << n).filter(|&x| table >> x & 1 == 1).collect();
    let minimal: Vec<u64> = ones.iter().copied().filter(|&x| (0..n).all(|i| x >> i & 1 == 0 || table >> (x & !(1 << i)) & 1 == 0)).collect();
    let mut terms = Vec::new();
    for &m in &minimal {
        terms.push((m, 0));
        for _ in 0..rng.gen_range(0..3) {
            let pos = m | rng.gen::<u64>() & full;
            terms.push((pos, rng.gen::<u64>() & full & !pos));
        }
    }
    for &x in &ones {
        if rng.gen_bool(0.4) {
            terms.push((x, full & !x));
        }
    }
    terms.shuffle(rng);
    terms
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let tables = monotone_tables(4);
    let mut bad = Vec::new();
    for &t in &tables {
        for _ in 0..3 {
            let terms = presentation(4, t, &mut rng);
            assert_eq!(dnf_table(4, &terms), t);
            let d = Dnf::new(4, terms.iter().map(|&(pos, neg)| Term { pos, neg }).collect());
            let s = quine_strip(&d).unwrap();
            let st: Vec<(u64, u64)> = s.terms.iter().map(|t| (t.pos, t.neg)).collect();
            if st.iter().any(|&(_, q)| q != 0) || dnf_table(4, &st) != t {
                bad.push(format!("quine on {t:#06x}"));
            }
        }
        let f = TruthTable::from_fn(4, |x| t >> x & 1 == 1).unwrap();
        for mode in [TreeMode::Greedy, TreeMode::Exact] {
            let tree = build_decision_tree(&f, mode).unwrap();
            let d = dt_to_monotone_dnf(&tree, 4).unwrap();
            let dt: Vec<(u64, u64)> = d.terms.iter().map(|t| (t.pos, t.neg)).collect();
            if dt.iter().any(|&(_, q)| q != 0) || dnf_table(4, &dt) != t {
                bad.push(format!("tree {mode:?} on {t:#06x}"));
            }
        }
    }
    let maj3 = count_minterms(&TruthTable::majority(3).unwrap());
    let maj5 = count_minterms(&TruthTable::majority(5).unwrap());
    let pass = tables.len() == 168 && bad.is_empty() && maj3 == 3 && maj5 == 10;
    outcome(pass, format!("{} monotone functions, maj3 {maj3}, maj5 {maj5}, {} failures{}", tables.len(), bad.len(), first(&bad)))
}

/// Every defined output bit is a constant, an input or a nonempty OR of
/// inputs, all in range.
fn syntactic_or(r: &BitReduction) -> bool {
    r.defined().all(|(k, d)| {
        k < r.out_len
            && match d {
                BitDef::Const(_) => true,
                BitDef::Input(i) => *i < r.in_len,
                BitDef::Or(xs) => !xs.is_empty() && xs.iter().all(|&i| i < r.in_len),
            }
    })
}

fn criterion_7() -> Outcome {
    let b = Budget::default();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut bad: Vec<String> = Vec::new();
    let mut tallies = Vec::new();
    let instances = |set: &RelationSet, rng: &mut ChaCha8Rng| -> Vec<CspInstance> {
        (0..500)
            .map(|i| {
                let n = 3 + i % 3;
                let k = rng.gen_range(1..=3 * n);
                random_instance(set, n, k, rng)
            })
            .collect()
    };
    let mut record = |op: &str, results: Vec<(bool, bool, bool)>| {
        // (input satisfiable, output satisfiable, reduction well-formed)
        let sat = results.iter().filter(|r| r.0).count();
        let fails = results.iter().filter(|r| r.0 != r.1 || !r.2).count();
        if fails > 0 {
            bad.push(format!("{op}: {fails} failures"));
        }
        tallies.push(format!("{op} {sat}/{} sat", results.len()));
    };

    let eq_set = RelationSet::new(vec![Relation::or(2), Relation::equality(), Relation::negative(), Relation::implication()]);
    let res = instances(&eq_set, &mut rng)
        .iter()
        .map(|i| {
            let o = eliminate_equality(i).unwrap();
            (brute_sat(i), brute_sat(&o), o.set().iter().all(|r| !r.same_tuples(&Relation::equality())))
        })
        .collect();
    record("eliminate_equality", res);

    let s1 = RelationSet::new(vec![Relation::xor(2, true), Relation::xor(4, false)]);
    let over = RelationSet::xor3().with(Relation::equality());
    let defs: Vec<_> = s1
        .iter()
        .map(|r| match find_cq(r, &over, &CqBudget::default()).unwrap() {
            CqSearch::Found(d) => d,
            other => panic!("no definition of {}: {other:?}", r.label()),
        })
        .collect();
    let res = instances(&s1, &mut rng)
        .iter()
        .map(|i| {
            let (o, red) = cq_rewrite(i, &defs).unwrap();
            (brute_sat(i), brute_sat(&o), syntactic_or(&red))
        })
        .collect();
    record("cq_rewrite", res);

    let chains = [
        (s1.clone(), RelationSet::xor3()),
        (RelationSet::new(vec![Relation::implication(), Relation::positive()]), RelationSet::horn3()),
        (RelationSet::new(vec![Relation::or(2), Relation::negative()]), RelationSet::antihorn3()),
    ];
    let mut res = Vec::new();
    for (i, inst) in instances(&s1, &mut rng).into_iter().enumerate() {
        let (from, to) = &chains[i % 3];
        let inst = if i % 3 == 0 { inst } else { random_instance(from, inst.n(), inst.bits().count_ones(), &mut rng) };
        match pol_reduce(&inst, to, &CqBudget::default(), &b).unwrap() {
            Some(pr) => res.push((brute_sat(&inst), brute_sat(&pr.instance), syntactic_or(&pr.or_step) && pr.pol_inclusion == Some(true))),
            None => res.push((true, false, false)),
        }
    }
    record("pol_reduce", res);

    let xs = RelationSet::new(vec![Relation::xor(3, true), Relation::xor(2, true)]);
    let res = instances(&xs, &mut rng)
        .iter()
        .map(|i| {
            let (o, red) = l2_to_l3_transform(i).unwrap();
            (brute_sat(i), brute_sat(&o), syntactic_or(&red) && red.is_projection())
        })
        .collect();
    record("l2_to_l3", res);

    let res = instances(&RelationSet::horn3(), &mut rng)
        .iter()
        .map(|i| {
            let o = i.reinterpret(negate_relations(i.set())).unwrap();
            (brute_sat(i), brute_sat(&o), true)
        })
        .collect();
    record("negate_relations", res);

    // bipartite odd factor as the dual of 3-XOR-SAT on a projection
    let layout = BipXorLayout::new(4).unwrap();
    let beta = layout.beta();
    let beta_ok = syntactic_or(&beta) && beta.is_projection();
    let bip_bad: Vec<u64> = (0..1u64 << 16)
        .into_par_iter()
        .filter(|&mask| {
            let m = BipGraph::from_mask(4, mask).unwrap();
            let y = beta.apply(&matrix_bits(&m)).unwrap();
            let dual = solve_xor(&layout.template().with_bits(y.complement()).unwrap()).unwrap();
            let edges: Vec<(usize, usize)> = (0..16).filter(|k| mask >> k & 1 == 1).map(|k| (k / 4, 4 + k % 4)).collect();
            let want = component_sizes(8, &edges).iter().all(|s| s % 2 == 0);
            dual != want || bip_odd_factor(&m) != want
        })
        .collect();
    if !bip_bad.is_empty() || !beta_ok {
        bad.push(format!("bipartite: {} mismatches, beta projection {beta_ok}", bip_bad.len()));
    }
    tallies.push("bipartite 65536 matrices".into());
    outcome(bad.is_empty(), format!("{}; {}", tallies.join(", "), if bad.is_empty() { "0 failures".into() } else { bad.join("; ") }))
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let or_nand = RelationSet::new(vec![Relation::or(2), Relation::nand(2)]);
    let cases = [
        (RelationSet::horn3(), MonotoneFragment::Horn),
        (RelationSet::antihorn3(), MonotoneFragment::AntiHorn),
        (RelationSet::two_sat(), MonotoneFragment::TwoSat),
        (or_nand, MonotoneFragment::TwoSat),
        (RelationSet::or_fragment(2), MonotoneFragment::Or),
        (RelationSet::or_fragment(2).negated(), MonotoneFragment::Nand),
    ];
    let mut bad = Vec::new();
    let (mut exhaustive, mut sampled) = (0, 0);
    for (set, frag) in &cases {
        for n in [2usize, 3, 4] {
            let c: Circuit = emit_monotone_csp_circuit(set, n, Some(*frag)).unwrap();
            if c.gates().iter().any(|g| matches!(g, Gate::Not(_) | Gate::Xor(_))) {
                bad.push(format!("{} n={n}: NOT/XOR gate", set.label()));
            }
            let empty = CspInstance::empty(set.clone(), n).unwrap();
            let len = empty.len();
            let masks: Vec<BitSet> = if len <= 18 {
                exhaustive += 1;
                (0..1u64 << len).map(|m| BitSet::from_mask(len, m)).collect()
            } else {
                sampled += 1;
                (0..1000)
                    .map(|_| {
                        let k = rng.gen_range(0..=4 * n);
                        BitSet::from_indices(len, rand::seq::index::sample(&mut rng, len, k.min(len)))
                    })
                    .collect()
            };
            let wrong = masks
                .par_iter()
                .filter(|x| c.evaluate(x).unwrap().get(0) == brute_sat(&empty.with_bits((*x).clone()).unwrap()))
                .count();
            if wrong > 0 {
                bad.push(format!("{} n={n}: {wrong} mismatches", set.label()));
            }
        }
    }
    outcome(bad.is_empty(), format!("{exhaustive} exhaustive, {sampled} sampled; {}", if bad.is_empty() { "0 failures".into() } else { bad.join("; ") }))
}

fn criterion_9() -> Outcome {
    let report = validate_catalog().unwrap();
    let mut bad: Vec<String> = report.failures();
    for (sub, sup) in [("V2", "S00"), ("E2", "S10"), ("L2", "L3"), ("N2", "L3")] {
        if report.holds(sub, sup) != Some(true) {
            bad.push(format!("{sub} ⊆ {sup}: {:?}", report.holds(sub, sup)));
        }
    }
    for c in Catalog::standard().clones().iter().filter(|c| c.name != "I2") {
        if report.holds("I2", c.name) != Some(true) {
            bad.push(format!("I2 ⊆ {}: {:?}", c.name, report.holds("I2", c.name)));
        }
    }
    outcome(report.passed() && bad.is_empty(), format!("{} inclusion checks; {}", report.checks.len(), if bad.is_empty() { "all hold".into() } else { bad.join("; ") }))
}

#[test]
fn acceptance_criteria() {
    let criteria: [(usize, &str, u64, fn() -> Outcome); 9] = [
        (1, "classification goldens", 1, criterion_1),
        (2, "dichotomy sweep over binary relation sets", 300, criterion_2),
        (3, "odd factor deciders on all graphs up to 7 vertices", 600, criterion_3),
        (4, "checkpoint circuits", 120, criterion_4),
        (5, "padded graph properties", 300, criterion_5),
        (6, "quine and decision-tree pipeline", 60, criterion_6),
        (7, "reductions", 600, criterion_7),
        (8, "monotone circuit emitters", 300, criterion_8),
        (9, "catalog validation", 10, criterion_9),
    ];
    let mut failed = Vec::new();
    for (id, name, limit, run) in criteria {
        if !selected(id) {
            continue;
        }
        let t0 = Instant::now();
        let o = run();
        let el = t0.elapsed();
        let in_time = el <= Duration::from_secs(limit);
        let pass = o.pass && in_time;
        line(&format!(
            "criterion {id} {}: {name} ({:.2}s, limit {limit}s) {}",
            if pass { "PASS" } else { "FAIL" },
            el.as_secs_f64(),
            o.detail
        ));
        if !pass {
            failed.push(id);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
