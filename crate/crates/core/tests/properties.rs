//! Property tests for the invariants of each module.

mod common;

use proptest::prelude::*;

use common::*;
use postlab::bits::BitSet;
use postlab::boolfun::{closure_up_to, polymorphisms_up_to, preservation_witness, preserves};
use postlab::circuit::{build_decision_tree, count_minterms, dt_to_monotone_dnf, Circuit, FaninMode, Gate, TreeMode, TruthTable};
use postlab::csp::{designated_solver, monotonicity_check, CspInstance, MonotoneMode};
use postlab::graph::{odd_factor_fast, odd_factor_oracle, Graph};
use postlab::lattice::classify;
use postlab::reductions::BitReduction;
use postlab::{BoolFun, Budget, Relation, RelationSet};

fn relation(max_arity: usize) -> impl Strategy<Value = Relation> {
    (1..=max_arity).prop_flat_map(|k| (0..1u64 << (1 << k)).prop_map(move |t| Relation::new(k, t).unwrap()))
}

fn relation_set(max_arity: usize, max_len: usize) -> impl Strategy<Value = RelationSet> {
    prop::collection::vec(relation(max_arity), 1..=max_len).prop_map(RelationSet::new)
}

fn boolfun(max_arity: usize) -> impl Strategy<Value = BoolFun> {
    (1..=max_arity).prop_flat_map(|a| (0..1u64 << (1 << a)).prop_map(move |t| BoolFun::new(a, t).unwrap()))
}

fn tables(fs: &[BoolFun]) -> Vec<(usize, u64)> {
    let mut v: Vec<_> = fs.iter().map(|f| (f.arity(), f.table())).collect();
    v.sort();
    v
}

/// Reference evaluator: recursive with memoization, no shared code path.
fn eval_ref(c: &Circuit, x: u64) -> Vec<bool> {
    fn go(c: &Circuit, g: usize, x: u64, memo: &mut Vec<Option<bool>>) -> bool {
        if let Some(v) = memo[g] {
            return v;
        }
        let v = match &c.gates()[g] {
            Gate::Input(i) => x >> i & 1 == 1,
            Gate::Const(b) => *b,
            Gate::Not(a) => !go(c, *a, x, memo),
            Gate::And(ops) => ops.iter().all(|&o| go(c, o, x, memo)),
            Gate::Or(ops) => ops.iter().any(|&o| go(c, o, x, memo)),
            Gate::Xor(ops) => ops.iter().fold(false, |acc, &o| acc ^ go(c, o, x, memo)),
        };
        memo[g] = Some(v);
        v
    }
    let mut memo = vec![None; c.gates().len()];
    c.outputs().iter().map(|&o| go(c, o, x, &mut memo)).collect()
}

fn tuple_bits(k: usize, s: &str) -> u64 {
    Relation::from_tuple_strings(k, &[s]).unwrap().mask().trailing_zeros() as u64
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn polymorphisms_are_antitone(s in relation_set(3, 2), extra in relation(3)) {
        let b = Budget::default();
        let small = polymorphisms_up_to(&s, 3, &b).unwrap();
        let big = polymorphisms_up_to(&s.clone().with(extra), 3, &b).unwrap();
        let small = tables(&small);
        prop_assert!(tables(&big).iter().all(|t| small.binary_search(t).is_ok()));
    }

    #[test]
    fn polymorphisms_form_a_clone(s in relation_set(3, 2)) {
        let b = Budget::default();
        let pol = polymorphisms_up_to(&s, 2, &b).unwrap();
        let closed = closure_up_to(&pol, 2, &b).unwrap();
        prop_assert_eq!(tables(&closed), tables(&pol));
    }

    #[test]
    fn preservation_ignores_argument_order(f in boolfun(3), r in relation(3), seed in any::<u64>()) {
        let b = Budget::default();
        let a = f.arity();
        let mut perm: Vec<usize> = (0..a).collect();
        let mut s = seed;
        for i in (1..a).rev() {
            perm.swap(i, (s % (i as u64 + 1)) as usize);
            s /= 7;
        }
        let g = BoolFun::from_fn(a, |x| {
            let y = (0..a).fold(0u64, |y, i| y | (x >> i & 1) << perm[i]);
            f.eval(y)
        });
        prop_assert_eq!(preserves(&f, &r, &b).unwrap(), preserves(&g, &r, &b).unwrap());
    }

    #[test]
    fn dual_is_a_monotone_involution(f in boolfun(4)) {
        prop_assert_eq!(f.dual().dual(), f);
        prop_assert_eq!(f.dual().is_monotone(), f.is_monotone());
    }

    #[test]
    fn adding_a_relation_shrinks_preserved(s in relation_set(3, 2), extra in relation(3)) {
        let b = Budget::default();
        let v = classify(&s, &b).unwrap();
        let w = classify(&s.clone().with(extra), &b).unwrap();
        prop_assert!(w.preserved.iter().all(|c| v.preserved.contains(c)));
    }

    #[test]
    fn binary_sets_are_easy(s in relation_set(2, 4)) {
        prop_assert_eq!(classify(&s, &Budget::default()).unwrap().size_side, postlab::lattice::Side::Easy);
    }

    #[test]
    fn violation_witnesses_replay(s in relation_set(3, 2)) {
        let b = Budget::default();
        for check in classify(&s, &b).unwrap().checks {
            let Some(w) = check.witness else { continue };
            let r = s.iter().find(|r| r.label() == w.relation).unwrap();
            let k = r.arity();
            let chosen: Vec<u64> = w.tuples.iter().map(|t| tuple_bits(k, t)).collect();
            prop_assert!(chosen.iter().all(|&t| r.contains(t)));
            let img = (0..k).fold(0u64, |img, c| {
                let arg = chosen.iter().enumerate().fold(0u64, |a, (i, t)| a | (t >> c & 1) << i);
                img | (w.function.eval(arg) as u64) << c
            });
            prop_assert!(!r.contains(img));
            prop_assert_eq!(img, tuple_bits(k, &w.image));
            prop_assert!(preservation_witness(&w.function, r, &b).unwrap().is_some());
        }
    }

    #[test]
    fn index_is_a_bijection(s in relation_set(3, 3), n in 1usize..=6, pick in any::<u64>()) {
        let inst = CspInstance::empty(s, n).unwrap();
        for j in (0..inst.len()).step_by(1 + (pick % 17) as usize) {
            let c = inst.decode(j).unwrap();
            prop_assert_eq!(inst.encode(c.relation, &c.vars).unwrap(), j);
        }
    }

    #[test]
    fn designated_solvers_match_brute_force(s in relation_set(3, 2), seed in any::<u64>()) {
        let b = Budget::default();
        let v = classify(&s, &b).unwrap();
        if let Some(solver) = designated_solver(&v, &s) {
            for i in 0..8u64 {
                let inst = postlab::csp::make_random(&s, 3 + (i % 4) as usize, 0.05, seed ^ i).unwrap();
                prop_assert_eq!(solver.solve(&inst).unwrap(), brute_sat(&inst));
                prop_assert_eq!(inst.csp_sat_value(&b).unwrap(), !brute_sat(&inst));
            }
        }
    }

    #[test]
    fn csp_sat_value_is_monotone(s in relation_set(2, 2)) {
        let rep = monotonicity_check(&s, 2, MonotoneMode::Exhaustive, &Budget::default()).unwrap();
        prop_assert!(rep.monotone);
    }

    #[test]
    fn evaluators_agree(n in 1usize..=10, size in 1usize..40, unbounded in any::<bool>(), seed in any::<u64>(), x in any::<u64>()) {
        let mode = if unbounded { FaninMode::Unbounded } else { FaninMode::Bounded2 };
        let c = Circuit::random(n, size, mode, false, seed);
        let x = x & ((1 << n) - 1);
        let bits = c.evaluate(&BitSet::from_mask(n, x)).unwrap();
        let got: Vec<bool> = (0..c.outputs().len()).map(|i| bits.get(i)).collect();
        prop_assert_eq!(got, eval_ref(&c, x));
    }

    #[test]
    fn dualize_keeps_size_and_depth(n in 1usize..=8, size in 1usize..40, seed in any::<u64>()) {
        let c = Circuit::random(n, size, FaninMode::Unbounded, false, seed);
        prop_assume!(!c.gates().iter().any(|g| matches!(g, Gate::Xor(_))));
        let d = c.dualize().unwrap();
        let (a, b) = (c.measures(), d.measures());
        prop_assert_eq!((a.size, a.depth), (b.size, b.depth));
        let (ta, tb) = (c.truth_table().unwrap(), d.truth_table().unwrap());
        let full = (1u64 << n) - 1;
        prop_assert!((0..1u64 << n).all(|x| tb.eval(x) == !ta.eval(!x & full)));
    }

    #[test]
    fn circuit_json_round_trips(n in 1usize..=8, size in 1usize..40, seed in any::<u64>()) {
        let c = Circuit::random(n, size, FaninMode::Bounded2, true, seed);
        let back: Circuit = serde_json::from_str(&serde_json::to_string(&c).unwrap()).unwrap();
        prop_assert_eq!(back.gates(), c.gates());
        prop_assert_eq!(back.outputs(), c.outputs());
    }

    #[test]
    fn tree_dnf_has_at_least_the_minterms(idx in 0usize..168, exact in any::<bool>()) {
        let t = monotone_tables(4)[idx];
        let f = TruthTable::from_fn(4, |x| t >> x & 1 == 1).unwrap();
        let mode = if exact { TreeMode::Exact } else { TreeMode::Greedy };
        let tree = build_decision_tree(&f, mode).unwrap();
        prop_assert!(tree.is_read_once_per_path());
        let d = dt_to_monotone_dnf(&tree, 4).unwrap();
        prop_assert!(d.terms.len() >= count_minterms(&f));
        prop_assert_eq!(d.clone().absorb().terms.len(), count_minterms(&f));
    }

    #[test]
    fn odd_factor_is_isomorphism_invariant(v in 1usize..=8, mask in any::<u64>(), seed in any::<u64>()) {
        let e = v * (v - 1) / 2;
        let g = Graph::from_edge_mask(v, mask & ((1u64 << e) - 1)).unwrap();
        let want = odd_factor_fast(&g);
        let mut s = seed;
        for _ in 0..20 {
            let mut perm: Vec<usize> = (0..v).collect();
            for i in (1..v).rev() {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                perm.swap(i, (s >> 33) as usize % (i + 1));
            }
            let h = g.permuted(&perm).unwrap();
            prop_assert_eq!(odd_factor_fast(&h), want);
            prop_assert_eq!(odd_factor_oracle(&h, &Budget::default()).unwrap(), want);
        }
    }

    #[test]
    fn instance_json_round_trips(s in relation_set(3, 2), n in 1usize..=5, seed in any::<u64>()) {
        let inst = postlab::csp::make_random(&s, n, 0.2, seed).unwrap();
        let back: CspInstance = serde_json::from_str(&serde_json::to_string(&inst).unwrap()).unwrap();
        prop_assert_eq!(back, inst);
    }

    #[test]
    fn relation_text_round_trips(s in relation_set(4, 4)) {
        let back = RelationSet::parse(&s.to_text()).unwrap();
        prop_assert_eq!(back.len(), s.len());
        prop_assert!(back.iter().zip(s.iter()).all(|(a, b)| a.same_tuples(b)));
    }

    #[test]
    fn graph_text_round_trips(v in 1usize..=9, mask in any::<u64>()) {
        let e = v * (v - 1) / 2;
        let g = Graph::from_edge_mask(v, mask & ((1u64 << e.min(63)) - 1)).unwrap();
        prop_assert_eq!(Graph::parse(&g.to_text()).unwrap(), g);
    }

    #[test]
    fn or_reductions_round_trip_and_stay_monotone(in_len in 1usize..20, out_len in 1usize..20, links in prop::collection::vec((0usize..20, 0usize..20), 0..40), x in any::<u64>()) {
        let mut r = BitReduction::new(in_len, out_len, false);
        for (o, i) in links {
            r.or_into(o % out_len, i % in_len);
        }
        let back: BitReduction = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
        prop_assert_eq!(&back, &r);
        prop_assert!(r.is_monotone_or());
        let lo = BitSet::from_mask(in_len, x & ((1 << in_len) - 1));
        let hi = BitSet::from_mask(in_len, (x | x >> 7) & ((1 << in_len) - 1));
        let (a, b) = (r.apply(&lo).unwrap(), r.apply(&hi).unwrap());
        prop_assert!((0..out_len).all(|i| !a.get(i) || b.get(i)));
    }
}
