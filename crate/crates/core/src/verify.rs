//! Oracle-equivalence sweeps. Each suite runs a list of named checks and
//! reports, for every failure, a JSON witness that replays it.

use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::bits::BitSet;
use crate::boolfun::{Relation, RelationSet};
use crate::budget::Budget;
use crate::circuit::{
    build_decision_tree, count_minterms, dt_to_monotone_dnf, monotone_functions, quine_strip, Circuit, Dnf, Term,
    TreeMode, TruthTable,
};
use crate::construct::{
    checkpoint_circuit, emit_monotone_csp_circuit, induced_subgraph_circuit, induced_subgraph_oracle,
    pad_dummy_inputs, padded_graph_property, pair_count, threshold_circuit, GraphPropertyCircuit, LayeredBp,
    MonotoneFragment, PathMode, Profile, ThresholdMode,
};
use crate::csp::{designated_solver, make_random, CspInstance};
use crate::error::{Error, Result};
use crate::graph::{bip_odd_factor, bip_odd_factor_oracle, odd_factor_fast, odd_factor_oracle, tseitin_system, BipGraph, Graph};
use crate::lattice::{classify, Side};
use crate::reductions::{
    cq_rewrite, eliminate_equality, find_cq, l2_to_l3_transform, matrix_bits, negate_instance, pol_reduce, BipXorLayout,
    BitReduction, CqBudget, CqSearch,
};

/// Witnesses kept per check; the failure count is always exact.
const KEPT_WITNESSES: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    OddFactor,
    Constructions,
    Reductions,
    Quine,
    DichotomyConsistency,
    All,
}

impl Suite {
    pub const NAMES: [&'static str; 6] = ["oddfactor", "constructions", "reductions", "quine", "dichotomy-consistency", "all"];

    pub fn from_name(s: &str) -> Result<Suite> {
        Ok(match s {
            "oddfactor" => Suite::OddFactor,
            "constructions" => Suite::Constructions,
            "reductions" => Suite::Reductions,
            "quine" => Suite::Quine,
            "dichotomy-consistency" => Suite::DichotomyConsistency,
            "all" => Suite::All,
            _ => return Err(Error::Invalid(format!("unknown suite `{s}` (expected one of {})", Suite::NAMES.join(", ")))),
        })
    }
}

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    /// Smaller sweeps throughout.
    pub quick: bool,
    pub max_vertices: usize,
    pub vars: usize,
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            quick: false,
            max_vertices: 7,
            vars: 4,
            seed: 0,
        }
    }
}

impl VerifyOptions {
    pub fn quick() -> Self {
        VerifyOptions {
            quick: true,
            max_vertices: 6,
            ..VerifyOptions::default()
        }
    }

    fn pick(&self, full: usize, quick: usize) -> usize {
        if self.quick {
            quick
        } else {
            full
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub run: u64,
    pub failed: u64,
    pub seconds: f64,
    pub witnesses: Vec<Value>,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.failed == 0
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub suite: String,
    pub checks: Vec<CheckOutcome>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckOutcome::passed)
    }

    pub fn checks_run(&self) -> u64 {
        self.checks.iter().map(|c| c.run).sum()
    }

    pub fn checks_failed(&self) -> u64 {
        self.checks.iter().map(|c| c.failed).sum()
    }
}

/// Cases run and witnesses of the failing ones.
struct Tally {
    run: u64,
    failed: Vec<Value>,
}

impl Tally {
    fn new() -> Self {
        Tally { run: 0, failed: Vec::new() }
    }

    fn case(&mut self, ok: bool, witness: impl FnOnce() -> Value) {
        self.run += 1;
        if !ok {
            self.failed.push(witness());
        }
    }
}

struct Runner<'a> {
    opts: &'a VerifyOptions,
    budget: &'a Budget,
    checks: Vec<CheckOutcome>,
}

impl Runner<'_> {
    fn check(&mut self, name: &str, f: impl FnOnce(&VerifyOptions, &Budget) -> Result<Tally>) -> Result<()> {
        let t0 = Instant::now();
        let mut t = f(self.opts, self.budget)?;
        let failed = t.failed.len() as u64;
        t.failed.truncate(KEPT_WITNESSES);
        self.checks.push(CheckOutcome {
            name: name.to_string(),
            run: t.run,
            failed,
            seconds: t0.elapsed().as_secs_f64(),
            witnesses: t.failed,
        });
        Ok(())
    }
}

pub fn run_suite(suite: Suite, opts: &VerifyOptions, budget: &Budget) -> Result<VerifyReport> {
    let mut r = Runner {
        opts,
        budget,
        checks: Vec::new(),
    };
    let name = match suite {
        Suite::OddFactor => "oddfactor",
        Suite::Constructions => "constructions",
        Suite::Reductions => "reductions",
        Suite::Quine => "quine",
        Suite::DichotomyConsistency => "dichotomy-consistency",
        Suite::All => "all",
    };
    if matches!(suite, Suite::OddFactor | Suite::All) {
        r.check("odd factor: fast = oracle = tseitin", oddfactor_exhaustive)?;
        r.check("odd factor: isomorphism invariance", oddfactor_permutations)?;
    }
    if matches!(suite, Suite::Quine | Suite::All) {
        r.check("quine strip on randomized presentations", quine_presentations)?;
        r.check("decision tree to monotone dnf", decision_trees)?;
        r.check("minterm counts of majority", majority_minterms)?;
    }
    if matches!(suite, Suite::Constructions | Suite::All) {
        r.check("threshold circuits", thresholds)?;
        r.check("induced subgraph circuit", induced_subgraph)?;
        r.check("checkpoint circuits", checkpoints)?;
        r.check("padded graph properties", padding)?;
        r.check("dummy input padding", dummy_padding)?;
        r.check("monotone csp circuits", monotone_csp)?;
    }
    if matches!(suite, Suite::Reductions | Suite::All) {
        r.check("eliminate equality", reduce_eliminate_equality)?;
        r.check("conjunctive query rewrite", reduce_cq_rewrite)?;
        r.check("polymorphism reduction chains", reduce_pol)?;
        r.check("complement switch transform", reduce_l2_l3)?;
        r.check("negated relations", reduce_negate)?;
        r.check("bipartite odd factor via dual xor-sat", bipartite_dual)?;
    }
    if matches!(suite, Suite::DichotomyConsistency | Suite::All) {
        r.check("binary relation sets: verdict and designated solver", dichotomy_binary)?;
    }
    Ok(VerifyReport {
        suite: name.to_string(),
        checks: r.checks,
    })
}

fn oddfactor_exhaustive(o: &VerifyOptions, b: &Budget) -> Result<Tally> {
    let mut t = Tally::new();
    for v in 1..=o.max_vertices {
        let e = pair_count(v);
        let bad = (0..1u64 << e)
            .into_par_iter()
            .filter_map(|mask| {
                let check = || -> Result<bool> {
                    let g = Graph::from_edge_mask(v, mask)?;
                    let fast = odd_factor_fast(&g);
                    Ok(fast == odd_factor_oracle(&g, b)? && fast == tseitin_system(&g).is_satisfiable())
                };
                match check() {
                    Ok(true) => None,
                    Ok(false) => Some(Ok(mask)),
                    Err(err) => Some(Err(err)),
                }
            })
            .collect::<Result<Vec<u64>>>()?;
        t.run += 1 << e;
        t.failed.extend(bad.into_iter().map(|m| json!({"vertices": v, "edge_mask": m})));
    }
    Ok(t)
}

fn oddfactor_permutations(o: &VerifyOptions, b: &Budget) -> Result<Tally> {
    let mut t = Tally::new();
    let mut rng = ChaCha8Rng::seed_from_u64(o.seed);
    let v = o.max_vertices.clamp(1, 7);
    for _ in 0..o.pick(200, 30) {
        let mask = rng.gen_range(0..1u64 << pair_count(v));
        let g = Graph::from_edge_mask(v, mask)?;
        let (fast, oracle) = (odd_factor_fast(&g), odd_factor_oracle(&g, b)?);
        for _ in 0..20 {
            let mut perm: Vec<usize> = (0..v).collect();
            perm.shuffle(&mut rng);
            let h = g.permuted(&perm)?;
            let ok = odd_factor_fast(&h) == fast && odd_factor_oracle(&h, b)? == oracle;
            t.case(ok, || json!({"vertices": v, "edge_mask": mask, "permutation": perm}));
        }
    }
    Ok(t)
}

/// An equivalent DNF with redundant, decorated and duplicated terms,
/// including terms with negative literals, in random order.
pub fn random_presentation(f: &TruthTable, rng: &mut impl Rng) -> Dnf {
    let n = f.n();
    let full = (1u64 << n) - 1;
    let mut terms = Vec::new();
    for m in f.minterms() {
        terms.push(Term { pos: m, neg: 0 });
        for _ in 0..rng.gen_range(0..3) {
            let pos = m | (rng.gen::<u64>() & full);
            terms.push(Term { pos, neg: rng.gen::<u64>() & full & !pos });
        }
    }
    for x in f.bits().ones() {
        if rng.gen_bool(0.3) {
            terms.push(Term { pos: x as u64, neg: full & !(x as u64) });
        }
    }
    if let Some(&t) = terms.first() {
        terms.push(t);
    }
    terms.shuffle(rng);
    Dnf::new(n, terms)
}

fn quine_presentations(o: &VerifyOptions, _: &Budget) -> Result<Tally> {
    let mut t = Tally::new();
    let mut rng = ChaCha8Rng::seed_from_u64(o.seed);
    for f in monotone_functions(o.vars)? {
        for _ in 0..o.pick(4, 1) {
            let d = random_presentation(&f, &mut rng);
            let s = quine_strip(&d)?;
            let ok = s.is_negative_free() && s.truth_table()? == f && d.truth_table()? == f;
            t.case(ok, || json!({"dnf": d.to_text()}));
        }
    }
    Ok(t)
}

fn decision_trees(o: &VerifyOptions, _: &Budget) -> Result<Tally> {
    let mut t = Tally::new();
    for f in monotone_functions(o.vars)? {
        let modes: &[TreeMode] = if o.vars <= 4 { &[TreeMode::Greedy, TreeMode::Exact] } else { &[TreeMode::Greedy] };
        for &mode in modes {
            let tree = build_decision_tree(&f, mode)?;
            let d = dt_to_monotone_dnf(&tree, f.n())?;
            let ok = d.is_negative_free() && d.truth_table()? == f;
            t.case(ok, || json!({"vars": f.n(), "table": f.bits().words(), "mode": format!("{mode:?}")}));
        }
    }
    Ok(t)
}

fn majority_minterms(_: &VerifyOptions, _: &Budget) -> Result<Tally> {
    let mut t = Tally::new();
    for (n, want) in [(3, 3), (5, 10)] {
        let got = count_minterms(&TruthTable::majority(n)?);
        t.case(got == want, || json!({"majority": n, "minterms": got}));
    }
    Ok(t)
}

/// Compares a single-output circuit with `oracle` on every input.
fn exhaustive(c: &Circuit, oracle: impl Fn(u64) -> bool) -> Result<Option<u64>> {
    let tt = c.truth_table()?;
    Ok((0..1u64 << c.n()).find(|&x| tt.eval(x) != oracle(x)))
}

fn thresholds(o: &VerifyOptions, _: &Budget) -> Result<Tally> {
    let mut t = Tally::new();
    for n in 0..=o.pick(8, 6) {
        for k in 0..=n + 1 {
            for mode in [ThresholdMode::LogDepth, ThresholdMode::Flat] {
                let c = threshold_circuit(k, n, mode);
                let bad = exhaustive(&c, |x| x.count_ones() as usize >= k)?;
                t.case(bad.is_none() && c.measures().monotone, || json!({"k": k, "n": n, "mode": mode, "input": bad}));
            }
        }
    }
    Ok(t)
}

fn induced_subgraph(_: &VerifyOptions, _: &Budget) -> Result<Tally> {
    let mut t = Tally::new();
    let n = 4;
    let e = pair_count(n);
    for k in [2, 3] {
        for mode in [ThresholdMode::LogDepth, ThresholdMode::Flat] {
            let c = induced_subgraph_circuit(n, k, mode);
            for edges in 0..1u64 << e {
                for set in (0..1u64 << n).filter(|s| s.count_ones() as usize <= k) {
                    let out = c.evaluate(&BitSet::from_mask(e + n, edges | set << e))?;
                    let want = BitSet::from_mask(pair_count(k), induced_subgraph_oracle(n, edges, set, k));
                    t.case(out == want, || json!({"n": n, "k": k, "mode": mode, "edges": edges, "set": set}));
                }
            }
        }
    }
    Ok(t)
}

fn checkpoints(o: &VerifyOptions, _: &Budget) -> Result<Tally> {
    let mut t = Tally::new();
    let count = o.pick(200, 20) as u64;
    let results: Vec<Result<Vec<(bool, Value)>>> = (0..count)
        .into_par_iter()
        .map(|i| {
            let seed = o.seed.wrapping_add(i);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (n, m) = (rng.gen_range(1..=8), rng.gen_range(1..=9));
            let bp = LayeredBp::random(n, m, 3, 0.5, seed);
            let mut out = Vec::new();
            for d in 1..=3 {
                for mode in [PathMode::Parity, PathMode::Reach] {
                    let c = checkpoint_circuit(&bp, d, mode)?;
                    let bad = exhaustive(&c, |x| bp.value(x, mode))?;
                    let ok = bad.is_none() && c.measures().depth == 2 * d;
                    out.push((ok, json!({"bp_seed": seed, "n": n, "m": m, "d": d, "mode": mode, "input": bad})));
                }
            }
            Ok(out)
        })
        .collect();
    for r in results {
        for (ok, w) in r? {
            t.case(ok, || w);
        }
    }
    Ok(t)
}

fn random_permutation(v: usize, rng: &mut impl Rng) -> Vec<usize> {
    let mut p: Vec<usize> = (0..v).collect();
    p.shuffle(rng);
    p
}

fn padding(o: &VerifyOptions, _: &Budget) -> Result<Tally> {
    let mut t = Tally::new();
    let mut rng = ChaCha8Rng::seed_from_u64(o.seed);
    let mut cases = vec![(GraphPropertyCircuit::edge_existence(3), 6)];
    if !o.quick {
        cases.push((GraphPropertyCircuit::odd_factor(4)?, 6));
        cases.push((GraphPropertyCircuit::edge_existence(3), 7));
        cases.push((GraphPropertyCircuit::odd_factor(4)?, 7));
    }
    for (f, big_n) in cases {
        let profile = if big_n <= 6 { Profile::Ac0 } else { Profile::Nc1 };
        let (g, embed) = padded_graph_property(&f, big_n, profile)?;
        let n = f.vertices;
        for mask in 0..1u64 << pair_count(n) {
            let small = Graph::from_edge_mask(n, mask)?;
            let planted = embed.apply(&BitSet::from_mask(pair_count(n), mask))?;
            let ok = g.circuit.evaluate(&planted)?.get(0) == f.eval(&small)?;
            t.case(ok, || json!({"property": f.name, "N": big_n, "edge_mask": mask}));
        }
        if pair_count(big_n) <= 15 {
            let viol = g.circuit.truth_table()?.monotonicity_violation();
            t.case(viol.is_none(), || json!({"property": f.name, "N": big_n, "violation": viol}));
        }
        for _ in 0..o.pick(50, 10) {
            let mask = rng.gen_range(0..1u64 << pair_count(big_n));
            let h = Graph::from_edge_mask(big_n, mask)?;
            let want = g.eval(&h)?;
            for _ in 0..o.pick(50, 10) {
                let perm = random_permutation(big_n, &mut rng);
                let ok = g.eval(&h.permuted(&perm)?)? == want;
                t.case(ok, || json!({"property": f.name, "N": big_n, "edge_mask": mask, "permutation": perm}));
            }
        }
    }
    Ok(t)
}

fn dummy_padding(o: &VerifyOptions, _: &Budget) -> Result<Tally> {
    let mut t = Tally::new();
    for seed in 0..o.pick(50, 10) as u64 {
        let c = Circuit::random(4, 12, crate::circuit::FaninMode::Bounded2, seed % 2 == 0, o.seed ^ seed);
        let p = pad_dummy_inputs(&c, 3)?;
        let tt = c.truth_table()?;
        let bad = exhaustive(&p, |x| tt.eval(x & 0xf))?;
        t.case(bad.is_none() && p.measures() == c.measures(), || json!({"circuit_seed": o.seed ^ seed, "input": bad}));
    }
    Ok(t)
}

/// Relation sets used for the monotone circuit emitters, with `n`.
pub fn monotone_csp_cases() -> Vec<(RelationSet, usize, MonotoneFragment)> {
    vec![
        (RelationSet::horn3(), 3, MonotoneFragment::Horn),
        (RelationSet::antihorn3(), 3, MonotoneFragment::AntiHorn),
        (RelationSet::new(vec![Relation::or(2), Relation::nand(2)]), 3, MonotoneFragment::TwoSat),
        (RelationSet::two_sat(), 3, MonotoneFragment::TwoSat),
        (RelationSet::or_fragment(2), 3, MonotoneFragment::Or),
        (RelationSet::or_fragment(2).negated(), 3, MonotoneFragment::Nand),
    ]
}

fn monotone_csp(o: &VerifyOptions, b: &Budget) -> Result<Tally> {
    let mut t = Tally::new();
    let mut rng = ChaCha8Rng::seed_from_u64(o.seed);
    for (set, n, frag) in monotone_csp_cases() {
        let c = emit_monotone_csp_circuit(&set, n, Some(frag))?;
        let inst = CspInstance::empty(set.clone(), n)?;
        let len = inst.len();
        t.case(c.measures().monotone, || json!({"relations": set.to_text(), "n": n, "fragment": frag, "gates": "NOT/XOR"}));
        let masks: Vec<BitSet> = if len <= 18 {
            (0..1u64 << len).map(|m| BitSet::from_mask(len, m)).collect()
        } else {
            (0..o.pick(1000, 100))
                .map(|i| {
                    let density = [0.02, 0.05, 0.1, 0.2][i % 4];
                    BitSet::from_indices(len, (0..len).filter(|_| rng.gen_bool(density)))
                })
                .collect()
        };
        let bad = masks
            .par_iter()
            .filter_map(|bits| {
                let check = || -> Result<bool> {
                    Ok(c.evaluate(bits)?.get(0) == inst.with_bits(bits.clone())?.csp_sat_value(b)?)
                };
                match check() {
                    Ok(true) => None,
                    Ok(false) => Some(Ok(bits.ones().collect::<Vec<_>>())),
                    Err(e) => Some(Err(e)),
                }
            })
            .collect::<Result<Vec<_>>>()?;
        t.run += masks.len() as u64 - bad.len() as u64;
        for w in bad {
            t.case(false, || json!({"relations": set.to_text(), "n": n, "fragment": frag, "set_bits": w}));
        }
    }
    Ok(t)
}

fn instance_witness(inst: &CspInstance) -> Value {
    json!({"relations": inst.set().to_text(), "n": inst.n(), "set_bits": inst.bits().ones().collect::<Vec<_>>()})
}

fn is_or_map(r: &BitReduction) -> bool {
    r.is_monotone_or() || r.is_projection()
}

/// Instances on 3 to 5 variables with exactly 1 to `3n` constraints, which
/// straddles the satisfiability threshold of the sets used here.
fn random_instances(set: &RelationSet, o: &VerifyOptions, salt: u64) -> Result<Vec<CspInstance>> {
    (0..o.pick(500, 50) as u64)
        .map(|i| {
            let n = 3 + (i % 3) as usize;
            let empty = CspInstance::empty(set.clone(), n)?;
            let k = (1 + (i / 3) as usize % (3 * n)).min(empty.len());
            let mut rng = ChaCha8Rng::seed_from_u64(o.seed ^ salt.wrapping_mul(0x9e37_79b9) ^ i);
            let picked = rand::seq::index::sample(&mut rng, empty.len(), k);
            empty.with_bits(BitSet::from_indices(empty.len(), picked))
        })
        .collect()
}

fn reduce_eliminate_equality(o: &VerifyOptions, b: &Budget) -> Result<Tally> {
    let mut t = Tally::new();
    let set = RelationSet::new(vec![Relation::or(2), Relation::equality(), Relation::negative(), Relation::implication()]);
    for inst in random_instances(&set, o, 1)? {
        let out = eliminate_equality(&inst)?;
        let ok = out.set().equality_index().is_none() && inst.csp_sat_value(b)? == out.csp_sat_value(b)?;
        t.case(ok, || instance_witness(&inst));
    }
    Ok(t)
}

fn reduce_cq_rewrite(o: &VerifyOptions, b: &Budget) -> Result<Tally> {
    let mut t = Tally::new();
    let s1 = RelationSet::new(vec![Relation::xor(2, true), Relation::xor(4, false)]);
    let over = RelationSet::xor3().with(Relation::equality());
    let defs = s1
        .iter()
        .map(|r| match find_cq(r, &over, &CqBudget::default())? {
            CqSearch::Found(d) => Ok(d),
            _ => Err(Error::Invalid(format!("no definition of {} found", r.label()))),
        })
        .collect::<Result<Vec<_>>>()?;
    for inst in random_instances(&s1, o, 2)? {
        let (out, red) = cq_rewrite(&inst, &defs)?;
        let ok = is_or_map(&red) && inst.csp_sat_value(b)? == out.csp_sat_value(b)?;
        t.case(ok, || instance_witness(&inst));
    }
    Ok(t)
}

fn reduce_pol(o: &VerifyOptions, b: &Budget) -> Result<Tally> {
    let mut t = Tally::new();
    let chains = [
        (RelationSet::new(vec![Relation::xor(2, true), Relation::xor(4, false)]), RelationSet::xor3()),
        (RelationSet::new(vec![Relation::implication(), Relation::positive()]), RelationSet::horn3()),
    ];
    for (k, (s1, s2)) in chains.iter().enumerate() {
        for inst in random_instances(s1, o, 3 + k as u64)?.into_iter().step_by(2) {
            let Some(pr) = pol_reduce(&inst, s2, &CqBudget::default(), b)? else {
                t.case(false, || json!({"no_definition": instance_witness(&inst)}));
                continue;
            };
            let ok = is_or_map(&pr.or_step)
                && pr.pol_inclusion != Some(false)
                && inst.csp_sat_value(b)? == pr.instance.csp_sat_value(b)?;
            t.case(ok, || json!({"target": s2.to_text(), "instance": instance_witness(&inst)}));
        }
    }
    Ok(t)
}

fn reduce_l2_l3(o: &VerifyOptions, b: &Budget) -> Result<Tally> {
    let mut t = Tally::new();
    let set = RelationSet::new(vec![Relation::xor(3, true), Relation::xor(2, true)]);
    for inst in random_instances(&set, o, 5)? {
        let (out, red) = l2_to_l3_transform(&inst)?;
        let ok = is_or_map(&red) && inst.csp_sat_value(b)? == out.csp_sat_value(b)?;
        t.case(ok, || instance_witness(&inst));
    }
    Ok(t)
}

fn reduce_negate(o: &VerifyOptions, b: &Budget) -> Result<Tally> {
    let mut t = Tally::new();
    for inst in random_instances(&RelationSet::horn3(), o, 6)? {
        let (out, red) = negate_instance(&inst)?;
        let ok = is_or_map(&red) && inst.csp_sat_value(b)? == out.csp_sat_value(b)?;
        t.case(ok, || instance_witness(&inst));
    }
    Ok(t)
}

fn bipartite_dual(o: &VerifyOptions, b: &Budget) -> Result<Tally> {
    let mut t = Tally::new();
    let n = o.pick(4, 3);
    let layout = BipXorLayout::new(n)?;
    let beta = layout.beta();
    t.case(is_or_map(&beta), || json!({"n": n, "beta": "not an OR-map"}));
    let bad = (0..1u64 << (n * n))
        .into_par_iter()
        .filter_map(|mask| {
            let check = || -> Result<bool> {
                let m = BipGraph::from_mask(n, mask)?;
                let y = beta.apply(&matrix_bits(&m))?;
                let dual = crate::csp::solve_xor(&layout.template().with_bits(y.complement())?)?;
                let direct = bip_odd_factor(&m);
                Ok(dual == direct && (n > 4 || direct == bip_odd_factor_oracle(&m, b)?))
            };
            match check() {
                Ok(true) => None,
                Ok(false) => Some(Ok(mask)),
                Err(e) => Some(Err(e)),
            }
        })
        .collect::<Result<Vec<u64>>>()?;
    t.run += (1u64 << (n * n)) - bad.len() as u64;
    for mask in bad {
        t.case(false, || json!({"n": n, "matrix_mask": mask}));
    }
    Ok(t)
}

/// Relation set of the binary relations whose masks are the set bits of
/// `subset` (relation `i` has tuple mask `i`).
pub fn binary_subset(subset: u32) -> RelationSet {
    let all = RelationSet::all_binary();
    RelationSet::new((0..16).filter(|i| subset >> i & 1 == 1).map(|i| all[i].clone()).collect())
}

fn dichotomy_binary(o: &VerifyOptions, b: &Budget) -> Result<Tally> {
    let mut t = Tally::new();
    let step = o.pick(1, 37);
    let trials = o.pick(20, 5) as u64;
    let subsets: Vec<u32> = (0..1u32 << 16).step_by(step).collect();
    let results: Vec<Result<Option<Value>>> = subsets
        .par_iter()
        .map(|&subset| {
            let set = binary_subset(subset);
            let v = classify(&set, b)?;
            if v.size_side != Side::Easy {
                return Ok(Some(json!({"subset": subset, "size_side": v.size_side})));
            }
            let Some(solver) = designated_solver(&v, &set) else {
                return Ok(Some(json!({"subset": subset, "solver": null})));
            };
            for i in 0..trials {
                let seed = o.seed ^ (subset as u64) << 8 ^ i;
                let inst = make_random(&set, 4, [0.05, 0.1, 0.2, 0.3][(i % 4) as usize], seed)?;
                if solver.solve(&inst)? == inst.csp_sat_value(b)? {
                    return Ok(Some(json!({"subset": subset, "solver": solver.name(), "instance": instance_witness(&inst)})));
                }
            }
            Ok(None)
        })
        .collect();
    for r in results {
        let w = r?;
        t.case(w.is_none(), || w.unwrap_or(Value::Null));
    }
    Ok(t)
}
