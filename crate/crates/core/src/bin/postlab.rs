use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use postlab::circuit::Circuit;
use postlab::construct::{
    checkpoint_circuit, emit_monotone_csp_circuit, induced_subgraph_circuit, pad_dummy_inputs, padded_graph_property,
    threshold_circuit, GraphPropertyCircuit, LayeredBp, MonotoneFragment, PathMode, Profile, ThresholdMode,
};
use postlab::csp::{designated_solver, make_hornsat, make_random, make_tseitin, make_xorsat, CspInstance, Solver};
use postlab::graph::{bip_odd_factor, bip_odd_factor_oracle, odd_factor_fast, odd_factor_oracle, tseitin_system, BipGraph, Graph};
use postlab::lattice::{classify, classify_with_equality};
use postlab::reductions::{
    bip_oddfactor_to_xorsat, eliminate_equality, l2_to_l3_transform, negate_instance, pol_reduce, BitReduction, CqBudget,
};
use postlab::verify::{run_suite, Suite, VerifyOptions};
use postlab::{BitSet, Budget, Error, RelationSet, Result};

/// Boolean CSP classification, monotone reductions and circuit
/// constructions.
#[derive(Parser)]
#[command(name = "postlab", version)]
struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads for exhaustive sweeps.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Write the run report here instead of standard error.
    #[arg(long, global = true)]
    report: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Classify a relation set file; prints the verdict as JSON.
    Classify {
        /// Relation set text file.
        rels: PathBuf,
        /// Also search for a definition of equality.
        #[arg(long)]
        equality: bool,
    },
    /// Decide an instance; prints SAT or UNSAT.
    Solve {
        /// auto, brute, or one of const0 const1 or nand horn antihorn 2sat xor.
        solver: String,
        /// Instance JSON.
        #[arg(long = "in")]
        input: PathBuf,
        #[command(flatten)]
        out: Out,
    },
    /// Apply a reduction to an instance.
    Reduce {
        op: ReduceOp,
        /// Instance JSON, or a 0/1 matrix text for `bipartite`.
        #[arg(long = "in")]
        input: PathBuf,
        /// Target relation set for `pol`.
        #[arg(long)]
        target: Option<PathBuf>,
        /// Write the bit map of the reduction here.
        #[arg(long)]
        map: Option<PathBuf>,
        #[command(flatten)]
        out: Out,
    },
    /// Emit a circuit or instance.
    Emit {
        #[command(subcommand)]
        what: Emit,
    },
    /// Pad a circuit or a graph property.
    Pad {
        #[command(subcommand)]
        what: Pad,
    },
    /// Run an oracle-equivalence suite.
    Verify {
        /// oddfactor, constructions, reductions, quine, dichotomy-consistency or all.
        suite: String,
        /// Reduced sample counts.
        #[arg(long)]
        quick: bool,
        /// Largest graph for the exhaustive odd factor sweep.
        #[arg(long)]
        max_vertices: Option<usize>,
        /// Variables of the functions enumerated by the quine suite.
        #[arg(long)]
        vars: Option<usize>,
    },
    /// Evaluate a brute-force oracle.
    Oracle {
        #[command(subcommand)]
        what: Oracle,
    },
}

#[derive(Args)]
struct Out {
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReduceOp {
    EliminateEq,
    Negate,
    L2ToL3,
    Pol,
    Bipartite,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Parity,
    Reach,
}

#[derive(Clone, Copy, ValueEnum)]
enum ThrArg {
    Logdepth,
    Flat,
}

impl From<ThrArg> for ThresholdMode {
    fn from(t: ThrArg) -> Self {
        match t {
            ThrArg::Logdepth => ThresholdMode::LogDepth,
            ThrArg::Flat => ThresholdMode::Flat,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ProfileArg {
    Nc1,
    Ac0,
    Ac0Xor,
}

#[derive(Clone, Copy, ValueEnum)]
enum PropertyArg {
    Edge,
    Oddfactor,
}

#[derive(Subcommand)]
enum Emit {
    /// Depth-2d circuit of a layered branching program.
    Checkpoint {
        /// Branching program JSON.
        #[arg(long)]
        bp: PathBuf,
        /// Recursion depth; the circuit has depth 2d.
        #[arg(long)]
        d: usize,
        /// Parity or existence of accepting paths.
        #[arg(long, value_enum)]
        mode: ModeArg,
        #[command(flatten)]
        out: Out,
    },
    /// Random layered branching program.
    RandomBp {
        /// Input variables.
        #[arg(long)]
        n: usize,
        /// Layers of edges.
        #[arg(long)]
        m: usize,
        /// Largest layer width.
        #[arg(long, default_value_t = 3)]
        width: usize,
        /// Probability of each possible edge.
        #[arg(long, default_value_t = 0.5)]
        density: f64,
        #[command(flatten)]
        out: Out,
    },
    /// Circuit for "at least k of n inputs".
    Threshold {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "logdepth")]
        mode: ThrArg,
        #[command(flatten)]
        out: Out,
    },
    /// Circuit extracting the subgraph induced by a k-vertex set.
    InducedSubgraph {
        /// Vertices of the input graph.
        #[arg(long)]
        n: usize,
        /// Vertices of the extracted graph.
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value = "logdepth")]
        mode: ThrArg,
        #[command(flatten)]
        out: Out,
    },
    /// AND/OR circuit deciding unsatisfiability of a tractable set.
    MonotoneCsp {
        /// Relation set text file.
        #[arg(long)]
        rels: PathBuf,
        /// Instance variables.
        #[arg(long)]
        n: usize,
        /// horn, antihorn, 2sat, or, nand; first accepting one when absent.
        #[arg(long)]
        fragment: Option<String>,
        #[command(flatten)]
        out: Out,
    },
    /// Tseitin instance of a graph file.
    Tseitin {
        /// Graph text file.
        #[arg(long)]
        graph: PathBuf,
        #[command(flatten)]
        out: Out,
    },
    /// 3-XOR-SAT instance on n variables.
    Xorsat {
        #[arg(long)]
        n: usize,
        /// Random constraints at this density (seeded); empty otherwise.
        #[arg(long)]
        density: Option<f64>,
        #[command(flatten)]
        out: Out,
    },
    /// 3-Horn instance on n variables.
    Hornsat {
        #[arg(long)]
        n: usize,
        /// Random constraints at this density (seeded); empty otherwise.
        #[arg(long)]
        density: Option<f64>,
        #[command(flatten)]
        out: Out,
    },
}

#[derive(Subcommand)]
enum Pad {
    /// Monotone graph property on more vertices.
    Graph {
        #[arg(long, value_enum)]
        property: PropertyArg,
        /// Vertices of the property.
        #[arg(long)]
        n: usize,
        /// Vertices of the padded property.
        #[arg(long)]
        big_n: usize,
        /// Threshold construction: log depth, flat, or flat with XOR allowed.
        #[arg(long, value_enum, default_value = "nc1")]
        profile: ProfileArg,
        /// Write the planted-copy embedding here.
        #[arg(long)]
        map: Option<PathBuf>,
        #[command(flatten)]
        out: Out,
    },
    /// Append ignored inputs to a circuit.
    Dummy {
        /// Circuit JSON.
        #[arg(long)]
        circuit: PathBuf,
        /// Ignored inputs to append.
        #[arg(long)]
        m: usize,
        #[command(flatten)]
        out: Out,
    },
}

#[derive(Subcommand)]
enum Oracle {
    /// Odd factor of a graph file by all three deciders.
    Oddfactor {
        /// Graph text file.
        #[arg(long)]
        graph: PathBuf,
    },
    /// Brute-force CSP-SAT value of an instance (1 = unsatisfiable).
    CspSat {
        /// Instance JSON.
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Odd factor of a bipartite graph given as a 0/1 matrix.
    BipOddfactor {
        /// Rows of 0/1 characters.
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Evaluate a circuit on an input bit string (input 1 first).
    Circuit {
        /// Circuit JSON.
        #[arg(long)]
        circuit: PathBuf,
        /// 0/1 characters, one per input.
        #[arg(long)]
        input: String,
    },
}

#[derive(Serialize)]
struct Verification {
    checks_run: u64,
    checks_passed: u64,
}

#[derive(Serialize)]
struct RunReport {
    command: String,
    inputs_digest: String,
    seed: u64,
    outputs: Value,
    verification: Verification,
    seconds: f64,
}

/// Reads input files and hashes everything read.
struct Inputs {
    hasher: Sha256,
}

impl Inputs {
    fn text(&mut self, p: &Path) -> Result<String> {
        let s = std::fs::read_to_string(p).map_err(|e| Error::Invalid(format!("{}: {e}", p.display())))?;
        self.hasher.update(p.to_string_lossy().as_bytes());
        self.hasher.update(s.as_bytes());
        Ok(s)
    }

    fn json<T: serde::de::DeserializeOwned>(&mut self, p: &Path) -> Result<T> {
        let s = self.text(p)?;
        serde_json::from_str(&s).map_err(|e| Error::Parse {
            line: e.line(),
            msg: format!("{}: {e}", p.display()),
        })
    }

    fn relations(&mut self, p: &Path) -> Result<RelationSet> {
        RelationSet::parse(&self.text(p)?)
    }

    fn graph(&mut self, p: &Path) -> Result<Graph> {
        Graph::parse(&self.text(p)?)
    }

    fn matrix(&mut self, p: &Path) -> Result<BipGraph> {
        let rows = self
            .text(p)?
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
            .map(|(i, l)| {
                l.trim()
                    .chars()
                    .filter(|c| !c.is_whitespace())
                    .map(|c| match c {
                        '0' => Ok(false),
                        '1' => Ok(true),
                        _ => Err(Error::Parse { line: i + 1, msg: format!("matrix entry `{c}`") }),
                    })
                    .collect::<Result<Vec<bool>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        BipGraph::from_matrix(&rows)
    }
}

fn write_out(out: &Out, body: &str) -> Result<()> {
    match &out.out {
        Some(p) => std::fs::write(p, body).map_err(|e| Error::Invalid(format!("{}: {e}", p.display()))),
        None => {
            println!("{body}");
            Ok(())
        }
    }
}

fn write_json(out: &Out, v: &impl Serialize) -> Result<()> {
    write_out(out, &serde_json::to_string_pretty(v).expect("serializable"))
}

fn write_map(p: &Option<PathBuf>, r: &BitReduction) -> Result<()> {
    if let Some(p) = p {
        let s = serde_json::to_string(r).expect("serializable");
        std::fs::write(p, s).map_err(|e| Error::Invalid(format!("{}: {e}", p.display())))?;
    }
    Ok(())
}

fn emit_circuit(out: &Out, c: &Circuit) -> Result<Value> {
    write_json(out, c)?;
    Ok(json!({"inputs": c.n(), "measures": c.measures()}))
}

fn emit_instance(out: &Out, i: &CspInstance) -> Result<Value> {
    write_json(out, i)?;
    Ok(json!({"n": i.n(), "len": i.len(), "constraints": i.bits().count_ones()}))
}

fn with_density(base: CspInstance, density: Option<f64>, seed: u64) -> Result<CspInstance> {
    match density {
        Some(d) => make_random(base.set(), base.n(), d, seed),
        None => Ok(base),
    }
}

/// Runs the command; returns its outputs summary and verification tally.
fn run(cli: &Cli, inp: &mut Inputs, budget: &Budget) -> Result<(Value, Verification)> {
    let none = Verification { checks_run: 0, checks_passed: 0 };
    let outputs = match &cli.cmd {
        Cmd::Classify { rels, equality } => {
            let s = inp.relations(rels)?;
            let v = if *equality {
                classify_with_equality(&s, budget, &CqBudget::default())?
            } else {
                classify(&s, budget)?
            };
            println!("{}", serde_json::to_string_pretty(&v).expect("serializable"));
            json!({"size_side": v.size_side, "depth_side": v.depth_side, "trivial": v.trivial})
        }
        Cmd::Solve { solver, input, out } => {
            let inst: CspInstance = inp.json(input)?;
            let (name, sat) = match solver.as_str() {
                "brute" => ("brute".to_string(), !inst.csp_sat_value(budget)?),
                "auto" => {
                    let v = classify(inst.set(), budget)?;
                    match designated_solver(&v, inst.set()) {
                        Some(s) => (s.name().to_string(), s.solve(&inst)?),
                        None => ("brute".to_string(), !inst.csp_sat_value(budget)?),
                    }
                }
                s => {
                    let sv = Solver::from_name(s).ok_or_else(|| Error::Invalid(format!("unknown solver `{s}`")))?;
                    if !sv.accepts(inst.set()) {
                        return Err(Error::Fragment { fragment: sv.name().into(), relation: inst.set().label() });
                    }
                    (sv.name().to_string(), sv.solve(&inst)?)
                }
            };
            write_out(out, if sat { "SAT" } else { "UNSAT" })?;
            json!({"solver": name, "satisfiable": sat})
        }
        Cmd::Reduce { op, input, target, map, out } => match op {
            ReduceOp::Bipartite => {
                let m = inp.matrix(input)?;
                let (inst, beta) = bip_oddfactor_to_xorsat(&m)?;
                write_map(map, &beta)?;
                emit_instance(out, &inst)?
            }
            _ => {
                let inst: CspInstance = inp.json(input)?;
                let (res, red) = match op {
                    ReduceOp::EliminateEq => (eliminate_equality(&inst)?, None),
                    ReduceOp::Negate => {
                        let (i, r) = negate_instance(&inst)?;
                        (i, Some(r))
                    }
                    ReduceOp::L2ToL3 => {
                        let (i, r) = l2_to_l3_transform(&inst)?;
                        (i, Some(r))
                    }
                    ReduceOp::Pol => {
                        let t = target.as_ref().ok_or_else(|| Error::Invalid("`pol` needs --target".into()))?;
                        let s2 = inp.relations(t)?;
                        let pr = pol_reduce(&inst, &s2, &CqBudget::default(), budget)?.ok_or_else(|| Error::Fragment {
                            fragment: format!("conjunctive queries over {}", s2.label()),
                            relation: inst.set().label(),
                        })?;
                        (pr.instance, Some(pr.or_step))
                    }
                    ReduceOp::Bipartite => unreachable!(),
                };
                if let Some(r) = &red {
                    write_map(map, r)?;
                }
                emit_instance(out, &res)?
            }
        },
        Cmd::Emit { what } => match what {
            Emit::Checkpoint { bp, d, mode, out } => {
                let bp: LayeredBp = inp.json(bp)?;
                let mode = match mode {
                    ModeArg::Parity => PathMode::Parity,
                    ModeArg::Reach => PathMode::Reach,
                };
                emit_circuit(out, &checkpoint_circuit(&bp, *d, mode)?)?
            }
            Emit::RandomBp { n, m, width, density, out } => {
                let bp = LayeredBp::random(*n, *m, *width, *density, cli.seed);
                write_json(out, &bp)?;
                json!({"n": n, "m": m, "edges": bp.edges.len()})
            }
            Emit::Threshold { k, n, mode, out } => emit_circuit(out, &threshold_circuit(*k, *n, (*mode).into()))?,
            Emit::InducedSubgraph { n, k, mode, out } => {
                if k > n {
                    return Err(Error::Invalid(format!("k = {k} exceeds n = {n}")));
                }
                emit_circuit(out, &induced_subgraph_circuit(*n, *k, (*mode).into()))?
            }
            Emit::MonotoneCsp { rels, n, fragment, out } => {
                let s = inp.relations(rels)?;
                let frag = match fragment {
                    Some(f) => Some(MonotoneFragment::from_name(f).ok_or_else(|| Error::Invalid(format!("unknown fragment `{f}`")))?),
                    None => None,
                };
                emit_circuit(out, &emit_monotone_csp_circuit(&s, *n, frag)?)?
            }
            Emit::Tseitin { graph, out } => emit_instance(out, &make_tseitin(&inp.graph(graph)?)?)?,
            Emit::Xorsat { n, density, out } => {
                let base = make_xorsat(*n)?;
                emit_instance(out, &with_density(base, *density, cli.seed)?)?
            }
            Emit::Hornsat { n, density, out } => {
                let base = make_hornsat(*n)?;
                emit_instance(out, &with_density(base, *density, cli.seed)?)?
            }
        },
        Cmd::Pad { what } => match what {
            Pad::Graph { property, n, big_n, profile, map, out } => {
                let f = match property {
                    PropertyArg::Edge => GraphPropertyCircuit::edge_existence(*n),
                    PropertyArg::Oddfactor => GraphPropertyCircuit::odd_factor(*n)?,
                };
                let profile = match profile {
                    ProfileArg::Nc1 => Profile::Nc1,
                    ProfileArg::Ac0 => Profile::Ac0,
                    ProfileArg::Ac0Xor => Profile::Ac0Xor,
                };
                let (g, embed) = padded_graph_property(&f, *big_n, profile)?;
                write_map(map, &embed)?;
                write_json(out, &g)?;
                json!({"name": g.name, "vertices": g.vertices, "measures": g.circuit.measures()})
            }
            Pad::Dummy { circuit, m, out } => {
                let c: Circuit = inp.json(circuit)?;
                emit_circuit(out, &pad_dummy_inputs(&c, *m)?)?
            }
        },
        Cmd::Verify { suite, quick, max_vertices, vars } => {
            let mut opts = if *quick { VerifyOptions::quick() } else { VerifyOptions::default() };
            opts.seed = cli.seed;
            if let Some(v) = max_vertices {
                opts.max_vertices = *v;
            }
            if let Some(v) = vars {
                opts.vars = *v;
            }
            let report = run_suite(Suite::from_name(suite)?, &opts, budget)?;
            for c in &report.checks {
                let status = if c.passed() { "PASS" } else { "FAIL" };
                println!("{status} {} ({} cases, {} failed, {:.2}s)", c.name, c.run, c.failed, c.seconds);
                for w in &c.witnesses {
                    println!("  witness {w}");
                }
            }
            let v = Verification {
                checks_run: report.checks_run(),
                checks_passed: report.checks_run() - report.checks_failed(),
            };
            return Ok((serde_json::to_value(&report).expect("serializable"), v));
        }
        Cmd::Oracle { what } => match what {
            Oracle::Oddfactor { graph } => {
                let g = inp.graph(graph)?;
                let r = json!({
                    "fast": odd_factor_fast(&g),
                    "oracle": odd_factor_oracle(&g, budget)?,
                    "tseitin": tseitin_system(&g).is_satisfiable(),
                });
                println!("{r}");
                r
            }
            Oracle::CspSat { input } => {
                let inst: CspInstance = inp.json(input)?;
                let v = inst.csp_sat_value(budget)?;
                println!("{}", u8::from(v));
                json!({"csp_sat": v})
            }
            Oracle::BipOddfactor { matrix } => {
                let m = inp.matrix(matrix)?;
                let r = json!({"fast": bip_odd_factor(&m), "oracle": bip_odd_factor_oracle(&m, budget)?});
                println!("{r}");
                r
            }
            Oracle::Circuit { circuit, input } => {
                let c: Circuit = inp.json(circuit)?;
                let bits: Vec<bool> = input
                    .chars()
                    .map(|ch| match ch {
                        '0' => Ok(false),
                        '1' => Ok(true),
                        _ => Err(Error::Parse { line: 0, msg: format!("input bit `{ch}`") }),
                    })
                    .collect::<Result<_>>()?;
                let x = BitSet::from_indices(bits.len(), (0..bits.len()).filter(|&i| bits[i]));
                let y = c.evaluate(&x)?;
                let s: String = (0..y.len()).map(|i| if y.get(i) { '1' } else { '0' }).collect();
                println!("{s}");
                json!({"outputs": s})
            }
        },
    };
    Ok((outputs, none))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(j) = cli.jobs {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build_global();
    }
    let t0 = Instant::now();
    let mut inputs = Inputs { hasher: Sha256::new() };
    let result = Budget::from_env().and_then(|b| run(&cli, &mut inputs, &b));
    match result {
        Ok((outputs, verification)) => {
            let failed = verification.checks_passed < verification.checks_run;
            let report = RunReport {
                command: std::env::args().skip(1).collect::<Vec<_>>().join(" "),
                inputs_digest: format!("{:x}", inputs.hasher.finalize()),
                seed: cli.seed,
                outputs,
                verification,
                seconds: t0.elapsed().as_secs_f64(),
            };
            let text = serde_json::to_string(&report).expect("serializable");
            match &cli.report {
                Some(p) => {
                    if let Err(e) = std::fs::write(p, text) {
                        eprintln!("error: {}: {e}", p.display());
                        return ExitCode::from(2);
                    }
                }
                None => eprintln!("{text}"),
            }
            if failed {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
