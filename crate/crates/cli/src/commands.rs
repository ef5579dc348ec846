//! Subcommand dispatch and output shaping.
//!
//! Exit codes: 0 success (`check-potential` yes, `compare` equal), 1 for a
//! negative verdict, 2 for usage and parse problems, 3 for instances that
//! are structurally fine but unsolvable or invalid (disconnected support,
//! infeasible root, broken diagonal dominance).

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use pmst_core::{
    build_q, edmonds_best_root, edmonds_fixed_root, gen_general, gen_potential, kruskal, prim,
    recover_phi, solve_fast, DirectedGraph, Error, GenSpec, InBranching, NotPotentialWitness,
    RecoveryResult, UndirectedTree, DEFAULT_RECOVERY_TOL,
};

use crate::instance::{fmt_weight, format_instance, parse_instance, Instance};

#[derive(Parser)]
#[command(
    name = "pmst",
    version,
    about = "Minimum spanning in-branchings of weighted digraphs, with a fast path for potential weights"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MstAlgo {
    Kruskal,
    Prim,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GenKind {
    Potential,
    General,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BenchKind {
    Potential,
}

#[derive(Subcommand)]
pub enum Command {
    /// Minimum spanning tree of an undirected instance (ugraph or phi)
    Mst {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = MstAlgo::Kruskal)]
        algo: MstAlgo,
        /// Start vertex for Prim
        #[arg(long, default_value_t = 0)]
        start: usize,
    },
    /// Minimum spanning in-branching by the general algorithm (q, digraph, or phi)
    Msa {
        file: PathBuf,
        /// Fix the root instead of scanning every feasible root
        #[arg(long)]
        root: Option<usize>,
    },
    /// Decide whether directed weights are potential; recover phi when they are
    CheckPotential { file: PathBuf },
    /// Solve the instance, taking the fast path whenever the weights allow it
    Solve {
        file: PathBuf,
        /// Run the general algorithm even when the fast path applies
        #[arg(long)]
        force_general: bool,
    },
    /// Run both paths on a potential instance and compare the weights
    Compare { file: PathBuf },
    /// Emit a seeded random instance in canonical form
    Gen {
        #[arg(long, value_enum)]
        r#type: GenKind,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1.0)]
        density: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Lower bound for diagonal and weight draws
        #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
        min: i64,
        /// Upper bound for diagonal and weight draws
        #[arg(long, default_value_t = 100, allow_negative_numbers = true)]
        max: i64,
    },
    /// Time fast and general paths over generated full-density potential
    /// instances and print a CSV table
    Bench {
        #[arg(long, value_enum)]
        r#type: BenchKind,
        /// Comma-separated instance sizes
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 5)]
        reps: usize,
    },
}

enum CmdError {
    Usage(String),
    Instance(String),
}

use CmdError::{Instance as InstanceErr, Usage};

fn solver_err(e: Error) -> CmdError {
    match e {
        Error::Config(msg) => Usage(msg),
        other => InstanceErr(other.to_string()),
    }
}

/// Runs one parsed command line; returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    let outcome = match cli.command {
        Command::Mst { file, algo, start } => cmd_mst(&file, algo, start),
        Command::Msa { file, root } => cmd_msa(&file, root),
        Command::CheckPotential { file } => cmd_check_potential(&file),
        Command::Solve {
            file,
            force_general,
        } => cmd_solve(&file, force_general),
        Command::Compare { file } => cmd_compare(&file),
        Command::Gen {
            r#type,
            n,
            density,
            seed,
            min,
            max,
        } => cmd_gen(r#type, n, density, seed, (min, max)),
        Command::Bench {
            r#type: _,
            n,
            seed,
            reps,
        } => cmd_bench(&n, seed, reps),
    };
    match outcome {
        Ok(code) => code,
        Err(Usage(msg)) => {
            eprintln!("error: {msg}");
            2
        }
        Err(InstanceErr(msg)) => {
            eprintln!("error: {msg}");
            3
        }
    }
}

fn load(path: &Path) -> Result<Instance, CmdError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Usage(format!("cannot read {}: {e}", path.display())))?;
    parse_instance(&text).map_err(|e| Usage(format!("{}: {e}", path.display())))
}

fn to_directed(instance: Instance, command: &str) -> Result<DirectedGraph, CmdError> {
    match instance {
        Instance::Directed(q) => Ok(q),
        Instance::Potential(phi) => {
            build_q(&phi).map_err(|d| InstanceErr(format!("invalid potential system: {d}")))
        }
        Instance::Undirected(_) => Err(Usage(format!(
            "{command} needs a directed instance (q, digraph, or phi)"
        ))),
    }
}

fn print_tree(tree: &UndirectedTree) {
    let mut edges = tree.edges().to_vec();
    edges.sort_by_key(|e| (e.u, e.v));
    for e in edges {
        println!("edge {} {} {}", e.u, e.v, fmt_weight(e.weight));
    }
    println!("weight {}", fmt_weight(tree.total_weight()));
}

fn print_branching(b: &InBranching) {
    println!("root {}", b.root);
    let mut arcs = b.arcs.clone();
    arcs.sort_by_key(|a| a.tail);
    for a in arcs {
        println!("arc {} {} {}", a.tail, a.head, fmt_weight(a.weight));
    }
    println!("weight {}", fmt_weight(b.total_weight()));
}

fn cmd_mst(file: &Path, algo: MstAlgo, start: usize) -> Result<i32, CmdError> {
    let g = match load(file)? {
        Instance::Undirected(g) => g,
        Instance::Potential(phi) => phi.support().clone(),
        Instance::Directed(_) => {
            return Err(Usage(
                "mst needs an undirected instance (ugraph or phi)".into(),
            ))
        }
    };
    let tree = match algo {
        MstAlgo::Kruskal => kruskal(&g),
        MstAlgo::Prim => {
            if start >= g.vertex_count() {
                return Err(Usage(format!(
                    "start vertex {start} outside [0, {})",
                    g.vertex_count()
                )));
            }
            prim(&g, start)
        }
    }
    .map_err(solver_err)?;
    print_tree(&tree);
    Ok(0)
}

fn cmd_msa(file: &Path, root: Option<usize>) -> Result<i32, CmdError> {
    let q = to_directed(load(file)?, "msa")?;
    let b = match root {
        Some(r) => {
            if r >= q.vertex_count() {
                return Err(Usage(format!("root {r} outside [0, {})", q.vertex_count())));
            }
            edmonds_fixed_root(&q, r).map_err(solver_err)?
        }
        None => edmonds_best_root(&q).map_err(solver_err)?.1,
    };
    print_branching(&b);
    Ok(0)
}

fn cmd_check_potential(file: &Path) -> Result<i32, CmdError> {
    let q = to_directed(load(file)?, "check-potential")?;
    match recover_phi(&q, DEFAULT_RECOVERY_TOL) {
        RecoveryResult::Potential { phi, .. } => {
            println!("potential yes");
            print!("{}", format_instance(&Instance::Potential(phi)));
            Ok(0)
        }
        RecoveryResult::NotPotential { witness } => {
            println!("potential no");
            match witness {
                NotPotentialWitness::AsymmetricSupport { tail, head } => {
                    println!("witness asymmetric-support {tail} {head}");
                }
                NotPotentialWitness::NonPositive { tail, head, weight } => {
                    println!("witness non-positive {tail} {head} {}", fmt_weight(weight));
                }
                NotPotentialWitness::InconsistentCycle { cycle, mismatch } => {
                    let verts: Vec<String> = cycle.iter().map(ToString::to_string).collect();
                    println!(
                        "witness inconsistent-cycle {} mismatch {}",
                        verts.join(" "),
                        fmt_weight(mismatch)
                    );
                }
            }
            Ok(1)
        }
    }
}

fn cmd_solve(file: &Path, force_general: bool) -> Result<i32, CmdError> {
    match load(file)? {
        Instance::Potential(phi) => {
            if force_general {
                let q = build_q(&phi)
                    .map_err(|d| InstanceErr(format!("invalid potential system: {d}")))?;
                solve_general(&q)
            } else {
                let sol = solve_fast(&phi).map_err(solver_err)?;
                println!("method fast");
                print_branching(&sol.branching);
                Ok(0)
            }
        }
        Instance::Directed(q) => {
            if force_general {
                return solve_general(&q);
            }
            match recover_phi(&q, DEFAULT_RECOVERY_TOL) {
                RecoveryResult::Potential { phi, .. } => {
                    let sol = solve_fast(&phi).map_err(solver_err)?;
                    println!("method fast");
                    print_branching(&sol.branching);
                    Ok(0)
                }
                RecoveryResult::NotPotential { .. } => solve_general(&q),
            }
        }
        Instance::Undirected(_) => Err(Usage(
            "solve needs a potential or directed instance (phi, q, or digraph)".into(),
        )),
    }
}

fn solve_general(q: &DirectedGraph) -> Result<i32, CmdError> {
    let (_, b) = edmonds_best_root(q).map_err(solver_err)?;
    println!("method general");
    print_branching(&b);
    Ok(0)
}

fn cmd_compare(file: &Path) -> Result<i32, CmdError> {
    let (fast_weight, general_weight) = match load(file)? {
        Instance::Potential(phi) => {
            let sol = solve_fast(&phi).map_err(solver_err)?;
            let q =
                build_q(&phi).map_err(|d| InstanceErr(format!("invalid potential system: {d}")))?;
            let (_, b) = edmonds_best_root(&q).map_err(solver_err)?;
            (sol.weight, b.total_weight())
        }
        Instance::Directed(q) => match recover_phi(&q, DEFAULT_RECOVERY_TOL) {
            RecoveryResult::Potential { phi, .. } => {
                let sol = solve_fast(&phi).map_err(solver_err)?;
                let (_, b) = edmonds_best_root(&q).map_err(solver_err)?;
                (sol.weight, b.total_weight())
            }
            RecoveryResult::NotPotential { .. } => {
                return Err(InstanceErr(
                    "compare needs a potential instance; these weights are not potential".into(),
                ))
            }
        },
        Instance::Undirected(_) => {
            return Err(Usage(
                "compare needs a potential or directed instance".into(),
            ))
        }
    };
    println!("fast {}", fmt_weight(fast_weight));
    println!("general {}", fmt_weight(general_weight));
    let equal = fast_weight == general_weight;
    println!("equal {}", if equal { "yes" } else { "no" });
    Ok(if equal { 0 } else { 1 })
}

fn cmd_gen(
    kind: GenKind,
    n: usize,
    density: f64,
    seed: u64,
    weight_range: (i64, i64),
) -> Result<i32, CmdError> {
    let spec = GenSpec {
        n,
        density,
        seed,
        weight_range,
    };
    let instance = match kind {
        GenKind::Potential => Instance::Potential(gen_potential(&spec).map_err(solver_err)?),
        GenKind::General => Instance::Directed(gen_general(&spec).map_err(solver_err)?),
    };
    print!("{}", format_instance(&instance));
    Ok(0)
}

// Benchmark weight draws; the instance for size n uses seed + n so that the
// whole table is pinned by the --seed flag alone.
const BENCH_RANGE: (i64, i64) = (0, 100);

fn cmd_bench(sizes: &[usize], seed: u64, reps: usize) -> Result<i32, CmdError> {
    if reps == 0 {
        return Err(Usage("reps must be at least 1".into()));
    }
    println!("n,method,median_ms,weight");
    for &n in sizes {
        let spec = GenSpec {
            n,
            density: 1.0,
            seed: seed.wrapping_add(n as u64),
            weight_range: BENCH_RANGE,
        };
        let phi = gen_potential(&spec).map_err(solver_err)?;
        let q = build_q(&phi).map_err(|d| InstanceErr(format!("invalid potential system: {d}")))?;

        let mut fast_ms = Vec::with_capacity(reps);
        let mut fast_weight = 0.0;
        for _ in 0..reps {
            let t = Instant::now();
            let sol = solve_fast(&phi).map_err(solver_err)?;
            fast_ms.push(t.elapsed().as_secs_f64() * 1e3);
            fast_weight = sol.weight;
        }
        let mut general_ms = Vec::with_capacity(reps);
        let mut general_weight = 0.0;
        for _ in 0..reps {
            let t = Instant::now();
            let (_, b) = edmonds_best_root(&q).map_err(solver_err)?;
            general_ms.push(t.elapsed().as_secs_f64() * 1e3);
            general_weight = b.total_weight();
        }
        println!(
            "{n},fast,{:.3},{}",
            median(&mut fast_ms),
            fmt_weight(fast_weight)
        );
        println!(
            "{n},general,{:.3},{}",
            median(&mut general_ms),
            fmt_weight(general_weight)
        );
    }
    Ok(0)
}

fn median(samples: &mut [f64]) -> f64 {
    samples.sort_by(f64::total_cmp);
    let mid = samples.len() / 2;
    if samples.len() % 2 == 1 {
        samples[mid]
    } else {
        (samples[mid - 1] + samples[mid]) / 2.0
    }
}
