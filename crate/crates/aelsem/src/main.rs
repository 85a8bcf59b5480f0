//! Command-line front end: decision subcommands with an exit-code contract
//! (0 = verdict true / success, 1 = verdict false, 2 = usage or input error).

use aelsem::{
    decision, enumerate, error_bound_constraint, error_bound_generic,
    error_bound_inclusion, parse_constraint, parse_graph, partition_classes, table1_experiment,
    Bound, Decision, Error, GraphFamily, GraphFamilySpec, MixedGraph, PrimeModulus,
};
use clap::{Parser, Subcommand};
use num_traits::ToPrimitive;
use rand::RngCore;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "aelsem", about = "Randomized decisions for linear SEMs on mixed graphs")]
struct Cli {
    /// Field modulus: m31, p63, m127, or a decimal prime
    #[arg(long, global = true, default_value = "m31")]
    prime: String,
    /// RNG master seed; drawn from entropy when absent, always echoed
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Number of independent repetitions (bound becomes q^k)
    #[arg(long, global = true, default_value_t = 1)]
    repeats: usize,
    /// Target error bound; picks the minimal repetition count achieving it
    #[arg(long, global = true, conflicts_with = "repeats")]
    confidence: Option<f64>,
    /// Emit a machine-readable JSON record
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Test whether a graph imposes an algebraic constraint
    CheckConstraint { graph: PathBuf, constraint: PathBuf },
    /// Test whether the first graph's model is contained in the second's
    CheckInclusion { graph: PathBuf, graph_prime: PathBuf },
    /// Test whether two BAPs are algebraically equivalent
    CheckEquivalence { graph: PathBuf, graph_prime: PathBuf },
    /// Report structural properties of a graph
    ClassifyGraph { graph: PathBuf },
    /// Partition all .graph files in a directory into equivalence classes
    ClassifySet { dir: PathBuf },
    /// Print an error bound without running a decision
    ErrorBound {
        /// Two graph files: bound for inclusion of the first in the second
        #[arg(long, num_args = 2, value_names = ["G", "GP"])]
        pair: Option<Vec<PathBuf>>,
        /// Graph-independent bound for a given node count
        #[arg(long, conflicts_with = "pair")]
        generic: Option<usize>,
    },
    /// List all graphs of a small family
    Enumerate {
        #[arg(long, value_parser = ["baps", "dags", "complete-baps"])]
        family: String,
        #[arg(long)]
        n: usize,
        /// Permit very large enumerations
        #[arg(long)]
        allow_large: bool,
    },
    /// Timing / false-positive experiment on the worst-case family
    Bench {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 2000)]
        trials: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn read_graph(path: &Path) -> Result<MixedGraph, Error> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::ParseError {
        line: 0,
        msg: format!("cannot read {}: {e}", path.display()),
    })?;
    parse_graph(&text)
}

/// Minimal k with bound^k <= q; the single-run bound must be below 1.
fn repeats_for_confidence(single: &Bound, q: f64) -> Result<usize, Error> {
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::ParseError {
            line: 0,
            msg: format!("confidence target must be in (0, 1), got {q}"),
        });
    }
    if single.is_zero() {
        return Ok(1);
    }
    let b = single.numerator().to_f64().unwrap_or(f64::INFINITY)
        / single.denominator().to_f64().unwrap_or(f64::INFINITY);
    if !(b > 0.0 && b < 1.0) {
        return Err(Error::ParseError {
            line: 0,
            msg: format!(
                "single-run bound {} is not below 1; no repetition count reaches the target",
                single.decimal_string()
            ),
        });
    }
    let k = (q.ln() / b.ln()).ceil().max(1.0);
    Ok((k as usize).min(100_000))
}

fn run(cli: &Cli) -> Result<ExitCode, Error> {
    let p = PrimeModulus::parse(&cli.prime)?;
    let seed = cli.seed.unwrap_or_else(|| rand::thread_rng().next_u64());
    match &cli.cmd {
        Cmd::CheckConstraint { graph, constraint } => {
            let g = read_graph(graph)?;
            let text = std::fs::read_to_string(constraint).map_err(|e| Error::ParseError {
                line: 0,
                msg: format!("cannot read {}: {e}", constraint.display()),
            })?;
            let f = parse_constraint(&text, &g)?;
            let single = error_bound_constraint(&g, &f, p)?;
            let k = effective_repeats(cli, &single)?;
            let d = decision::decide_with_repeats(k, seed, |rng| {
                decision::decide_constraint_stream(&g, &f, p, rng, seed)
            })?;
            emit_decision(cli, &d, &g)
        }
        Cmd::CheckInclusion { graph, graph_prime } => {
            let g = read_graph(graph)?;
            let gp = read_graph(graph_prime)?.permuted_to_names(g.names())?;
            if !gp.is_bap() {
                return Err(Error::NotBap("G' must be a BAP"));
            }
            let single = error_bound_inclusion(&g, &gp, p)?;
            let k = effective_repeats(cli, &single)?;
            let d = decision::decide_with_repeats(k, seed, |rng| {
                decision::decide_inclusion_stream(&g, &gp, p, rng, seed)
            })?;
            emit_decision(cli, &d, &g)
        }
        Cmd::CheckEquivalence { graph, graph_prime } => {
            let g = read_graph(graph)?;
            let gp = read_graph(graph_prime)?.permuted_to_names(g.names())?;
            let single = if g.skeleton() == gp.skeleton() {
                error_bound_inclusion(&g, &gp, p)?
            } else {
                Bound::zero()
            };
            let k = effective_repeats(cli, &single)?;
            let d = decision::decide_with_repeats(k, seed, |rng| {
                decision::decide_equivalence_stream(&g, &gp, p, rng, seed)
            })?;
            emit_decision(cli, &d, &g)
        }
        Cmd::ClassifyGraph { graph } => {
            let g = read_graph(graph)?;
            let r = g.classify();
            if cli.json {
                println!(
                    "{}",
                    serde_json::json!({
                        "nodes": g.names(),
                        "acyclic": r.acyclic,
                        "bow_free": r.bow_free,
                        "is_bap": r.is_bap,
                        "is_dag": r.is_dag,
                        "ancestral": r.ancestral,
                    })
                );
            } else {
                println!("nodes: {}", g.names().join(" "));
                println!("acyclic: {}", yesno(r.acyclic));
                println!("bow_free: {}", yesno(r.bow_free));
                println!("is_bap: {}", yesno(r.is_bap));
                println!("is_dag: {}", yesno(r.is_dag));
                println!("ancestral: {}", yesno(r.ancestral));
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::ClassifySet { dir } => {
            let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
                .map_err(|e| Error::ParseError {
                    line: 0,
                    msg: format!("cannot read directory {}: {e}", dir.display()),
                })?
                .filter_map(|entry| entry.ok().map(|e| e.path()))
                .filter(|path| path.extension().is_some_and(|ext| ext == "graph"))
                .collect();
            files.sort();
            if files.is_empty() {
                return Err(Error::ParseError {
                    line: 0,
                    msg: format!("no .graph files in {}", dir.display()),
                });
            }
            let first = read_graph(&files[0])?;
            let mut graphs = vec![first.clone()];
            for path in &files[1..] {
                graphs.push(read_graph(path)?.permuted_to_names(first.names())?);
            }
            let report = partition_classes(&graphs, p, cli.repeats.max(1), seed)?;
            let label = |i: usize| files[i].file_name().unwrap().to_string_lossy().to_string();
            if cli.json {
                let classes: Vec<Vec<String>> = report
                    .classes
                    .iter()
                    .map(|c| c.iter().map(|&i| label(i)).collect())
                    .collect();
                println!(
                    "{}",
                    serde_json::json!({
                        "classes": classes,
                        "repeats": report.repeats_used,
                        "prime": report.prime.to_string(),
                        "seed": report.seed,
                        "undetermined_pairs": report.undetermined_pairs,
                    })
                );
            } else {
                println!("seed: {seed}");
                println!("prime: {}", report.prime);
                println!("classes: {}", report.classes.len());
                for (i, class) in report.classes.iter().enumerate() {
                    let members: Vec<String> = class.iter().map(|&x| label(x)).collect();
                    println!("class {}: {}", i + 1, members.join(" "));
                }
                println!("undetermined_pairs: {}", report.undetermined_pairs);
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::ErrorBound { pair, generic } => {
            let bound = match (pair, generic) {
                (Some(paths), None) => {
                    let g = read_graph(&paths[0])?;
                    let gp = read_graph(&paths[1])?.permuted_to_names(g.names())?;
                    error_bound_inclusion(&g, &gp, p)?
                }
                (None, Some(n)) => error_bound_generic(*n, p)?,
                _ => {
                    return Err(Error::ParseError {
                        line: 0,
                        msg: "exactly one of --pair or --generic is required".to_string(),
                    })
                }
            };
            if cli.json {
                println!("{}", bound_json(&bound));
            } else {
                println!(
                    "{}/{} \u{2248} {}",
                    bound.numerator(),
                    bound.denominator(),
                    bound.decimal_string()
                );
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Enumerate { family, n, allow_large } => {
            let family = match family.as_str() {
                "baps" => GraphFamily::AllBaps,
                "dags" => GraphFamily::AllDags,
                "complete-baps" => GraphFamily::CompleteBaps,
                _ => unreachable!("clap restricts the value set"),
            };
            let graphs = enumerate(&GraphFamilySpec { family, n: *n, allow_large: *allow_large })?;
            if cli.json {
                let listed: Vec<String> = graphs.iter().map(compact_graph).collect();
                println!(
                    "{}",
                    serde_json::json!({ "count": graphs.len(), "graphs": listed })
                );
            } else {
                println!("count: {}", graphs.len());
                for g in &graphs {
                    println!("{}", compact_graph(g));
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Bench { n, trials } => {
            let report = table1_experiment(*n, p, *trials, seed)?;
            if cli.json {
                println!(
                    "{}",
                    serde_json::json!({
                        "n": report.n,
                        "prime": report.prime.to_string(),
                        "seed": seed,
                        "trials": report.trials,
                        "mean_time_ms": report.mean_time_ms,
                        "false_positives": report.false_positive_count,
                        "theoretical_bound": bound_json_value(&report.theoretical_bound),
                    })
                );
            } else {
                println!("n: {}", report.n);
                println!("prime: {}", report.prime);
                println!("seed: {seed}");
                println!("trials: {}", report.trials);
                println!("mean_time_ms: {:.4}", report.mean_time_ms);
                println!("false_positives: {}", report.false_positive_count);
                println!(
                    "theoretical_bound: {}/{} \u{2248} {}",
                    report.theoretical_bound.numerator(),
                    report.theoretical_bound.denominator(),
                    report.theoretical_bound.decimal_string()
                );
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn effective_repeats(cli: &Cli, single: &Bound) -> Result<usize, Error> {
    match cli.confidence {
        Some(q) => repeats_for_confidence(single, q),
        None => Ok(cli.repeats.max(1)),
    }
}

fn yesno(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

/// Single-line rendering, e.g. "a->b; b<->c" (empty graph: just the nodes).
fn compact_graph(g: &MixedGraph) -> String {
    let mut parts: Vec<String> = g
        .directed_edges()
        .map(|(t, h)| format!("{}->{}", g.name(t), g.name(h)))
        .collect();
    parts.extend(
        g.bidirected_edges()
            .map(|(v, w)| format!("{}<->{}", g.name(v), g.name(w))),
    );
    if parts.is_empty() {
        format!("[{} nodes, no edges]", g.n())
    } else {
        parts.join("; ")
    }
}

fn bound_json_value(b: &Bound) -> serde_json::Value {
    serde_json::json!({
        "numerator": b.numerator().to_string(),
        "denominator": b.denominator().to_string(),
        "decimal": b.decimal_string(),
    })
}

fn bound_json(b: &Bound) -> String {
    bound_json_value(b).to_string()
}

fn emit_decision(cli: &Cli, d: &Decision, g: &MixedGraph) -> Result<ExitCode, Error> {
    let witness = d
        .diagnostics
        .witness_pair
        .map(|(v, w)| (g.name(v).to_string(), g.name(w).to_string()));
    if cli.json {
        println!(
            "{}",
            serde_json::json!({
                "verdict": d.verdict,
                "bound": bound_json_value(&d.error_bound),
                "repeats": d.repeats_used,
                "seed": d.diagnostics.seed,
                "diagnostics": {
                    "witness_pair": witness,
                    "singular_pivot_seen": d.diagnostics.singular_pivot_seen,
                },
            })
        );
    } else {
        println!("verdict: {}", d.verdict);
        println!(
            "bound: {}/{} \u{2248} {}",
            d.error_bound.numerator(),
            d.error_bound.denominator(),
            d.error_bound.decimal_string()
        );
        println!("repeats: {}", d.repeats_used);
        println!("seed: {}", d.diagnostics.seed);
        if let Some((v, w)) = &witness {
            println!("witness_pair: {v} {w}");
        }
        if d.diagnostics.singular_pivot_seen {
            println!("singular_pivot_seen: true");
        }
    }
    Ok(if d.verdict { ExitCode::SUCCESS } else { ExitCode::from(1) })
}
