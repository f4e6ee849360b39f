//! Command-line front end: analyze point sets, build verified constructions,
//! run the bound suites, prune near-collinear classes, and print the
//! dimension trade-off table.
//!
//! Exit codes: 0 ok, 1 property violation, 2 usage or file format,
//! 3 duplicate points, 4 filtering shortfall, 5 epsilon budget exhausted,
//! 6 betweenness inconsistency.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use dnormal::bounds::{bad_prob_report, perp_ratio_report, perp_triple_count_enumerated};
use dnormal::construct::{
    k_prime_lower_bound, lift, simplex_seed, subset_seed, subset_seed_with_m, ConstructError,
};
use dnormal::io::{write_edges_tsv, PointSetFile};
use dnormal::prune::{gen_near_collinear, prune, verify_witness, PruneError};
use dnormal::suites::{
    run_four_pair_suite, run_ipr_suite, run_one_pair_suite, run_two_pair_suite, SuiteSummary,
};
use dnormal::{
    count_summary, double_normal_graph, verify_complete_multipartite, PairError, Tolerance,
};

const EXIT_VIOLATION: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_DUPLICATE: u8 = 3;
const EXIT_SHORTFALL: u8 = 4;
const EXIT_EPS_BUDGET: u8 = 5;
const EXIT_BETWEENNESS: u8 = 6;

#[derive(Parser)]
#[command(name = "dnormal", version, about = "Double-normal pair graph toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify all pairs of a point-set file and print the counts.
    Analyze(AnalyzeArgs),
    /// Build a verified multipartite construction and write it to a file.
    Construct(ConstructArgs),
    /// Run the bound verification suites.
    Lemmas(LemmasArgs),
    /// Prune a classed near-collinear file and emit the triple witness.
    Prune(PruneArgs),
    /// Print the lower-bound table for the number of classes per dimension.
    Bound(BoundArgs),
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Point-set JSON file.
    input: PathBuf,
    /// Floating comparison margin (relative to the squared pair length).
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Exact integer arithmetic (requires integer coordinates).
    #[arg(long)]
    exact: bool,
    /// Write the classified edge list as TSV.
    #[arg(long)]
    edges_out: Option<PathBuf>,
}

#[derive(Args)]
struct ConstructArgs {
    /// Construction kind: "simplex" or "subsets".
    kind: String,
    /// Number of classes (simplex: required; subsets: overrides the size
    /// formula).
    #[arg(long)]
    m: Option<usize>,
    /// Ground-set dimension for the subsets kind (4..=64).
    #[arg(long)]
    d: Option<u32>,
    /// Points per class.
    #[arg(long)]
    n_per_class: usize,
    /// Seed for the random subset draw.
    #[arg(long, default_value_t = 0)]
    rng_seed: u64,
    /// Output point-set JSON path.
    #[arg(long)]
    out: PathBuf,
    /// Floating comparison margin used by the final verification.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
}

#[derive(Args)]
struct LemmasArgs {
    /// Suite: "ipr", "dn", "perp", "condprob", or "all".
    suite: String,
    /// Random instances per randomized suite.
    #[arg(long, default_value_t = 100_000)]
    trials: usize,
    /// Largest ground-set dimension for the exact suites.
    #[arg(long, default_value_t = 0)]
    dmax: u32,
    #[arg(long, default_value_t = 1)]
    rng_seed: u64,
}

#[derive(Args)]
struct PruneArgs {
    /// Classed point-set JSON file (omit when --gen-k is given).
    input: Option<PathBuf>,
    /// Chord-angle bound, below pi/3.
    #[arg(long)]
    eps: f64,
    /// Generate this many synthetic classes instead of reading a file.
    #[arg(long)]
    gen_k: Option<usize>,
    #[arg(long, default_value_t = 7)]
    rng_seed: u64,
    /// Write the generated input here (only with --gen-k).
    #[arg(long)]
    save_input: Option<PathBuf>,
    /// Write the witness JSON here instead of stdout.
    #[arg(long)]
    witness_out: Option<PathBuf>,
}

#[derive(Args)]
struct BoundArgs {
    /// Single dimension to report.
    #[arg(long)]
    d: Option<u64>,
    /// Table up to this dimension.
    #[arg(long, default_value_t = 64)]
    dmax: u64,
}

fn main() -> ExitCode {
    configure_threads();
    let cli = Cli::parse();
    let start = Instant::now();
    let code = match cli.command {
        Command::Analyze(args) => cmd_analyze(args),
        Command::Construct(args) => cmd_construct(args),
        Command::Lemmas(args) => cmd_lemmas(args),
        Command::Prune(args) => cmd_prune(args),
        Command::Bound(args) => cmd_bound(args),
    };
    // Wall time goes to stderr so stdout stays deterministic.
    eprintln!("wall_ms: {}", start.elapsed().as_millis());
    ExitCode::from(code)
}

/// NP_THREADS caps the worker pool; 0 or unset means automatic.
fn configure_threads() {
    if let Ok(value) = std::env::var("NP_THREADS") {
        if let Ok(n) = value.trim().parse::<usize>() {
            if n > 0 {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
        }
    }
}

fn usage(msg: &str) -> u8 {
    eprintln!("error: {msg}");
    EXIT_USAGE
}

fn tolerance(exact: bool, margin: f64) -> Tolerance {
    if exact {
        Tolerance::exact()
    } else {
        Tolerance::floating(margin)
    }
}

fn pair_error_code(e: &PairError) -> u8 {
    match e {
        PairError::DuplicatePoints { .. } => EXIT_DUPLICATE,
        _ => EXIT_USAGE,
    }
}

fn cmd_analyze(args: AnalyzeArgs) -> u8 {
    let file = match PointSetFile::load(&args.input) {
        Ok(f) => f,
        Err(e) => return usage(&format!("{e}")),
    };
    let set = match file.to_point_set() {
        Ok(s) => s,
        Err(e) => return usage(&format!("{e}")),
    };
    let tol = tolerance(args.exact, args.tol);
    let summary = match count_summary(&set, &tol) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return pair_error_code(&e);
        }
    };
    if let Some(path) = &args.edges_out {
        let graph = match double_normal_graph(&set, &tol) {
            Ok(g) => g,
            Err(e) => {
                eprintln!("error: {e}");
                return pair_error_code(&e);
            }
        };
        if let Err(e) = write_edges_tsv(path, &graph) {
            return usage(&format!("writing edges: {e}"));
        }
    }
    println!("n: {}", summary.n);
    println!("double_normal_pairs: {}", summary.n_pairs);
    println!("strict_pairs: {}", summary.n_strict);
    println!("diameter_pairs: {}", summary.diameter_pairs);
    println!("density_ratio: {}", summary.density_ratio);
    let curve: Vec<String> = summary
        .turan_k_curve
        .iter()
        .enumerate()
        .map(|(i, v)| format!("k={}: {v}", i + 1))
        .collect();
    println!("turan_reference_curve: {}", curve.join(", "));
    let report = serde_json::json!({
        "command": "analyze",
        "input": args.input,
        "tolerance": tolerance_json(&tol),
        "n": summary.n,
        "double_normal_pairs": summary.n_pairs,
        "strict_pairs": summary.n_strict,
        "diameter_pairs": summary.diameter_pairs,
        "density_ratio": summary.density_ratio,
        "turan_k_curve": summary.turan_k_curve,
    });
    println!("REPORT {report}");
    0
}

fn tolerance_json(tol: &Tolerance) -> serde_json::Value {
    serde_json::json!({
        "mode": if tol.is_exact() { "exact-integer" } else { "floating" },
        "eq_margin": tol.eq_margin,
        "scale_relative": tol.scale_relative,
    })
}

fn construct_error_code(e: &ConstructError) -> u8 {
    match e {
        ConstructError::EpsBudgetExhausted { .. } => EXIT_EPS_BUDGET,
        ConstructError::Pair(pe) => pair_error_code(pe),
        _ => EXIT_USAGE,
    }
}

fn cmd_construct(args: ConstructArgs) -> u8 {
    if args.n_per_class == 0 {
        return usage("--n-per-class must be at least 1");
    }
    let tol = Tolerance::floating(args.tol);
    let (seed, provenance) = match args.kind.as_str() {
        "simplex" => {
            let m = match args.m {
                Some(m) if m >= 2 => m,
                Some(m) => return usage(&format!("--m must be at least 2, got {m}")),
                None => return usage("simplex requires --m"),
            };
            let seed = match simplex_seed(m) {
                Ok(s) => s,
                Err(e) => return usage(&format!("{e}")),
            };
            (seed, serde_json::json!({"kind": "simplex", "m": m}))
        }
        "subsets" => {
            let d = match args.d {
                Some(d) => d,
                None => return usage("subsets requires --d"),
            };
            let outcome = match args.m {
                Some(m) => subset_seed_with_m(d, m, args.rng_seed),
                None => subset_seed(d, args.rng_seed),
            };
            let outcome = match outcome {
                Ok(o) => o,
                Err(e) => return usage(&format!("{e}")),
            };
            let survivors = outcome.survivors.sets.len();
            match outcome.seed {
                Some(seed) => {
                    let prov = serde_json::json!({
                        "kind": "subsets",
                        "d": d,
                        "rng_seed": args.rng_seed,
                        "m_target": outcome.target_m,
                        "survivors": survivors,
                        "bad_triples": outcome.bad_triples.len(),
                    });
                    (seed, prov)
                }
                None => {
                    eprintln!(
                        "error: only {survivors} of {} subsets survived bad-triple \
                         filtering (need {}); retry with a different --rng-seed",
                        outcome.family.sets.len(),
                        outcome.target_m
                    );
                    return EXIT_SHORTFALL;
                }
            }
        }
        other => return usage(&format!("unknown construction kind '{other}'")),
    };

    let outcome = match lift(&seed, args.n_per_class, &tol) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return construct_error_code(&e);
        }
    };
    // The lift verified itself; re-run the check on the exact data written.
    let verified = verify_complete_multipartite(&outcome.points, &outcome.classes, true, &tol);
    match verified {
        Ok(report) if report.ok => {}
        Ok(_) => {
            eprintln!("error: construction failed its final verification");
            return EXIT_VIOLATION;
        }
        Err(e) => {
            eprintln!("error: {e}");
            return pair_error_code(&e);
        }
    }

    let mut file = PointSetFile::from_point_set(&outcome.points);
    file.classes = Some(outcome.classes.clone());
    let mut prov = provenance;
    prov["eps"] = serde_json::json!(outcome.state.eps);
    prov["halvings"] = serde_json::json!(outcome.state.halvings);
    prov["radii"] =
        serde_json::json!(outcome.state.classes.iter().map(|c| c.radius).collect::<Vec<_>>());
    prov["n_per_class"] = serde_json::json!(args.n_per_class);
    file.provenance = Some(prov);
    if let Err(e) = file.save_atomic(&args.out) {
        return usage(&format!("writing output: {e}"));
    }
    let report = serde_json::json!({
        "command": "construct",
        "kind": args.kind,
        "out": args.out,
        "n": outcome.points.len(),
        "dim": outcome.points.dim(),
        "classes": outcome.classes.len(),
        "n_per_class": args.n_per_class,
        "eps": outcome.state.eps,
        "halvings": outcome.state.halvings,
        "tolerance": tolerance_json(&tol),
        "verified_strict_multipartite": true,
    });
    println!("REPORT {report}");
    0
}

fn suite_record(s: &SuiteSummary) -> serde_json::Value {
    let (lhs, bound, context) = match &s.worst {
        Some(w) => (w.lhs, w.bound, w.context.clone()),
        None => (f64::NAN, f64::NAN, String::new()),
    };
    serde_json::json!({
        "lemma": s.name,
        "lhs": lhs,
        "bound": bound,
        "holds": s.violations == 0,
        "context": format!(
            "accepted={}, vacuous={}, violations={}, worst_ratio={:.6}; {}",
            s.accepted, s.vacuous, s.violations, s.worst_ratio, context
        ),
    })
}

fn cmd_lemmas(args: LemmasArgs) -> u8 {
    let mut ok = true;
    let mut ran_any = false;
    let mut summaries: Vec<SuiteSummary> = Vec::new();

    let suite = args.suite.as_str();
    if !["ipr", "dn", "perp", "condprob", "all"].contains(&suite) {
        return usage(&format!("unknown suite '{suite}'"));
    }

    if suite == "ipr" || suite == "all" {
        summaries.push(run_ipr_suite(args.trials, args.rng_seed));
    }
    if suite == "dn" || suite == "all" {
        summaries.push(run_one_pair_suite(args.trials, args.rng_seed));
        summaries.push(run_two_pair_suite(args.trials, args.rng_seed));
        summaries.push(run_four_pair_suite(args.trials, args.rng_seed));
    }
    for s in &summaries {
        ran_any = true;
        ok &= s.ok();
        println!(
            "{}: accepted {} / vacuous {} / violations {}",
            s.name, s.accepted, s.vacuous, s.violations
        );
        println!("RECORD {}", suite_record(s));
    }

    if suite == "perp" || suite == "all" {
        ran_any = true;
        let dmax = if args.dmax == 0 { 64 } else { args.dmax.min(64) };
        let mut all_match = true;
        let mut last = None;
        for d in 1..=dmax {
            let report = perp_ratio_report(d).expect("d in range");
            all_match &= report.holds;
            if d <= 5 {
                let count = perp_triple_count_enumerated(d).expect("d in range");
                println!("perp d={d}: enumerated {count} ordered triples, ratio (3/4)^{d}");
            }
            last = Some(report);
        }
        ok &= all_match;
        println!("perp: exact ratio matches (3/4)^d for d <= {dmax}: {all_match}");
        if let Some(report) = last {
            let record = serde_json::json!({
                "lemma": report.lemma,
                "lhs": report.lhs,
                "bound": report.bound,
                "holds": all_match,
                "context": format!("exact rational equality for d <= {dmax}"),
            });
            println!("RECORD {record}");
        }
    }

    if suite == "condprob" || suite == "all" {
        ran_any = true;
        let dmax = if args.dmax == 0 { 200 } else { args.dmax as usize };
        let mut all_hold = true;
        let mut last = None;
        for d in 1..=dmax {
            let report = bad_prob_report(d).expect("d >= 1");
            all_hold &= report.holds;
            if d <= 10 || d % 50 == 0 || d == dmax {
                println!(
                    "condprob d={d}: P(X>=0) = {:.6e} vs (65/72)^d = {:.6e}",
                    report.lhs, report.bound
                );
            }
            last = Some(report);
        }
        ok &= all_hold;
        if let Some(report) = last {
            let record = serde_json::json!({
                "lemma": report.lemma,
                "lhs": report.lhs,
                "bound": report.bound,
                "holds": all_hold,
                "context": format!("exact comparison for d <= {dmax}; last: {}", report.context),
            });
            println!("RECORD {record}");
        }
    }

    if !ran_any {
        return usage("no suite selected");
    }
    if ok {
        0
    } else {
        EXIT_VIOLATION
    }
}

fn prune_error_code(e: &PruneError) -> u8 {
    match e {
        PruneError::BetweennessInconsistent { .. } => EXIT_BETWEENNESS,
        PruneError::WitnessInvalid(_) => EXIT_VIOLATION,
        _ => EXIT_USAGE,
    }
}

fn cmd_prune(args: PruneArgs) -> u8 {
    if !(args.eps > 0.0 && args.eps < std::f64::consts::FRAC_PI_3) {
        return usage(&format!("--eps {} must lie in (0, pi/3)", args.eps));
    }
    let classes = match (&args.input, args.gen_k) {
        (Some(_), Some(_)) => return usage("pass either an input file or --gen-k, not both"),
        (None, None) => return usage("pass an input file or --gen-k"),
        (None, Some(k)) => {
            let classes = match gen_near_collinear(k, args.eps, args.rng_seed) {
                Ok(c) => c,
                Err(e) => return usage(&format!("{e}")),
            };
            if let Some(path) = &args.save_input {
                let mut points = Vec::new();
                let mut class_indices = Vec::new();
                for class in &classes {
                    let start = points.len();
                    points.extend(class.points.iter().map(|p| p.coords.clone()));
                    class_indices.push((start..points.len()).collect::<Vec<_>>());
                }
                let mut file = PointSetFile::new(2, points);
                file.classes = Some(class_indices);
                file.provenance = Some(serde_json::json!({
                    "kind": "near-collinear-generator",
                    "k": k,
                    "eps": args.eps,
                    "rng_seed": args.rng_seed,
                }));
                if let Err(e) = file.save_atomic(path) {
                    return usage(&format!("writing input: {e}"));
                }
            }
            classes
        }
        (Some(path), None) => {
            let file = match PointSetFile::load(path) {
                Ok(f) => f,
                Err(e) => return usage(&format!("{e}")),
            };
            let class_lists = match &file.classes {
                Some(c) if !c.is_empty() => c.clone(),
                _ => return usage("input file must carry a non-empty 'classes' field"),
            };
            class_lists
                .iter()
                .map(|indices| dnormal::prune::NearCollinearClass {
                    points: indices
                        .iter()
                        .map(|&i| dnormal::Point::new(file.points[i].clone()))
                        .collect(),
                    eps: args.eps,
                })
                .collect()
        }
    };

    let witness = match prune(&classes, args.eps) {
        Ok(w) => w,
        Err(e) => {
            eprintln!("error: {e}");
            return prune_error_code(&e);
        }
    };
    if let Err(e) = verify_witness(&classes, &witness) {
        eprintln!("error: {e}");
        return EXIT_VIOLATION;
    }
    let witness_json = serde_json::json!({
        "eps": witness.eps,
        "t": witness.t,
        "sizes_history": witness.sizes_history,
        "classes": witness.classes.iter().map(|c| serde_json::json!({
            "position": c.position,
            "source_class": c.source_class,
            "a": c.a,
            "b": c.b,
            "c": c.c,
            "kept": c.kept,
        })).collect::<Vec<_>>(),
    });
    let text = serde_json::to_string_pretty(&witness_json).expect("serializable");
    match &args.witness_out {
        Some(path) => {
            if let Err(e) = dnormal::io::write_atomic(path, text.as_bytes()) {
                return usage(&format!("writing witness: {e}"));
            }
            println!("REPORT {}", serde_json::json!({
                "command": "prune",
                "classes": witness.classes.len(),
                "t": witness.t,
                "witness_out": path,
                "verified": true,
            }));
        }
        None => println!("{text}"),
    }
    0
}

fn cmd_bound(args: BoundArgs) -> u8 {
    let ds: Vec<u64> = match args.d {
        Some(d) => vec![d],
        None => (3..=args.dmax).collect(),
    };
    println!("d\tn\tbound(d-n-1)\tclosed_form(d-20ln(4d)-1)\tapplicable");
    let mut consistent = true;
    for d in ds {
        let b = k_prime_lower_bound(d);
        consistent &= (b.bound as f64) > b.closed_form;
        println!(
            "{}\t{}\t{}\t{:.3}\t{}",
            b.d, b.n, b.bound, b.closed_form, b.applicable
        );
    }
    if !consistent {
        eprintln!("error: closed-form comparison failed");
        return EXIT_VIOLATION;
    }
    0
}
