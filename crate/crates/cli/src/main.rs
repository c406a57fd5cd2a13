//! Command-line front end: build structures, verify them against the
//! brute-force oracle, generate hard instances, and sweep the tradeoff knob.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or input error,
//! 3 internal invariant failure.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::panic;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ftbfs_core::construction::{
    baseline_structure, build_structure_with, BuildOptions, StructureFile,
};
use ftbfs_core::graph::Graph;
use ftbfs_core::lowerbound::{gen_multi_source, gen_single_source, LowerBoundInstance};
use ftbfs_core::verify::{verify_structure_with, VerifyOptions};

const EXIT_OK: u8 = 0;
const EXIT_VERIFY_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_INTERNAL: u8 = 3;

#[derive(Parser)]
#[command(
    name = "ftbfs",
    about = "Fault-tolerant BFS structures with a backup/reinforcement split",
    version
)]
struct Cli {
    /// Cap worker threads (default: available parallelism).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a structure for a graph, source and epsilon.
    Build(BuildArgs),
    /// Verify a structure file against its graph.
    Verify(VerifyArgs),
    /// Generate a hard instance (graph file plus a labels sidecar).
    GenLb(GenLbArgs),
    /// Build and verify across a list of epsilons, reporting the tradeoff.
    Sweep(SweepArgs),
}

#[derive(Args)]
struct BuildArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    source: usize,
    /// Tradeoff knob in (0, 1]; defaults to 1.0 under --baseline.
    #[arg(long, required_unless_present = "baseline")]
    epsilon: Option<f64>,
    /// Use the quadratic-budget baseline construction.
    #[arg(long)]
    baseline: bool,
    /// Run the epsilon machinery even where the baseline would do.
    #[arg(long)]
    force_eps_machinery: bool,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    structure: PathBuf,
    /// Comma-separated source list; defaults to the structure's source.
    #[arg(long, value_delimiter = ',')]
    sources: Option<Vec<usize>>,
    /// Verify only this fraction of failures (partial check).
    #[arg(long)]
    sample: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct GenLbArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    epsilon: f64,
    /// Source count; more than one selects the multi-source family.
    #[arg(long, default_value_t = 1)]
    sources: usize,
    /// Output prefix: writes <prefix>.gr and <prefix>.lb.json.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    source: usize,
    /// Comma-separated epsilon list.
    #[arg(long, value_delimiter = ',', required = true)]
    epsilons: Vec<f64>,
    /// Unit cost of a backup edge.
    #[arg(long = "costB", default_value_t = 1.0)]
    cost_b: f64,
    /// Unit cost of a reinforced edge.
    #[arg(long = "costR", default_value_t = 1.0)]
    cost_r: f64,
    #[arg(long)]
    csv: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if let Err(err) = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
        {
            eprintln!("error: could not configure {threads} threads: {err}");
            return ExitCode::from(EXIT_USAGE);
        }
    }
    // Failed internal invariants panic; report them as their own exit code.
    let outcome = panic::catch_unwind(|| match cli.command {
        Command::Build(args) => cmd_build(args),
        Command::Verify(args) => cmd_verify(args),
        Command::GenLb(args) => cmd_gen_lb(args),
        Command::Sweep(args) => cmd_sweep(args),
    });
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(_) => {
            eprintln!("error: internal invariant failure");
            ExitCode::from(EXIT_INTERNAL)
        }
    }
}

fn read_graph(path: &PathBuf) -> Result<Graph, u8> {
    let text = fs::read_to_string(path).map_err(|err| {
        eprintln!("error: cannot read {}: {err}", path.display());
        EXIT_USAGE
    })?;
    Graph::parse(&text).map_err(|err| {
        eprintln!("error: {}: {err}", path.display());
        EXIT_USAGE
    })
}

fn cmd_build(args: BuildArgs) -> u8 {
    let g = match read_graph(&args.graph) {
        Ok(g) => g,
        Err(code) => return code,
    };
    let epsilon = args.epsilon.unwrap_or(1.0);
    let opts = BuildOptions {
        force_eps_machinery: args.force_eps_machinery,
        ..Default::default()
    };

    let built = if args.baseline {
        baseline_structure(&g, args.source, epsilon)
    } else {
        build_structure_with(&g, args.source, epsilon, &opts)
    };
    let built = match built {
        Ok(built) => built,
        Err(err) => {
            eprintln!("error: {err}");
            return EXIT_USAGE;
        }
    };

    if let Err(err) = fs::write(&args.out, built.to_json(&g)) {
        eprintln!("error: cannot write {}: {err}", args.out.display());
        return EXIT_USAGE;
    }
    eprintln!(
        "built in {} ms (k_eps={}, s1+{}, s2+{})",
        built.stats.wall_ms, built.stats.k_eps, built.stats.phase_s1_added, built.stats.phase_s2_added
    );
    println!("b={} r={}", built.stats.b, built.stats.r);
    EXIT_OK
}

fn cmd_verify(args: VerifyArgs) -> u8 {
    let g = match read_graph(&args.graph) {
        Ok(g) => g,
        Err(code) => return code,
    };
    let text = match fs::read_to_string(&args.structure) {
        Ok(t) => t,
        Err(err) => {
            eprintln!("error: cannot read {}: {err}", args.structure.display());
            return EXIT_USAGE;
        }
    };
    let file: StructureFile = match serde_json::from_str(&text) {
        Ok(f) => f,
        Err(err) => {
            eprintln!("error: {}: {err}", args.structure.display());
            return EXIT_USAGE;
        }
    };
    let (backup, reinforced) = match file.resolve(&g) {
        Ok(sets) => sets,
        Err(err) => {
            eprintln!("error: {err}");
            return EXIT_USAGE;
        }
    };
    let h: BTreeSet<usize> = backup.union(&reinforced).copied().collect();
    let sources = args.sources.unwrap_or_else(|| vec![file.source]);
    let opts = VerifyOptions {
        sample: args.sample,
        seed: args.seed,
    };
    let report = match verify_structure_with(&g, &sources, &h, &reinforced, &opts) {
        Ok(rep) => rep,
        Err(err) => {
            eprintln!("error: {err}");
            return EXIT_USAGE;
        }
    };
    if report.partial {
        println!(
            "PARTIAL verification: sampled {} of {} candidate failures",
            report.edges_checked,
            g.m() - reinforced.len()
        );
    }
    for v in &report.violations {
        println!("{}", serde_json::to_string(v).expect("violations serialize"));
    }
    println!(
        "{{\"edges_checked\": {}, \"elapsed_ms\": {}, \"ok\": {}, \"partial\": {}, \"violations\": {}}}",
        report.edges_checked,
        report.elapsed_ms,
        report.ok,
        report.partial,
        report.violations.len()
    );
    if report.ok {
        EXIT_OK
    } else {
        EXIT_VERIFY_FAILED
    }
}

fn cmd_gen_lb(args: GenLbArgs) -> u8 {
    if args.sources == 0 {
        eprintln!("error: source count must be at least 1");
        return EXIT_USAGE;
    }
    let instance: Result<LowerBoundInstance, _> = if args.sources == 1 {
        gen_single_source(args.n, args.epsilon)
    } else {
        gen_multi_source(args.n, args.sources, args.epsilon)
    };
    let instance = match instance {
        Ok(inst) => inst,
        Err(err) => {
            eprintln!("error: {err}");
            return EXIT_USAGE;
        }
    };
    let graph_path = args.out.with_extension("gr");
    let sidecar_path = args.out.with_extension("lb.json");
    for (path, contents) in [
        (&graph_path, instance.graph_file()),
        (&sidecar_path, instance.sidecar_json()),
    ] {
        if let Err(err) = fs::write(path, contents) {
            eprintln!("error: cannot write {}: {err}", path.display());
            return EXIT_USAGE;
        }
    }
    eprintln!(
        "wrote {} and {}",
        graph_path.display(),
        sidecar_path.display()
    );
    println!("{}", instance.summary());
    EXIT_OK
}

fn cmd_sweep(args: SweepArgs) -> u8 {
    if args.epsilons.is_empty() {
        eprintln!("error: empty epsilon list");
        return EXIT_USAGE;
    }
    let g = match read_graph(&args.graph) {
        Ok(g) => g,
        Err(code) => return code,
    };
    let mut csv = String::from("epsilon,b,r,k_eps,wall_ms,cost\n");
    for &epsilon in &args.epsilons {
        let built = match build_structure_with(&g, args.source, epsilon, &BuildOptions::default())
        {
            Ok(b) => b,
            Err(err) => {
                eprintln!("error: {err}");
                return EXIT_USAGE;
            }
        };
        let h = built.structure_edges();
        let report = match verify_structure_with(
            &g,
            &[args.source],
            &h,
            &built.reinforced_edges,
            &VerifyOptions::default(),
        ) {
            Ok(rep) => rep,
            Err(err) => {
                eprintln!("error: {err}");
                return EXIT_USAGE;
            }
        };
        if !report.ok {
            eprintln!(
                "error: construction at epsilon {epsilon} failed verification with {} violations",
                report.violations.len()
            );
            return EXIT_INTERNAL;
        }
        let cost = args.cost_b * built.stats.b as f64 + args.cost_r * built.stats.r as f64;
        let _ = writeln!(
            csv,
            "{},{},{},{},0,{}",
            epsilon, built.stats.b, built.stats.r, built.stats.k_eps, cost
        );
        let ln_n = (g.n().max(2) as f64).ln();
        let eps_prime = epsilon + (ln_n / epsilon).ln() / ln_n;
        eprintln!(
            "eps={epsilon}: b={} r={} (verified in {} ms; eps'={eps_prime:.3})",
            built.stats.b, built.stats.r, report.elapsed_ms
        );
    }
    if args.cost_b != args.cost_r {
        // Informational balance point for the supplied unit costs.
        let ratio: f64 = args.cost_r / args.cost_b;
        if ratio > 0.0 && g.n() > 2 {
            let eps_star = (ratio.ln() / (g.n() as f64).ln()).clamp(0.0, 1.0);
            eprintln!("note: cost-balance epsilon for R/B={ratio} is about {eps_star:.3}");
        }
    }
    if let Err(err) = fs::write(&args.csv, csv) {
        eprintln!("error: cannot write {}: {err}", args.csv.display());
        return EXIT_USAGE;
    }
    EXIT_OK
}
