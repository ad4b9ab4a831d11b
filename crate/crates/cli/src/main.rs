//! `maxoid`: command-line front end. Every subcommand prints one JSON
//! document on standard output (or a plain-text rendering with `--pretty`).
//! Failures print `{"error": {...}}` and exit nonzero.

mod commands;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

#[derive(Parser, Debug)]
#[command(name = "maxoid", version, about = "Maxoids of max-linear Bayesian networks")]
struct Cli {
    /// Human-readable text instead of JSON.
    #[arg(long, global = true)]
    pretty: bool,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// C*-separation statements of a weighted DAG.
    Maxoid(WeightedInput),
    /// Kleene star and genericity of a weighted DAG.
    Kleene(WeightedInput),
    /// Maximal cones of the maxoid fan of a DAG.
    Fan {
        dag: PathBuf,
    },
    /// Vertices, f-vector and faces of the maxoid polytope.
    Polytope {
        dag: PathBuf,
        /// Print the face lattice Hasse diagram in DOT instead.
        #[arg(long)]
        dot: bool,
        /// Skip computing a maxoid for every face.
        #[arg(long)]
        no_face_maxoids: bool,
    },
    /// Distinct maxoids over all TDAGs on n nodes.
    Census {
        #[arg(long)]
        nodes: usize,
        /// Count generic maxoids only.
        #[arg(long)]
        generic_only: bool,
        /// Allow n >= 6 (very long running).
        #[arg(long)]
        unbounded: bool,
        /// Include every maxoid in the output.
        #[arg(long)]
        dump: bool,
    },
    /// Decide a CI implication "premises => conclusions".
    Implies(ImpliesArgs),
    /// Check closure rules on a maxoid.
    Axioms(AxiomsArgs),
    /// List the TDAGs on n nodes.
    Tdags {
        #[arg(long)]
        nodes: usize,
        /// Print DOT graphs instead of JSON.
        #[arg(long)]
        dot: bool,
    },
}

#[derive(Args, Debug)]
struct WeightedInput {
    dag: PathBuf,
    weights: PathBuf,
}

#[derive(Args, Debug)]
struct ImpliesArgs {
    query: String,
    /// Local query on this DAG.
    #[arg(long, conflicts_with = "nodes", required_unless_present = "nodes")]
    graph: Option<PathBuf>,
    /// Global query over labeled DAGs on this many nodes.
    #[arg(long)]
    nodes: Option<usize>,
    /// Restrict to generic weight matrices.
    #[arg(long)]
    generic: bool,
    /// Global search over all DAGs.
    #[arg(long, conflicts_with = "posets")]
    all_dags: bool,
    /// Global search over transitively closed DAGs only.
    #[arg(long)]
    posets: bool,
}

#[derive(Args, Debug)]
struct AxiomsArgs {
    dag: Option<PathBuf>,
    weights: Option<PathBuf>,
    /// Check a maxoid JSON file instead of computing one.
    #[arg(long, conflicts_with_all = ["dag", "weights"])]
    maxoid: Option<PathBuf>,
    /// Ground set size for --maxoid (default: largest node mentioned).
    #[arg(long, requires = "maxoid")]
    nodes: Option<usize>,
    /// Also check the set-level graphoid rules directly.
    #[arg(long)]
    set_level: bool,
    /// Raise the node bound for exhaustive checks.
    #[arg(long)]
    max_nodes: Option<usize>,
}

fn error_json(kind: &str, message: &str) -> String {
    json!({ "error": { "kind": kind, "message": message } }).to_string()
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            println!("{}", error_json("usage", e.to_string().trim()));
            return ExitCode::from(2);
        }
    };
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
            println!("{}", error_json("usage", &e.to_string()));
            return ExitCode::from(2);
        }
    }
    match commands::run(&cli.command, cli.pretty) {
        Ok(out) => {
            println!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            println!("{}", error_json(e.kind(), &e.to_string()));
            ExitCode::from(1)
        }
    }
}
