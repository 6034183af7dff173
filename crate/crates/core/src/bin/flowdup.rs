use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgAction, Parser, Subcommand};

use flowdup::commands::{cmd_export_dot, cmd_gen, cmd_mine, cmd_stats, CliError};
use flowdup::generator::GenSpec;
use flowdup::report::{AlgorithmName, MiningConfig};

/// Duplicated pattern mining over logic flows.
#[derive(Parser)]
#[command(name = "flowdup", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Mine duplicated patterns from a corpus and write a JSON report.
    Mine {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        output: PathBuf,
        /// Minimum refactor weight of mined graphs and patterns.
        #[arg(long, default_value_t = 5.0)]
        beta: f64,
        /// Fraction of each graph's combined labels put in the inverted index.
        #[arg(long, default_value_t = 1.0)]
        delta: f64,
        /// Time limit per common sub-graph extraction; 0 for none.
        #[arg(long, default_value_t = 10_000)]
        mcs_budget_ms: u64,
        /// Time limit for the whole run; unlimited when omitted.
        #[arg(long)]
        total_budget_s: Option<f64>,
        #[arg(long, value_enum, default_value_t = AlgorithmName::Lazy)]
        algorithm: AlgorithmName,
        /// Simplify graph pairs before extraction.
        #[arg(long, default_value_t = true, action = ArgAction::Set)]
        preprocess: bool,
        /// Merge isomorphic flows before mining.
        #[arg(long, default_value_t = true, action = ArgAction::Set)]
        dedup: bool,
        /// Restrict candidate pairs with the inverted index.
        #[arg(long, default_value_t = true, action = ArgAction::Set)]
        index: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Generate a synthetic corpus with a planted duplicated chain.
    Gen {
        #[arg(long)]
        n_flows: usize,
        /// Nodes of the planted chain.
        #[arg(long, default_value_t = 4)]
        pattern_size: usize,
        /// Flows receiving the chain.
        #[arg(long, default_value_t = 2)]
        hosts: usize,
        /// Filler nodes per flow.
        #[arg(long, default_value_t = 12)]
        padding: usize,
        /// Give each flow its own filler labels.
        #[arg(long, default_value_t = true, action = ArgAction::Set)]
        disjoint: bool,
        /// Trailing flows that copy earlier flows without the chain.
        #[arg(long, default_value_t = 0)]
        copies: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        output: PathBuf,
        /// Also write where the chain was planted.
        #[arg(long)]
        manifest: Option<PathBuf>,
    },
    /// Print corpus size before and after input filtering.
    Stats {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long, default_value_t = 5.0)]
        beta: f64,
    },
    /// Render every pattern occurrence of a report as a DOT file.
    ExportDot {
        #[arg(long)]
        report: PathBuf,
        /// Corpus the report was mined from.
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        out_dir: PathBuf,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Mine {
            corpus,
            output,
            beta,
            delta,
            mcs_budget_ms,
            total_budget_s,
            algorithm,
            preprocess,
            dedup,
            index,
            seed,
        } => {
            let config =
                MiningConfig { beta, delta, mcs_budget_ms, total_budget_s, algorithm, preprocess, dedup, index, seed };
            let report = cmd_mine(&config, &corpus, &output)?;
            eprintln!(
                "{} pattern(s), duplicated weight {}{}",
                report.patterns.len(),
                report.metrics.duplicated_weight,
                if report.budget_exhausted { " (budget exhausted)" } else { "" }
            );
        }
        Command::Gen { n_flows, pattern_size, hosts, padding, disjoint, copies, seed, output, manifest } => {
            let spec = GenSpec { n_flows, pattern_size, hosts, padding, disjoint, copies, seed };
            cmd_gen(&spec, &output, manifest.as_deref())?;
        }
        Command::Stats { corpus, beta } => {
            let s = cmd_stats(&corpus, beta)?;
            println!("flows: {}", s.flows);
            println!("nodes: {}", s.nodes);
            println!("flows considered: {}", s.flows_considered);
            println!("nodes considered: {}", s.nodes_considered);
        }
        Command::ExportDot { report, corpus, out_dir } => {
            for path in cmd_export_dot(&report, &corpus, &out_dir)? {
                println!("{}", path.display());
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("flowdup: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
