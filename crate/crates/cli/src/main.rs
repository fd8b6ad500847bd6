//! `localmis`: generate graphs, run MIS algorithms, check probability
//! bounds and sweep round counts.
//!
//! Exit codes: 0 success, 1 a check or verification failed, 2 bad usage.

mod bench;
mod check;
mod common;
mod gen;
mod run;
mod verify;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "localmis", version, about = "LOCAL-model MIS simulator")]
struct Cli {
    /// Worker threads for trials and sweep cells (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a graph file.
    Gen(gen::GenArgs),
    /// Run one algorithm on a graph and verify the output.
    Run(run::RunArgs),
    /// Run a checker suite and store its reports.
    Check(check::CheckArgs),
    /// Round counts over a sweep of generated graphs, as CSV.
    Bench(bench::BenchArgs),
    /// Check that a node set is a maximal independent set.
    Verify(verify::VerifyArgs),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            eprintln!("error: --jobs must be positive");
            return ExitCode::from(2);
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .expect("global pool is configured once");
    }
    let result = match &cli.command {
        Command::Gen(a) => gen::cmd_gen(a),
        Command::Run(a) => run::cmd_run(a),
        Command::Check(a) => check::cmd_check(a),
        Command::Bench(a) => bench::cmd_bench(a),
        Command::Verify(a) => verify::cmd_verify(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.code)
        }
    }
}
