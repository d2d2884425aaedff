//! `fraclist`: solve, check, export and import instances, and run suites.
//!
//! Exit status: 0 clean, 1 a theorem alarm or suite violation, 2 an input
//! error.

mod commands;

use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(
    name = "fraclist",
    version,
    about = "Fractional list coloring of plane graphs of girth five"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Find an (L:a)-coloring, or report a minimal non-colorable subgraph.
    Solve {
        /// Instance JSON file.
        instance: PathBuf,
        /// Print the result as JSON.
        #[arg(long)]
        json: bool,
        /// Solver budget in milliseconds.
        #[arg(long = "timeout-per-instance")]
        timeout: Option<u64>,
    },
    /// Check a theorem's hypotheses on an instance, then its conclusion.
    Check {
        /// Instance JSON file.
        instance: PathBuf,
        /// One of thm-cyl, cor-distflaws, thm-2flaws, thm-canvas, hypcyl.
        #[arg(long)]
        theorem: String,
        /// Print the clauses and the conclusion as JSON.
        #[arg(long)]
        json: bool,
        /// hypcyl only: report the two inequalities without deciding
        /// criticality.
        #[arg(long)]
        skip_criticality: bool,
    },
    /// Run a verification suite and write `<suite>.json` and `<suite>.csv`.
    Suite(SuiteArgs),
    /// Render an instance as DOT.
    Export {
        /// Instance JSON file.
        instance: PathBuf,
        /// DOT output; the default.
        #[arg(long)]
        dot: bool,
        /// Emit the DOT text and the normalized instance file as one JSON
        /// object.
        #[arg(long)]
        json: bool,
    },
    /// Convert planar code into instance files with uniform lists.
    Import {
        /// Planar code file, with or without the header.
        file: PathBuf,
        #[arg(long, default_value_t = 1)]
        a: usize,
        /// List size; defaults to `3a`.
        #[arg(long)]
        list_size: Option<usize>,
    },
}

#[derive(Args, Debug)]
struct SuiteArgs {
    /// Suite name, for example thm-cyl or reductions.
    name: String,
    /// Largest vertex count enumerated.
    #[arg(long, default_value_t = 7)]
    nmax: usize,
    /// Comma-separated values of `a`.
    #[arg(long, value_delimiter = ',', default_value = "1")]
    a: Vec<usize>,
    /// Palette size; defaults to `5a`.
    #[arg(long)]
    universe: Option<usize>,
    /// Required by the sampling suites.
    #[arg(long)]
    seed: Option<u64>,
    /// Samples drawn per value of `a` by the sampling suites.
    #[arg(long, default_value_t = 10_000)]
    samples: usize,
    /// Worker threads; defaults to FRACLIST_THREADS, then all cores.
    #[arg(long)]
    threads: Option<usize>,
    /// Solver budget in milliseconds; an instance that runs out counts as a violation.
    #[arg(long = "timeout-per-instance")]
    timeout: Option<u64>,
    /// Corrupt the conclusion check to confirm the suite can fail.
    #[arg(long)]
    mutate: bool,
    /// Directory for the result files.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Print the full result as JSON.
    #[arg(long)]
    json: bool,
}

pub enum Outcome {
    Clean,
    Alarm,
}

fn main() -> ExitCode {
    // exit quietly when piped into `head` and friends
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve {
            instance,
            json,
            timeout,
        } => commands::solve(&instance, json, timeout),
        Command::Check {
            instance,
            theorem,
            json,
            skip_criticality,
        } => commands::check(&instance, &theorem, json, skip_criticality),
        Command::Suite(args) => commands::suite(args),
        Command::Export { instance, json, .. } => commands::export(&instance, json),
        Command::Import { file, a, list_size } => commands::import(&file, a, list_size),
    };
    match result {
        Ok(Outcome::Clean) => ExitCode::SUCCESS,
        Ok(Outcome::Alarm) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
