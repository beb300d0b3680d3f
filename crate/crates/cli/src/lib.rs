pub mod commands;
pub mod io;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};

use commands::{Family, Flags, GenerateParams, Outcome, Status};
use io::read_graph_file;

#[derive(Debug, Parser)]
#[command(
    name = "ehf",
    version,
    about = "Decompose, color and rank-decompose even-hole-free graphs with no star cutset"
)]
pub struct Cli {
    /// Run every internal audit on the results.
    #[arg(long, global = true)]
    pub verify: bool,
    /// Cross-check against exact oracles, within the budgets set by EHF_ORACLE_BUDGET.
    #[arg(long, global = true)]
    pub oracle: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the detectors and report class membership.
    Check { file: PathBuf },
    /// Nice elimination order and greedy coloring.
    Color { file: PathBuf },
    /// Rank-decomposition with per-edge widths.
    Rankdec {
        file: PathBuf,
        /// Also write the decomposition as Graphviz text.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Decomposition tree of extreme 2-joins.
    Decompose { file: PathBuf },
    /// Write generated graphs as edge lists with name tables.
    Generate(GenerateArgs),
    /// Run one verb over many files in parallel.
    Batch {
        verb: BatchVerb,
        files: Vec<PathBuf>,
        /// Worker threads; 0 picks one per core.
        #[arg(long, default_value_t = 0)]
        jobs: usize,
    },
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    pub family: Family,
    #[arg(long)]
    pub k: Option<usize>,
    /// Path lengths of a pyramid, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub lengths: Vec<usize>,
    #[arg(long, default_value_t = 3)]
    pub branches: usize,
    #[arg(long, default_value_t = 10)]
    pub count: usize,
    #[arg(long, default_value_t = 15)]
    pub min: usize,
    #[arg(long, default_value_t = 60)]
    pub max: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, short)]
    pub out: PathBuf,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum BatchVerb {
    Check,
    Color,
    Rankdec,
    Decompose,
}

fn run_file(verb: BatchVerb, file: &std::path::Path, flags: Flags) -> anyhow::Result<Outcome> {
    let f = read_graph_file(file)?;
    match verb {
        BatchVerb::Check => commands::check(&f, flags),
        BatchVerb::Color => commands::color(&f, flags),
        BatchVerb::Rankdec => commands::rankdec(&f, flags, None),
        BatchVerb::Decompose => commands::decompose(&f, flags),
    }
}

fn batch(verb: BatchVerb, files: &[PathBuf], jobs: usize, flags: Flags) -> anyhow::Result<Outcome> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build()?;
    let results: Vec<(Value, i32)> = pool.install(|| {
        files
            .par_iter()
            .map(|file| match run_file(verb, file, flags) {
                Ok(o) => (
                    json!({ "file": file, "status": o.status, "report": o.report }),
                    o.status.code(),
                ),
                Err(e) => (
                    json!({ "file": file, "status": "error", "error": format!("{e:#}") }),
                    1,
                ),
            })
            .collect()
    });
    let errors = results.iter().filter(|r| r.1 == 1).count();
    let out_of_class = results.iter().filter(|r| r.1 == 2).count();
    let status = if out_of_class > 0 {
        Status::OutOfClass
    } else {
        Status::InClass
    };
    if errors > 0 {
        anyhow::bail!(BatchFailed {
            errors,
            report: Value::Array(results.into_iter().map(|r| r.0).collect())
        });
    }
    Ok(Outcome {
        status,
        summary: format!("{} files: {out_of_class} out of class", files.len()),
        report: Value::Array(results.into_iter().map(|r| r.0).collect()),
    })
}

/// Some files of a batch failed; the report still lists every file.
#[derive(Debug, thiserror::Error)]
#[error("{errors} files failed")]
pub struct BatchFailed {
    pub errors: usize,
    pub report: Value,
}

/// Runs a parsed command line; the caller prints and maps to exit codes.
pub fn run(cli: Cli) -> anyhow::Result<Outcome> {
    let flags = Flags {
        verify: cli.verify,
        oracle: cli.oracle,
    };
    match cli.command {
        Command::Check { file } => commands::check(&read_graph_file(&file)?, flags),
        Command::Color { file } => commands::color(&read_graph_file(&file)?, flags),
        Command::Rankdec { file, dot } => {
            commands::rankdec(&read_graph_file(&file)?, flags, dot.as_deref())
        }
        Command::Decompose { file } => commands::decompose(&read_graph_file(&file)?, flags),
        Command::Generate(a) => commands::generate(&GenerateParams {
            family: a.family,
            k: a.k,
            lengths: a.lengths,
            branches: a.branches,
            count: a.count,
            min: a.min,
            max: a.max,
            seed: a.seed,
            out: a.out,
        }),
        Command::Batch { verb, files, jobs } => batch(verb, &files, jobs, flags),
    }
}
