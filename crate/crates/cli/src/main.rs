mod artifacts;
mod error;
mod pipeline;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::artifacts::Format;
use crate::error::CliError;
use crate::pipeline::{FacetSelection, PolytopeSource, RestrictRequest, RunConfig};

/// Enumerate and classify small covers of the dodecahedron and the 120-cell.
#[derive(Debug, Parser)]
#[command(name = "smallcovers", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build, enumerate, classify and report, reusing cached artifacts.
    Run {
        /// dodecahedron, 120cell, or file:PATH to a polytope JSON file
        #[arg(long, default_value = "dodecahedron")]
        polytope: PolytopeSource,
        /// Comma-separated decimal labels (default: all of them in dimension
        /// 3, 1,2,4,8,15 for the 120-cell)
        #[arg(long, value_delimiter = ',')]
        alphabet: Option<Vec<u32>>,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Search depth at which subtrees are handed to worker threads
        #[arg(long, default_value_t = 4)]
        split_depth: usize,
        /// Run a full-alphabet search even on large polytopes
        #[arg(long)]
        force_infeasible: bool,
        #[arg(long, value_enum, default_value = "markdown")]
        format: Format,
    },
    /// Print the class table of a previous run.
    Report {
        #[arg(long, default_value = "dodecahedron")]
        polytope: PolytopeSource,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        #[arg(long, value_enum, default_value = "markdown")]
        format: Format,
    },
    /// Restrict a labeling to a facet and identify the induced class.
    Restrict {
        /// Labelings file written by `run`
        #[arg(long)]
        labelings: PathBuf,
        /// Facet number, counted from 1 in enumeration order, or "all"
        #[arg(long)]
        facet: FacetSelection,
        #[arg(long, default_value = "120cell")]
        polytope: PolytopeSource,
        /// Which labeling of the file to restrict, counted from 1
        #[arg(long, default_value_t = 1)]
        record: usize,
        /// Directory holding the dodecahedron classification (default: the
        /// labelings file's directory)
        #[arg(long)]
        classes: Option<PathBuf>,
    },
}

fn execute(command: Command) -> Result<(), CliError> {
    match command {
        Command::Run {
            polytope,
            alphabet,
            out,
            split_depth,
            force_infeasible,
            format,
        } => {
            let config = RunConfig {
                source: polytope,
                alphabet,
                out,
                split_depth,
                force_infeasible,
                format,
            };
            let outcome = pipeline::run_pipeline(&config)?;
            print!("{}", artifacts::render_summary(&outcome.classes));
            println!("report: {}", outcome.layout.report(format).display());
        }
        Command::Report {
            polytope,
            out,
            format,
        } => {
            print!("{}", pipeline::report(&out, &polytope, format)?);
        }
        Command::Restrict {
            labelings,
            facet,
            polytope,
            record,
            classes,
        } => {
            let request = RestrictRequest {
                labelings,
                source: polytope,
                record,
                facet,
                classes_dir: classes,
            };
            for r in pipeline::restrict(&request)? {
                let class = r.class.map(|k| k.to_string()).unwrap_or_else(|| "-".into());
                let frame = if r.on_dodecahedron {
                    "dodecahedron"
                } else {
                    "facet"
                };
                println!(
                    "facet {}: {frame} {} class {class}",
                    r.facet,
                    r.labeling.to_csv()
                );
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(3)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
