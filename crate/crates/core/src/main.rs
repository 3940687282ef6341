use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use adicomp::cli::{self, gallery, RunOptions};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Text,
    Json,
}

/// Run adic-completion scenarios and report certified verdicts.
#[derive(Debug, Parser)]
#[command(name = "adicomp", version)]
struct Args {
    /// Scenario file to run.
    #[arg(long, conflicts_with = "gallery")]
    scenario: Option<PathBuf>,
    /// Shipped scenario to run; `list` prints the names.
    #[arg(long)]
    gallery: Option<String>,
    /// Depth used by every task, overriding `depth=` in the scenario.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..=64))]
    depth: Option<u32>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Stop at the first task error; exit 2 when any verdict fails.
    #[arg(long)]
    strict: bool,
    /// Record wall-clock time per task.
    #[arg(long)]
    timings: bool,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let opts = RunOptions {
        depth: args.depth.map(|d| d as usize),
        strict: args.strict,
        timings: args.timings,
        gallery: None,
    };
    let report = match (&args.scenario, &args.gallery) {
        (_, Some(name)) if name == "list" => {
            for n in gallery::names() {
                println!("{n}");
            }
            return ExitCode::SUCCESS;
        }
        (_, Some(name)) => match cli::run_gallery(name, &opts) {
            None => {
                eprintln!("error: no gallery scenario `{name}` (try --gallery list)");
                return ExitCode::from(1);
            }
            Some(Err(d)) => {
                eprintln!("error: gallery `{name}`: {d}");
                return ExitCode::from(1);
            }
            Some(Ok(r)) => r,
        },
        (Some(path), None) => {
            let text = match std::fs::read_to_string(path) {
                Ok(t) => t,
                Err(e) => {
                    eprintln!("error: {}: {e}", path.display());
                    return ExitCode::from(1);
                }
            };
            match cli::parse_scenario(&text) {
                Ok(s) => cli::run(&s, &opts),
                Err(d) => {
                    eprintln!(
                        "error: {}:{}:{}: {}: {}",
                        path.display(),
                        d.line,
                        d.col,
                        d.kind,
                        d.message
                    );
                    return ExitCode::from(1);
                }
            }
        }
        (None, None) => {
            eprintln!("error: pass --scenario <path> or --gallery <name>");
            return ExitCode::from(1);
        }
    };
    let rendered = match args.format {
        Format::Text => report.to_text(),
        Format::Json => report.to_json(),
    };
    match &args.out {
        Some(path) => {
            if let Err(e) = cli::write_atomic(path, &rendered) {
                eprintln!("error: {}: {e}", path.display());
                return ExitCode::from(1);
            }
        }
        None => print!("{rendered}"),
    }
    ExitCode::from(cli::exit_code(&report, args.strict) as u8)
}
