use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use msslab::{check_axioms, load_config, pipeline_cmd, render, report, search_cmd, validate_cmd};

#[derive(Parser)]
#[command(name = "msslab", version, about = "Check soft clustering axioms and validate clusterings on finite universes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the axiom battery, classification and admissibility checks
    CheckAxioms(Common),
    /// Deficits, validity grades and compatibility of a clustering
    Validate(Common),
    /// Assemble, reduce, ingest, bind and evaluate in sequence
    Pipeline(Common),
    /// Search small structures for a combination of passing and failing axioms
    Search(Common),
}

#[derive(Args)]
struct Common {
    /// JSON config (or search spec for `search`)
    file: PathBuf,
    /// Exit with status 2 if any check fails
    #[arg(long)]
    strict_exit: bool,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Worker threads for axiom checking
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    jobs: u64,
    /// Seed for sampled checks; overrides the document and MSSLAB_SEED
    #[arg(long)]
    seed: Option<u64>,
    /// Write the report here instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

const EXIT_USAGE: u8 = 1;
const EXIT_FAILED: u8 = 2;
const EXIT_BUDGET: u8 = 3;

fn write_atomically(path: &Path, body: &str) -> anyhow::Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(body.as_bytes())?;
    tmp.persist(path)?;
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    let (c, report) = match cli.command {
        Command::CheckAxioms(c) => {
            let (cfg, seed) = load_config(&c.file, c.seed)?;
            let r = check_axioms(&cfg, seed, c.jobs as usize)?;
            (c, r)
        }
        Command::Validate(c) => {
            let (cfg, seed) = load_config(&c.file, c.seed)?;
            let r = validate_cmd(&cfg, seed)?;
            (c, r)
        }
        Command::Pipeline(c) => {
            let (cfg, seed) = load_config(&c.file, c.seed)?;
            let r = pipeline_cmd(&cfg, seed, c.jobs as usize)?;
            (c, r)
        }
        Command::Search(c) => {
            let r = search_cmd(&c.file, c.seed)?;
            (c, r)
        }
    };
    let body = match c.format {
        Format::Json => serde_json::to_string_pretty(&report)? + "\n",
        Format::Text => render::text(&report),
    };
    match &c.output {
        Some(path) => write_atomically(path, &body)?,
        None => std::io::stdout().lock().write_all(body.as_bytes())?,
    }
    if c.strict_exit && report::has_failure(&report) {
        return Ok(ExitCode::from(EXIT_FAILED));
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("msslab: {e:#}");
            let budget = e
                .downcast_ref::<msslab_core::Error>()
                .is_some_and(|x| matches!(x, msslab_core::Error::BudgetExceeded { .. }));
            ExitCode::from(if budget { EXIT_BUDGET } else { EXIT_USAGE })
        }
    }
}
