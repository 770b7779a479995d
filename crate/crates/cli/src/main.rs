use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use nhp_cli::commands::{self, Prepared};
use nhp_cli::{exit, CliResult};

#[derive(Parser)]
#[command(name = "nhp", version, about = "Type I Hermite-Padé approximants of Nikishin systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve every multi-index in the config and write solutions.json.
    Solve {
        #[arg(short, long)]
        config: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Convergence sweep: convergence.csv, convergence.json, exterior_counts.json.
    Sweep {
        #[arg(short, long)]
        config: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Run the invariant suite.
    Verify {
        #[arg(short, long)]
        config: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> CliResult<i32> {
    match cli.command {
        Command::Solve { config, out } => {
            let p = Prepared::load(&config)?;
            commands::solve(&p, &p.cfg.output_dir(out.as_deref()))?;
            Ok(exit::OK)
        }
        Command::Sweep { config, out } => {
            let p = Prepared::load(&config)?;
            let (_, code) = commands::sweep(&p, &p.cfg.output_dir(out.as_deref()))?;
            Ok(code)
        }
        Command::Verify { config, out } => {
            let p = Prepared::load(&config)?;
            let report = commands::verify(&p, out.as_deref())?;
            Ok(if report.all_pass() { exit::OK } else { exit::FAILURE })
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let code = match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.code
        }
    };
    ExitCode::from(code as u8)
}
