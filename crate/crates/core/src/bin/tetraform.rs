use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use tetraform::cli::{self, CliError, Selector};

#[derive(Parser)]
#[command(name = "tetraform", version, about = "Reduced-attitude formation simulator and verifier")]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one simulation; writes trajectory.csv, xi_trace.csv and manifest.json.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run N seeds starting at the config's seed; writes runs/*.json and summary.json.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        seeds: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the numerical checks and write a JSON report.
    Verify {
        #[arg(long, default_value = "all")]
        selector: Selector,
        #[arg(long, default_value = "verify.json")]
        out: PathBuf,
    },
}

fn run(cmd: Command) -> Result<String, CliError> {
    match cmd {
        Command::Simulate { config, out } => {
            let m = cli::cmd_simulate(&config, &out)?;
            Ok(format!(
                "final formation error {:.3e}, converged {}, wall {:.2}s",
                m.summary.final_formation_error, m.summary.converged, m.wall_time_s
            ))
        }
        Command::Sweep { config, seeds, out } => {
            let s = cli::cmd_sweep(&config, seeds, &out)?;
            Ok(format!("{}/{} converged, max final error {:?}", s.converged, s.seeds, s.max_final_error))
        }
        Command::Verify { selector, out } => {
            let r = cli::cmd_verify(selector, &out)?;
            Ok(format!("{} checks passed", r.passed))
        }
    }
}

fn main() -> ExitCode {
    match run(Args::parse().command) {
        Ok(msg) => {
            eprintln!("{msg}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code as u8)
        }
    }
}
