//! Thin batch driver: `wqed <command> --config <file>`.
//!
//! The command must match the `run.command` entry of the config file; all
//! run parameters live in the file so that runs are reproducible from a
//! single artifact. Exit codes: 0 success, 2 config error, 3 compute
//! error, 4 oracle recurrence-guard flag.

use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

use wqed::runner::{self, exit_codes, Command as RunCommand, RunConfig};

#[derive(Parser)]
#[command(name = "wqed", version, about = "Waveguide-emitter correlation engine")]
struct Cli {
    #[command(subcommand)]
    command: CliCommand,
}

#[derive(Subcommand)]
enum CliCommand {
    /// Oscillation-averaged two-excitation spectra over a carrier grid.
    Spectrum(Args),
    /// Time-resolved two-excitation first-order density.
    G1TwoExc(Args),
    /// Second-order correlation for one detector pair.
    G2(Args),
    /// Oracle-vs-analytic comparison report.
    OracleCompare(Args),
    /// Second-order correlations over geometries and carriers.
    Sweep(Args),
}

#[derive(clap::Args)]
struct Args {
    /// TOML run configuration.
    #[arg(long)]
    config: PathBuf,
}

impl CliCommand {
    fn expected(&self) -> RunCommand {
        match self {
            Self::Spectrum(_) => RunCommand::Spectrum,
            Self::G1TwoExc(_) => RunCommand::G1TwoExc,
            Self::G2(_) => RunCommand::G2,
            Self::OracleCompare(_) => RunCommand::OracleCompare,
            Self::Sweep(_) => RunCommand::Sweep,
        }
    }

    fn args(&self) -> &Args {
        match self {
            Self::Spectrum(a)
            | Self::G1TwoExc(a)
            | Self::G2(a)
            | Self::OracleCompare(a)
            | Self::Sweep(a) => a,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let expected = cli.command.expected();
    let config = match RunConfig::from_path(&cli.command.args().config) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("wqed: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    if config.command != expected {
        eprintln!(
            "wqed: config requests command '{}' but '{}' was invoked",
            config.command.name(),
            expected.name()
        );
        return ExitCode::from(exit_codes::CONFIG_ERROR as u8);
    }
    match runner::run(&config) {
        Ok(manifest) => {
            println!(
                "wrote {} artifact(s) to {}",
                manifest.files.len(),
                config.output_dir.display()
            );
            if manifest.oracle_guard_flag == Some(true) {
                eprintln!("wqed: oracle recurrence guard tripped; results flagged");
                return ExitCode::from(exit_codes::ORACLE_GUARD as u8);
            }
            ExitCode::from(exit_codes::SUCCESS as u8)
        }
        Err(e) => {
            eprintln!("wqed: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
