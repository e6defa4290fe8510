use std::panic;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use randspace_cli::{execute, Format, Kind, Overrides};
use randspace_core::LogBase;

#[derive(Parser)]
#[command(
    name = "randspace",
    version,
    about = "Random-space particle model experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Experiment config (TOML).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Directory for results.csv / report.json.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Overrides the config seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Logarithm base: 2 or e.
    #[arg(long, global = true)]
    base: Option<LogBase>,
    /// Write every sampled trajectory to trajectories.csv (sample only).
    #[arg(long, global = true)]
    dump_trajectories: bool,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Entropic uncertainty relation report.
    Eur,
    /// Monte Carlo sampling against the exact laws.
    Sample,
    /// Classify one lattice.
    Lattice,
    /// Element, state and measurement diagnostics.
    Algebra,
    /// GNS construction checks.
    Gns,
    /// Entropy-sum infimum search.
    Infimum,
    /// Classify the bundled lattice gallery.
    Gallery,
}

impl Command {
    fn kind(self) -> Kind {
        match self {
            Command::Eur => Kind::Eur,
            Command::Sample => Kind::Montecarlo,
            Command::Lattice => Kind::Lattice,
            Command::Algebra => Kind::Algebra,
            Command::Gns => Kind::Gns,
            Command::Infimum => Kind::Infimum,
            Command::Gallery => Kind::Gallery,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let overrides = Overrides {
        seed: cli.seed,
        base: cli.base,
        out: cli.out.clone(),
        format: cli.format,
        dump_trajectories: cli.dump_trajectories,
    };
    let result =
        panic::catch_unwind(|| execute(cli.command.kind(), cli.config.as_deref(), &overrides));
    match result {
        Ok(Ok((report, written))) => {
            print!("{}", report.to_key_value());
            for p in written {
                println!("wrote = {}", p.display());
            }
            ExitCode::from(report.exit_code() as u8)
        }
        Ok(Err(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
        Err(_) => {
            eprintln!("error: internal fault");
            ExitCode::from(1)
        }
    }
}
