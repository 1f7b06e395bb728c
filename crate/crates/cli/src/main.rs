use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use ditsim::{load_config, run, Command, Format, Overrides};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Cmd {
    Spectrum,
    Sweep,
    Entangle,
    Parity,
    Bell,
    Tradeoff,
    Diagnostics,
}

impl From<Cmd> for Command {
    fn from(c: Cmd) -> Self {
        match c {
            Cmd::Spectrum => Command::Spectrum,
            Cmd::Sweep => Command::Sweep,
            Cmd::Entangle => Command::Entangle,
            Cmd::Parity => Command::Parity,
            Cmd::Bell => Command::Bell,
            Cmd::Tradeoff => Command::Tradeoff,
            Cmd::Diagnostics => Command::Diagnostics,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Fmt {
    Csv,
    Json,
}

/// Waveguide-coupled dipole simulations: transmission spectra, sweeps,
/// and repeater protocol figures of merit.
///
/// Exit codes: 0 success, 1 I/O failure, 2 bad config, 3 numerical failure.
#[derive(Debug, Parser)]
#[command(name = "ditsim", version)]
struct Args {
    /// Command to run; must agree with `command` in the config if present.
    command: Cmd,
    /// TOML run configuration.
    #[arg(short, long)]
    config: PathBuf,
    /// Output directory (overrides `out`).
    #[arg(short, long)]
    out: Option<PathBuf>,
    /// Output format (overrides `format`).
    #[arg(short, long, value_enum)]
    format: Option<Fmt>,
    /// Also write an SVG plot where the command has one.
    #[arg(long)]
    plot: bool,
    /// RNG seed for Monte Carlo sampling (overrides `seed`).
    #[arg(long)]
    seed: Option<u64>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let overrides = Overrides {
        command: Some(args.command.into()),
        out: args.out,
        format: args.format.map(|f| match f {
            Fmt::Csv => Format::Csv,
            Fmt::Json => Format::Json,
        }),
        plot: args.plot,
        seed: args.seed,
    };
    let result = load_config(&args.config, &overrides).and_then(|cfg| run(&cfg));
    match result {
        Ok(written) => {
            println!("{}", written.data.display());
            if let Some(p) = written.plot {
                println!("{}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
