#![allow(clippy::result_large_err)]

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use vetotalk::files::parse_rational;
use vetotalk::{commands, CliError, Completed, EXIT_ERROR};
use vetotalk_core::construct::{Method, DEFAULT_GRID_RESOLUTION};
use vetotalk_core::Rational;

/// Exact equilibrium computation for cheap talk with a sender veto.
#[derive(Parser)]
#[command(name = "vetotalk", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Maximal compatible type sets and their acceptance polytopes.
    Structure {
        game: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Construct an equilibrium.
    Solve {
        game: PathBuf,
        #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
        method: MethodArg,
        /// Grid step is 1/N for `--method grid`.
        #[arg(long, default_value_t = DEFAULT_GRID_RESOLUTION, value_parser = clap::value_parser!(u32).range(1..))]
        grid_resolution: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Verify a profile, or a mediator from a result file.
    Check {
        game: PathBuf,
        profile: PathBuf,
        /// Receiver's payoff when the sender rejects; omit for the limit game.
        #[arg(long, value_parser = rational_arg, allow_hyphen_values = true)]
        v0: Option<Rational>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Largest exit payoff at which a profile stays an equilibrium without exit.
    Threshold {
        game: PathBuf,
        profile: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Best partitional equilibrium and the exit payoff below which it beats
    /// any mechanism with exit.
    Bound {
        game: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Auto,
    Nonrevealing,
    Partition,
    /// Leader/follower partition for private values.
    #[value(name = "thm8", alias = "leader-follower")]
    LeaderFollower,
    Mixed3,
    Mediated3,
    Grid,
}

fn rational_arg(s: &str) -> Result<Rational, String> {
    parse_rational(s)
}

fn run(cli: Cli) -> Result<(Completed, Option<PathBuf>), CliError> {
    Ok(match cli.command {
        Command::Structure { game, out } => (commands::structure(&game)?, out),
        Command::Solve {
            game,
            method,
            grid_resolution,
            out,
        } => {
            let method = match method {
                MethodArg::Auto => Method::Auto,
                MethodArg::Nonrevealing => Method::Nonrevealing,
                MethodArg::Partition => Method::Partition,
                MethodArg::LeaderFollower => Method::LeaderFollower,
                MethodArg::Mixed3 => Method::Mixed3,
                MethodArg::Mediated3 => Method::Mediated3,
                MethodArg::Grid => Method::Grid {
                    resolution: grid_resolution,
                },
            };
            (commands::solve(&game, method)?, out)
        }
        Command::Check { game, profile, v0, out } => (commands::check(&game, &profile, v0.as_ref())?, out),
        Command::Threshold { game, profile, out } => (commands::threshold(&game, &profile)?, out),
        Command::Bound { game, out } => (commands::bound(&game)?, out),
    })
}

fn write_result(path: &Path, done: &Completed) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(&done.result).expect("result files always serialize");
    text.push('\n');
    std::fs::write(path, text).map_err(|source| CliError::Write {
        path: path.to_path_buf(),
        source,
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_ERROR as u8)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli).and_then(|(done, out)| {
        if let Some(path) = out {
            write_result(&path, &done)?;
        }
        Ok(done)
    }) {
        Ok(done) => {
            print!("{}", done.summary);
            ExitCode::from(done.code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
