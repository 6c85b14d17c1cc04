//! `coevo`: train agent populations, run tournaments, analyze results.

mod analyze;
mod inputs;
mod tournament;
mod train;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use inputs::Failure;

#[derive(Parser)]
#[command(name = "coevo", version, about = "Competitive coevolution of card-game agents")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evolve agent weights with the (mu+lambda) strategy.
    Train(train::TrainArgs),
    /// Play a full round robin between fixed agents.
    Tournament(tournament::TournamentArgs),
    /// Summaries, clustering and comparisons of earlier outputs.
    Analyze(analyze::AnalyzeArgs),
}

/// Prints `{"error": kind, "message": ...}` on one line.
fn fail(kind: &str, message: &str) {
    let line = serde_json::json!({ "error": kind, "message": message });
    eprintln!("{line}");
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let text = e.to_string();
            let first = text.lines().next().unwrap_or("invalid arguments");
            fail("config", first.trim_start_matches("error: "));
            return ExitCode::from(2);
        }
    };
    let result = match cli.command {
        Command::Train(args) => train::run(args),
        Command::Tournament(args) => tournament::run(args),
        Command::Analyze(args) => analyze::run(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(e)) => {
            fail("config", &format!("{e:#}"));
            ExitCode::from(2)
        }
        Err(Failure::Runtime(e)) => {
            fail("runtime", &format!("{e:#}"));
            ExitCode::from(3)
        }
    }
}
