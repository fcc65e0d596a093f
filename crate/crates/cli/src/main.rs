//! `pfg`: command-line front end for Physarum frequency gate simulation.

mod accuracy;
mod circuit;
mod exit;
mod gate;
mod opts;
mod trace;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::exit::CliError;
use crate::opts::GlobalOpts;

#[derive(Parser)]
#[command(name = "pfg", version, about = "Simulate Physarum frequency gates and circuits")]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Synthesize or analyze electrode traces.
    #[command(subcommand)]
    Trace(trace::TraceCommand),
    /// Evaluate a single gate.
    #[command(subcommand)]
    Gate(gate::GateCommand),
    /// Run or validate a netlist.
    #[command(subcommand)]
    Circuit(circuit::CircuitCommand),
    /// Gate and circuit accuracy reports.
    Accuracy(accuracy::AccuracyArgs),
    /// Print the effective response model as JSON.
    Model,
}

fn run(cli: Cli) -> Result<String, CliError> {
    let ctx = cli.global.context()?;
    match cli.command {
        Command::Trace(cmd) => trace::run(cmd, &ctx),
        Command::Gate(cmd) => gate::run(cmd, &ctx),
        Command::Circuit(cmd) => circuit::run(cmd, &ctx),
        Command::Accuracy(args) => accuracy::run(args, &ctx),
        Command::Model => Ok(format!("{}\n", ctx.model.to_json())),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
