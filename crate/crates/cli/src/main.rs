use std::process::ExitCode;

use clap::{CommandFactory, Parser, Subcommand};

mod commands;
mod config;
mod exit;
mod output;

use config::{RunArgs, RunConfig};
use exit::Failure;

#[derive(Debug, Parser)]
#[command(name = "dll", version, about = "Deformed Laguerre weight: moments, identity checks and the Painleve V flow")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Moments by closed form and by quadrature.
    Moments(RunArgs),
    /// Identity, flow and compatibility checks at one t.
    Verify(RunArgs),
    /// Integrate (theta_n, kappa_n) from t0 to t1.
    Evolve(RunArgs),
}

fn run(command: Command) -> Result<(), Failure> {
    let (run, args): (fn(&RunConfig) -> Result<(), Failure>, RunArgs) = match command {
        Command::Moments(a) => (commands::moments, a),
        Command::Verify(a) => (commands::verify, a),
        Command::Evolve(a) => (commands::evolve_cmd, a),
    };
    run(&RunConfig::resolve(args)?)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let name = match &cli.command {
        Command::Moments(_) => "moments",
        Command::Verify(_) => "verify",
        Command::Evolve(_) => "evolve",
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {f}");
            if f.usage {
                let mut cmd = Cli::command();
                cmd.build();
                if let Some(sub) = cmd.find_subcommand_mut(name) {
                    eprintln!("\n{}", sub.render_usage());
                }
            }
            ExitCode::from(f.code)
        }
    }
}
