use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod commands;
mod config;
mod error;

use error::CliError;

#[derive(Debug, Parser)]
#[command(name = "diskflow", version, about = "Euler flow in the unit disk")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the first positive zeros of J_n.
    Zeros {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 1)]
        count: u32,
    },
    /// Integrate one initial state and write its conserved quantities.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run perturbation experiments around a steady orbit.
    Stability {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long = "A", allow_negative_numbers = true)]
        a: Option<f64>,
        #[arg(long = "B")]
        b: Option<f64>,
        /// Comma-separated amplitudes.
        #[arg(long)]
        eps: Option<String>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Report the steady-space projection and orbit distance of a snapshot.
    Project {
        #[arg(long)]
        snapshot: PathBuf,
        #[arg(long = "A", allow_negative_numbers = true)]
        a: f64,
        #[arg(long = "B")]
        b: f64,
    },
}

fn print_paths(paths: &[PathBuf]) {
    for p in paths {
        println!("wrote {}", p.display());
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Zeros { n, count } => print!("{}", commands::zeros(n, count)?),
        Command::Simulate { config, out } => {
            let cfg = commands::load_config(&config)?;
            print_paths(&commands::simulate(&cfg, out)?);
        }
        Command::Stability {
            config,
            out,
            a,
            b,
            eps,
            seed,
        } => {
            let mut text = std::fs::read_to_string(&config).map_err(|e| CliError::Input {
                path: config.clone(),
                msg: e.to_string(),
            })?;
            // flag overrides are appended as config lines so they share validation
            let mut overrides = Vec::new();
            if let Some(a) = a {
                overrides.push(("experiment.A", a.to_string()));
            }
            if let Some(b) = b {
                overrides.push(("experiment.B", b.to_string()));
            }
            if let Some(eps) = eps {
                overrides.push(("experiment.eps", eps));
            }
            if let Some(seed) = seed {
                overrides.push(("experiment.seed", seed.to_string()));
            }
            if !overrides.is_empty() {
                let keys: Vec<&str> = overrides.iter().map(|(k, _)| *k).collect();
                text = text
                    .lines()
                    .filter(|l| !keys.iter().any(|k| l.split('=').next().map(str::trim) == Some(k)))
                    .map(|l| format!("{l}\n"))
                    .collect();
                for (k, v) in overrides {
                    text.push_str(&format!("{k} = {v}\n"));
                }
            }
            let cfg = config::RunConfig::parse(&text)?;
            print_paths(&commands::stability(&cfg, out)?);
        }
        Command::Project { snapshot, a, b } => print!("{}", commands::project(&snapshot, a, b)?),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("diskflow: {e}");
            e.exit_code()
        }
    }
}
