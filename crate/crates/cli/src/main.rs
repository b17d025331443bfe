//! `poslab`: cones, Zariski decompositions, volumes, theorem checks and
//! envelope runs on shipped or user-supplied instances.
//!
//! Exit codes: 0 success, 1 a check failed, 2 input error, 3 domain error,
//! 4 regime refusal.

mod commands;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use poslab::instance::Preference;

#[derive(Parser, Debug)]
#[command(name = "poslab", version, about = "Exact positivity computations and checks on toric varieties and surfaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModelArg {
    Toric,
    Surface,
}

impl From<ModelArg> for Preference {
    fn from(m: ModelArg) -> Self {
        match m {
            ModelArg::Toric => Preference::Toric,
            ModelArg::Surface => Preference::Surface,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Nef, pseudoeffective and dual cones as extremal rays.
    Cones {
        /// Shipped name, file path, or file under $POSLAB_DATA.
        instance: String,
        #[arg(long, value_enum)]
        model: Option<ModelArg>,
    },
    /// Zariski decomposition of a class on a surface.
    Zariski {
        instance: String,
        /// Comma-separated rational coordinates, e.g. `1,1/2`.
        #[arg(long, allow_hyphen_values = true)]
        class: String,
    },
    /// Volume, and positive product with the class itself when big.
    Volume {
        instance: String,
        #[arg(long, allow_hyphen_values = true)]
        class: String,
        #[arg(long, value_enum)]
        model: Option<ModelArg>,
    },
    /// Morse and binomial bounds for a pair of nef classes.
    Morse {
        instance: String,
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long, allow_hyphen_values = true)]
        beta: String,
        #[arg(long, value_enum)]
        model: Option<ModelArg>,
    },
    /// Envelope pipeline from a run spec file.
    Envelope {
        spec: PathBuf,
        /// Rerun on a box of twice the width and report the change.
        #[arg(long = "double-L")]
        double_l: bool,
        /// Directory for `envelope.json` and `envelope.csv`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Duality between the pseudoeffective and movable cones.
    Duality {
        instance: String,
        /// Sampled nef products (threefolds).
        #[arg(short = 'n', long, default_value_t = 50)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum)]
        model: Option<ModelArg>,
    },
    /// Batch checks on sampled classes, or one check on given classes.
    Verify {
        instance: String,
        /// morse, binomial, diff, orth, concave, kt, duality, zariski-approx or all.
        #[arg(long, default_value = "all")]
        theorem: String,
        #[arg(short = 'n', long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Directory for `report.json`, `config.json` and per-theorem CSVs.
        #[arg(long, default_value = "poslab-report")]
        out: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        beta: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        gamma: Option<String>,
        #[arg(long, value_enum)]
        model: Option<ModelArg>,
    },
    /// Summarize a `report.json` written by `verify`.
    Report {
        /// The report file or the directory holding it.
        path: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
