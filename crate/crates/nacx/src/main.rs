//! `nacx`: batch front end over `nacx-core`. Reads JSON, writes a JSON report
//! (schema `nacx-report/1`) and a short human summary.
//!
//! Exit status: 0 when a verdict was computed, 1 on input errors and
//! rejections, 2 when the verdict is unknown (budget or infinite field).

mod commands;
mod input;
mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use serde_json::Value;

use crate::commands::Mode;
use crate::input::{read_json, TableSpec, Workspace};
use crate::report::{Outcome, Status};

#[derive(Parser)]
#[command(name = "nacx", version, about = "Petit algebras, nonassociative cyclic algebras and their automorphisms over finite fields")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Write the full JSON report to this file and print only the summary.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed for randomized searches (division probes over Q).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum Cmd {
    /// Field presentations.
    Field {
        #[command(subcommand)]
        cmd: FieldCmd,
    },
    /// The algebra S_f of a workspace.
    Alg {
        #[command(subcommand)]
        cmd: AlgCmd,
    },
    /// Automorphisms H_(tau,k).
    Aut {
        #[command(subcommand)]
        cmd: AutCmd,
    },
    /// Towers B = A[t;rho]/(t^m - b).
    Tower {
        #[command(subcommand)]
        cmd: TowerCmd,
    },
    /// Recognize S_f from a multiplication table.
    Recognize {
        #[arg(long)]
        table: PathBuf,
        #[arg(long, value_enum, default_value = "field")]
        mode: Mode,
    },
}

#[derive(Subcommand)]
enum FieldCmd {
    /// Verify that every modulus is irreducible.
    Check {
        #[arg(long)]
        spec: PathBuf,
    },
}

#[derive(Subcommand)]
enum AlgCmd {
    /// Build the algebra and report its basic structure.
    Build {
        #[arg(long)]
        spec: PathBuf,
        /// Also write the multiplication table in the `recognize` input format.
        #[arg(long)]
        export: Option<PathBuf>,
    },
    /// Decide whether S_f is a division algebra.
    Division {
        #[arg(long)]
        spec: PathBuf,
    },
    /// Left, middle and right nuclei and the center.
    Nuclei {
        #[arg(long)]
        spec: PathBuf,
    },
}

#[derive(Subcommand)]
enum AutCmd {
    /// Sweep the automorphisms H_(sigma^j,k).
    List {
        #[arg(long)]
        spec: PathBuf,
    },
    /// Decide whether S_f is a nonassociative cyclic extension of D.
    CyclicExtension {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        degree: usize,
    },
}

#[derive(Subcommand)]
enum TowerCmd {
    /// Check the tower conditions and build H_(tau,k) on B.
    Build {
        #[arg(long)]
        spec: PathBuf,
    },
}

fn write_json(path: &Path, v: &Value) -> Result<()> {
    let mut text = serde_json::to_string_pretty(v)?;
    text.push('\n');
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn run(cli: &Cli) -> Result<(String, Outcome)> {
    let seed = cli.seed;
    let ws = |p: &Path| read_json::<Workspace>(p);
    Ok(match &cli.cmd {
        Cmd::Field { cmd: FieldCmd::Check { spec } } => ("field check".into(), commands::field_check(&ws(spec)?)?),
        Cmd::Alg { cmd: AlgCmd::Build { spec, export } } => {
            let (out, table) = commands::alg_build(&ws(spec)?, seed)?;
            if let Some(path) = export {
                write_json(path, &table)?;
            }
            ("alg build".into(), out)
        }
        Cmd::Alg { cmd: AlgCmd::Division { spec } } => ("alg division".into(), commands::alg_division(&ws(spec)?, seed)?),
        Cmd::Alg { cmd: AlgCmd::Nuclei { spec } } => ("alg nuclei".into(), commands::alg_nuclei(&ws(spec)?, seed)?),
        Cmd::Aut { cmd: AutCmd::List { spec } } => ("aut list".into(), commands::aut_list(&ws(spec)?, seed)?),
        Cmd::Aut { cmd: AutCmd::CyclicExtension { spec, degree } } => {
            ("aut cyclic-extension".into(), commands::aut_cyclic_extension(&ws(spec)?, seed, *degree)?)
        }
        Cmd::Tower { cmd: TowerCmd::Build { spec } } => ("tower build".into(), commands::tower_build(&ws(spec)?, seed)?),
        Cmd::Recognize { table, mode } => ("recognize".into(), commands::recognize(&read_json::<TableSpec>(table)?, *mode)?),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (name, outcome) = match run(&cli) {
        Ok(x) => x,
        Err(e) => {
            eprintln!("nacx: error: {e:#}");
            return ExitCode::from(1);
        }
    };
    let (report, summary, status) = outcome.into_report(&name);
    match &cli.out {
        Some(path) => {
            if let Err(e) = write_json(path, &report) {
                eprintln!("nacx: error: {e:#}");
                return ExitCode::from(1);
            }
            for line in &summary {
                println!("{line}");
            }
        }
        None => {
            println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
            for line in &summary {
                eprintln!("{line}");
            }
        }
    }
    if status != Status::Computed {
        eprintln!("nacx: exit {}", status.exit_code());
    }
    ExitCode::from(status.exit_code())
}
