//! `msd`: validate, inspect, transform, generate and draw multisection
//! diagrams.
//!
//! Exit codes: 0 success, 1 I/O, usage or move errors, 2 a validity
//! failure, 3 a diagram that does not parse.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use serde::Serialize;

use msd_core::catalog::{descriptions, parse_entry};
use msd_core::{
    budget_from_env, enumerate_genus1, invariant_report, parse, render_svg, run_script, serialize, validate,
    MultisectionDiagram,
};

#[derive(Parser)]
#[command(name = "msd", version, about = "Multisection diagrams: validity, invariants, moves, catalog and census")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a diagram; exits 2 when some subcollection fails.
    Validate {
        path: PathBuf,
        /// Tietze budget (default: MSD_BUDGET or 10000).
        #[arg(long)]
        budget: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// H1, piece genera, Euler characteristic and fundamental group.
    Invariants {
        path: PathBuf,
        #[arg(long)]
        budget: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Apply a move script.
    Move {
        path: PathBuf,
        #[arg(long)]
        script: PathBuf,
        /// Output file; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List or emit the built-in diagrams.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
    /// Enumerate diagrams.
    Census {
        #[command(subcommand)]
        kind: CensusKind,
    },
    /// Draw a diagram as SVG.
    Render {
        path: PathBuf,
        #[arg(long)]
        svg: PathBuf,
    },
}

#[derive(Subcommand)]
enum CatalogAction {
    List,
    /// Write an entry such as `order_p(4,6)` in the text format.
    Emit {
        entry: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum CensusKind {
    /// Genus-1 n-section diagrams with slopes bounded by `bound`.
    Genus1 {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 10)]
        bound: i64,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Keep lens-space pairs (n = 2 only); not multisections.
        #[arg(long)]
        allow_lens: bool,
    },
}

/// Failure with a specific exit code.
struct Exit(u8, anyhow::Error);

fn parse_error(e: impl Into<anyhow::Error>) -> Exit {
    Exit(3, e.into())
}

fn other(e: impl Into<anyhow::Error>) -> Exit {
    Exit(1, e.into())
}

fn load(path: &Path) -> Result<MultisectionDiagram, Exit> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display())).map_err(other)?;
    parse(&text).with_context(|| format!("{}", path.display())).map_err(parse_error)
}

fn write_out(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}

fn run(cli: Cli) -> Result<u8, Exit> {
    match cli.command {
        Command::Validate { path, budget, json: as_json } => {
            let d = load(&path)?;
            let report = validate(&d, budget.unwrap_or_else(budget_from_env));
            print!("{}", if as_json { json(&report) } else { report.to_string() });
            Ok(if report.ok { 0 } else { 2 })
        }
        Command::Invariants { path, budget, json: as_json } => {
            let d = load(&path)?;
            let report = invariant_report(&d, budget.unwrap_or_else(budget_from_env)).map_err(other)?;
            print!("{}", if as_json { json(&report) } else { report.to_string() });
            Ok(0)
        }
        Command::Move { path, script, out } => {
            let d = load(&path)?;
            let text = fs::read_to_string(&script)
                .with_context(|| format!("cannot read {}", script.display()))
                .map_err(other)?;
            let base = script.parent().unwrap_or(Path::new("."));
            let result = run_script(&d, &text, base).with_context(|| format!("{}", script.display())).map_err(other)?;
            write_out(out.as_deref(), &serialize(&result)).map_err(other)?;
            Ok(0)
        }
        Command::Catalog { action: CatalogAction::List } => {
            for (name, what) in descriptions() {
                println!("{name:<22} {what}");
            }
            Ok(0)
        }
        Command::Catalog { action: CatalogAction::Emit { entry, out } } => {
            let d = parse_entry(&entry).and_then(|e| e.build()).map_err(other)?;
            write_out(out.as_deref(), &serialize(&d)).map_err(other)?;
            Ok(0)
        }
        Command::Census { kind: CensusKind::Genus1 { n, bound, out, allow_lens } } => {
            let report = enumerate_genus1(n, bound, allow_lens).map_err(other)?;
            write_out(out.as_deref(), &json(&report)).map_err(other)?;
            Ok(0)
        }
        Command::Render { path, svg } => {
            let d = load(&path)?;
            fs::write(&svg, render_svg(&d)).with_context(|| format!("cannot write {}", svg.display())).map_err(other)?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Exit(code, e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(code)
        }
    }
}
