//! `tsteiner`: build the trace codes, their designs and the comparison
//! geometries, and write reproducible reports.

mod commands;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::Value;

use ternary_steiner::gf::{primitive_polynomials, Field};

#[derive(Parser, Debug)]
#[command(name = "tsteiner", version, about = "Ternary trace codes, their Steiner systems and GF(3) ranks")]
pub struct Cli {
    /// Field degree n (odd); the field is GF(3^n).
    #[arg(long, global = true, default_value_t = 5)]
    pub n: usize,

    /// Use the k-th primitive polynomial in lexicographic order (0 = default).
    #[arg(long, global = true, default_value_t = 0)]
    pub poly_index: usize,

    /// Directory for the report and any artifacts.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Print the full JSON report instead of a summary.
    #[arg(long, global = true)]
    pub json: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Welch,
    Quadric,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Emit {
    Params,
    Wd,
    Generator,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Action {
    Extract,
    Verify,
    Rank,
    Automorphisms,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Field parameters: primitive polynomial, d, d0.
    Field,
    /// Build a code and emit its parameters, weight distribution or generator.
    Code {
        #[arg(long, value_enum, default_value_t = Family::Welch)]
        family: Family,
        #[arg(long, value_enum, default_value_t = Emit::Params)]
        emit: Emit,
    },
    /// Support design of a code: weight 4 uses the dual, other weights the code itself.
    Design {
        #[arg(long, value_enum, default_value_t = Family::Welch)]
        family: Family,
        #[arg(long, default_value_t = 4)]
        weight: usize,
        #[arg(long, value_enum, value_delimiter = ',', default_values_t = [Action::Extract, Action::Verify, Action::Rank])]
        actions: Vec<Action>,
    },
    /// The point-line design of PG(n-1, 3) with its rank and the closed-form rank.
    Pg,
    /// Ranks, inequivalence verdicts and block disjointness of the three designs.
    Compare,
    /// Exhaustive field checks behind the constructions.
    Lemmas,
    /// Shorten on random positions and compare with the transferred distribution.
    Shorten {
        #[arg(long, default_value_t = 1)]
        t_size: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        samples: usize,
        #[arg(long, value_enum, default_value_t = Family::Welch)]
        family: Family,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Field => "field",
            Command::Code { .. } => "code",
            Command::Design { .. } => "design",
            Command::Pg => "pg",
            Command::Compare => "compare",
            Command::Lemmas => "lemmas",
            Command::Shorten { .. } => "shorten",
        }
    }
}

/// What a command produced.
pub struct Outcome {
    pub parameters: Value,
    pub results: Value,
    pub summary: Vec<String>,
    /// Files to write under `--out`: (name, contents).
    pub artifacts: Vec<(String, Vec<u8>)>,
    /// A failed verdict, with its witness.
    pub refutation: Option<String>,
}

#[derive(Serialize)]
struct RunReport<'a> {
    command: &'a str,
    tool_version: &'a str,
    parameters: &'a Value,
    prim_poly: String,
    results: &'a Value,
    refuted: bool,
    wall_time: f64,
}

pub fn build_field(n: usize, poly_index: usize) -> Result<Field> {
    if poly_index == 0 {
        return Field::new(n).with_context(|| format!("building GF(3^{n})"));
    }
    let poly = primitive_polynomials(n)
        .nth(poly_index)
        .with_context(|| format!("GF(3^{n}) has fewer than {} primitive polynomials", poly_index + 1))?;
    Field::with_poly(&poly).with_context(|| format!("building GF(3^{n})"))
}

fn run(cli: Cli) -> Result<ExitCode> {
    if let Some(k) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build_global()
            .context("configuring worker threads")?;
    }
    let start = Instant::now();
    let field = build_field(cli.n, cli.poly_index)?;
    let outcome = commands::dispatch(&cli, &field)?;
    let report = RunReport {
        command: cli.command.name(),
        tool_version: env!("CARGO_PKG_VERSION"),
        parameters: &outcome.parameters,
        prim_poly: field.prim_poly_string(),
        results: &outcome.results,
        refuted: outcome.refutation.is_some(),
        wall_time: start.elapsed().as_secs_f64(),
    };
    let text = serde_json::to_string_pretty(&report)?;

    if let Some(dir) = &cli.out {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        for (name, bytes) in &outcome.artifacts {
            let path = dir.join(name);
            fs::write(&path, bytes).with_context(|| format!("writing {}", path.display()))?;
        }
        let path = dir.join(format!("{}_report.json", cli.command.name()));
        fs::write(&path, format!("{text}\n")).with_context(|| format!("writing {}", path.display()))?;
    }

    if cli.json {
        println!("{text}");
    } else {
        println!("GF(3^{}) with {}", field.n(), field.prim_poly_string());
        for line in &outcome.summary {
            println!("{line}");
        }
    }
    Ok(match &outcome.refutation {
        Some(witness) => {
            eprintln!("refuted: {witness}");
            ExitCode::from(2)
        }
        None => ExitCode::SUCCESS,
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}
