//! Command-line driver: model ingestion, pipeline stages, report emission.
//!
//! Exit codes: 0 = all checks pass, 1 = a mathematical check failed
//! (the report carries the witness), 2 = input or resource error.

use clap::{Args, Parser, Subcommand};
use defcalc::artin::DEFAULT_MINOR_CAP;
use defcalc::model::{parse_model, run_stage, ModelFile, RunOptions, RunReport, Stage};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "defcalc",
    about = "Deformation rings, cohomology jump ideals and resonance ideals of augmented DG Lie pairs, in exact rational arithmetic"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Common {
    /// Path to the JSON model file.
    model: PathBuf,
    /// Truncation order n of the deformation ring R_n.
    #[arg(long)]
    order: Option<usize>,
    /// Arity bound for operations and transfer (raised automatically to
    /// order + 1).
    #[arg(long)]
    arity: Option<usize>,
    /// Jump-ideal indices as i:k pairs, e.g. "0:1,1:2".
    #[arg(long)]
    ik: Option<String>,
    /// Cap on the number of minors enumerated per ideal.
    #[arg(long)]
    minor_cap: Option<u128>,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse the model and check the structural hypotheses.
    Validate(Common),
    /// Run through the cone and transfer, then check the L-infinity
    /// axioms on the transferred structure.
    Axioms(Common),
    /// Report the transferred algebra and module on cohomology.
    Transfer(Common),
    /// Compute the deformation ring and its presentation.
    Defring(Common),
    /// Compute the cohomology jump ideals for the (i,k) list.
    Jump(Common),
    /// Compute symbolic resonance ideals and the point-oracle table.
    Resonance(Common),
    /// Run the full pipeline including the graded report.
    Pipeline(Common),
}

fn parse_ik(text: &str) -> Result<Vec<(i32, usize)>, String> {
    let mut out = Vec::new();
    for part in text.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let (i, k) = part
            .split_once(':')
            .ok_or_else(|| format!("bad --ik entry \"{part}\", expected i:k"))?;
        let i: i32 = i.trim().parse().map_err(|_| format!("bad degree in \"{part}\""))?;
        let k: usize = k.trim().parse().map_err(|_| format!("bad rank in \"{part}\""))?;
        out.push((i, k));
    }
    Ok(out)
}

fn options(model: &ModelFile, common: &Common) -> Result<RunOptions, String> {
    let mut opts = RunOptions::from_model(model);
    if let Some(order) = common.order {
        opts.order = order;
    }
    if let Some(arity) = common.arity {
        opts.arity = Some(arity);
    }
    if let Some(ik) = &common.ik {
        opts.ik = parse_ik(ik)?;
    }
    if let Ok(cap) = std::env::var("DEFCALC_MINOR_CAP") {
        opts.minor_cap = cap
            .parse()
            .map_err(|_| format!("bad DEFCALC_MINOR_CAP \"{cap}\""))?;
    }
    if let Some(cap) = common.minor_cap {
        opts.minor_cap = cap;
    } else if opts.minor_cap == 0 {
        opts.minor_cap = DEFAULT_MINOR_CAP;
    }
    Ok(opts)
}

fn emit(report: &RunReport, out: &Option<PathBuf>) -> Result<(), String> {
    let text = serde_json::to_string_pretty(report).map_err(|e| e.to_string())?;
    match out {
        Some(path) => std::fs::write(path, text + "\n").map_err(|e| e.to_string()),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn run(cmd: &Cmd) -> ExitCode {
    let (common, stage, resonance_override) = match cmd {
        Cmd::Validate(c) => (c, Stage::Validate, None),
        Cmd::Axioms(c) => (c, Stage::Axioms, None),
        Cmd::Transfer(c) => (c, Stage::Transfer, None),
        Cmd::Defring(c) => (c, Stage::Defring, None),
        Cmd::Jump(c) => (c, Stage::Jump, None),
        Cmd::Resonance(c) => (c, Stage::Resonance, Some(true)),
        Cmd::Pipeline(c) => (c, Stage::Full, None),
    };
    let model = match parse_model(&common.model) {
        Ok(m) => m,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let mut opts = match options(&model, common) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if let Some(r) = resonance_override {
        opts.resonance = r;
    }
    match run_stage(&model, &opts, stage) {
        Ok(report) => {
            if let Err(e) = emit(&report, &common.out) {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    run(&cli.cmd)
}
