use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use pidbounds_cli::output::{write_csv, write_ndjson};
use pidbounds_cli::report::{check_graph, prop3_report};
use pidbounds_cli::{parse_spec, run, RunOptions};
use pidbounds_core::analytic::Corollary;

#[derive(Parser)]
#[command(name = "pidbounds", version, about = "Partial-identification bounds for discrete causal models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Verify {
    Oracle,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Ndjson,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum CorollaryArg {
    A1,
    A3,
    LabelIndependent,
}

#[derive(Subcommand)]
enum Command {
    /// Solve every sweep point and print one record per point.
    Solve {
        spec: PathBuf,
        /// Cross-check each point against exact vertex enumeration.
        #[arg(long, value_enum)]
        verify: Option<Verify>,
        /// Write sparse witness distributions (NDJSON) to this file.
        #[arg(long, value_name = "PATH")]
        witnesses: Option<PathBuf>,
        /// Worker threads (0 = all cores).
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        /// Write the minimization LP; sweeps append `.<index>` per point.
        #[arg(long, value_name = "PATH")]
        dump_lp: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Ndjson)]
        format: Format,
        /// Write records here instead of stdout.
        #[arg(long, short, value_name = "PATH")]
        output: Option<PathBuf>,
        /// Leave out wall-clock timings so output is reproducible.
        #[arg(long)]
        omit_runtime: bool,
    },
    /// Report linear-class membership, rewrites, relaxation and the parameter space.
    CheckGraph { spec: PathBuf },
    /// Closed-form bounds on P(X = 1) for a binary chain A -> X -> Y.
    Prop3 {
        spec: PathBuf,
        #[arg(long, value_enum)]
        corollary: Option<CorollaryArg>,
    },
}

fn sink(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("creating {}", p.display()))?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn main_inner(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Solve { spec, verify, witnesses, jobs, dump_lp, format, output, omit_runtime } => {
            let analysis = parse_spec(&spec)?;
            let options = RunOptions {
                verify_oracle: verify.is_some(),
                jobs,
                witnesses: witnesses.is_some(),
                dump_lp: dump_lp.is_some(),
                omit_runtime,
            };
            let results = run(&analysis, &options)?;
            if let Some(path) = &dump_lp {
                for r in &results {
                    let target =
                        if results.len() == 1 { path.clone() } else { PathBuf::from(format!("{}.{}", path.display(), r.record.index)) };
                    std::fs::write(&target, r.lp.as_deref().unwrap_or_default())
                        .with_context(|| format!("writing {}", target.display()))?;
                }
            }
            if let Some(path) = &witnesses {
                let mut w = sink(Some(path))?;
                write_ndjson(&mut w, results.iter().filter_map(|r| r.witnesses.as_ref()))?;
                w.flush()?;
            }
            let mut out = sink(output.as_deref())?;
            let records = results.iter().map(|r| &r.record);
            match format {
                Format::Ndjson => write_ndjson(&mut out, records)?,
                Format::Csv => write_csv(&mut out, records)?,
            }
            out.flush()?;
        }
        Command::CheckGraph { spec } => {
            let report = check_graph(&parse_spec(&spec)?)?;
            println!("{}", serde_json::to_string_pretty(&report)?);
        }
        Command::Prop3 { spec, corollary } => {
            let corollary = corollary.map(|c| match c {
                CorollaryArg::A1 => Corollary::A1,
                CorollaryArg::A3 => Corollary::A3,
                CorollaryArg::LabelIndependent => Corollary::LabelIndependent,
            });
            let report = prop3_report(&parse_spec(&spec)?, corollary)?;
            println!("{}", serde_json::to_string_pretty(&report)?);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match main_inner(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
