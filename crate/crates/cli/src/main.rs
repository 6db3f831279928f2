//! `steklov`: closed-form spectra, FEM solves, table reproduction, sweeps
//! and verification suites. Every subcommand writes JSON (or CSV with
//! `--csv`) to stdout or `--out`. Exit status is 0 when all checks pass, 1
//! when a check fails and 2 on invalid input.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use steklov::closed_form::{enumerate_spectrum, AnnulusSpec};
use steklov::experiments::{
    parse_domain_spec, reproduce_table, run_sweep, sig6, verify_integral_lemmas, verify_lemmas, SweepSpec,
};
use steklov::fem::{annulus_reference, solve};
use steklov::Problem;

/// Relative deviation allowed when reproducing the published tables.
const TABLE_TOLERANCE: f64 = 0.02;

#[derive(Parser)]
#[command(name = "steklov", version, about = "Steklov and mixed Steklov-Neumann eigenvalues on doubly connected domains")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Output {
    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Emit CSV instead of JSON.
    #[arg(long, global = true)]
    csv: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Exact eigenvalues of a concentric annulus in dimension n.
    SpectrumAnnulus {
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 1.0)]
        inner: f64,
        #[arg(long, default_value_t = 5.0)]
        outer: f64,
        #[arg(long, default_value_t = 8)]
        k: usize,
        #[arg(long, default_value = "steklov")]
        problem: Problem,
        #[command(flatten)]
        output: Output,
    },
    /// Finite-element eigenvalues of a domain file.
    FemSolve {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, default_value_t = 0.125)]
        h: f64,
        #[arg(long, default_value_t = 6)]
        k: usize,
        #[arg(long, default_value = "steklov")]
        problem: Problem,
        #[command(flatten)]
        output: Output,
    },
    /// Grid scans of the eigenvalue orderings and monotonicity lemmas.
    VerifyLemmas {
        /// `key = value` grid file; the default grid when omitted.
        #[arg(long)]
        grid: Option<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
    /// Quadrature checks of the integral inequalities against the
    /// volume-matched annulus.
    VerifyIntegrals {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, default_value_t = 0.125)]
        h: f64,
        #[command(flatten)]
        output: Output,
    },
    /// Recompute a published table (1 to 4) and report deviations.
    ReproduceTable {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=4))]
        id: u8,
        #[arg(long, default_value_t = 0.125)]
        h: f64,
        #[command(flatten)]
        output: Output,
    },
    /// Move the hole along a path and classify each eigenvalue's trend.
    Sweep {
        #[arg(long)]
        spec: PathBuf,
        #[command(flatten)]
        output: Output,
    },
}

enum Failure {
    Input(String),
    Checks,
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Input(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn emit(output: &Output, json: &Value, csv: impl FnOnce() -> String) -> Outcome {
    let text = if output.csv {
        csv()
    } else {
        let mut s = serde_json::to_string_pretty(json)?;
        s.push('\n');
        s
    };
    match &output.out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn verdict(pass: bool) -> Outcome {
    if pass {
        Ok(())
    } else {
        Err(Failure::Checks)
    }
}

fn run(command: Command) -> Outcome {
    match command {
        Command::SpectrumAnnulus { n, inner, outer, k, problem, output } => {
            let spec = AnnulusSpec::new(n, inner, outer)?;
            let lines = enumerate_spectrum(&spec, problem, k)?;
            let eigenvalues = annulus_reference(&spec, problem, k)?;
            let json = json!({
                "n": n, "inner": inner, "outer": outer, "problem": problem,
                "lines": lines, "eigenvalues": eigenvalues,
            });
            emit(&output, &json, || {
                let mut s = String::from("l,branch,value,multiplicity\n");
                for l in &lines {
                    let branch = serde_json::to_value(l.branch).ok().and_then(|v| v.as_str().map(String::from));
                    s.push_str(&format!("{},{},{},{}\n", l.l, branch.unwrap_or_default(), sig6(l.value), l.multiplicity));
                }
                s
            })
        }
        Command::FemSolve { spec, h, k, problem, output } => {
            let domain = parse_domain_spec(&read(&spec)?)?;
            let sol = solve(&domain, problem, h, k)?;
            emit(&output, &serde_json::to_value(&sol)?, || {
                let mut s = String::from("index,eigenvalue\n");
                for (i, v) in sol.eigenvalues.iter().enumerate() {
                    s.push_str(&format!("{i},{}\n", sig6(*v)));
                }
                s
            })
        }
        Command::VerifyLemmas { grid, output } => {
            let config = match grid {
                Some(path) => read(&path)?,
                None => String::new(),
            };
            let bundle = verify_lemmas(&config)?;
            emit(&output, &serde_json::to_value(&bundle)?, || {
                let mut s = String::from("claim,grid_size,worst_margin,tolerance,pass\n");
                for r in &bundle.reports {
                    s.push_str(&format!(
                        "{},{},{},{},{}\n",
                        r.claim,
                        r.grid_size,
                        sig6(r.worst_margin),
                        sig6(r.tolerance),
                        r.pass
                    ));
                }
                s
            })?;
            verdict(bundle.all_pass)
        }
        Command::VerifyIntegrals { spec, h, output } => {
            let domain = parse_domain_spec(&read(&spec)?)?;
            let report = verify_integral_lemmas(&domain, h)?;
            emit(&output, &serde_json::to_value(&report)?, || {
                let mut s = String::from("claim,lhs,rhs,slack,tolerance,pass\n");
                for c in &report.checks {
                    s.push_str(&format!(
                        "{},{},{},{},{},{}\n",
                        c.claim,
                        sig6(c.lhs),
                        sig6(c.rhs),
                        sig6(c.slack),
                        sig6(c.tolerance),
                        c.pass
                    ));
                }
                s
            })?;
            verdict(report.all_pass)
        }
        Command::ReproduceTable { id, h, output } => {
            let table = reproduce_table(id, h)?;
            let mut json = serde_json::to_value(&table)?;
            json["tolerance"] = json!(TABLE_TOLERANCE);
            json["max_deviation"] = json!(table.max_deviation());
            json["pass"] = json!(table.within(TABLE_TOLERANCE));
            emit(&output, &json, || table.to_csv())?;
            verdict(table.within(TABLE_TOLERANCE))
        }
        Command::Sweep { spec, output } => {
            let sweep = SweepSpec::parse(&read(&spec)?)?;
            let result = run_sweep(&sweep)?;
            // Conjecture disagreements are reported, not treated as failures.
            emit(&output, &serde_json::to_value(&result)?, || result.to_csv())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Checks) => ExitCode::from(1),
        Err(Failure::Input(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
