//! Command-line front end.
//!
//! Exit codes: 0 success, 1 check or runtime failure, 2 usage error.

mod fig1;
mod state_spec;
mod verify;

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};

pub use fig1::{fig1_rows, format_g12, write_csv, Fig1Row, FIG1_HEADER};
pub use state_spec::{BasisSpec, StateKind, StateSpec, DEFAULT_STATE_SEED};
pub use verify::{
    average_suite, basis_suite, equal_component_states, mub_suite, qubit_suite, run_scope,
    subentropy_suite, Check, Scope, Status, DEFAULT_DIMENSIONS,
};

use crate::bounds::{evaluate_all, RelationReport};
use crate::error::Error;
use crate::haar_average::{mean_coherence, mean_relent_closed_form, rms_coherence, Measure};
use crate::logbase::LogBase;
use crate::measures::{coherence_radius_l1, coherence_radius_l2, coherence_report, CoherenceReport};
use crate::states::{quantum_purity, von_neumann_entropy};
use crate::subentropy::subentropy_of;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "qcoherence", version, about = "Basis-relative coherence, MUB relations and subentropy bounds")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the property suites and print one PASS/FAIL/SKIP line per check
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        scope: Scope,
        /// Dimension to test (default: 2, 3 and 5)
        #[arg(long)]
        d: Option<usize>,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Monte Carlo samples per estimate
        #[arg(long, default_value_t = 20_000)]
        n: usize,
    },
    /// Write exact subentropy and its upper bounds along the epsilon family as CSV
    Fig1 {
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 101)]
        points: usize,
        #[arg(long, default_value = "2")]
        log_base: LogBase,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Coherence measures of a state in one basis, as JSON
    Coherence {
        #[arg(long)]
        state: StateSpec,
        #[arg(long, default_value = "computational")]
        basis: BasisSpec,
        /// Seed for `--basis random`
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value = "2")]
        log_base: LogBase,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate every applicable relation on a state, as a JSON array
    Bounds {
        #[arg(long)]
        state: StateSpec,
        #[arg(long, default_value = "computational")]
        basis: BasisSpec,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value = "2")]
        log_base: LogBase,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monte Carlo mean and RMS coherence over Haar-random bases
    Average {
        #[arg(long)]
        state: StateSpec,
        #[arg(long, default_value = "l1")]
        measure: Measure,
        #[arg(long, default_value_t = 20_000)]
        n: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value = "2")]
        log_base: LogBase,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Output of `coherence`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoherenceOutput {
    pub state: String,
    pub basis: String,
    #[serde(flatten)]
    pub report: CoherenceReport,
    pub purity: f64,
    pub von_neumann_entropy: f64,
    pub subentropy: f64,
    pub r1: f64,
    pub r2: f64,
}

/// Output of `average`. The target is compared against `target_statistic`
/// (`mean` or `rms`) under `target_relation` (`=` or `<=`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AverageReport {
    pub state: String,
    pub measure: Measure,
    pub log_base: String,
    pub n_samples: usize,
    pub master_seed: u64,
    pub mean: f64,
    pub mean_std_error: f64,
    pub rms: f64,
    pub rms_std_error: f64,
    pub r1_target: f64,
    pub r2_target: f64,
    pub relent_target: f64,
    pub target: f64,
    pub target_statistic: String,
    pub target_relation: String,
    pub z_score: Option<f64>,
}

enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(stderr, "{text}")
            } else {
                write!(stdout, "{text}")
            };
            return e.exit_code();
        }
    };
    match execute(cli.command, stdout) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Runtime(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_FAILURE
        }
    }
}

fn with_output(
    out: Option<PathBuf>,
    stdout: &mut dyn Write,
    body: impl FnOnce(&mut dyn Write) -> Result<(), Failure>,
) -> Result<(), Failure> {
    match out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(&path)?);
            body(&mut w)?;
            w.flush()?;
            Ok(())
        }
        None => body(stdout),
    }
}

fn write_json<T: Serialize>(value: &T, w: &mut dyn Write) -> Result<(), Failure> {
    serde_json::to_writer_pretty(&mut *w, value)?;
    writeln!(w)?;
    Ok(())
}

fn execute(command: Command, stdout: &mut dyn Write) -> Result<i32, Failure> {
    match command {
        Command::Verify { scope, d, seed, n } => {
            if n < crate::haar_average::MIN_SAMPLES {
                return Err(Failure::Usage(format!(
                    "--n must be at least {}",
                    crate::haar_average::MIN_SAMPLES
                )));
            }
            let dims: Vec<usize> = match d {
                Some(d) if d < 2 => return Err(Failure::Usage(format!("--d must be at least 2, got {d}"))),
                Some(d) => vec![d],
                None => DEFAULT_DIMENSIONS.to_vec(),
            };
            let checks = run_scope(scope, &dims, seed, n);
            let count = |s| checks.iter().filter(|c| c.status == s).count();
            for c in &checks {
                writeln!(stdout, "{c}")?;
            }
            let failed = count(Status::Fail);
            writeln!(
                stdout,
                "summary: {} passed, {} failed, {} skipped",
                count(Status::Pass),
                failed,
                count(Status::Skip)
            )?;
            Ok(if failed == 0 { EXIT_OK } else { EXIT_FAILURE })
        }
        Command::Fig1 {
            d,
            points,
            log_base,
            out,
        } => {
            let rows = fig1_rows(d, points, log_base)?;
            with_output(out, stdout, |w| Ok(write_csv(&rows, w)?))?;
            Ok(EXIT_OK)
        }
        Command::Coherence {
            state,
            basis,
            seed,
            log_base,
            out,
        } => {
            let rho = state.build()?;
            let b = basis.build(rho.dim(), seed)?;
            let report = CoherenceOutput {
                state: state.to_string(),
                basis: basis.to_string(),
                report: coherence_report(&rho, &b, log_base)?,
                purity: quantum_purity(&rho),
                von_neumann_entropy: von_neumann_entropy(&rho, log_base),
                subentropy: subentropy_of(&rho, log_base),
                r1: coherence_radius_l1(&rho),
                r2: coherence_radius_l2(&rho),
            };
            with_output(out, stdout, |w| write_json(&report, w))?;
            Ok(EXIT_OK)
        }
        Command::Bounds {
            state,
            basis,
            seed,
            log_base,
            out,
        } => {
            let rho = state.build()?;
            let b = basis.build(rho.dim(), seed)?;
            let reports: Vec<RelationReport> = evaluate_all(&rho, &b, log_base)?;
            with_output(out, stdout, |w| write_json(&reports, w))?;
            Ok(EXIT_OK)
        }
        Command::Average {
            state,
            measure,
            n,
            seed,
            log_base,
            out,
        } => {
            let rho = state.build()?;
            let mean = mean_coherence(measure, &rho, n, seed, log_base)?;
            let rms = rms_coherence(measure, &rho, n, seed, log_base)?;
            let scale = ((rho.dim() + 1) as f64).sqrt();
            let r1_target = coherence_radius_l1(&rho) / scale;
            let r2_target = coherence_radius_l2(&rho) / scale;
            let relent_target = mean_relent_closed_form(&rho, log_base);
            let (target, statistic, relation, est) = match measure {
                Measure::L1 => (r1_target, "rms", "<=", &rms),
                Measure::L2 => (r2_target, "rms", "=", &rms),
                Measure::Relent => (relent_target, "mean", "=", &mean),
            };
            let z = est.z_score(target);
            let report = AverageReport {
                state: state.to_string(),
                measure,
                log_base: log_base.to_string(),
                n_samples: n,
                master_seed: seed,
                mean: mean.mean,
                mean_std_error: mean.std_error,
                rms: rms.mean,
                rms_std_error: rms.std_error,
                r1_target,
                r2_target,
                relent_target,
                target,
                target_statistic: statistic.into(),
                target_relation: relation.into(),
                z_score: z.is_finite().then_some(z),
            };
            with_output(out, stdout, |w| write_json(&report, w))?;
            Ok(EXIT_OK)
        }
    }
}
