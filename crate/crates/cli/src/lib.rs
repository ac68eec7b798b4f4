//! Scenario parsing, report assembly and rendering for the `cauchy-harnack`
//! command-line tool.

pub mod commands;
pub mod error;
pub mod liyau;
pub mod output;
pub mod report;
pub mod scenario;
pub mod sweep;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::error::{CliError, CliResult, EXIT_OK, EXIT_VERIFICATION_FAILURE};
use crate::liyau::{ConventionChoice, LiYauArgs, TestSolution};
use crate::output::Format;
use crate::report::Status;
use crate::scenario::Scenario;
use crate::sweep::SweepParam;

#[derive(Debug, Parser)]
#[command(
    name = "cauchy-harnack",
    version,
    about = "Sharp Harnack bounds for the half-Laplacian heat equation"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Scenario file (JSON).
    #[arg(long)]
    pub scenario: Option<PathBuf>,
    /// Output format.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Run the independent oracles and fail on disagreement.
    #[arg(long)]
    pub verify: bool,
    /// Tolerance for the command's verification checks.
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Geodesic, constants and sharp bounds for the pair in the scenario.
    Bounds(Common),
    /// The chord/kernel identity for the pair in the scenario.
    Identity(Common),
    /// Harnack ratio of the solution generated by the scenario's measure.
    Widder(Common),
    /// Li–Yau expression along a line at fixed time.
    Liyau {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1.0)]
        t: f64,
        #[arg(long, default_value_t = -5.0, allow_negative_numbers = true)]
        x_min: f64,
        #[arg(long, default_value_t = 5.0, allow_negative_numbers = true)]
        x_max: f64,
        #[arg(long, default_value_t = 21)]
        samples: usize,
        #[arg(long, value_enum, default_value_t = ConventionChoice::Both)]
        convention: ConventionChoice,
        #[arg(long, value_enum, default_value_t = TestSolution::Kernel)]
        solution: TestSolution,
    },
    /// Bound quantities along a one-parameter family.
    Sweep {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        vary: SweepParam,
        /// First parameter value
        #[arg(long, allow_negative_numbers = true)]
        from: f64,
        /// Last parameter value (included)
        #[arg(long, allow_negative_numbers = true)]
        to: f64,
        /// Number of rows
        #[arg(long)]
        steps: usize,
    },
}

/// What the binary prints and how it exits.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: Option<String>,
    pub exit_code: i32,
}

fn require_scenario(common: &Common) -> CliResult<Scenario> {
    match &common.scenario {
        Some(path) => Scenario::load(path),
        None => Err(CliError::Input("--scenario <file> is required".into())),
    }
}

fn check_tol(tol: Option<f64>) -> CliResult<Option<f64>> {
    match tol {
        Some(t) if !(t.is_finite() && t > 0.0) => {
            Err(CliError::Input(format!("--tol must be positive (got {t})")))
        }
        other => Ok(other),
    }
}

pub const DEFAULT_LIYAU_TOL: f64 = 1e-6;

pub fn run(cli: &Cli) -> CliResult<Outcome> {
    let report_outcome = |report: report::Report, format: Option<Format>| {
        let value = serde_json::to_value(&report).expect("report types serialize");
        if !output::all_finite(&value) {
            return Err(CliError::Computation(
                "report contains a non-finite value".into(),
            ));
        }
        Ok(Outcome {
            stdout: output::render_report(&report, format.unwrap_or(Format::Json)),
            stderr: None,
            exit_code: if report.status == Status::Ok {
                EXIT_OK
            } else {
                EXIT_VERIFICATION_FAILURE
            },
        })
    };
    match &cli.command {
        Command::Bounds(c) => {
            let tol = check_tol(c.tol)?;
            report_outcome(
                commands::cmd_bounds(&require_scenario(c)?, c.verify, tol)?,
                c.format,
            )
        }
        Command::Identity(c) => {
            let tol = check_tol(c.tol)?;
            report_outcome(
                commands::cmd_identity(&require_scenario(c)?, tol)?,
                c.format,
            )
        }
        Command::Widder(c) => {
            let tol = check_tol(c.tol)?;
            report_outcome(commands::cmd_widder(&require_scenario(c)?, tol)?, c.format)
        }
        Command::Liyau {
            common,
            t,
            x_min,
            x_max,
            samples,
            convention,
            solution,
        } => {
            let tol = check_tol(common.tol)?.unwrap_or(DEFAULT_LIYAU_TOL);
            let cfg = match &common.scenario {
                Some(path) => Scenario::load(path)?.quadrature,
                None => Default::default(),
            };
            let args = LiYauArgs {
                t: *t,
                x_min: *x_min,
                x_max: *x_max,
                samples: *samples,
                convention: *convention,
                solution: *solution,
            };
            let table = liyau::cmd_liyau(&args, &cfg)?;
            let format = common.format.unwrap_or(Format::Csv);
            let failed = common.verify
                && table
                    .summary
                    .iter()
                    .any(|s| !(s.max_reference_error <= tol));
            Ok(Outcome {
                stdout: output::render_liyau(&table, format),
                stderr: (format == Format::Csv).then(|| table.summary_line()),
                exit_code: if failed {
                    EXIT_VERIFICATION_FAILURE
                } else {
                    EXIT_OK
                },
            })
        }
        Command::Sweep {
            common,
            vary,
            from,
            to,
            steps,
        } => {
            let base = match &common.scenario {
                Some(path) => Scenario::load(path)?,
                None => Scenario::default_sweep_base(),
            };
            let rows = sweep::cmd_sweep(&base, *vary, *from, *to, *steps)?;
            Ok(Outcome {
                stdout: output::render_sweep(&rows, common.format.unwrap_or(Format::Csv)),
                stderr: None,
                exit_code: EXIT_OK,
            })
        }
    }
}
