//! `liyau`: the Li–Yau expression sampled along a line at fixed time.

use cauchy_harnack::kernel::li_yau_expression;
use cauchy_harnack::{li_yau_gap, Convention, LiYau, QuadratureConfig};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum ConventionChoice {
    Standard,
    Flipped,
    Both,
}

impl ConventionChoice {
    fn list(self) -> Vec<Convention> {
        match self {
            ConventionChoice::Standard => vec![Convention::Standard],
            ConventionChoice::Flipped => vec![Convention::Flipped],
            ConventionChoice::Both => vec![Convention::Standard, Convention::Flipped],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum TestSolution {
    /// The kernel `k(·, t)`.
    Kernel,
    /// `u ≡ 1`.
    Constant,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LiYauRow {
    pub convention: String,
    pub x: f64,
    /// `−(−Δ)^{1/2} ln u` by quadrature.
    pub value: f64,
    pub reference: f64,
    pub threshold: f64,
    /// `value + 1/(2t)`.
    pub gap: f64,
    pub reference_gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConventionSummary {
    pub convention: String,
    pub min_value: f64,
    pub min_gap: f64,
    pub satisfied: bool,
    pub max_reference_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LiYauTable {
    pub t: f64,
    pub solution: TestSolution,
    pub rows: Vec<LiYauRow>,
    pub summary: Vec<ConventionSummary>,
}

impl LiYauTable {
    pub fn summary_line(&self) -> String {
        let parts: Vec<String> = self
            .summary
            .iter()
            .map(|s| {
                let verdict = if s.satisfied { "satisfies" } else { "violates" };
                format!(
                    "{} convention {verdict} the -1/(2t) threshold (min gap {:.6})",
                    s.convention, s.min_gap
                )
            })
            .collect();
        format!("t = {}: {} on the sampled range", self.t, parts.join("; "))
    }
}

pub struct LiYauArgs {
    pub t: f64,
    pub x_min: f64,
    pub x_max: f64,
    pub samples: usize,
    pub convention: ConventionChoice,
    pub solution: TestSolution,
}

fn sample_points(args: &LiYauArgs) -> Vec<f64> {
    if args.samples == 1 {
        return vec![args.x_min];
    }
    let step = (args.x_max - args.x_min) / (args.samples - 1) as f64;
    (0..args.samples)
        .map(|i| args.x_min + i as f64 * step)
        .collect()
}

fn evaluate(
    args: &LiYauArgs,
    x: f64,
    cfg: &QuadratureConfig,
    conv: Convention,
) -> CliResult<LiYau> {
    Ok(match args.solution {
        TestSolution::Kernel => li_yau_gap(x, args.t, cfg, conv)?,
        TestSolution::Constant => li_yau_expression(|_| 0.0, 0.0, x, args.t, cfg, conv)?,
    })
}

pub fn cmd_liyau(args: &LiYauArgs, cfg: &QuadratureConfig) -> CliResult<LiYauTable> {
    if !(args.t.is_finite() && args.t > 0.0) {
        return Err(CliError::Input(format!(
            "time must be positive (got {})",
            args.t
        )));
    }
    if !(args.x_min.is_finite() && args.x_max.is_finite() && args.x_min <= args.x_max) {
        return Err(CliError::Input(
            "x range must be finite with x-min <= x-max".into(),
        ));
    }
    if args.samples == 0 {
        return Err(CliError::Input("samples must be at least 1".into()));
    }
    let xs = sample_points(args);
    let mut rows = Vec::new();
    let mut summary = Vec::new();
    for conv in args.convention.list() {
        let mut min_value = f64::INFINITY;
        let mut min_gap = f64::INFINITY;
        let mut max_err: f64 = 0.0;
        for &x in &xs {
            let l = evaluate(args, x, cfg, conv)?;
            min_value = min_value.min(l.value);
            min_gap = min_gap.min(l.gap);
            max_err = max_err.max((l.value - l.reference).abs());
            rows.push(LiYauRow {
                convention: conv.name().into(),
                x,
                value: l.value,
                reference: l.reference,
                threshold: l.threshold,
                gap: l.gap,
                reference_gap: l.reference_gap,
            });
        }
        summary.push(ConventionSummary {
            convention: conv.name().into(),
            min_value,
            min_gap,
            satisfied: min_gap >= 0.0,
            max_reference_error: max_err,
        });
    }
    Ok(LiYauTable {
        t: args.t,
        solution: args.solution,
        rows,
        summary,
    })
}
