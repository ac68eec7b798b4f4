//! `sweep`: bound quantities along a one-parameter family of pairs.

use cauchy_harnack::{
    chords, geodesic_through, hyperbolic_distance, sharp_bounds, weber_zacher_lower, GeodesicArc,
    HalfSpacePoint,
};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};
use crate::scenario::Scenario;

pub const SWEEP_HEADER: &str = "param,kappa0,c_star,c_upper,lower,upper,cross_ratio,d_hyp,wz_lower";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum SweepParam {
    /// Offset of `B′` from `A′` along the first axis.
    Dx,
    /// The time of `B`.
    T2,
    /// The spatial dimension; points are padded with zeros.
    Dim,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub param: f64,
    pub kappa0: f64,
    pub c_star: f64,
    pub c_upper: f64,
    pub lower: f64,
    pub upper: f64,
    pub cross_ratio: f64,
    pub d_hyp: f64,
    pub wz_lower: Option<f64>,
}

fn resize(x: &[f64], n: usize) -> Vec<f64> {
    let mut v: Vec<f64> = x.iter().copied().take(n).collect();
    v.resize(n, 0.0);
    v
}

fn pair_for(
    base: &Scenario,
    vary: SweepParam,
    param: f64,
) -> CliResult<(HalfSpacePoint, HalfSpacePoint)> {
    let (a, b) = (&base.a, &base.b);
    let pair = match vary {
        SweepParam::Dx => {
            let mut xb = a.x().to_vec();
            xb[0] += param;
            (a.clone(), HalfSpacePoint::new(xb, b.t())?)
        }
        SweepParam::T2 => (a.clone(), HalfSpacePoint::new(b.x().to_vec(), param)?),
        SweepParam::Dim => {
            let n = param as usize;
            (
                HalfSpacePoint::new(resize(a.x(), n), a.t())?,
                HalfSpacePoint::new(resize(b.x(), n), b.t())?,
            )
        }
    };
    Ok(pair)
}

fn row(base: &Scenario, vary: SweepParam, param: f64) -> CliResult<SweepRow> {
    let (a, b) = pair_for(base, vary, param)?;
    if a == b {
        return Err(CliError::Input(format!(
            "sweep reaches A = B at param = {param}"
        )));
    }
    let hb = sharp_bounds(&a, &b)?;
    let d_hyp = hyperbolic_distance(&a, &b)?;
    let arc = geodesic_through(&a, &b)?;
    let cross_ratio = match arc {
        GeodesicArc::Circular(_) => chords(&a, &b, &arc)?.cross_ratio,
        GeodesicArc::Vertical { .. } => d_hyp.exp(),
    };
    let wz_lower = match base.wz_constant {
        Some(c) if b.t() > a.t() => Some(weber_zacher_lower(&a, &b, c)?),
        _ => None,
    };
    Ok(SweepRow {
        param,
        kappa0: hb.kappa0,
        c_star: hb.c_star,
        c_upper: hb.c_upper,
        lower: hb.lower,
        upper: hb.upper,
        cross_ratio,
        d_hyp,
        wz_lower,
    })
}

pub fn parameters(vary: SweepParam, from: f64, to: f64, steps: usize) -> CliResult<Vec<f64>> {
    if steps == 0 {
        return Err(CliError::Input("steps must be at least 1".into()));
    }
    if !(from.is_finite() && to.is_finite()) {
        return Err(CliError::Input("sweep range must be finite".into()));
    }
    let values: Vec<f64> = if steps == 1 {
        vec![from]
    } else {
        let h = (to - from) / (steps - 1) as f64;
        (0..steps)
            .map(|i| {
                if i + 1 == steps {
                    to
                } else {
                    from + i as f64 * h
                }
            })
            .collect()
    };
    if vary == SweepParam::Dim && values.iter().any(|v| v.fract() != 0.0 || *v < 1.0) {
        return Err(CliError::Input(
            "dim sweep needs integer values >= 1 at every step".into(),
        ));
    }
    if vary == SweepParam::T2 && values.iter().any(|v| *v <= 0.0) {
        return Err(CliError::Input(
            "time must be positive at every step".into(),
        ));
    }
    Ok(values)
}

/// Rows in parameter order. Rows are computed in parallel.
pub fn cmd_sweep(
    base: &Scenario,
    vary: SweepParam,
    from: f64,
    to: f64,
    steps: usize,
) -> CliResult<Vec<SweepRow>> {
    let params = parameters(vary, from, to, steps)?;
    let rows: Vec<CliResult<SweepRow>> = params.par_iter().map(|&p| row(base, vary, p)).collect();
    // Collect sequentially so that the first failing row is the one reported.
    rows.into_iter().collect()
}
