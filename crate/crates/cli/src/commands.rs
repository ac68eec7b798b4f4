//! `bounds`, `identity` and `widder`: one report per scenario.

use cauchy_harnack::harnack::prefactor_variant;
use cauchy_harnack::oracle::default_box_halfwidth;
use cauchy_harnack::{
    chords, extremize_grid, extremize_line, geodesic_through, harnack_ratio, hyperbolic_distance,
    kernel_geometry_identity, sharp_bounds, weber_zacher_lower, ExtremalResult, GeodesicArc,
    HalfSpacePoint, HarnackBounds, WidderSolution,
};

use crate::error::{CliError, CliResult};
use crate::report::{
    Bounds, Check, Chords, Containment, Extremum, Geometry, Identity, PrefactorVariant, Report,
    Status, Verification, WeberZacher,
};
use crate::scenario::{Scenario, SCHEMA_VERSION};

pub const DEFAULT_IDENTITY_TOL: f64 = 1e-8;
pub const DEFAULT_VALUE_TOL: f64 = 1e-8;
pub const DEFAULT_LOCATION_TOL: f64 = 1e-6;
pub const DEFAULT_CONTAINMENT_TOL: f64 = 1e-9;

/// `|A′ − B′|` below this multiple of `max(t_A, t_B)` triggers a warning.
pub const NEAR_VERTICAL: f64 = 1e-6;

/// Grid points per axis used by `bounds --verify` (about 10⁶ points in total).
pub fn grid_resolution(n: usize) -> usize {
    match n {
        1 => 1_000_001,
        2 => 1_001,
        _ => 101,
    }
}

const PREFACTOR_NOTE: &str = "bounds with the (t_A/t_B) prefactor applied to C_*, C^*; \
the attained kernel ratios at the feet equal (t_B/t_A) C^((n+1)/2), so these values are shown for comparison only";

fn separation(a: &HalfSpacePoint, b: &HalfSpacePoint) -> f64 {
    a.x()
        .iter()
        .zip(b.x())
        .map(|(p, q)| (p - q).powi(2))
        .sum::<f64>()
        .sqrt()
}

fn geometry(a: &HalfSpacePoint, b: &HalfSpacePoint) -> CliResult<Geometry> {
    let arc = geodesic_through(a, b)?;
    let d_hyp = hyperbolic_distance(a, b)?;
    Ok(match &arc {
        GeodesicArc::Circular(c) => {
            let ch = chords(a, b, &arc)?;
            Geometry {
                kind: "circular".into(),
                center: c.foot_center.clone(),
                radius: Some(c.radius),
                direction: Some(c.direction.clone()),
                lower_foot: Some(c.lower_foot.clone()),
                upper_foot: Some(c.upper_foot.clone()),
                chords: Some(Chords {
                    d20: ch.d20,
                    d13: ch.d13,
                    d10: ch.d10,
                    d23: ch.d23,
                }),
                cross_ratio: ch.cross_ratio,
                hyperbolic_distance: d_hyp,
            }
        }
        GeodesicArc::Vertical { foot } => Geometry {
            kind: "vertical".into(),
            center: foot.clone(),
            radius: None,
            direction: None,
            lower_foot: None,
            upper_foot: None,
            chords: None,
            cross_ratio: d_hyp.exp(),
            hyperbolic_distance: d_hyp,
        },
    })
}

fn bounds_block(scenario: &Scenario, hb: &HarnackBounds) -> CliResult<Bounds> {
    let (a, b) = (&scenario.a, &scenario.b);
    let (pl, pu) = prefactor_variant(a, b, hb);
    let weber_zacher = match scenario.wz_constant {
        Some(c) if b.t() > a.t() => {
            let lower = weber_zacher_lower(a, b, c)?;
            Some(WeberZacher {
                constant: c,
                lower,
                below_sharp: lower <= hb.lower,
            })
        }
        _ => None,
    };
    Ok(Bounds {
        kappa0: hb.kappa0,
        c_star: hb.c_star,
        c_upper: hb.c_upper,
        lower: hb.lower,
        upper: hb.upper,
        lower_attained: hb.lower_attained,
        upper_attained: hb.upper_attained,
        extension: hb.is_extension(),
        prefactor_variant: PrefactorVariant {
            lower: pl,
            upper: pu,
            note: PREFACTOR_NOTE.into(),
        },
        weber_zacher,
    })
}

fn warnings(scenario: &Scenario, hb: &HarnackBounds) -> Vec<String> {
    let (a, b) = (&scenario.a, &scenario.b);
    let mut out = Vec::new();
    let d = separation(a, b);
    let scale = a.t().max(b.t());
    if d == 0.0 {
        out.push(
            "vertical pair: one foot is at infinity and the corresponding bound is a limit"
                .to_string(),
        );
    } else if d < NEAR_VERTICAL * scale {
        out.push(format!(
            "near-vertical pair: |A'-B'| = {d:e} is tiny relative to the times; the feet lie far from the pair and \
             the bounds are close to the vertical limits"
        ));
    }
    if hb.is_extension() {
        out.push(format!(
            "dimension {} >= 2: bounds are the extension of the one-dimensional theorem",
            hb.dimension
        ));
    }
    out
}

fn base_report(command: &str, scenario: &Scenario) -> CliResult<(Report, HarnackBounds)> {
    if scenario.a == scenario.b {
        return Err(CliError::Input("A and B coincide".into()));
    }
    let hb = sharp_bounds(&scenario.a, &scenario.b)?;
    let report = Report {
        schema: SCHEMA_VERSION,
        command: command.into(),
        status: Status::Ok,
        inputs: scenario.file.clone(),
        geometry: geometry(&scenario.a, &scenario.b)?,
        bounds: bounds_block(scenario, &hb)?,
        verification: None,
        warnings: warnings(scenario, &hb),
    };
    Ok((report, hb))
}

fn extremum(method: &str, r: &ExtremalResult) -> Extremum {
    Extremum {
        method: method.into(),
        argmin: r.argmin.clone(),
        min_value: r.min_value,
        argmax: r.argmax.clone(),
        max_value: r.max_value,
        min_interior: r.attained_flags.0,
        max_interior: r.attained_flags.1,
    }
}

fn location_gap(got: &[f64], want: &[f64]) -> f64 {
    let scale = want.iter().map(|v| v * v).sum::<f64>().sqrt().max(1.0);
    separation_raw(got, want) / scale
}

fn separation_raw(p: &[f64], q: &[f64]) -> f64 {
    p.iter()
        .zip(q)
        .map(|(a, b)| (a - b).powi(2))
        .sum::<f64>()
        .sqrt()
}

fn rel(got: f64, want: f64) -> f64 {
    (got - want).abs() / want.abs()
}

/// Compares an oracle result against the closed forms.
fn oracle_checks(
    method: &str,
    r: &ExtremalResult,
    hb: &HarnackBounds,
    arc: &GeodesicArc,
    value_tol: f64,
    location_tol: f64,
    warnings: &mut Vec<String>,
) -> Vec<Check> {
    let mut checks = Vec::new();
    let min_ok = r.attained_flags.0;
    let max_ok = r.attained_flags.1;
    match arc {
        GeodesicArc::Circular(c) => {
            if min_ok && max_ok {
                checks.push(Check::new(
                    &format!("{method}_min_value"),
                    rel(r.min_value, hb.lower),
                    value_tol,
                ));
                checks.push(Check::new(
                    &format!("{method}_max_value"),
                    rel(r.max_value, hb.upper),
                    value_tol,
                ));
                checks.push(Check::new(
                    &format!("{method}_argmin"),
                    location_gap(&r.argmin, &c.lower_foot),
                    location_tol,
                ));
                checks.push(Check::new(
                    &format!("{method}_argmax"),
                    location_gap(&r.argmax, &c.upper_foot),
                    location_tol,
                ));
            } else {
                warnings.push(format!(
                    "{method} oracle: the feet lie outside the search box; only containment of the sampled values is checked"
                ));
                checks.push(Check::new(
                    &format!("{method}_min_above_lower"),
                    (hb.lower - r.min_value) / hb.lower,
                    value_tol,
                ));
                checks.push(Check::new(
                    &format!("{method}_max_below_upper"),
                    (r.max_value - hb.upper) / hb.upper,
                    value_tol,
                ));
            }
        }
        GeodesicArc::Vertical { foot } => {
            // The attained bound sits at the common foot; the other is a limit.
            let (attained, arg, other, other_bound) = if hb.lower_attained {
                (
                    rel(r.min_value, hb.lower),
                    &r.argmin,
                    (r.max_value - hb.upper) / hb.upper,
                    "max_below_upper",
                )
            } else {
                (
                    rel(r.max_value, hb.upper),
                    &r.argmax,
                    (hb.lower - r.min_value) / hb.lower,
                    "min_above_lower",
                )
            };
            checks.push(Check::new(
                &format!("{method}_attained_value"),
                attained,
                value_tol,
            ));
            checks.push(Check::new(
                &format!("{method}_attained_location"),
                location_gap(arg, foot),
                location_tol,
            ));
            checks.push(Check::new(
                &format!("{method}_{other_bound}"),
                other,
                value_tol,
            ));
        }
    }
    checks
}

pub fn cmd_bounds(scenario: &Scenario, verify: bool, tol: Option<f64>) -> CliResult<Report> {
    let (mut report, hb) = base_report("bounds", scenario)?;
    if verify {
        let (a, b) = (&scenario.a, &scenario.b);
        let value_tol = tol.unwrap_or(DEFAULT_VALUE_TOL);
        let arc = geodesic_through(a, b)?;
        let mut v = Verification::default();
        let mut warnings = Vec::new();
        if separation(a, b) > 0.0 {
            let line = extremize_line(a, b)?;
            v.checks.extend(oracle_checks(
                "line",
                &line,
                &hb,
                &arc,
                value_tol,
                DEFAULT_LOCATION_TOL,
                &mut warnings,
            ));
            v.oracles.push(extremum("line", &line));
        }
        let n = a.dimension();
        if n <= 3 {
            let grid = extremize_grid(a, b, default_box_halfwidth(a, b), grid_resolution(n))?;
            v.checks.extend(oracle_checks(
                "grid",
                &grid,
                &hb,
                &arc,
                value_tol,
                DEFAULT_LOCATION_TOL,
                &mut warnings,
            ));
            v.oracles.push(extremum("grid", &grid));
        } else {
            warnings.push(format!("grid oracle skipped: dimension {n} > 3"));
        }
        report.warnings.extend(warnings);
        report.verification = Some(v);
    }
    Ok(report.finalize())
}

pub fn cmd_identity(scenario: &Scenario, tol: Option<f64>) -> CliResult<Report> {
    let (mut report, hb) = base_report("identity", scenario)?;
    let tol = tol.unwrap_or(DEFAULT_IDENTITY_TOL);
    let identity = match geodesic_through(&scenario.a, &scenario.b)? {
        GeodesicArc::Circular(_) => {
            let id = kernel_geometry_identity(&scenario.a, &scenario.b)?;
            Identity {
                lhs: id.lhs,
                rhs: id.rhs,
                gap: id.gap,
            }
        }
        GeodesicArc::Vertical { .. } => {
            // Limits of both sides as A′ → B′.
            let lhs = report.geometry.cross_ratio;
            let rhs = (hb.upper / hb.lower).powf(1.0 / (hb.dimension as f64 + 1.0));
            report
                .warnings
                .push("identity evaluated in the vertical limit".into());
            Identity {
                lhs,
                rhs,
                gap: (lhs - rhs).abs() / rhs,
            }
        }
    };
    report.verification = Some(Verification {
        checks: vec![Check::new("identity_gap", identity.gap, tol)],
        identity: Some(identity),
        ..Verification::default()
    });
    Ok(report.finalize())
}

pub fn cmd_widder(scenario: &Scenario, tol: Option<f64>) -> CliResult<Report> {
    let measure = scenario
        .measure
        .clone()
        .ok_or_else(|| CliError::Input("widder requires a measure in the scenario".into()))?;
    let (mut report, _) = base_report("widder", scenario)?;
    let tol = tol.unwrap_or(DEFAULT_CONTAINMENT_TOL);
    let sol = WidderSolution::new(measure, scenario.quadrature)?;
    let check = harnack_ratio(&sol, &scenario.a, &scenario.b)?;
    let lower_excess = (check.bounds.lower - check.ratio) / check.bounds.lower;
    let upper_excess = (check.ratio - check.bounds.upper) / check.bounds.upper;
    report.verification = Some(Verification {
        containment: Some(Containment {
            u_a: check.u_a,
            u_b: check.u_b,
            ratio: check.ratio,
            contained: check.contained,
            margin: check.margin,
            relative_margin: check.margin / check.ratio,
        }),
        checks: vec![
            Check::new("ratio_above_lower", lower_excess, tol),
            Check::new("ratio_below_upper", upper_excess, tol),
        ],
        ..Verification::default()
    });
    Ok(report.finalize())
}
