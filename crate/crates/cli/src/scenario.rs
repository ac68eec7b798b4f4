//! Scenario files: the two points, optional initial data and numerical settings.

use std::path::Path;

use cauchy_harnack::widder::{Atom, GaussianBump, UniformBox, MAX_DENSITY_DIMENSION};
use cauchy_harnack::Error as CoreError;
use cauchy_harnack::{HalfSpacePoint, InitialMeasure, QuadratureConfig};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointSpec {
    pub x: Vec<f64>,
    pub t: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomSpec {
    pub y: Vec<f64>,
    pub mass: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaussianSpec {
    pub center: Vec<f64>,
    pub sigma: f64,
    pub mass: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoxSpec {
    pub center: Vec<f64>,
    pub halfwidths: Vec<f64>,
    pub height: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasureSpec {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub atoms: Vec<AtomSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub gaussians: Vec<GaussianSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub boxes: Vec<BoxSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadratureSpec {
    #[serde(default = "default_rel_tol")]
    pub rel_tol: f64,
    #[serde(default = "default_max_depth")]
    pub max_depth: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation_radius: Option<f64>,
}

fn default_rel_tol() -> f64 {
    QuadratureConfig::default().rel_tol
}

fn default_max_depth() -> u32 {
    QuadratureConfig::default().max_depth
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        let q = QuadratureConfig::default();
        Self {
            rel_tol: q.rel_tol,
            max_depth: q.max_depth,
            truncation_radius: q.truncation_radius,
        }
    }
}

/// The file as written. [`Scenario`] is the validated form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub schema: u32,
    pub dimension: usize,
    #[serde(rename = "A")]
    pub a: PointSpec,
    #[serde(rename = "B")]
    pub b: PointSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub measure: Option<MeasureSpec>,
    #[serde(default)]
    pub quadrature: QuadratureSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wz_constant: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct Scenario {
    pub file: ScenarioFile,
    pub a: HalfSpacePoint,
    pub b: HalfSpacePoint,
    pub measure: Option<InitialMeasure>,
    pub quadrature: QuadratureConfig,
    pub wz_constant: Option<f64>,
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Input(msg.into())
}

fn check_len(what: &str, v: &[f64], n: usize) -> CliResult<()> {
    if v.len() != n {
        return Err(invalid(format!(
            "{what} has {} coordinates, dimension is {n}",
            v.len()
        )));
    }
    if v.iter().any(|c| !c.is_finite()) {
        return Err(invalid(format!("{what} has non-finite coordinates")));
    }
    Ok(())
}

fn point(what: &str, p: &PointSpec, n: usize) -> CliResult<HalfSpacePoint> {
    check_len(&format!("{what}.x"), &p.x, n)?;
    HalfSpacePoint::new(p.x.clone(), p.t).map_err(|e| invalid(format!("{what}: {e}")))
}

impl MeasureSpec {
    pub fn to_measure(&self, n: usize) -> CliResult<InitialMeasure> {
        let mut m = InitialMeasure::default();
        for (i, a) in self.atoms.iter().enumerate() {
            check_len(&format!("measure.atoms[{i}].y"), &a.y, n)?;
            m.atoms.push(Atom {
                location: a.y.clone(),
                mass: a.mass,
            });
        }
        for (i, g) in self.gaussians.iter().enumerate() {
            check_len(&format!("measure.gaussians[{i}].center"), &g.center, n)?;
            m.gaussians.push(GaussianBump {
                center: g.center.clone(),
                sigma: g.sigma,
                mass: g.mass,
            });
        }
        for (i, b) in self.boxes.iter().enumerate() {
            check_len(&format!("measure.boxes[{i}].center"), &b.center, n)?;
            check_len(&format!("measure.boxes[{i}].halfwidths"), &b.halfwidths, n)?;
            m.boxes.push(UniformBox {
                center: b.center.clone(),
                halfwidths: b.halfwidths.clone(),
                height: b.height,
            });
        }
        if m.is_empty() {
            return Err(invalid("measure is empty"));
        }
        m.validate().map_err(|e| invalid(e.to_string()))?;
        if m.has_densities() && n > MAX_DENSITY_DIMENSION {
            return Err(invalid(CoreError::UnsupportedDimension(n).to_string()));
        }
        Ok(m)
    }
}

impl Scenario {
    pub fn from_file(file: ScenarioFile) -> CliResult<Self> {
        if file.schema != SCHEMA_VERSION {
            return Err(invalid(format!(
                "unsupported schema {} (expected {SCHEMA_VERSION})",
                file.schema
            )));
        }
        let n = file.dimension;
        if n == 0 {
            return Err(invalid("dimension must be at least 1"));
        }
        let a = point("A", &file.a, n)?;
        let b = point("B", &file.b, n)?;
        let measure = match &file.measure {
            Some(m) => Some(m.to_measure(n)?),
            None => None,
        };
        let quadrature = QuadratureConfig {
            rel_tol: file.quadrature.rel_tol,
            max_depth: file.quadrature.max_depth,
            truncation_radius: file.quadrature.truncation_radius,
        };
        quadrature.validate().map_err(|e| invalid(e.to_string()))?;
        if let Some(c) = file.wz_constant {
            if !(c.is_finite() && c > 0.0) {
                return Err(invalid(format!(
                    "wz_constant must be positive and finite (got {c})"
                )));
            }
        }
        Ok(Scenario {
            wz_constant: file.wz_constant,
            a,
            b,
            measure,
            quadrature,
            file,
        })
    }

    pub fn parse(text: &str) -> CliResult<Self> {
        let file: ScenarioFile =
            serde_json::from_str(text).map_err(|e| invalid(format!("malformed scenario: {e}")))?;
        Self::from_file(file)
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| invalid(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// `A = (0; 1)`, `B = (0; 2)` in one dimension.
    pub fn default_sweep_base() -> Self {
        let file = ScenarioFile {
            schema: SCHEMA_VERSION,
            dimension: 1,
            a: PointSpec {
                x: vec![0.0],
                t: 1.0,
            },
            b: PointSpec {
                x: vec![0.0],
                t: 2.0,
            },
            measure: None,
            quadrature: QuadratureSpec::default(),
            wz_constant: None,
        };
        Self::from_file(file).expect("default scenario is valid")
    }
}
