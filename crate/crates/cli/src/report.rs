//! Machine-readable report layout shared by `bounds`, `identity` and `widder`.

use serde::{Deserialize, Serialize};

use crate::scenario::ScenarioFile;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    VerificationFailure,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Chords {
    pub d20: f64,
    pub d13: f64,
    pub d10: f64,
    pub d23: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Geometry {
    /// `circular` or `vertical`.
    pub kind: String,
    /// Centre of the semicircle on the boundary, or the common foot of a
    /// vertical pair.
    pub center: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub direction: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lower_foot: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub upper_foot: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chords: Option<Chords>,
    pub cross_ratio: f64,
    pub hyperbolic_distance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrefactorVariant {
    pub lower: f64,
    pub upper: f64,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeberZacher {
    pub constant: f64,
    pub lower: f64,
    /// Whether the comparison bound lies below the sharp lower bound.
    pub below_sharp: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    pub kappa0: f64,
    pub c_star: f64,
    pub c_upper: f64,
    pub lower: f64,
    pub upper: f64,
    pub lower_attained: bool,
    pub upper_attained: bool,
    /// `n ≥ 2`: the bounds extend the one-dimensional theorem.
    pub extension: bool,
    pub prefactor_variant: PrefactorVariant,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weber_zacher: Option<WeberZacher>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    pub fn new(name: &str, value: f64, tolerance: f64) -> Self {
        Check {
            name: name.to_string(),
            value,
            tolerance,
            passed: value.is_finite() && value <= tolerance,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Identity {
    pub lhs: f64,
    pub rhs: f64,
    pub gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Extremum {
    pub method: String,
    pub argmin: Vec<f64>,
    pub min_value: f64,
    pub argmax: Vec<f64>,
    pub max_value: f64,
    pub min_interior: bool,
    pub max_interior: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Containment {
    pub u_a: f64,
    pub u_b: f64,
    pub ratio: f64,
    pub contained: bool,
    pub margin: f64,
    pub relative_margin: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Verification {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub identity: Option<Identity>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub oracles: Vec<Extremum>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub containment: Option<Containment>,
    pub checks: Vec<Check>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: u32,
    pub command: String,
    pub status: Status,
    pub inputs: ScenarioFile,
    pub geometry: Geometry,
    pub bounds: Bounds,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verification: Option<Verification>,
    pub warnings: Vec<String>,
}

impl Report {
    /// Sets the status from the checks.
    pub fn finalize(mut self) -> Self {
        let failed = self
            .verification
            .as_ref()
            .is_some_and(|v| v.checks.iter().any(|c| !c.passed));
        self.status = if failed {
            Status::VerificationFailure
        } else {
            Status::Ok
        };
        self
    }
}
