//! Positive solutions written as kernel convolutions `u = K * μ` with a
//! nonnegative initial measure `μ`.
//!
//! Atoms are summed in closed form. Gaussian bumps use the subordination
//! identity `K(·, t) = ∫₀^∞ G(·, s) η_t(s) ds`, where `G` is the heat kernel
//! and `η_t(s) = t / (2√π) s^{-3/2} e^{-t²/(4s)}` is the one-sided stable law
//! of index 1/2; convolving with a Gaussian of variance `σ²` only shifts the
//! heat time by `σ²/2`, leaving a one-dimensional integral. Uniform boxes are
//! integrated in closed form along the last axis and numerically over the
//! remaining ones.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geometry::{check_dims, dist_sq, geodesic_through, GeodesicArc, HalfSpacePoint};
use crate::harnack::{sharp_bounds, HarnackBounds};
use crate::kernel::{kernel, normalization_constant};
use crate::quadrature::{integrate, integrate_nested, QuadratureConfig};

/// Relative slack used when deciding containment.
pub const CONTAINMENT_EPS: f64 = 1e-9;

/// Highest dimension for which densities are integrated.
pub const MAX_DENSITY_DIMENSION: usize = 3;

#[derive(Debug, Clone, PartialEq)]
pub struct Atom {
    pub location: Vec<f64>,
    pub mass: f64,
}

/// Isotropic Gaussian density of total mass `mass`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianBump {
    pub center: Vec<f64>,
    pub sigma: f64,
    pub mass: f64,
}

/// Constant density `height` on `∏ [c_i − w_i, c_i + w_i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct UniformBox {
    pub center: Vec<f64>,
    pub halfwidths: Vec<f64>,
    pub height: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct InitialMeasure {
    pub atoms: Vec<Atom>,
    pub gaussians: Vec<GaussianBump>,
    pub boxes: Vec<UniformBox>,
}

fn positive(v: f64, what: &str) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidMeasure(format!(
            "{what} must be positive and finite, got {v}"
        )))
    }
}

fn finite_vec(v: &[f64], what: &str) -> Result<()> {
    if v.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(Error::InvalidMeasure(format!(
            "{what} has non-finite coordinates"
        )))
    }
}

impl InitialMeasure {
    pub fn atom(location: Vec<f64>, mass: f64) -> Self {
        Self {
            atoms: vec![Atom { location, mass }],
            ..Self::default()
        }
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty() && self.gaussians.is_empty() && self.boxes.is_empty()
    }

    pub fn has_densities(&self) -> bool {
        !(self.gaussians.is_empty() && self.boxes.is_empty())
    }

    /// Checks every invariant and returns the spatial dimension.
    pub fn validate(&self) -> Result<usize> {
        if self.is_empty() {
            return Err(Error::InvalidMeasure("measure has no components".into()));
        }
        let mut dims = Vec::new();
        for a in &self.atoms {
            positive(a.mass, "atom mass")?;
            finite_vec(&a.location, "atom location")?;
            dims.push(a.location.len());
        }
        for g in &self.gaussians {
            positive(g.mass, "gaussian mass")?;
            positive(g.sigma, "gaussian sigma")?;
            finite_vec(&g.center, "gaussian center")?;
            dims.push(g.center.len());
        }
        for b in &self.boxes {
            positive(b.height, "box height")?;
            finite_vec(&b.center, "box center")?;
            if b.halfwidths.len() != b.center.len() {
                return Err(Error::DimensionMismatch {
                    expected: b.center.len(),
                    found: b.halfwidths.len(),
                });
            }
            for w in &b.halfwidths {
                positive(*w, "box halfwidth")?;
            }
            dims.push(b.center.len());
        }
        let n = dims[0];
        if n == 0 {
            return Err(Error::NonPositiveDimension);
        }
        if let Some(&bad) = dims.iter().find(|&&d| d != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: bad,
            });
        }
        Ok(n)
    }

    /// Total mass of the measure.
    pub fn total_mass(&self) -> f64 {
        let atoms: f64 = self.atoms.iter().map(|a| a.mass).sum();
        let gauss: f64 = self.gaussians.iter().map(|g| g.mass).sum();
        let boxes: f64 = self
            .boxes
            .iter()
            .map(|b| b.height * b.halfwidths.iter().map(|w| 2.0 * w).product::<f64>())
            .sum();
        atoms + gauss + boxes
    }

    /// The same measure with every mass and height multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            atoms: self
                .atoms
                .iter()
                .map(|a| Atom {
                    mass: a.mass * factor,
                    ..a.clone()
                })
                .collect(),
            gaussians: self
                .gaussians
                .iter()
                .map(|g| GaussianBump {
                    mass: g.mass * factor,
                    ..g.clone()
                })
                .collect(),
            boxes: self
                .boxes
                .iter()
                .map(|b| UniformBox {
                    height: b.height * factor,
                    ..b.clone()
                })
                .collect(),
        }
    }
}

/// `u = K * μ` for a validated measure.
#[derive(Debug, Clone, PartialEq)]
pub struct WidderSolution {
    measure: InitialMeasure,
    dimension: usize,
    quadrature: QuadratureConfig,
}

impl WidderSolution {
    pub fn new(measure: InitialMeasure, quadrature: QuadratureConfig) -> Result<Self> {
        let dimension = measure.validate()?;
        quadrature.validate()?;
        if measure.has_densities() && dimension > MAX_DENSITY_DIMENSION {
            return Err(Error::UnsupportedDimension(dimension));
        }
        Ok(Self {
            measure,
            dimension,
            quadrature,
        })
    }

    pub fn measure(&self) -> &InitialMeasure {
        &self.measure
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn evaluate(&self, p: &HalfSpacePoint) -> Result<f64> {
        if p.dimension() != self.dimension {
            return Err(Error::DimensionMismatch {
                expected: self.dimension,
                found: p.dimension(),
            });
        }
        let mut total = 0.0;
        for a in &self.measure.atoms {
            total += a.mass * kernel(p.x(), p.t(), &a.location)?;
        }
        for g in &self.measure.gaussians {
            total += gaussian_convolution(p, g, &self.quadrature)?;
        }
        for b in &self.measure.boxes {
            total += box_convolution(p, b, &self.quadrature)?;
        }
        Ok(total)
    }
}

fn gaussian_convolution(
    p: &HalfSpacePoint,
    g: &GaussianBump,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    let n = p.dimension() as f64;
    let t = p.t();
    let rho2 = dist_sq(p.x(), &g.center);
    let shift = 0.5 * g.sigma * g.sigma;
    // ln[s η_t(s) G(ρ, s + σ²/2)] with s = e^v.
    let ln_prefactor = t.ln() - (2.0 * PI.sqrt()).ln();
    let integrand = |v: f64| {
        let s = v.exp();
        let tau = s + shift;
        let ln = ln_prefactor
            - 0.5 * v
            - t * t / (4.0 * s)
            - 0.5 * n * (4.0 * PI * tau).ln()
            - rho2 / (4.0 * tau);
        ln.exp()
    };
    let g_max = (2.0 * PI * g.sigma * g.sigma).powf(-0.5 * n);
    let scale = (t * t).max(g.sigma * g.sigma).max(rho2);
    let mut s_lo = t * t / 200.0;
    let mut s_hi = 1e6 * scale;
    for _ in 0..40 {
        let value = integrate(integrand, s_lo.ln(), s_hi.ln(), cfg)?;
        // P(S ≤ s₀) = erfc(t/(2√s₀)) ≤ e^{−t²/(4s₀)}, P(S > s₁) ≤ t/√(π s₁).
        let left = g_max * (-t * t / (4.0 * s_lo)).exp();
        let right = (4.0 * PI * s_hi).powf(-0.5 * n) * t / (PI * s_hi).sqrt();
        let target = 0.1 * cfg.rel_tol * value;
        if left <= target && right <= target {
            return Ok(g.mass * value);
        }
        if left > target {
            s_lo /= 4.0;
        }
        if right > target {
            s_hi *= 100.0;
        }
    }
    Err(Error::TailEstimateFailure(cfg.rel_tol))
}

/// `∫_{u₁}^{u₂} c_n t / (q + u²)^{(n+1)/2} du` with `q = t² + ρ²`.
fn line_mass(n: usize, cn: f64, t: f64, q: f64, u1: f64, u2: f64) -> f64 {
    let sq = q.sqrt();
    let atan_diff = |a: f64, b: f64| (b - a).atan2(1.0 + a * b);
    match n {
        1 => cn * t / sq * atan_diff(u1 / sq, u2 / sq),
        2 => {
            let f = |u: f64| u / (q * (q + u * u).sqrt());
            cn * t * (f(u2) - f(u1))
        }
        3 => {
            let rational = |u: f64| u / (2.0 * q * (q + u * u));
            cn * t * (rational(u2) - rational(u1) + atan_diff(u1 / sq, u2 / sq) / (2.0 * q * sq))
        }
        _ => unreachable!("density dimension is validated"),
    }
}

fn box_convolution(p: &HalfSpacePoint, b: &UniformBox, cfg: &QuadratureConfig) -> Result<f64> {
    let n = p.dimension();
    let cn = normalization_constant(n)?;
    let t = p.t();
    let last = n - 1;
    let u1 = b.center[last] - b.halfwidths[last] - p.x()[last];
    let u2 = b.center[last] + b.halfwidths[last] - p.x()[last];
    if n == 1 {
        return Ok(b.height * line_mass(1, cn, t, t * t, u1, u2));
    }
    let lo: Vec<f64> = (0..last).map(|i| b.center[i] - b.halfwidths[i]).collect();
    let hi: Vec<f64> = (0..last).map(|i| b.center[i] + b.halfwidths[i]).collect();
    let x = p.x();
    let integrand = |y: &[f64]| {
        let rho2: f64 = y.iter().zip(x).map(|(a, c)| (a - c) * (a - c)).sum();
        line_mass(n, cn, t, t * t + rho2, u1, u2)
    };
    Ok(b.height * integrate_nested(&integrand, &lo, &hi, cfg)?)
}

/// Outcome of comparing `u(B)/u(A)` with the sharp bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct RatioCheck {
    pub u_a: f64,
    pub u_b: f64,
    pub ratio: f64,
    pub bounds: HarnackBounds,
    pub contained: bool,
    /// `min(ratio − lower, upper − ratio)`; negative outside the bounds.
    pub margin: f64,
}

pub fn harnack_ratio(
    sol: &WidderSolution,
    a: &HalfSpacePoint,
    b: &HalfSpacePoint,
) -> Result<RatioCheck> {
    check_dims(a, b)?;
    let u_a = sol.evaluate(a)?;
    let u_b = sol.evaluate(b)?;
    let bounds = sharp_bounds(a, b)?;
    let ratio = u_b / u_a;
    let contained = ratio >= bounds.lower * (1.0 - CONTAINMENT_EPS)
        && ratio <= bounds.upper * (1.0 + CONTAINMENT_EPS);
    let margin = (ratio - bounds.lower).min(bounds.upper - ratio);
    Ok(RatioCheck {
        u_a,
        u_b,
        ratio,
        bounds,
        contained,
        margin,
    })
}

/// Attainment of the bounds by single atoms.
#[derive(Debug, Clone, PartialEq)]
pub struct SharpnessProbe {
    /// Relative gap for an atom at `x_*`; `None` when the lower bound is a
    /// limit at infinity.
    pub lower_gap: Option<f64>,
    pub upper_gap: Option<f64>,
    /// Vertical case: `(|y|, ratio)` for atoms at distance `10^k`, `k = 1..=6`,
    /// from the common foot along the first axis.
    pub limit_sequence: Vec<(f64, f64)>,
}

pub fn sharpness_probe(a: &HalfSpacePoint, b: &HalfSpacePoint) -> Result<SharpnessProbe> {
    let bounds = sharp_bounds(a, b)?;
    let atom_ratio = |y: Vec<f64>| -> Result<f64> {
        let sol = WidderSolution::new(InitialMeasure::atom(y, 1.0), QuadratureConfig::default())?;
        Ok(sol.evaluate(b)? / sol.evaluate(a)?)
    };
    let rel = |got: f64, want: f64| (got - want).abs() / want;
    match geodesic_through(a, b)? {
        GeodesicArc::Circular(c) => Ok(SharpnessProbe {
            lower_gap: Some(rel(atom_ratio(c.lower_foot.clone())?, bounds.lower)),
            upper_gap: Some(rel(atom_ratio(c.upper_foot.clone())?, bounds.upper)),
            limit_sequence: Vec::new(),
        }),
        GeodesicArc::Vertical { foot } => {
            let attained = if bounds.lower_attained {
                bounds.lower
            } else {
                bounds.upper
            };
            let at_foot = rel(atom_ratio(foot.clone())?, attained);
            let mut limit_sequence = Vec::with_capacity(6);
            for k in 1..=6 {
                let dist = 10f64.powi(k);
                let mut y = foot.clone();
                y[0] += dist;
                limit_sequence.push((dist, atom_ratio(y)?));
            }
            Ok(SharpnessProbe {
                lower_gap: bounds.lower_attained.then_some(at_foot),
                upper_gap: bounds.upper_attained.then_some(at_foot),
                limit_sequence,
            })
        }
    }
}
