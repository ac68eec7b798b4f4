//! The Cauchy–Poisson kernel and the one-dimensional half-Laplacian.
//!
//! `K(x, t; y) = c_n t / (t² + |x − y|²)^{(n+1)/2}` with
//! `c_n = Γ((n+1)/2) / π^{(n+1)/2}`.
//!
//! The half-Laplacian is evaluated in its symmetrised second-difference form
//!
//! ```text
//! (−Δ)^{1/2} f(x) = (1/π) ∫₀^∞ (2f(x) − f(x+h) − f(x−h)) / h² dh
//! ```
//!
//! which is the standard positive operator. [`Convention::Flipped`] flips its
//! sign; under that convention the kernel does not solve `∂_t u + (−Δ)^{1/2} u = 0`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geometry::dist_sq;
use crate::quadrature::{integrate_half_line_with_noise, integrate_nested, QuadratureConfig};
use crate::special::ln_gamma;

/// Below this step the second difference is replaced by `−f″(x)`.
pub const SMALL_STEP: f64 = 1e-8;

const CURVATURE_STEP: f64 = 1e-4;

/// Sign convention for the half-Laplacian.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Convention {
    /// Positive singular-integral operator; the kernel solves the equation.
    #[default]
    Standard,
    /// The operator with an extra leading minus sign.
    Flipped,
}

impl Convention {
    fn sign(self) -> f64 {
        match self {
            Convention::Standard => 1.0,
            Convention::Flipped => -1.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Convention::Standard => "standard",
            Convention::Flipped => "flipped",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KernelParams {
    pub dimension: usize,
    pub convention: Convention,
}

impl Default for KernelParams {
    fn default() -> Self {
        Self {
            dimension: 1,
            convention: Convention::Standard,
        }
    }
}

/// `c_n = Γ((n+1)/2) / π^{(n+1)/2}`.
pub fn normalization_constant(n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::NonPositiveDimension);
    }
    Ok(ln_normalization(n).exp())
}

fn ln_normalization(n: usize) -> f64 {
    let half = (n as f64 + 1.0) / 2.0;
    ln_gamma(half) - half * PI.ln()
}

fn check_kernel_args(x: &[f64], t: f64, y: &[f64]) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            found: y.len(),
        });
    }
    if x.is_empty() {
        return Err(Error::NonPositiveDimension);
    }
    if !(t > 0.0) {
        return Err(Error::NonPositiveTime(t));
    }
    Ok(())
}

/// `K(x, t; y)` in dimension `n = x.len()`.
pub fn kernel(x: &[f64], t: f64, y: &[f64]) -> Result<f64> {
    check_kernel_args(x, t, y)?;
    let n = x.len();
    let q = t * t + dist_sq(x, y);
    Ok(normalization_constant(n)? * t / q.powf((n as f64 + 1.0) / 2.0))
}

/// `ln K(x, t; y)`; finite wherever the kernel underflows.
pub fn ln_kernel(x: &[f64], t: f64, y: &[f64]) -> Result<f64> {
    check_kernel_args(x, t, y)?;
    let n = x.len();
    let q = t * t + dist_sq(x, y);
    Ok(ln_normalization(n) + t.ln() - 0.5 * (n as f64 + 1.0) * q.ln())
}

/// `k(x, t) = (1/π) t / (t² + x²)`.
pub fn kernel_1d(x: f64, t: f64) -> f64 {
    t / (PI * (t * t + x * x))
}

/// `∂_t k(x, t) = (1/π)(x² − t²)/(t² + x²)²`.
pub fn kernel_time_derivative_1d(x: f64, t: f64) -> f64 {
    let q = t * t + x * x;
    (x * x - t * t) / (PI * q * q)
}

/// Exact standard half-Laplacian of `k(·, t)`, i.e. `−∂_t k`.
pub fn kernel_half_laplacian_exact(x: f64, t: f64) -> f64 {
    -kernel_time_derivative_1d(x, t)
}

/// The half-Laplacian of `f` at `x` by principal-value quadrature.
///
/// `f` must be C² near `x` and grow at most logarithmically.
pub fn half_laplacian_1d<F: Fn(f64) -> f64>(
    f: F,
    x: f64,
    cfg: &QuadratureConfig,
    convention: Convention,
) -> Result<f64> {
    cfg.validate()?;
    let fx = f(x);
    let e = CURVATURE_STEP * x.abs().max(1.0);
    let curvature = (f(x + e) - 2.0 * fx + f(x - e)) / (e * e);
    let integrand = |h: f64| {
        if h < SMALL_STEP {
            -curvature
        } else {
            (2.0 * fx - f(x + h) - f(x - h)) / (h * h)
        }
    };
    // Each second difference carries a rounding error of a few ulps of f(x),
    // amplified by 1/h².
    let level = 8.0 * f64::EPSILON * fx.abs();
    let noise = |lo: f64, hi: f64| level * (1.0 / lo.max(SMALL_STEP) - 1.0 / hi.max(SMALL_STEP));
    let integral = integrate_half_line_with_noise(integrand, noise, cfg)?;
    Ok(convention.sign() * integral / PI)
}

/// `∂_t k + (−Δ)^{1/2} k` at `(x, t)` under the standard convention.
pub fn kernel_residual(x: f64, t: f64, cfg: &QuadratureConfig) -> Result<f64> {
    kernel_residual_with(x, t, cfg, Convention::Standard)
}

pub fn kernel_residual_with(
    x: f64,
    t: f64,
    cfg: &QuadratureConfig,
    convention: Convention,
) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::NonPositiveTime(t));
    }
    let lap = half_laplacian_1d(|y| kernel_1d(y, t), x, cfg, convention)?;
    Ok(kernel_time_derivative_1d(x, t) + lap)
}

/// The Li–Yau expression for a solution `u` at `(x, t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LiYau {
    /// `−(−Δ)^{1/2} ln u (x)` by quadrature.
    pub value: f64,
    /// Closed form of the same quantity.
    pub reference: f64,
    /// `−1/(2t)`.
    pub threshold: f64,
    /// `value + 1/(2t)`; nonnegative iff the inequality holds at this point.
    pub gap: f64,
    pub reference_gap: f64,
}

impl LiYau {
    pub fn holds(&self) -> bool {
        self.gap >= 0.0
    }
}

/// Evaluates the Li–Yau expression for `ln u` given as a closure.
pub fn li_yau_expression<F: Fn(f64) -> f64>(
    ln_u: F,
    reference: f64,
    x: f64,
    t: f64,
    cfg: &QuadratureConfig,
    convention: Convention,
) -> Result<LiYau> {
    if !(t > 0.0) {
        return Err(Error::NonPositiveTime(t));
    }
    // `+ 0.0` turns a negated zero into +0.
    let value = -half_laplacian_1d(ln_u, x, cfg, convention)? + 0.0;
    let threshold = -1.0 / (2.0 * t);
    Ok(LiYau {
        value,
        reference,
        threshold,
        gap: value - threshold,
        reference_gap: reference - threshold,
    })
}

/// Li–Yau expression with the kernel `k(·, t)` as the test solution.
///
/// The standard half-Laplacian of `ln k(·, t)` is `2t/(t² + x²)`.
pub fn li_yau_gap(x: f64, t: f64, cfg: &QuadratureConfig, convention: Convention) -> Result<LiYau> {
    if !(t > 0.0) {
        return Err(Error::NonPositiveTime(t));
    }
    let reference = -convention.sign() * 2.0 * t / (t * t + x * x);
    let ln_k = |y: f64| (t / PI).ln() - (t * t + y * y).ln();
    li_yau_expression(ln_k, reference, x, t, cfg, convention)
}

/// Kernel mass over a large box, with an analytic bound on what lies outside.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MassEstimate {
    pub value: f64,
    pub tail_bound: f64,
}

/// `∫_{ℝⁿ} K(y, t; 0) dy` by tensor quadrature.
///
/// Each axis is integrated over `[−R, R]` in the variable `θ = atan(y/t)`.
/// The one-dimensional marginals of the kernel are Cauchy with scale `t`,
/// so the mass outside the box is at most `n · (2/π) · atan(t/R)`.
pub fn kernel_mass(n: usize, t: f64, cfg: &QuadratureConfig) -> Result<MassEstimate> {
    if n == 0 {
        return Err(Error::NonPositiveDimension);
    }
    if !(t > 0.0) {
        return Err(Error::NonPositiveTime(t));
    }
    if n > 3 {
        return Err(Error::UnsupportedDimension(n));
    }
    let target = cfg.rel_tol / 10.0;
    let radius = t * (n as f64) * 2.0 / (PI * target);
    let tail_bound = n as f64 * 2.0 / PI * (t / radius).atan();
    let theta_max = (radius / t).atan();
    let cn = normalization_constant(n)?;
    let power = (n as f64 + 1.0) / 2.0;
    let integrand = |theta: &[f64]| {
        let mut q = t * t;
        let mut jac = 1.0;
        for th in theta {
            let tan = th.tan();
            q += t * t * tan * tan;
            jac *= t * (1.0 + tan * tan);
        }
        cn * t / q.powf(power) * jac
    };
    let lo = vec![-theta_max; n];
    let hi = vec![theta_max; n];
    let value = integrate_nested(&integrand, &lo, &hi, cfg)?;
    Ok(MassEstimate { value, tail_bound })
}
