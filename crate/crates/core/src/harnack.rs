//! Sharp two-sided Harnack bounds for positive solutions of
//! `∂_t u + (−Δ)^{1/2} u = 0`.
//!
//! For every positive solution `u = K * μ` with `μ ≥ 0`,
//!
//! ```text
//! K(B; x_*) / K(A; x_*)  ≤  u(B) / u(A)  ≤  K(B; x^*) / K(A; x^*)
//! ```
//!
//! where `x_*`, `x^*` are the boundary feet of the geodesic through `A` and
//! `B`. The bounds are therefore *defined* as kernel ratios at the feet. In
//! one dimension they equal `(t_B/t_A) C_*` and `(t_B/t_A) C^*`; the variant
//! with prefactor `t_A/t_B` is exposed separately by [`prefactor_variant`]
//! for side-by-side reporting only. For `n ≥ 2` the bounds are the global
//! extrema of the same kernel ratio.

use crate::error::{Error, Result};
use crate::geometry::dist_sq;
use crate::geometry::{check_dims, chords, geodesic_through, GeodesicArc, HalfSpacePoint};

/// `κ₀ = (|Δx|² + (t_B − t_A)²)(|Δx|² + (t_B + t_A)²)`.
pub fn kappa0(a: &HalfSpacePoint, b: &HalfSpacePoint) -> Result<f64> {
    check_dims(a, b)?;
    let dx2 = dist_sq(a.x(), b.x());
    let (ta, tb) = (a.t(), b.t());
    Ok((dx2 + (tb - ta).powi(2)) * (dx2 + (tb + ta).powi(2)))
}

/// The closed-form constants `(C_*, C^*)`.
///
/// With `D = t_B² − t_A²`, `P = D + |Δx|²`, `M = D − |Δx|²`:
/// `C_* = (√κ₀ − P)/(√κ₀ − M)` and `C^* = (√κ₀ + P)/(√κ₀ + M)`.
/// Since `κ₀ − P² = 4 t_A² |Δx|²` and `κ₀ − M² = 4 t_B² |Δx|²`, each factor
/// is evaluated in whichever of its two equivalent forms avoids cancellation.
pub fn c_star_pair(a: &HalfSpacePoint, b: &HalfSpacePoint) -> Result<(f64, f64)> {
    let k0 = kappa0(a, b)?;
    let dx2 = dist_sq(a.x(), b.x());
    if dx2 == 0.0 {
        return Err(Error::DegenerateConfiguration);
    }
    let (ta, tb) = (a.t(), b.t());
    let root = k0.sqrt();
    let d = tb * tb - ta * ta;
    let p = d + dx2;
    let m = d - dx2;
    let wp = 4.0 * ta * ta * dx2;
    let wm = 4.0 * tb * tb * dx2;
    let minus = |q: f64, w: f64| if q > 0.0 { w / (root + q) } else { root - q };
    let plus = |q: f64, w: f64| if q < 0.0 { w / (root - q) } else { root + q };
    Ok((minus(p, wp) / minus(m, wm), plus(p, wp) / plus(m, wm)))
}

/// `(C_*, C^*)` as ratios of signed boundary offsets `(x₁ − x_*)/(x₂ − x_*)`,
/// `(x₁ − x^*)/(x₂ − x^*)` along the line `A′B′`.
pub fn chordal_c_star(a: &HalfSpacePoint, b: &HalfSpacePoint) -> Result<(f64, f64)> {
    let arc = geodesic_through(a, b)?;
    let arc = arc.circular()?;
    let d = arc.separation;
    let lower = arc.lower_offset / (d + arc.lower_offset);
    let upper = (d + arc.upper_offset) / arc.upper_offset;
    Ok((lower, upper))
}

/// `K(B; y) / K(A; y)`; the normalisation constant cancels.
pub fn kernel_ratio(a: &HalfSpacePoint, b: &HalfSpacePoint, y: &[f64]) -> Result<f64> {
    let n = check_dims(a, b)?;
    if y.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: y.len(),
        });
    }
    let qa = a.t() * a.t() + dist_sq(a.x(), y);
    let qb = b.t() * b.t() + dist_sq(b.x(), y);
    Ok(b.t() / a.t() * (qa / qb).powf((n as f64 + 1.0) / 2.0))
}

/// Sharp Harnack bounds for the pair `(A, B)`.
#[derive(Debug, Clone, PartialEq)]
pub struct HarnackBounds {
    pub kappa0: f64,
    pub c_star: f64,
    pub c_upper: f64,
    pub lower: f64,
    pub upper: f64,
    pub lower_attained: bool,
    pub upper_attained: bool,
    pub dimension: usize,
}

impl HarnackBounds {
    /// `n ≥ 2` bounds extend the one-dimensional theorem.
    pub fn is_extension(&self) -> bool {
        self.dimension >= 2
    }
}

/// Computes the sharp bounds as kernel ratios at the geodesic feet.
///
/// For a vertical pair the finite foot gives `(t_A/t_B)ⁿ` and the foot at
/// infinity gives the unattained limit `t_B/t_A`.
pub fn sharp_bounds(a: &HalfSpacePoint, b: &HalfSpacePoint) -> Result<HarnackBounds> {
    let n = check_dims(a, b)?;
    let arc = geodesic_through(a, b)?;
    let k0 = kappa0(a, b)?;
    let (ta, tb) = (a.t(), b.t());
    match arc {
        GeodesicArc::Circular(ref c) => {
            let (c_star, c_upper) = c_star_pair(a, b)?;
            Ok(HarnackBounds {
                kappa0: k0,
                c_star,
                c_upper,
                lower: kernel_ratio(a, b, &c.lower_foot)?,
                upper: kernel_ratio(a, b, &c.upper_foot)?,
                lower_attained: true,
                upper_attained: true,
                dimension: n,
            })
        }
        GeodesicArc::Vertical { ref foot } => {
            let at_foot = kernel_ratio(a, b, foot)?;
            let at_infinity = tb / ta;
            let ratio_sq = (ta / tb).powi(2);
            // Limits of the closed forms as |Δx| → 0.
            let (c_star, c_upper) = if tb > ta {
                (ratio_sq, 1.0)
            } else {
                (1.0, ratio_sq)
            };
            let forward = tb > ta;
            Ok(HarnackBounds {
                kappa0: k0,
                c_star,
                c_upper,
                lower: if forward { at_foot } else { at_infinity },
                upper: if forward { at_infinity } else { at_foot },
                lower_attained: forward,
                upper_attained: !forward,
                dimension: n,
            })
        }
    }
}

/// `(t_A/t_B) C_*` and `(t_A/t_B) C^*`, the bounds with the inverted time
/// prefactor. They disagree with the attained kernel ratios whenever
/// `t_A ≠ t_B`; reported for comparison only.
pub fn prefactor_variant(
    a: &HalfSpacePoint,
    b: &HalfSpacePoint,
    bounds: &HarnackBounds,
) -> (f64, f64) {
    let f = a.t() / b.t();
    (f * bounds.c_star, f * bounds.c_upper)
}

/// Both sides of the chord/kernel identity and their relative gap.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityCheck {
    /// `D₂₀ D₁₃ / (D₁₀ D₂₃)`.
    pub lhs: f64,
    /// `(K(A,x_*)/K(B,x_*) · K(B,x^*)/K(A,x^*))^{1/(n+1)}`.
    pub rhs: f64,
    pub gap: f64,
}

pub fn kernel_geometry_identity(a: &HalfSpacePoint, b: &HalfSpacePoint) -> Result<IdentityCheck> {
    let n = check_dims(a, b)?;
    let arc = geodesic_through(a, b)?;
    let ch = chords(a, b, &arc)?;
    let c = arc.circular()?;
    let at_lower = kernel_ratio(a, b, &c.lower_foot)?;
    let at_upper = kernel_ratio(a, b, &c.upper_foot)?;
    let lhs = ch.cross_ratio;
    let rhs = (at_upper / at_lower).powf(1.0 / (n as f64 + 1.0));
    Ok(IdentityCheck {
        lhs,
        rhs,
        gap: (lhs - rhs).abs() / rhs,
    })
}

/// `√(t_A/t_B) · exp(−C [1 + |Δx|²/(t_B − t_A)²])`.
pub fn weber_zacher_lower(a: &HalfSpacePoint, b: &HalfSpacePoint, constant: f64) -> Result<f64> {
    check_dims(a, b)?;
    if !(constant.is_finite() && constant >= 0.0) {
        return Err(Error::InvalidConstant(constant));
    }
    let (ta, tb) = (a.t(), b.t());
    if tb <= ta {
        return Err(Error::NonForwardTimes { t_a: ta, t_b: tb });
    }
    let dx2 = dist_sq(a.x(), b.x());
    Ok((ta / tb).sqrt() * (-constant * (1.0 + dx2 / (tb - ta).powi(2))).exp())
}
