//! Sharp Harnack bounds for positive solutions of the half-Laplacian heat
//! equation `∂_t u + (−Δ)^{1/2} u = 0`, together with the Cauchy–Poisson
//! kernel and the half-space geodesics that locate the extremal data.
//!
//! Module map:
//!
//! - [`geometry`]: geodesic semicircles, boundary feet, chords, cross-ratio
//!   and hyperbolic distance in `ℝⁿ × (0, ∞)`.
//! - [`kernel`]: the kernel, its normalisation, the principal-value
//!   half-Laplacian, the equation residual and the Li–Yau expression.
//! - [`harnack`]: `κ₀`, `C_*`, `C^*`, the sharp bounds and the
//!   chord/kernel identity.
//! - [`widder`]: solutions built from nonnegative initial measures.
//! - [`oracle`]: brute-force extremisation used to check the closed forms.
//! - [`quadrature`], [`special`]: numerical support.

pub mod error;
pub mod geometry;
pub mod harnack;
pub mod kernel;
pub mod oracle;
pub mod quadrature;
pub mod special;
pub mod widder;

pub use error::{Error, Result};
pub use geometry::{
    boundary_feet, chords, geodesic_through, hyperbolic_distance, plane_membership, ArcKind,
    ChordSet, CircularArc, GeodesicArc, HalfSpacePoint,
};
pub use harnack::{
    c_star_pair, chordal_c_star, kappa0, kernel_geometry_identity, sharp_bounds,
    weber_zacher_lower, HarnackBounds, IdentityCheck,
};
pub use kernel::{
    half_laplacian_1d, kernel, kernel_residual, li_yau_gap, normalization_constant, Convention,
    KernelParams, LiYau,
};
pub use oracle::{extremize_grid, extremize_line, ratio_profile, ExtremalResult};
pub use quadrature::QuadratureConfig;
pub use widder::{
    harnack_ratio, sharpness_probe, InitialMeasure, RatioCheck, SharpnessProbe, WidderSolution,
};
