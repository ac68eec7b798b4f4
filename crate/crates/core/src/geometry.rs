//! Geodesics of the upper half-space `ℝⁿ × (0, ∞)`.
//!
//! The geodesic through two points `A`, `B` whose boundary projections differ
//! is a semicircle centred on the boundary and lying in the vertical 2-plane
//! through `A′` and `B′`. Everything is computed in reduced coordinates: the
//! abscissa `s` along the unit direction `u = (B′ − A′)/|B′ − A′|` measured
//! from `A′`, so that `A′ ↦ 0` and `B′ ↦ d = |B′ − A′|`. In those coordinates
//! the centre is `α = (d² + t_B² − t_A²) / (2d)` and the radius is
//! `r = √(α² + t_A²)`.
//!
//! When `A′ = B′` the geodesic is a vertical ray and only one foot is finite.

use crate::error::{Error, Result};

/// Default tolerance for [`plane_membership`].
pub const PLANE_TOLERANCE: f64 = 1e-10;

/// A point `(x, t)` of the upper half-space.
#[derive(Debug, Clone, PartialEq)]
pub struct HalfSpacePoint {
    x: Vec<f64>,
    t: f64,
}

impl HalfSpacePoint {
    pub fn new(x: Vec<f64>, t: f64) -> Result<Self> {
        if x.is_empty() {
            return Err(Error::NonPositiveDimension);
        }
        if !t.is_finite() || x.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteCoordinate);
        }
        if t <= 0.0 {
            return Err(Error::NonPositiveTime(t));
        }
        Ok(Self { x, t })
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn dimension(&self) -> usize {
        self.x.len()
    }

    /// Returns the point with every spatial coordinate mapped by `f`.
    pub fn map_x(&self, f: impl Fn(&[f64]) -> Vec<f64>) -> Result<Self> {
        Self::new(f(&self.x), self.t)
    }
}

pub(crate) fn check_dims(a: &HalfSpacePoint, b: &HalfSpacePoint) -> Result<usize> {
    if a.dimension() != b.dimension() {
        return Err(Error::DimensionMismatch {
            expected: a.dimension(),
            found: b.dimension(),
        });
    }
    Ok(a.dimension())
}

pub(crate) fn dist_sq(p: &[f64], q: &[f64]) -> f64 {
    p.iter().zip(q).map(|(a, b)| (a - b) * (a - b)).sum()
}

fn dot(p: &[f64], q: &[f64]) -> f64 {
    p.iter().zip(q).map(|(a, b)| a * b).sum()
}

/// Semicircle through `A` and `B` with centre on the boundary.
#[derive(Debug, Clone, PartialEq)]
pub struct CircularArc {
    pub foot_center: Vec<f64>,
    pub radius: f64,
    /// Unit vector from `A′` towards `B′`.
    pub direction: Vec<f64>,
    /// `x_*`, the foot on `A`'s side.
    pub lower_foot: Vec<f64>,
    /// `x^*`, the foot on `B`'s side.
    pub upper_foot: Vec<f64>,
    /// `|B′ − A′|`.
    pub separation: f64,
    /// Reduced abscissa of the centre.
    pub center_abscissa: f64,
    /// `⟨A′ − x_*, u⟩ > 0`, computed without cancellation.
    pub lower_offset: f64,
    /// `⟨x^* − B′, u⟩ > 0`, computed without cancellation.
    pub upper_offset: f64,
}

impl CircularArc {
    /// Reduced abscissas `(s_*, 0, d, s^*)` of `x_*`, `A′`, `B′`, `x^*`.
    pub fn abscissas(&self) -> [f64; 4] {
        [
            -self.lower_offset,
            0.0,
            self.separation,
            self.separation + self.upper_offset,
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArcKind {
    Circular,
    Vertical,
}

/// The geodesic joining two half-space points.
#[derive(Debug, Clone, PartialEq)]
pub enum GeodesicArc {
    Circular(CircularArc),
    /// Vertical ray over the common projection; the second foot is at infinity.
    Vertical {
        foot: Vec<f64>,
    },
}

impl GeodesicArc {
    pub fn kind(&self) -> ArcKind {
        match self {
            GeodesicArc::Circular(_) => ArcKind::Circular,
            GeodesicArc::Vertical { .. } => ArcKind::Vertical,
        }
    }

    pub fn circular(&self) -> Result<&CircularArc> {
        match self {
            GeodesicArc::Circular(arc) => Ok(arc),
            GeodesicArc::Vertical { .. } => Err(Error::VerticalArc),
        }
    }
}

/// Builds the geodesic through `a` and `b`.
pub fn geodesic_through(a: &HalfSpacePoint, b: &HalfSpacePoint) -> Result<GeodesicArc> {
    check_dims(a, b)?;
    let sep_sq = dist_sq(a.x(), b.x());
    if sep_sq == 0.0 {
        if a.t() == b.t() {
            return Err(Error::IdenticalPoints);
        }
        return Ok(GeodesicArc::Vertical {
            foot: a.x().to_vec(),
        });
    }
    let d = sep_sq.sqrt();
    let direction: Vec<f64> = a.x().iter().zip(b.x()).map(|(p, q)| (q - p) / d).collect();
    let (ta, tb) = (a.t(), b.t());

    // 1-D problem with a₁ = 0, a₂ = d.
    let alpha = (d * d + tb * tb - ta * ta) / (2.0 * d);
    let radius = alpha.hypot(ta);
    // r − α and r − (d − α) without cancellation: r² − α² = t_A², r² − (d − α)² = t_B².
    let lower_offset = if alpha > 0.0 {
        ta * ta / (radius + alpha)
    } else {
        radius - alpha
    };
    let beta = d - alpha;
    let upper_offset = if beta > 0.0 {
        tb * tb / (radius + beta)
    } else {
        radius - beta
    };

    let along = |s: f64| -> Vec<f64> {
        a.x()
            .iter()
            .zip(&direction)
            .map(|(p, u)| p + s * u)
            .collect()
    };
    Ok(GeodesicArc::Circular(CircularArc {
        foot_center: along(alpha),
        radius,
        lower_foot: along(-lower_offset),
        upper_foot: along(d + upper_offset),
        direction,
        separation: d,
        center_abscissa: alpha,
        lower_offset,
        upper_offset,
    }))
}

/// The boundary feet `(x_*, x^*)` of a circular geodesic.
pub fn boundary_feet(arc: &GeodesicArc) -> Result<(Vec<f64>, Vec<f64>)> {
    let arc = arc.circular()?;
    Ok((arc.lower_foot.clone(), arc.upper_foot.clone()))
}

/// Whether `q = (x, t)` lies in the vertical 2-plane through `A′` and `B′`.
///
/// `q` holds the `n` spatial coordinates followed by `t`; `t` is unconstrained.
pub fn plane_membership(
    a: &HalfSpacePoint,
    b: &HalfSpacePoint,
    q: &[f64],
    tol: f64,
) -> Result<bool> {
    let n = check_dims(a, b)?;
    if q.len() != n + 1 {
        return Err(Error::DimensionMismatch {
            expected: n + 1,
            found: q.len(),
        });
    }
    let sep_sq = dist_sq(a.x(), b.x());
    if sep_sq == 0.0 {
        return Err(Error::DegenerateDirection);
    }
    let d = sep_sq.sqrt();
    let rel: Vec<f64> = q[..n].iter().zip(a.x()).map(|(p, o)| p - o).collect();
    let u: Vec<f64> = a.x().iter().zip(b.x()).map(|(p, q)| (q - p) / d).collect();
    let along = dot(&rel, &u);
    let perp_sq: f64 = rel
        .iter()
        .zip(&u)
        .map(|(r, ui)| (r - along * ui).powi(2))
        .sum();
    Ok(perp_sq.sqrt() <= tol)
}

/// The four chords from `A` and `B` to the feet, and their cross-ratio.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChordSet {
    /// `|B x_*|`
    pub d20: f64,
    /// `|A x^*|`
    pub d13: f64,
    /// `|A x_*|`
    pub d10: f64,
    /// `|B x^*|`
    pub d23: f64,
    pub cross_ratio: f64,
}

impl ChordSet {
    pub fn log_cross_ratio(&self) -> f64 {
        self.d20.ln() + self.d13.ln() - self.d10.ln() - self.d23.ln()
    }
}

/// Chords from `a` and `b` to the feet of `arc`.
///
/// `arc` must be the geodesic through `a` and `b`, built in either order.
/// With the arc of `(A, B)`, `chords(B, A, arc)` inverts the cross-ratio.
pub fn chords(a: &HalfSpacePoint, b: &HalfSpacePoint, arc: &GeodesicArc) -> Result<ChordSet> {
    check_dims(a, b)?;
    let arc = arc.circular()?;
    let d = arc.separation;
    let (ta, tb) = (a.t(), b.t());
    let along = |q: &HalfSpacePoint| {
        q.x()
            .iter()
            .zip(&arc.foot_center)
            .zip(&arc.direction)
            .map(|((x, c), u)| (x - c) * u)
            .sum::<f64>()
    };
    let (lo, up) = (arc.lower_offset, arc.upper_offset);
    let (d10, d20, d13, d23) = if along(a) <= along(b) {
        (
            ta.hypot(lo),
            tb.hypot(d + lo),
            ta.hypot(d + up),
            tb.hypot(up),
        )
    } else {
        (
            ta.hypot(d + lo),
            tb.hypot(lo),
            ta.hypot(up),
            tb.hypot(d + up),
        )
    };
    Ok(ChordSet {
        d20,
        d13,
        d10,
        d23,
        cross_ratio: (d20 * d13) / (d10 * d23),
    })
}

/// Hyperbolic distance between `a` and `b` in the half-space model.
///
/// Coincident points give 0 and vertical pairs give `|ln(t_B / t_A)|`.
pub fn hyperbolic_distance(a: &HalfSpacePoint, b: &HalfSpacePoint) -> Result<f64> {
    match geodesic_through(a, b) {
        Err(Error::IdenticalPoints) => Ok(0.0),
        Err(e) => Err(e),
        Ok(GeodesicArc::Vertical { .. }) => Ok((b.t() / a.t()).ln().abs()),
        Ok(arc) => Ok(chords(a, b, &arc)?.log_cross_ratio().abs()),
    }
}
