//! Brute-force extremisation of the shifted kernel ratio
//! `y ↦ K(B; y) / K(A; y)`.
//!
//! Two routes, neither of which touches the geodesic construction:
//!
//! * [`extremize_line`] restricts `y` to the line through `A′` and `B′`,
//!   solves the critical-point quadratic of the restricted profile and
//!   polishes each root with golden-section search;
//! * [`extremize_grid`] scans a full tensor grid over a box (`n ≤ 3`) and
//!   refines the best cells by derivative-free compass search.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{check_dims, HalfSpacePoint};
use crate::kernel::ln_kernel;

/// Largest grid accepted by [`extremize_grid`].
pub const MAX_GRID_POINTS: f64 = 1e7;

const GOLDEN_TOL: f64 = 1e-10;
const REFINE_HALVINGS: usize = 60;
const MAX_POLLS_PER_LEVEL: usize = 10_000;

#[derive(Debug, Clone, PartialEq)]
pub struct ExtremalResult {
    pub argmin: Vec<f64>,
    pub min_value: f64,
    pub argmax: Vec<f64>,
    pub max_value: f64,
    /// Whether the minimum / maximum were found in the interior of the search
    /// region rather than on its edge.
    pub attained_flags: (bool, bool),
}

/// `K(B.x − y, t_B) / K(A.x − y, t_A)`.
pub fn ratio_profile(a: &HalfSpacePoint, b: &HalfSpacePoint, y: &[f64]) -> Result<f64> {
    check_dims(a, b)?;
    Ok((ln_kernel(b.x(), b.t(), y)? - ln_kernel(a.x(), a.t(), y)?).exp())
}

/// `10 (|A′ − B′| + t_A + t_B)`.
pub fn default_box_halfwidth(a: &HalfSpacePoint, b: &HalfSpacePoint) -> f64 {
    let sep: f64 = a
        .x()
        .iter()
        .zip(b.x())
        .map(|(p, q)| (p - q).powi(2))
        .sum::<f64>()
        .sqrt();
    10.0 * (sep + a.t() + b.t())
}

fn golden_section<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = hi - inv_phi * (hi - lo);
    let mut d = lo + inv_phi * (hi - lo);
    let (mut fc, mut fd) = (f(c), f(d));
    while hi - lo > tol {
        if fc < fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - inv_phi * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + inv_phi * (hi - lo);
            fd = f(d);
        }
    }
    0.5 * (lo + hi)
}

/// Extremises the profile along the line `A′ + s u`.
pub fn extremize_line(a: &HalfSpacePoint, b: &HalfSpacePoint) -> Result<ExtremalResult> {
    check_dims(a, b)?;
    let diff: Vec<f64> = a.x().iter().zip(b.x()).map(|(p, q)| q - p).collect();
    let len = diff.iter().map(|v| v * v).sum::<f64>().sqrt();
    if len == 0.0 {
        return Err(Error::DegenerateDirection);
    }
    let u: Vec<f64> = diff.iter().map(|v| v / len).collect();
    let proj = |p: &[f64]| p.iter().zip(&u).map(|(x, e)| x * e).sum::<f64>();
    let (a1, a2) = (proj(a.x()), proj(b.x()));
    let (ta2, tb2) = (a.t() * a.t(), b.t() * b.t());

    // (s−a₁)(t_B² + (s−a₂)²) − (s−a₂)(t_A² + (s−a₁)²): the cubic terms cancel.
    let c2 = a1 - a2;
    let c1 = -(a1 - a2) * (a1 + a2) + tb2 - ta2;
    let c0 = (a1 - a2) * a1 * a2 - tb2 * a1 + ta2 * a2;
    let disc = c1 * c1 - 4.0 * c2 * c0;
    let q = -0.5 * (c1 + c1.signum() * disc.max(0.0).sqrt());
    let (r1, r2) = if q == 0.0 {
        let s = (-c0 / c2).sqrt();
        (-s, s)
    } else {
        (q / c2, c0 / q)
    };
    let (r1, r2) = (r1.min(r2), r1.max(r2));

    let point = |s: f64| -> Vec<f64> {
        // Offset from the projection of A′ so that s is an absolute abscissa.
        a.x()
            .iter()
            .zip(&u)
            .map(|(x, e)| x + (s - a1) * e)
            .collect()
    };
    let profile = |s: f64| ratio_profile(a, b, &point(s)).unwrap_or(f64::NAN);
    let (min_root, max_root) = if profile(r1) <= profile(r2) {
        (r1, r2)
    } else {
        (r2, r1)
    };
    let half = 0.25 * (r2 - r1);
    let tol = |s: f64| GOLDEN_TOL * s.abs().max(1.0);
    let critical = |s: f64| (c2 * s + c1) * s + c0;
    let (lo_min, hi_min) = (min_root - half, min_root + half);
    let (lo_max, hi_max) = (max_root - half, max_root + half);
    let s_min = golden_section(profile, lo_min, hi_min, tol(min_root));
    let s_max = golden_section(|s| -profile(s), lo_max, hi_max, tol(max_root));
    let (s_min, s_max) = (
        polish(critical, s_min, lo_min, hi_min),
        polish(critical, s_max, lo_max, hi_max),
    );
    let (argmin, argmax) = (point(s_min), point(s_max));
    Ok(ExtremalResult {
        min_value: ratio_profile(a, b, &argmin)?,
        max_value: ratio_profile(a, b, &argmax)?,
        argmin,
        argmax,
        attained_flags: (true, true),
    })
}

/// The profile is flat at an extremum, so value comparisons stall near
/// `√ε`. Bisection on the sign of the critical polynomial finishes the job,
/// first in a small window around `s` and otherwise over `[lo, hi]`.
fn polish<F: Fn(f64) -> f64>(g: F, s: f64, lo: f64, hi: f64) -> f64 {
    let w = 1e-4 * s.abs().max(1.0);
    let bracket = [(s - w, s + w), (lo, hi)]
        .into_iter()
        .find(|&(a, b)| g(a).signum() != g(b).signum());
    let Some((mut lo, mut hi)) = bracket else {
        return s;
    };
    let g_lo = g(lo).signum();
    for _ in 0..2100 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid).signum() == g_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[derive(Debug, Clone, Copy)]
struct Best {
    value: f64,
    index: usize,
}

impl Best {
    fn lower(self, other: Self) -> Self {
        match self.value.total_cmp(&other.value) {
            std::cmp::Ordering::Less => self,
            std::cmp::Ordering::Greater => other,
            std::cmp::Ordering::Equal => {
                if self.index <= other.index {
                    self
                } else {
                    other
                }
            }
        }
    }
}

/// Grid scan over `[m − h, m + h]ⁿ` (m the midpoint of `A′B′`, h the box
/// half-width) with `resolution` points per axis, followed by compass search.
pub fn extremize_grid(
    a: &HalfSpacePoint,
    b: &HalfSpacePoint,
    box_halfwidth: f64,
    resolution: usize,
) -> Result<ExtremalResult> {
    let n = check_dims(a, b)?;
    if n > 3 {
        return Err(Error::UnsupportedDimension(n));
    }
    let requested = (resolution as f64).powi(n as i32);
    if requested > MAX_GRID_POINTS {
        return Err(Error::ResolutionExceeded {
            requested,
            limit: MAX_GRID_POINTS,
        });
    }
    if resolution < 2 || !(box_halfwidth.is_finite() && box_halfwidth > 0.0) {
        return Err(Error::ResolutionExceeded {
            requested,
            limit: MAX_GRID_POINTS,
        });
    }
    let mid: Vec<f64> = a
        .x()
        .iter()
        .zip(b.x())
        .map(|(p, q)| 0.5 * (p + q))
        .collect();
    let spacing = 2.0 * box_halfwidth / (resolution - 1) as f64;
    let lo: Vec<f64> = mid.iter().map(|m| m - box_halfwidth).collect();
    let hi: Vec<f64> = mid.iter().map(|m| m + box_halfwidth).collect();
    let node = |index: usize| -> Vec<f64> {
        let mut rest = index;
        lo.iter()
            .map(|l| {
                let k = rest % resolution;
                rest /= resolution;
                l + k as f64 * spacing
            })
            .collect()
    };
    let total = requested as usize;

    let init = || {
        (
            Best {
                value: f64::INFINITY,
                index: usize::MAX,
            },
            Best {
                value: f64::INFINITY,
                index: usize::MAX,
            },
        )
    };
    let (best_min, best_max) = (0..total)
        .into_par_iter()
        .fold(init, |(mn, mx), i| {
            let v = ratio_profile(a, b, &node(i)).unwrap_or(f64::NAN);
            (
                mn.lower(Best { value: v, index: i }),
                mx.lower(Best {
                    value: -v,
                    index: i,
                }),
            )
        })
        .reduce(init, |(m1, x1), (m2, x2)| (m1.lower(m2), x1.lower(x2)));

    let profile = |y: &[f64]| ratio_profile(a, b, y).unwrap_or(f64::NAN);
    let argmin = compass_search(&profile, node(best_min.index), spacing, &lo, &hi);
    let argmax = compass_search(
        &|y: &[f64]| -profile(y),
        node(best_max.index),
        spacing,
        &lo,
        &hi,
    );
    let interior = |y: &[f64]| {
        y.iter()
            .zip(lo.iter().zip(&hi))
            .all(|(v, (l, h))| v - l > spacing && h - v > spacing)
    };
    Ok(ExtremalResult {
        min_value: profile(&argmin),
        max_value: profile(&argmax),
        attained_flags: (interior(&argmin), interior(&argmax)),
        argmin,
        argmax,
    })
}

/// Minimises `f` by polling `±step` along each axis, halving the step when
/// no poll improves. The iterate stays inside `[lo, hi]`.
fn compass_search<F: Fn(&[f64]) -> f64>(
    f: &F,
    start: Vec<f64>,
    step: f64,
    lo: &[f64],
    hi: &[f64],
) -> Vec<f64> {
    let mut x = start;
    let mut fx = f(&x);
    let mut step = step;
    for _ in 0..REFINE_HALVINGS {
        for _ in 0..MAX_POLLS_PER_LEVEL {
            let mut improved = false;
            for axis in 0..x.len() {
                for dir in [-1.0, 1.0] {
                    let mut trial = x.clone();
                    trial[axis] = (trial[axis] + dir * step).clamp(lo[axis], hi[axis]);
                    let ft = f(&trial);
                    if ft < fx {
                        x = trial;
                        fx = ft;
                        improved = true;
                    }
                }
            }
            if !improved {
                break;
            }
        }
        step *= 0.5;
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: &[f64], t: f64) -> HalfSpacePoint {
        HalfSpacePoint::new(x.to_vec(), t).unwrap()
    }

    #[test]
    fn profile_examples() {
        let (a, b) = (p(&[0.0], 1.0), p(&[1.0], 2.0));
        let foot = 2.0 - 5f64.sqrt();
        assert!((ratio_profile(&a, &b, &[foot]).unwrap() - 0.381_966_0).abs() < 1e-7);
        // 2 (1 + y²) / (4 + (y − 1)²) = 2 + 4/y + O(y⁻²)
        for y in [1e6, -1e6] {
            let exact = 2.0 * (1.0 + y * y) / (4.0 + (y - 1.0) * (y - 1.0));
            let got = ratio_profile(&a, &b, &[y]).unwrap();
            assert!((got - exact).abs() < 1e-14 && (got - 2.0).abs() < 5e-6);
        }
        let (a, b) = (p(&[-1.0], 1.0), p(&[1.0], 1.0));
        assert!((ratio_profile(&a, &b, &[0.0]).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn line_roots_worked_example() {
        // s² − 4s − 1 = 0
        let r = extremize_line(&p(&[0.0], 1.0), &p(&[1.0], 2.0)).unwrap();
        assert!((r.argmin[0] - (2.0 - 5f64.sqrt())).abs() < 1e-7);
        assert!((r.argmax[0] - (2.0 + 5f64.sqrt())).abs() < 1e-7, "{r:?}");
        assert!((r.min_value * r.max_value - 1.0).abs() < 1e-12);

        let r = extremize_line(&p(&[-1.0], 1.0), &p(&[1.0], 1.0)).unwrap();
        assert!((r.argmin[0] + 2f64.sqrt()).abs() < 1e-7);
        assert!((r.argmax[0] - 2f64.sqrt()).abs() < 1e-7);
    }

    #[test]
    fn line_roots_unchanged_by_flat_coordinate() {
        let r1 = extremize_line(&p(&[0.0], 1.0), &p(&[1.0], 2.0)).unwrap();
        let r2 = extremize_line(&p(&[0.0, 0.0], 1.0), &p(&[1.0, 0.0], 2.0)).unwrap();
        assert!((r2.argmin[0] - r1.argmin[0]).abs() < 1e-7 && r2.argmin[1].abs() < 1e-15);
        assert!((r2.argmax[0] - r1.argmax[0]).abs() < 1e-7);
        assert!((r2.min_value * r2.max_value - 0.5).abs() < 1e-12);
    }

    #[test]
    fn line_roots_near_vertical() {
        let (a, b) = (p(&[0.0, 0.0], 1.0), p(&[1e-9, 0.0], 2.0));
        let r = extremize_line(&a, &b).unwrap();
        let arc = crate::geometry::geodesic_through(&a, &b).unwrap();
        let c = arc.circular().unwrap();
        assert!((r.argmin[0] - c.lower_foot[0]).abs() < 1e-15, "{r:?}");
        assert!((r.argmax[0] - c.upper_foot[0]).abs() < 1e-6 * c.upper_foot[0]);
        assert!((r.min_value - 0.25).abs() < 1e-12 && (r.max_value - 2.0).abs() < 1e-12);
    }

    #[test]
    fn line_requires_direction() {
        assert_eq!(
            extremize_line(&p(&[1.0], 1.0), &p(&[1.0], 2.0)),
            Err(Error::DegenerateDirection)
        );
    }

    #[test]
    fn grid_one_dimension() {
        let (a, b) = (p(&[0.0], 1.0), p(&[1.0], 2.0));
        let r = extremize_grid(&a, &b, 50.0, 100_000).unwrap();
        assert!((r.argmin[0] + 0.236_07).abs() < 1e-5);
        assert!((r.argmax[0] - 4.236_07).abs() < 1e-5);
        assert_eq!(r.attained_flags, (true, true));
    }

    #[test]
    fn grid_two_dimensions() {
        let (a, b) = (p(&[0.0, 0.0], 1.0), p(&[1.0, 0.0], 2.0));
        let r = extremize_grid(&a, &b, 50.0, 400).unwrap();
        let s5 = 5f64.sqrt();
        assert!(
            (r.argmin[0] - (2.0 - s5)).abs() < 1e-6 && r.argmin[1].abs() < 1e-6,
            "{r:?}"
        );
        assert!((r.argmax[0] - (2.0 + s5)).abs() < 1e-6 && r.argmax[1].abs() < 1e-6);
    }

    #[test]
    fn perpendicular_offset_decreases_profile_at_max() {
        let (a, b) = (p(&[0.0, 0.0], 1.0), p(&[1.0, 0.0], 2.0));
        let top = 2.0 + 5f64.sqrt();
        let at = ratio_profile(&a, &b, &[top, 0.0]).unwrap();
        for rho in [1e-3, 0.1, 1.0, 10.0] {
            assert!(ratio_profile(&a, &b, &[top, rho]).unwrap() < at);
        }
    }

    #[test]
    fn grid_limits() {
        let (a, b) = (p(&[0.0; 3], 1.0), p(&[1.0, 0.0, 0.0], 2.0));
        assert!(matches!(
            extremize_grid(&a, &b, 10.0, 300),
            Err(Error::ResolutionExceeded { .. })
        ));
        let (a4, b4) = (p(&[0.0; 4], 1.0), p(&[1.0, 0.0, 0.0, 0.0], 2.0));
        assert_eq!(
            extremize_grid(&a4, &b4, 10.0, 10),
            Err(Error::UnsupportedDimension(4))
        );
    }

    #[test]
    fn vertical_grid_flags_unattained_supremum() {
        let (a, b) = (p(&[0.0], 1.0), p(&[0.0], 2.0));
        let r = extremize_grid(&a, &b, 30.0, 10_001).unwrap();
        assert!(r.argmin[0].abs() < 1e-6 && (r.min_value - 0.5).abs() < 1e-12);
        assert!(r.attained_flags.0 && !r.attained_flags.1);
    }
}
