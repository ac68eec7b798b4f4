//! Globally adaptive Gauss–Kronrod (G7/K15) quadrature.
//!
//! The integrator keeps every subinterval in a max-heap keyed on its error
//! estimate and bisects the worst one until the summed error drops below
//! `rel_tol` times the running L1 estimate. Bisection depth is capped by
//! [`QuadratureConfig::max_depth`].
//!
//! Semi-infinite ranges are split at a truncation radius `R`; the tail
//! `[R, ∞)` is mapped onto `(0, R^{-1/2}]` through `h = σ^{-2}`, which turns
//! integrands decaying like `h^{-2}` into ones vanishing linearly at `σ = 0`
//! and leaves only an integrable logarithmic weight for `O(log h)` growth.

use std::cell::{Cell, RefCell};
use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights for XGK[1], XGK[3], XGK[5] and the centre.
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Upper bound on live subintervals before the integrator gives up.
const MAX_INTERVALS: usize = 200_000;

/// Accuracy and budget settings shared by every quadrature in the crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub max_depth: u32,
    /// Split point for semi-infinite integrals; `None` selects 1.
    pub truncation_radius: Option<f64>,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            max_depth: 40,
            truncation_radius: None,
        }
    }
}

impl QuadratureConfig {
    pub fn with_rel_tol(rel_tol: f64) -> Self {
        Self {
            rel_tol,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol <= 1e-2) {
            return Err(Error::InvalidQuadratureConfig(format!(
                "rel_tol must lie in (0, 1e-2], got {}",
                self.rel_tol
            )));
        }
        if self.max_depth == 0 || self.max_depth > 64 {
            return Err(Error::InvalidQuadratureConfig(format!(
                "max_depth must lie in 1..=64, got {}",
                self.max_depth
            )));
        }
        if let Some(r) = self.truncation_radius {
            if !(r.is_finite() && r > 0.0) {
                return Err(Error::InvalidQuadratureConfig(format!(
                    "truncation_radius must be positive and finite, got {r}"
                )));
            }
        }
        Ok(())
    }

    pub fn radius(&self) -> f64 {
        self.truncation_radius.unwrap_or(1.0)
    }
}

/// A single G7/K15 application on `[a, b]`.
#[derive(Debug, Clone, Copy)]
struct Rule {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    resabs: f64,
    depth: u32,
}

impl PartialEq for Rule {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}

impl Eq for Rule {}

impl PartialOrd for Rule {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rule {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gk15<F: Fn(f64) -> f64, N: Fn(f64, f64) -> f64>(
    f: &F,
    noise: &N,
    a: f64,
    b: f64,
    depth: u32,
) -> Rule {
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(centre);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut resabs = fc.abs() * WGK[7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(centre - dx);
        let f2 = f(centre + dx);
        kronrod += WGK[j] * (f1 + f2);
        resabs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let value = kronrod * half;
    let error = ((kronrod - gauss) * half).abs();
    Rule {
        a,
        b,
        value,
        // A panel whose disagreement is within the rounding level of the
        // integrand cannot be improved by bisection.
        error: if error <= noise(a.min(b), a.max(b)) {
            0.0
        } else {
            error
        },
        resabs: resabs * half.abs(),
        depth,
    }
}

/// Result of an adaptive integration with its error bookkeeping.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
    /// Integral of |f| as seen by the Kronrod rule.
    pub l1: f64,
    pub intervals: usize,
}

/// Integrates `f` over the finite interval `[a, b]`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<f64> {
    integrate_estimate(&f, a, b, cfg).map(|e| e.value)
}

pub fn integrate_estimate<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    cfg: &QuadratureConfig,
) -> Result<Estimate> {
    integrate_estimate_with_noise(f, &|_, _| 0.0, a, b, cfg)
}

/// As [`integrate_estimate`], with `noise(lo, hi)` bounding the absolute
/// rounding error of `∫_lo^hi f`. Panels below that level are not refined
/// and do not count towards the reported error.
pub fn integrate_estimate_with_noise<F: Fn(f64) -> f64, N: Fn(f64, f64) -> f64>(
    f: &F,
    noise: &N,
    a: f64,
    b: f64,
    cfg: &QuadratureConfig,
) -> Result<Estimate> {
    cfg.validate()?;
    if a == b {
        return Ok(Estimate {
            value: 0.0,
            error: 0.0,
            l1: 0.0,
            intervals: 0,
        });
    }
    let first = gk15(f, noise, a, b, 0);
    if !first.value.is_finite() {
        return Err(Error::QuadratureNonConvergence {
            tolerance: cfg.rel_tol,
            max_depth: cfg.max_depth,
            estimate: f64::INFINITY,
        });
    }

    let mut heap = BinaryHeap::new();
    let mut value = first.value;
    let mut error = first.error;
    let mut l1 = first.resabs;
    heap.push(first);

    loop {
        let tol = cfg.rel_tol * l1;
        // Roundoff floor: the estimate cannot resolve below a few ulps of |f|.
        let floor = 50.0 * f64::EPSILON * l1;
        if error <= tol.max(floor) || l1 == 0.0 {
            return Ok(Estimate {
                value,
                error,
                l1,
                intervals: heap.len(),
            });
        }
        let worst = heap.pop().expect("heap is never empty");
        if worst.depth >= cfg.max_depth || heap.len() + 2 > MAX_INTERVALS {
            return Err(Error::QuadratureNonConvergence {
                tolerance: tol,
                max_depth: cfg.max_depth,
                estimate: error,
            });
        }
        let mid = 0.5 * (worst.a + worst.b);
        let left = gk15(f, noise, worst.a, mid, worst.depth + 1);
        let right = gk15(f, noise, mid, worst.b, worst.depth + 1);
        if !(left.value.is_finite() && right.value.is_finite()) {
            return Err(Error::QuadratureNonConvergence {
                tolerance: tol,
                max_depth: cfg.max_depth,
                estimate: f64::INFINITY,
            });
        }
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        l1 += left.resabs + right.resabs - worst.resabs;
        heap.push(left);
        heap.push(right);
        // Re-sum occasionally so the running totals do not drift.
        if heap.len() % 64 == 0 {
            value = heap.iter().map(|r| r.value).sum();
            error = heap.iter().map(|r| r.error).sum();
            l1 = heap.iter().map(|r| r.resabs).sum();
        }
    }
}

/// Integrates `g` over `[0, ∞)` as a head on `[0, R]` plus a mapped tail.
///
/// A tail that fails to converge is reported as [`Error::TailEstimateFailure`].
pub fn integrate_half_line<F: Fn(f64) -> f64>(g: F, cfg: &QuadratureConfig) -> Result<f64> {
    integrate_half_line_with_noise(g, |_, _| 0.0, cfg)
}

/// As [`integrate_half_line`], with a rounding bound in the original
/// variable (see [`integrate_estimate_with_noise`]).
pub fn integrate_half_line_with_noise<F: Fn(f64) -> f64, N: Fn(f64, f64) -> f64>(
    g: F,
    noise: N,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    cfg.validate()?;
    let radius = cfg.radius();
    let head = integrate_estimate_with_noise(&g, &noise, 0.0, radius, cfg)?;
    let tail_noise = |s1: f64, s2: f64| noise(1.0 / (s2 * s2), 1.0 / (s1 * s1));
    let tail_fn = |sigma: f64| {
        if sigma == 0.0 {
            return 0.0;
        }
        let s2 = sigma * sigma;
        2.0 * g(1.0 / s2) / (s2 * sigma)
    };
    let tail =
        integrate_estimate_with_noise(&tail_fn, &tail_noise, 0.0, radius.sqrt().recip(), cfg)
            .map_err(|e| match e {
                Error::QuadratureNonConvergence { estimate, .. } => {
                    Error::TailEstimateFailure(estimate)
                }
                other => other,
            })?;
    Ok(head.value + tail.value)
}

/// Iterated adaptive quadrature over the box `∏ [lo_i, hi_i]`.
///
/// Inner integrals run at a tenth of the outer tolerance so that their
/// error does not dominate the outer error estimate.
pub fn integrate_nested<F: Fn(&[f64]) -> f64>(
    f: &F,
    lo: &[f64],
    hi: &[f64],
    cfg: &QuadratureConfig,
) -> Result<f64> {
    cfg.validate()?;
    if lo.len() != hi.len() {
        return Err(Error::DimensionMismatch {
            expected: lo.len(),
            found: hi.len(),
        });
    }
    if lo.is_empty() {
        return Ok(f(&[]));
    }
    let point = RefCell::new(vec![0.0; lo.len()]);
    let failure = Cell::new(None);
    let value = nested_axis(f, lo, hi, 0, &point, &failure, cfg);
    match failure.into_inner() {
        Some(err) => Err(err),
        None => Ok(value),
    }
}

fn nested_axis<F: Fn(&[f64]) -> f64>(
    f: &F,
    lo: &[f64],
    hi: &[f64],
    axis: usize,
    point: &RefCell<Vec<f64>>,
    failure: &Cell<Option<Error>>,
    cfg: &QuadratureConfig,
) -> f64 {
    let last = axis + 1 == lo.len();
    let level_cfg = if axis == 0 {
        *cfg
    } else {
        QuadratureConfig {
            rel_tol: (cfg.rel_tol * 0.1).max(1e-15),
            ..*cfg
        }
    };
    let integrand = |x: f64| {
        point.borrow_mut()[axis] = x;
        if last {
            let p = point.borrow();
            f(&p)
        } else {
            nested_axis(f, lo, hi, axis + 1, point, failure, cfg)
        }
    };
    match integrate_estimate(&integrand, lo[axis], hi[axis], &level_cfg) {
        Ok(est) => est.value,
        Err(err) => {
            let previous = failure.take();
            failure.set(previous.or(Some(err)));
            0.0
        }
    }
}
