#![allow(dead_code)]

use cauchy_harnack::HalfSpacePoint;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn p(x: &[f64], t: f64) -> HalfSpacePoint {
    HalfSpacePoint::new(x.to_vec(), t).unwrap()
}

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// Coordinates in [−10, 10], times in [0.1, 10], `A′ ≠ B′`.
pub fn random_pair(rng: &mut StdRng, n: usize) -> (HalfSpacePoint, HalfSpacePoint) {
    loop {
        let xa: Vec<f64> = (0..n).map(|_| rng.gen_range(-10.0..10.0)).collect();
        let xb: Vec<f64> = (0..n).map(|_| rng.gen_range(-10.0..10.0)).collect();
        if xa != xb {
            let ta = rng.gen_range(0.1..10.0);
            let tb = rng.gen_range(0.1..10.0);
            return (p(&xa, ta), p(&xb, tb));
        }
    }
}

pub fn rel(got: f64, want: f64) -> f64 {
    (got - want).abs() / want.abs()
}

/// A rigid motion of ℝⁿ: random Givens rotations (a reflection for n = 1)
/// followed by a translation.
pub struct Isometry {
    rotations: Vec<(usize, usize, f64)>,
    shift: Vec<f64>,
}

impl Isometry {
    pub fn random(rng: &mut StdRng, n: usize) -> Self {
        let rotations = if n == 1 {
            Vec::new()
        } else {
            (0..2 * n)
                .map(|_| {
                    let i = rng.gen_range(0..n);
                    let j = (i + rng.gen_range(1..n)) % n;
                    (i, j, rng.gen_range(0.0..std::f64::consts::TAU))
                })
                .collect()
        };
        let shift = (0..n).map(|_| rng.gen_range(-5.0..5.0)).collect();
        Isometry { rotations, shift }
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let mut y = x.to_vec();
        if self.rotations.is_empty() {
            y[0] = -y[0];
        }
        for &(i, j, angle) in &self.rotations {
            let (s, c) = angle.sin_cos();
            let (yi, yj) = (y[i], y[j]);
            y[i] = c * yi - s * yj;
            y[j] = s * yi + c * yj;
        }
        y.iter().zip(&self.shift).map(|(v, s)| v + s).collect()
    }

    pub fn move_point(&self, q: &HalfSpacePoint) -> HalfSpacePoint {
        q.map_x(|x| self.apply(x)).unwrap()
    }
}

pub fn scale(q: &HalfSpacePoint, lambda: f64) -> HalfSpacePoint {
    p(
        &q.x().iter().map(|v| v * lambda).collect::<Vec<_>>(),
        q.t() * lambda,
    )
}
