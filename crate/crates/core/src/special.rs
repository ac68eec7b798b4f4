//! Log-gamma via the Lanczos approximation (g = 7, nine coefficients).

use std::f64::consts::PI;

const LANCZOS_G: f64 = 7.0;

#[allow(clippy::excessive_precision)]
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Natural log of |Γ(x)|.
///
/// Uses reflection for `x < 0.5`. Returns `+inf` at the poles.
pub fn ln_gamma(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x < 0.5 {
        let s = (PI * x).sin();
        if x == x.floor() || s == 0.0 {
            return f64::INFINITY;
        }
        return (PI / s.abs()).ln() - ln_gamma(1.0 - x);
    }
    let z = x - 1.0;
    let mut acc = LANCZOS_COEFFS[0];
    for (i, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        acc += c / (z + i as f64);
    }
    let w = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * w.ln() - w + acc.ln()
}

/// Γ(x) for positive arguments, computed through [`ln_gamma`].
pub fn gamma(x: f64) -> f64 {
    if x > 0.0 {
        ln_gamma(x).exp()
    } else {
        let s = (PI * x).sin();
        if x == x.floor() {
            return f64::NAN;
        }
        PI / (s * gamma(1.0 - x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn factorial(k: u32) -> f64 {
        (1..=k).map(f64::from).product()
    }

    // Γ(k + 1/2) = (2k)! √π / (4^k k!)
    fn half_integer_gamma(k: u32) -> f64 {
        factorial(2 * k) * PI.sqrt() / (4f64.powi(k as i32) * factorial(k))
    }

    #[test]
    fn integer_values() {
        for k in 1..=20u32 {
            let exact = factorial(k - 1);
            let got = gamma(f64::from(k));
            assert!(
                ((got - exact) / exact).abs() < 1e-14,
                "k={k} got={got} exact={exact}"
            );
        }
    }

    #[test]
    fn half_integer_values() {
        for k in 0..=15u32 {
            let exact = half_integer_gamma(k);
            let got = gamma(f64::from(k) + 0.5);
            assert!(((got - exact) / exact).abs() < 1e-14, "k={k}");
        }
    }

    #[test]
    fn reflection_branch() {
        // Γ(-1/2) = -2√π
        let got = gamma(-0.5);
        assert!((got + 2.0 * PI.sqrt()).abs() < 1e-13);
        assert!(ln_gamma(0.0).is_infinite());
        assert!(ln_gamma(-3.0).is_infinite());
    }

    #[test]
    fn ln_gamma_large_argument() {
        // ln Γ(101) = ln(100!)
        let exact: f64 = (1..=100).map(|k| (k as f64).ln()).sum();
        assert!((ln_gamma(101.0) - exact).abs() / exact < 1e-14);
    }
}
