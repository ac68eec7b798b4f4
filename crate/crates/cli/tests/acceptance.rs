//! Acceptance checks. Runs without the test harness so that every criterion
//! prints one PASS/FAIL line; exits non-zero if any criterion fails.

use std::f64::consts::TAU;
use std::path::PathBuf;
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use cauchy_harnack::kernel::{
    kernel_1d, kernel_half_laplacian_exact, kernel_mass, kernel_residual_with,
    kernel_time_derivative_1d,
};
use cauchy_harnack::oracle::default_box_halfwidth;
use cauchy_harnack::widder::{Atom, GaussianBump, UniformBox};
use cauchy_harnack::{
    c_star_pair, chords, extremize_grid, extremize_line, geodesic_through, half_laplacian_1d,
    harnack_ratio, hyperbolic_distance, kappa0, kernel_geometry_identity, li_yau_gap, sharp_bounds,
    Convention, HalfSpacePoint, InitialMeasure, QuadratureConfig, WidderSolution,
};
use cauchy_harnack_cli::commands::grid_resolution;
use cauchy_harnack_cli::liyau::{cmd_liyau, ConventionChoice, LiYauArgs, TestSolution};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn p(x: &[f64], t: f64) -> HalfSpacePoint {
    HalfSpacePoint::new(x.to_vec(), t).unwrap()
}

fn rel(got: f64, want: f64) -> f64 {
    (got - want).abs() / want.abs()
}

fn random_pair(r: &mut StdRng, n: usize, span: f64, tmax: f64) -> (HalfSpacePoint, HalfSpacePoint) {
    loop {
        let xa: Vec<f64> = (0..n).map(|_| r.gen_range(-span..span)).collect();
        let xb: Vec<f64> = (0..n).map(|_| r.gen_range(-span..span)).collect();
        if xa != xb {
            return (
                p(&xa, r.gen_range(0.1..tmax)),
                p(&xb, r.gen_range(0.1..tmax)),
            );
        }
    }
}

fn pairs(seed: u64, count: usize, max_dim: usize) -> Vec<(HalfSpacePoint, HalfSpacePoint)> {
    let mut r = StdRng::seed_from_u64(seed);
    (0..count)
        .map(|i| random_pair(&mut r, 1 + i % max_dim, 10.0, 10.0))
        .collect()
}

fn ensure(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn c1_identity() -> Outcome {
    let sample = pairs(1, 10_000, 8);
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for (a, b) in &sample {
        let check = kernel_geometry_identity(a, b).map_err(|e| e.to_string())?;
        worst = worst.max(check.gap);
    }
    let elapsed = start.elapsed();
    ensure(
        worst <= 1e-10 && elapsed < Duration::from_secs(1),
        format!("max relative gap {worst:.2e} over 10^4 pairs, n = 1..8, {elapsed:.2?}"),
    )
}

fn c2_hyperbolic() -> Outcome {
    let mut worst: f64 = 0.0;
    for (a, b) in pairs(1, 10_000, 8) {
        let arc = geodesic_through(&a, &b).map_err(|e| e.to_string())?;
        let ln_cr = chords(&a, &b, &arc)
            .map_err(|e| e.to_string())?
            .log_cross_ratio();
        let dx2: f64 = a
            .x()
            .iter()
            .zip(b.x())
            .map(|(u, v)| (u - v) * (u - v))
            .sum();
        let dt = a.t() - b.t();
        let d = (1.0 + (dx2 + dt * dt) / (2.0 * a.t() * b.t())).acosh();
        worst = worst.max((ln_cr - d).abs());
    }
    ensure(
        worst <= 1e-10,
        format!("max |ln cross ratio - arcosh| {worst:.2e}"),
    )
}

fn c3_worked_example() -> Outcome {
    let (a, b) = (p(&[0.0], 1.0), p(&[1.0], 2.0));
    let arc = geodesic_through(&a, &b).map_err(|e| e.to_string())?;
    let c = arc.circular().map_err(|e| e.to_string())?;
    let hb = sharp_bounds(&a, &b).map_err(|e| e.to_string())?;
    let (cs, cu) = c_star_pair(&a, &b).map_err(|e| e.to_string())?;
    let line = extremize_line(&a, &b).map_err(|e| e.to_string())?;
    let grid = extremize_grid(&a, &b, default_box_halfwidth(&a, &b), grid_resolution(1))
        .map_err(|e| e.to_string())?;
    let s5 = 5f64.sqrt();
    let checks = [
        ("alpha", c.center_abscissa, 2.0),
        ("r", c.radius, s5),
        ("x_*", c.lower_foot[0], 2.0 - s5),
        ("x^*", c.upper_foot[0], 2.0 + s5),
        ("kappa0", kappa0(&a, &b).map_err(|e| e.to_string())?, 20.0),
        ("C_*", cs, 0.190_983_0),
        ("C^*", cu, 1.309_017_0),
        ("lower", hb.lower, 0.381_966_0),
        ("upper", hb.upper, 2.618_034_0),
        (
            "d_hyp",
            hyperbolic_distance(&a, &b).map_err(|e| e.to_string())?,
            0.962_423_7,
        ),
        ("line min", line.min_value, 0.381_966_0),
        ("line max", line.max_value, 2.618_034_0),
        ("grid min", grid.min_value, 0.381_966_0),
        ("grid max", grid.max_value, 2.618_034_0),
        ("grid argmin", grid.argmin[0], 2.0 - s5),
        ("grid argmax", grid.argmax[0], 2.0 + s5),
    ];
    let worst = checks
        .iter()
        .map(|(_, got, want)| (got - want).abs())
        .fold(0.0, f64::max);
    let bad: Vec<&str> = checks
        .iter()
        .filter(|(_, g, w)| (g - w).abs() > 1e-6)
        .map(|(n, _, _)| *n)
        .collect();
    let detail = format!("{} quantities, max deviation {worst:.2e}", checks.len());
    ensure(
        bad.is_empty(),
        if bad.is_empty() {
            detail
        } else {
            format!("{detail}, off: {bad:?}")
        },
    )
}

fn location_gap(got: &[f64], want: &[f64]) -> f64 {
    got.iter()
        .zip(want)
        .map(|(g, w)| (g - w).abs() / w.abs().max(1.0))
        .fold(0.0, f64::max)
}

fn c4_oracles() -> Outcome {
    let mut r = StdRng::seed_from_u64(4);
    let mut cases = vec![
        (p(&[0.0], 1.0), p(&[1.0], 2.0)),
        (p(&[0.0], 1.0), p(&[2.0], 3.0)),
    ];
    for n in 1..=3 {
        for _ in 0..2 {
            cases.push(random_pair(&mut r, n, 3.0, 3.0));
        }
    }
    let (mut loc, mut val): (f64, f64) = (0.0, 0.0);
    let mut grid_time = Duration::ZERO;
    for (a, b) in &cases {
        let n = a.dimension();
        let hb = sharp_bounds(a, b).map_err(|e| e.to_string())?;
        let c = geodesic_through(a, b)
            .map_err(|e| e.to_string())?
            .circular()
            .map_err(|e| e.to_string())?
            .clone();
        let mid: Vec<f64> = a
            .x()
            .iter()
            .zip(b.x())
            .map(|(u, v)| 0.5 * (u + v))
            .collect();
        let reach = [&c.lower_foot, &c.upper_foot]
            .iter()
            .flat_map(|f| f.iter().zip(&mid).map(|(u, m)| (u - m).abs()))
            .fold(0.0, f64::max);
        let half = default_box_halfwidth(a, b).max(1.5 * reach);
        let line = extremize_line(a, b).map_err(|e| e.to_string())?;
        let start = Instant::now();
        let grid = extremize_grid(a, b, half, grid_resolution(n)).map_err(|e| e.to_string())?;
        grid_time += start.elapsed();
        for res in [&line, &grid] {
            loc = loc
                .max(location_gap(&res.argmin, &c.lower_foot))
                .max(location_gap(&res.argmax, &c.upper_foot));
            val = val
                .max(rel(res.min_value, hb.lower))
                .max(rel(res.max_value, hb.upper));
        }
    }
    ensure(
        loc <= 1e-6 && val <= 1e-8 && grid_time < Duration::from_secs(10),
        format!(
            "{} pairs in n = 1..3: location {loc:.2e}, value {val:.2e}, grid stage {grid_time:.2?}",
            cases.len()
        ),
    )
}

fn random_measure(r: &mut StdRng, n: usize) -> InitialMeasure {
    let point = |r: &mut StdRng| (0..n).map(|_| r.gen_range(-5.0..5.0)).collect::<Vec<f64>>();
    let mut m = InitialMeasure::default();
    for _ in 0..r.gen_range(0..=4) {
        m.atoms.push(Atom {
            location: point(r),
            mass: r.gen_range(0.01..10.0),
        });
    }
    for _ in 0..r.gen_range(0..=2) {
        m.gaussians.push(GaussianBump {
            center: point(r),
            sigma: r.gen_range(0.05..2.0),
            mass: r.gen_range(0.01..10.0),
        });
    }
    if r.gen_bool(0.3) || m.is_empty() {
        m.boxes.push(UniformBox {
            center: point(r),
            halfwidths: (0..n).map(|_| r.gen_range(0.05..2.0)).collect(),
            height: r.gen_range(0.01..10.0),
        });
    }
    m
}

fn c5_containment() -> Outcome {
    let mut r = StdRng::seed_from_u64(5);
    let cfg = QuadratureConfig::default();
    let mut outside = 0;
    let mut attain: f64 = 0.0;
    for i in 0..1_000 {
        let n = 1 + i % 3;
        let m = random_measure(&mut r, n);
        let (a, b) = random_pair(&mut r, n, 5.0, 5.0);
        let sol = WidderSolution::new(m, cfg).map_err(|e| e.to_string())?;
        if !harnack_ratio(&sol, &a, &b)
            .map_err(|e| e.to_string())?
            .contained
        {
            outside += 1;
        }
        let c = geodesic_through(&a, &b)
            .map_err(|e| e.to_string())?
            .circular()
            .map_err(|e| e.to_string())?
            .clone();
        let hb = sharp_bounds(&a, &b).map_err(|e| e.to_string())?;
        for (foot, bound) in [(c.lower_foot, hb.lower), (c.upper_foot, hb.upper)] {
            let delta = WidderSolution::new(InitialMeasure::atom(foot, 1.0), cfg)
                .map_err(|e| e.to_string())?;
            attain = attain.max(rel(
                harnack_ratio(&delta, &a, &b)
                    .map_err(|e| e.to_string())?
                    .ratio,
                bound,
            ));
        }
    }
    ensure(
        outside == 0 && attain <= 1e-9,
        format!("{outside} of 10^3 ratios outside the bounds; delta data at the feet off by {attain:.2e}"),
    )
}

fn grid_21x5() -> Vec<(f64, f64)> {
    let mut g = Vec::new();
    for i in 0..21 {
        for j in 0..5 {
            g.push((-5.0 + 0.5 * i as f64, 0.5 + 0.5 * j as f64));
        }
    }
    g
}

fn c6_residual() -> Outcome {
    let cfg = QuadratureConfig::default();
    let (mut standard, mut flipped_err): (f64, f64) = (0.0, 0.0);
    for (x, t) in grid_21x5() {
        let dt = kernel_time_derivative_1d(x, t);
        let res =
            kernel_residual_with(x, t, &cfg, Convention::Standard).map_err(|e| e.to_string())?;
        standard = standard.max(res.abs() / dt.abs().max(1.0));
        let flipped =
            kernel_residual_with(x, t, &cfg, Convention::Flipped).map_err(|e| e.to_string())?;
        if dt.abs() > 1e-8 {
            flipped_err = flipped_err.max((flipped.abs() / (2.0 * dt.abs()) - 1.0).abs());
        }
    }
    ensure(
        standard <= 1e-6,
        format!(
            "standard residual {standard:.2e} (scaled); flipped-convention residual equals 2|d_t k| to {flipped_err:.2e}"
        ),
    )
}

fn c7_principal_value() -> Outcome {
    let cfg = QuadratureConfig::default();
    let mut worst: f64 = 0.0;
    let mut used = 0;
    for i in 0..81 {
        for t in [0.1, 0.5, 1.0, 2.0, 5.0] {
            let x = -20.0 + 0.5 * i as f64;
            let reference = kernel_half_laplacian_exact(x, t);
            if reference.abs() <= 1e-8 {
                continue;
            }
            let pv = half_laplacian_1d(|y| kernel_1d(y, t), x, &cfg, Convention::Standard)
                .map_err(|e| e.to_string())?;
            worst = worst.max(rel(pv, reference));
            used += 1;
        }
    }
    ensure(
        worst <= 1e-6,
        format!("max relative error {worst:.2e} at {used} points"),
    )
}

fn c8_normalization() -> Outcome {
    let cfg = QuadratureConfig::default();
    let mut worst: f64 = 0.0;
    for n in 1..=3 {
        for t in [0.5, 1.0, 2.0] {
            let m = kernel_mass(n, t, &cfg).map_err(|e| e.to_string())?;
            worst = worst.max((m.value - 1.0).abs() + m.tail_bound);
        }
    }
    ensure(
        worst <= 1e-8,
        format!("max |mass - 1| plus tail bound {worst:.2e}"),
    )
}

fn c9_li_yau() -> Outcome {
    let cfg = QuadratureConfig::default();
    let s = li_yau_gap(0.0, 1.0, &cfg, Convention::Standard)
        .map_err(|e| e.to_string())?
        .value;
    let q = li_yau_gap(0.0, 1.0, &cfg, Convention::Flipped)
        .map_err(|e| e.to_string())?
        .value;
    let args = LiYauArgs {
        t: 1.0,
        x_min: -5.0,
        x_max: 5.0,
        samples: 21,
        convention: ConventionChoice::Both,
        solution: TestSolution::Kernel,
    };
    let table = cmd_liyau(&args, &cfg).map_err(|e| e.to_string())?;
    let verdict = |name: &str| {
        table
            .summary
            .iter()
            .find(|c| c.convention == name)
            .map(|c| c.satisfied)
    };
    ensure(
        (s + 2.0).abs() <= 1e-3
            && (q - 2.0).abs() <= 1e-3
            && verdict("standard") == Some(false)
            && verdict("flipped") == Some(true),
        format!("standard {s:.6}, flipped {q:.6}; {}", table.summary_line()),
    )
}

fn c10_invariants() -> Outcome {
    let mut worst: f64 = 0.0;
    for (a, b) in pairs(10, 10_000, 8) {
        let n = a.dimension() as i32;
        let f = a.t() / b.t();
        let hb = sharp_bounds(&a, &b).map_err(|e| e.to_string())?;
        let back = sharp_bounds(&b, &a).map_err(|e| e.to_string())?;
        worst = worst
            .max(rel(hb.c_star * hb.c_upper, f * f))
            .max(rel(hb.lower * hb.upper, f.powi(n - 1)))
            .max(rel(hb.lower * back.upper, 1.0))
            .max(rel(hb.upper * back.lower, 1.0));
    }
    ensure(
        worst <= 1e-10,
        format!("max relative deviation {worst:.2e} over 10^4 pairs"),
    )
}

/// Random Givens rotations (a reflection when n = 1) and a shift.
fn rigid_motion(r: &mut StdRng, n: usize) -> impl Fn(&[f64]) -> Vec<f64> {
    let rotations: Vec<(usize, usize, f64)> = if n == 1 {
        Vec::new()
    } else {
        (0..2 * n)
            .map(|_| {
                let i = r.gen_range(0..n);
                (i, (i + r.gen_range(1..n)) % n, r.gen_range(0.0..TAU))
            })
            .collect()
    };
    let shift: Vec<f64> = (0..n).map(|_| r.gen_range(-5.0..5.0)).collect();
    move |x: &[f64]| {
        let mut y = x.to_vec();
        if rotations.is_empty() {
            y[0] = -y[0];
        }
        for &(i, j, angle) in &rotations {
            let (s, c) = angle.sin_cos();
            let (yi, yj) = (y[i], y[j]);
            y[i] = c * yi - s * yj;
            y[j] = s * yi + c * yj;
        }
        y.iter().zip(&shift).map(|(v, s)| v + s).collect()
    }
}

fn signature(a: &HalfSpacePoint, b: &HalfSpacePoint) -> Result<[f64; 4], String> {
    let hb = sharp_bounds(a, b).map_err(|e| e.to_string())?;
    let arc = geodesic_through(a, b).map_err(|e| e.to_string())?;
    let cr = chords(a, b, &arc).map_err(|e| e.to_string())?.cross_ratio;
    let d = hyperbolic_distance(a, b).map_err(|e| e.to_string())?;
    Ok([hb.lower, hb.upper, cr, d])
}

fn c11_invariance() -> Outcome {
    let mut r = StdRng::seed_from_u64(11);
    let mut worst: f64 = 0.0;
    for i in 0..2_000 {
        let n = 1 + i % 8;
        let (a, b) = random_pair(&mut r, n, 10.0, 10.0);
        let motion = rigid_motion(&mut r, n);
        let lambda = r.gen_range(0.01..100.0);
        let moved = (a.map_x(&motion).unwrap(), b.map_x(&motion).unwrap());
        let scale = |q: &HalfSpacePoint| {
            p(
                &q.x().iter().map(|v| v * lambda).collect::<Vec<_>>(),
                q.t() * lambda,
            )
        };
        let scaled = (scale(&a), scale(&b));
        let base = signature(&a, &b)?;
        for (u, v) in [moved, scaled] {
            let s = signature(&u, &v)?;
            for (got, want) in s.iter().zip(&base) {
                worst = worst.max(rel(*got, *want));
            }
        }
    }
    ensure(
        worst <= 1e-10,
        format!("bounds, cross ratio and d_hyp under rigid motions and scaling: {worst:.2e}"),
    )
}

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
}

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cauchy-harnack"))
        .args(args)
        .output()
        .unwrap()
}

fn c12_cli() -> Outcome {
    let we1 = data("we1.json");
    let three = data("three_d.json");
    let (we1, three) = (we1.to_str().unwrap(), three.to_str().unwrap());
    let runs: [&[&str]; 5] = [
        &["bounds", "--scenario", we1, "--verify"],
        &["identity", "--scenario", three, "--format", "csv"],
        &["widder", "--scenario", three],
        &["liyau", "--t", "0.7"],
        &[
            "sweep", "--vary", "dx", "--from", "0", "--to", "4", "--steps", "9",
        ],
    ];
    let mut unstable = Vec::new();
    for args in runs {
        let (x, y) = (cli(args), cli(args));
        if x.stdout != y.stdout || x.status.code() != Some(0) {
            unstable.push(args[0]);
        }
    }
    let strict = cli(&["bounds", "--scenario", three, "--verify", "--tol", "1e-30"])
        .status
        .code();

    let mut corpus: Vec<PathBuf> = std::fs::read_dir(data("malformed"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .collect();
    corpus.sort();
    let mut wrong = Vec::new();
    for file in &corpus {
        for cmd in ["bounds", "widder"] {
            let out = cli(&[cmd, "--scenario", file.to_str().unwrap()]);
            let stderr = String::from_utf8_lossy(&out.stderr);
            if out.status.code() != Some(2) || stderr.contains("panicked") || !out.stdout.is_empty()
            {
                wrong.push(format!(
                    "{cmd} {}",
                    file.file_name().unwrap().to_string_lossy()
                ));
            }
        }
    }
    ensure(
        unstable.is_empty() && strict == Some(3) && corpus.len() >= 10 && wrong.is_empty(),
        format!(
            "{} repeated runs byte-identical (unstable: {unstable:?}); exit 3 on failed verification: {}; \
             {} malformed files exit 2 (wrong: {wrong:?})",
            runs.len(),
            strict == Some(3),
            corpus.len()
        ),
    )
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("chord/kernel identity", c1_identity),
        ("hyperbolic distance", c2_hyperbolic),
        ("worked example", c3_worked_example),
        ("oracle agreement", c4_oracles),
        ("containment", c5_containment),
        ("kernel residual", c6_residual),
        ("principal value", c7_principal_value),
        ("normalization", c8_normalization),
        ("Li-Yau report", c9_li_yau),
        ("algebraic invariants", c10_invariants),
        ("invariance", c11_invariance),
        ("CLI contract", c12_cli),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (tag, detail) = match check() {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!(
            "{tag} criterion {:>2} {name}: {detail} [{:.2?}]",
            i + 1,
            start.elapsed()
        );
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
