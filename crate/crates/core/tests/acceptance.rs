//! Acceptance suite. Each criterion prints one PASS/FAIL line; the process
//! exits nonzero when any criterion fails.

use std::f64::consts::{PI, SQRT_2};
use std::time::{Duration, Instant};

use rand::Rng;

use curveproj::geometry::{oracle_projection, signed_projection};
use curveproj::harness::counterexample::{run_counterexample, CounterexampleConfig};
use curveproj::harness::sweep::{cmd_sweep, fraction_within, median_dimension, run_sweep, SweepConfig};
use curveproj::sampling::{rng, sample_pairs, sample_point};
use curveproj::transversality::{
    analytic_bounds, check_definition, decomposition, estimate_constants, pair_geometry, phi, phi_derivative,
    projection_derivatives, theta_grid, DEFAULT_MAX_ORDER,
};
use curveproj::{GeodesicAngle, IfsSpec, SurfaceModel};

const ORACLE_RESOLUTION: usize = 10_000;

struct Outcome {
    pass: bool,
    detail: String,
}

fn models() -> [SurfaceModel; 3] {
    [
        SurfaceModel::hyperbolic(2.0).unwrap(),
        SurfaceModel::euclidean(2.0).unwrap(),
        SurfaceModel::spherical(1.2).unwrap(),
    ]
}

fn signed_models() -> [SurfaceModel; 2] {
    [SurfaceModel::hyperbolic(2.0).unwrap(), SurfaceModel::spherical(1.2).unwrap()]
}

fn within(elapsed: Duration, limit_s: u64) -> bool {
    elapsed <= Duration::from_secs(limit_s)
}

fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for (i, model) in models().iter().enumerate() {
        let mut r = rng(100 + i as u64);
        for _ in 0..1000 {
            let theta = GeodesicAngle::new(r.random_range(0.0..PI)).unwrap();
            let q = sample_point(model, &mut r);
            let fast = signed_projection(theta, &q, model).unwrap().signed_coordinate;
            let slow = oracle_projection(theta, &q, model, ORACLE_RESOLUTION).unwrap();
            worst = worst.max((fast - slow).abs());
        }
    }
    let elapsed = start.elapsed();
    Outcome {
        pass: worst <= 1e-6 && within(elapsed, 10),
        detail: format!("max |Pi - oracle| = {worst:.3e} (tol 1e-6), {elapsed:.2?} (limit 10 s)"),
    }
}

fn decomposition_identity() -> Outcome {
    let start = Instant::now();
    let thetas: Vec<f64> = theta_grid(1000);
    let mut worst: f64 = 0.0;
    for (i, model) in models().iter().enumerate() {
        for pair in sample_pairs(model, 1000, 200 + i as u64).unwrap() {
            let dec = decomposition(&pair_geometry(&pair.p1, &pair.p2, model).unwrap());
            for &t in &thetas {
                let theta = GeodesicAngle::new(t).unwrap();
                let a = signed_projection(theta, &pair.p1, model).unwrap().transformed;
                let b = signed_projection(theta, &pair.p2, model).unwrap().transformed;
                worst = worst.max((a - b - dec.amplitude * (t - dec.theta_hat).cos()).abs());
            }
        }
    }
    let elapsed = start.elapsed();
    Outcome {
        pass: worst <= 1e-10 && within(elapsed, 30),
        detail: format!("max residual = {worst:.3e} (tol 1e-10), {elapsed:.2?} (limit 30 s)"),
    }
}

/// The closed forms bounding `D/d`, evaluated directly on a fine grid.
fn closed_form_bounds(model: &SurfaceModel) -> (f64, f64) {
    let m = model.domain_radius();
    let n = 1_000_000;
    let grid = (1..=n).map(move |i| 2.0 * m * i as f64 / n as f64);
    if model.curvature() < 0.0 {
        let upper = grid.map(|t| SQRT_2 * (t.cosh() - 1.0).sqrt() / t).fold(0.0, f64::max);
        (1.0 / (SQRT_2 * m.cosh().powi(2)), upper)
    } else {
        let lower = grid.map(|t| SQRT_2 * (1.0 - t.cos()).sqrt() / t).fold(f64::INFINITY, f64::min);
        (lower, 1.0 / m.cos().powi(2))
    }
}

fn constant_sandwich() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for model in signed_models() {
        let (lo, hi) = closed_form_bounds(&model);
        let b = analytic_bounds(&model);
        let report = estimate_constants(&model, 100_000, 300).unwrap();
        let agrees = (b.lower - lo).abs() <= 1e-6 * lo && (b.upper - hi).abs() <= 1e-6 * hi;
        let inside = report.out_of_bounds == 0 && lo <= report.c_hat && report.upper_hat <= hi;
        pass &= agrees && inside && report.sandwich_holds();
        parts.push(format!(
            "K={}: {lo:.6} <= c_hat {:.6} <= C_hat {:.6} <= {hi:.6}, out of bounds {}",
            model.curvature(),
            report.c_hat,
            report.upper_hat,
            report.out_of_bounds
        ));
    }
    Outcome {
        pass,
        detail: parts.join("; "),
    }
}

fn transversality_and_regularity() -> (Outcome, Outcome) {
    let mut t_pass = true;
    let mut r_pass = true;
    let mut t_parts = Vec::new();
    let mut r_parts = Vec::new();
    for (i, model) in signed_models().iter().enumerate() {
        let start = Instant::now();
        let report = check_definition(model, 10_000, 1000, DEFAULT_MAX_ORDER, 400 + i as u64).unwrap();
        let elapsed = start.elapsed();
        t_pass &= report.violations.is_empty() && within(elapsed, 120);
        t_parts.push(format!(
            "K={}: c'={:.4e}, violations={}, {elapsed:.2?}",
            model.curvature(),
            report.c_prime,
            report.violations.len()
        ));

        let bounded = report.derivative_bounds[1..]
            .iter()
            .all(|&b| b <= report.upper_hat * (1.0 + 1e-12));
        let finite = report.projection_derivative_bounds.iter().all(|b| b.is_finite());
        let fd = first_derivative_agreement(model, 500 + i as u64);
        r_pass &= bounded && finite && report.regularity_failures == 0 && fd <= 1e-6;
        r_parts.push(format!(
            "K={}: max_l sup|d^l Phi| = {:.4} <= C_hat {:.4}, FD rel err {fd:.2e}",
            model.curvature(),
            report.derivative_bounds[1..].iter().copied().fold(0.0, f64::max),
            report.upper_hat
        ));
    }
    (
        Outcome {
            pass: t_pass,
            detail: format!("{} (limit 120 s each)", t_parts.join("; ")),
        },
        Outcome {
            pass: r_pass,
            detail: r_parts.join("; "),
        },
    )
}

/// Worst relative gap between the analytic first derivatives (of `Phi` and
/// of a single projection) and central differences, over 1000 samples.
/// The gap is measured relative to `max(|analytic|, D/d)`, the size of the
/// derivative's cosine envelope.
fn first_derivative_agreement(model: &SurfaceModel, seed: u64) -> f64 {
    let h = 1e-5;
    let mut r = rng(seed);
    let mut worst: f64 = 0.0;
    for pair in sample_pairs(model, 1000, seed).unwrap() {
        let t = r.random_range(h..PI - h);
        let at = |x: f64| phi(GeodesicAngle::new(x).unwrap(), &pair.p1, &pair.p2, model).unwrap();
        let fd = (at(t + h) - at(t - h)) / (2.0 * h);
        let analytic = phi_derivative(GeodesicAngle::new(t).unwrap(), &pair.p1, &pair.p2, model, 1).unwrap();
        let dec = decomposition(&pair_geometry(&pair.p1, &pair.p2, model).unwrap());
        let envelope = analytic.abs().max(dec.amplitude / pair.distance);
        worst = worst.max((fd - analytic).abs() / envelope);

        let proj = |x: f64| projection_derivatives(x, &pair.p1, model, 1)[0];
        let fd = (proj(t + h) - proj(t - h)) / (2.0 * h);
        let analytic = projection_derivatives(t, &pair.p1, model, 1)[1];
        worst = worst.max((fd - analytic).abs() / analytic.abs().max(pair.p1.r().max(1e-3)));
    }
    worst
}

fn sweep_config(model: SurfaceModel, fractal: IfsSpec) -> SweepConfig {
    // image radius 0.9 m: the unit square's corners sit at planar radius 1/sqrt2
    let scale = 0.9 * model.domain_radius() * SQRT_2;
    SweepConfig::new(model, fractal, scale, 180, 7)
}

fn dimension_sweep() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for model in [SurfaceModel::hyperbolic(2.0).unwrap(), SurfaceModel::spherical(1.3).unwrap()] {
        let start = Instant::now();
        let fractal = IfsSpec::three_map_dust(0.2, 10).unwrap();
        let target = fractal.expected_dimension();
        let rows = run_sweep(&sweep_config(model, fractal)).unwrap();
        let elapsed = start.elapsed();
        let median = median_dimension(&rows);
        let frac = fraction_within(&rows, target, 0.15);
        pass &= (median - target).abs() <= 0.12 && frac >= 0.9 && within(elapsed, 300);
        parts.push(format!(
            "K={}: median {median:.4} vs {target:.4}, {:.1}% within 0.15, {elapsed:.2?}",
            model.curvature(),
            100.0 * frac
        ));
    }
    Outcome {
        pass,
        detail: format!("{} (limit 300 s each)", parts.join("; ")),
    }
}

fn positive_length() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for model in [SurfaceModel::hyperbolic(2.0).unwrap(), SurfaceModel::spherical(1.3).unwrap()] {
        let fractal = IfsSpec::four_corner_dust(0.315, 7).unwrap();
        let dim = fractal.expected_dimension();
        let rows = run_sweep(&sweep_config(model, fractal)).unwrap();
        let frac = rows.iter().filter(|r| r.measure_estimate > 0.01).count() as f64 / rows.len() as f64;
        let least = rows.iter().map(|r| r.measure_estimate).fold(f64::INFINITY, f64::min);
        pass &= frac >= 0.9;
        parts.push(format!(
            "K={} (dim {dim:.4}): {:.1}% of angles with length > 0.01, min {least:.4}",
            model.curvature(),
            100.0 * frac
        ));
    }
    Outcome {
        pass,
        detail: parts.join("; "),
    }
}

fn sphere_counterexample() -> Outcome {
    let n_theta = 10_000;
    let start = Instant::now();
    let report = run_counterexample(&CounterexampleConfig::new(n_theta, 0.4)).unwrap();
    let elapsed = start.elapsed();
    let intervals = report.exceptional.intervals();
    let length = report.exceptional.measure();
    let pass = intervals.len() == 1
        && (length - 0.4).abs() <= PI / n_theta as f64
        && report.single_point_below_epsilon
        && report.max_dimension_below_epsilon == 0.0
        && within(elapsed, 30);
    Outcome {
        pass,
        detail: format!(
            "{} interval(s), length {length:.6} (0.4 +- {:.2e}), single point on (0, {:.4}), dim {}, {elapsed:.2?} (limit 30 s)",
            intervals.len(),
            PI / n_theta as f64,
            report.epsilon,
            report.max_dimension_below_epsilon
        ),
    }
}

fn determinism() -> Outcome {
    let dir = std::env::temp_dir().join(format!("curveproj-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let run = |name: &str, threads: usize| {
        let mut cfg = sweep_config(
            SurfaceModel::hyperbolic(2.0).unwrap(),
            IfsSpec::three_map_dust(0.2, 8).unwrap(),
        );
        cfg.n_theta = 60;
        cfg.output_path = Some(dir.join(name));
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| cmd_sweep(&cfg)).unwrap();
        std::fs::read(dir.join(name)).unwrap()
    };
    let a = run("a.csv", 1);
    let b = run("b.csv", 1);
    let c = run("c.csv", 4);
    std::fs::remove_dir_all(&dir).ok();
    Outcome {
        pass: !a.is_empty() && a == b && a == c,
        detail: format!("{} bytes; repeat identical: {}; 1 vs 4 threads identical: {}", a.len(), a == b, a == c),
    }
}

fn main() {
    let (transversality, regularity) = transversality_and_regularity();
    let results = [
        ("1 oracle equivalence", oracle_equivalence()),
        ("2 decomposition identity", decomposition_identity()),
        ("3 constant sandwich", constant_sandwich()),
        ("4 transversality", transversality),
        ("5 regularity", regularity),
        ("6 dimension-preserving sweep", dimension_sweep()),
        ("7 positive-length regime", positive_length()),
        ("8 sphere counterexample", sphere_counterexample()),
        ("9 determinism", determinism()),
    ];
    let mut failed = 0;
    for (name, outcome) in &results {
        let tag = if outcome.pass { "PASS" } else { "FAIL" };
        println!("criterion {name}: {tag} ({})", outcome.detail);
        failed += usize::from(!outcome.pass);
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all {} acceptance criteria passed", results.len());
}
