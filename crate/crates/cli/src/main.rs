//! `curveproj` command-line driver.

use std::f64::consts::{FRAC_PI_2, SQRT_2};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use curveproj::dimension::{auto_epsilons, box_count_1d};
use curveproj::geometry::signed_projection;
use curveproj::harness::counterexample::{self, run_counterexample, CounterexampleConfig};
use curveproj::harness::report::{run_transversality, summary_line, write_report_csv};
use curveproj::harness::sweep::{cmd_sweep, median_dimension, Epsilons, SweepConfig};
use curveproj::harness::write_file;
use curveproj::transversality::DEFAULT_MAX_ORDER;
use curveproj::{GeodesicAngle, IfsSpec, SurfaceModel, SurfacePoint};

/// Exit code for a completed run whose checks did not hold.
const CHECK_FAILED: u8 = 2;

#[derive(Parser)]
#[command(name = "curveproj", version, about = "Geodesic projections on constant-curvature surfaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Project one point onto the line L_theta through the base point.
    Project(ProjectArgs),
    /// Estimate the constants of D/d and check transversality and regularity.
    Transversality(TransversalityArgs),
    /// Sweep line directions, estimating dimension and length of projections.
    Sweep(SweepArgs),
    /// Scan the set-valued projection of an arc on the whole sphere.
    Counterexample(CounterexampleArgs),
    /// Box-count a CSV column of reals.
    Dimension(DimensionArgs),
}

#[derive(Args)]
struct ModelArgs {
    /// Curvature K.
    #[arg(short = 'K', long = "curvature", allow_negative_numbers = true)]
    curvature: f64,
    /// Domain radius m.
    #[arg(short = 'm', long = "radius")]
    radius: f64,
}

impl ModelArgs {
    fn model(&self) -> Result<SurfaceModel> {
        Ok(SurfaceModel::new(self.curvature, self.radius)?)
    }
}

#[derive(Args)]
struct ProjectArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long, allow_negative_numbers = true)]
    theta: f64,
    /// Geodesic distance of q from the base point.
    #[arg(long)]
    r: f64,
    /// Polar angle of q.
    #[arg(long, allow_negative_numbers = true)]
    phi: f64,
}

#[derive(Args)]
struct TransversalityArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long, default_value_t = 10_000)]
    n_pairs: usize,
    #[arg(long, default_value_t = 1_000)]
    n_theta: usize,
    #[arg(long, default_value_t = DEFAULT_MAX_ORDER)]
    max_order: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Report CSV (`key,value`).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Fractal {
    Cantor,
    Dust3,
    Dust4,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long, value_enum, default_value = "dust3")]
    fractal: Fractal,
    /// Contraction ratio; dust3 defaults to 0.2, dust4 to 0.315.
    #[arg(long)]
    ratio: Option<f64>,
    /// IFS depth; defaults to 10 (dust3), 7 (dust4), 13 (cantor).
    #[arg(long)]
    depth: Option<usize>,
    /// Planar-to-surface scale; defaults to 0.9 m sqrt(2), so the image radius is 0.9 m.
    #[arg(long)]
    scale: Option<f64>,
    #[arg(long, default_value_t = 180)]
    n_theta: usize,
    /// `auto` or a comma-separated descending list.
    #[arg(long, default_value = "auto")]
    epsilons: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Args)]
struct CounterexampleArgs {
    #[arg(long, default_value_t = 10_000)]
    n_theta: usize,
    #[arg(long, default_value_t = 0.4)]
    arc_length: f64,
    /// psi of the arc midpoint.
    #[arg(long, default_value_t = FRAC_PI_2)]
    arc_center: f64,
    /// Scan CSV (`theta,kind`).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Whole-line angle intervals (`start,end`).
    #[arg(long)]
    intervals_out: Option<PathBuf>,
}

#[derive(Args)]
struct DimensionArgs {
    /// CSV whose first column holds the values; a non-numeric header row is skipped.
    file: PathBuf,
    /// `auto` or a comma-separated descending list.
    #[arg(long, default_value = "auto")]
    epsilons: String,
    /// Box-count table (`epsilon,n_boxes`).
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_epsilons(text: &str) -> Result<Epsilons> {
    if text.trim() == "auto" {
        return Ok(Epsilons::Auto);
    }
    let eps = text
        .split(',')
        .map(|e| e.trim().parse::<f64>().with_context(|| format!("bad epsilon {e:?}")))
        .collect::<Result<Vec<_>>>()?;
    Ok(Epsilons::Fixed(eps))
}

fn project(args: &ProjectArgs) -> Result<bool> {
    let model = args.model.model()?;
    let theta = GeodesicAngle::wrapped(args.theta);
    let q = SurfacePoint::new(args.r, args.phi)?;
    let p = signed_projection(theta, &q, &model)?;
    println!("signed_coordinate={}", p.signed_coordinate);
    println!("transformed={}", p.transformed);
    println!("incidence_angle={}", p.incidence_angle);
    println!(
        "projected_point=(r={}, phi={})",
        p.projected_point.r(),
        p.projected_point.phi()
    );
    Ok(true)
}

fn transversality(args: &TransversalityArgs) -> Result<bool> {
    let model = args.model.model()?;
    let (constants, check) = run_transversality(&model, args.n_pairs, args.n_theta, args.max_order, args.seed)?;
    if let Some(path) = &args.out {
        write_file(path, |out| write_report_csv(&check, out))?;
    }
    println!("{}", summary_line(&check));
    Ok(constants.sandwich_holds() && check.is_clean())
}

fn sweep(args: &SweepArgs) -> Result<bool> {
    let model = args.model.model()?;
    let fractal = match args.fractal {
        Fractal::Cantor => IfsSpec::middle_thirds(args.depth.unwrap_or(13))?,
        Fractal::Dust3 => IfsSpec::three_map_dust(args.ratio.unwrap_or(0.2), args.depth.unwrap_or(10))?,
        Fractal::Dust4 => IfsSpec::four_corner_dust(args.ratio.unwrap_or(0.315), args.depth.unwrap_or(7))?,
    };
    let scale = args.scale.unwrap_or(0.9 * model.domain_radius() * SQRT_2);
    let mut config = SweepConfig::new(model, fractal, scale, args.n_theta, args.seed);
    config.epsilons = parse_epsilons(&args.epsilons)?;
    config.output_path = args.out.clone();
    config.svg_path = args.svg.clone();
    let rows = cmd_sweep(&config)?;
    println!(
        "n_theta={}, expected_dimension={}, median_dim_estimate={}",
        rows.len(),
        config.fractal.expected_dimension(),
        median_dimension(&rows)
    );
    Ok(true)
}

fn counterexample(args: &CounterexampleArgs) -> Result<bool> {
    let mut config = CounterexampleConfig::new(args.n_theta, args.arc_length);
    config.arc_center = args.arc_center;
    let report = run_counterexample(&config)?;
    if let Some(path) = &args.out {
        write_file(path, |out| counterexample::write_scan_csv(&report.rows, out))?;
    }
    if let Some(path) = &args.intervals_out {
        write_file(path, |out| report.exceptional.write_csv(out))?;
    }
    println!("{}", counterexample::summary_line(&report));
    Ok(report.single_point_below_epsilon)
}

fn read_values(path: &Path) -> Result<Vec<f64>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_path(path)
        .with_context(|| format!("cannot open {}", path.display()))?;
    let mut values = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.with_context(|| format!("{}: malformed CSV", path.display()))?;
        let Some(field) = record.get(0) else { continue };
        match field.trim().parse::<f64>() {
            Ok(v) if v.is_finite() => values.push(v),
            Ok(v) => bail!("{}: row {}: non-finite value {v}", path.display(), i + 1),
            Err(_) if i == 0 => {}
            Err(_) => bail!("{}: row {}: not a number: {field:?}", path.display(), i + 1),
        }
    }
    if values.is_empty() {
        bail!("{}: no values", path.display());
    }
    Ok(values)
}

fn dimension(args: &DimensionArgs) -> Result<bool> {
    let values = read_values(&args.file)?;
    let eps = match parse_epsilons(&args.epsilons)? {
        Epsilons::Auto => auto_epsilons(&values)?,
        Epsilons::Fixed(e) => e,
    };
    let est = box_count_1d(&values, &eps)?;
    if let Some(path) = &args.out {
        write_file(path, |out| est.write_csv(out))?;
    }
    println!(
        "slope={}, r_squared={}, eps_min={}, eps_max={}, n_values={}",
        est.slope,
        est.r_squared,
        est.scale_range.0,
        est.scale_range.1,
        values.len()
    );
    Ok(true)
}

fn init_threads() -> Result<()> {
    let Ok(text) = std::env::var("CURVEPROJ_THREADS") else {
        return Ok(());
    };
    let n: usize = text
        .trim()
        .parse()
        .with_context(|| format!("CURVEPROJ_THREADS must be a positive integer, got {text:?}"))?;
    if n == 0 {
        bail!("CURVEPROJ_THREADS must be a positive integer, got 0");
    }
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    Ok(())
}

fn run(cli: &Cli) -> Result<bool> {
    init_threads()?;
    match &cli.command {
        Command::Project(a) => project(a),
        Command::Transversality(a) => transversality(a),
        Command::Sweep(a) => sweep(a),
        Command::Counterexample(a) => counterexample(a),
        Command::Dimension(a) => dimension(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(CHECK_FAILED),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
