//! Dimension and covered length of projections of a test set, swept over
//! line directions.

use std::io::{self, Write};
use std::path::PathBuf;

use rand::Rng;
use rayon::prelude::*;

use crate::dimension::{auto_epsilons, box_count_1d, measure_estimate_1d, project_cloud};
use crate::error::{Error, Result};
use crate::fractal::{generate_attractor, push_to_surface, IfsSpec, PointCloud};
use crate::geometry::{GeodesicAngle, SurfaceModel};
use crate::sampling::rng;

use super::{fmt17, svg, write_file};

pub const SWEEP_HEADER: &str = "theta,dim_estimate,r_squared,measure_estimate,n_points";

/// Fewest angles a sweep accepts.
pub const MIN_THETAS: usize = 8;

#[derive(Debug, Clone, PartialEq)]
pub enum Epsilons {
    /// Per-angle dyadic scales from [`auto_epsilons`].
    Auto,
    /// The same scales for every angle, strictly descending.
    Fixed(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub model: SurfaceModel<f64>,
    pub fractal: IfsSpec<f64>,
    /// Planar-to-surface scale of the exponential map.
    pub scale: f64,
    pub n_theta: usize,
    pub epsilons: Epsilons,
    /// Selects a random rotation of the test set about the base point.
    pub seed: u64,
    pub output_path: Option<PathBuf>,
    pub svg_path: Option<PathBuf>,
}

impl SweepConfig {
    pub fn new(model: SurfaceModel<f64>, fractal: IfsSpec<f64>, scale: f64, n_theta: usize, seed: u64) -> Self {
        Self {
            model,
            fractal,
            scale,
            n_theta,
            epsilons: Epsilons::Auto,
            seed,
            output_path: None,
            svg_path: None,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.n_theta < MIN_THETAS {
            return Err(Error::InvalidConfig(format!(
                "n_theta must be at least {MIN_THETAS}, got {}",
                self.n_theta
            )));
        }
        if let Epsilons::Fixed(eps) = &self.epsilons {
            if eps.len() < 4 {
                return Err(Error::TooFewScales(eps.len()));
            }
        }
        Ok(())
    }

    /// Builds the test set: attractor, exponential map, seeded rotation.
    pub fn cloud(&self) -> Result<PointCloud<f64>> {
        let planar = generate_attractor(&self.fractal)?;
        let cloud = push_to_surface(
            &planar,
            &self.model,
            self.scale,
            "ifs",
            self.fractal.expected_dimension(),
        )?;
        let rotation = rng(self.seed).random_range(0.0..std::f64::consts::TAU);
        Ok(cloud.rotated(rotation))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub theta: f64,
    pub dim_estimate: f64,
    pub r_squared: f64,
    /// Covered length at the finest scale used.
    pub measure_estimate: f64,
    pub n_points: usize,
}

/// Open angle grid `pi (i + 1/2) / n`.
pub fn sweep_thetas(n: usize) -> Vec<f64> {
    crate::transversality::theta_grid(n)
}

/// Projects `cloud` onto every grid line and estimates dimension and
/// covered length of each image.
pub fn sweep_cloud(
    cloud: &PointCloud<f64>,
    model: &SurfaceModel<f64>,
    n_theta: usize,
    epsilons: &Epsilons,
) -> Result<Vec<SweepRow>> {
    sweep_thetas(n_theta)
        .into_par_iter()
        .map(|theta| {
            let values = project_cloud(cloud, GeodesicAngle::new(theta)?, model, false)?;
            let eps = match epsilons {
                Epsilons::Auto => auto_epsilons(&values)?,
                Epsilons::Fixed(e) => e.clone(),
            };
            let est = box_count_1d(&values, &eps)?;
            let finest = eps[eps.len() - 1];
            let measure = measure_estimate_1d(&values, finest)?;
            Ok(SweepRow {
                theta,
                dim_estimate: est.slope,
                r_squared: est.r_squared,
                measure_estimate: measure.covered_length,
                n_points: values.len(),
            })
        })
        .collect()
}

pub fn run_sweep(config: &SweepConfig) -> Result<Vec<SweepRow>> {
    config.validate()?;
    let cloud = config.cloud()?;
    sweep_cloud(&cloud, &config.model, config.n_theta, &config.epsilons)
}

/// CSV with header [`SWEEP_HEADER`], 17 significant digits, LF endings.
pub fn write_sweep_csv<W: Write>(rows: &[SweepRow], mut out: W) -> io::Result<()> {
    writeln!(out, "{SWEEP_HEADER}")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{}",
            fmt17(r.theta),
            fmt17(r.dim_estimate),
            fmt17(r.r_squared),
            fmt17(r.measure_estimate),
            r.n_points
        )?;
    }
    Ok(())
}

/// Runs the sweep and writes the configured CSV and SVG files.
pub fn cmd_sweep(config: &SweepConfig) -> Result<Vec<SweepRow>> {
    let rows = run_sweep(config)?;
    if let Some(path) = &config.output_path {
        write_file(path, |out| write_sweep_csv(&rows, out))?;
    }
    if let Some(path) = &config.svg_path {
        let doc = svg::render_sweep(&rows, config.fractal.expected_dimension());
        write_file(path, |out| out.write_all(doc.as_bytes()))?;
    }
    Ok(rows)
}

/// Fraction of rows whose estimate lies within `tol` of `target`.
pub fn fraction_within(rows: &[SweepRow], target: f64, tol: f64) -> f64 {
    let hits = rows.iter().filter(|r| (r.dim_estimate - target).abs() <= tol).count();
    hits as f64 / rows.len() as f64
}

pub fn median_dimension(rows: &[SweepRow]) -> f64 {
    let mut d: Vec<f64> = rows.iter().map(|r| r.dim_estimate).collect();
    d.sort_by(|a, b| a.total_cmp(b));
    let n = d.len();
    if n % 2 == 1 {
        d[n / 2]
    } else {
        0.5 * (d[n / 2 - 1] + d[n / 2])
    }
}
