//! On the whole sphere the projection of an arc of the polar great circle
//! `M` collapses to one point for a range of directions and explodes to the
//! whole line on the `psi`-image of the arc.

use std::io::{self, Write};

use rayon::prelude::*;

use crate::dimension::box_count_auto;
use crate::error::{Error, Result};
use crate::sphere::{exceptional_sets, line_coordinate, multivalued_project, AmbientPoint, AngleSet, MultiProjection, SphereFrame};
use crate::transversality::theta_grid;

use super::fmt17;

/// Two projected points closer than this are the same point.
const SAME_POINT_TOL: f64 = 1e-9;

/// At most this many angles below `epsilon` get a full dimension estimate.
const DIMENSION_PROBES: usize = 64;

#[derive(Debug, Clone, PartialEq)]
pub struct CounterexampleConfig {
    pub n_theta: usize,
    pub arc_length: f64,
    /// `psi` of the arc midpoint; the arc covers `psi` values
    /// `[center - length/2, center + length/2]`.
    pub arc_center: f64,
    /// Number of points sampled along the arc.
    pub n_samples: usize,
}

impl CounterexampleConfig {
    /// Arc centred at `psi = pi/2`, sampled finer than the angle grid.
    pub fn new(n_theta: usize, arc_length: f64) -> Self {
        Self {
            n_theta,
            arc_length,
            arc_center: std::f64::consts::FRAC_PI_2,
            n_samples: n_theta + 1,
        }
    }

    fn validate(&self) -> Result<()> {
        let half = self.arc_length / 2.0;
        if !(self.arc_length > 0.0) {
            return Err(Error::InvalidConfig("arc length must be positive".into()));
        }
        if self.arc_center - half <= 0.0 || self.arc_center + half >= std::f64::consts::PI {
            return Err(Error::InvalidConfig(
                "arc must stay away from the poles of L_0 (psi range inside (0, pi))".into(),
            ));
        }
        if self.n_theta < 8 || self.n_samples < 2 {
            return Err(Error::InvalidConfig("need at least 8 angles and 2 arc samples".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanKind {
    SinglePoint,
    FinitelyMany,
    WholeLine,
}

impl ScanKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ScanKind::SinglePoint => "single_point",
            ScanKind::FinitelyMany => "finitely_many",
            ScanKind::WholeLine => "whole_line",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanRow {
    pub theta: f64,
    pub kind: ScanKind,
    /// Distinct singleton images among the samples.
    pub n_distinct: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CounterexampleReport {
    pub rows: Vec<ScanRow>,
    /// `psi` of the two arc endpoints.
    pub psi_interval: (f64, f64),
    /// Directions where the projection is the whole line.
    pub exceptional: AngleSet<f64>,
    pub regular: AngleSet<f64>,
    /// Every direction in `(0, epsilon)` collapses the arc to one point.
    pub epsilon: f64,
    pub single_point_below_epsilon: bool,
    /// Largest box-counting slope among the probed directions below `epsilon`.
    pub max_dimension_below_epsilon: f64,
    /// Smallest and largest grid angle classified as `WholeLine`.
    pub whole_line_extent: Option<(f64, f64)>,
}

/// Sample points `q(s) = cos(s) e1 + sin(s) e2` of the arc, evenly spaced.
pub fn arc_points(frame: &SphereFrame<f64>, config: &CounterexampleConfig) -> Vec<AmbientPoint<f64>> {
    let start = config.arc_center - config.arc_length / 2.0 - std::f64::consts::FRAC_PI_2;
    let n = config.n_samples;
    (0..n)
        .map(|i| frame.polar_circle_point(start + config.arc_length * i as f64 / (n - 1) as f64))
        .collect()
}

/// Projected images of `points` onto `L_theta`, as line coordinates, or
/// `None` when some point sees the whole line.
fn images(points: &[AmbientPoint<f64>], theta: f64, frame: &SphereFrame<f64>) -> Option<Vec<f64>> {
    points
        .iter()
        .map(|q| match multivalued_project(theta, q, frame) {
            MultiProjection::Singleton(l) => Some(line_coordinate(theta, &l, frame)),
            MultiProjection::WholeLine => None,
        })
        .collect()
}

fn distinct(mut coords: Vec<f64>) -> usize {
    coords.sort_by(|a, b| a.total_cmp(b));
    1 + coords.windows(2).filter(|w| w[1] - w[0] > SAME_POINT_TOL).count()
}

/// Classifies `P_theta(points)`. With `connected`, the samples stand for a
/// connected subset of `M`, whose images are `+-v_theta`; seeing both means
/// the set passes through `+-q_theta`, so the image is the whole line.
pub fn classify(points: &[AmbientPoint<f64>], theta: f64, frame: &SphereFrame<f64>, connected: bool) -> ScanRow {
    match images(points, theta, frame) {
        None => ScanRow {
            theta,
            kind: ScanKind::WholeLine,
            n_distinct: 0,
        },
        Some(coords) => {
            let n = distinct(coords);
            let kind = match n {
                1 => ScanKind::SinglePoint,
                _ if connected => ScanKind::WholeLine,
                _ => ScanKind::FinitelyMany,
            };
            ScanRow {
                theta,
                kind,
                n_distinct: n,
            }
        }
    }
}

pub fn run_counterexample(config: &CounterexampleConfig) -> Result<CounterexampleReport> {
    config.validate()?;
    let frame = SphereFrame::<f64>::standard();
    let points = arc_points(&frame, config);
    let rows: Vec<ScanRow> = theta_grid(config.n_theta)
        .into_par_iter()
        .map(|theta| classify(&points, theta, &frame, true))
        .collect();

    let (exceptional, regular) = exceptional_sets(&points, &frame, config.n_theta)?;
    let psi_interval = (
        crate::sphere::psi(&points[0], &frame)?,
        crate::sphere::psi(&points[points.len() - 1], &frame)?,
    );
    let epsilon = exceptional.intervals().first().map_or(std::f64::consts::PI, |iv| iv.0);
    let below: Vec<&ScanRow> = rows.iter().filter(|r| r.theta < epsilon).collect();
    let single_point_below_epsilon = !below.is_empty() && below.iter().all(|r| r.kind == ScanKind::SinglePoint);

    let stride = below.len().div_ceil(DIMENSION_PROBES).max(1);
    let slopes: Vec<f64> = below
        .iter()
        .step_by(stride)
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|r| {
            let coords = images(&points, r.theta, &frame).ok_or_else(|| {
                Error::InvalidConfig(format!("unexpected whole-line image at theta {}", r.theta))
            })?;
            Ok(box_count_auto(&coords)?.slope)
        })
        .collect::<Result<_>>()?;
    let max_dimension_below_epsilon = slopes.into_iter().fold(0.0, f64::max);

    let whole: Vec<f64> = rows
        .iter()
        .filter(|r| r.kind == ScanKind::WholeLine)
        .map(|r| r.theta)
        .collect();
    let whole_line_extent = whole.first().zip(whole.last()).map(|(&a, &b)| (a, b));

    Ok(CounterexampleReport {
        rows,
        psi_interval,
        exceptional,
        regular,
        epsilon,
        single_point_below_epsilon,
        max_dimension_below_epsilon,
        whole_line_extent,
    })
}

/// `theta,kind` rows.
pub fn write_scan_csv<W: Write>(rows: &[ScanRow], mut out: W) -> io::Result<()> {
    writeln!(out, "theta,kind")?;
    for r in rows {
        writeln!(out, "{},{}", fmt17(r.theta), r.kind.as_str())?;
    }
    Ok(())
}

pub fn summary_line(report: &CounterexampleReport) -> String {
    let (a, b) = report.psi_interval;
    format!(
        "epsilon={}, single_point_below_epsilon={}, max_dimension_below_epsilon={}, psi_interval=[{}, {}], whole_line_measure={}",
        report.epsilon,
        report.single_point_below_epsilon,
        report.max_dimension_below_epsilon,
        a,
        b,
        report.exceptional.measure()
    )
}
