//! Box-counting dimension and covered length of one-dimensional samples.

use std::io::{self, Write};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fractal::PointCloud;
use crate::geometry::{signed_projection, GeodesicAngle, SurfaceModel};
use crate::scalar::Real;

/// Fewest scales accepted by [`box_count_1d`].
pub const MIN_SCALES: usize = 4;

/// Auto scale selection stops once the count grows by less than this factor per octave.
pub const SATURATION_GROWTH: f64 = 1.05;

/// Hard cap on the number of octaves tried by [`auto_epsilons`].
const MAX_OCTAVES: usize = 48;

/// Occupied box counts and the log-log fit through them.
#[derive(Debug, Clone, PartialEq)]
pub struct DimensionEstimate<T> {
    /// `(epsilon, n_boxes)`, epsilon descending.
    pub counts: Vec<(T, usize)>,
    /// Least-squares slope of `log n_boxes` against `log(1/epsilon)`.
    pub slope: T,
    pub intercept: T,
    pub r_squared: T,
    /// `(eps_min, eps_max)`.
    pub scale_range: (T, T),
}

impl<T: Real> DimensionEstimate<T> {
    /// Writes the `(epsilon, n_boxes)` table with header `epsilon,n_boxes`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "epsilon,n_boxes")?;
        for (eps, n) in &self.counts {
            writeln!(out, "{:.16e},{n}", eps.as_f64())?;
        }
        Ok(())
    }
}

/// Union length of the occupied `epsilon`-boxes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasureEstimate<T> {
    pub epsilon: T,
    pub covered_length: T,
}

fn sorted<T: Real>(values: &[T]) -> Result<Vec<T>> {
    if values.is_empty() {
        return Err(Error::EmptyInput);
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidConfig("non-finite sample value".into()));
    }
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).expect("finite values"));
    Ok(v)
}

/// Number of distinct `floor(v / epsilon)` over a sorted sample.
fn count_sorted<T: Real>(sorted: &[T], epsilon: T) -> usize {
    let mut count = 0;
    let mut last = None;
    for &v in sorted {
        let cell = (v / epsilon).floor();
        if last != Some(cell) {
            count += 1;
            last = Some(cell);
        }
    }
    count
}

/// Number of occupied boxes `[k eps, (k+1) eps)`.
pub fn count_boxes<T: Real>(values: &[T], epsilon: T) -> Result<usize> {
    check_epsilon(epsilon)?;
    Ok(count_sorted(&sorted(values)?, epsilon))
}

fn check_epsilon<T: Real>(epsilon: T) -> Result<()> {
    if !(epsilon > T::zero()) || !epsilon.is_finite() {
        return Err(Error::InvalidScales(format!("epsilon {epsilon} must be positive")));
    }
    Ok(())
}

/// Ordinary least squares `y = slope x + intercept`; returns
/// `(slope, intercept, r_squared)`. A constant `y` is a perfect fit.
pub fn least_squares<T: Real>(xs: &[T], ys: &[T]) -> (T, T, T) {
    let n = T::from_count(xs.len());
    let mean_x = xs.iter().fold(T::zero(), |a, &x| a + x) / n;
    let mean_y = ys.iter().fold(T::zero(), |a, &y| a + y) / n;
    let (mut sxx, mut sxy, mut syy) = (T::zero(), T::zero(), T::zero());
    for (&x, &y) in xs.iter().zip(ys) {
        let (dx, dy) = (x - mean_x, y - mean_y);
        sxx = sxx + dx * dx;
        sxy = sxy + dx * dy;
        syy = syy + dy * dy;
    }
    let slope = if sxx > T::zero() { sxy / sxx } else { T::zero() };
    let intercept = mean_y - slope * mean_x;
    let r_squared = if syy > T::zero() {
        (sxy * sxy / (sxx * syy)).min(T::one())
    } else {
        T::one()
    };
    (slope, intercept, r_squared)
}

/// Box-counting dimension from the given scales (positive, strictly
/// descending, at least four).
pub fn box_count_1d<T: Real>(values: &[T], epsilons: &[T]) -> Result<DimensionEstimate<T>> {
    let v = sorted(values)?;
    box_count_sorted(&v, epsilons)
}

fn box_count_sorted<T: Real>(v: &[T], epsilons: &[T]) -> Result<DimensionEstimate<T>> {
    if epsilons.len() < MIN_SCALES {
        return Err(Error::TooFewScales(epsilons.len()));
    }
    for &eps in epsilons {
        check_epsilon(eps)?;
    }
    if epsilons.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidScales("scales must be strictly descending".into()));
    }
    let counts: Vec<(T, usize)> = epsilons.par_iter().map(|&eps| (eps, count_sorted(v, eps))).collect();
    let xs: Vec<T> = counts.iter().map(|(eps, _)| -eps.ln()).collect();
    let ys: Vec<T> = counts.iter().map(|&(_, n)| T::from_count(n).ln()).collect();
    let (slope, intercept, r_squared) = least_squares(&xs, &ys);
    Ok(DimensionEstimate {
        scale_range: (epsilons[epsilons.len() - 1], epsilons[0]),
        counts,
        slope,
        intercept,
        r_squared,
    })
}

/// Dyadic scales from `diam / 8` downwards, stopping before the first octave
/// where the box count grows by less than 5 % (the sample spacing has been
/// reached). At least four scales are always returned. A sample of zero
/// extent uses `1/8` as the coarsest scale.
pub fn auto_epsilons<T: Real>(values: &[T]) -> Result<Vec<T>> {
    let v = sorted(values)?;
    Ok(auto_epsilons_sorted(&v))
}

fn auto_epsilons_sorted<T: Real>(v: &[T]) -> Vec<T> {
    let diam = v[v.len() - 1] - v[0];
    let top = if diam > T::zero() { diam } else { T::one() } / T::lit(8.0);
    let growth = T::lit(SATURATION_GROWTH);
    let mut eps = vec![top];
    let mut last = count_sorted(v, top);
    for k in 1..MAX_OCTAVES {
        let e = top / T::lit(2.0).powi(k as i32);
        let n = count_sorted(v, e);
        if T::from_count(n) < T::from_count(last) * growth && eps.len() >= MIN_SCALES {
            break;
        }
        eps.push(e);
        last = n;
    }
    eps
}

/// [`box_count_1d`] over [`auto_epsilons`].
pub fn box_count_auto<T: Real>(values: &[T]) -> Result<DimensionEstimate<T>> {
    let v = sorted(values)?;
    let eps = auto_epsilons_sorted(&v);
    box_count_sorted(&v, &eps)
}

/// `epsilon` times the number of occupied boxes.
pub fn measure_estimate_1d<T: Real>(values: &[T], epsilon: T) -> Result<MeasureEstimate<T>> {
    check_epsilon(epsilon)?;
    let n = count_sorted(&sorted(values)?, epsilon);
    Ok(MeasureEstimate {
        epsilon,
        covered_length: epsilon * T::from_count(n),
    })
}

/// Signed projection coordinates (or transformed coordinates) of every point
/// of the cloud onto `L_theta`, in cloud order.
pub fn project_cloud<T: Real>(
    cloud: &PointCloud<T>,
    theta: GeodesicAngle<T>,
    model: &SurfaceModel<T>,
    transformed: bool,
) -> Result<Vec<T>> {
    cloud
        .points
        .par_iter()
        .map(|q| {
            let r = signed_projection(theta, q, model)?;
            Ok(if transformed { r.transformed } else { r.signed_coordinate })
        })
        .collect()
}
