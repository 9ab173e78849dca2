//! Self-similar test sets with known dimension, transported onto the surface
//! through the exponential map at the base point.

use std::io::{self, Write};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{SurfaceModel, SurfacePoint};
use crate::scalar::Real;

/// Upper bound on the number of generated points.
pub const MAX_POINTS: u128 = 10_000_000;

/// Planar similarity `x -> ratio * x + translation`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Similarity<T> {
    pub ratio: T,
    pub translation: [T; 2],
}

impl<T: Real> Similarity<T> {
    pub fn apply(&self, x: [T; 2]) -> [T; 2] {
        [
            self.ratio * x[0] + self.translation[0],
            self.ratio * x[1] + self.translation[1],
        ]
    }
}

/// Iterated function system of similarities mapping the unit square into
/// pairwise disjoint sub-squares.
#[derive(Debug, Clone, PartialEq)]
pub struct IfsSpec<T> {
    maps: Vec<Similarity<T>>,
    depth: usize,
    expected_dimension: T,
}

impl<T: Real> IfsSpec<T> {
    /// Validates the maps and computes the similarity dimension, the root
    /// `s` of `sum ratio_i^s = 1`.
    ///
    /// Every image square `ratio_i [0,1]^2 + t_i` must lie in the unit square,
    /// and image interiors must not overlap.
    pub fn new(maps: Vec<Similarity<T>>, depth: usize) -> Result<Self> {
        if maps.is_empty() {
            return Err(Error::InvalidIfs("no maps".into()));
        }
        if depth == 0 {
            return Err(Error::InvalidIfs("depth must be at least 1".into()));
        }
        let tol = T::lit(1e-12);
        for (i, f) in maps.iter().enumerate() {
            if !(f.ratio > T::zero() && f.ratio < T::one()) {
                return Err(Error::InvalidIfs(format!("map {i}: ratio {} not in (0,1)", f.ratio)));
            }
            for &t in &f.translation {
                if t < -tol || t + f.ratio > T::one() + tol {
                    return Err(Error::InvalidIfs(format!("map {i} leaves the unit square")));
                }
            }
        }
        for i in 0..maps.len() {
            for j in i + 1..maps.len() {
                let (a, b) = (&maps[i], &maps[j]);
                let overlap = (0..2).all(|k| {
                    let lo = a.translation[k].max(b.translation[k]);
                    let hi = (a.translation[k] + a.ratio).min(b.translation[k] + b.ratio);
                    hi - lo > tol
                });
                if overlap {
                    return Err(Error::InvalidIfs(format!("images of maps {i} and {j} overlap")));
                }
            }
        }
        let expected_dimension = similarity_dimension(&maps);
        Ok(Self {
            maps,
            depth,
            expected_dimension,
        })
    }

    /// Two maps of ratio 1/3 at the left and right ends of the bottom edge.
    pub fn middle_thirds(depth: usize) -> Result<Self> {
        let r = T::one() / T::lit(3.0);
        let z = T::zero();
        Self::new(
            vec![
                Similarity { ratio: r, translation: [z, z] },
                Similarity { ratio: r, translation: [T::one() - r, z] },
            ],
            depth,
        )
    }

    /// Four maps of equal ratio in the corners of the unit square.
    pub fn four_corner_dust(ratio: T, depth: usize) -> Result<Self> {
        let (z, o) = (T::zero(), T::one() - ratio);
        let maps = [[z, z], [o, z], [z, o], [o, o]]
            .into_iter()
            .map(|translation| Similarity { ratio, translation })
            .collect();
        Self::new(maps, depth)
    }

    /// Three maps of equal ratio: two bottom corners and the top middle.
    pub fn three_map_dust(ratio: T, depth: usize) -> Result<Self> {
        let (z, o) = (T::zero(), T::one() - ratio);
        let mid = o / T::lit(2.0);
        let maps = [[z, z], [o, z], [mid, o]]
            .into_iter()
            .map(|translation| Similarity { ratio, translation })
            .collect();
        Self::new(maps, depth)
    }

    pub fn maps(&self) -> &[Similarity<T>] {
        &self.maps
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn expected_dimension(&self) -> T {
        self.expected_dimension
    }

    pub fn with_depth(&self, depth: usize) -> Result<Self> {
        Self::new(self.maps.clone(), depth)
    }

    /// `#maps ^ depth`.
    pub fn point_count(&self) -> u128 {
        (self.maps.len() as u128).saturating_pow(self.depth.min(u32::MAX as usize) as u32)
    }
}

/// Root of Moran's equation `sum r_i^s = 1`; `log n / log(1/r)` for equal ratios.
fn similarity_dimension<T: Real>(maps: &[Similarity<T>]) -> T {
    let first = maps[0].ratio;
    if maps.iter().all(|f| f.ratio == first) {
        return T::from_count(maps.len()).ln() / (T::one() / first).ln();
    }
    let moran = |s: T| maps.iter().fold(T::zero(), |acc, f| acc + f.ratio.powf(s)) - T::one();
    // moran is decreasing, positive at 0
    let (mut lo, mut hi) = (T::zero(), T::one());
    while moran(hi) > T::zero() {
        hi = hi * T::lit(2.0);
    }
    for _ in 0..200 {
        let mid = (lo + hi) / T::lit(2.0);
        if moran(mid) > T::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo + hi) / T::lit(2.0)
}

/// Images of the unit-square centre under every composition
/// `f_{i1} o ... o f_{ik}` with `k = depth`, ordered lexicographically by the
/// index word `i1 ... ik`.
pub fn generate_attractor<T: Real>(spec: &IfsSpec<T>) -> Result<Vec<[T; 2]>> {
    let n = spec.point_count();
    if n > MAX_POINTS {
        return Err(Error::SizeOverflow(n));
    }
    let half = T::lit(0.5);
    let mut tail = vec![[half, half]];
    for _ in 1..spec.depth {
        tail = spec
            .maps
            .iter()
            .flat_map(|f| tail.iter().map(move |&x| f.apply(x)))
            .collect();
    }
    // outermost map is the first letter; branches are concatenated in map order
    let branches: Vec<Vec<[T; 2]>> = spec
        .maps
        .par_iter()
        .map(|f| tail.iter().map(|&x| f.apply(x)).collect())
        .collect();
    Ok(branches.concat())
}

/// Finite sample of a subset of `Omega`.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud<T> {
    pub points: Vec<SurfacePoint<T>>,
    pub label: String,
    pub expected_dimension: T,
}

impl<T: Real> PointCloud<T> {
    /// Writes the cloud as CSV with header `r,phi` and 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "r,phi")?;
        for q in &self.points {
            writeln!(out, "{:.16e},{:.16e}", q.r().as_f64(), q.phi().as_f64())?;
        }
        Ok(())
    }

    /// Rotates every point about the base point by `angle`.
    pub fn rotated(&self, angle: T) -> Self {
        let points = self
            .points
            .iter()
            .map(|q| SurfacePoint::new(q.r(), q.phi() + angle).expect("rotation keeps radius"))
            .collect();
        Self {
            points,
            label: self.label.clone(),
            expected_dimension: self.expected_dimension,
        }
    }
}

/// Exponential map at `p` applied to planar points centred on `(1/2, 1/2)`:
/// polar form `(rho, phi)` about the centre goes to `(scale * rho, phi)`.
pub fn push_to_surface<T: Real>(
    planar: &[[T; 2]],
    model: &SurfaceModel<T>,
    scale: T,
    label: &str,
    expected_dimension: T,
) -> Result<PointCloud<T>> {
    if !(scale > T::zero()) {
        return Err(Error::InvalidConfig(format!("scale {scale} must be positive")));
    }
    let half = T::lit(0.5);
    let mut max_radius = T::zero();
    let points: Vec<SurfacePoint<T>> = planar
        .iter()
        .map(|x| {
            let (dx, dy) = (x[0] - half, x[1] - half);
            let r = scale * dx.hypot(dy);
            max_radius = max_radius.max(r);
            SurfacePoint::new(r, dy.atan2(dx))
        })
        .collect::<Result<_>>()?;
    if max_radius > model.domain_radius() {
        return Err(Error::RadiusOverflow {
            max_radius: max_radius.as_f64(),
            m: model.domain_radius().as_f64(),
        });
    }
    Ok(PointCloud {
        points,
        label: label.to_string(),
        expected_dimension,
    })
}
