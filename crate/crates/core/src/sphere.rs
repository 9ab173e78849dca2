//! Closest-point projection on the whole unit sphere, where it becomes
//! set-valued.
//!
//! Points live in ambient `R^3` coordinates. A [`SphereFrame`] fixes the base
//! point `p` and the tangent direction `v_0`; `v_theta` is `v_0` rotated by
//! `theta` in the tangent plane and `L_theta` is the full great circle through
//! `p` with tangent `v_theta`. On the polar great circle
//! `M = {q : <q, p> = 0}` every point is equidistant from all of `L_theta`
//! exactly when it is `+-q_theta = +-(p x v_theta)`; the map `psi` sends the
//! antipodal pair `{q, -q}` to that angle.

use std::io::{self, Write};
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::geometry::SurfacePoint;
use crate::scalar::{wrap, Real};

/// Orthogonality tolerance for the `WholeLine` test and for membership in `M`.
pub const ORTHOGONALITY_TOL: f64 = 1e-12;

/// Vector in `R^3`; unit length when it represents a point of the sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmbientPoint<T> {
    pub x: T,
    pub y: T,
    pub z: T,
}

impl<T: Real> AmbientPoint<T> {
    /// Accepts only vectors of unit norm (to `1e-12`).
    pub fn new(x: T, y: T, z: T) -> Result<Self> {
        let p = Self { x, y, z };
        if (p.dot(&p) - T::one()).abs() > T::lit(ORTHOGONALITY_TOL) {
            return Err(Error::InvalidPoint(format!("({x}, {y}, {z}) is not a unit vector")));
        }
        Ok(p)
    }

    /// Rescales a non-zero vector to unit length.
    pub fn normalized(x: T, y: T, z: T) -> Result<Self> {
        let n = (x * x + y * y + z * z).sqrt();
        if !(n > T::zero()) || !n.is_finite() {
            return Err(Error::InvalidPoint("cannot normalise a zero vector".into()));
        }
        Ok(Self {
            x: x / n,
            y: y / n,
            z: z / n,
        })
    }

    pub fn dot(&self, o: &Self) -> T {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn cross(&self, o: &Self) -> Self {
        Self {
            x: self.y * o.z - self.z * o.y,
            y: self.z * o.x - self.x * o.z,
            z: self.x * o.y - self.y * o.x,
        }
    }

    pub fn norm(&self) -> T {
        self.dot(self).sqrt()
    }

    /// Great-circle distance between unit vectors.
    pub fn angle_to(&self, o: &Self) -> T {
        self.cross(o).norm().atan2(self.dot(o))
    }
}

impl<T: Real> Add for AmbientPoint<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self {
            x: self.x + o.x,
            y: self.y + o.y,
            z: self.z + o.z,
        }
    }
}

impl<T: Real> Sub for AmbientPoint<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self {
            x: self.x - o.x,
            y: self.y - o.y,
            z: self.z - o.z,
        }
    }
}

impl<T: Real> Mul<T> for AmbientPoint<T> {
    type Output = Self;
    fn mul(self, s: T) -> Self {
        Self {
            x: self.x * s,
            y: self.y * s,
            z: self.z * s,
        }
    }
}

impl<T: Real> Neg for AmbientPoint<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            x: -self.x,
            y: -self.y,
            z: -self.z,
        }
    }
}

/// Base point `p` with a positively oriented orthonormal tangent frame
/// `(e1, e2)`, `e2 = p x e1`. `v_theta = cos(theta) e1 + sin(theta) e2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphereFrame<T> {
    base: AmbientPoint<T>,
    e1: AmbientPoint<T>,
    e2: AmbientPoint<T>,
}

impl<T: Real> SphereFrame<T> {
    /// `p` on the positive y-axis, `L_0` the equator `z = 0`, and
    /// `L_theta` the equator turned by `theta` about the y-axis.
    pub fn standard() -> Self {
        let (z, o) = (T::zero(), T::one());
        let base = AmbientPoint { x: z, y: o, z };
        let e1 = AmbientPoint { x: o, y: z, z };
        Self {
            base,
            e1,
            e2: base.cross(&e1),
        }
    }

    /// Frame at `base` whose `v_0` is the tangent part of `reference`.
    pub fn new(base: AmbientPoint<T>, reference: AmbientPoint<T>) -> Result<Self> {
        let base = AmbientPoint::new(base.x, base.y, base.z)?;
        let t = reference - base * reference.dot(&base);
        let e1 = AmbientPoint::normalized(t.x, t.y, t.z)
            .map_err(|_| Error::InvalidPoint("reference direction is parallel to the base point".into()))?;
        Ok(Self {
            base,
            e1,
            e2: base.cross(&e1),
        })
    }

    pub fn base(&self) -> AmbientPoint<T> {
        self.base
    }

    /// Unit tangent `v_theta` at the base point.
    pub fn direction(&self, theta: T) -> AmbientPoint<T> {
        self.e1 * theta.cos() + self.e2 * theta.sin()
    }

    /// `q_theta = p x v_theta`, the pole of `L_theta` lying on `M`.
    pub fn pole(&self, theta: T) -> AmbientPoint<T> {
        self.base.cross(&self.direction(theta))
    }

    /// Point at signed arc length `t` along `L_theta`.
    pub fn point_on_line(&self, theta: T, t: T) -> AmbientPoint<T> {
        self.base * t.cos() + self.direction(theta) * t.sin()
    }

    /// Point of `M` at angle `s` from `e1` towards `e2`.
    pub fn polar_circle_point(&self, s: T) -> AmbientPoint<T> {
        self.e1 * s.cos() + self.e2 * s.sin()
    }

    /// Exponential map at `p` in geodesic polar coordinates.
    pub fn from_polar(&self, q: &SurfacePoint<T>) -> AmbientPoint<T> {
        let dir = self.direction(q.phi());
        self.base * q.r().cos() + dir * q.r().sin()
    }

    /// Geodesic polar coordinates about `p`; valid away from `-p`.
    pub fn to_polar(&self, q: &AmbientPoint<T>) -> Result<SurfacePoint<T>> {
        let (a, x, y) = (q.dot(&self.base), q.dot(&self.e1), q.dot(&self.e2));
        let tangential = x.hypot(y);
        SurfacePoint::new(tangential.atan2(a), y.atan2(x))
    }
}

/// Value of the set-valued projection `P_theta(q)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MultiProjection<T> {
    /// Unique closest point.
    Singleton(AmbientPoint<T>),
    /// Every point of `L_theta` is closest: `q = +-q_theta`.
    WholeLine,
}

impl<T> MultiProjection<T> {
    pub fn is_whole_line(&self) -> bool {
        matches!(self, MultiProjection::WholeLine)
    }
}

/// Closest points of the great circle `L_theta` to `q`.
///
/// The closest point maximises `<q, l>` over `l in L_theta`, which is the
/// normalised orthogonal projection of `q` onto the plane `span(p, v_theta)`.
/// When that projection vanishes (`|<q,p>|, |<q,v_theta>| <= 1e-12`) the
/// whole circle is returned.
pub fn multivalued_project<T: Real>(theta: T, q: &AmbientPoint<T>, frame: &SphereFrame<T>) -> MultiProjection<T> {
    let v = frame.direction(theta);
    let (a, b) = (q.dot(&frame.base), q.dot(&v));
    let tol = T::lit(ORTHOGONALITY_TOL);
    if a.abs() <= tol && b.abs() <= tol {
        return MultiProjection::WholeLine;
    }
    let h = a.hypot(b);
    MultiProjection::Singleton(frame.base * (a / h) + v * (b / h))
}

/// Signed arc-length coordinate of a point of `L_theta`.
pub fn line_coordinate<T: Real>(theta: T, l: &AmbientPoint<T>, frame: &SphereFrame<T>) -> T {
    l.dot(&frame.direction(theta)).atan2(l.dot(&frame.base))
}

/// The unique `theta in [0, pi)` with `<q, v_theta> = 0`, for `q` on `M`.
/// Antipodal points share the same value.
pub fn psi<T: Real>(q: &AmbientPoint<T>, frame: &SphereFrame<T>) -> Result<T> {
    let a = q.dot(&frame.base);
    if a.abs() > T::lit(ORTHOGONALITY_TOL) {
        return Err(Error::NotOnPolarCircle(a.as_f64()));
    }
    let (x, y) = (q.dot(&frame.e1), q.dot(&frame.e2));
    Ok(wrap(y.atan2(x) + T::FRAC_PI_2(), T::PI()))
}

/// Finite union of disjoint closed sub-intervals of `[0, pi)`, sorted.
/// A degenerate interval `(a, a)` stands for the single angle `a`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct AngleSet<T> {
    intervals: Vec<(T, T)>,
}

impl<T: Real> AngleSet<T> {
    /// Merges sorted-or-unsorted angles whose gaps do not exceed `resolution`.
    pub fn from_angles(angles: &[T], resolution: T) -> Self {
        let mut a: Vec<T> = angles.to_vec();
        a.sort_by(|x, y| x.partial_cmp(y).expect("finite angles"));
        let mut intervals: Vec<(T, T)> = Vec::new();
        for t in a {
            match intervals.last_mut() {
                Some(last) if t - last.1 <= resolution => last.1 = t,
                _ => intervals.push((t, t)),
            }
        }
        Self { intervals }
    }

    pub fn intervals(&self) -> &[(T, T)] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    /// Total length.
    pub fn measure(&self) -> T {
        self.intervals.iter().fold(T::zero(), |acc, &(a, b)| acc + (b - a))
    }

    pub fn contains(&self, theta: T) -> bool {
        self.intervals.iter().any(|&(a, b)| a <= theta && theta <= b)
    }

    /// Closure of `[0, pi)` minus this set.
    pub fn complement(&self) -> Self {
        let mut out = Vec::new();
        let mut start = T::zero();
        for &(a, b) in &self.intervals {
            if a > start {
                out.push((start, a));
            }
            start = b;
        }
        if start < T::PI() {
            out.push((start, T::PI()));
        }
        Self { intervals: out }
    }

    /// `start,end` rows.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "start,end")?;
        for &(a, b) in &self.intervals {
            writeln!(out, "{:.16e},{:.16e}", a.as_f64(), b.as_f64())?;
        }
        Ok(())
    }
}

/// Angles where the projection of `A` (a subset of `M`) explodes to the
/// whole line, i.e. `psi(A)`, at resolution `pi / n_theta`, and the
/// complementary angles where `P_theta(A)` is a finite point set.
pub fn exceptional_sets<T: Real>(
    points: &[AmbientPoint<T>],
    frame: &SphereFrame<T>,
    n_theta: usize,
) -> Result<(AngleSet<T>, AngleSet<T>)> {
    if n_theta == 0 {
        return Err(Error::InvalidConfig("n_theta must be positive".into()));
    }
    let angles = points.iter().map(|q| psi(q, frame)).collect::<Result<Vec<T>>>()?;
    let exceptional = AngleSet::from_angles(&angles, T::PI() / T::from_count(n_theta));
    let regular = exceptional.complement();
    Ok((exceptional, regular))
}
