//! Closest-point projections onto geodesic lines through a base point `p`
//! on the simply connected surface of constant curvature `K`.
//!
//! Points are stored in geodesic polar coordinates `(r, phi)` about `p`.
//! Every formula below works on the unit-curvature surface of the same sign:
//! lengths are multiplied by `sqrt(|K|)` on the way in and divided on the
//! way out, so `K = -4` is the hyperbolic plane with all distances halved.
//!
//! With the generalised sine `sn` (`sinh`, identity or `sin`) and tangent
//! `tn` (`tanh`, identity or `tan`), the projection onto the line `L_theta`
//! satisfies
//!
//! ```text
//! tn(Pi_theta q) = tn(d(p, q)) * cos(theta_q - theta)
//! ```
//!
//! and the transformed coordinate `tn(Pi_theta q)` is linear in
//! `cos(theta_q - theta)`.

use crate::error::{Error, Result};
use crate::scalar::{wrap, Real};

/// Which trigonometry the model uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    Hyperbolic,
    Euclidean,
    Spherical,
}

/// Constant-curvature surface with base point `p` and compact domain
/// `Omega = B(p, m)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfaceModel<T> {
    curvature: T,
    domain_radius: T,
}

impl<T: Real> SurfaceModel<T> {
    /// Builds a model with curvature `K` and domain radius `m`.
    ///
    /// For `K > 0` the radius must satisfy `m < pi / (2 sqrt K)`, otherwise
    /// closest points stop being unique.
    pub fn new(curvature: T, domain_radius: T) -> Result<Self> {
        if !curvature.is_finite() {
            return Err(Error::InvalidModel(format!(
                "curvature {curvature} is not finite"
            )));
        }
        if !(domain_radius > T::zero()) || !domain_radius.is_finite() {
            return Err(Error::InvalidModel(format!(
                "domain radius {domain_radius} must be positive and finite"
            )));
        }
        if curvature > T::zero() {
            let limit = T::FRAC_PI_2() / curvature.sqrt();
            if domain_radius >= limit {
                return Err(Error::InvalidModel(format!(
                    "domain radius {domain_radius} must be below pi/(2 sqrt K) = {limit}"
                )));
            }
        }
        Ok(Self {
            curvature,
            domain_radius,
        })
    }

    pub fn hyperbolic(domain_radius: T) -> Result<Self> {
        Self::new(-T::one(), domain_radius)
    }

    pub fn euclidean(domain_radius: T) -> Result<Self> {
        Self::new(T::zero(), domain_radius)
    }

    pub fn spherical(domain_radius: T) -> Result<Self> {
        Self::new(T::one(), domain_radius)
    }

    pub fn curvature(&self) -> T {
        self.curvature
    }

    pub fn domain_radius(&self) -> T {
        self.domain_radius
    }

    pub fn branch(&self) -> Branch {
        if self.curvature < T::zero() {
            Branch::Hyperbolic
        } else if self.curvature > T::zero() {
            Branch::Spherical
        } else {
            Branch::Euclidean
        }
    }

    /// `sqrt(|K|)`, or 1 in the flat case. Multiplying a length by this
    /// factor expresses it on the unit-curvature surface.
    pub fn length_scale(&self) -> T {
        if self.curvature == T::zero() {
            T::one()
        } else {
            self.curvature.abs().sqrt()
        }
    }

    /// Domain radius measured on the unit-curvature surface.
    pub fn unit_domain_radius(&self) -> T {
        self.domain_radius * self.length_scale()
    }

    /// Rejects points outside `Omega`.
    pub fn check(&self, q: &SurfacePoint<T>) -> Result<()> {
        if q.r > self.domain_radius {
            return Err(Error::OutsideDomain {
                r: q.r.as_f64(),
                m: self.domain_radius.as_f64(),
            });
        }
        Ok(())
    }

    /// The same surface rescaled by `s`: curvature `K / s^2`, radius `m s`.
    pub fn rescaled(&self, s: T) -> Result<Self> {
        Self::new(self.curvature / (s * s), self.domain_radius * s)
    }

    pub(crate) fn sn(&self, x: T) -> T {
        match self.branch() {
            Branch::Hyperbolic => x.sinh(),
            Branch::Euclidean => x,
            Branch::Spherical => x.sin(),
        }
    }

    pub(crate) fn tn(&self, x: T) -> T {
        match self.branch() {
            Branch::Hyperbolic => x.tanh(),
            Branch::Euclidean => x,
            Branch::Spherical => x.tan(),
        }
    }

    /// Inverse of [`Self::tn`]. The hyperbolic branch clamps its argument to
    /// `|x| <= 1 - 1e-15`.
    pub(crate) fn atn(&self, x: T) -> T {
        match self.branch() {
            Branch::Hyperbolic => artanh(x),
            Branch::Euclidean => x,
            Branch::Spherical => x.atan(),
        }
    }
}

/// Inverse hyperbolic tangent with the argument clamped away from `+-1`.
pub(crate) fn artanh<T: Real>(x: T) -> T {
    let limit = T::one() - T::lit(1e-15).max(T::epsilon());
    let x = x.max(-limit).min(limit);
    T::lit(0.5) * (x.ln_1p() - (-x).ln_1p())
}

/// A point in geodesic polar coordinates about the base point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfacePoint<T> {
    r: T,
    phi: T,
}

impl<T: Real> SurfacePoint<T> {
    /// `r` is the geodesic distance to `p`, `phi` the counter-clockwise angle
    /// from `L_0^+`. The angle is reduced into `[0, 2pi)` and forced to 0 at
    /// the base point.
    pub fn new(r: T, phi: T) -> Result<Self> {
        if !(r >= T::zero()) || !r.is_finite() {
            return Err(Error::InvalidPoint(format!("radius {r} must be >= 0")));
        }
        if !phi.is_finite() {
            return Err(Error::InvalidPoint(format!("angle {phi} is not finite")));
        }
        let phi = if r == T::zero() {
            T::zero()
        } else {
            wrap(phi, T::TAU())
        };
        Ok(Self { r, phi })
    }

    pub fn origin() -> Self {
        Self {
            r: T::zero(),
            phi: T::zero(),
        }
    }

    pub fn r(&self) -> T {
        self.r
    }

    pub fn phi(&self) -> T {
        self.phi
    }

    pub fn scaled(&self, s: T) -> Self {
        Self {
            r: self.r * s,
            phi: self.phi,
        }
    }
}

/// Direction `theta` of the geodesic line `L_theta = L_theta^+ u L_theta^-`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct GeodesicAngle<T>(T);

impl<T: Real> GeodesicAngle<T> {
    pub fn new(theta: T) -> Result<Self> {
        if theta >= T::zero() && theta < T::PI() {
            Ok(Self(theta))
        } else {
            Err(Error::InvalidAngle(theta.as_f64()))
        }
    }

    /// Reduces any angle modulo `pi`. Note that `L_theta^+` and `L_theta^-`
    /// swap when `theta` crosses a multiple of `pi`.
    pub fn wrapped(theta: T) -> Self {
        Self(wrap(theta, T::PI()))
    }

    pub fn radians(&self) -> T {
        self.0
    }
}

/// Everything known about the projection of one point onto `L_theta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectionResult<T> {
    /// Signed arc length from `p` to the foot point along `L_theta`.
    pub signed_coordinate: T,
    /// `tn(s * signed) / s` with `s = sqrt(|K|)`; `tanh` of the signed
    /// coordinate in the unit hyperbolic plane, `tan` on the unit sphere.
    pub transformed: T,
    /// Counter-clockwise angle from `L_theta^+` to the ray `p -> q`, in `[0, 2pi)`.
    pub incidence_angle: T,
    /// The foot point itself.
    pub projected_point: SurfacePoint<T>,
}

/// Geodesic distance `d_K(a, b)`.
///
/// Uses the half-angle form of the law of cosines,
/// `sn^2(d/2) = sn^2((r_a - r_b)/2) + sn(r_a) sn(r_b) sin^2(delta/2)`,
/// which stays accurate for nearby points.
pub fn distance<T: Real>(a: &SurfacePoint<T>, b: &SurfacePoint<T>, model: &SurfaceModel<T>) -> Result<T> {
    model.check(a)?;
    model.check(b)?;
    Ok(distance_unchecked(a, b, model))
}

pub(crate) fn distance_unchecked<T: Real>(
    a: &SurfacePoint<T>,
    b: &SurfacePoint<T>,
    model: &SurfaceModel<T>,
) -> T {
    let s = model.length_scale();
    let half = T::lit(0.5);
    let (xa, xb) = (a.r * s, b.r * s);
    let radial = model.sn((xa - xb) * half);
    let angular = ((a.phi - b.phi) * half).sin();
    let h = radial * radial + model.sn(xa) * model.sn(xb) * angular * angular;
    let h = h.max(T::zero()).sqrt();
    let unit = match model.branch() {
        Branch::Hyperbolic => T::lit(2.0) * h.asinh(),
        Branch::Euclidean => T::lit(2.0) * h,
        Branch::Spherical => T::lit(2.0) * h.min(T::one()).asin(),
    };
    unit / s
}

/// The point at signed arc length `t` on `L_theta`.
pub fn point_on_line<T: Real>(theta: GeodesicAngle<T>, t: T) -> SurfacePoint<T> {
    let phi = if t >= T::zero() {
        theta.radians()
    } else {
        theta.radians() + T::PI()
    };
    SurfacePoint {
        r: t.abs(),
        phi: if t == T::zero() { T::zero() } else { phi },
    }
}

/// Orthogonal projection of `q` onto `L_theta`.
///
/// When the foot point is `p` itself the signed coordinate is `+0`.
pub fn signed_projection<T: Real>(
    theta: GeodesicAngle<T>,
    q: &SurfacePoint<T>,
    model: &SurfaceModel<T>,
) -> Result<ProjectionResult<T>> {
    model.check(q)?;
    let s = model.length_scale();
    let incidence_angle = wrap(q.phi - theta.radians(), T::TAU());
    let unit_transformed = model.tn(q.r * s) * incidence_angle.cos();
    // adding +0 turns a -0 into +0
    let signed_coordinate = model.atn(unit_transformed) / s + T::zero();
    Ok(ProjectionResult {
        signed_coordinate,
        transformed: unit_transformed / s,
        incidence_angle,
        projected_point: point_on_line(theta, signed_coordinate),
    })
}

/// Transformed projection `tn(d(p,q)) cos(theta_q - theta)` (in scaled units)
/// for an arbitrary real `theta`. No domain check.
pub(crate) fn transformed_projection<T: Real>(theta: T, q: &SurfacePoint<T>, model: &SurfaceModel<T>) -> T {
    let s = model.length_scale();
    model.tn(q.r * s) * (q.phi - theta).cos() / s
}

/// Brute-force closest point: minimises `t -> d(q, point_on_line(theta, t))`
/// over `resolution` samples of `[-m, m]`, then refines twice with 100-point
/// grids around the running argmin.
///
/// Exists to check [`signed_projection`] against the defining
/// minimisation property.
pub fn oracle_projection<T: Real>(
    theta: GeodesicAngle<T>,
    q: &SurfacePoint<T>,
    model: &SurfaceModel<T>,
    resolution: usize,
) -> Result<T> {
    model.check(q)?;
    if resolution < 2 {
        return Err(Error::InvalidConfig(format!(
            "oracle resolution must be at least 2, got {resolution}"
        )));
    }
    let m = model.domain_radius();
    let cost = |t: T| distance_unchecked(q, &point_on_line(theta, t), model);
    let argmin = |lo: T, hi: T, n: usize| -> (T, T) {
        let step = (hi - lo) / T::from_count(n - 1);
        let mut best = (lo, cost(lo));
        for i in 1..n {
            let t = lo + step * T::from_count(i);
            let c = cost(t);
            if c < best.1 {
                best = (t, c);
            }
        }
        (best.0, step)
    };

    let (mut t, mut step) = argmin(-m, m, resolution);
    for _ in 0..2 {
        let lo = (t - step).max(-m);
        let hi = (t + step).min(m);
        let (t_next, step_next) = argmin(lo, hi, 100);
        t = t_next;
        step = step_next;
    }
    Ok(t)
}

/// Adjacent leg `b` of a right triangle with hypotenuse `c` and angle
/// `alpha` between them: `tn(b) = tn(c) cos(alpha)`.
///
/// On the sphere this is `tan b = tan c cos alpha`.
pub fn right_triangle_leg<T: Real>(c: T, alpha: T, model: &SurfaceModel<T>) -> Result<T> {
    let diameter = T::lit(2.0) * model.domain_radius();
    if !(c > T::zero()) || c > diameter {
        return Err(Error::HypotenuseTooLong {
            c: c.as_f64(),
            diameter: diameter.as_f64(),
        });
    }
    if !(alpha >= T::zero() && alpha <= T::FRAC_PI_2()) {
        return Err(Error::InvalidAngle(alpha.as_f64()));
    }
    let s = model.length_scale();
    Ok(model.atn(model.tn(c * s) * alpha.cos()) / s)
}
