//! Transversality and regularity of the transformed projection family.
//!
//! For two distinct points the difference of transformed projections is a
//! pure cosine in the line direction:
//!
//! ```text
//! tPi_theta p1 - tPi_theta p2 = D cos(theta - theta_hat)
//! ```
//!
//! with `A = td1 cos(alpha0) - td2`, `B = td1 sin(alpha0)`, `D = sqrt(A^2 + B^2)`
//! and `theta_hat = theta2 + atan2(B, A)`. Hence the normalised difference
//! `Phi = (tPi p1 - tPi p2) / d(p1, p2)` and all of its derivatives are
//! bounded by `D / d`, and whenever `|Phi|` is small its slope is not.
//! This module computes the decomposition, samples the constants bounding
//! `D / d` over the domain, and checks both properties on seeded samples.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{distance_unchecked, transformed_projection, Branch, GeodesicAngle, SurfaceModel, SurfacePoint};
use crate::sampling::{sample_pairs, SampledPair, DIAGONAL_CUTOFF};
use crate::scalar::{wrap, Real};

/// Default highest derivative order checked; derivatives of `Phi` cycle with period 4.
pub const DEFAULT_MAX_ORDER: usize = 4;

/// Slack allowed when comparing sampled extrema with closed-form bounds.
pub const BOUND_RTOL: f64 = 1e-12;

/// Grid size used to evaluate the sup/inf defining the analytic constants.
const BOUND_GRID: usize = 10_000;

/// Triangle data of `(p, p1, p2)`. Lengths are in the metric `d_K`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairGeometry<T> {
    pub d1: T,
    pub d2: T,
    pub d: T,
    /// `tn(s d1) / s`.
    pub td1: T,
    pub td2: T,
    pub theta1: T,
    pub theta2: T,
    /// `theta1 - theta2`.
    pub alpha0: T,
}

pub fn pair_geometry<T: Real>(
    p1: &SurfacePoint<T>,
    p2: &SurfacePoint<T>,
    model: &SurfaceModel<T>,
) -> Result<PairGeometry<T>> {
    model.check(p1)?;
    model.check(p2)?;
    let d = distance_unchecked(p1, p2, model);
    if d < T::lit(DIAGONAL_CUTOFF) {
        return Err(Error::DiagonalPair(d.as_f64()));
    }
    let s = model.length_scale();
    Ok(PairGeometry {
        d1: p1.r(),
        d2: p2.r(),
        d,
        td1: model.tn(p1.r() * s) / s,
        td2: model.tn(p2.r() * s) / s,
        theta1: p1.phi(),
        theta2: p2.phi(),
        alpha0: p1.phi() - p2.phi(),
    })
}

/// `D cos(theta - theta_hat)` form of the projection difference.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Decomposition<T> {
    pub a: T,
    pub b: T,
    /// `D = sqrt(A^2 + B^2)`.
    pub amplitude: T,
    /// In `(0, 2pi]`; `atan2` returning 0 is mapped to `2pi`.
    pub alpha_hat: T,
    /// `theta2 + alpha_hat` reduced into `[0, 2pi)`.
    pub theta_hat: T,
}

impl<T: Real> Decomposition<T> {
    /// `D cos(theta - theta_hat)`.
    pub fn evaluate(&self, theta: T) -> T {
        self.amplitude * (theta - self.theta_hat).cos()
    }
}

pub fn decomposition<T: Real>(g: &PairGeometry<T>) -> Decomposition<T> {
    let a = g.td1 * g.alpha0.cos() - g.td2;
    let b = g.td1 * g.alpha0.sin();
    let amplitude = a.hypot(b);
    assert!(amplitude > T::zero(), "A and B vanish only on the diagonal");
    let mut alpha_hat = b.atan2(a);
    if alpha_hat <= T::zero() {
        alpha_hat = alpha_hat + T::TAU();
    }
    Decomposition {
        a,
        b,
        amplitude,
        alpha_hat,
        theta_hat: wrap(g.theta2 + alpha_hat, T::TAU()),
    }
}

/// `A^2 + B^2` from the triangle side lengths alone, via the law of cosines.
///
/// Hyperbolic: `(2 cosh d cosh d1 cosh d2 - cosh^2 d1 - cosh^2 d2) / (cosh^2 d1 cosh^2 d2)`;
/// spherical: `(cos^2 d1 + cos^2 d2 - 2 cos d cos d1 cos d2) / (cos^2 d1 cos^2 d2)`;
/// flat: `d^2`. Lengths are taken on the unit-curvature surface and the
/// result is converted back.
pub fn amplitude_squared_from_sides<T: Real>(g: &PairGeometry<T>, model: &SurfaceModel<T>) -> T {
    let s = model.length_scale();
    let (x1, x2, x) = (g.d1 * s, g.d2 * s, g.d * s);
    let two = T::lit(2.0);
    let unit = match model.branch() {
        Branch::Hyperbolic => {
            let (c1, c2) = (x1.cosh(), x2.cosh());
            (two * x.cosh() * c1 * c2 - c1 * c1 - c2 * c2) / (c1 * c1 * c2 * c2)
        }
        Branch::Spherical => {
            let (c1, c2) = (x1.cos(), x2.cos());
            (c1 * c1 + c2 * c2 - two * x.cos() * c1 * c2) / (c1 * c1 * c2 * c2)
        }
        Branch::Euclidean => x * x,
    };
    unit / (s * s)
}

/// `Phi_theta(p1, p2) = (tPi_theta p1 - tPi_theta p2) / d(p1, p2)`.
pub fn phi<T: Real>(
    theta: GeodesicAngle<T>,
    p1: &SurfacePoint<T>,
    p2: &SurfacePoint<T>,
    model: &SurfaceModel<T>,
) -> Result<T> {
    let g = pair_geometry(p1, p2, model)?;
    Ok(phi_at(theta.radians(), p1, p2, g.d, model))
}

fn phi_at<T: Real>(theta: T, p1: &SurfacePoint<T>, p2: &SurfacePoint<T>, d: T, model: &SurfaceModel<T>) -> T {
    (transformed_projection(theta, p1, model) - transformed_projection(theta, p2, model)) / d
}

/// Closed-form `d^l Phi / d theta^l = (D/d) cos(theta - theta_hat + l pi/2)`.
pub fn phi_derivative<T: Real>(
    theta: GeodesicAngle<T>,
    p1: &SurfacePoint<T>,
    p2: &SurfacePoint<T>,
    model: &SurfaceModel<T>,
    order: usize,
) -> Result<T> {
    if order == 0 {
        return Err(Error::InvalidOrder);
    }
    let g = pair_geometry(p1, p2, model)?;
    let dec = decomposition(&g);
    Ok(derivative_from(&dec, g.d, theta.radians(), order))
}

fn derivative_from<T: Real>(dec: &Decomposition<T>, d: T, theta: T, order: usize) -> T {
    let shift = T::FRAC_PI_2() * T::from_count(order % 4);
    dec.amplitude / d * (theta - dec.theta_hat + shift).cos()
}

/// Derivatives `d^l Pi_theta q / d theta^l` for `l = 0..=max_order` of the
/// signed projection of one point, by Taylor-mode differentiation through
/// `artanh` / `arctan`.
pub fn projection_derivatives<T: Real>(
    theta: T,
    q: &SurfacePoint<T>,
    model: &SurfaceModel<T>,
    max_order: usize,
) -> Vec<T> {
    let n = max_order + 1;
    let s = model.length_scale();
    let amp = model.tn(q.r() * s);
    let c = q.phi() - theta;
    // u(theta + h) = amp cos(c - h); k-th h-derivative is amp cos(c - k pi/2)
    let mut u = Vec::with_capacity(n);
    let mut fact = T::one();
    for k in 0..n {
        if k > 0 {
            fact = fact * T::from_count(k);
        }
        u.push(amp * (c - T::FRAC_PI_2() * T::from_count(k % 4)).cos() / fact);
    }

    let w = match model.branch() {
        Branch::Euclidean => u.clone(),
        branch => {
            let sign = if branch == Branch::Hyperbolic { -T::one() } else { T::one() };
            // w' = u' / (1 -+ u^2)
            let mut g = series_mul(&u, &u);
            for gk in g.iter_mut() {
                *gk = *gk * sign;
            }
            g[0] = g[0] + T::one();
            let du: Vec<T> = (1..n).map(|k| u[k] * T::from_count(k)).collect();
            let dw = series_div(&du, &g[..n.saturating_sub(1)]);
            let mut w = vec![model.atn(u[0])];
            for (k, dwk) in dw.into_iter().enumerate() {
                w.push(dwk / T::from_count(k + 1));
            }
            w
        }
    };

    let mut out = Vec::with_capacity(n);
    let mut fact = T::one();
    for (k, wk) in w.into_iter().enumerate() {
        if k > 0 {
            fact = fact * T::from_count(k);
        }
        out.push(wk * fact / s);
    }
    out
}

fn series_mul<T: Real>(a: &[T], b: &[T]) -> Vec<T> {
    let n = a.len().min(b.len());
    (0..n)
        .map(|k| (0..=k).fold(T::zero(), |acc, i| acc + a[i] * b[k - i]))
        .collect()
}

fn series_div<T: Real>(num: &[T], den: &[T]) -> Vec<T> {
    let n = num.len().min(den.len());
    let mut q: Vec<T> = Vec::with_capacity(n);
    for k in 0..n {
        let acc = (1..=k).fold(num[k], |acc, i| acc - den[i] * q[k - i]);
        q.push(acc / den[0]);
    }
    q
}

/// Closed-form bounds `c <= D/d <= C` valid on the whole domain ball.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalyticBounds<T> {
    pub lower: T,
    pub upper: T,
}

/// With `M` the domain radius on the unit-curvature surface:
///
/// * hyperbolic: `C = sqrt2 sup_{0<t<=2M} sqrt(cosh t - 1)/t`,
///   `c = sqrt(c~/2)` with `c~ = 1/cosh^4 M`;
/// * spherical: `c = inf_{0<t<=2M} sqrt2 sqrt(1 - cos t)/t`, `C = 1/cos^2 M`;
/// * flat: `c = C = 1`.
///
/// The sup and inf are taken over a uniform grid on `(0, 2M]`, evaluating
/// `sqrt(2 (cosh t - 1)) = 2 sinh(t/2)` and `sqrt(2 (1 - cos t)) = 2 sin(t/2)`
/// to avoid cancellation near 0.
pub fn analytic_bounds<T: Real>(model: &SurfaceModel<T>) -> AnalyticBounds<T> {
    let big_m = model.unit_domain_radius();
    let two = T::lit(2.0);
    let half = T::lit(0.5);
    let grid = (1..=BOUND_GRID).map(|i| two * big_m * T::from_count(i) / T::from_count(BOUND_GRID));
    match model.branch() {
        Branch::Hyperbolic => {
            let upper = grid.map(|t| two * (t * half).sinh() / t).fold(T::zero(), T::max);
            let c_tilde = T::one() / big_m.cosh().powi(4);
            AnalyticBounds {
                lower: (c_tilde / two).sqrt(),
                upper,
            }
        }
        Branch::Spherical => {
            let lower = grid
                .map(|t| two * (t * half).sin() / t)
                .fold(T::infinity(), T::min);
            AnalyticBounds {
                lower,
                upper: T::one() / big_m.cos().powi(2),
            }
        }
        Branch::Euclidean => AnalyticBounds {
            lower: T::one(),
            upper: T::one(),
        },
    }
}

/// A sampled `(pair, theta)` where `|Phi| <= c'` but `|dPhi/dtheta| < c'`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Violation<T> {
    pub pair: SampledPair<T>,
    pub theta: T,
    pub phi: T,
    pub slope: T,
}

/// Sampled and closed-form constants plus the outcome of the checks.
#[derive(Debug, Clone, PartialEq)]
pub struct TransversalityReport<T> {
    /// `min D/d` over the sampled pairs.
    pub c_hat: T,
    /// `max D/d` over the sampled pairs.
    pub upper_hat: T,
    pub c_analytic: T,
    pub upper_analytic: T,
    /// Transversality threshold, just below `c_hat / 10`.
    pub c_prime: T,
    /// `sup |d^l Phi/d theta^l|` for `l = 0..=max_order`; empty when only
    /// constants were estimated.
    pub derivative_bounds: Vec<T>,
    /// `sup |d^l Pi_theta q/d theta^l|` over sampled single points.
    pub projection_derivative_bounds: Vec<T>,
    pub violations: Vec<Violation<T>>,
    /// Sampled `D/d` ratios outside `[c_analytic, upper_analytic]`.
    pub out_of_bounds: usize,
    /// `(order, pair, theta)` samples exceeding `upper_hat` or non-finite
    /// projection derivatives.
    pub regularity_failures: usize,
    pub sample_count: usize,
    pub theta_count: usize,
    pub seed: u64,
}

impl<T: Real> TransversalityReport<T> {
    /// `c_analytic <= c_hat <= C_hat <= C_analytic`, up to [`BOUND_RTOL`].
    pub fn sandwich_holds(&self) -> bool {
        let tol = T::lit(BOUND_RTOL);
        self.c_analytic <= self.c_hat * (T::one() + tol)
            && self.c_hat <= self.upper_hat
            && self.upper_hat <= self.upper_analytic * (T::one() + tol)
    }

    pub fn is_clean(&self) -> bool {
        self.sandwich_holds() && self.violations.is_empty() && self.regularity_failures == 0 && self.out_of_bounds == 0
    }
}

/// `c' = c_hat / 10 * (1 - 1e-12)`.
pub fn transversality_threshold<T: Real>(c_hat: T) -> T {
    c_hat / T::lit(10.0) * (T::one() - T::lit(1e-12))
}

struct Constants<T> {
    ratios: Vec<T>,
    decompositions: Vec<Decomposition<T>>,
    min: T,
    max: T,
    bounds: AnalyticBounds<T>,
    out_of_bounds: usize,
}

fn constants_for<T: Real>(model: &SurfaceModel<T>, pairs: &[SampledPair<T>]) -> Result<Constants<T>> {
    let per_pair: Vec<(Decomposition<T>, T)> = pairs
        .par_iter()
        .map(|p| {
            let g = pair_geometry(&p.p1, &p.p2, model)?;
            let dec = decomposition(&g);
            Ok((dec, dec.amplitude / g.d))
        })
        .collect::<Result<_>>()?;
    let (decompositions, ratios): (Vec<_>, Vec<_>) = per_pair.into_iter().unzip();
    let min = ratios.iter().copied().fold(T::infinity(), T::min);
    let max = ratios.iter().copied().fold(T::neg_infinity(), T::max);
    let bounds = analytic_bounds(model);
    let tol = T::lit(BOUND_RTOL);
    let out_of_bounds = ratios
        .iter()
        .filter(|&&r| r * (T::one() + tol) < bounds.lower || r > bounds.upper * (T::one() + tol))
        .count();
    Ok(Constants {
        ratios,
        decompositions,
        min,
        max,
        bounds,
        out_of_bounds,
    })
}

/// Samples `n_pairs` pairs from the domain and reports the extrema of `D/d`
/// next to the closed-form bounds.
pub fn estimate_constants<T: Real>(model: &SurfaceModel<T>, n_pairs: usize, seed: u64) -> Result<TransversalityReport<T>> {
    let pairs = sample_pairs(model, n_pairs, seed)?;
    let k = constants_for(model, &pairs)?;
    Ok(TransversalityReport {
        c_hat: k.min,
        upper_hat: k.max,
        c_analytic: k.bounds.lower,
        upper_analytic: k.bounds.upper,
        c_prime: transversality_threshold(k.min),
        derivative_bounds: Vec::new(),
        projection_derivative_bounds: Vec::new(),
        violations: Vec::new(),
        out_of_bounds: k.out_of_bounds,
        regularity_failures: 0,
        sample_count: pairs.len(),
        theta_count: 0,
        seed,
    })
}

/// Uniform open grid `pi (j + 1/2) / n`, `j = 0..n`.
pub fn theta_grid<T: Real>(n: usize) -> Vec<T> {
    (0..n)
        .map(|j| T::PI() * (T::from_count(j) + T::lit(0.5)) / T::from_count(n))
        .collect()
}

struct PairScan<T> {
    sup: Vec<T>,
    projection_sup: Vec<T>,
    violations: Vec<Violation<T>>,
    failures: usize,
}

/// Checks bounded derivatives, transversality of order 0 and regularity on
/// `n_pairs` seeded pairs times `n_thetas` grid angles.
///
/// `Phi` itself is evaluated from the projections, its derivatives from the
/// decomposition. The single-point bounded-derivative condition is checked
/// on the first point of every pair.
pub fn check_definition<T: Real>(
    model: &SurfaceModel<T>,
    n_pairs: usize,
    n_thetas: usize,
    max_order: usize,
    seed: u64,
) -> Result<TransversalityReport<T>> {
    if max_order == 0 {
        return Err(Error::InvalidOrder);
    }
    if n_thetas == 0 {
        return Err(Error::InvalidConfig("at least one angle is required".into()));
    }
    let pairs = sample_pairs(model, n_pairs, seed)?;
    let k = constants_for(model, &pairs)?;
    let c_prime = transversality_threshold(k.min);
    let upper_hat = k.max;
    let thetas: Vec<T> = theta_grid(n_thetas);
    let slack = T::one() + T::lit(BOUND_RTOL);

    let scans: Vec<PairScan<T>> = pairs
        .par_iter()
        .zip(k.decompositions.par_iter().zip(k.ratios.par_iter()))
        .map(|(pair, (dec, _ratio))| {
            let mut scan = PairScan {
                sup: vec![T::zero(); max_order + 1],
                projection_sup: vec![T::zero(); max_order + 1],
                violations: Vec::new(),
                failures: 0,
            };
            for &theta in &thetas {
                let value = phi_at(theta, &pair.p1, &pair.p2, pair.distance, model);
                scan.sup[0] = scan.sup[0].max(value.abs());
                if value.abs() > upper_hat * slack {
                    scan.failures += 1;
                }
                for order in 1..=max_order {
                    let der = derivative_from(dec, pair.distance, theta, order).abs();
                    scan.sup[order] = scan.sup[order].max(der);
                    if der > upper_hat * slack {
                        scan.failures += 1;
                    }
                }
                let slope = derivative_from(dec, pair.distance, theta, 1);
                if value.abs() <= c_prime && slope.abs() < c_prime {
                    scan.violations.push(Violation {
                        pair: *pair,
                        theta,
                        phi: value,
                        slope,
                    });
                }
                for (l, der) in projection_derivatives(theta, &pair.p1, model, max_order)
                    .into_iter()
                    .enumerate()
                {
                    if der.is_finite() {
                        scan.projection_sup[l] = scan.projection_sup[l].max(der.abs());
                    } else {
                        scan.failures += 1;
                    }
                }
            }
            scan
        })
        .collect();

    let mut derivative_bounds = vec![T::zero(); max_order + 1];
    let mut projection_derivative_bounds = vec![T::zero(); max_order + 1];
    let mut violations = Vec::new();
    let mut regularity_failures = 0;
    for scan in scans {
        for l in 0..=max_order {
            derivative_bounds[l] = derivative_bounds[l].max(scan.sup[l]);
            projection_derivative_bounds[l] = projection_derivative_bounds[l].max(scan.projection_sup[l]);
        }
        violations.extend(scan.violations);
        regularity_failures += scan.failures;
    }

    Ok(TransversalityReport {
        c_hat: k.min,
        upper_hat,
        c_analytic: k.bounds.lower,
        upper_analytic: k.bounds.upper,
        c_prime,
        derivative_bounds,
        projection_derivative_bounds,
        violations,
        out_of_bounds: k.out_of_bounds,
        regularity_failures,
        sample_count: pairs.len(),
        theta_count: n_thetas,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::signed_projection;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, PI};

    fn pt(r: f64, phi: f64) -> SurfacePoint<f64> {
        SurfacePoint::new(r, phi).unwrap()
    }

    fn angle(t: f64) -> GeodesicAngle<f64> {
        GeodesicAngle::new(t).unwrap()
    }

    #[test]
    fn diagonal_pair_is_rejected() {
        let h = SurfaceModel::hyperbolic(2.0).unwrap();
        let q = pt(1.0, 0.0);
        assert!(matches!(pair_geometry(&q, &q, &h), Err(Error::DiagonalPair(_))));
        assert!(phi(angle(0.3), &q, &q, &h).is_err());
        assert!(phi_derivative(angle(0.3), &q, &q, &h, 1).is_err());
    }

    #[test]
    fn pair_with_base_point() {
        let h = SurfaceModel::hyperbolic(2.0).unwrap();
        let g = pair_geometry(&pt(1.0, FRAC_PI_2), &SurfacePoint::origin(), &h).unwrap();
        assert_eq!((g.d1, g.d2), (1.0, 0.0));
        assert!((g.d - 1.0).abs() < 1e-15);
        assert!((g.td1 - 0.761_594_155_955_764_9).abs() < 1e-15);
        assert_eq!(g.td2, 0.0);
        assert!((g.alpha0 - FRAC_PI_2).abs() < 1e-15);

        let dec = decomposition(&g);
        assert!((dec.amplitude - 1f64.tanh()).abs() < 1e-15);
        assert!((dec.theta_hat - FRAC_PI_2).abs() < 1e-15);

        let s = SurfaceModel::spherical(1.3).unwrap();
        let g = pair_geometry(&pt(1.0, 0.0), &pt(1.0, FRAC_PI_2), &s).unwrap();
        assert!((g.d - 1.274_555_782_306_294_3).abs() < 1e-12);
    }

    #[test]
    fn symmetric_pair_decomposition() {
        let h = SurfaceModel::hyperbolic(2.0).unwrap();
        let (r, a0) = (1.2, 1e-3);
        let g = pair_geometry(&pt(r, a0), &pt(r, 0.0), &h).unwrap();
        let dec = decomposition(&g);
        assert!(dec.a.abs() < 1e-6);
        assert!((dec.b - r.tanh() * a0).abs() < 1e-9);
    }

    #[test]
    fn alpha_hat_zero_maps_to_two_pi() {
        // B = 0 with A > 0
        let e = SurfaceModel::euclidean(3.0).unwrap();
        let g = pair_geometry(&pt(2.0, 0.0), &pt(1.0, 0.0), &e).unwrap();
        let dec = decomposition(&g);
        assert_eq!(dec.b, 0.0);
        assert!(dec.a > 0.0);
        assert_eq!(dec.alpha_hat, std::f64::consts::TAU);
        assert_eq!(dec.theta_hat, 0.0);
    }

    #[test]
    fn decomposition_identity_reference_pair() {
        let h = SurfaceModel::hyperbolic(2.0).unwrap();
        let (p1, p2) = (pt(1.0, FRAC_PI_3), pt(0.5, 0.0));
        let dec = decomposition(&pair_geometry(&p1, &p2, &h).unwrap());
        let mut worst = 0f64;
        for theta in theta_grid::<f64>(1000) {
            let a = signed_projection(angle(theta), &p1, &h).unwrap().transformed;
            let b = signed_projection(angle(theta), &p2, &h).unwrap().transformed;
            worst = worst.max((a - b - dec.evaluate(theta)).abs());
        }
        assert!(worst <= 1e-12, "{worst}");
    }

    #[test]
    fn phi_at_peak_and_node() {
        let h = SurfaceModel::hyperbolic(2.0).unwrap();
        let (p1, p2) = (pt(1.0, 0.4), pt(0.0, 0.0));
        let g = pair_geometry(&p1, &p2, &h).unwrap();
        let dec = decomposition(&g);
        let peak = dec.theta_hat % PI;
        let v = phi(angle(peak), &p1, &p2, &h).unwrap();
        assert!((v - 0.761_594_155_955_764_9).abs() < 1e-12);
        let node = (dec.theta_hat + FRAC_PI_2) % PI;
        assert!(phi(angle(node), &p1, &p2, &h).unwrap().abs() < 1e-12);
        assert!(phi_derivative(angle(peak), &p1, &p2, &h, 1).unwrap().abs() < 1e-12);
        let second = phi_derivative(angle(peak), &p1, &p2, &h, 2).unwrap();
        assert!((second + dec.amplitude / g.d).abs() < 1e-12);
        assert!(matches!(
            phi_derivative(angle(peak), &p1, &p2, &h, 0),
            Err(Error::InvalidOrder)
        ));
    }

    #[test]
    fn derivative_matches_central_difference() {
        let h = SurfaceModel::hyperbolic(2.0).unwrap();
        let (p1, p2) = (pt(1.7, 2.1), pt(0.9, 5.0));
        let g = pair_geometry(&p1, &p2, &h).unwrap();
        let scale = decomposition(&g).amplitude / g.d;
        let step = 1e-5;
        for theta in [0.1, 0.9, 1.7, 2.9] {
            let fd = (phi(angle(theta + step), &p1, &p2, &h).unwrap()
                - phi(angle(theta - step), &p1, &p2, &h).unwrap())
                / (2.0 * step);
            let an = phi_derivative(angle(theta), &p1, &p2, &h, 1).unwrap();
            assert!((fd - an).abs() <= 1e-6 * an.abs().max(scale));
        }
    }

    #[test]
    fn closed_form_amplitude() {
        let h = SurfaceModel::hyperbolic(2.0).unwrap();
        let s = SurfaceModel::spherical(1.2).unwrap();
        let e = SurfaceModel::euclidean(2.0).unwrap();
        for model in [h, s, e] {
            let g = pair_geometry(&pt(1.1, 0.2), &pt(0.6, 2.6), &model).unwrap();
            let dec = decomposition(&g);
            let lhs = dec.amplitude * dec.amplitude;
            let rhs = amplitude_squared_from_sides(&g, &model);
            assert!((lhs - rhs).abs() <= 1e-10 * lhs, "{model:?}: {lhs} vs {rhs}");
        }
    }

    #[test]
    fn analytic_bounds_closed_forms() {
        let h = analytic_bounds(&SurfaceModel::hyperbolic(2.0).unwrap());
        // sqrt(cosh t - 1)/t is increasing, so the sup sits at t = 4
        assert!((h.upper - 2f64.sinh() / 2.0).abs() < 1e-12);
        assert!((h.upper - 1.813_430_203_923_509_5).abs() < 1e-12);
        assert!((h.lower - 0.049_957_677_350_095_66).abs() < 1e-14);

        let s = analytic_bounds(&SurfaceModel::spherical(1.2).unwrap());
        assert!((s.lower - 1.2f64.sin() / 1.2).abs() < 1e-12);
        assert!((s.upper - 7.615_963_967_207_052).abs() < 1e-9);

        let e = analytic_bounds(&SurfaceModel::euclidean(1.0).unwrap());
        assert_eq!((e.lower, e.upper), (1.0, 1.0));
    }

    #[test]
    fn euclidean_ratio_is_one() {
        let e = SurfaceModel::<f64>::euclidean(2.0).unwrap();
        let report = estimate_constants(&e, 2000, 11).unwrap();
        assert!((report.c_hat - 1.0).abs() < 1e-12);
        assert!((report.upper_hat - 1.0).abs() < 1e-12);
        assert!(report.sandwich_holds());
        assert_eq!(report.out_of_bounds, 0);
    }

    #[test]
    fn spherical_upper_constant() {
        let s = SurfaceModel::spherical(1.2).unwrap();
        let report = estimate_constants(&s, 5000, 5).unwrap();
        assert!(report.upper_hat <= 7.615_963_967_207_052);
        assert!(report.sandwich_holds());
    }

    #[test]
    fn threshold_sits_below_tenth() {
        let c = transversality_threshold(0.5f64);
        assert!(c < 0.05);
        assert!(c > 0.05 * (1.0 - 1e-11));
    }

    #[test]
    fn projection_derivatives_match_finite_differences() {
        let step = 1e-4;
        for model in [
            SurfaceModel::hyperbolic(2.5).unwrap(),
            SurfaceModel::spherical(1.3).unwrap(),
            SurfaceModel::euclidean(2.0).unwrap(),
        ] {
            let q = pt(model.domain_radius() * 0.9, 1.1);
            let f = |t: f64| signed_projection(GeodesicAngle::wrapped(t), &q, &model).unwrap().signed_coordinate;
            let theta = 0.7;
            let ders = projection_derivatives(theta, &q, &model, 4);
            assert!((ders[0] - f(theta)).abs() < 1e-12);
            let d1 = (f(theta + step) - f(theta - step)) / (2.0 * step);
            let d2 = (f(theta + step) - 2.0 * f(theta) + f(theta - step)) / (step * step);
            assert!((ders[1] - d1).abs() < 1e-6 * ders[1].abs().max(1.0), "{model:?}");
            assert!((ders[2] - d2).abs() < 1e-4 * ders[2].abs().max(1.0), "{model:?}");
            // third derivative from differences of the analytic second derivative
            let d3 = (projection_derivatives(theta + step, &q, &model, 2)[2]
                - projection_derivatives(theta - step, &q, &model, 2)[2])
                / (2.0 * step);
            assert!((ders[3] - d3).abs() < 1e-5 * ders[3].abs().max(1.0), "{model:?}");
        }
    }

    #[test]
    fn small_definition_check_is_clean() {
        for model in [
            SurfaceModel::<f64>::hyperbolic(2.0).unwrap(),
            SurfaceModel::spherical(1.2).unwrap(),
            SurfaceModel::euclidean(1.0).unwrap(),
        ] {
            let report = check_definition(&model, 300, 90, DEFAULT_MAX_ORDER, 9).unwrap();
            assert!(report.is_clean(), "{model:?}: {report:?}");
            assert_eq!(report.derivative_bounds.len(), 5);
            for b in &report.derivative_bounds {
                assert!(*b <= report.upper_hat * (1.0 + 1e-12));
            }
            assert!(report.projection_derivative_bounds.iter().all(|b| b.is_finite()));
        }
        let h = SurfaceModel::<f64>::hyperbolic(2.0).unwrap();
        assert!(check_definition(&h, 10, 10, 0, 1).is_err());
    }
}
