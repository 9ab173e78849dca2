//! Seeded sampling of points and pairs from the domain ball.
//!
//! The generator is ChaCha8 seeded through `SeedableRng::seed_from_u64`, so a
//! seed fixes every sample on every platform.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::{distance_unchecked, Branch, SurfaceModel, SurfacePoint};
use crate::scalar::Real;

/// Pairs closer than this are treated as lying on the diagonal.
pub const DIAGONAL_CUTOFF: f64 = 1e-9;

/// Maximum number of draws per requested pair before giving up.
pub const OVERSAMPLING: usize = 100;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Draws a point distributed uniformly with respect to the Riemannian area
/// of `B(p, m)`.
pub fn sample_point<T: Real, R: Rng + ?Sized>(model: &SurfaceModel<T>, rng: &mut R) -> SurfacePoint<T> {
    let u: f64 = rng.random();
    let phi: f64 = rng.random_range(0.0..std::f64::consts::TAU);
    let s = model.length_scale().as_f64();
    let big_m = model.unit_domain_radius().as_f64();
    // inverse of the area fraction of B(p, r) inside B(p, m)
    let unit_r = match model.branch() {
        Branch::Hyperbolic => (1.0 + u * (big_m.cosh() - 1.0)).acosh(),
        Branch::Euclidean => big_m * u.sqrt(),
        Branch::Spherical => (1.0 - u * (1.0 - big_m.cos())).acos(),
    };
    let r = T::lit(unit_r / s).min(model.domain_radius());
    SurfacePoint::new(r, T::lit(phi)).expect("sampled radius is non-negative")
}

/// An off-diagonal pair together with its distance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampledPair<T> {
    pub p1: SurfacePoint<T>,
    pub p2: SurfacePoint<T>,
    pub distance: T,
}

/// Draws `n` off-diagonal pairs, rejecting those closer than
/// [`DIAGONAL_CUTOFF`]. Fails after `100 n` draws.
pub fn sample_pairs<T: Real>(model: &SurfaceModel<T>, n: usize, seed: u64) -> Result<Vec<SampledPair<T>>> {
    if n == 0 {
        return Err(Error::InvalidConfig("at least one pair is required".into()));
    }
    let mut rng = rng(seed);
    let cutoff = T::lit(DIAGONAL_CUTOFF);
    let budget = n.saturating_mul(OVERSAMPLING);
    let mut pairs = Vec::with_capacity(n);
    let mut attempts = 0;
    while pairs.len() < n {
        if attempts == budget {
            return Err(Error::SamplerExhausted {
                requested: n,
                accepted: pairs.len(),
                attempts,
            });
        }
        attempts += 1;
        let p1 = sample_point(model, &mut rng);
        let p2 = sample_point(model, &mut rng);
        let distance = distance_unchecked(&p1, &p2, model);
        if distance >= cutoff {
            pairs.push(SampledPair { p1, p2, distance });
        }
    }
    Ok(pairs)
}
