//! Seeded random streams.
//!
//! Each sample of a sweep draws from its own ChaCha stream keyed by
//! `(seed, index)`, so results do not depend on evaluation order or on how
//! work is split across threads.

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn stream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Uniformly distributed unit vector in `R^n`.
pub fn unit_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DVector<f64> {
    loop {
        let v = DVector::from_fn(n, |_, _| rng.sample::<f64, _>(StandardNormal));
        let norm = v.norm();
        if norm > 1e-8 {
            return v / norm;
        }
    }
}

/// Depth bound for sweep samples: points lie in the body shrunk by this
/// factor about its interior point.
pub const SWEEP_DEPTH: f64 = 0.7;

/// The `index`-th seeded interior point with a uniform unit direction.
pub fn interior_tangent(
    body: &crate::domain::ConvexBody,
    seed: u64,
    index: u64,
) -> crate::error::Result<crate::finsler::TangentVector> {
    let mut rng = stream(seed, index);
    let x = body.sample_interior(&mut rng, SWEEP_DEPTH)?;
    let v = unit_vector(&mut rng, body.dim());
    Ok(crate::finsler::TangentVector::new(x, v))
}
