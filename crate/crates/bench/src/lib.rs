//! Fixtures shared by the benchmarks.

use randspace_core::gen::{random_model, RandomModelLimits};
use randspace_core::ParticleModel;

/// A five-walk model at the largest generated horizon.
pub fn large_model() -> ParticleModel {
    let limits = RandomModelLimits::default();
    (0..)
        .map(|s| random_model(s, &limits).expect("generated models are valid"))
        .find(|m| m.horizon() == limits.max_horizon && m.ensemble().len() == limits.max_walks)
        .expect("some seed reaches the limits")
}
