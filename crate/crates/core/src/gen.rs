//! Seeded random toy-model configurations for property suites and benches.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::ModelError;
use crate::particle::{ParticleModel, SelectionKernel};
use crate::pmf::Pmf;
use crate::space::{SpaceEnsemble, WalkSpec};

/// Bounds for [`random_model`].
#[derive(Clone, Debug, PartialEq)]
pub struct RandomModelLimits {
    pub max_walks: usize,
    pub max_horizon: usize,
    pub p_range: (f64, f64),
    pub max_atoms: usize,
    /// Initial atoms are drawn from `[-spread, spread]`.
    pub spread: i64,
    /// All walks share one step probability and one initial law.
    pub equivalent: bool,
}

impl Default for RandomModelLimits {
    fn default() -> Self {
        RandomModelLimits {
            max_walks: 5,
            max_horizon: 6,
            p_range: (0.1, 0.9),
            max_atoms: 4,
            spread: 3,
            equivalent: false,
        }
    }
}

fn random_initial(rng: &mut ChaCha8Rng, limits: &RandomModelLimits) -> Pmf {
    let atoms = rng.random_range(1..=limits.max_atoms);
    let pts: BTreeSet<i64> = (0..atoms)
        .map(|_| rng.random_range(-limits.spread..=limits.spread))
        .collect();
    Pmf::from_weights(pts.into_iter().map(|x| (x, rng.random_range(0.05..1.0))))
        .expect("positive weights")
        .0
}

/// A random row summing to 1 to within rounding.
pub fn random_row(rng: &mut ChaCha8Rng, k: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..k)
        .map(|_| -rng.random_range(1e-9..1.0f64).ln())
        .collect();
    let total: f64 = raw.iter().sum();
    let mut row: Vec<f64> = raw.iter().map(|w| w / total).collect();
    let head: f64 = row[..k - 1].iter().sum();
    row[k - 1] = (1.0 - head).max(0.0);
    row
}

/// Random ensemble with a random selection row at every occupied `(n, c)`.
pub fn random_model(seed: u64, limits: &RandomModelLimits) -> Result<ParticleModel, ModelError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = rng.random_range(1..=limits.max_walks);
    let horizon = rng.random_range(1..=limits.max_horizon);
    let (lo, hi) = limits.p_range;
    let shared = (rng.random_range(lo..=hi), random_initial(&mut rng, limits));
    let walks = (0..k)
        .map(|_| {
            if limits.equivalent {
                WalkSpec::new(shared.0, shared.1.clone())
            } else {
                WalkSpec::new(rng.random_range(lo..=hi), random_initial(&mut rng, limits))
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    let ensemble = SpaceEnsemble::new(walks, horizon)?;
    let mut gamma = SelectionKernel::uniform();
    for n in 0..=horizon {
        let occupied: BTreeSet<i64> = ensemble
            .walks()
            .iter()
            .flat_map(|w| w.position_pmf(n).support().collect::<Vec<_>>())
            .collect();
        for c in occupied {
            gamma.set_row(n, c, random_row(&mut rng, k))?;
        }
    }
    ParticleModel::new(ensemble, gamma)
}
