use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::spectral::{SpectralDecomposition, SpectralPartition};
use super::{c, gaussian, random_pure_vector, AlgebraElement, CVector};
use crate::entropy::{entropy_term, LogBase};
use crate::error::AlgebraError;

/// Smallest evaluation budget accepted by [`entropy_sum_infimum`].
pub const MIN_BUDGET: usize = 100;

const GOLDEN: f64 = 0.618_033_988_749_895;
const SIGMA0: f64 = 0.3;
const SIGMA_MIN: f64 = 1e-8;

#[derive(Clone, Debug)]
pub struct InfimumResult {
    /// Best value found; an upper bound on the infimum.
    pub value: f64,
    /// Unit vector attaining `value`.
    pub state: CVector,
    pub evaluations: usize,
    pub starts: usize,
    /// Index of the start that produced the best value.
    pub best_start: usize,
}

struct Observable {
    dec: SpectralDecomposition,
    partition: SpectralPartition,
}

impl Observable {
    fn new(a: &AlgebraElement, width: f64) -> Result<Self, AlgebraError> {
        Ok(Observable {
            dec: SpectralDecomposition::new(a)?,
            partition: SpectralPartition::for_element(a, width)?,
        })
    }

    fn entropy(&self, psi: &CVector, base: LogBase) -> f64 {
        let w = self.dec.vector_weights(psi);
        let total: f64 = w.iter().sum();
        self.dec
            .binned(&self.partition, &w)
            .iter()
            .map(|&(_, m)| entropy_term(m / total, base))
            .sum()
    }
}

fn normalized(v: CVector) -> CVector {
    let n = v.norm();
    v.unscale(n)
}

/// Searches pure states for the smallest `H^(ε)(a) + H^(δ)(b)`.
///
/// Starts are the eigenvectors of `a`, `b` and `a + 0.618 b` plus random
/// unit vectors; each is refined by a (1+1) evolution strategy on the unit
/// sphere. The budget counts objective evaluations across all starts.
pub fn entropy_sum_infimum(
    a: &AlgebraElement,
    b: &AlgebraElement,
    eps: f64,
    delta: f64,
    base: LogBase,
    budget: usize,
    seed: u64,
) -> Result<InfimumResult, AlgebraError> {
    if budget < MIN_BUDGET {
        return Err(AlgebraError::BudgetTooSmall(budget));
    }
    if a.dim() != b.dim() {
        return Err(AlgebraError::DimensionMismatch(a.dim(), b.dim()));
    }
    let oa = Observable::new(a, eps)?;
    let ob = Observable::new(b, delta)?;
    let objective = |psi: &CVector| oa.entropy(psi, base) + ob.entropy(psi, base);

    let d = a.dim();
    let mix = a + &b.scale(c(GOLDEN, 0.0));
    let mut starts: Vec<CVector> = Vec::new();
    for m in [a, b, &mix] {
        let (_, vecs) = m.hermitian_eigen()?;
        starts.extend(vecs.column_iter().map(|col| col.into_owned()));
    }
    let n_random = (budget / 200).clamp(4, 32);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    starts.extend((0..n_random).map(|_| random_pure_vector(d, &mut rng)));
    starts.truncate(budget);

    let n_starts = starts.len();
    let local = budget - n_starts;
    let share = |i: usize| local / n_starts + usize::from(i < local % n_starts);

    let runs: Vec<(f64, CVector, usize)> = starts
        .into_par_iter()
        .enumerate()
        .map(|(i, x0)| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64 + 1);
            let mut x = x0;
            let mut fx = objective(&x);
            let mut used = 1;
            let mut sigma = SIGMA0;
            for _ in 0..share(i) {
                if sigma < SIGMA_MIN || fx == 0.0 {
                    break;
                }
                let step = CVector::from_fn(d, |_, _| c(gaussian(&mut rng), gaussian(&mut rng)));
                let y = normalized(&x + step * c(sigma, 0.0));
                let fy = objective(&y);
                used += 1;
                if fy <= fx {
                    x = y;
                    fx = fy;
                    sigma *= 1.5;
                } else {
                    sigma *= 0.9;
                }
            }
            (fx, x, used)
        })
        .collect();

    let evaluations = runs.iter().map(|r| r.2).sum();
    let (best_start, (value, state, _)) = runs
        .into_iter()
        .enumerate()
        .min_by(|(i, x), (j, y)| x.0.total_cmp(&y.0).then(i.cmp(j)))
        .expect("at least one start");
    Ok(InfimumResult {
        value,
        state,
        evaluations,
        starts: n_starts,
        best_start,
    })
}
