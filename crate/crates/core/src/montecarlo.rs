//! Seeded trajectory sampling of the space and of the particle, with
//! empirical laws for comparison against the exact ones.
//!
//! Streams are ChaCha8 keyed by `(seed, stream id)`. Samples are produced in
//! fixed-size chunks, each starting at its own block offset, so a batch is
//! identical whatever the thread count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::ModelError;
use crate::particle::ParticleModel;
use crate::pmf::Pmf;
use crate::space::{SpaceEnsemble, WalkSpec};

const CHUNK: usize = 8192;

/// A reproducible random stream.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct SeededStream {
    pub seed: u64,
    pub stream: u64,
}

impl SeededStream {
    pub fn new(seed: u64, stream: u64) -> Self {
        SeededStream { seed, stream }
    }

    fn chunk_rng(&self, chunk: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream);
        rng.set_word_pos((chunk as u128) << 40);
        rng
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Provenance {
    pub seed: u64,
    pub stream: u64,
    pub model_hash: String,
}

/// Positions `[sample][time]`, stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct TrajectoryBatch {
    positions: Vec<i64>,
    samples: usize,
    times: usize,
    pub provenance: Provenance,
}

impl TrajectoryBatch {
    pub fn samples(&self) -> usize {
        self.samples
    }

    /// Number of recorded time points (`n_steps + 1`).
    pub fn times(&self) -> usize {
        self.times
    }

    pub fn path(&self, sample: usize) -> &[i64] {
        &self.positions[sample * self.times..(sample + 1) * self.times]
    }

    pub fn paths(&self) -> impl Iterator<Item = &[i64]> {
        self.positions.chunks_exact(self.times)
    }

    fn column(&self, t: usize) -> Result<impl Iterator<Item = i64> + '_, ModelError> {
        if t >= self.times {
            return Err(ModelError::TimeOutOfRange { t, len: self.times });
        }
        Ok(self.paths().map(move |p| p[t]))
    }
}

fn model_hash(repr: &str) -> String {
    let digest = Sha256::digest(repr.as_bytes());
    digest[..8].iter().map(|b| format!("{b:02x}")).collect()
}

/// Inverse-CDF sampler over a finite law.
struct Sampler {
    points: Vec<i64>,
    cdf: Vec<f64>,
}

impl Sampler {
    fn new(pmf: &Pmf) -> Self {
        let mut acc = 0.0;
        let (points, cdf) = pmf
            .iter()
            .map(|(x, m)| {
                acc += m;
                (x, acc)
            })
            .unzip();
        Sampler { points, cdf }
    }

    fn draw(&self, rng: &mut impl Rng) -> i64 {
        let u: f64 = rng.random::<f64>() * self.cdf[self.cdf.len() - 1];
        let i = self.cdf.partition_point(|&c| c <= u);
        self.points[i.min(self.points.len() - 1)]
    }
}

/// Draws the position of `walk` at time `t` from scratch: an initial point
/// and `t` coin tosses.
fn toss_walk(walk: &WalkSpec, start: &Sampler, t: usize, rng: &mut impl Rng) -> i64 {
    let mut x = start.draw(rng);
    for _ in 0..t {
        x += if rng.random_bool(walk.p()) { 1 } else { -1 };
    }
    x
}

fn run_chunks(
    stream: SeededStream,
    samples: usize,
    times: usize,
    fill: impl Fn(&mut ChaCha8Rng, &mut [i64]) + Sync,
) -> Vec<i64> {
    let chunks = samples.div_ceil(CHUNK);
    let parts: Vec<Vec<i64>> = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut rng = stream.chunk_rng(chunk);
            let count = CHUNK.min(samples - chunk * CHUNK);
            let mut out = vec![0; count * times];
            for path in out.chunks_exact_mut(times) {
                fill(&mut rng, path);
            }
            out
        })
        .collect();
    parts.concat()
}

/// Samples `n_samples` trajectories of every walk up to `n_steps`. Walk `i`
/// uses stream id `i`.
pub fn sample_space(
    ens: &SpaceEnsemble,
    n_steps: usize,
    n_samples: usize,
    seed: u64,
) -> Result<Vec<TrajectoryBatch>, ModelError> {
    if n_samples == 0 {
        return Err(ModelError::NoSamples);
    }
    let times = n_steps + 1;
    Ok(ens
        .walks()
        .iter()
        .enumerate()
        .map(|(i, walk)| {
            let stream = SeededStream::new(seed, i as u64);
            let start = Sampler::new(walk.initial());
            let positions = run_chunks(stream, n_samples, times, |rng, path| {
                path[0] = start.draw(rng);
                for t in 1..times {
                    path[t] = path[t - 1] + if rng.random_bool(walk.p()) { 1 } else { -1 };
                }
            });
            TrajectoryBatch {
                positions,
                samples: n_samples,
                times,
                provenance: Provenance {
                    seed,
                    stream: i as u64,
                    model_hash: model_hash(&format!("{walk:?}")),
                },
            }
        })
        .collect())
}

/// Samples particle positions `X_0..=X_{n_steps}`.
///
/// At every step the space is drawn afresh: a walk `i` is proposed
/// uniformly, its position `s` at that step is tossed, and the particle
/// attaches with probability `γ(t, i, s)`; otherwise the proposal is
/// redrawn. Accepted pairs `(i, s)` therefore have probability proportional
/// to `γ(t,i,s) P[S_t^(i) = s]`, which is the renormalized position law.
/// Velocities are `X_{t+1} - X_t`.
pub fn sample_particle(
    model: &ParticleModel,
    n_steps: usize,
    n_samples: usize,
    stream: SeededStream,
) -> Result<TrajectoryBatch, ModelError> {
    if n_samples == 0 {
        return Err(ModelError::NoSamples);
    }
    for t in 0..=n_steps {
        model.position_pmf(t)?;
    }
    let walks = model.ensemble().walks();
    let k = walks.len();
    let starts: Vec<Sampler> = walks.iter().map(|w| Sampler::new(w.initial())).collect();
    let gamma = model.gamma();
    let times = n_steps + 1;
    let positions = run_chunks(stream, n_samples, times, |rng, path| {
        for (t, slot) in path.iter_mut().enumerate() {
            *slot = loop {
                let i = rng.random_range(0..k);
                let s = toss_walk(&walks[i], &starts[i], t, rng);
                let g = gamma.weight(t, i, s, k);
                if g >= 1.0 || rng.random::<f64>() < g {
                    break s;
                }
            };
        }
    });
    Ok(TrajectoryBatch {
        positions,
        samples: n_samples,
        times,
        provenance: Provenance {
            seed: stream.seed,
            stream: stream.stream,
            model_hash: model_hash(&format!("{model:?}")),
        },
    })
}

/// Normalized histogram of the positions at time index `t`.
pub fn empirical_pmf(batch: &TrajectoryBatch, t: usize) -> Result<Pmf, ModelError> {
    let col = batch.column(t)?;
    Ok(Pmf::from_weights(col.map(|x| (x, 1.0)))?.0)
}

/// Normalized histogram of `X_{t+1} - X_t`.
pub fn empirical_velocity_pmf(batch: &TrajectoryBatch, t: usize) -> Result<Pmf, ModelError> {
    if t + 1 >= batch.times {
        return Err(ModelError::TimeOutOfRange {
            t: t + 1,
            len: batch.times,
        });
    }
    Ok(Pmf::from_weights(batch.paths().map(|p| (p[t + 1] - p[t], 1.0)))?.0)
}

/// Total variation distance `½ Σ |p - q|` over the union of supports.
pub fn tv_distance(p: &Pmf, q: &Pmf) -> f64 {
    let mut pts: Vec<i64> = p.support().chain(q.support()).collect();
    pts.sort_unstable();
    pts.dedup();
    0.5 * pts
        .iter()
        .map(|&x| (p.mass(x) - q.mass(x)).abs())
        .sum::<f64>()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::particle::SelectionKernel;

    fn pmf(pairs: &[(i64, f64)]) -> Pmf {
        Pmf::from_masses(pairs.iter().copied()).unwrap()
    }

    #[test]
    fn tv_examples() {
        let p = pmf(&[(0, 0.5), (1, 0.5)]);
        assert_eq!(tv_distance(&p, &p), 0.0);
        assert_eq!(tv_distance(&Pmf::point(0), &Pmf::point(1)), 1.0);
        assert_eq!(tv_distance(&p, &pmf(&[(0, 0.25), (1, 0.75)])), 0.25);
    }

    #[test]
    fn empirical_examples() {
        let batch = TrajectoryBatch {
            positions: vec![0, 0, 1, 1],
            samples: 4,
            times: 1,
            provenance: Provenance {
                seed: 0,
                stream: 0,
                model_hash: String::new(),
            },
        };
        assert_eq!(
            empirical_pmf(&batch, 0).unwrap(),
            pmf(&[(0, 0.5), (1, 0.5)])
        );
        assert!(empirical_pmf(&batch, 1).is_err());

        let ens = SpaceEnsemble::new(vec![WalkSpec::from_point(0.5, 4).unwrap()], 2).unwrap();
        let one = sample_space(&ens, 2, 1, 9).unwrap();
        let p = empirical_pmf(&one[0], 2).unwrap();
        assert_eq!(p.len(), 1);
    }

    #[test]
    fn drift_walk_increases() {
        let ens = SpaceEnsemble::new(vec![WalkSpec::from_point(1.0, -2).unwrap()], 5).unwrap();
        let batches = sample_space(&ens, 5, 100, 3).unwrap();
        for path in batches[0].paths() {
            assert!(path.windows(2).all(|w| w[1] == w[0] + 1));
        }
    }

    #[test]
    fn space_steps_are_unit() {
        let ens = SpaceEnsemble::new(
            vec![
                WalkSpec::new(0.3, pmf(&[(0, 0.5), (3, 0.5)])).unwrap(),
                WalkSpec::from_point(0.6, 1).unwrap(),
            ],
            6,
        )
        .unwrap();
        for batch in sample_space(&ens, 6, 500, 11).unwrap() {
            for path in batch.paths() {
                assert!(path.windows(2).all(|w| (w[1] - w[0]).abs() == 1));
            }
        }
    }

    #[test]
    fn fair_step_frequency() {
        let ens = SpaceEnsemble::new(vec![WalkSpec::from_point(0.5, 0).unwrap()], 1).unwrap();
        let b = &sample_space(&ens, 1, 100_000, 5).unwrap()[0];
        let p = empirical_pmf(b, 1).unwrap();
        assert!((p.mass(1) - 0.5).abs() < 0.01);
    }

    #[test]
    fn reproducible_batches() {
        let ens = SpaceEnsemble::identical(WalkSpec::from_point(0.4, 0).unwrap(), 2, 4).unwrap();
        let a = sample_space(&ens, 4, 20_000, 77).unwrap();
        let b = sample_space(&ens, 4, 20_000, 77).unwrap();
        assert_eq!(a, b);
        assert_ne!(a[0].positions, a[1].positions);

        let model = ParticleModel::uniform(ens);
        let s = SeededStream::new(77, 9);
        assert_eq!(
            sample_particle(&model, 3, 20_000, s).unwrap(),
            sample_particle(&model, 3, 20_000, s).unwrap()
        );
    }

    #[test]
    fn one_hot_particle_follows_selected_walk_law() {
        let ens = SpaceEnsemble::new(
            vec![
                WalkSpec::from_point(0.5, 0).unwrap(),
                WalkSpec::from_point(0.8, 20).unwrap(),
            ],
            3,
        )
        .unwrap();
        let model =
            ParticleModel::new(ens.clone(), SelectionKernel::one_hot(1, 2).unwrap()).unwrap();
        let batch = sample_particle(&model, 3, 50_000, SeededStream::new(1, 0)).unwrap();
        for t in 0..=3 {
            let emp = empirical_pmf(&batch, t).unwrap();
            assert!(emp.support().all(|x| x >= 17));
            assert!(tv_distance(&emp, &ens.walks()[1].position_pmf(t)) < 0.01);
        }
    }

    #[test]
    fn rejects_empty_requests() {
        let ens = SpaceEnsemble::new(vec![WalkSpec::from_point(0.5, 0).unwrap()], 1).unwrap();
        assert_eq!(
            sample_space(&ens, 1, 0, 1).unwrap_err(),
            ModelError::NoSamples
        );
    }
}
