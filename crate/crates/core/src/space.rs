//! Exact laws of the space ensemble: independent ±1 random walks on the
//! integer line, each started from its own initial distribution.

use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};

use crate::error::ModelError;
use crate::pmf::{Pmf, NORMALIZATION_TOL};

/// Initial distribution of a walk, a finite law over integer points.
pub type InitialDist = Pmf;

/// One walk of the ensemble. Step length is 1.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WalkSpec {
    p: f64,
    initial: InitialDist,
}

impl WalkSpec {
    pub fn new(p: f64, initial: InitialDist) -> Result<Self, ModelError> {
        if !(0.0..=1.0).contains(&p) {
            return Err(ModelError::InvalidStepProbability(p));
        }
        Ok(WalkSpec { p, initial })
    }

    /// Walk started at a fixed point.
    pub fn from_point(p: f64, x0: i64) -> Result<Self, ModelError> {
        WalkSpec::new(p, Pmf::point(x0))
    }

    /// Probability of a +1 step.
    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        1.0 - self.p
    }

    pub fn initial(&self) -> &InitialDist {
        &self.initial
    }

    /// Law of the absolute position after `n` steps.
    pub fn position_pmf(&self, n: usize) -> Pmf {
        mix_initial(&exact_walk_pmf(self.p, n), &self.initial)
    }
}

/// The ensemble of mutually independent walks that makes up "space".
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpaceEnsemble {
    walks: Vec<WalkSpec>,
    horizon: usize,
}

impl SpaceEnsemble {
    pub fn new(walks: Vec<WalkSpec>, horizon: usize) -> Result<Self, ModelError> {
        if walks.is_empty() {
            return Err(ModelError::EmptyEnsemble);
        }
        Ok(SpaceEnsemble { walks, horizon })
    }

    /// `count` copies of the same walk.
    pub fn identical(walk: WalkSpec, count: usize, horizon: usize) -> Result<Self, ModelError> {
        SpaceEnsemble::new(vec![walk; count], horizon)
    }

    pub fn walks(&self) -> &[WalkSpec] {
        &self.walks
    }

    pub fn len(&self) -> usize {
        self.walks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.walks.is_empty()
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub(crate) fn check_step(&self, n: usize) -> Result<(), ModelError> {
        if n > self.horizon {
            Err(ModelError::HorizonExceeded {
                n,
                horizon: self.horizon,
            })
        } else {
            Ok(())
        }
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Law of the displacement `S_n - x0` of a walk with up-probability `p`.
///
/// Mass at `k` is `C(n, (n+k)/2) p^((n+k)/2) q^((n-k)/2)` for `|k| <= n` with
/// `k ≡ n (mod 2)`. Points of the wrong parity and zero masses are omitted.
pub fn exact_walk_pmf(p: f64, n: usize) -> Pmf {
    let q = 1.0 - p;
    let masses = (0..=n).filter_map(|ups| {
        let m = binomial(n, ups) * p.powi(ups as i32) * q.powi((n - ups) as i32);
        (m > 0.0).then_some((2 * ups as i64 - n as i64, m))
    });
    Pmf::from_weights(masses)
        .map(|(pmf, _)| pmf)
        .expect("binomial masses are positive for some k")
}

/// Law of the absolute position: displacement law convolved with `pi`.
pub fn mix_initial(displacement: &Pmf, pi: &InitialDist) -> Pmf {
    displacement.convolve(pi)
}

/// Per-walk absolute-position laws at step `n`.
pub fn ensemble_snapshot(ens: &SpaceEnsemble, n: usize) -> Result<Vec<Pmf>, ModelError> {
    ens.check_step(n)?;
    Ok(ens.walks.iter().map(|w| w.position_pmf(n)).collect())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PurityWitness {
    pub walk: usize,
    pub n: usize,
    pub point: i64,
    pub mass: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PurityCheck {
    pub purely_random: bool,
    pub witness: Option<PurityWitness>,
}

/// Checks that no walk sits at a certain point at any step of `steps`.
///
/// A mass within [`NORMALIZATION_TOL`] of 1 counts as certain.
pub fn is_purely_random(ens: &SpaceEnsemble, steps: RangeInclusive<usize>) -> PurityCheck {
    for n in steps {
        for (walk, w) in ens.walks.iter().enumerate() {
            let (point, mass) = w.position_pmf(n).max_mass();
            if mass >= 1.0 - NORMALIZATION_TOL {
                return PurityCheck {
                    purely_random: false,
                    witness: Some(PurityWitness {
                        walk,
                        n,
                        point,
                        mass,
                    }),
                };
            }
        }
    }
    PurityCheck {
        purely_random: true,
        witness: None,
    }
}

/// True iff all walks have the same position law at step `n` (within 1e-12).
pub fn is_statistically_equivalent(ens: &SpaceEnsemble, n: usize) -> bool {
    let laws: Vec<Pmf> = ens.walks.iter().map(|w| w.position_pmf(n)).collect();
    laws.windows(2)
        .all(|w| w[0].approx_eq(&w[1], NORMALIZATION_TOL))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pmf(pairs: &[(i64, f64)]) -> Pmf {
        Pmf::from_masses(pairs.iter().copied()).unwrap()
    }

    #[test]
    fn walk_pmf_examples() {
        assert_eq!(exact_walk_pmf(0.5, 1), pmf(&[(-1, 0.5), (1, 0.5)]));
        assert_eq!(
            exact_walk_pmf(0.5, 2),
            pmf(&[(-2, 0.25), (0, 0.5), (2, 0.25)])
        );
        assert!((exact_walk_pmf(0.3, 2).mass(2) - 0.09).abs() < 1e-15);
        assert_eq!(exact_walk_pmf(0.7, 0), Pmf::point(0));
    }

    #[test]
    fn degenerate_steps_keep_single_point() {
        assert_eq!(exact_walk_pmf(1.0, 3), Pmf::point(3));
        assert_eq!(exact_walk_pmf(0.0, 3), Pmf::point(-3));
    }

    #[test]
    fn mix_initial_examples() {
        let pi = pmf(&[(5, 1.0)]);
        assert_eq!(mix_initial(&exact_walk_pmf(0.5, 0), &pi), pi);

        let pi = pmf(&[(0, 0.5), (2, 0.5)]);
        let got = mix_initial(&exact_walk_pmf(0.5, 1), &pi);
        assert_eq!(got, pmf(&[(-1, 0.25), (1, 0.5), (3, 0.25)]));

        let got = mix_initial(&exact_walk_pmf(0.5, 2), &Pmf::point(0));
        assert_eq!(got, exact_walk_pmf(0.5, 2));
    }

    #[test]
    fn snapshot_examples() {
        let fair = WalkSpec::from_point(0.5, 0).unwrap();
        let ens = SpaceEnsemble::identical(fair, 2, 3).unwrap();
        let snap = ensemble_snapshot(&ens, 1).unwrap();
        assert_eq!(snap[0], snap[1]);

        let ens = SpaceEnsemble::new(
            vec![
                WalkSpec::from_point(0.3, 0).unwrap(),
                WalkSpec::from_point(0.7, 0).unwrap(),
            ],
            2,
        )
        .unwrap();
        let snap = ensemble_snapshot(&ens, 1).unwrap();
        assert!(snap[0].approx_eq(&pmf(&[(-1, 0.7), (1, 0.3)]), 1e-15));
        assert!(snap[1].approx_eq(&pmf(&[(-1, 0.3), (1, 0.7)]), 1e-15));
        assert!(matches!(
            ensemble_snapshot(&ens, 3),
            Err(ModelError::HorizonExceeded { n: 3, horizon: 2 })
        ));

        let one = SpaceEnsemble::new(vec![WalkSpec::from_point(0.5, 0).unwrap()], 0).unwrap();
        assert_eq!(ensemble_snapshot(&one, 0).unwrap(), vec![Pmf::point(0)]);
    }

    #[test]
    fn purity_examples() {
        let fair = SpaceEnsemble::new(vec![WalkSpec::from_point(0.5, 0).unwrap()], 4).unwrap();
        assert!(is_purely_random(&fair, 1..=4).purely_random);

        let check = is_purely_random(&fair, 0..=4);
        assert!(!check.purely_random);
        assert_eq!(check.witness.unwrap().n, 0);

        let drift = SpaceEnsemble::new(vec![WalkSpec::from_point(1.0, 0).unwrap()], 1).unwrap();
        let check = is_purely_random(&drift, 1..=1);
        let w = check.witness.unwrap();
        assert_eq!((w.walk, w.n, w.point, w.mass), (0, 1, 1, 1.0));
    }

    #[test]
    fn equivalence_examples() {
        let same = SpaceEnsemble::identical(WalkSpec::from_point(0.4, 1).unwrap(), 2, 3).unwrap();
        assert!(is_statistically_equivalent(&same, 3));

        let differ = SpaceEnsemble::new(
            vec![
                WalkSpec::from_point(0.3, 0).unwrap(),
                WalkSpec::from_point(0.7, 0).unwrap(),
            ],
            1,
        )
        .unwrap();
        assert!(!is_statistically_equivalent(&differ, 1));
        assert!(is_statistically_equivalent(&differ, 0));
    }

    #[test]
    fn rejects_invalid_specs() {
        assert!(WalkSpec::from_point(1.2, 0).is_err());
        assert!(matches!(
            SpaceEnsemble::new(vec![], 1),
            Err(ModelError::EmptyEnsemble)
        ));
    }
}
