//! Position and velocity laws of a particle that jumps between the points
//! occupied by the space ensemble.
//!
//! At step `n` the particle attaches to walk `i` sitting at `c` with weight
//! `γ(n, i, c)`; the position law is `Σ_i γ(n,i,c) P[S_n^(i) = c]`. The jump
//! law out of `c` at step `n` is induced the same way from step `n + 1`:
//! `α(a + c, c) = Σ_j γ(n+1, j, a+c) P[S_{n+1}^(j) = a + c]`.
//!
//! For an arbitrary `γ` neither sum is normalized. Both are renormalized and
//! the raw mass is kept in [`InducedLaw::raw_mass`].

use std::borrow::Cow;
use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::ModelError;
use crate::pmf::{Pmf, NORMALIZATION_TOL};
use crate::space::SpaceEnsemble;

/// Selection probabilities `γ(n, i, c)`.
///
/// Rows are indexed by `(n, c)` and hold one weight per walk. Rows that are
/// not set explicitly fall back to the default row, which is uniform unless
/// built with [`SelectionKernel::fixed`].
#[derive(Clone, Debug, PartialEq, Default)]
pub struct SelectionKernel {
    default: Option<Vec<f64>>,
    rows: BTreeMap<(usize, i64), Vec<f64>>,
}

fn check_row(n: usize, c: i64, row: &[f64]) -> Result<(), ModelError> {
    let bad = |reason: String| ModelError::InvalidSelection { n, c, reason };
    if let Some(w) = row.iter().find(|w| !(0.0..=1.0).contains(*w)) {
        return Err(bad(format!("weight {w} outside [0, 1]")));
    }
    let sum: f64 = row.iter().sum();
    if (sum - 1.0).abs() > NORMALIZATION_TOL {
        return Err(bad(format!("weights sum to {sum}")));
    }
    Ok(())
}

impl SelectionKernel {
    pub fn uniform() -> Self {
        SelectionKernel::default()
    }

    /// The same row at every step and position.
    pub fn fixed(weights: Vec<f64>) -> Result<Self, ModelError> {
        check_row(0, 0, &weights)?;
        Ok(SelectionKernel {
            default: Some(weights),
            rows: BTreeMap::new(),
        })
    }

    /// Always selects walk `walk` out of `count`.
    pub fn one_hot(walk: usize, count: usize) -> Result<Self, ModelError> {
        if walk >= count {
            return Err(ModelError::SelectionArity {
                expected: count,
                got: walk + 1,
            });
        }
        let mut w = vec![0.0; count];
        w[walk] = 1.0;
        SelectionKernel::fixed(w)
    }

    pub fn set_row(&mut self, n: usize, c: i64, weights: Vec<f64>) -> Result<(), ModelError> {
        check_row(n, c, &weights)?;
        self.rows.insert((n, c), weights);
        Ok(())
    }

    pub fn with_row(mut self, n: usize, c: i64, weights: Vec<f64>) -> Result<Self, ModelError> {
        self.set_row(n, c, weights)?;
        Ok(self)
    }

    pub fn rows(&self) -> impl Iterator<Item = ((usize, i64), &[f64])> {
        self.rows.iter().map(|(&k, v)| (k, v.as_slice()))
    }

    /// Weights over the `walks` walks at step `n`, position `c`.
    pub fn row(&self, n: usize, c: i64, walks: usize) -> Cow<'_, [f64]> {
        match self.rows.get(&(n, c)).or(self.default.as_ref()) {
            Some(r) => Cow::Borrowed(r.as_slice()),
            None => Cow::Owned(vec![1.0 / walks as f64; walks]),
        }
    }

    pub fn weight(&self, n: usize, walk: usize, c: i64, walks: usize) -> f64 {
        self.row(n, c, walks)[walk]
    }

    fn check_arity(&self, walks: usize) -> Result<(), ModelError> {
        self.default
            .iter()
            .chain(self.rows.values())
            .find(|r| r.len() != walks)
            .map_or(Ok(()), |r| {
                Err(ModelError::SelectionArity {
                    expected: walks,
                    got: r.len(),
                })
            })
    }
}

/// A law obtained by renormalizing selection-weighted space masses.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InducedLaw {
    pub pmf: Pmf,
    /// Total weight before renormalization.
    pub raw_mass: f64,
}

/// The particle on its space ensemble.
#[derive(Clone, Debug)]
pub struct ParticleModel {
    ensemble: SpaceEnsemble,
    gamma: SelectionKernel,
    // space_laws[n][i] = law of S_n^(i)
    space_laws: Vec<Vec<Pmf>>,
}

impl ParticleModel {
    pub fn new(ensemble: SpaceEnsemble, gamma: SelectionKernel) -> Result<Self, ModelError> {
        gamma.check_arity(ensemble.len())?;
        let space_laws = (0..=ensemble.horizon())
            .map(|n| ensemble.walks().iter().map(|w| w.position_pmf(n)).collect())
            .collect();
        Ok(ParticleModel {
            ensemble,
            gamma,
            space_laws,
        })
    }

    pub fn uniform(ensemble: SpaceEnsemble) -> Self {
        ParticleModel::new(ensemble, SelectionKernel::uniform())
            .expect("uniform kernel fits any ensemble")
    }

    pub fn ensemble(&self) -> &SpaceEnsemble {
        &self.ensemble
    }

    pub fn gamma(&self) -> &SelectionKernel {
        &self.gamma
    }

    pub fn walks(&self) -> usize {
        self.ensemble.len()
    }

    pub fn horizon(&self) -> usize {
        self.ensemble.horizon()
    }

    /// Law of `S_n^(i)` for every walk.
    pub fn space_laws(&self, n: usize) -> Result<&[Pmf], ModelError> {
        self.ensemble.check_step(n)?;
        Ok(&self.space_laws[n])
    }

    fn occupied(&self, n: usize) -> BTreeSet<i64> {
        self.space_laws[n]
            .iter()
            .flat_map(|p| p.support())
            .collect()
    }

    /// Unnormalized weights `Σ_i γ(n,i,c) P[S_n^(i) = c]` over occupied points.
    pub fn raw_position_weights(&self, n: usize) -> Result<Vec<(i64, f64)>, ModelError> {
        self.ensemble.check_step(n)?;
        let k = self.walks();
        Ok(self
            .occupied(n)
            .into_iter()
            .map(|c| {
                let row = self.gamma.row(n, c, k);
                let w = self.space_laws[n]
                    .iter()
                    .zip(row.iter())
                    .map(|(law, g)| g * law.mass(c))
                    .sum();
                (c, w)
            })
            .collect())
    }

    /// Law of `X_n`.
    pub fn position_pmf(&self, n: usize) -> Result<InducedLaw, ModelError> {
        let raw = self.raw_position_weights(n)?;
        let (pmf, raw_mass) = Pmf::from_weights(raw).map_err(|_| ModelError::AllMassZero { n })?;
        Ok(InducedLaw { pmf, raw_mass })
    }

    fn require_reachable(&self, n: usize, c: i64) -> Result<(), ModelError> {
        if self.position_pmf(n)?.pmf.mass(c) > 0.0 {
            Ok(())
        } else {
            Err(ModelError::Unreachable { n, c })
        }
    }

    /// Pre-normalization `α(a + c, c)` keyed by displacement `a`.
    pub fn raw_transition_row(&self, n: usize, c: i64) -> Result<Vec<(i64, f64)>, ModelError> {
        self.ensemble.check_step(n + 1)?;
        self.require_reachable(n, c)?;
        let raw = self.raw_position_weights(n + 1)?;
        Ok(raw.into_iter().map(|(b, w)| (b - c, w)).collect())
    }

    /// Jump law out of `c` at step `n`, as a law over displacements `a`.
    pub fn induced_transition_row(&self, n: usize, c: i64) -> Result<InducedLaw, ModelError> {
        let raw = self.raw_transition_row(n, c)?;
        let (pmf, raw_mass) =
            Pmf::from_weights(raw).map_err(|_| ModelError::AllMassZero { n: n + 1 })?;
        Ok(InducedLaw { pmf, raw_mass })
    }

    /// The induced transition kernel at step `n` over every reachable `c`,
    /// with rows expressed over target points `b`.
    pub fn induced_kernel(&self, n: usize) -> Result<TransitionKernel, ModelError> {
        let pos = self.position_pmf(n)?.pmf;
        let rows = pos
            .support()
            .map(|c| {
                self.induced_transition_row(n, c)
                    .map(|row| (c, row.pmf.shift(c)))
            })
            .collect::<Result<_, _>>()?;
        Ok(TransitionKernel { rows })
    }

    /// Checks `α(a+c, c) <= max_j P[S_{n+1}^(j) = a+c]` entrywise on the
    /// pre-normalization row.
    pub fn transition_bound_check(&self, n: usize, c: i64) -> Result<BoundCheck, ModelError> {
        let raw = self.raw_transition_row(n, c)?;
        let laws = &self.space_laws[n + 1];
        let mut check = BoundCheck {
            holds: true,
            worst: None,
            max_alpha: 0.0,
            certain_jump: false,
        };
        let mut worst_gap = f64::NEG_INFINITY;
        for (a, alpha) in raw {
            let bound = laws.iter().map(|l| l.mass(a + c)).fold(0.0, f64::max);
            let gap = alpha - bound;
            if gap > worst_gap {
                worst_gap = gap;
                check.worst = Some(BoundEntry { a, alpha, bound });
            }
            check.max_alpha = check.max_alpha.max(alpha);
        }
        check.holds = worst_gap <= NORMALIZATION_TOL;
        check.certain_jump = check.max_alpha >= 1.0 - NORMALIZATION_TOL;
        Ok(check)
    }

    /// Law of `V_n` given `X_n = c`.
    pub fn velocity_pmf_given_position(&self, n: usize, c: i64) -> Result<Pmf, ModelError> {
        Ok(self.induced_transition_row(n, c)?.pmf)
    }

    /// Law of `V_n`, mixing the conditional laws over `X_n`.
    pub fn velocity_pmf(&self, n: usize) -> Result<Pmf, ModelError> {
        let pos = self.position_pmf(n)?.pmf;
        let rows = pos
            .iter()
            .map(|(c, w)| Ok((w, self.velocity_pmf_given_position(n, c)?)))
            .collect::<Result<Vec<_>, ModelError>>()?;
        Ok(Pmf::mixture(rows.iter().map(|(w, r)| (*w, r)))?)
    }

    /// `φ(λ) = Σ_b α(b,c) e^{iλ(b-c)}` on the given grid.
    pub fn velocity_charfn_given_position(
        &self,
        n: usize,
        c: i64,
        grid: &[f64],
    ) -> Result<Vec<Complex64>, ModelError> {
        let row = self.velocity_pmf_given_position(n, c)?;
        Ok(grid.iter().map(|&l| charfn(&row, l)).collect())
    }

    /// `V_n` rebuilt from the characteristic functions of the conditional
    /// rows instead of the rows themselves.
    pub fn velocity_pmf_via_charfn(&self, n: usize) -> Result<Pmf, ModelError> {
        let pos = self.position_pmf(n)?.pmf;
        let mut rows = Vec::with_capacity(pos.len());
        for (c, w) in pos.iter() {
            let row = self.velocity_pmf_given_position(n, c)?;
            let (lo, hi) = (row.support().next().unwrap(), row.support().last().unwrap());
            rows.push((w, invert_charfn(|l| charfn(&row, l), lo, hi)?));
        }
        Ok(Pmf::mixture(rows.iter().map(|(w, r)| (*w, r)))?)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundEntry {
    pub a: i64,
    pub alpha: f64,
    pub bound: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundCheck {
    pub holds: bool,
    /// Entry with the largest `alpha - bound`.
    pub worst: Option<BoundEntry>,
    pub max_alpha: f64,
    /// Some pre-normalization entry equals 1.
    pub certain_jump: bool,
}

/// Characteristic function of an integer-valued law at `lambda`.
pub fn charfn(pmf: &Pmf, lambda: f64) -> Complex64 {
    pmf.iter()
        .map(|(x, m)| Complex64::from_polar(m, lambda * x as f64))
        .sum()
}

/// Recovers a law supported in `[lo, hi]` from its characteristic function.
///
/// For integer support `φ` is 2π-periodic, so the long-time average of
/// `e^{-iλa} φ(λ)` equals its average over one period, and an `M`-point
/// rule with `M > hi - lo` evaluates that average exactly.
pub fn invert_charfn(phi: impl Fn(f64) -> Complex64, lo: i64, hi: i64) -> Result<Pmf, ModelError> {
    let m = (hi - lo + 1) as usize;
    let samples: Vec<(f64, Complex64)> = (0..m)
        .map(|k| {
            let l = 2.0 * PI * k as f64 / m as f64;
            (l, phi(l))
        })
        .collect();
    let masses = (lo..=hi).map(|a| {
        let s: Complex64 = samples
            .iter()
            .map(|&(l, f)| Complex64::from_polar(1.0, -l * a as f64) * f)
            .sum();
        let mass = s.re / m as f64;
        (
            a,
            if mass.abs() < 1e-14 {
                0.0
            } else {
                mass.max(0.0)
            },
        )
    });
    Ok(Pmf::from_weights(masses)?.0)
}

/// A user-supplied jump kernel, used without the selection-induced bound.
#[derive(Clone, Debug, PartialEq)]
pub struct TransitionKernel {
    rows: BTreeMap<i64, Pmf>,
}

impl TransitionKernel {
    /// Rows map a source point `c` to the law of the target point `b`.
    pub fn new(rows: BTreeMap<i64, Pmf>) -> Self {
        TransitionKernel { rows }
    }

    pub fn row(&self, c: i64) -> Option<&Pmf> {
        self.rows.get(&c)
    }

    pub fn alpha(&self, b: i64, c: i64) -> f64 {
        self.rows.get(&c).map_or(0.0, |r| r.mass(b))
    }

    pub fn sources(&self) -> impl Iterator<Item = i64> + '_ {
        self.rows.keys().copied()
    }
}

/// Particle driven by an arbitrary kernel ("free-particle" mode). No bound
/// relating the kernel to a space ensemble is checked.
#[derive(Clone, Debug)]
pub struct FreeParticle {
    position: Pmf,
    kernel: TransitionKernel,
}

impl FreeParticle {
    pub fn new(position: Pmf, kernel: TransitionKernel) -> Result<Self, ModelError> {
        if let Some(c) = position.support().find(|c| kernel.row(*c).is_none()) {
            return Err(ModelError::InvalidTransition {
                c,
                reason: "no row for a point in the position support".into(),
            });
        }
        Ok(FreeParticle { position, kernel })
    }

    pub fn position_pmf(&self) -> &Pmf {
        &self.position
    }

    pub fn velocity_pmf_given_position(&self, c: i64) -> Result<Pmf, ModelError> {
        self.kernel
            .row(c)
            .map(|r| r.shift(-c))
            .ok_or(ModelError::Unreachable { n: 0, c })
    }

    pub fn velocity_pmf(&self) -> Result<Pmf, ModelError> {
        let rows = self
            .position
            .iter()
            .map(|(c, w)| Ok((w, self.velocity_pmf_given_position(c)?)))
            .collect::<Result<Vec<_>, ModelError>>()?;
        Ok(Pmf::mixture(rows.iter().map(|(w, r)| (*w, r)))?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::WalkSpec;

    fn pmf(pairs: &[(i64, f64)]) -> Pmf {
        Pmf::from_masses(pairs.iter().copied()).unwrap()
    }

    fn fair_pair(horizon: usize) -> SpaceEnsemble {
        SpaceEnsemble::identical(WalkSpec::from_point(0.5, 0).unwrap(), 2, horizon).unwrap()
    }

    #[test]
    fn position_examples() {
        let model = ParticleModel::uniform(fair_pair(2));
        let law = model.position_pmf(1).unwrap();
        assert!(law.pmf.approx_eq(&pmf(&[(-1, 0.5), (1, 0.5)]), 1e-15));
        assert!((law.raw_mass - 1.0).abs() < 1e-15);

        let ens = SpaceEnsemble::new(
            vec![
                WalkSpec::from_point(0.5, 0).unwrap(),
                WalkSpec::from_point(0.5, 10).unwrap(),
            ],
            1,
        )
        .unwrap();
        let model = ParticleModel::new(ens, SelectionKernel::one_hot(0, 2).unwrap()).unwrap();
        assert_eq!(model.position_pmf(0).unwrap().pmf, Pmf::point(0));

        let single = SpaceEnsemble::new(vec![WalkSpec::from_point(0.3, 2).unwrap()], 3).unwrap();
        let model =
            ParticleModel::new(single.clone(), SelectionKernel::one_hot(0, 1).unwrap()).unwrap();
        assert!(model
            .position_pmf(3)
            .unwrap()
            .pmf
            .approx_eq(&single.walks()[0].position_pmf(3), 1e-15));
    }

    #[test]
    fn zero_selection_mass_is_an_error() {
        // Walk 0 lives at 0, walk 1 at 10; select the walk that is never there.
        let ens = SpaceEnsemble::new(
            vec![
                WalkSpec::from_point(0.5, 0).unwrap(),
                WalkSpec::from_point(0.5, 10).unwrap(),
            ],
            0,
        )
        .unwrap();
        let gamma = SelectionKernel::uniform()
            .with_row(0, 0, vec![0.0, 1.0])
            .unwrap()
            .with_row(0, 10, vec![1.0, 0.0])
            .unwrap();
        let model = ParticleModel::new(ens, gamma).unwrap();
        assert_eq!(
            model.position_pmf(0).unwrap_err(),
            ModelError::AllMassZero { n: 0 }
        );
    }

    #[test]
    fn kernel_validation() {
        assert!(SelectionKernel::fixed(vec![0.5, 0.4]).is_err());
        assert!(SelectionKernel::fixed(vec![1.5, -0.5]).is_err());
        let k = SelectionKernel::fixed(vec![0.5, 0.5]).unwrap();
        let ens = SpaceEnsemble::new(vec![WalkSpec::from_point(0.5, 0).unwrap()], 1).unwrap();
        assert!(matches!(
            ParticleModel::new(ens, k),
            Err(ModelError::SelectionArity {
                expected: 1,
                got: 2
            })
        ));
    }

    #[test]
    fn transition_row_examples() {
        let model = ParticleModel::uniform(fair_pair(3));
        let row = model.induced_transition_row(1, 1).unwrap().pmf;
        // row(a) = P[S_2 = a + 1]
        let s2 = model.space_laws(2).unwrap()[0].shift(-1);
        assert!(row.approx_eq(&s2, 1e-15));

        let ens = SpaceEnsemble::new(
            vec![
                WalkSpec::from_point(0.2, 0).unwrap(),
                WalkSpec::from_point(0.9, 0).unwrap(),
            ],
            2,
        )
        .unwrap();
        let model = ParticleModel::new(ens, SelectionKernel::one_hot(1, 2).unwrap()).unwrap();
        let row = model.induced_transition_row(0, 0).unwrap().pmf;
        assert!(row.approx_eq(&pmf(&[(-1, 0.1), (1, 0.9)]), 1e-15));

        assert!(matches!(
            model.induced_transition_row(0, 5),
            Err(ModelError::Unreachable { n: 0, c: 5 })
        ));
        assert!(matches!(
            model.induced_transition_row(2, 0),
            Err(ModelError::HorizonExceeded { .. })
        ));
    }

    #[test]
    fn bound_check_examples() {
        let model = ParticleModel::uniform(fair_pair(2));
        let check = model.transition_bound_check(0, 0).unwrap();
        assert!(check.holds);
        let w = check.worst.unwrap();
        assert!((w.alpha - w.bound).abs() < 1e-15);
        assert!(!check.certain_jump);

        let det = SpaceEnsemble::new(vec![WalkSpec::from_point(1.0, 0).unwrap()], 2).unwrap();
        let check = ParticleModel::uniform(det)
            .transition_bound_check(1, 1)
            .unwrap();
        assert!(check.holds);
        assert!(check.certain_jump);
    }

    #[test]
    fn velocity_examples() {
        let single = SpaceEnsemble::new(vec![WalkSpec::from_point(0.5, 3).unwrap()], 1).unwrap();
        let model = ParticleModel::uniform(single);
        let v = model.velocity_pmf_given_position(0, 3).unwrap();
        assert_eq!(v, pmf(&[(-1, 0.5), (1, 0.5)]));

        let det = SpaceEnsemble::new(vec![WalkSpec::from_point(1.0, 0).unwrap()], 3).unwrap();
        let model = ParticleModel::new(det, SelectionKernel::one_hot(0, 1).unwrap()).unwrap();
        assert_eq!(
            model.velocity_pmf_given_position(2, 2).unwrap(),
            Pmf::point(1)
        );
        assert_eq!(model.velocity_pmf(2).unwrap(), Pmf::point(1));

        let pair = ParticleModel::uniform(fair_pair(1));
        assert_eq!(
            pair.velocity_pmf_given_position(0, 0).unwrap(),
            pmf(&[(-1, 0.5), (1, 0.5)])
        );
        assert_eq!(pair.velocity_pmf(0).unwrap(), pmf(&[(-1, 0.5), (1, 0.5)]));
    }

    #[test]
    fn charfn_examples() {
        let single = SpaceEnsemble::new(vec![WalkSpec::from_point(0.5, 0).unwrap()], 1).unwrap();
        let model = ParticleModel::uniform(single);
        let grid = [0.0, 0.3, 1.0, 2.5];
        let phi = model.velocity_charfn_given_position(0, 0, &grid).unwrap();
        assert!((phi[0] - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        for (l, f) in grid.iter().zip(&phi) {
            assert!((f - Complex64::new(l.cos(), 0.0)).norm() < 1e-15);
        }

        let det = SpaceEnsemble::new(vec![WalkSpec::from_point(1.0, 0).unwrap()], 1).unwrap();
        let model = ParticleModel::uniform(det);
        let phi = model.velocity_charfn_given_position(0, 0, &grid).unwrap();
        for (l, f) in grid.iter().zip(&phi) {
            assert!((f - Complex64::from_polar(1.0, *l)).norm() < 1e-15);
        }
    }

    #[test]
    fn charfn_inversion_recovers_law() {
        let law = pmf(&[(-3, 0.1), (0, 0.2), (1, 0.3), (4, 0.4)]);
        let back = invert_charfn(|l| charfn(&law, l), -3, 4).unwrap();
        assert!(back.approx_eq(&law, 1e-12));
    }

    #[test]
    fn free_particle_mode() {
        let kernel = TransitionKernel::new(BTreeMap::from([
            (0, Pmf::point(0)),
            (1, pmf(&[(0, 0.5), (3, 0.5)])),
        ]));
        let fp = FreeParticle::new(pmf(&[(0, 0.5), (1, 0.5)]), kernel.clone()).unwrap();
        assert_eq!(kernel.alpha(3, 1), 0.5);
        let v = fp.velocity_pmf().unwrap();
        assert_eq!(v, pmf(&[(-1, 0.25), (0, 0.5), (2, 0.25)]));
        assert!(FreeParticle::new(Pmf::point(7), kernel).is_err());
    }
}
