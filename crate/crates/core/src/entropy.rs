//! Shannon entropies of the particle laws and the entropic uncertainty
//! relation `H(X_n) + H(V_n) >= H(S_{n+1})`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::ModelError;
use crate::particle::ParticleModel;
use crate::pmf::Pmf;
use crate::space::{is_purely_random, is_statistically_equivalent};

/// Logarithm base for entropies. Bits by default.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LogBase {
    #[default]
    #[serde(rename = "2")]
    Two,
    #[serde(rename = "e")]
    E,
}

impl LogBase {
    pub fn log(self, x: f64) -> f64 {
        match self {
            LogBase::Two => x.log2(),
            LogBase::E => x.ln(),
        }
    }
}

impl fmt::Display for LogBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LogBase::Two => "2",
            LogBase::E => "e",
        })
    }
}

impl FromStr for LogBase {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "2" => Ok(LogBase::Two),
            "e" => Ok(LogBase::E),
            other => Err(format!("unsupported log base `{other}` (expected 2 or e)")),
        }
    }
}

/// `-x log x` with `0 log 0 = 0`.
pub fn entropy_term(x: f64, base: LogBase) -> f64 {
    if x > 0.0 {
        -x * base.log(x)
    } else {
        0.0
    }
}

pub fn shannon(pmf: &Pmf, base: LogBase) -> f64 {
    // Clamp the -0.0 / tiny negative of point masses.
    pmf.iter()
        .map(|(_, m)| entropy_term(m, base))
        .sum::<f64>()
        .max(0.0)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConditionalEntropy {
    /// `H(X|Y) = Σ_y P[Y=y] H(X | Y=y)`.
    pub value: f64,
    /// `H(X)` of the mixed marginal.
    pub marginal: f64,
}

impl ConditionalEntropy {
    /// Conditioning never increases entropy.
    pub fn reduces(&self) -> bool {
        self.value <= self.marginal + 1e-12
    }
}

/// Weighted average of the entropies of `family[y]` under `weights`.
pub fn conditional_entropy(
    family: &BTreeMap<i64, Pmf>,
    weights: &Pmf,
    base: LogBase,
) -> Result<ConditionalEntropy, ModelError> {
    let mut parts = Vec::with_capacity(weights.len());
    for (y, w) in weights.iter() {
        let p = family
            .get(&y)
            .ok_or(ModelError::SupportMismatch { point: y })?;
        parts.push((w, p));
    }
    let value = parts.iter().map(|(w, p)| w * shannon(p, base)).sum();
    let marginal = shannon(&Pmf::mixture(parts)?, base);
    Ok(ConditionalEntropy { value, marginal })
}

/// The chain of bounds on `H(V_n | X_n = c)` obtained from concavity of
/// `-x log x`, evaluated on the pre-normalization jump weights.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct JensenChain {
    /// Entropy of the renormalized row.
    pub h_v_given_c: f64,
    /// `Σ_a -α log α` with the raw (unnormalized) `α`.
    pub raw_functional: f64,
    /// `Σ_a Σ_j γ_j (-P_j log P_j)` at `a + c`.
    pub averaged: f64,
    /// `Σ_a min_j (-P_j log P_j)` at `a + c`; depends on space only.
    pub space_bound: f64,
}

impl JensenChain {
    /// `raw_functional >= averaged >= space_bound`.
    pub fn holds(&self) -> bool {
        self.raw_functional >= self.averaged - 1e-12 && self.averaged >= self.space_bound - 1e-12
    }
}

/// `Σ_b min_j (-P_j(b) log P_j(b))` over the laws of `S_{n+1}^(j)`.
pub fn space_entropy_bound(
    model: &ParticleModel,
    n: usize,
    base: LogBase,
) -> Result<f64, ModelError> {
    let laws = model.space_laws(n + 1)?;
    let support: std::collections::BTreeSet<i64> = laws.iter().flat_map(|l| l.support()).collect();
    Ok(support
        .into_iter()
        .map(|b| {
            laws.iter()
                .map(|l| entropy_term(l.mass(b), base))
                .fold(f64::INFINITY, f64::min)
        })
        .sum())
}

pub fn jensen_velocity_bound(
    model: &ParticleModel,
    n: usize,
    c: i64,
    base: LogBase,
) -> Result<JensenChain, ModelError> {
    let raw = model.raw_transition_row(n, c)?;
    let laws = model.space_laws(n + 1)?;
    let k = model.walks();
    let (row, _) =
        Pmf::from_weights(raw.iter().copied()).map_err(|_| ModelError::AllMassZero { n: n + 1 })?;
    let raw_functional = raw.iter().map(|&(_, u)| entropy_term(u, base)).sum();
    let averaged = raw
        .iter()
        .map(|&(a, _)| {
            let b = a + c;
            let gamma = model.gamma().row(n + 1, b, k);
            laws.iter()
                .zip(gamma.iter())
                .map(|(l, g)| g * entropy_term(l.mass(b), base))
                .sum::<f64>()
        })
        .sum();
    Ok(JensenChain {
        h_v_given_c: shannon(&row, base),
        raw_functional,
        averaged,
        space_bound: space_entropy_bound(model, n, base)?,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConditionalTerm {
    pub c: i64,
    pub weight: f64,
    pub h_x_given_c: f64,
    pub h_v_given_c: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EntropyReport {
    pub n: usize,
    pub base: LogBase,
    pub h_x: f64,
    pub h_v: f64,
    /// Entropy of `S_{n+1}`. When the walks are not statistically equivalent
    /// this is the per-point minimum over walks (see [`space_entropy_bound`]).
    pub h_s: f64,
    pub slack: f64,
    pub conditional: Vec<ConditionalTerm>,
    /// `Σ_c P[X_n=c] (H(X_n|C) + H(V_n|C))`.
    pub conditional_sum: f64,
    pub statistically_equivalent: bool,
    pub purely_random: bool,
}

impl EntropyReport {
    /// `h_x + h_v >= conditional_sum >= h_s`, each within `tol`.
    pub fn chain_holds(&self, tol: f64) -> bool {
        self.h_x + self.h_v >= self.conditional_sum - tol && self.conditional_sum >= self.h_s - tol
    }
}

/// Unconditional report at step `n`.
pub fn eur_report(
    model: &ParticleModel,
    n: usize,
    base: LogBase,
) -> Result<EntropyReport, ModelError> {
    let pos = model.position_pmf(n)?.pmf;
    let vel = model.velocity_pmf(n)?;
    let conditional = pos
        .iter()
        .map(|(c, w)| {
            Ok(ConditionalTerm {
                c,
                weight: w,
                h_x_given_c: 0.0,
                h_v_given_c: shannon(&model.velocity_pmf_given_position(n, c)?, base),
            })
        })
        .collect::<Result<Vec<_>, ModelError>>()?;
    finish(
        model,
        n,
        base,
        shannon(&pos, base),
        shannon(&vel, base),
        conditional,
    )
}

/// Report conditioned on the particle being known at `c` at step `n`, so
/// `H(X_n | C) = 0` and `H(V_n | C)` is the entropy of the jump row from `c`.
pub fn eur_report_given_position(
    model: &ParticleModel,
    n: usize,
    c: i64,
    base: LogBase,
) -> Result<EntropyReport, ModelError> {
    let h_v = shannon(&model.velocity_pmf_given_position(n, c)?, base);
    let conditional = vec![ConditionalTerm {
        c,
        weight: 1.0,
        h_x_given_c: 0.0,
        h_v_given_c: h_v,
    }];
    finish(model, n, base, 0.0, h_v, conditional)
}

fn finish(
    model: &ParticleModel,
    n: usize,
    base: LogBase,
    h_x: f64,
    h_v: f64,
    conditional: Vec<ConditionalTerm>,
) -> Result<EntropyReport, ModelError> {
    let h_s = space_entropy_bound(model, n, base)?;
    let conditional_sum = conditional
        .iter()
        .map(|t| t.weight * (t.h_x_given_c + t.h_v_given_c))
        .sum();
    let ens = model.ensemble();
    Ok(EntropyReport {
        n,
        base,
        h_x,
        h_v,
        h_s,
        slack: h_x + h_v - h_s,
        conditional,
        conditional_sum,
        statistically_equivalent: is_statistically_equivalent(ens, n + 1),
        purely_random: is_purely_random(ens, 1..=ens.horizon()).purely_random,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::particle::SelectionKernel;
    use crate::space::{SpaceEnsemble, WalkSpec};

    fn pmf(pairs: &[(i64, f64)]) -> Pmf {
        Pmf::from_masses(pairs.iter().copied()).unwrap()
    }

    #[test]
    fn shannon_examples() {
        assert_eq!(shannon(&Pmf::point(0), LogBase::Two), 0.0);
        assert_eq!(shannon(&pmf(&[(-1, 0.5), (1, 0.5)]), LogBase::Two), 1.0);
        assert_eq!(
            shannon(&pmf(&[(-2, 0.25), (0, 0.5), (2, 0.25)]), LogBase::Two),
            1.5
        );
        let nats = shannon(&pmf(&[(-1, 0.5), (1, 0.5)]), LogBase::E);
        assert!((nats - std::f64::consts::LN_2).abs() < 1e-15);
    }

    #[test]
    fn conditional_examples() {
        let fair = pmf(&[(0, 0.5), (1, 0.5)]);
        let w = pmf(&[(0, 0.3), (1, 0.7)]);
        let same = BTreeMap::from([(0, fair.clone()), (1, fair.clone())]);
        let ce = conditional_entropy(&same, &w, LogBase::Two).unwrap();
        assert!((ce.value - 1.0).abs() < 1e-15);
        assert!(ce.reduces());

        let det = BTreeMap::from([(0, Pmf::point(0)), (1, Pmf::point(1))]);
        let ce = conditional_entropy(&det, &w, LogBase::Two).unwrap();
        assert_eq!(ce.value, 0.0);
        assert!(ce.marginal > 0.0);

        let mixed = BTreeMap::from([(0, Pmf::point(3)), (1, fair)]);
        let half = pmf(&[(0, 0.5), (1, 0.5)]);
        let ce = conditional_entropy(&mixed, &half, LogBase::Two).unwrap();
        assert!((ce.value - 0.5).abs() < 1e-15);

        let err = conditional_entropy(&det, &pmf(&[(0, 0.5), (9, 0.5)]), LogBase::Two);
        assert_eq!(err.unwrap_err(), ModelError::SupportMismatch { point: 9 });
    }

    #[test]
    fn jensen_examples() {
        let ens = SpaceEnsemble::identical(WalkSpec::from_point(0.3, 0).unwrap(), 3, 3).unwrap();
        let model = ParticleModel::uniform(ens);
        let chain = jensen_velocity_bound(&model, 1, 1, LogBase::Two).unwrap();
        let h_s = shannon(&model.space_laws(2).unwrap()[0], LogBase::Two);
        assert!((chain.space_bound - h_s).abs() < 1e-12);
        assert!(chain.holds());
        assert!(chain.h_v_given_c >= chain.space_bound - 1e-12);

        let det = SpaceEnsemble::new(vec![WalkSpec::from_point(1.0, 0).unwrap()], 2).unwrap();
        let chain =
            jensen_velocity_bound(&ParticleModel::uniform(det), 0, 0, LogBase::Two).unwrap();
        assert_eq!(chain.space_bound, 0.0);
    }

    #[test]
    fn equality_configuration() {
        let ens = SpaceEnsemble::identical(WalkSpec::from_point(0.5, 0).unwrap(), 2, 5).unwrap();
        let model = ParticleModel::uniform(ens);
        for n in 0..=4 {
            let c = model.position_pmf(n).unwrap().pmf.support().next().unwrap();
            let r = eur_report_given_position(&model, n, c, LogBase::Two).unwrap();
            assert_eq!(r.h_x, 0.0);
            assert!(r.slack.abs() <= 1e-10, "n={n} slack={}", r.slack);
        }
    }

    #[test]
    fn deterministic_space_has_zero_rhs() {
        let det = SpaceEnsemble::new(vec![WalkSpec::from_point(1.0, 0).unwrap()], 3).unwrap();
        let model = ParticleModel::new(det, SelectionKernel::one_hot(0, 1).unwrap()).unwrap();
        let r = eur_report(&model, 1, LogBase::Two).unwrap();
        assert_eq!(r.h_s, 0.0);
        assert_eq!(r.slack, r.h_x + r.h_v);
        assert!(!r.purely_random);
    }

    #[test]
    fn log_base_parsing() {
        assert_eq!("2".parse::<LogBase>().unwrap(), LogBase::Two);
        assert_eq!("e".parse::<LogBase>().unwrap(), LogBase::E);
        assert!("10".parse::<LogBase>().is_err());
    }
}
