//! Finite probability mass functions over integer points.
//!
//! Everything in the toy model (walk laws, particle laws, spectral bins) is
//! carried around as a [`Pmf`]. Support points are `i64`; bin-valued laws use
//! the bin index as the point.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Tolerance on `|sum - 1|` accepted by [`Pmf::from_masses`].
pub const NORMALIZATION_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PmfError {
    #[error("mass {mass} at point {point} is negative or not finite")]
    InvalidMass { point: i64, mass: f64 },
    #[error("masses sum to {sum}, expected 1")]
    NotNormalized { sum: f64 },
    #[error("all weights vanish; no law can be formed")]
    AllMassZero,
}

/// A probability mass function with finite integer support.
///
/// Zero masses are never stored, so `support()` is exactly the set of points
/// with positive probability.
#[derive(Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<(i64, f64)>", into = "Vec<(i64, f64)>")]
pub struct Pmf {
    masses: BTreeMap<i64, f64>,
}

impl fmt::Debug for Pmf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.masses.iter()).finish()
    }
}

impl TryFrom<Vec<(i64, f64)>> for Pmf {
    type Error = PmfError;

    fn try_from(v: Vec<(i64, f64)>) -> Result<Self, Self::Error> {
        Pmf::from_masses(v)
    }
}

impl From<Pmf> for Vec<(i64, f64)> {
    fn from(p: Pmf) -> Self {
        p.masses.into_iter().collect()
    }
}

fn accumulate(iter: impl IntoIterator<Item = (i64, f64)>) -> Result<BTreeMap<i64, f64>, PmfError> {
    let mut masses = BTreeMap::new();
    for (point, mass) in iter {
        if !mass.is_finite() || mass < 0.0 {
            return Err(PmfError::InvalidMass { point, mass });
        }
        if mass > 0.0 {
            *masses.entry(point).or_insert(0.0) += mass;
        }
    }
    Ok(masses)
}

impl Pmf {
    /// Builds a law from explicit masses. Repeated points are summed.
    pub fn from_masses(iter: impl IntoIterator<Item = (i64, f64)>) -> Result<Self, PmfError> {
        let masses = accumulate(iter)?;
        let sum: f64 = masses.values().sum();
        if (sum - 1.0).abs() > NORMALIZATION_TOL {
            return Err(PmfError::NotNormalized { sum });
        }
        Ok(Pmf { masses })
    }

    /// Normalizes nonnegative weights into a law, returning it with the raw
    /// total weight.
    pub fn from_weights(
        iter: impl IntoIterator<Item = (i64, f64)>,
    ) -> Result<(Self, f64), PmfError> {
        let mut masses = accumulate(iter)?;
        let total: f64 = masses.values().sum();
        if total <= 0.0 {
            return Err(PmfError::AllMassZero);
        }
        for m in masses.values_mut() {
            *m /= total;
        }
        Ok((Pmf { masses }, total))
    }

    pub fn point(x: i64) -> Self {
        Pmf {
            masses: BTreeMap::from([(x, 1.0)]),
        }
    }

    /// Uniform law over the given (deduplicated) points.
    pub fn uniform(points: impl IntoIterator<Item = i64>) -> Result<Self, PmfError> {
        Pmf::from_weights(points.into_iter().map(|x| (x, 1.0))).map(|(p, _)| p)
    }

    pub fn mass(&self, x: i64) -> f64 {
        self.masses.get(&x).copied().unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        self.masses.iter().map(|(&x, &m)| (x, m))
    }

    pub fn support(&self) -> impl Iterator<Item = i64> + '_ {
        self.masses.keys().copied()
    }

    pub fn len(&self) -> usize {
        self.masses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masses.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.masses.values().sum()
    }

    /// Largest mass and the (smallest) point carrying it.
    pub fn max_mass(&self) -> (i64, f64) {
        self.iter().fold(
            (0, 0.0),
            |best, (x, m)| if m > best.1 { (x, m) } else { best },
        )
    }

    pub fn mean(&self) -> f64 {
        self.iter().map(|(x, m)| x as f64 * m).sum()
    }

    pub fn variance(&self) -> f64 {
        let mu = self.mean();
        self.iter().map(|(x, m)| (x as f64 - mu).powi(2) * m).sum()
    }

    /// Law of `X + k`.
    pub fn shift(&self, k: i64) -> Pmf {
        Pmf {
            masses: self.iter().map(|(x, m)| (x + k, m)).collect(),
        }
    }

    /// Law of `X + Y` for independent `X ~ self`, `Y ~ other`.
    pub fn convolve(&self, other: &Pmf) -> Pmf {
        let mut masses = BTreeMap::new();
        for (x, mx) in self.iter() {
            for (y, my) in other.iter() {
                let m = mx * my;
                if m > 0.0 {
                    *masses.entry(x + y).or_insert(0.0) += m;
                }
            }
        }
        Pmf { masses }
    }

    /// Law of `X - Y` for independent `X ~ self`, `Y ~ other`.
    pub fn difference(&self, other: &Pmf) -> Pmf {
        let neg = Pmf {
            masses: other.iter().map(|(y, m)| (-y, m)).collect(),
        };
        self.convolve(&neg)
    }

    /// Finite mixture `sum_k w_k P_k`. Weights must be nonnegative and sum to 1.
    pub fn mixture<'a>(
        components: impl IntoIterator<Item = (f64, &'a Pmf)>,
    ) -> Result<Pmf, PmfError> {
        let mut masses: BTreeMap<i64, f64> = BTreeMap::new();
        let mut wsum = 0.0;
        for (w, p) in components {
            if !w.is_finite() || w < 0.0 {
                return Err(PmfError::InvalidMass { point: 0, mass: w });
            }
            wsum += w;
            if w == 0.0 {
                continue;
            }
            for (x, m) in p.iter() {
                *masses.entry(x).or_insert(0.0) += w * m;
            }
        }
        if (wsum - 1.0).abs() > NORMALIZATION_TOL {
            return Err(PmfError::NotNormalized { sum: wsum });
        }
        masses.retain(|_, m| *m > 0.0);
        Ok(Pmf { masses })
    }

    /// Largest pointwise difference over the union of supports.
    pub fn max_abs_diff(&self, other: &Pmf) -> f64 {
        self.support()
            .chain(other.support())
            .map(|x| (self.mass(x) - other.mass(x)).abs())
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &Pmf, tol: f64) -> bool {
        self.max_abs_diff(other) <= tol
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_masses() {
        assert!(matches!(
            Pmf::from_masses([(0, 0.5), (1, 0.4)]),
            Err(PmfError::NotNormalized { .. })
        ));
        assert!(matches!(
            Pmf::from_masses([(0, 1.5), (1, -0.5)]),
            Err(PmfError::InvalidMass { point: 1, .. })
        ));
        assert_eq!(
            Pmf::from_weights([(0, 0.0)]).unwrap_err(),
            PmfError::AllMassZero
        );
    }

    #[test]
    fn zero_masses_are_dropped() {
        let p = Pmf::from_masses([(0, 1.0), (3, 0.0)]).unwrap();
        assert_eq!(p.support().collect::<Vec<_>>(), vec![0]);
    }

    #[test]
    fn weights_normalize() {
        let (p, total) = Pmf::from_weights([(1, 2.0), (2, 6.0)]).unwrap();
        assert_eq!(total, 8.0);
        assert_eq!(p.mass(1), 0.25);
        assert_eq!(p.mass(2), 0.75);
    }

    #[test]
    fn convolution_and_difference() {
        let step = Pmf::from_masses([(-1, 0.5), (1, 0.5)]).unwrap();
        let two = step.convolve(&step);
        assert_eq!(
            two,
            Pmf::from_masses([(-2, 0.25), (0, 0.5), (2, 0.25)]).unwrap()
        );
        assert_eq!(step.difference(&step), two);
    }

    #[test]
    fn mixture_requires_unit_weights() {
        let a = Pmf::point(0);
        let b = Pmf::point(1);
        let m = Pmf::mixture([(0.25, &a), (0.75, &b)]).unwrap();
        assert_eq!(m.mass(1), 0.75);
        assert!(Pmf::mixture([(0.5, &a)]).is_err());
    }

    #[test]
    fn serde_uses_pairs() {
        let p = Pmf::from_masses([(2, 0.5), (-1, 0.5)]).unwrap();
        let pairs: Vec<(i64, f64)> = p.clone().into();
        assert_eq!(pairs, vec![(-1, 0.5), (2, 0.5)]);
        assert_eq!(Pmf::try_from(pairs).unwrap(), p);
    }
}
