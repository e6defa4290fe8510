use serde::Serialize;

use super::{AlgebraElement, CMatrix, CVector, State};
use crate::entropy::{shannon, LogBase};
use crate::error::AlgebraError;
use crate::pmf::Pmf;

/// Eigenvalues closer than this are merged into one spectral projection.
pub const EIGEN_CLUSTER_TOL: f64 = 1e-9;

/// Bins `[lo + iε, lo + (i+1)ε)` anchored at `lo = -‖a‖`; the last bin is
/// closed at `+‖a‖`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectralPartition {
    width: f64,
    lo: f64,
    bins: usize,
}

impl SpectralPartition {
    pub fn new(norm: f64, width: f64) -> Result<Self, AlgebraError> {
        if !(width > 0.0 && width.is_finite()) {
            return Err(AlgebraError::InvalidWidth(width));
        }
        let span = 2.0 * norm;
        let bins = if width >= span {
            1
        } else {
            ((span / width).ceil() as usize).max(1)
        };
        Ok(SpectralPartition {
            width,
            lo: -norm,
            bins,
        })
    }

    pub fn for_element(a: &AlgebraElement, width: f64) -> Result<Self, AlgebraError> {
        SpectralPartition::new(a.operator_norm(), width)
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn len(&self) -> usize {
        self.bins
    }

    pub fn is_empty(&self) -> bool {
        self.bins == 0
    }

    /// `[lo, hi)` of bin `i`; the last bin's upper end is `+‖a‖` and closed.
    pub fn bounds(&self, i: usize) -> (f64, f64) {
        let lo = self.lo + i as f64 * self.width;
        let hi = if i + 1 == self.bins {
            -self.lo
        } else {
            lo + self.width
        };
        (lo, hi)
    }

    /// Bin index of a spectral value; values a rounding error outside the
    /// interval are clamped to the end bins.
    pub fn bin_of(&self, x: f64) -> usize {
        let i = ((x - self.lo) / self.width).floor();
        if i < 0.0 {
            0
        } else {
            (i as usize).min(self.bins - 1)
        }
    }
}

/// Eigenvalue clusters of a self-adjoint element with orthonormal
/// eigenvectors for each cluster.
#[derive(Clone, Debug)]
pub struct SpectralDecomposition {
    pub values: Vec<f64>,
    pub vectors: Vec<CMatrix>,
}

impl SpectralDecomposition {
    pub fn new(a: &AlgebraElement) -> Result<Self, AlgebraError> {
        let (vals, vecs) = a.hermitian_eigen()?;
        let mut values: Vec<f64> = Vec::new();
        let mut members: Vec<Vec<usize>> = Vec::new();
        for (i, &l) in vals.iter().enumerate() {
            match values.last() {
                Some(&prev) if l - prev <= EIGEN_CLUSTER_TOL => members.last_mut().unwrap().push(i),
                _ => {
                    values.push(l);
                    members.push(vec![i]);
                }
            }
        }
        for (v, m) in values.iter_mut().zip(&members) {
            *v = m.iter().map(|&i| vals[i]).sum::<f64>() / m.len() as f64;
        }
        let vectors = members.iter().map(|m| vecs.select_columns(m)).collect();
        Ok(SpectralDecomposition { values, vectors })
    }

    /// `Tr(ρ E_k)` for each cluster projection `E_k`.
    pub fn weights(&self, state: &State) -> Vec<f64> {
        self.vectors
            .iter()
            .map(|v| (v.adjoint() * state.density() * v).trace().re.max(0.0))
            .collect()
    }

    /// `<ψ, E_k ψ>` for a unit vector.
    pub fn vector_weights(&self, psi: &CVector) -> Vec<f64> {
        self.vectors
            .iter()
            .map(|v| (v.adjoint() * psi).norm_squared())
            .collect()
    }

    /// Groups cluster weights into partition bins (bin index → mass).
    pub fn binned(&self, partition: &SpectralPartition, weights: &[f64]) -> Vec<(i64, f64)> {
        let mut out: Vec<(i64, f64)> = Vec::new();
        for (&l, &w) in self.values.iter().zip(weights) {
            let b = partition.bin_of(l) as i64;
            match out.last_mut() {
                Some((last, m)) if *last == b => *m += w,
                _ => out.push((b, w)),
            }
        }
        out
    }
}

fn binned_pmf(bins: Vec<(i64, f64)>) -> Result<Pmf, AlgebraError> {
    Pmf::from_weights(bins)
        .map(|(pmf, _)| pmf)
        .map_err(|e| AlgebraError::InvalidState(e.to_string()))
}

/// Distribution of the partition bin of `a` in the state: keyed by bin index.
pub fn spectral_pmf(
    a: &AlgebraElement,
    state: &State,
    partition: &SpectralPartition,
) -> Result<Pmf, AlgebraError> {
    if a.dim() != state.dim() {
        return Err(AlgebraError::DimensionMismatch(a.dim(), state.dim()));
    }
    let dec = SpectralDecomposition::new(a)?;
    binned_pmf(dec.binned(partition, &dec.weights(state)))
}

/// Shannon entropy of [`spectral_pmf`] at bin width `ε`.
pub fn epsilon_entropy(
    a: &AlgebraElement,
    state: &State,
    eps: f64,
    base: LogBase,
) -> Result<f64, AlgebraError> {
    let partition = SpectralPartition::for_element(a, eps)?;
    Ok(shannon(&spectral_pmf(a, state, &partition)?, base))
}

fn orthonormality_defect(m: &CMatrix) -> f64 {
    let d = m.ncols();
    (m.adjoint() * m - CMatrix::identity(d, d))
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
}

/// `-2 log max_{i,j} |<e_i, f_j>|` for two orthonormal bases given as columns.
pub fn maassen_uffink_bound(e: &CMatrix, f: &CMatrix, base: LogBase) -> Result<f64, AlgebraError> {
    for m in [e, f] {
        if !m.is_square() {
            return Err(AlgebraError::NotSquare {
                rows: m.nrows(),
                cols: m.ncols(),
            });
        }
    }
    if e.nrows() != f.nrows() {
        return Err(AlgebraError::DimensionMismatch(e.nrows(), f.nrows()));
    }
    let defect = orthonormality_defect(e).max(orthonormality_defect(f));
    if defect > 1e-10 {
        return Err(AlgebraError::NotOrthonormal(defect));
    }
    let overlap = (e.adjoint() * f)
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    Ok((-2.0 * base.log(overlap)).max(0.0))
}
