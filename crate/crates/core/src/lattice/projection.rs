//! Lattices of subspaces of C^d, ordered by inclusion, with orthogonal
//! complement as orthocomplementation.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use super::{FiniteOrthoLattice, FinitePoset};
use crate::error::LatticeError;

/// Rank and inclusion tolerance.
pub const SUBSPACE_TOL: f64 = 1e-9;

type CMat = DMatrix<Complex64>;

/// A subspace held as an orthonormal basis (columns) and its projector.
#[derive(Clone, Debug)]
pub struct Subspace {
    basis: CMat,
    projector: CMat,
}

impl Subspace {
    fn from_columns(d: usize, cols: &CMat) -> Subspace {
        let basis = if cols.ncols() == 0 {
            CMat::zeros(d, 0)
        } else {
            let svd = cols.clone().svd(true, false);
            let u = svd.u.expect("requested U");
            let keep: Vec<usize> = svd
                .singular_values
                .iter()
                .enumerate()
                .filter(|(_, &s)| s > SUBSPACE_TOL)
                .map(|(i, _)| i)
                .collect();
            u.select_columns(&keep)
        };
        let projector = &basis * basis.adjoint();
        Subspace { basis, projector }
    }

    /// Span of the given vectors in C^d.
    pub fn span(d: usize, vectors: &[Vec<Complex64>]) -> Result<Subspace, LatticeError> {
        if let Some(v) = vectors.iter().find(|v| v.len() != d) {
            return Err(LatticeError::DimensionMismatch {
                expected: d,
                got: v.len(),
            });
        }
        let cols = CMat::from_fn(d, vectors.len(), |i, j| vectors[j][i]);
        Ok(Subspace::from_columns(d, &cols))
    }

    pub fn zero(d: usize) -> Subspace {
        Subspace::from_columns(d, &CMat::zeros(d, 0))
    }

    pub fn full(d: usize) -> Subspace {
        Subspace::from_columns(d, &CMat::identity(d, d))
    }

    pub fn ambient(&self) -> usize {
        self.basis.nrows()
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn projector(&self) -> &CMat {
        &self.projector
    }

    pub fn complement(&self) -> Subspace {
        let d = self.ambient();
        let rest = CMat::identity(d, d) - &self.projector;
        let eig = SymmetricEigen::new(rest);
        let keep: Vec<usize> = eig
            .eigenvalues
            .iter()
            .enumerate()
            .filter(|(_, &l)| l > 0.5)
            .map(|(i, _)| i)
            .collect();
        Subspace::from_columns(d, &eig.eigenvectors.select_columns(&keep))
    }

    /// Closed span of the union.
    pub fn sum(&self, other: &Subspace) -> Subspace {
        let d = self.ambient();
        let mut cols = CMat::zeros(d, self.dim() + other.dim());
        cols.columns_mut(0, self.dim()).copy_from(&self.basis);
        cols.columns_mut(self.dim(), other.dim())
            .copy_from(&other.basis);
        Subspace::from_columns(d, &cols)
    }

    pub fn intersection(&self, other: &Subspace) -> Subspace {
        self.complement().sum(&other.complement()).complement()
    }

    /// `other ⊆ self`.
    pub fn contains(&self, other: &Subspace) -> bool {
        if other.dim() == 0 {
            return true;
        }
        let d = self.ambient();
        let residual = (CMat::identity(d, d) - &self.projector) * &other.basis;
        residual.iter().all(|z| z.norm() <= SUBSPACE_TOL)
    }

    pub fn same_as(&self, other: &Subspace) -> bool {
        self.dim() == other.dim() && self.contains(other)
    }
}

fn find(list: &[Subspace], s: &Subspace) -> Option<usize> {
    list.iter().position(|t| t.same_as(s))
}

/// Closes `{0, C^d}` plus the spans of `families` under intersection, span
/// of union and orthogonal complement, and returns the inclusion lattice.
pub fn projection_lattice(
    d: usize,
    families: &[Vec<Vec<Complex64>>],
    cap: usize,
) -> Result<FiniteOrthoLattice, LatticeError> {
    let mut list = vec![Subspace::zero(d), Subspace::full(d)];
    for f in families {
        let s = Subspace::span(d, f)?;
        if find(&list, &s).is_none() {
            list.push(s);
        }
    }
    let push = |list: &mut Vec<Subspace>, s: Subspace| -> Result<bool, LatticeError> {
        if find(list, &s).is_some() {
            return Ok(false);
        }
        if list.len() >= cap {
            return Err(LatticeError::ClosureExplosion { cap });
        }
        list.push(s);
        Ok(true)
    };
    let mut grew = true;
    while grew {
        grew = false;
        let n = list.len();
        for i in 0..n {
            let c = list[i].complement();
            grew |= push(&mut list, c)?;
            for j in i + 1..n {
                let meet = list[i].intersection(&list[j]);
                let join = list[i].sum(&list[j]);
                grew |= push(&mut list, meet)?;
                grew |= push(&mut list, join)?;
            }
        }
    }
    let n = list.len();
    let names = (0..n)
        .map(|i| match i {
            0 => "0".to_string(),
            1 => "1".to_string(),
            _ => format!("V{}[dim {}]", i - 1, list[i].dim()),
        })
        .collect();
    let mut le = vec![false; n * n];
    for i in 0..n {
        for j in 0..n {
            le[i * n + j] = list[j].contains(&list[i]);
        }
    }
    let complement = (0..n)
        .map(|i| find(&list, &list[i].complement()).expect("closure includes complements"))
        .collect();
    FiniteOrthoLattice::from_poset(FinitePoset::from_order(names, le), Some(complement))
}
