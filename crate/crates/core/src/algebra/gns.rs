use nalgebra::SymmetricEigen;
use num_complex::Complex64;

use super::{c, AlgebraElement, CMatrix, CVector, State};
use crate::error::AlgebraError;

/// Relative tolerance for span membership when validating an algebra basis.
const SPAN_TOL: f64 = 1e-8;
/// Gram eigenvalues at or below this are treated as the null ideal.
const GRAM_RANK_TOL: f64 = 1e-10;

/// Finite-dimensional GNS data: the quotient space has orthonormal basis
/// `v_k = Σ_i coeffs[(i,k)] [a_i]`.
#[derive(Clone, Debug)]
pub struct GnsTriple {
    basis: Vec<AlgebraElement>,
    state: State,
    coeffs: CMatrix,
    representation: Vec<CMatrix>,
    cyclic: CVector,
}

impl GnsTriple {
    /// Dimension of the representation space.
    pub fn dim(&self) -> usize {
        self.coeffs.ncols()
    }

    pub fn basis(&self) -> &[AlgebraElement] {
        &self.basis
    }

    pub fn state(&self) -> &State {
        &self.state
    }

    /// `π(a_i)` for each basis element.
    pub fn representation(&self) -> &[CMatrix] {
        &self.representation
    }

    /// The cyclic vector `Ψ = [1]`.
    pub fn cyclic(&self) -> &CVector {
        &self.cyclic
    }

    /// `π(a)` for an element of the algebra: `<v_k, [a v_l]>`.
    pub fn represent(&self, a: &AlgebraElement) -> CMatrix {
        let m = self.basis.len();
        let rho = self.state.density();
        let inner = CMatrix::from_fn(m, m, |i, j| {
            (rho * self.basis[i].matrix().adjoint() * a.matrix() * self.basis[j].matrix()).trace()
        });
        self.coeffs.adjoint() * inner * &self.coeffs
    }

    /// `max_i |<Ψ, π(a_i)Ψ> - ω(a_i)|`.
    pub fn expectation_residual(&self) -> f64 {
        self.basis
            .iter()
            .zip(&self.representation)
            .map(|(a, p)| {
                let v = (self.cyclic.adjoint() * p * &self.cyclic)[(0, 0)];
                (v - self.state.expectation(a)).norm()
            })
            .fold(0.0, f64::max)
    }

    /// `max_{i,j} ‖π(a_i a_j) - π(a_i)π(a_j)‖`, entrywise.
    pub fn multiplicativity_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (a, pa) in self.basis.iter().zip(&self.representation) {
            for (b, pb) in self.basis.iter().zip(&self.representation) {
                let diff = self.represent(&(a * b)) - pa * pb;
                worst = worst.max(max_abs(&diff));
            }
        }
        worst
    }

    /// `max_i ‖π(a_i*) - π(a_i)*‖`, entrywise.
    pub fn star_residual(&self) -> f64 {
        self.basis
            .iter()
            .zip(&self.representation)
            .map(|(a, p)| max_abs(&(self.represent(&a.adjoint()) - p.adjoint())))
            .fold(0.0, f64::max)
    }

    pub fn cyclic_norm(&self) -> f64 {
        self.cyclic.norm()
    }
}

fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn vectorize(a: &CMatrix) -> CVector {
    CVector::from_iterator(a.len(), a.iter().copied())
}

/// Orthonormal basis (columns) for the span of the vectorized elements.
fn span_basis(elements: &[AlgebraElement]) -> CMatrix {
    let d2 = elements[0].dim().pow(2);
    let cols = CMatrix::from_fn(d2, elements.len(), |r, k| elements[k].matrix()[r]);
    let svd = cols.svd(true, false);
    let smax = svd.singular_values.max();
    let keep: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&i| svd.singular_values[i] > SPAN_TOL * smax.max(1.0))
        .collect();
    svd.u.expect("requested U").select_columns(&keep)
}

fn span_residual(q: &CMatrix, x: &CMatrix) -> f64 {
    let v = vectorize(x);
    let r = &v - q * (q.adjoint() * &v);
    r.norm() / v.norm().max(1.0)
}

fn check_algebra(basis: &[AlgebraElement]) -> Result<(), AlgebraError> {
    let q = span_basis(basis);
    let d = basis[0].dim();
    if span_residual(&q, &CMatrix::identity(d, d)) > SPAN_TOL {
        return Err(AlgebraError::NotAnAlgebra("identity not in span".into()));
    }
    for (i, a) in basis.iter().enumerate() {
        if span_residual(&q, &a.adjoint().into_matrix()) > SPAN_TOL {
            return Err(AlgebraError::NotAnAlgebra(format!(
                "adjoint of element {i} not in span"
            )));
        }
        for (j, b) in basis.iter().enumerate() {
            if span_residual(&q, (a * b).matrix()) > SPAN_TOL {
                return Err(AlgebraError::NotAnAlgebra(format!(
                    "product of elements {i} and {j} not in span"
                )));
            }
        }
    }
    Ok(())
}

/// GNS construction for the algebra spanned by `basis` in the state.
///
/// The Gram matrix `G_ij = ω(a_i* a_j)` is diagonalized; eigenvectors with
/// positive eigenvalue, scaled by `λ^{-1/2}`, give an orthonormal basis of the
/// quotient by the null ideal. Elements act by left multiplication.
pub fn gns_construct(basis: &[AlgebraElement], state: &State) -> Result<GnsTriple, AlgebraError> {
    let first = basis
        .first()
        .ok_or_else(|| AlgebraError::NotAnAlgebra("empty basis".into()))?;
    let d = first.dim();
    for a in basis {
        if a.dim() != d {
            return Err(AlgebraError::DimensionMismatch(d, a.dim()));
        }
    }
    if state.dim() != d {
        return Err(AlgebraError::DimensionMismatch(d, state.dim()));
    }
    check_algebra(basis)?;

    let m = basis.len();
    let rho = state.density();
    let gram = CMatrix::from_fn(m, m, |i, j| {
        (rho * basis[i].matrix().adjoint() * basis[j].matrix()).trace()
    });
    let gram = (&gram + gram.adjoint()) * c(0.5, 0.0);
    let eig = SymmetricEigen::new(gram);
    let keep: Vec<usize> = (0..m)
        .filter(|&k| eig.eigenvalues[k] > GRAM_RANK_TOL)
        .collect();
    let mut coeffs = eig.eigenvectors.select_columns(&keep);
    for (col, &k) in keep.iter().enumerate() {
        let s = 1.0 / eig.eigenvalues[k].sqrt();
        coeffs.column_mut(col).scale_mut(s);
    }

    // <v_k, [1]> = Σ_i conj(C_ik) ω(a_i*)
    let omega_adj = CVector::from_fn(m, |i, _| state.expectation(&basis[i].adjoint()));
    let cyclic: CVector = coeffs.adjoint() * omega_adj;

    let mut triple = GnsTriple {
        basis: basis.to_vec(),
        state: state.clone(),
        coeffs,
        representation: Vec::new(),
        cyclic,
    };
    triple.representation = basis.iter().map(|a| triple.represent(a)).collect();
    Ok(triple)
}

/// Matrix units `E_ij` of `M_d`.
pub fn full_matrix_basis(d: usize) -> Vec<AlgebraElement> {
    let mut out = Vec::with_capacity(d * d);
    for i in 0..d {
        for j in 0..d {
            let mut m = CMatrix::zeros(d, d);
            m[(i, j)] = Complex64::new(1.0, 0.0);
            out.push(AlgebraElement(m));
        }
    }
    out
}

/// Diagonal matrix units of `M_d`.
pub fn diagonal_basis(d: usize) -> Vec<AlgebraElement> {
    (0..d)
        .map(|i| {
            let mut m = CMatrix::zeros(d, d);
            m[(i, i)] = Complex64::new(1.0, 0.0);
            AlgebraElement(m)
        })
        .collect()
}

/// Haar-like random unitary from the QR factor of a complex Gaussian matrix.
pub fn random_unitary(d: usize, rng: &mut impl rand::Rng) -> CMatrix {
    let g = CMatrix::from_fn(d, d, |_, _| c(super::gaussian(rng), super::gaussian(rng)));
    g.qr().q()
}

/// Basis of a random unital *-subalgebra of `M_d`: either a direct sum of
/// full matrix blocks over a random composition of `d`, or `M_k ⊗ 1_m` with
/// `k·m = d`, conjugated by a random unitary.
pub fn random_algebra_basis(d: usize, rng: &mut impl rand::Rng) -> Vec<AlgebraElement> {
    let u = random_unitary(d, rng);
    let conj = |m: CMatrix| AlgebraElement(&u * m * u.adjoint());
    let divisors: Vec<usize> = (2..d).filter(|k| d.is_multiple_of(*k)).collect();
    if !divisors.is_empty() && rng.random_bool(0.25) {
        let k = divisors[rng.random_range(0..divisors.len())];
        let mult = d / k;
        return full_matrix_basis(k)
            .into_iter()
            .map(|e| conj(e.matrix().kronecker(&CMatrix::identity(mult, mult))))
            .collect();
    }
    let mut blocks = Vec::new();
    let mut left = d;
    while left > 0 {
        let s = rng.random_range(1..=left);
        blocks.push(s);
        left -= s;
    }
    let mut out = Vec::new();
    let mut offset = 0;
    for s in blocks {
        for i in 0..s {
            for j in 0..s {
                let mut m = CMatrix::zeros(d, d);
                m[(offset + i, offset + j)] = c(1.0, 0.0);
                out.push(conj(m));
            }
        }
        offset += s;
    }
    out
}
