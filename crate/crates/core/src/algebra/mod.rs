//! Finite-dimensional matrix *-algebras: elements, states, spectra, norms,
//! commutators, measurement updates and tensor composition.

mod gns;
mod infimum;
mod spectral;

pub use gns::{
    diagonal_basis, full_matrix_basis, gns_construct, random_algebra_basis, random_unitary,
    GnsTriple,
};
pub use infimum::{entropy_sum_infimum, InfimumResult, MIN_BUDGET};
pub use spectral::{
    epsilon_entropy, maassen_uffink_bound, spectral_pmf, SpectralDecomposition, SpectralPartition,
    EIGEN_CLUSTER_TOL,
};

use std::f64::consts::PI;
use std::ops::{Add, Mul, Sub};

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::AlgebraError;

/// Largest matrix dimension handled.
pub const MAX_DIM: usize = 16;
/// Self-adjointness and state tolerances.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Norm threshold below which a commutator counts as zero.
pub const COMMUTE_TOL: f64 = 1e-10;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

pub(crate) fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// An element of the full matrix algebra `M_d`, `d <= 16`.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraElement(CMatrix);

impl AlgebraElement {
    pub fn new(m: CMatrix) -> Result<Self, AlgebraError> {
        let (rows, cols) = m.shape();
        if rows != cols || rows == 0 {
            return Err(AlgebraError::NotSquare { rows, cols });
        }
        if rows > MAX_DIM {
            return Err(AlgebraError::DimensionCap(rows));
        }
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(AlgebraError::NonFinite);
        }
        Ok(AlgebraElement(m))
    }

    /// From real and imaginary parts given row by row.
    pub fn from_parts(re: &[Vec<f64>], im: Option<&[Vec<f64>]>) -> Result<Self, AlgebraError> {
        let d = re.len();
        if re.iter().any(|r| r.len() != d)
            || im.is_some_and(|im| im.len() != d || im.iter().any(|r| r.len() != d))
        {
            return Err(AlgebraError::NotSquare {
                rows: d,
                cols: re.first().map_or(0, Vec::len),
            });
        }
        AlgebraElement::new(CMatrix::from_fn(d, d, |i, j| {
            c(re[i][j], im.map_or(0.0, |im| im[i][j]))
        }))
    }

    pub fn identity(d: usize) -> Self {
        AlgebraElement(CMatrix::identity(d, d))
    }

    pub fn zero(d: usize) -> Self {
        AlgebraElement(CMatrix::zeros(d, d))
    }

    pub fn diag(values: &[f64]) -> Result<Self, AlgebraError> {
        let d = values.len();
        AlgebraElement::new(CMatrix::from_fn(d, d, |i, j| {
            if i == j {
                c(values[i], 0.0)
            } else {
                c(0.0, 0.0)
            }
        }))
    }

    /// `|v><v|` for a (not necessarily normalized) vector.
    pub fn outer(v: &CVector) -> Self {
        AlgebraElement(v * v.adjoint())
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> CMatrix {
        self.0
    }

    pub fn adjoint(&self) -> Self {
        AlgebraElement(self.0.adjoint())
    }

    pub fn scale(&self, s: Complex64) -> Self {
        AlgebraElement(&self.0 * s)
    }

    pub fn self_adjoint_deviation(&self) -> f64 {
        max_abs(&(&self.0 - self.0.adjoint()))
    }

    pub fn is_self_adjoint(&self) -> bool {
        self.self_adjoint_deviation() <= HERMITIAN_TOL
    }

    pub(crate) fn require_self_adjoint(&self) -> Result<(), AlgebraError> {
        let dev = self.self_adjoint_deviation();
        if dev > HERMITIAN_TOL {
            Err(AlgebraError::NotSelfAdjoint(dev))
        } else {
            Ok(())
        }
    }

    /// Hermitian part `(a + a*)/2`, exact up to rounding.
    pub fn hermitian_part(&self) -> Self {
        AlgebraElement((&self.0 + self.0.adjoint()) * c(0.5, 0.0))
    }

    /// Operator norm: the largest singular value.
    pub fn operator_norm(&self) -> f64 {
        self.0.singular_values().iter().copied().fold(0.0, f64::max)
    }

    pub fn trace(&self) -> Complex64 {
        self.0.trace()
    }

    fn check_dim(&self, other: &Self) -> Result<(), AlgebraError> {
        if self.dim() != other.dim() {
            Err(AlgebraError::DimensionMismatch(self.dim(), other.dim()))
        } else {
            Ok(())
        }
    }

    /// Eigen-decomposition of a self-adjoint element, eigenvalues ascending.
    pub fn hermitian_eigen(&self) -> Result<(Vec<f64>, CMatrix), AlgebraError> {
        self.require_self_adjoint()?;
        let eig = SymmetricEigen::new(self.hermitian_part().0);
        let mut order: Vec<usize> = (0..self.dim()).collect();
        order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
        let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        Ok((values, eig.eigenvectors.select_columns(&order)))
    }
}

impl Add for &AlgebraElement {
    type Output = AlgebraElement;
    fn add(self, rhs: Self) -> AlgebraElement {
        AlgebraElement(&self.0 + &rhs.0)
    }
}

impl Sub for &AlgebraElement {
    type Output = AlgebraElement;
    fn sub(self, rhs: Self) -> AlgebraElement {
        AlgebraElement(&self.0 - &rhs.0)
    }
}

impl Mul for &AlgebraElement {
    type Output = AlgebraElement;
    fn mul(self, rhs: Self) -> AlgebraElement {
        AlgebraElement(&self.0 * &rhs.0)
    }
}

pub fn pauli_x() -> AlgebraElement {
    AlgebraElement::from_parts(&[vec![0.0, 1.0], vec![1.0, 0.0]], None).unwrap()
}

pub fn pauli_y() -> AlgebraElement {
    let im = [vec![0.0, -1.0], vec![1.0, 0.0]];
    AlgebraElement::from_parts(&[vec![0.0; 2], vec![0.0; 2]], Some(&im)).unwrap()
}

pub fn pauli_z() -> AlgebraElement {
    AlgebraElement::diag(&[1.0, -1.0]).unwrap()
}

/// Columns `f_j(k) = e^{2πijk/d} / √d`.
pub fn fourier_basis(d: usize) -> CMatrix {
    let s = 1.0 / (d as f64).sqrt();
    CMatrix::from_fn(d, d, |k, j| {
        Complex64::from_polar(s, 2.0 * PI * (j * k) as f64 / d as f64)
    })
}

/// Spectrum of an element: real and sorted for self-adjoint inputs.
#[derive(Clone, Debug, PartialEq)]
pub enum Spectrum {
    Real(Vec<f64>),
    Complex(Vec<Complex64>),
}

pub fn spectrum(a: &AlgebraElement) -> Spectrum {
    if a.is_self_adjoint() {
        let (values, _) = a.hermitian_eigen().expect("checked self-adjoint");
        let norm = a.operator_norm();
        debug_assert!(values.iter().all(|l| l.abs() <= norm + 1e-9));
        Spectrum::Real(values)
    } else {
        let (_, t) = a.0.clone().schur().unpack();
        let mut values: Vec<Complex64> = t.diagonal().iter().copied().collect();
        values.sort_by(|x, y| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)));
        Spectrum::Complex(values)
    }
}

/// Self-adjoint with no eigenvalue below `-1e-12`.
pub fn is_positive(a: &AlgebraElement) -> bool {
    match a.hermitian_eigen() {
        Ok((values, _)) => values.first().is_none_or(|&l| l >= -HERMITIAN_TOL),
        Err(_) => false,
    }
}

/// A density matrix `ρ`, read as the state `ω(a) = Tr(ρ a)`.
#[derive(Clone, Debug, PartialEq)]
pub struct State {
    rho: CMatrix,
}

impl State {
    pub fn new(rho: CMatrix) -> Result<Self, AlgebraError> {
        let el = AlgebraElement::new(rho)?;
        el.require_self_adjoint()
            .map_err(|e| AlgebraError::InvalidState(e.to_string()))?;
        let (values, _) = el.hermitian_eigen()?;
        if let Some(&l) = values.first().filter(|&&l| l < -HERMITIAN_TOL) {
            return Err(AlgebraError::InvalidState(format!("eigenvalue {l:e}")));
        }
        let tr = el.trace();
        if (tr.re - 1.0).abs() > HERMITIAN_TOL || tr.im.abs() > HERMITIAN_TOL {
            return Err(AlgebraError::InvalidState(format!("trace {tr}")));
        }
        Ok(State { rho: el.0 })
    }

    /// `|ψ><ψ|` after normalizing `ψ`.
    pub fn pure(psi: &CVector) -> Result<Self, AlgebraError> {
        let n = psi.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(AlgebraError::InvalidState("zero vector".into()));
        }
        let v = psi.unscale(n);
        State::new(hermitize(&v * v.adjoint()))
    }

    pub fn maximally_mixed(d: usize) -> Result<Self, AlgebraError> {
        State::new(CMatrix::identity(d, d) * c(1.0 / d as f64, 0.0))
    }

    pub fn dim(&self) -> usize {
        self.rho.nrows()
    }

    pub fn density(&self) -> &CMatrix {
        &self.rho
    }

    /// `ω(a) = Tr(ρ a)`.
    pub fn expectation(&self, a: &AlgebraElement) -> Complex64 {
        (&self.rho * a.matrix()).trace()
    }

    pub fn purity(&self) -> f64 {
        (&self.rho * &self.rho).trace().re
    }
}

fn hermitize(m: CMatrix) -> CMatrix {
    (&m + m.adjoint()) * c(0.5, 0.0)
}

/// Uniform random unit vector (normalized complex Gaussian).
pub fn random_pure_vector(d: usize, rng: &mut impl Rng) -> CVector {
    let v = CVector::from_fn(d, |_, _| c(gaussian(rng), gaussian(rng)));
    let n = v.norm();
    v.unscale(n)
}

pub(crate) fn gaussian(rng: &mut impl Rng) -> f64 {
    rng.sample(StandardNormal)
}

/// Random density matrix of the given rank (`G G* / Tr`, `G` Gaussian `d×rank`).
pub fn random_state(d: usize, rank: usize, rng: &mut impl Rng) -> State {
    let g = CMatrix::from_fn(d, rank.max(1), |_, _| c(gaussian(rng), gaussian(rng)));
    let m = hermitize(&g * g.adjoint());
    let tr = m.trace().re;
    State::new(hermitize(m * c(1.0 / tr, 0.0))).expect("Gram matrices are states")
}

/// Sampled `sup_ω |ω(a)|` over random pure states plus the eigenvector
/// states of `a`.
pub fn state_norm_sup(
    a: &AlgebraElement,
    n_samples: usize,
    seed: u64,
) -> Result<f64, AlgebraError> {
    let (_, vecs) = a.hermitian_eigen()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let value = |v: &CVector| (v.adjoint() * a.matrix() * v)[(0, 0)].norm();
    let eig_best = vecs
        .column_iter()
        .map(|col| value(&col.into_owned()))
        .fold(0.0, f64::max);
    let sampled = (0..n_samples)
        .map(|_| value(&random_pure_vector(a.dim(), &mut rng)))
        .fold(0.0, f64::max);
    Ok(eig_best.max(sampled))
}

/// `[a, b] = ab - ba`.
pub fn commutator(a: &AlgebraElement, b: &AlgebraElement) -> Result<AlgebraElement, AlgebraError> {
    a.check_dim(b)?;
    Ok(&(a * b) - &(b * a))
}

pub fn is_commuting(a: &AlgebraElement, b: &AlgebraElement) -> Result<bool, AlgebraError> {
    Ok(commutator(a, b)?.operator_norm() < COMMUTE_TOL)
}

/// `(bc + cb) / 2`.
pub fn jordan_product(
    b: &AlgebraElement,
    c2: &AlgebraElement,
) -> Result<AlgebraElement, AlgebraError> {
    b.check_dim(c2)?;
    Ok((&(b * c2) + &(c2 * b)).scale(c(0.5, 0.0)))
}

/// Post-measurement state `PρP / Tr(Pρ)`.
pub fn luders_update(state: &State, projector: &AlgebraElement) -> Result<State, AlgebraError> {
    if state.dim() != projector.dim() {
        return Err(AlgebraError::DimensionMismatch(
            state.dim(),
            projector.dim(),
        ));
    }
    let p = projector.matrix();
    let dev = max_abs(&(p * p - p)).max(projector.self_adjoint_deviation());
    if dev > 1e-10 {
        return Err(AlgebraError::NotAProjector(dev));
    }
    let prob = state.expectation(projector).re;
    if prob <= 1e-12 {
        return Err(AlgebraError::ZeroProbabilityEvent(prob));
    }
    let post = hermitize(p * state.density() * p * c(1.0 / prob, 0.0));
    let tr = post.trace().re;
    State::new(post * c(1.0 / tr, 0.0))
}

/// Kronecker product `a ⊗ b`; the result must fit in [`MAX_DIM`].
pub fn tensor_compose(
    a: &AlgebraElement,
    b: &AlgebraElement,
) -> Result<AlgebraElement, AlgebraError> {
    let d = a.dim() * b.dim();
    if d > MAX_DIM {
        return Err(AlgebraError::DimensionCap(d));
    }
    AlgebraElement::new(a.matrix().kronecker(b.matrix()))
}

/// Product state `ρ₁ ⊗ ρ₂`.
pub fn tensor_state(a: &State, b: &State) -> Result<State, AlgebraError> {
    let d = a.dim() * b.dim();
    if d > MAX_DIM {
        return Err(AlgebraError::DimensionCap(d));
    }
    State::new(hermitize(a.density().kronecker(b.density())))
}
