//! Random-space particle model, finite orthomodular lattices and
//! finite-dimensional algebraic probability.

pub mod algebra;
pub mod entropy;
pub mod error;
pub mod gen;
pub mod lattice;
pub mod montecarlo;
pub mod particle;
pub mod pmf;
pub mod space;

pub use algebra::{AlgebraElement, GnsTriple, SpectralPartition, State};
pub use entropy::{EntropyReport, LogBase};
pub use error::{AlgebraError, LatticeError, ModelError};
pub use particle::{ParticleModel, SelectionKernel, TransitionKernel};
pub use pmf::{Pmf, PmfError};
pub use space::{InitialDist, SpaceEnsemble, WalkSpec};
