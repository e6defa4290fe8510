use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use nalgebra::DMatrix;
use num_complex::Complex64;
use randspace_core::algebra::{self, fourier_basis, AlgebraElement, State};
use randspace_core::particle::SelectionKernel;
use randspace_core::{LogBase, ParticleModel, Pmf, SpaceEnsemble, WalkSpec};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::report::Format;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("cannot read config {path}: {message}")]
    Read { path: String, message: String },
    #[error("invalid config: {0}")]
    Parse(String),
    #[error("missing required field `{0}`")]
    Missing(String),
    #[error("invalid value at `{path}`: {message}")]
    Invalid { path: String, message: String },
}

fn invalid(path: &str, message: impl ToString) -> ConfigError {
    ConfigError::Invalid {
        path: path.to_string(),
        message: message.to_string(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Eur,
    Montecarlo,
    Lattice,
    Algebra,
    Gns,
    Infimum,
    Gallery,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Eur => "eur",
            Kind::Montecarlo => "montecarlo",
            Kind::Lattice => "lattice",
            Kind::Algebra => "algebra",
            Kind::Gns => "gns",
            Kind::Infimum => "infimum",
            Kind::Gallery => "gallery",
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub kind: Option<Kind>,
    pub seed: Option<u64>,
    pub base: Option<LogBase>,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub output: OutputConfig,
    pub model: Option<ModelConfig>,
    pub eur: Option<EurConfig>,
    pub montecarlo: Option<MonteCarloConfig>,
    pub lattice: Option<LatticeConfig>,
    pub algebra: Option<AlgebraConfig>,
    pub gns: Option<GnsConfig>,
    pub infimum: Option<InfimumConfig>,
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        toml::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = fs::read_to_string(path).map_err(|e| ConfigError::Read {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        ExperimentConfig::from_toml(&text)
    }

    pub fn base(&self) -> LogBase {
        self.base.unwrap_or_default()
    }

    pub fn require_seed(&self) -> Result<u64, ConfigError> {
        self.seed.ok_or_else(|| ConfigError::Missing("seed".into()))
    }

    pub fn section<'a, T>(&self, value: &'a Option<T>, name: &str) -> Result<&'a T, ConfigError> {
        value
            .as_ref()
            .ok_or_else(|| ConfigError::Missing(name.into()))
    }
}

#[derive(Clone, Debug, PartialEq, Deserialize, Serialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    pub slack: f64,
    pub equality: f64,
    pub tv: f64,
    pub plugin_slack: f64,
    pub gns: f64,
    pub commuting_max: f64,
    pub noncommuting_min: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            slack: 1e-9,
            equality: 1e-10,
            tv: 0.01,
            plugin_slack: 0.03,
            gns: 1e-10,
            commuting_max: 0.01,
            noncommuting_min: 0.05,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Deserialize, Serialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub dir: Option<PathBuf>,
    pub format: Option<Format>,
    /// Also write every sampled trajectory (Monte Carlo runs only).
    pub raw_trajectories: bool,
}

#[derive(Clone, Debug, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct WalkConfig {
    pub p: f64,
    /// `(point, mass)` pairs; defaults to a walk started at 0.
    #[serde(default = "origin")]
    pub initial: Vec<(i64, f64)>,
    /// Number of identical copies of this walk.
    #[serde(default = "one")]
    pub count: usize,
}

fn origin() -> Vec<(i64, f64)> {
    vec![(0, 1.0)]
}

fn one() -> usize {
    1
}

#[derive(Clone, Debug, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct SelectionRow {
    pub n: usize,
    pub c: i64,
    pub weights: Vec<f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Deserialize, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SelectionMode {
    #[default]
    Uniform,
    Fixed,
    OneHot,
}

#[derive(Clone, Debug, Default, PartialEq, Deserialize, Serialize)]
#[serde(default, deny_unknown_fields)]
pub struct SelectionConfig {
    pub mode: SelectionMode,
    /// Row used everywhere for `fixed`.
    pub weights: Option<Vec<f64>>,
    /// Selected walk for `one_hot`.
    pub walk: Option<usize>,
    /// Per-`(n, c)` overrides.
    pub rows: Vec<SelectionRow>,
}

#[derive(Clone, Debug, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    pub horizon: usize,
    pub walks: Vec<WalkConfig>,
    #[serde(default)]
    pub selection: SelectionConfig,
}

impl ModelConfig {
    pub fn build(&self) -> Result<ParticleModel, ConfigError> {
        let mut walks = Vec::new();
        for (i, w) in self.walks.iter().enumerate() {
            let path = format!("model.walks[{i}]");
            let init = Pmf::from_masses(w.initial.iter().copied())
                .map_err(|e| invalid(&format!("{path}.initial"), e))?;
            let spec = WalkSpec::new(w.p, init).map_err(|e| invalid(&format!("{path}.p"), e))?;
            if w.count == 0 {
                return Err(invalid(&format!("{path}.count"), "must be at least 1"));
            }
            walks.extend(std::iter::repeat_n(spec, w.count));
        }
        let k = walks.len();
        let ens = SpaceEnsemble::new(walks, self.horizon).map_err(|e| invalid("model.walks", e))?;
        let sel = &self.selection;
        let mut gamma = match sel.mode {
            SelectionMode::Uniform => SelectionKernel::uniform(),
            SelectionMode::Fixed => {
                let w = sel
                    .weights
                    .clone()
                    .ok_or_else(|| ConfigError::Missing("model.selection.weights".into()))?;
                SelectionKernel::fixed(w).map_err(|e| invalid("model.selection.weights", e))?
            }
            SelectionMode::OneHot => {
                let walk = sel
                    .walk
                    .ok_or_else(|| ConfigError::Missing("model.selection.walk".into()))?;
                SelectionKernel::one_hot(walk, k).map_err(|e| invalid("model.selection.walk", e))?
            }
        };
        for (i, row) in sel.rows.iter().enumerate() {
            gamma
                .set_row(row.n, row.c, row.weights.clone())
                .map_err(|e| invalid(&format!("model.selection.rows[{i}]"), e))?;
        }
        ParticleModel::new(ens, gamma).map_err(|e| invalid("model.selection", e))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Deserialize, Serialize)]
#[serde(default, deny_unknown_fields)]
pub struct EurConfig {
    /// Steps `n` to report; defaults to `0..horizon`.
    pub steps: Option<Vec<usize>>,
    /// Report with the particle position known (leftmost reachable point).
    pub condition_on_position: bool,
    /// Known position; must be reachable at every reported step.
    pub position: Option<i64>,
    /// Require `|slack| <= tolerances.equality` on every row.
    pub expect_equality: bool,
    /// Run the randomized suite over this many generated models instead of
    /// `[model]`.
    pub random_models: Option<usize>,
    /// Generated walks share one step probability and initial law.
    pub random_equivalent: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct MonteCarloConfig {
    pub samples: usize,
    /// Largest `n` compared; defaults to `horizon - 1`.
    pub max_n: Option<usize>,
    #[serde(default)]
    pub stream: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Deserialize, Serialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExpectFlags {
    pub distributive: Option<bool>,
    pub modular: Option<bool>,
    pub orthocomplemented: Option<bool>,
    pub orthomodular: Option<bool>,
    pub atomistic: Option<bool>,
    pub covering: Option<bool>,
    pub irreducible: Option<bool>,
    pub measure_valid: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ProjectionConfig {
    pub dim: usize,
    /// Generating subspaces; each is a list of vectors of `[re, im]` entries.
    pub subspaces: Vec<Vec<Vec<[f64; 2]>>>,
}

#[derive(Clone, Debug, Default, PartialEq, Deserialize, Serialize)]
#[serde(default, deny_unknown_fields)]
pub struct LatticeConfig {
    /// A bundled lattice: `boolean_2^k`, `chain_3`, `n5`, `m3`, `o6`, `mo2`,
    /// `proj_c2_3lines`.
    pub preset: Option<String>,
    pub elements: Option<Vec<String>>,
    pub covers: Vec<(String, String)>,
    pub complements: Vec<(String, String)>,
    pub projection: Option<ProjectionConfig>,
    pub cap: Option<usize>,
    /// Candidate probability measure, element name to value.
    pub measure: Option<BTreeMap<String, f64>>,
    pub expect: ExpectFlags,
}

/// A dense matrix as real and imaginary parts, a diagonal, or a preset.
#[derive(Clone, Debug, Default, PartialEq, Deserialize, Serialize)]
#[serde(default, deny_unknown_fields)]
pub struct OperatorSpec {
    /// `pauli_x`, `pauli_y`, `pauli_z`, `identity`, `clock`, `fourier_conjugate`.
    pub preset: Option<String>,
    pub dim: Option<usize>,
    pub diag: Option<Vec<f64>>,
    pub re: Option<Vec<Vec<f64>>>,
    pub im: Option<Vec<Vec<f64>>>,
}

impl OperatorSpec {
    pub fn build(&self, path: &str) -> Result<AlgebraElement, ConfigError> {
        if let Some(name) = &self.preset {
            let dim = || {
                self.dim
                    .ok_or_else(|| ConfigError::Missing(format!("{path}.dim")))
            };
            return match name.as_str() {
                "pauli_x" => Ok(algebra::pauli_x()),
                "pauli_y" => Ok(algebra::pauli_y()),
                "pauli_z" => Ok(algebra::pauli_z()),
                "identity" => Ok(AlgebraElement::identity(dim()?)),
                "clock" => clock(dim()?).map_err(|e| invalid(path, e)),
                "fourier_conjugate" => {
                    let d = dim()?;
                    let f = fourier_basis(d);
                    let c = clock(d).map_err(|e| invalid(path, e))?;
                    AlgebraElement::new(&f * c.matrix() * f.adjoint()).map_err(|e| invalid(path, e))
                }
                other => Err(invalid(
                    &format!("{path}.preset"),
                    format!("unknown preset `{other}`"),
                )),
            };
        }
        if let Some(d) = &self.diag {
            return AlgebraElement::diag(d).map_err(|e| invalid(&format!("{path}.diag"), e));
        }
        let re = self
            .re
            .as_ref()
            .ok_or_else(|| ConfigError::Missing(format!("{path}.re")))?;
        AlgebraElement::from_parts(re, self.im.as_deref()).map_err(|e| invalid(path, e))
    }
}

fn clock(d: usize) -> Result<AlgebraElement, randspace_core::AlgebraError> {
    let values: Vec<f64> = (0..d).map(|i| i as f64).collect();
    AlgebraElement::diag(&values)
}

#[derive(Clone, Debug, PartialEq, Deserialize, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StateSpec {
    Pure {
        re: Vec<f64>,
        #[serde(default)]
        im: Vec<f64>,
    },
    MaximallyMixed {
        dim: usize,
    },
    Density {
        re: Vec<Vec<f64>>,
        #[serde(default)]
        im: Vec<Vec<f64>>,
    },
}

impl StateSpec {
    pub fn build(&self, path: &str) -> Result<State, ConfigError> {
        let st = match self {
            StateSpec::Pure { re, im } => {
                if !im.is_empty() && im.len() != re.len() {
                    return Err(invalid(&format!("{path}.im"), "length differs from re"));
                }
                let v = nalgebra::DVector::from_fn(re.len(), |i, _| {
                    Complex64::new(re[i], im.get(i).copied().unwrap_or(0.0))
                });
                State::pure(&v)
            }
            StateSpec::MaximallyMixed { dim } => State::maximally_mixed(*dim),
            StateSpec::Density { re, im } => {
                let d = re.len();
                if re.iter().any(|r| r.len() != d)
                    || (!im.is_empty() && (im.len() != d || im.iter().any(|r| r.len() != d)))
                {
                    return Err(invalid(path, "density matrix must be square"));
                }
                State::new(DMatrix::from_fn(d, d, |i, j| {
                    Complex64::new(re[i][j], im.get(i).map_or(0.0, |r| r[j]))
                }))
            }
        };
        st.map_err(|e| invalid(path, e))
    }
}

#[derive(Clone, Debug, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraConfig {
    pub a: OperatorSpec,
    pub b: Option<OperatorSpec>,
    pub state: Option<StateSpec>,
    pub epsilon: Option<f64>,
    pub projector: Option<OperatorSpec>,
    #[serde(default)]
    pub tensor: bool,
    #[serde(default = "default_norm_samples")]
    pub norm_samples: usize,
}

fn default_norm_samples() -> usize {
    256
}

#[derive(Clone, Debug, Default, PartialEq, Deserialize, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AlgebraKind {
    #[default]
    Full,
    Diagonal,
    Random,
}

#[derive(Clone, Debug, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct GnsConfig {
    #[serde(default)]
    pub algebra: AlgebraKind,
    pub dim: usize,
    /// Fixed state; random algebras draw random states instead.
    pub state: Option<StateSpec>,
    /// Number of random (algebra, state) pairs for `algebra = "random"`;
    /// dimensions cycle through `1..=dim`.
    pub trials: Option<usize>,
    pub expect_dim: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct InfimumConfig {
    pub a: OperatorSpec,
    pub b: OperatorSpec,
    pub epsilon: f64,
    pub delta: f64,
    #[serde(default = "default_budget")]
    pub budget: usize,
    /// Required range for the returned value.
    pub expect_min: Option<f64>,
    pub expect_max: Option<f64>,
}

fn default_budget() -> usize {
    10_000
}
