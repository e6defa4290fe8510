//! Finite lattices given by Hasse diagrams: order closure, meet/join tables,
//! and exhaustive property checks (distributive, modular, orthocomplemented,
//! orthomodular, atoms and covering, commutativity and center, measures).

pub mod gallery;
mod projection;

pub use gallery::{gallery, GalleryEntry, GalleryExpectation};
pub use projection::{projection_lattice, Subspace, SUBSPACE_TOL};

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::LatticeError;

/// Default cap on the number of elements.
pub const DEFAULT_CAP: usize = 64;

/// Element names, cover edges `(lower, upper)` and optional complement pairs.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct HasseDescription {
    pub elements: Vec<String>,
    #[serde(default)]
    pub covers: Vec<(String, String)>,
    #[serde(default)]
    pub complements: Vec<(String, String)>,
}

impl HasseDescription {
    pub fn new<S: AsRef<str>>(elements: &[S], covers: &[(S, S)], complements: &[(S, S)]) -> Self {
        let own = |pairs: &[(S, S)]| {
            pairs
                .iter()
                .map(|(a, b)| (a.as_ref().to_string(), b.as_ref().to_string()))
                .collect()
        };
        HasseDescription {
            elements: elements.iter().map(|e| e.as_ref().to_string()).collect(),
            covers: own(covers),
            complements: own(complements),
        }
    }
}

/// A finite partial order stored as a dense `le` matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct FinitePoset {
    names: Vec<String>,
    le: Vec<bool>,
}

impl FinitePoset {
    /// Reflexive-transitive closure of `covers`; fails on cycles.
    pub fn from_covers(
        names: Vec<String>,
        covers: &[(usize, usize)],
    ) -> Result<Self, LatticeError> {
        let n = names.len();
        let mut le = vec![false; n * n];
        for i in 0..n {
            le[i * n + i] = true;
        }
        for &(a, b) in covers {
            le[a * n + b] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if le[i * n + k] {
                    for j in 0..n {
                        if le[k * n + j] {
                            le[i * n + j] = true;
                        }
                    }
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if le[i * n + j] && le[j * n + i] {
                    return Err(LatticeError::NotAPoset(names[i].clone(), names[j].clone()));
                }
            }
        }
        Ok(FinitePoset { names, le })
    }

    /// Uses `le` as given; it must already be a partial order.
    pub(crate) fn from_order(names: Vec<String>, le: Vec<bool>) -> Self {
        FinitePoset { names, le }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn le(&self, a: usize, b: usize) -> bool {
        self.le[a * self.len() + b]
    }

    pub fn name(&self, a: usize) -> &str {
        &self.names[a]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Checks reflexivity, antisymmetry and transitivity exhaustively.
    pub fn is_partial_order(&self) -> bool {
        let n = self.len();
        (0..n).all(|a| self.le(a, a))
            && (0..n).all(|a| (0..n).all(|b| a == b || !(self.le(a, b) && self.le(b, a))))
            && (0..n).all(|a| {
                (0..n).all(|b| !self.le(a, b) || (0..n).all(|c| !self.le(b, c) || self.le(a, c)))
            })
    }

    /// `b` covers `a`: `a < b` with nothing strictly between.
    pub fn covers(&self, a: usize, b: usize) -> bool {
        a != b
            && self.le(a, b)
            && (0..self.len()).all(|m| m == a || m == b || !(self.le(a, m) && self.le(m, b)))
    }

    fn bound(&self, x: usize, y: usize, lower: bool) -> Option<usize> {
        let below = |a: usize, b: usize| if lower { self.le(a, b) } else { self.le(b, a) };
        let cands: Vec<usize> = (0..self.len())
            .filter(|&m| below(m, x) && below(m, y))
            .collect();
        cands
            .iter()
            .copied()
            .find(|&g| cands.iter().all(|&m| below(m, g)))
    }
}

/// A finite lattice with optional orthocomplement.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteOrthoLattice {
    poset: FinitePoset,
    meet: Vec<usize>,
    join: Vec<usize>,
    bottom: usize,
    top: usize,
    complement: Option<Vec<usize>>,
}

/// Builds the lattice described by `desc`, with at most `cap` elements.
pub fn build_lattice_with_cap(
    desc: &HasseDescription,
    cap: usize,
) -> Result<FiniteOrthoLattice, LatticeError> {
    let n = desc.elements.len();
    if n > cap {
        return Err(LatticeError::TooLarge { size: n, cap });
    }
    let mut index = HashMap::new();
    for (i, e) in desc.elements.iter().enumerate() {
        if index.insert(e.as_str(), i).is_some() {
            return Err(LatticeError::DuplicateElement(e.clone()));
        }
    }
    let lookup = |s: &str| {
        index
            .get(s)
            .copied()
            .ok_or_else(|| LatticeError::UnknownElement(s.to_string()))
    };
    let covers = desc
        .covers
        .iter()
        .map(|(a, b)| Ok((lookup(a)?, lookup(b)?)))
        .collect::<Result<Vec<_>, LatticeError>>()?;
    let poset = FinitePoset::from_covers(desc.elements.clone(), &covers)?;
    let complement = if desc.complements.is_empty() {
        None
    } else {
        let mut map = vec![usize::MAX; n];
        for (a, b) in &desc.complements {
            let (a, b) = (lookup(a)?, lookup(b)?);
            for (x, y) in [(a, b), (b, a)] {
                if map[x] != usize::MAX && map[x] != y {
                    return Err(LatticeError::BadComplement(poset.name(x).to_string()));
                }
                map[x] = y;
            }
        }
        if let Some(x) = map.iter().position(|&c| c == usize::MAX) {
            return Err(LatticeError::BadComplement(poset.name(x).to_string()));
        }
        Some(map)
    };
    FiniteOrthoLattice::from_poset(poset, complement)
}

/// [`build_lattice_with_cap`] with [`DEFAULT_CAP`].
pub fn build_lattice(desc: &HasseDescription) -> Result<FiniteOrthoLattice, LatticeError> {
    build_lattice_with_cap(desc, DEFAULT_CAP)
}

/// Flags from [`classify`], each with a counterexample when false.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Classification {
    pub bounded: bool,
    pub distributive: bool,
    pub modular: bool,
    pub orthocomplemented: bool,
    pub orthomodular: bool,
    /// `x ∧ (y ∨ z) != (x ∧ y) ∨ (x ∧ z)`.
    pub distributive_witness: Option<[String; 3]>,
    /// `x <= z` and `x ∨ (y ∧ z) != (x ∨ y) ∧ z`.
    pub modular_witness: Option<[String; 3]>,
    pub orthocomplement_witness: Option<String>,
    /// `x <= y` and `x ∨ (¬x ∧ y) != y`.
    pub orthomodular_witness: Option<[String; 2]>,
}

impl Classification {
    /// distributive ⇒ modular, and modular ∧ orthocomplemented ⇒ orthomodular.
    pub fn implication_chain_holds(&self) -> bool {
        (!self.distributive || self.modular)
            && (!(self.modular && self.orthocomplemented) || self.orthomodular)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AtomReport {
    pub atoms: Vec<String>,
    pub atomic: bool,
    pub atomistic: bool,
    pub covering_property: bool,
    /// `(atom, x)` with `a ∧ x = 0` where `a ∨ x` does not cover `x`.
    pub covering_witness: Option<[String; 2]>,
    /// Atom exchange form: for atoms `a, b` with `a ≰ c`,
    /// `a <= b ∨ c` implies `b <= a ∨ c`.
    pub exchange_property: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CenterReport {
    pub center: Vec<String>,
    pub irreducible: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum MeasureViolation {
    OutOfRange {
        element: String,
        value: f64,
    },
    Normalization {
        element: String,
        value: f64,
    },
    Additivity {
        x: String,
        y: String,
        lhs: f64,
        rhs: f64,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MeasureCheck {
    pub valid: bool,
    pub violation: Option<MeasureViolation>,
}

impl FiniteOrthoLattice {
    /// Builds meet and join tables from a partial order and checks that the
    /// GLB and LUB of every pair exist.
    pub fn from_poset(
        poset: FinitePoset,
        complement: Option<Vec<usize>>,
    ) -> Result<Self, LatticeError> {
        let n = poset.len();
        if n == 0 {
            return Err(LatticeError::NotALattice {
                x: String::new(),
                y: String::new(),
                kind: "bottom",
            });
        }
        let mut meet = vec![0; n * n];
        let mut join = vec![0; n * n];
        for x in 0..n {
            for y in x..n {
                let missing = |kind| LatticeError::NotALattice {
                    x: poset.name(x).to_string(),
                    y: poset.name(y).to_string(),
                    kind,
                };
                let m = poset.bound(x, y, true).ok_or_else(|| missing("meet"))?;
                let j = poset.bound(x, y, false).ok_or_else(|| missing("join"))?;
                meet[x * n + y] = m;
                meet[y * n + x] = m;
                join[x * n + y] = j;
                join[y * n + x] = j;
            }
        }
        let bottom = (0..n).fold(0, |acc, x| meet[acc * n + x]);
        let top = (0..n).fold(0, |acc, x| join[acc * n + x]);
        Ok(FiniteOrthoLattice {
            poset,
            meet,
            join,
            bottom,
            top,
            complement,
        })
    }

    pub fn len(&self) -> usize {
        self.poset.len()
    }

    pub fn is_empty(&self) -> bool {
        self.poset.is_empty()
    }

    pub fn poset(&self) -> &FinitePoset {
        &self.poset
    }

    pub fn name(&self, x: usize) -> &str {
        self.poset.name(x)
    }

    pub fn index(&self, name: &str) -> Result<usize, LatticeError> {
        self.poset
            .names()
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| LatticeError::UnknownElement(name.to_string()))
    }

    pub fn le(&self, a: usize, b: usize) -> bool {
        self.poset.le(a, b)
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a * self.len() + b]
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a * self.len() + b]
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    /// The complement map as given, valid or not.
    pub fn complement_map(&self) -> Option<&[usize]> {
        self.complement.as_deref()
    }

    /// `¬x`, only when the map is a genuine orthocomplementation.
    pub fn not(&self, x: usize) -> Result<usize, LatticeError> {
        match &self.complement {
            Some(c) if self.orthocomplement_failure().is_none() => Ok(c[x]),
            _ => Err(LatticeError::NotOrthocomplemented),
        }
    }

    fn elements(&self) -> std::ops::Range<usize> {
        0..self.len()
    }

    fn names<const K: usize>(&self, xs: [usize; K]) -> [String; K] {
        xs.map(|x| self.name(x).to_string())
    }

    fn orthocomplement_failure(&self) -> Option<usize> {
        let c = self.complement.as_ref()?;
        self.elements().find(|&x| {
            self.join(x, c[x]) != self.top
                || self.meet(x, c[x]) != self.bottom
                || c[c[x]] != x
                || self
                    .elements()
                    .any(|y| self.le(x, y) && !self.le(c[y], c[x]))
        })
    }

    fn distributive_failure(&self) -> Option<[usize; 3]> {
        for x in self.elements() {
            for y in self.elements() {
                for z in self.elements() {
                    let lhs = self.meet(x, self.join(y, z));
                    let rhs = self.join(self.meet(x, y), self.meet(x, z));
                    if lhs != rhs {
                        return Some([x, y, z]);
                    }
                }
            }
        }
        None
    }

    fn modular_failure(&self) -> Option<[usize; 3]> {
        for x in self.elements() {
            for z in self.elements().filter(|&z| self.le(x, z)) {
                for y in self.elements() {
                    if self.join(x, self.meet(y, z)) != self.meet(self.join(x, y), z) {
                        return Some([x, y, z]);
                    }
                }
            }
        }
        None
    }

    fn orthomodular_failure(&self, c: &[usize]) -> Option<[usize; 2]> {
        for x in self.elements() {
            for y in self.elements().filter(|&y| self.le(x, y)) {
                if self.join(x, self.meet(c[x], y)) != y {
                    return Some([x, y]);
                }
            }
        }
        None
    }

    /// Element `a` commutes with `b`: `a = (a ∧ b) ∨ (a ∧ ¬b)`.
    pub fn commutes(&self, a: usize, b: usize) -> Result<bool, LatticeError> {
        let nb = self.not(b)?;
        Ok(a == self.join(self.meet(a, b), self.meet(a, nb)))
    }

    pub fn atoms(&self) -> Vec<usize> {
        self.elements()
            .filter(|&a| self.poset.covers(self.bottom, a))
            .collect()
    }

    /// `x ⊥ y` iff `x <= ¬y`.
    pub fn orthogonal(&self, x: usize, y: usize) -> Result<bool, LatticeError> {
        Ok(self.le(x, self.not(y)?))
    }

    /// Product lattice, ordered componentwise, with names `(a,b)`.
    pub fn product(&self, other: &FiniteOrthoLattice) -> FiniteOrthoLattice {
        let (n, m) = (self.len(), other.len());
        let pair = |k: usize| (k / m, k % m);
        let names = (0..n * m)
            .map(|k| {
                let (a, b) = pair(k);
                format!("({},{})", self.name(a), other.name(b))
            })
            .collect();
        let mut le = vec![false; n * m * n * m];
        for k in 0..n * m {
            for l in 0..n * m {
                let ((a, b), (c, d)) = (pair(k), pair(l));
                le[k * n * m + l] = self.le(a, c) && other.le(b, d);
            }
        }
        let complement = match (&self.complement, &other.complement) {
            (Some(x), Some(y)) => Some((0..n * m).map(|k| x[k / m] * m + y[k % m]).collect()),
            _ => None,
        };
        FiniteOrthoLattice::from_poset(FinitePoset::from_order(names, le), complement)
            .expect("a product of lattices is a lattice")
    }
}

/// Exhaustive classification. The returned flags always satisfy
/// [`Classification::implication_chain_holds`] on a genuine lattice.
pub fn classify(lat: &FiniteOrthoLattice) -> Classification {
    let dist = lat.distributive_failure();
    let modular = lat.modular_failure();
    let ortho_fail = lat.orthocomplement_failure();
    let orthocomplemented = lat.complement.is_some() && ortho_fail.is_none();
    let om = if orthocomplemented {
        lat.orthomodular_failure(lat.complement.as_ref().unwrap())
    } else {
        None
    };
    let class = Classification {
        bounded: true,
        distributive: dist.is_none(),
        modular: modular.is_none(),
        orthocomplemented,
        orthomodular: orthocomplemented && om.is_none(),
        distributive_witness: dist.map(|w| lat.names(w)),
        modular_witness: modular.map(|w| lat.names(w)),
        orthocomplement_witness: ortho_fail.map(|x| lat.name(x).to_string()),
        orthomodular_witness: om.map(|w| lat.names(w)),
    };
    debug_assert!(class.implication_chain_holds());
    class
}

pub fn atoms_and_covering(lat: &FiniteOrthoLattice) -> AtomReport {
    let atoms = lat.atoms();
    let bottom = lat.bottom();
    let atomic = lat
        .elements()
        .filter(|&x| x != bottom)
        .all(|x| atoms.iter().any(|&a| lat.le(a, x)));
    let atomistic = lat.elements().all(|x| {
        let joined = atoms
            .iter()
            .filter(|&&a| lat.le(a, x))
            .fold(bottom, |acc, &a| lat.join(acc, a));
        joined == x
    });
    let mut covering_witness = None;
    'outer: for &a in &atoms {
        for x in lat.elements() {
            if lat.meet(a, x) == bottom && !lat.poset.covers(x, lat.join(a, x)) {
                covering_witness = Some(lat.names([a, x]));
                break 'outer;
            }
        }
    }
    let exchange_property = atoms.iter().all(|&a| {
        atoms.iter().all(|&b| {
            lat.elements()
                .all(|c| lat.le(a, c) || !lat.le(a, lat.join(b, c)) || lat.le(b, lat.join(a, c)))
        })
    });
    AtomReport {
        atoms: atoms.iter().map(|&a| lat.name(a).to_string()).collect(),
        atomic,
        atomistic,
        covering_property: covering_witness.is_none(),
        covering_witness,
        exchange_property,
    }
}

/// Elements commuting with every element; irreducible iff that is `{0, 1}`.
pub fn center_and_irreducibility(lat: &FiniteOrthoLattice) -> Result<CenterReport, LatticeError> {
    let mut center = Vec::new();
    for a in lat.elements() {
        let mut all = true;
        for b in lat.elements() {
            all &= lat.commutes(a, b)?;
        }
        if all {
            center.push(a);
        }
    }
    let irreducible = center.len() == 2 || (center.len() == 1 && lat.len() == 1);
    Ok(CenterReport {
        center: center.iter().map(|&a| lat.name(a).to_string()).collect(),
        irreducible,
    })
}

/// Checks `p(1) = 1`, `p(0) = 0`, range `[0, 1]`, and `p(x ∨ y) = p(x) + p(y)`
/// on every orthogonal pair of distinct elements.
pub fn check_probability_measure(
    lat: &FiniteOrthoLattice,
    p: &[f64],
    tol: f64,
) -> Result<MeasureCheck, LatticeError> {
    let bad = |v| {
        Ok(MeasureCheck {
            valid: false,
            violation: Some(v),
        })
    };
    let name = |x: usize| lat.name(x).to_string();
    lat.not(lat.top())?;
    if p.len() != lat.len() {
        return Err(LatticeError::DimensionMismatch {
            expected: lat.len(),
            got: p.len(),
        });
    }
    if let Some(x) = lat.elements().find(|&x| !(0.0..=1.0).contains(&p[x])) {
        return bad(MeasureViolation::OutOfRange {
            element: name(x),
            value: p[x],
        });
    }
    for (x, want) in [(lat.top(), 1.0), (lat.bottom(), 0.0)] {
        if (p[x] - want).abs() > tol {
            return bad(MeasureViolation::Normalization {
                element: name(x),
                value: p[x],
            });
        }
    }
    for x in lat.elements() {
        for y in lat.elements().filter(|&y| y > x) {
            if lat.orthogonal(x, y)? {
                let lhs = p[lat.join(x, y)];
                let rhs = p[x] + p[y];
                if (lhs - rhs).abs() > tol {
                    return bad(MeasureViolation::Additivity {
                        x: name(x),
                        y: name(y),
                        lhs,
                        rhs,
                    });
                }
            }
        }
    }
    Ok(MeasureCheck {
        valid: true,
        violation: None,
    })
}
