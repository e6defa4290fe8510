use serde::Serialize;

use super::{
    atoms_and_covering, build_lattice, center_and_irreducibility, classify, projection_lattice,
    FiniteOrthoLattice, HasseDescription,
};
use num_complex::Complex64;

/// Known answers for a bundled lattice. `None` means "not asserted".
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct GalleryExpectation {
    pub distributive: Option<bool>,
    pub modular: Option<bool>,
    pub orthocomplemented: Option<bool>,
    pub orthomodular: Option<bool>,
    pub atomistic: Option<bool>,
    pub covering: Option<bool>,
    pub irreducible: Option<bool>,
}

#[derive(Clone, Debug)]
pub struct GalleryEntry {
    pub name: String,
    pub lattice: FiniteOrthoLattice,
    pub expected: GalleryExpectation,
}

impl GalleryEntry {
    /// Each asserted flag with the computed value: `(flag, expected, got)`.
    pub fn compare(&self) -> Vec<(&'static str, bool, bool)> {
        let class = classify(&self.lattice);
        let atoms = atoms_and_covering(&self.lattice);
        let irreducible = center_and_irreducibility(&self.lattice)
            .map(|c| c.irreducible)
            .ok();
        let e = &self.expected;
        [
            ("distributive", e.distributive, Some(class.distributive)),
            ("modular", e.modular, Some(class.modular)),
            (
                "orthocomplemented",
                e.orthocomplemented,
                Some(class.orthocomplemented),
            ),
            ("orthomodular", e.orthomodular, Some(class.orthomodular)),
            ("atomistic", e.atomistic, Some(atoms.atomistic)),
            ("covering", e.covering, Some(atoms.covering_property)),
            ("irreducible", e.irreducible, irreducible),
        ]
        .into_iter()
        .filter_map(|(flag, want, got)| want.map(|w| (flag, w, got.unwrap_or(!w))))
        .collect()
    }
}

/// Power set of `n` atoms with set complement; names list the members.
pub fn boolean(n: usize) -> FiniteOrthoLattice {
    let name = |mask: usize| {
        if mask == 0 {
            "0".to_string()
        } else {
            (0..n)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| char::from(b'a' + i as u8).to_string())
                .collect::<Vec<_>>()
                .join("")
        }
    };
    let full = (1 << n) - 1;
    let elements: Vec<String> = (0..1usize << n).map(name).collect();
    let covers: Vec<(String, String)> = (0..1usize << n)
        .flat_map(|m| {
            (0..n)
                .filter(move |i| m >> i & 1 == 0)
                .map(move |i| (name(m), name(m | 1 << i)))
        })
        .collect();
    let complements: Vec<(String, String)> = (0..1usize << n)
        .filter(|&m| m < full ^ m)
        .map(|m| (name(m), name(full ^ m)))
        .collect();
    build_lattice(&HasseDescription {
        elements,
        covers,
        complements,
    })
    .expect("power sets are lattices")
}

fn from_edges(
    elements: &[&str],
    covers: &[(&str, &str)],
    complements: &[(&str, &str)],
) -> FiniteOrthoLattice {
    build_lattice(&HasseDescription::new(elements, covers, complements)).expect("bundled lattice")
}

pub fn chain3() -> FiniteOrthoLattice {
    from_edges(&["0", "m", "1"], &[("0", "m"), ("m", "1")], &[])
}

/// The pentagon: `0 < a < b < 1`, `0 < c < 1`.
pub fn n5() -> FiniteOrthoLattice {
    from_edges(
        &["0", "a", "b", "c", "1"],
        &[("0", "a"), ("a", "b"), ("b", "1"), ("0", "c"), ("c", "1")],
        &[],
    )
}

/// The diamond: three atoms under a common top.
pub fn m3() -> FiniteOrthoLattice {
    from_edges(
        &["0", "a", "b", "c", "1"],
        &[
            ("0", "a"),
            ("0", "b"),
            ("0", "c"),
            ("a", "1"),
            ("b", "1"),
            ("c", "1"),
        ],
        &[],
    )
}

/// The hexagon (benzene ring): chains `0 < x < y < 1` and `0 < y' < x' < 1`
/// with antipodal complements.
pub fn o6() -> FiniteOrthoLattice {
    from_edges(
        &["0", "x", "y", "y'", "x'", "1"],
        &[
            ("0", "x"),
            ("x", "y"),
            ("y", "1"),
            ("0", "y'"),
            ("y'", "x'"),
            ("x'", "1"),
        ],
        &[("0", "1"), ("x", "x'"), ("y", "y'")],
    )
}

/// Two orthogonal pairs of atoms, `a ⊥ a'`, `b ⊥ b'`.
pub fn mo2() -> FiniteOrthoLattice {
    from_edges(
        &["0", "a", "a'", "b", "b'", "1"],
        &[
            ("0", "a"),
            ("0", "a'"),
            ("0", "b"),
            ("0", "b'"),
            ("a", "1"),
            ("a'", "1"),
            ("b", "1"),
            ("b'", "1"),
        ],
        &[("0", "1"), ("a", "a'"), ("b", "b'")],
    )
}

/// Projection lattice generated by three distinct, pairwise non-orthogonal
/// lines of C².
pub fn c2_three_lines() -> FiniteOrthoLattice {
    let c = |re: f64, im: f64| Complex64::new(re, im);
    let lines = vec![
        vec![vec![c(1.0, 0.0), c(0.0, 0.0)]],
        vec![vec![c(1.0, 0.0), c(1.0, 0.0)]],
        vec![vec![c(1.0, 0.0), c(0.0, 1.0)]],
    ];
    projection_lattice(2, &lines, 64).expect("three lines close to eight subspaces")
}

/// The bundled gallery with its expected classifications.
pub fn gallery() -> Vec<GalleryEntry> {
    let t = Some(true);
    let f = Some(false);
    let mut out = Vec::new();
    for n in 1..=4 {
        out.push(GalleryEntry {
            name: format!("boolean_2^{n}"),
            lattice: boolean(n),
            expected: GalleryExpectation {
                distributive: t,
                modular: t,
                orthocomplemented: t,
                orthomodular: t,
                atomistic: t,
                covering: t,
                irreducible: Some(n == 1),
            },
        });
    }
    out.push(GalleryEntry {
        name: "chain_3".into(),
        lattice: chain3(),
        expected: GalleryExpectation {
            distributive: t,
            modular: t,
            orthocomplemented: f,
            atomistic: f,
            ..Default::default()
        },
    });
    out.push(GalleryEntry {
        name: "n5".into(),
        lattice: n5(),
        expected: GalleryExpectation {
            distributive: f,
            modular: f,
            orthocomplemented: f,
            ..Default::default()
        },
    });
    out.push(GalleryEntry {
        name: "m3".into(),
        lattice: m3(),
        expected: GalleryExpectation {
            distributive: f,
            modular: t,
            orthocomplemented: f,
            atomistic: t,
            covering: t,
            ..Default::default()
        },
    });
    out.push(GalleryEntry {
        name: "o6".into(),
        lattice: o6(),
        expected: GalleryExpectation {
            distributive: f,
            modular: f,
            orthocomplemented: t,
            orthomodular: f,
            ..Default::default()
        },
    });
    out.push(GalleryEntry {
        name: "mo2".into(),
        lattice: mo2(),
        expected: GalleryExpectation {
            distributive: f,
            modular: t,
            orthocomplemented: t,
            orthomodular: t,
            atomistic: t,
            covering: t,
            irreducible: t,
        },
    });
    out.push(GalleryEntry {
        name: "proj_c2_3lines".into(),
        lattice: c2_three_lines(),
        expected: GalleryExpectation {
            distributive: f,
            modular: t,
            orthocomplemented: t,
            orthomodular: t,
            atomistic: t,
            covering: t,
            irreducible: t,
        },
    });
    out
}
