use num_complex::Complex64;
use proptest::prelude::*;
use randspace_core::lattice::{
    atoms_and_covering, classify, gallery, projection_lattice, FiniteOrthoLattice,
};

fn all_lattices() -> Vec<(String, FiniteOrthoLattice)> {
    let mut out: Vec<(String, FiniteOrthoLattice)> =
        gallery().into_iter().map(|e| (e.name, e.lattice)).collect();
    let b1 = gallery::boolean(1);
    out.push(("mo2 x 2".into(), gallery::mo2().product(&b1)));
    out.push(("o6 x 2".into(), gallery::o6().product(&b1)));
    out.push((
        "n5 x chain3".into(),
        gallery::n5().product(&gallery::chain3()),
    ));
    out
}

fn check_laws(name: &str, l: &FiniteOrthoLattice) {
    let n = l.len();
    for x in 0..n {
        assert_eq!(l.meet(x, x), x, "{name}");
        assert_eq!(l.join(x, x), x, "{name}");
        for y in 0..n {
            assert_eq!(l.meet(x, y), l.meet(y, x), "{name}");
            assert_eq!(l.join(x, y), l.join(y, x), "{name}");
            assert_eq!(l.meet(x, l.join(x, y)), x, "{name}");
            assert_eq!(l.join(x, l.meet(x, y)), x, "{name}");
            let le = l.le(x, y);
            assert_eq!(le, l.meet(x, y) == x, "{name}");
            assert_eq!(le, l.join(x, y) == y, "{name}");
            for z in 0..n {
                assert_eq!(l.meet(l.meet(x, y), z), l.meet(x, l.meet(y, z)), "{name}");
                assert_eq!(l.join(l.join(x, y), z), l.join(x, l.join(y, z)), "{name}");
            }
        }
    }
    if classify(l).orthocomplemented {
        for x in 0..n {
            for y in 0..n {
                let lhs = l.not(l.join(x, y)).unwrap();
                let rhs = l.meet(l.not(x).unwrap(), l.not(y).unwrap());
                assert_eq!(lhs, rhs, "{name}: De Morgan at ({x},{y})");
            }
        }
    }
}

#[test]
fn lattice_laws_on_gallery_and_products() {
    for (name, l) in all_lattices() {
        check_laws(&name, &l);
    }
}

#[test]
fn implication_chain_on_gallery() {
    for (name, l) in all_lattices() {
        assert!(classify(&l).implication_chain_holds(), "{name}");
    }
}

fn unit_line() -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 2)
        .prop_filter("nonzero", |v| {
            v.iter().any(|(a, b)| a.abs() + b.abs() > 0.1)
        })
        .prop_map(|v| v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn projection_lattices_of_c2_are_orthomodular(lines in prop::collection::vec(unit_line(), 1..4)) {
        let families: Vec<Vec<Vec<Complex64>>> = lines.into_iter().map(|v| vec![v]).collect();
        let l = projection_lattice(2, &families, 64).unwrap();
        let class = classify(&l);
        let atoms = atoms_and_covering(&l);
        prop_assert!(class.orthomodular);
        prop_assert!(atoms.atomistic);
        prop_assert!(atoms.covering_property);
        prop_assert!(atoms.exchange_property);
        check_laws("proj C2", &l);
    }
}

#[test]
fn coordinate_projection_lattice_of_c3_is_boolean() {
    let e = |i: usize| {
        (0..3)
            .map(|k| Complex64::new(if k == i { 1.0 } else { 0.0 }, 0.0))
            .collect::<Vec<_>>()
    };
    let families = vec![vec![e(0)], vec![e(1)]];
    let l = projection_lattice(3, &families, 64).unwrap();
    assert_eq!(l.len(), 8);
    let class = classify(&l);
    assert!(class.distributive && class.orthomodular);
    assert!(atoms_and_covering(&l).covering_property);
}
