use prehom::combinatorics::{even_internal_count, thin_vectors_up_to_len, thin_vectors_up_to_rank, ThinDimVector};
use prehom::constructions::{decompose_jk, element_x, element_xbar, family, modified_family, split_coordinates};
use prehom::matrix_model::{jordan_type, RootSet};
use prehom::orbit_lab::{class_size, OrbitLab, DEFAULT_BUDGET};
use prehom::quiver::{ext1_dim, is_isomorphic, module_from_element, proj_resolution_t, standard_module, QuiverModule};
use prehom::{Field, Rational};

type Q = Rational;

fn d(v: &[i64]) -> ThinDimVector {
    ThinDimVector::new(v).unwrap()
}

#[test]
fn jordan_type_of_running_example() {
    let x = element_x::<Q>(&d(&[1, 1, 0, 1, 0, 1, 1, 0, 1, 1, 1])).unwrap();
    let mut jt = jordan_type(&x);
    jt.sort_unstable();
    assert_eq!(jt, vec![3, 5]);
}

#[test]
fn family_members_are_nonsplit_extensions() {
    let v = d(&[1, 0, 1, 1, 0, 1, 1, 1, 1, 0, 1, 1, 1, 0, 1]);
    let jk = decompose_jk(&v);
    let (s, t) = (standard_module::<Q>(&jk.k), standard_module::<Q>(&jk.j));
    let split = s.direct_sum(&t).unwrap();
    let (ks, js) = split_coordinates(&v, &jk);
    for p in [1, -2, 7] {
        let m = module_from_element(&family(&v).instantiate(&[Q::from_i64(p)]).unwrap());
        assert!(is_isomorphic(&m.submodule_on(&ks).unwrap(), &s, 1).unwrap());
        assert!(is_isomorphic(&m.quotient_on(&js).unwrap(), &t, 1).unwrap());
        assert!(!is_isomorphic(&m, &split, 1).unwrap());
        let mbar = module_from_element(&modified_family(&v).instantiate(&[Q::from_i64(p)]).unwrap());
        assert!(!is_isomorphic(&mbar, &split, 1).unwrap());
    }
}

#[test]
fn resolution_counts_even_strings() {
    for v in thin_vectors_up_to_len(12) {
        let jk = decompose_jk(&v);
        if jk.e() == 0 {
            continue;
        }
        let res = proj_resolution_t::<Q>(&jk.j, &jk.b).unwrap();
        assert!(res.verify().all(), "{v}");
        let s: QuiverModule<Q> = standard_module(&jk.k);
        assert_eq!(res.ext1_via_resolution(&s).unwrap(), jk.e(), "{v}");
        assert_eq!(ext1_dim(&res.target, &s).unwrap(), jk.e(), "{v}");
    }
}

#[test]
fn dense_representative_class_sizes() {
    for v in thin_vectors_up_to_rank(5).into_iter().filter(|v| even_internal_count(v) == 1) {
        for q in [2, 3] {
            let lab = OrbitLab::new(&v, q).unwrap();
            let y = lab.coords_of(&element_xbar::<Q>(&v).unwrap()).unwrap();
            let n = v.rank();
            assert_eq!(lab.sublattice_rank(&y), n - 1, "{v}");
            let expected = class_size(q, n - 1, RootSet::new(&v).len() - (n - 1));
            assert_eq!(lab.orbit_size(&y, DEFAULT_BUDGET).unwrap(), expected, "{v} q={q}");
            assert_eq!(lab.class_size_formula(&y, DEFAULT_BUDGET).unwrap(), expected, "{v} q={q}");
        }
    }
}

#[test]
fn minimal_elements_vanish_at_inert_points() {
    let v = d(&[1, 1, 0, 1, 1, 1]);
    let lab = OrbitLab::new(&v, 3).unwrap();
    let dim = lab.dim();
    for idx in 0..lab.states(dim).unwrap() {
        let y = lab.decode(idx, dim);
        if !lab.is_minimal(&y, DEFAULT_BUDGET).unwrap() {
            continue;
        }
        let inert = lab.inert_points(&y, DEFAULT_BUDGET).unwrap();
        for (a, i) in y.iter().zip(inert) {
            assert!(*a == 0 || !i, "{y:?}");
        }
    }
}

#[test]
fn modified_family_is_minimal_for_two_even_strings() {
    let v = d(&[1, 0, 1, 1, 0, 1, 1, 0, 1]);
    let lab = OrbitLab::new(&v, 3).unwrap();
    for p in 1..3 {
        let y = lab.coords_of(&modified_family(&v).instantiate(&[Q::from_i64(p)]).unwrap()).unwrap();
        assert!(lab.is_minimal(&y, DEFAULT_BUDGET).unwrap());
    }
}
