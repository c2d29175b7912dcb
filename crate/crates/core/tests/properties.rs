use prehom::combinatorics::{from_strings, thin_vectors_up_to_len, OneStringSequence, ThinDimVector};
use prehom::matrix_model::{ad_image_rank, random_element, RootSet};
use prehom::orbit_lab::{enumerate_orbits, FiniteFieldContext, OrbitLab, DEFAULT_BUDGET};
use prehom::quiver::{euler_form, hom_dim, hom_dim_standard, module_from_element, standard_module, StandardSubset};
use prehom::Rational;
use proptest::prelude::*;

type Q = Rational;

fn small_d(t_max: usize) -> impl Strategy<Value = ThinDimVector> {
    let all = thin_vectors_up_to_len(t_max);
    (0..all.len()).prop_map(move |i| all[i].clone())
}

fn subset_pair(t_max: usize) -> impl Strategy<Value = (StandardSubset, StandardSubset)> {
    (1..=t_max).prop_flat_map(|t| {
        let all = StandardSubset::all(t);
        let n = all.len();
        (0..n, 0..n).prop_map(move |(a, b)| (all[a].clone(), all[b].clone()))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn codim_equals_self_extensions(d in small_d(8), seed in any::<u64>()) {
        let x = random_element::<Q>(&d, seed, 3);
        let m = module_from_element(&x);
        let ext = hom_dim(&m, &m).unwrap() as i64 - euler_form(&m, &m).unwrap();
        prop_assert_eq!((RootSet::new(&d).len() - ad_image_rank(&x)) as i64, ext);
    }

    #[test]
    fn hom_formula_agrees_with_solver((a, b) in subset_pair(10)) {
        let (ma, mb) = (standard_module::<Q>(&a), standard_module::<Q>(&b));
        prop_assert_eq!(hom_dim_standard(&a, &b), hom_dim(&ma, &mb).unwrap());
    }

    #[test]
    fn unipotent_orbits_are_powers_of_q(d in small_d(7), q in prop::sample::select(vec![2u64, 3]), seed in any::<u64>()) {
        let lab = OrbitLab::new(&d, q).unwrap();
        let y: Vec<u8> = (0..lab.dim()).map(|k| ((seed >> (2 * (k % 32))) % q) as u8).collect();
        let (size, k) = lab.u_orbit_size(&y, DEFAULT_BUDGET).unwrap();
        prop_assert_eq!(size, q.pow(k));
        let inert = lab.inert_points(&y, DEFAULT_BUDGET).unwrap();
        prop_assert_eq!(inert.iter().filter(|&&b| b).count() as u32, k);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn census_partitions_and_divides_group_order(d in small_d(6), q in prop::sample::select(vec![2u64, 3])) {
        let census = enumerate_orbits(&d, q, DEFAULT_BUDGET).unwrap();
        prop_assert_eq!(census.orbits.iter().map(|o| o.size).sum::<u64>(), census.total);
        let order = FiniteFieldContext::new(q).unwrap().borel_order(d.rank());
        for o in &census.orbits {
            prop_assert_eq!(order % o.size as u128, 0);
            prop_assert_eq!(o.minimal_count, 1);
        }
    }

    #[test]
    fn strings_round_trip(a in prop::collection::vec(1i64..4, 1..6)) {
        let d = from_strings(&OneStringSequence::new(&a).unwrap());
        let back: Vec<i64> = prehom::combinatorics::one_strings(&d).as_slice().iter().map(|&x| x as i64).collect();
        prop_assert_eq!(back, a);
    }
}
