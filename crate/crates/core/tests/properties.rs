use hammology::filtration::Filtration;
use hammology::metrics::{hausdorff, Mode};
use hammology::miniball::{radius_discrete, radius_generalized};
use hammology::persistence::compute_persistence;
use hammology::{Rational, Simplex, StringSet};
use proptest::prelude::*;

/// Up to `max_m` distinct strings over `n` letters of length `l`.
fn string_set(n: usize, l: usize, max_m: usize) -> impl Strategy<Value = StringSet> {
    prop::collection::btree_set(prop::collection::vec(1..=n as u16, l), 1..=max_m).prop_map(move |strings| {
        let strings: Vec<String> = strings
            .into_iter()
            .map(|s| s.iter().map(|&c| char::from(b'0' + c as u8)).collect())
            .collect();
        let refs: Vec<&str> = strings.iter().map(String::as_str).collect();
        StringSet::from_digit_strings(n, &refs).unwrap()
    })
}

fn mode() -> impl Strategy<Value = Mode> {
    prop_oneof![Just(Mode::Discrete), Just(Mode::Generalized)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn filtrations_are_closed_and_monotone(set in string_set(3, 5, 5), mode in mode()) {
        let f = Filtration::build(&set, mode).unwrap();
        prop_assert!(f.is_full());
        prop_assert!(f.is_face_monotone());
        prop_assert_eq!(f.len(), (1usize << set.len()) - 1);
        for r in f.levels() {
            prop_assert!(f.sublevel(r).is_closed());
        }
    }

    #[test]
    fn reduction_and_euler_characteristic(set in string_set(3, 5, 6), mode in mode()) {
        let f = Filtration::build(&set, mode).unwrap();
        let p = compute_persistence(&f);
        prop_assert!(p.check_reduction(&f));
        for r in f.levels() {
            prop_assert!(p.euler_check(&f, r));
        }
        let bc = p.barcodes();
        prop_assert_eq!(bc.all(0).iter().filter(|b| b.death().is_none()).count(), 1);
        for k in 1..bc.num_dims() {
            prop_assert!(bc.all(k).iter().all(|b| b.death().is_some()));
            for bar in bc.all(k) {
                prop_assert!(bar.representative.is_cycle());
            }
        }
    }

    #[test]
    fn generalized_radius_is_bracketed(set in string_set(3, 4, 4)) {
        let all = Simplex::from_vertices(&(0..set.len()).collect::<Vec<_>>()).unwrap();
        let discrete = radius_discrete(&set, all).unwrap().radius;
        let generalized = radius_generalized(&set, all).unwrap().radius;
        prop_assert!(generalized <= discrete);
        for a in 0..set.len() {
            for b in 0..a {
                let half = set.distance(a, b, Mode::Discrete).unwrap() / Rational::from(2);
                prop_assert!(half <= generalized);
            }
        }
    }

    #[test]
    fn hausdorff_is_a_metric(a in string_set(2, 4, 4), b in string_set(2, 4, 4), c in string_set(2, 4, 4), mode in mode()) {
        let ab = hausdorff(&a, &b, mode).unwrap();
        prop_assert_eq!(&ab, &hausdorff(&b, &a, mode).unwrap());
        prop_assert!(hausdorff(&a, &a, mode).unwrap().is_zero());
        prop_assert!(ab <= hausdorff(&a, &c, mode).unwrap() + hausdorff(&c, &b, mode).unwrap());
    }
}
