use proptest::prelude::*;

use swf_core::chain::check_d_squared;
use swf_core::complexes::build_equivariant_unchecked;
use swf_core::floer_data::{generate_admissible, parse, serialize, validate, FloerData, Profile};

fn profile() -> impl Strategy<Value = (u64, Profile)> {
    (
        any::<u64>(),
        1usize..=10,
        -3i64..=1,
        0i64..=4,
        any::<bool>(),
    )
        .prop_map(|(seed, k, lo, width, with)| (seed, Profile::new(k, lo, lo + width, with)))
}

fn generated() -> impl Strategy<Value = FloerData> {
    profile().prop_filter_map("generation failed", |(seed, p)| {
        generate_admissible(seed, &p).ok()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn validate_agrees_with_d_squared(d in generated(), slot in any::<prop::sample::Index>(), delta in prop::sample::select(vec![-2i64, -1, 1, 2])) {
        for n in 0..=3 {
            prop_assert!(check_d_squared(&build_equivariant_unchecked(&d, n)).ok);
        }
        let keys = d.admissible_keys();
        prop_assume!(!keys.is_empty());
        let key = slot.get(&keys);
        let e = d.with_coefficient(key, d.coeffs().get(key) + delta).unwrap();
        let valid = validate(&e).ok;
        // every identity is visible from the power-0 generators, so N = 1 suffices
        for n in 1..=3 {
            prop_assert_eq!(valid, check_d_squared(&build_equivariant_unchecked(&e, n)).ok);
        }
    }

    #[test]
    fn validate_is_pure(d in generated()) {
        prop_assert_eq!(validate(&d), validate(&d.clone()));
    }

    #[test]
    fn no_reducible_means_no_theta_counts((seed, p) in profile()) {
        let p = Profile { with_reducible: false, ..p };
        if let Ok(d) = generate_admissible(seed, &p) {
            prop_assert!(d.theta().is_none());
            prop_assert!(d.coeffs().u.is_empty() && d.coeffs().v.is_empty());
        }
    }

    #[test]
    fn json_round_trip(d in generated()) {
        prop_assert_eq!(parse(&serialize(&d)).unwrap(), d);
    }

    #[test]
    fn generation_is_deterministic((seed, p) in profile()) {
        prop_assert_eq!(generate_admissible(seed, &p).ok(), generate_admissible(seed, &p).ok());
    }
}

#[test]
fn parse_rejects_unknown_orbits_in_coefficients() {
    let text = br#"{"label":"x","orbits":[{"id":"a","index":1,"reducible":false}],"n":[["a","b",1]],"m":[],"u":[],"v":[]}"#;
    assert!(parse(text).is_err());
}

#[test]
fn parse_rejects_wrong_index_gap() {
    let text = br#"{"label":"x","orbits":[{"id":"a","index":2,"reducible":false},{"id":"b","index":0,"reducible":false}],"n":[["a","b",1]],"m":[],"u":[],"v":[]}"#;
    assert!(parse(text).is_err());
}
