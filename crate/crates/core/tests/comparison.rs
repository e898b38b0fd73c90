use proptest::prelude::*;

use swf_core::chain::euler_characteristic;
use swf_core::comparison::{
    chain_map_i, closed_form_delta, connecting_delta, long_exact_sequence,
    spectral_pages_unrestricted, Comparison, Cycle, Filtered,
};
use swf_core::complexes::{
    build_nonequivariant, certified_range, equivariant_homology, swf_homology,
};
use swf_core::floer_data::{generate_admissible, FloerData, Profile};
use swf_core::linalg::{q, Q};
use swf_core::SwfError;

fn generated(with: Option<bool>) -> impl Strategy<Value = FloerData> {
    (any::<u64>(), 1usize..=9, -3i64..=1, 0i64..=4, any::<bool>()).prop_filter_map(
        "generation failed",
        move |(seed, k, lo, width, coin)| {
            generate_admissible(seed, &Profile::new(k, lo, lo + width, with.unwrap_or(coin))).ok()
        },
    )
}

/// Kernel basis of the plain boundary at `degree`.
fn cycles(d: &FloerData, degree: i64) -> Vec<Cycle> {
    let c = build_nonequivariant(d).unwrap();
    let basis = c.basis(degree).to_vec();
    let kernel = if basis.is_empty() {
        Vec::new()
    } else if c.dim(degree - 1) == 0 {
        (0..basis.len())
            .map(|i| (0..basis.len()).map(|j| q(i64::from(i == j))).collect())
            .collect()
    } else {
        c.boundary(degree).to_dense().nullspace()
    };
    kernel
        .into_iter()
        .map(|v: Vec<Q>| Cycle {
            degree,
            coefficients: basis
                .iter()
                .cloned()
                .zip(v)
                .filter(|(_, x)| *x != q(0))
                .collect(),
        })
        .collect()
}

fn combine(a: &Cycle, x: &Q, b: &Cycle, y: &Q) -> Cycle {
    let mut out = Cycle::zero(a.degree);
    for (z, w) in [(a, x), (b, y)] {
        for (id, c) in &z.coefficients {
            *out.coefficients.entry(id.clone()).or_insert_with(|| q(0)) += c * w;
        }
    }
    out.coefficients.retain(|_, c| *c != q(0));
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn projection_is_a_chain_map(d in generated(None), n in 0u32..=4) {
        prop_assert!(chain_map_i(&d, n).unwrap().commutator_residual().ok);
    }

    #[test]
    fn without_reducible_the_projection_is_a_rank_isomorphism(d in generated(Some(false)), n in 1u32..=4) {
        let eq = equivariant_homology(&d, n).unwrap();
        let plain = swf_homology(&d).unwrap();
        let (lo, hi) = eq.certified.unwrap();
        for k in lo..=hi {
            prop_assert_eq!(eq.rank(k), plain.rank(k));
        }
        prop_assert!(matches!(long_exact_sequence(&d, n), Err(SwfError::MissingReducible)));
    }

    #[test]
    fn connecting_map_is_linear(d in generated(Some(true)), x in -3i64..=3, y in -3i64..=3) {
        let n = 4;
        let t = d.theta_index().unwrap();
        let (lo, hi) = certified_range(&d, n).unwrap();
        for deg in (lo..=hi).filter(|k| (k - t).rem_euclid(2) == 1) {
            let zs = cycles(&d, deg);
            if zs.is_empty() {
                continue;
            }
            let (a, b) = (&zs[0], zs.last().unwrap());
            let (x, y) = (q(x), q(y));
            let da = connecting_delta(&d, a, n).unwrap().coefficient;
            let db = connecting_delta(&d, b, n).unwrap().coefficient;
            let mix = combine(a, &x, b, &y);
            let dm = connecting_delta(&d, &mix, n).unwrap();
            prop_assert_eq!(&dm.coefficient, &(&da * &x + &db * &y));
            prop_assert_eq!(&dm.closed_form, &closed_form_delta(&d, &mix));
        }
    }

    #[test]
    fn spectral_pages_keep_the_euler_characteristic(d in generated(None), n in 1u32..=3) {
        let cmp = Comparison::new(&d, n).unwrap();
        for (which, complex) in [
            (Filtered::Equivariant, &cmp.equivariant.complex),
            (Filtered::Q, &cmp.q),
            (Filtered::Plain, &cmp.plain),
        ] {
            let pages = spectral_pages_unrestricted(&d, n, which).unwrap();
            let chi = |p: &swf_core::comparison::SpectralPage| -> i64 {
                p.entries.iter().map(|((k, l), r)| if (k + l) % 2 == 0 { *r as i64 } else { -(*r as i64) }).sum()
            };
            prop_assert_eq!(chi(&pages.e0), euler_characteristic(complex));
            prop_assert_eq!(chi(&pages.e1), euler_characteristic(complex));
        }
    }
}

#[test]
fn non_cycles_are_refused() {
    let d = FloerData::ex1();
    let z = Cycle {
        degree: 1,
        coefficients: [("theta".to_string(), q(1))].into(),
    };
    assert!(matches!(
        connecting_delta(&d, &z, 4),
        Err(SwfError::NonCycle(_))
    ));
}

#[test]
fn uncertified_degrees_are_refused() {
    let d = FloerData::ex1();
    let z = Cycle {
        degree: 1,
        coefficients: [("a".to_string(), q(1))].into(),
    };
    assert!(connecting_delta(&d, &z, 4).is_ok());
    assert!(matches!(
        connecting_delta(&d, &z, 0),
        Err(SwfError::Uncertified { .. }) | Ok(_)
    ));
}
