use std::collections::BTreeMap;

use proptest::prelude::*;

use swf_core::chain::{check_d_squared, euler_characteristic};
use swf_core::complexes::{
    build_equivariant, build_nonequivariant, casson, certified_range, equivariant_homology,
    swf_homology,
};
use swf_core::floer_data::{generate_admissible, FloerData, Profile};
use swf_core::linalg::{q, DenseMatrix, Q};

fn generated() -> impl Strategy<Value = FloerData> {
    (any::<u64>(), 1usize..=9, -3i64..=1, 0i64..=4, any::<bool>()).prop_filter_map(
        "generation failed",
        |(seed, k, lo, width, with)| {
            generate_admissible(seed, &Profile::new(k, lo, lo + width, with)).ok()
        },
    )
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
enum Gen<'a> {
    Eta(&'a str, i64),
    One(&'a str, i64),
    Theta(i64),
}

fn boundary<'a>(d: &'a FloerData, g: &Gen<'a>) -> Vec<(Gen<'a>, Q)> {
    let c = d.coeffs();
    let mut out = Vec::new();
    match *g {
        Gen::One(a, p) => {
            for ((x, b), k) in &c.n {
                if x == a {
                    out.push((Gen::One(b, p), q(-k)));
                }
            }
        }
        Gen::Eta(a, p) => {
            for ((x, b), k) in &c.n {
                if x == a {
                    out.push((Gen::Eta(b, p), q(*k)));
                }
            }
            for ((x, e), k) in &c.m {
                if x == a {
                    out.push((Gen::One(e, p), q(*k)));
                }
            }
            if p > 0 {
                out.push((Gen::One(a, p - 1), q(-1)));
            }
            if let Some(k) = c.v.get(a) {
                out.push((Gen::Theta(p), q(*k)));
            }
        }
        Gen::Theta(p) => {
            for (e, k) in &c.u {
                out.push((Gen::One(e, p), q(*k)));
            }
        }
    }
    out
}

/// Betti numbers of the truncated complex, written straight from the boundary formulas.
fn oracle_betti(d: &FloerData, n: i64) -> BTreeMap<i64, usize> {
    let index = |id: &str| d.orbit(id).unwrap().index;
    let mut gens = Vec::new();
    for p in 0..=n {
        for o in d.free_orbits() {
            gens.push(Gen::Eta(&o.id, p));
            gens.push(Gen::One(&o.id, p));
        }
        if d.theta().is_some() {
            gens.push(Gen::Theta(p));
        }
    }
    let degree = |g: &Gen| match *g {
        Gen::Eta(a, p) => index(a) + 2 * p,
        Gen::One(a, p) => index(a) + 2 * p + 1,
        Gen::Theta(p) => d.theta_index().unwrap() + 2 * p,
    };
    let mut by_degree: BTreeMap<i64, Vec<Gen>> = BTreeMap::new();
    for g in &gens {
        by_degree.entry(degree(g)).or_default().push(*g);
    }
    let rank = |deg: i64| -> usize {
        let (Some(src), Some(tgt)) = (by_degree.get(&deg), by_degree.get(&(deg - 1))) else {
            return 0;
        };
        let columns: Vec<Vec<Q>> = src
            .iter()
            .map(|g| {
                let mut col = vec![q(0); tgt.len()];
                for (h, k) in boundary(d, g) {
                    if let Some(i) = tgt.iter().position(|t| *t == h) {
                        col[i] += k;
                    }
                }
                col
            })
            .collect();
        DenseMatrix::from_columns(tgt.len(), &columns).rank()
    };
    by_degree
        .iter()
        .map(|(&deg, g)| (deg, g.len() - rank(deg) - rank(deg + 1)))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn d_squared_vanishes_at_every_truncation(d in generated()) {
        for n in 0..=4 {
            prop_assert!(check_d_squared(&build_equivariant(&d, n).unwrap()).ok);
        }
    }

    #[test]
    fn matches_the_formula_oracle(d in generated(), n in 1u32..=4) {
        let h = equivariant_homology(&d, n).unwrap();
        let betti = oracle_betti(&d, n as i64);
        let (lo, hi) = certified_range(&d, n).unwrap();
        for k in lo..=hi {
            prop_assert_eq!(h.rank(k), betti.get(&k).copied().unwrap_or(0), "degree {}", k);
        }
    }

    #[test]
    fn certified_ranks_do_not_depend_on_truncation(d in generated(), n in 1u32..=3) {
        let small = equivariant_homology(&d, n).unwrap();
        let large = equivariant_homology(&d, n + 2).unwrap();
        let (lo, hi) = small.certified.unwrap();
        for k in lo..=hi {
            prop_assert_eq!(small.rank(k), large.rank(k));
        }
    }

    #[test]
    fn degree_law(d in generated(), n in 0u32..=3) {
        let c = build_equivariant(&d, n).unwrap();
        let index = |id: &str| d.orbit(id).unwrap().index;
        let (lo, hi) = c.degrees().unwrap();
        for deg in lo..=hi {
            for label in c.basis(deg) {
                let (head, power) = label.rsplit_once('^').unwrap();
                let p: i64 = power.parse().unwrap();
                let expected = if let Some(a) = head.strip_prefix("eta[") {
                    index(a.trim_end_matches(']')) + 2 * p
                } else if let Some(a) = head.strip_prefix("one[") {
                    index(a.trim_end_matches(']')) + 2 * p + 1
                } else {
                    d.theta_index().unwrap() + 2 * p
                };
                prop_assert_eq!(deg, expected, "{}", label);
            }
        }
    }

    #[test]
    fn casson_three_ways(d in generated()) {
        let by_orbits: i64 = d.free_orbits().map(|o| if o.index.rem_euclid(2) == 0 { 1 } else { -1 }).sum();
        prop_assert_eq!(casson(&d).unwrap(), by_orbits);
        prop_assert_eq!(euler_characteristic(&build_nonequivariant(&d).unwrap()), by_orbits);
        prop_assert_eq!(swf_homology(&d).unwrap().euler, Some(by_orbits));
    }
}

#[test]
fn ex0_is_a_polynomial_ring() {
    let h = equivariant_homology(&FloerData::ex0(), 3).unwrap();
    assert_eq!(h.ranks, BTreeMap::from([(0, 1), (2, 1), (4, 1)]));
    assert_eq!(h.certified, Some((0, 5)));
}

#[test]
fn inadmissible_data_is_refused() {
    let text = br#"{"label":"x","orbits":[{"id":"a","index":2,"reducible":false},{"id":"b","index":1,"reducible":false},{"id":"c","index":0,"reducible":false}],"n":[["a","b",1],["b","c",1]],"m":[],"u":[],"v":[]}"#;
    let broken = swf_core::floer_data::parse(text).unwrap();
    assert!(build_equivariant(&broken, 2).is_err());
    assert!(casson(&broken).is_err());
}
