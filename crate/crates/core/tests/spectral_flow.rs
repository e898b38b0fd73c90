use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use swf_core::parallel::Strategy as Exec;
use swf_core::spectral_flow::{
    compose_crossings, eigenvalues, kuranishi_crossing, parse_path, spectral_flow,
    spectral_flow_with, wall_signature, CMatrix, HermitianPath, LocalModelParams, RMatrix, C64,
    DEFAULT_DEPTH,
};
use swf_core::SwfError;

const TOL: f64 = 1e-9;

fn hermitian(rng: &mut ChaCha8Rng, n: usize) -> CMatrix {
    let a = CMatrix::from_fn(n, n, |_, _| {
        C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    });
    (&a + a.adjoint()) * C64::new(0.5, 0.0)
}

fn negatives(m: &CMatrix) -> i64 {
    eigenvalues(m).iter().filter(|l| **l < 0.0).count() as i64
}

fn off_wall(m: &CMatrix) -> bool {
    wall_signature(m, 1e-3) == 0
}

/// Random piecewise-linear path with endpoints comfortably off the wall.
fn random_path(seed: u64, n: usize, k: usize) -> Option<HermitianPath> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples: Vec<(f64, CMatrix)> = (0..k)
        .map(|i| (i as f64 / (k - 1) as f64, hermitian(&mut rng, n)))
        .collect();
    if !off_wall(&samples[0].1) || !off_wall(&samples[k - 1].1) {
        return None;
    }
    HermitianPath::new(samples, TOL).ok()
}

fn unitary(rng: &mut ChaCha8Rng, n: usize) -> CMatrix {
    let a = CMatrix::from_fn(n, n, |_, _| {
        C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    });
    a.qr().q()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn flow_counts_negative_eigenvalues_lost(seed in any::<u64>(), n in 1usize..=4, k in 2usize..=5) {
        if let Some(p) = random_path(seed, n, k) {
            let s = p.samples();
            prop_assert_eq!(spectral_flow(&p).unwrap(), negatives(&s[0].1) - negatives(&s[k - 1].1));
        }
    }

    #[test]
    fn flow_is_additive_under_splitting(seed in any::<u64>(), n in 1usize..=4, cut in 0.1f64..0.9) {
        if let Some(p) = random_path(seed, n, 4) {
            prop_assume!(off_wall(&p.at(cut)));
            let (a, b) = p.split(cut).unwrap();
            prop_assert_eq!(spectral_flow(&a).unwrap() + spectral_flow(&b).unwrap(), spectral_flow(&p).unwrap());
            prop_assert_eq!(spectral_flow(&a.concat(&b).unwrap()).unwrap(), spectral_flow(&p).unwrap());
        }
    }

    #[test]
    fn reversal_negates(seed in any::<u64>(), n in 1usize..=4) {
        if let Some(p) = random_path(seed, n, 3) {
            prop_assert_eq!(spectral_flow(&p.reversed()).unwrap(), -spectral_flow(&p).unwrap());
        }
    }

    #[test]
    fn sequential_and_parallel_agree(seed in any::<u64>()) {
        if let Some(p) = random_path(seed, 3, 4) {
            prop_assert_eq!(
                spectral_flow_with(&p, DEFAULT_DEPTH, Exec::Sequential).unwrap(),
                spectral_flow_with(&p, DEFAULT_DEPTH, Exec::Parallel).unwrap()
            );
        }
    }

    #[test]
    fn wall_signature_is_unitarily_invariant(seed in any::<u64>(), n in 1usize..=5, kernel in 0usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let kernel = kernel.min(n);
        let diag: Vec<f64> = (0..n)
            .map(|i| if i < kernel { 0.0 } else { rng.random_range(0.5..2.0) * if rng.random_bool(0.5) { 1.0 } else { -1.0 } })
            .collect();
        let d = CMatrix::from_fn(n, n, |r, c| if r == c { C64::new(diag[r], 0.0) } else { C64::new(0.0, 0.0) });
        let u = unitary(&mut rng, n);
        let m = &u * &d * u.adjoint();
        let m = (&m + m.adjoint()) * C64::new(0.5, 0.0);
        prop_assert_eq!(wall_signature(&d, 1e-8), kernel);
        prop_assert_eq!(wall_signature(&m, 1e-8), kernel);
    }

    #[test]
    fn kuranishi_flow_and_composition(lp in prop_oneof![-5.0f64..-0.01, 0.01f64..5.0], g in prop_oneof![-5.0f64..-0.01, 0.01f64..5.0]) {
        let k = kuranishi_crossing(LocalModelParams { lambda_prime: lp, gamma: g }).unwrap();
        prop_assert_eq!(k.sf_c, if lp > 0.0 { 1 } else { -1 });
        prop_assert_eq!(k.delta_lambda, -k.sf_c);
        prop_assert_eq!(i64::from(k.branch_side), if -lp / g > 0.0 { 1 } else { -1 });
        prop_assert_eq!(i64::from(k.branch_sign), if g > 0.0 { k.sf_c } else { -k.sf_c });
        let back = kuranishi_crossing(LocalModelParams { lambda_prime: -lp, gamma: g }).unwrap();
        prop_assert_eq!(compose_crossings(&[k, back]), 0);
        prop_assert_eq!(compose_crossings(&[k, k, back]), -k.sf_c);
    }
}

#[test]
fn diagonal_path_with_opposite_crossings_has_zero_flow() {
    let m = |t: f64| RMatrix::from_row_slice(2, 2, &[2.0 * t - 1.0, 0.0, 0.0, 1.0 - 2.0 * t]);
    let p = HermitianPath::from_real(vec![(0.0, m(0.0)), (1.0, m(1.0))], TOL).unwrap();
    assert_eq!(spectral_flow(&p).unwrap(), 0);
    let fine: Vec<(f64, RMatrix)> = (0..=101)
        .map(|i| i as f64 / 101.0)
        .map(|t| (t, m(t)))
        .collect();
    let dense = HermitianPath::from_real(fine, TOL).unwrap();
    assert_eq!(spectral_flow(&dense).unwrap(), 0);
}

#[test]
fn one_dimensional_crossings() {
    let line = |a: f64, b: f64| {
        HermitianPath::from_real(
            vec![
                (0.0, RMatrix::from_element(1, 1, a)),
                (1.0, RMatrix::from_element(1, 1, b)),
            ],
            TOL,
        )
        .unwrap()
    };
    assert_eq!(spectral_flow(&line(-1.0, 1.0)).unwrap(), 1);
    assert_eq!(spectral_flow(&line(1.0, -1.0)).unwrap(), -1);
    assert_eq!(spectral_flow(&line(1.0, 2.0)).unwrap(), 0);
    assert!(matches!(
        spectral_flow(&line(0.0, 1.0)),
        Err(SwfError::EndpointOnWall { .. })
    ));
}

#[test]
fn tangency_counts_nothing() {
    // λ(t) = (2t − 1)² touches zero at the interior sample t = ½.
    let samples: Vec<(f64, RMatrix)> = (0..=4)
        .map(|i| i as f64 / 4.0)
        .map(|t| (t, RMatrix::from_element(1, 1, (2.0 * t - 1.0).powi(2))))
        .collect();
    assert_eq!(
        spectral_flow(&HermitianPath::from_real(samples, TOL).unwrap()).unwrap(),
        0
    );
}

#[test]
fn invalid_paths_are_refused() {
    let a = CMatrix::from_fn(2, 2, |r, c| C64::new(0.0, if r < c { 1.0 } else { 0.0 }));
    let id = CMatrix::identity(2, 2);
    assert!(HermitianPath::new(vec![(0.0, a), (1.0, id.clone())], TOL).is_err());
    assert!(HermitianPath::new(vec![(0.0, id.clone())], TOL).is_err());
    assert!(HermitianPath::new(vec![(0.5, id.clone()), (0.2, id.clone())], TOL).is_err());
    assert!(parse_path(
        br#"{"dim": 1, "samples": [{"t": 0, "re": [[1]]}, {"t": 1, "re": [[-1]]}]}"#
    )
    .is_ok());
    assert!(parse_path(br#"{"dim": 2, "samples": []}"#).is_err());
}
