use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use swf_core::chain::check_d_squared_with;
use swf_core::complexes::{build_equivariant, equivariant_homology_with};
use swf_core::floer_data::{generate_admissible, FloerData, Profile};
use swf_core::parallel::Strategy;
use swf_core::spectral_flow::{spectral_flow_with, CMatrix, HermitianPath, C64, DEFAULT_DEPTH};

fn data() -> FloerData {
    (0..)
        .find_map(|seed| generate_admissible(seed, &Profile::new(12, -3, 4, true)).ok())
        .expect("some seed generates")
}

fn path() -> HermitianPath {
    let n = 24;
    let m = |t: f64| {
        CMatrix::from_fn(n, n, |r, c| {
            if r == c {
                C64::new(t - (r as f64 + 0.5) / n as f64, 0.0)
            } else if r + 1 == c || c + 1 == r {
                C64::new(0.01, 0.02 * if r < c { 1.0 } else { -1.0 })
            } else {
                C64::new(0.0, 0.0)
            }
        })
    };
    HermitianPath::new(
        (0..=8).map(|i| i as f64 / 8.0).map(|t| (t, m(t))).collect(),
        1e-9,
    )
    .unwrap()
}

fn strategies(c: &mut Criterion) {
    let d = data();
    let complex = build_equivariant(&d, 8).unwrap();
    let p = path();
    let mut g = c.benchmark_group("strategy");
    g.sample_size(10);
    for (name, s) in [
        ("sequential", Strategy::Sequential),
        ("parallel", Strategy::Parallel),
    ] {
        g.bench_with_input(
            BenchmarkId::new("equivariant_homology", name),
            &s,
            |b, &s| b.iter(|| equivariant_homology_with(black_box(&d), 8, s).unwrap()),
        );
        g.bench_with_input(BenchmarkId::new("d_squared", name), &s, |b, &s| {
            b.iter(|| check_d_squared_with(black_box(&complex), s))
        });
        g.bench_with_input(BenchmarkId::new("spectral_flow", name), &s, |b, &s| {
            b.iter(|| spectral_flow_with(black_box(&p), DEFAULT_DEPTH, s).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, strategies);
criterion_main!(benches);
