// Sequential vs parallel timings for the two data-parallel hot spots:
// multi-restart k-means and the full training pipeline (whose per-night
// extraction flips with the `parallel` feature). Run `cargo bench` and
// `cargo bench --no-default-features` to compare the pipeline paths.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use restwatch::clustering::kmeans_best_seq;
#[cfg(feature = "parallel")]
use restwatch::clustering::kmeans_best_par;
use restwatch::config::Config;
use restwatch::pipeline::train;
use restwatch::rng::XorShift64Star;
use restwatch::synth::{generate, BehaviorProfile};

fn blob_points(n: usize) -> Vec<Vec<f64>> {
    let mut rng = XorShift64Star::new(99);
    (0..n)
        .map(|i| {
            let (cx, cy) = [(0.0, 0.0), (20.0, 0.0), (0.0, 20.0), (20.0, 20.0)][i % 4];
            vec![rng.normal(cx, 1.5), rng.normal(cy, 1.5)]
        })
        .collect()
}

fn bench_kmeans_restarts(c: &mut Criterion) {
    let mut group = c.benchmark_group("kmeans_best_40_restarts");
    for &n in &[200usize, 2000] {
        let points = blob_points(n);
        group.bench_with_input(BenchmarkId::new("sequential", n), &points, |b, pts| {
            b.iter(|| kmeans_best_seq(black_box(pts), 4, 7, 40).unwrap())
        });
        #[cfg(feature = "parallel")]
        group.bench_with_input(BenchmarkId::new("parallel", n), &points, |b, pts| {
            b.iter(|| kmeans_best_par(black_box(pts), 4, 7, 40).unwrap())
        });
    }
    group.finish();
}

fn bench_train_pipeline(c: &mut Criterion) {
    let profile = BehaviorProfile::default();
    let out = generate(&profile, 21, &[], 9).unwrap();
    let cfg = Config::default();
    let name = if cfg!(feature = "parallel") { "train_21_days/parallel" } else { "train_21_days/sequential" };
    c.bench_function(name, |b| {
        b.iter(|| {
            train(
                black_box(&out.location),
                black_box(&out.motion),
                black_box(&out.comm),
                &cfg,
                "p",
            )
            .unwrap()
        })
    });
}

criterion_group!(benches, bench_kmeans_restarts, bench_train_pipeline);
criterion_main!(benches);
