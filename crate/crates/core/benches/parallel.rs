use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use revmap::ellipsoid::{ellipsoid_profile, meridian_z_closed};
use revmap::geodesics::{random_initial_states, verify_equivalence_batch};
use revmap::mapping::MappingParams;
use revmap::par::{self, Execution};
use revmap::profile::metric_from_profile;

const MODES: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

fn equivalence_batch(c: &mut Criterion) {
    let g = metric_from_profile(&ellipsoid_profile(2.0).unwrap(), 1).unwrap();
    let inits = random_initial_states(&g, 32, 7);
    let mp = MappingParams::new(1.0, 0.3).unwrap();
    let mut group = c.benchmark_group("equivalence_batch");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| {
                verify_equivalence_batch(&g, mp, black_box(&inits), 5.0, 1e-10, exec).unwrap()
            })
        });
    }
    group.finish();
}

fn closed_form_grid(c: &mut Criterion) {
    let grid: Vec<(f64, f64, f64)> = [0.3, 0.5, 0.8]
        .iter()
        .flat_map(|&k| {
            [0.1, 1.0, 10.0, 100.0]
                .into_iter()
                .flat_map(move |a| (0..200).map(move |i| (k, a, k * i as f64 / 199.0)))
        })
        .collect();
    let mut group = c.benchmark_group("closed_form_grid");
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| {
                par::map(exec, black_box(grid.clone()), |(k, a, r)| {
                    meridian_z_closed(k, a, r).unwrap()
                })
            })
        });
    }
    group.finish();
}

criterion_group!(benches, equivalence_batch, closed_form_grid);
criterion_main!(benches);
