//! Sequential vs rayon execution of the data-parallel workloads.

use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use rbf_euler::analysis::{convergence_study, stability_scan, DEFAULT_RECT};
use rbf_euler::problems::ex3;
use rbf_euler::{Execution, SchemeKind, ShapePolicy};

const MODES: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

fn bench_stability(c: &mut Criterion) {
    let mut group = c.benchmark_group("stability_scan_400x400");
    for scheme in [SchemeKind::Imq, SchemeKind::Iq] {
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, scheme), &scheme, |b, &s| {
                b.iter(|| stability_scan(s, DEFAULT_RECT, 400, 400, 1, exec).unwrap())
            });
        }
    }
    group.finish();
}

fn bench_convergence(c: &mut Criterion) {
    let p = ex3();
    let n_list = [200, 400, 800, 1600, 3200, 6400, 12800, 25600];
    let policy = ShapePolicy::finite_difference();
    let mut group = c.benchmark_group("convergence_ex3_imq");
    group.sample_size(20);
    for (name, exec) in MODES {
        group.bench_function(name, |b| {
            b.iter(|| {
                convergence_study(black_box(&p), SchemeKind::Imq, &policy, &n_list, exec).unwrap()
            })
        });
    }
    group.finish();
}

criterion_group!(benches, bench_stability, bench_convergence);
criterion_main!(benches);
