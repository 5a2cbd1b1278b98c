use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use piercebox::search::{exists_partition_with, search_min_partition, ExistsConfig, SearchConfig};
use piercebox::Workers;

fn workers() -> [(&'static str, Workers); 2] {
    [("sequential", Workers::SEQUENTIAL), ("parallel", Workers::ALL)]
}

fn min_partition(c: &mut Criterion) {
    let mut group = c.benchmark_group("search_min_partition");
    group.sample_size(10);
    for (k, l) in [(3, 3), (4, 3), (5, 2)] {
        for (name, w) in workers() {
            group.bench_with_input(BenchmarkId::new(name, format!("{k}x{l}")), &(k, l), |b, &(k, l)| {
                let mut cfg = SearchConfig::new(k, l);
                cfg.workers = w;
                b.iter(|| search_min_partition(black_box(&cfg)).unwrap())
            });
        }
    }
    group.finish();
}

fn single_grid(c: &mut Criterion) {
    let mut group = c.benchmark_group("exists_partition");
    group.sample_size(10);
    // 5x5 grid, (3,3)-piercing, seven boxes: infeasible, so the whole tree is searched.
    for (name, w) in workers() {
        let cfg = ExistsConfig {
            symmetry_breaking: true,
            workers: w,
            time_limit: None,
        };
        group.bench_function(BenchmarkId::new(name, "5x5-k3-l3-n7"), |b| {
            b.iter(|| exists_partition_with(5, 5, 3, 3, black_box(7), &cfg).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, min_partition, single_grid);
criterion_main!(benches);
