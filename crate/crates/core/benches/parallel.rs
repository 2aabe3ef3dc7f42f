//! Rayon pool versus a single-thread pool on the searches that fan out:
//! the γ_a subset search and the theorem suite. Build with
//! `--no-default-features` to get the fully sequential code path instead.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rayon::ThreadPoolBuilder;

use zdga::theorems::{run_suite, SuiteOptions};
use zdga::{alliance_number, spec, RingBuilder, ZeroDivisorGraph};

fn graph(text: &str) -> ZeroDivisorGraph {
    ZeroDivisorGraph::build(&spec::build(text, &RingBuilder::new()).unwrap())
}

fn pools() -> Vec<(&'static str, rayon::ThreadPool)> {
    vec![
        ("rayon", ThreadPoolBuilder::new().build().unwrap()),
        ("single", ThreadPoolBuilder::new().num_threads(1).build().unwrap()),
    ]
}

fn alliance(c: &mut Criterion) {
    let mut group = c.benchmark_group("alliance_number");
    for text in ["Z125", "Z5xZ9", "Z2xZ2xZ2xZ2"] {
        let g = graph(text);
        for (name, pool) in pools() {
            group.bench_with_input(BenchmarkId::new(name, text), &g, |b, g| {
                b.iter(|| pool.install(|| alliance_number(g).unwrap()))
            });
        }
    }
    group.finish();
}

fn suite(c: &mut Criterion) {
    let mut group = c.benchmark_group("verify_theorems");
    group.sample_size(10);
    let opts = SuiteOptions { timing: false, ..SuiteOptions::new(32) };
    for (name, pool) in pools() {
        group.bench_function(BenchmarkId::new(name, 32), |b| b.iter(|| pool.install(|| run_suite(&opts))));
    }
    group.finish();
}

criterion_group!(benches, alliance, suite);
criterion_main!(benches);
