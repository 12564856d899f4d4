use criterion::{criterion_group, criterion_main, BatchSize, BenchmarkId, Criterion};

use zhuforge::parallel::Parallelism;
use zhuforge::presentation::{parse_presentation, Presentation};
use zhuforge::reduction::ReductionStrategy;
use zhuforge::zhu::{collect_seeds, relation_closure, ClosureBounds, SeedSelection};

fn load(name: &str) -> Presentation {
    let path = format!("{}/../../presentations/{name}.json", env!("CARGO_MANIFEST_DIR"));
    parse_presentation(&std::fs::read_to_string(path).unwrap()).unwrap()
}

const MODES: [(&str, Parallelism); 2] = [("sequential", Parallelism::Sequential), ("parallel", Parallelism::Parallel)];

// Engines memoize normal forms, so each iteration gets a fresh one.
fn defects(c: &mut Criterion) {
    let mut group = c.benchmark_group("c1_singular_elements");
    for name in ["w3", "lattice"] {
        let p = load(name);
        for (label, mode) in MODES {
            group.bench_with_input(BenchmarkId::new(label, name), &mode, |b, &mode| {
                b.iter_batched(
                    || p.engine(ReductionStrategy::LeftmostFirst),
                    |e| e.c1_singular_elements(mode),
                    BatchSize::SmallInput,
                )
            });
        }
    }
    group.finish();
}

fn closure(c: &mut Criterion) {
    let mut group = c.benchmark_group("relation_closure");
    group.sample_size(20);
    for name in ["w3", "lattice"] {
        let p = load(name);
        let bounds = ClosureBounds::from_options(&p.options);
        for (label, mode) in MODES {
            group.bench_with_input(BenchmarkId::new(label, name), &mode, |b, &mode| {
                b.iter_batched(
                    || p.engine(ReductionStrategy::LeftmostFirst),
                    |e| {
                        let seeds = collect_seeds(&p, &e, SeedSelection::Both, mode);
                        relation_closure(&e, &p.name, &seeds, &bounds, mode)
                    },
                    BatchSize::SmallInput,
                )
            });
        }
    }
    group.finish();
}

criterion_group!(benches, defects, closure);
criterion_main!(benches);
