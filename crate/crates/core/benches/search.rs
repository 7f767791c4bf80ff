use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use arcmub::arcs::{search_ovals, SearchOptions};
use arcmub::galois::Field;
use arcmub::mub::{verify_mub_set, wf_mub_set};
use arcmub::par::Exec;
use arcmub::plane::pg2_order;

fn executors() -> [(&'static str, Exec); 2] {
    [("sequential", Exec::sequential()), ("parallel", Exec::new(0))]
}

fn oval_census(c: &mut Criterion) {
    let mut group = c.benchmark_group("oval_census");
    group.sample_size(10);
    for q in [5u64, 7] {
        let plane = pg2_order(q).unwrap();
        let opts = SearchOptions::exhaustive();
        for (name, exec) in executors() {
            group.bench_with_input(BenchmarkId::new(name, q), &plane, |b, p| {
                b.iter(|| search_ovals(p, &opts, &exec).unwrap().ovals)
            });
        }
    }
    group.finish();
}

fn mub_verification(c: &mut Criterion) {
    let mut group = c.benchmark_group("mub_verify");
    group.sample_size(10);
    for d in [9u64, 25] {
        let set = wf_mub_set(&Field::of_order(d).unwrap()).unwrap();
        for (name, exec) in executors() {
            group.bench_with_input(BenchmarkId::new(name, d), &set, |b, s| {
                b.iter(|| verify_mub_set(s, &exec).unwrap().passed())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, oval_census, mub_verification);
criterion_main!(benches);
