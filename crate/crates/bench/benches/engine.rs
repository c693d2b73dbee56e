use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use merit_bench::{fold_records, random_history, rng, EventScript};
use merit_core::{allocate_bank, select_versions, EngineConfig};
use std::hint::black_box;

fn selection(c: &mut Criterion) {
    let mut group = c.benchmark_group("select_versions");
    for len in [10usize, 100, 1000] {
        let mut r = rng(11);
        let mut history = random_history(&mut r, len, 1000);
        while history.len() != len {
            history = random_history(&mut r, len, 1000);
        }
        group.throughput(Throughput::Elements(len as u64));
        group.bench_with_input(BenchmarkId::from_parameter(len), &history, |b, h| {
            b.iter(|| select_versions(black_box(h)).unwrap());
        });
    }
    group.finish();
}

fn allocation(c: &mut Criterion) {
    let mut group = c.benchmark_group("allocate_bank");
    let config = EngineConfig::default();
    for len in [10usize, 100, 1000] {
        let mut r = rng(13);
        let mut history = random_history(&mut r, len, 1000);
        while history.len() != len {
            history = random_history(&mut r, len, 1000);
        }
        let selection = select_versions(&history).unwrap();
        group.throughput(Throughput::Elements(len as u64));
        group.bench_with_input(
            BenchmarkId::from_parameter(len),
            &(history, selection),
            |b, (h, s)| {
                b.iter(|| allocate_bank(black_box(h), s, None, &config.allocation).unwrap());
            },
        );
    }
    group.finish();
}

fn replay(c: &mut Criterion) {
    let mut group = c.benchmark_group("replay");
    group.sample_size(20);
    let config = EngineConfig::default();
    for events in [1000usize, 5000] {
        let mut script = EventScript::new(17, config.clone());
        let records = script.take(events);
        group.throughput(Throughput::Elements(events as u64));
        group.bench_with_input(
            BenchmarkId::from_parameter(events),
            &records,
            |b, records| {
                b.iter(|| fold_records(black_box(records), &config));
            },
        );
    }
    group.finish();
}

criterion_group!(benches, selection, allocation, replay);
criterion_main!(benches);
