use std::hint::black_box;
use std::time::Duration;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use isgame::enumerate::{agreement_experiment_with, enumerate_forms};
use isgame::fixtures;
use isgame::game::is_convex_brute_with;
use isgame::pmas::{verify_scheme_with, VerificationMode};
use isgame::{build_pmas, parse_graph, GameTable, Strategy};

const STRATEGIES: [(&str, Strategy); 2] = [
    ("sequential", Strategy::Sequential),
    ("parallel", Strategy::Parallel),
];

fn game_table(c: &mut Criterion) {
    let g = fixtures::twelve_edge_example();
    let mut group = c.benchmark_group("game_table");
    for (name, strategy) in STRATEGIES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| GameTable::with_strategy(black_box(&g), strategy))
        });
    }
    group.finish();
}

fn verify(c: &mut Criterion) {
    let g = fixtures::twelve_edge_example();
    let scheme = build_pmas(&g).unwrap();
    let mut group = c.benchmark_group("verify_scheme");
    group.sample_size(10);
    for (name, strategy) in STRATEGIES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| {
                verify_scheme_with(
                    black_box(&g),
                    &scheme,
                    VerificationMode::Exhaustive,
                    strategy,
                )
                .unwrap()
            })
        });
    }
    group.finish();
}

fn convexity(c: &mut Criterion) {
    // A comb: every spine edge touches a tooth, so the game is convex and
    // the scan covers all pairs.
    let mut text = String::new();
    for k in 0..6 {
        text.push_str(&format!("s{k} t{k}\n"));
        if k > 0 {
            text.push_str(&format!("s{} s{k}\n", k - 1));
        }
    }
    let g = parse_graph(&text).unwrap();
    let mut group = c.benchmark_group("convexity_scan");
    group.sample_size(10);
    for (name, strategy) in STRATEGIES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| is_convex_brute_with(black_box(&g), strategy).unwrap())
        });
    }
    group.finish();
}

fn enumeration(c: &mut Criterion) {
    let mut group = c.benchmark_group("enumerate_forms");
    group.sample_size(10);
    for (name, strategy) in STRATEGIES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| enumerate_forms(black_box(10), 8, strategy).unwrap())
        });
    }
    group.finish();
}

fn agreement(c: &mut Criterion) {
    let mut group = c.benchmark_group("agreement");
    group
        .sample_size(10)
        .measurement_time(Duration::from_secs(20));
    for (name, strategy) in STRATEGIES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| agreement_experiment_with(black_box(5), strategy).unwrap())
        });
    }
    group.finish();
}

criterion_group!(
    benches,
    game_table,
    verify,
    convexity,
    enumeration,
    agreement
);
criterion_main!(benches);
