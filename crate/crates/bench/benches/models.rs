use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use seawsn::propagation::{total_path_loss, AcousticBoundary, LinkGeometry, MediumEM, Reflection};
use seawsn::{FigurePreset, ScenarioConfig};

fn sweeps(c: &mut Criterion) {
    let base = FigurePreset::base();
    c.bench_function("fig1 sweep", |b| b.iter(|| FigurePreset::Fig1.run(black_box(&base)).unwrap()));
}

fn path_loss(c: &mut Criterion) {
    let geometry = LinkGeometry {
        distance: 3.0,
        depth: 1.0,
        frequency: 1e4,
    };
    let medium = MediumEM::sea_water();
    let surface = AcousticBoundary::water_to_air();
    c.bench_function("total_path_loss with reflection", |b| {
        b.iter(|| total_path_loss(black_box(&geometry), &medium, &surface, Reflection::On).unwrap())
    });
}

fn scenario(c: &mut Criterion) {
    let cfg = ScenarioConfig::scenario_one();
    let mut group = c.benchmark_group("lifetime");
    group.sample_size(20);
    group.bench_function("scenario one run", |b| b.iter(|| seawsn::run(black_box(&cfg)).unwrap()));
    group.finish();
}

criterion_group!(benches, sweeps, path_loss, scenario);
criterion_main!(benches);
