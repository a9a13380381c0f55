use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use hdicv_core::experiment::{simulate_config, ExperimentConfig, ExperimentKind};
use hdicv_core::shrinkage::{ans, mns, spot_window, AnsOptions};
use hdicv_core::sim::{ClockSpec, NoiseSpec};
use hdicv_core::spectral::SpectralDecomp;
use hdicv_core::tick::*;

fn panel(p: usize, n: usize) -> TickPanel {
    let mut cfg = ExperimentConfig::new(ExperimentKind::Simulate, p, n);
    cfg.clock = ClockSpec::shifted_poisson(5.0);
    cfg.noise = NoiseSpec::iid(0.0002);
    simulate_config(&cfg, 7).expect("simulation").panel
}

fn tick_estimators(c: &mut Criterion) {
    let mut group = c.benchmark_group("tick");
    for (p, n) in [(30, 390), (100, 390), (100, 2340)] {
        let panel = panel(p, n);
        let avgs = stamp_average(&panel);
        let id = format!("p{p}_n{n}");
        group.bench_with_input(BenchmarkId::new("stamp_average", &id), &panel, |b, panel| {
            b.iter(|| stamp_average(black_box(panel)))
        });
        group.bench_with_input(BenchmarkId::new("atva", &id), &avgs, |b, avgs| b.iter(|| atva(black_box(avgs)).unwrap()));
        let h = default_window(n, 1.0, 0.55);
        group.bench_with_input(BenchmarkId::new("pa_atva", &id), &avgs, |b, avgs| {
            b.iter(|| pa_atva_averages(black_box(avgs), h).unwrap())
        });
    }
    group.finish();
}

fn shrinkage(c: &mut Criterion) {
    let mut group = c.benchmark_group("shrinkage");
    group.sample_size(10);
    let (p, n) = (30, 2340);
    let avgs = stamp_average(&panel(p, n));
    let h = default_window(n, 1.0, 0.55);
    let series = pre_average(&avgs, h).unwrap();
    let theta = theta_hat(&series);
    group.bench_function("ans_b20", |b| {
        b.iter(|| ans(black_box(&series), theta, &AnsOptions { b: 20, seed: 1, candidates: None }).unwrap())
    });
    let decomp = SpectralDecomp::new(&self_normalized(&series).unwrap()).unwrap();
    let k_n = spot_window(n, 0.75);
    group.bench_function("mns", |b| b.iter(|| mns(black_box(&decomp), &avgs, k_n, 0.75).unwrap()));
    group.finish();
}

criterion_group!(benches, tick_estimators, shrinkage);
criterion_main!(benches);
