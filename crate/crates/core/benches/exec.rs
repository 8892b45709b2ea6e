use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use paretobin::dib::{dib_sweep, DibConfig};
use paretobin::frontier::{corners_with, sample_binnings_with, sweep_frontier, SweepOptions};
use paretobin::pipeline::{fine_bin_with, sort_bins, uniformize};
use paretobin::{ClassConditionalModel, Exec, MicroBinModel};

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn toy(n: usize) -> MicroBinModel {
    sort_bins(&fine_bin_with(&uniformize(&ClassConditionalModel::toy()), n, Exec::Sequential).unwrap())
}

fn bench(c: &mut Criterion) {
    let model = uniformize(&ClassConditionalModel::toy());
    let bins = toy(2000);

    let mut g = c.benchmark_group("fine_bin_2000");
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| fine_bin_with(black_box(&model), 2000, exec).unwrap())
        });
    }
    g.finish();

    let mut g = c.benchmark_group("corners_8");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| corners_with(black_box(&bins), 8, exec).unwrap())
        });
    }
    g.finish();

    let mut g = c.benchmark_group("sample_6000_m5");
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| sample_binnings_with(black_box(&bins), 5, 6000, 0, exec).unwrap())
        });
    }
    g.finish();

    let mut g = c.benchmark_group("sweep");
    g.sample_size(10);
    for (name, exec) in MODES {
        let opts = SweepOptions { exec, ..SweepOptions::default() };
        g.bench_function(BenchmarkId::from_parameter(name), |b| b.iter(|| sweep_frontier(black_box(&bins), &opts).unwrap()));
    }
    g.finish();

    let small = toy(200);
    let mut g = c.benchmark_group("dib_20_betas");
    g.sample_size(10);
    for (name, exec) in MODES {
        let cfg = DibConfig { steps: 20, restarts: 4, exec, ..DibConfig::default() };
        g.bench_function(BenchmarkId::from_parameter(name), |b| b.iter(|| dib_sweep(black_box(&small), &cfg).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, bench);
criterion_main!(benches);
