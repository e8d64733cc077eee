use std::hint::black_box;
use std::time::Duration;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use mfcev::cds::{self, SpreadGrid};
use mfcev::mc::{self, McConfig};
use mfcev::{CdsContract, Execution, ModelParams};

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn monte_carlo(c: &mut Criterion) {
    let params = ModelParams::desk(-2.0, 0.5, 0.8);
    let mut group = c.benchmark_group("simulate_fpt");
    group.sample_size(10).measurement_time(Duration::from_secs(10));
    for paths in [2_000usize, 20_000] {
        for (name, exec) in MODES {
            let cfg = McConfig::new(paths, 500, 2.0, 7).with_execution(exec);
            group.bench_with_input(BenchmarkId::new(name, paths), &cfg, |b, cfg| {
                b.iter(|| mc::simulate_fpt(black_box(&params), cfg).unwrap())
            });
        }
    }
    group.finish();
}

fn table(c: &mut Criterion) {
    let base = ModelParams::desk(0.0, 0.0, 0.8);
    let contract = CdsContract::new(1.0, 0.5);
    let grid = SpreadGrid::standard();
    let mut group = c.benchmark_group("spread_table");
    group.sample_size(20);
    for (name, exec) in MODES {
        group.bench_function(name, |b| {
            b.iter(|| cds::spread_table(black_box(&base), &contract, &grid, exec))
        });
    }
    group.finish();
}

criterion_group!(benches, monte_carlo, table);
criterion_main!(benches);
