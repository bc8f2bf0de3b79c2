//! Parallel vs sequential timings for the component-loop workloads: the full
//! derivation-product/Tachibana grid and single products.
//!
//! The parallel path runs on rayon when the crate is built with the default
//! `parallel` feature; rebuilding with `--no-default-features` makes both
//! sides sequential, which is the baseline to compare against.

use criterion::{criterion_group, criterion_main, Criterion};

use solcurv::classify::ProductGrid;
use solcurv::config::{Preset, RunConfig};
use solcurv::curvature::CurvatureSet;
use solcurv::metric::Metric;
use solcurv::products::{dot, dot_serial, tachibana, tachibana_serial};
use solcurv::report::Pipeline;

fn case_b() -> (Metric, CurvatureSet) {
    let cfg = RunConfig::preset(Preset::Sol3B, 1).unwrap();
    let p = Pipeline::new(cfg).unwrap();
    (p.metric, p.curvature)
}

fn bench_single_products(c: &mut Criterion) {
    let (m, cs) = case_b();
    let mut group = c.benchmark_group("dot_r_p");
    group.sample_size(20);
    group.bench_function("parallel", |bench| {
        bench.iter(|| dot(&cs.r, &cs.p, &m).unwrap())
    });
    group.bench_function("serial", |bench| {
        bench.iter(|| dot_serial(&cs.r, &cs.p, &m).unwrap())
    });
    group.finish();

    let mut group = c.benchmark_group("tachibana_ric_p");
    group.sample_size(20);
    group.bench_function("parallel", |bench| {
        bench.iter(|| tachibana(&cs.ric, &cs.p, &m).unwrap())
    });
    group.bench_function("serial", |bench| {
        bench.iter(|| tachibana_serial(&cs.ric, &cs.p, &m).unwrap())
    });
    group.finish();
}

fn bench_product_grid(c: &mut Criterion) {
    let (m, cs) = case_b();
    let mut group = c.benchmark_group("product_grid_35_tensors");
    group.sample_size(10);
    group.bench_function("parallel", |bench| {
        bench.iter(|| ProductGrid::compute(&cs, &m).unwrap())
    });
    group.bench_function("serial", |bench| {
        bench.iter(|| {
            let mut dots = Vec::new();
            for (_, e) in cs.family() {
                for (_, f) in cs.family() {
                    dots.push(dot_serial(e, f, &m).unwrap());
                }
            }
            let g = m.tensor();
            let mut qs = Vec::new();
            for z in [&g, &cs.ric] {
                for (_, f) in cs.family() {
                    qs.push(tachibana_serial(z, f, &m).unwrap());
                }
            }
            (dots, qs)
        })
    });
    group.finish();
}

fn bench_full_pipeline(c: &mut Criterion) {
    let mut group = c.benchmark_group("pipeline_sol3_b");
    group.sample_size(10);
    group.bench_function("build", |bench| {
        bench.iter(|| {
            let cfg = RunConfig::preset(Preset::Sol3B, -1).unwrap();
            Pipeline::new(cfg).unwrap()
        })
    });
    group.finish();
}

criterion_group!(
    benches,
    bench_single_products,
    bench_product_grid,
    bench_full_pipeline
);
criterion_main!(benches);
