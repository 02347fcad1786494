use criterion::{criterion_group, criterion_main, Criterion};

use liexp_core::fixtures;
use liexp_core::pipeline::{run_algebra, run_lagrangian, run_tensor, LagrangianSpec};

fn lagrangian(c: &mut Criterion, name: &str) {
    let cfg = fixtures::pipeline(name).unwrap();
    let alg = run_algebra(&cfg, None).unwrap();
    let t = run_tensor(&alg, cfg.tensor.as_ref().unwrap()).unwrap().tensor;
    // comparisons are benchmarked separately from the form construction
    let spec = LagrangianSpec { comparisons: Vec::new(), ..cfg.lagrangian.clone().unwrap() };
    c.bench_function(&format!("chern_simons_{name}"), |b| b.iter(|| run_lagrangian(&alg, &t, &spec).unwrap()));
    let full = cfg.lagrangian.unwrap();
    c.bench_function(&format!("compare_{name}"), |b| b.iter(|| run_lagrangian(&alg, &t, &full).unwrap()));
}

fn forms(c: &mut Criterion) {
    lagrangian(c, "c3");
    lagrangian(c, "c5_lovelock");
}

fn heavy(c: &mut Criterion) {
    lagrangian(c, "c5");
}

criterion_group!(benches, forms);
criterion_group! {
    name = slow;
    config = Criterion::default().sample_size(10);
    targets = heavy
}
criterion_main!(benches, slow);
