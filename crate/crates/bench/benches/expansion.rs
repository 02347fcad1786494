use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use liexp_core::expansion::{h_reduce, s_expand};
use liexp_core::invariant_tensor::{ads_epsilon, alpha_symbols, lift_h, verify_invariance};
use liexp_core::lie_algebra::make_named;
use liexp_core::semigroup::make_cyclic;

fn reduction(c: &mut Criterion) {
    let ads5 = make_named("ads5").unwrap();
    let mut g = c.benchmark_group("h_reduce_ads5");
    for n in [1, 2, 4] {
        g.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| b.iter(|| h_reduce(n, black_box(&ads5)).unwrap()));
    }
    g.finish();
    let z4 = make_cyclic(4).unwrap();
    c.bench_function("s_expand_z4_ads5", |b| b.iter(|| s_expand(&z4, black_box(&ads5))));
}

fn axioms(c: &mut Criterion) {
    let h = h_reduce(2, &make_named("ads5").unwrap()).unwrap();
    c.bench_function("check_axioms_c5", |b| b.iter(|| black_box(&h).check_axioms()));
}

fn tensors(c: &mut Criterion) {
    let ads5 = make_named("ads5").unwrap();
    let h = h_reduce(2, &ads5).unwrap();
    let t = lift_h(2, &ads_epsilon(&ads5).unwrap(), &alpha_symbols(4)).unwrap();
    c.bench_function("verify_invariance_c5", |b| b.iter(|| verify_invariance(&h, black_box(&t))));
}

criterion_group!(benches, reduction, axioms, tensors);
criterion_main!(benches);
