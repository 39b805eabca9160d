use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use pcoh::bang::{bang, kleisli_compose, promote_vec};
use pcoh::polytope::Polytope;
use pcoh::tensor::tensor;
use pcoh::StableFn;
use pcoh_bench::spaces;

fn vertex_enumeration(c: &mut Criterion) {
    let mut g = c.benchmark_group("vertex-enumeration");
    for n in [2, 3, 4] {
        let inputs = spaces(11, 8, n, 5);
        g.bench_with_input(BenchmarkId::from_parameter(n), &inputs, |b, ps| {
            b.iter(|| {
                for p in ps {
                    let h = Polytope::from_hrep(p.web().clone(), p.ball().canonical_hrep().to_vec()).unwrap();
                    black_box(h.canonical_vrep().len());
                }
            })
        });
    }
    g.finish();
}

fn polar(c: &mut Criterion) {
    let inputs = spaces(12, 8, 3, 5);
    c.bench_function("polar-3", |b| {
        b.iter(|| {
            for p in &inputs {
                black_box(p.ball().polar().unwrap());
            }
        })
    });
}

fn tensor_product(c: &mut Criterion) {
    let xs = spaces(13, 4, 2, 3);
    c.bench_function("tensor-2x2", |b| {
        b.iter(|| {
            for pair in xs.windows(2) {
                let t = tensor(&pair[0], &pair[1]).unwrap();
                black_box(t.ball().canonical_hrep().len());
            }
        })
    });
}

fn exponential(c: &mut Criterion) {
    let x = spaces(14, 1, 2, 3).remove(0);
    c.bench_function("bang-2-degree-4", |b| b.iter(|| black_box(bang(&x, 4).unwrap())));
    let one = pcoh::Pcs::one();
    let sq = StableFn::from_terms(one.clone(), one, 2, &[(vec![0, 0], 0, pcoh::rational::qi(1))]).unwrap();
    c.bench_function("kleisli-square-square", |b| b.iter(|| black_box(kleisli_compose(&sq, &sq).unwrap())));
    let v = x.ball().canonical_vrep()[0].clone();
    c.bench_function("promote-degree-6", |b| b.iter(|| black_box(promote_vec(&v, 6))));
}

criterion_group!(benches, vertex_enumeration, polar, tensor_product, exponential);
criterion_main!(benches);
