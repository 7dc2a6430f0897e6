use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use nchodge_core::fermat::{b_set_with, BSetOptions};
use nchodge_core::mfcat::TensorSign;
use nchodge_core::milnor::{MilnorAlgebra, MilnorLimits};
use nchodge_core::par::Execution;
use nchodge_core::poly_parse;
use nchodge_core::verify::{run_verify, Scope, VerifyOptions};

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn fermat_b_set(c: &mut Criterion) {
    let mut g = c.benchmark_group("b_set");
    for (m, n) in [(6, 2), (12, 2), (7, 4)] {
        for (name, exec) in MODES {
            let opts = BSetOptions { exec, prime_shortcut: false };
            g.bench_with_input(BenchmarkId::new(name, format!("m{m}n{n}")), &(m, n), |b, &(m, n)| {
                b.iter(|| b_set_with(black_box(m), n, opts).unwrap())
            });
        }
    }
    g.finish();
}

fn milnor(c: &mut Criterion) {
    let mut g = c.benchmark_group("milnor");
    g.sample_size(10);
    for (e, n) in [(4u32, 2u32), (5, 2), (3, 4)] {
        let terms: Vec<String> = (0..n + 2).map(|i| format!("x{i}^{e}")).collect();
        let f = poly_parse(&terms.join("+"), n as usize + 2).unwrap();
        for (name, exec) in MODES {
            g.bench_with_input(BenchmarkId::new(name, format!("e{e}n{n}")), &f, |b, f| {
                b.iter(|| MilnorAlgebra::with_limits(f.clone(), n, MilnorLimits::default(), exec).unwrap())
            });
        }
    }
    g.finish();
}

fn verify(c: &mut Criterion) {
    let mut g = c.benchmark_group("verify");
    g.sample_size(10);
    for (name, exec) in MODES {
        let opts = VerifyOptions { exec, tensor_sign: TensorSign::Standard };
        g.bench_function(name, |b| b.iter(|| run_verify(Scope::All, opts)));
    }
    g.finish();
}

criterion_group!(benches, fermat_b_set, milnor, verify);
criterion_main!(benches);
