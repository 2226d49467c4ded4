//! Gaussian elimination is where essentially all the runtime goes:
//! every hom space, Ext group and graded-piece quotient reduces to
//! `rref_in_place`. Benchmarked over GF(7) and over the rationals.

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use ncsym_core::matrix::Matrix;
use ncsym_core::scalar::PrimeField;

fn dense_matrix(k: PrimeField, rows: usize, cols: usize) -> Matrix {
    // fixed quadratic fill; enough to avoid early rank collapse
    Matrix::from_fn(k, rows, cols, |i, j| {
        k.from_i64((i * i + 3 * i * j + 7 * j + 1) as i64)
    })
}

fn bench_rref(c: &mut Criterion) {
    let mut group = c.benchmark_group("rref");
    for n in [32usize, 96, 192] {
        let a = dense_matrix(PrimeField::gf(7).unwrap(), n, n + n / 2);
        group.bench_function(format!("gf7_{n}x{}", n + n / 2), |b| {
            b.iter_batched(
                || a.clone(),
                |mut m| {
                    m.rref_in_place();
                    m
                },
                BatchSize::SmallInput,
            )
        });
    }
    for n in [16usize, 48] {
        let a = dense_matrix(PrimeField::rationals(), n, n + n / 2);
        group.bench_function(format!("q_{n}x{}", n + n / 2), |b| {
            b.iter_batched(
                || a.clone(),
                |mut m| {
                    m.rref_in_place();
                    m
                },
                BatchSize::SmallInput,
            )
        });
    }
    group.finish();
}

fn bench_kernel(c: &mut Criterion) {
    let a = dense_matrix(PrimeField::gf(7).unwrap(), 128, 192);
    c.bench_function("kernel_basis_gf7_128x192", |b| {
        b.iter(|| a.kernel_basis())
    });
}

criterion_group!(benches, bench_rref, bench_kernel);
criterion_main!(benches);
