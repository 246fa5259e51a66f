use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use qsearch_core::diffusion::{inversion_about_average, partial_inversion_about_average};
use qsearch_core::{CostLedger, QubitSet, StateVector};
use std::hint::black_box;

const SIZES: [usize; 3] = [12, 16, 20];

fn bench_hadamard(c: &mut Criterion) {
    let mut group = c.benchmark_group("hadamard");
    for &n in &SIZES {
        group.throughput(Throughput::Elements(1 << n));
        let mut state = StateVector::uniform(n).unwrap();
        for qubit in [0, n - 1] {
            group.bench_with_input(BenchmarkId::new(format!("q{qubit}"), n), &qubit, |b, &q| {
                b.iter(|| state.apply_hadamard(black_box(q)).unwrap())
            });
        }
    }
    group.finish();
}

fn bench_walsh_hadamard(c: &mut Criterion) {
    let mut group = c.benchmark_group("walsh_hadamard");
    for &n in &SIZES {
        group.throughput(Throughput::Elements((1u64 << n) * n as u64));
        let full = QubitSet::full(n).unwrap();
        let mut state = StateVector::uniform(n).unwrap();
        group.bench_function(BenchmarkId::new("blocked", n), |b| {
            b.iter(|| state.apply_walsh_hadamard(black_box(&full)).unwrap())
        });
        group.bench_function(BenchmarkId::new("per_qubit", n), |b| {
            b.iter(|| {
                for q in 0..n {
                    state.apply_hadamard(q).unwrap();
                }
            })
        });
    }
    group.finish();
}

fn bench_inversions(c: &mut Criterion) {
    let mut group = c.benchmark_group("inversion_about_average");
    for &n in &SIZES {
        group.throughput(Throughput::Elements(1 << n));
        let mut state = StateVector::uniform(n).unwrap();
        let mut ledger = CostLedger::default();
        group.bench_function(BenchmarkId::new("full", n), |b| {
            b.iter(|| inversion_about_average(&mut state, &mut ledger).unwrap())
        });
        let low = QubitSet::range(0..n / 2).unwrap();
        let high = QubitSet::range(n / 2..n).unwrap();
        let strided = QubitSet::new((0..n).step_by(2)).unwrap();
        for (name, set) in [
            ("low_half", &low),
            ("high_half", &high),
            ("even_qubits", &strided),
        ] {
            group.bench_function(BenchmarkId::new(name, n), |b| {
                b.iter(|| partial_inversion_about_average(&mut state, set, &mut ledger).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(
    benches,
    bench_hadamard,
    bench_walsh_hadamard,
    bench_inversions
);
criterion_main!(benches);
