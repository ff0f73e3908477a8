use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use qembed_core::qubits::{map_folded, taper_parity, ParitySector};
use qembed_core::testing::random_integrals;
use qembed_core::Encoding;

fn encode(c: &mut Criterion) {
    let mut group = c.benchmark_group("map hamiltonian");
    for n in [2usize, 4, 6] {
        let ints = random_integrals(n, 11, 0.3);
        for encoding in [Encoding::JordanWigner, Encoding::Parity, Encoding::BravyiKitaev] {
            group.bench_with_input(BenchmarkId::new(encoding.short_name(), n), &n, |b, _| {
                b.iter(|| map_folded(black_box(&ints), encoding))
            });
        }
    }
    group.finish();
}

fn taper(c: &mut Criterion) {
    let op = map_folded(&random_integrals(4, 11, 0.3), Encoding::Parity);
    let sector = ParitySector::from_electrons(2, 2);
    c.bench_function("taper parity 8q", |b| b.iter(|| taper_parity(black_box(&op), sector).unwrap()));
}

criterion_group!(benches, encode, taper);
criterion_main!(benches);
