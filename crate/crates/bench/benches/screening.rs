use std::hint::black_box;
use std::path::PathBuf;

use criterion::{criterion_group, criterion_main, Criterion};
use qembed_core::screening::{
    downfold, host_active_space, screened_interaction, static_polarizability, HostSpec,
};
use qembed_core::{DoubleCounting, ModelHost};

fn host8() -> ModelHost {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/host8.toml");
    ModelHost::from_spec(&HostSpec::load(path).unwrap()).unwrap()
}

fn chi(c: &mut Criterion) {
    let host = host8();
    let active = host_active_space(&host, &[3, 4]).unwrap();
    c.bench_function("chi host8", |b| {
        b.iter(|| static_polarizability(black_box(&host), Some(&active)).unwrap())
    });
    let chi = static_polarizability(&host, Some(&active)).unwrap();
    c.bench_function("screened interaction host8", |b| {
        b.iter(|| screened_interaction(black_box(host.v_bare()), &chi).unwrap())
    });
}

fn full_downfold(c: &mut Criterion) {
    let host = host8();
    let active = host_active_space(&host, &[3, 4]).unwrap();
    c.bench_function("downfold host8", |b| {
        b.iter(|| downfold(black_box(&host), &active, DoubleCounting::Hf, true).unwrap())
    });
    c.bench_function("scf host8", |b| b.iter(host8));
}

criterion_group!(benches, chi, full_downfold);
criterion_main!(benches);
