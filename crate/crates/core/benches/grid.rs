use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use num_complex::Complex64;
use std::hint::black_box;

use spectra_core::angular::QChain;
use spectra_core::orthopoly::JacobiParams;
use spectra_core::par::{map_with, Exec};
use spectra_core::radial::{coulomb_scattering_radial, Branch, ScatteringOptions};
use spectra_core::recursion::{greens_function, linspace, TabulatedChain, TerminatorParams};

fn modes() -> Vec<(&'static str, Exec)> {
    let mut v = vec![("sequential", Exec::Sequential)];
    if spectra_core::par::parallel_available() {
        v.push(("parallel", Exec::Parallel));
    }
    v
}

fn resolvent_grid(c: &mut Criterion) {
    let q = QChain {
        tau_sq: 1.0,
        params: JacobiParams::new(1.0, 1.5).unwrap(),
    };
    let chain = TabulatedChain::from_chain(&q, 51);
    let t = TerminatorParams::local(&chain, 50);
    let grid = linspace(-5.0, 80.0, 4000);
    let mut group = c.benchmark_group("resolvent_grid");
    for (label, exec) in modes() {
        group.bench_with_input(BenchmarkId::from_parameter(label), &exec, |b, &exec| {
            b.iter(|| {
                map_with(exec, &grid, |&z| {
                    greens_function(&chain, Complex64::new(z, 1e-3), 50, Some(t)).map(|g| g.im)
                })
            })
        });
    }
    group.finish();
}

fn scattering_grid(c: &mut Criterion) {
    let radii = linspace(0.05, 20.0, 400);
    let opts = ScatteringOptions::default();
    let mut group = c.benchmark_group("scattering_grid");
    for (label, exec) in modes() {
        group.bench_with_input(BenchmarkId::from_parameter(label), &exec, |b, &exec| {
            b.iter(|| {
                map_with(exec, &radii, |&r| {
                    coulomb_scattering_radial(0.5, 1.0, Branch::Plus, 1.5, -1.0, black_box(r), opts).map(|v| v.value)
                })
            })
        });
    }
    group.finish();
}

criterion_group!(benches, resolvent_grid, scattering_grid);
criterion_main!(benches);
