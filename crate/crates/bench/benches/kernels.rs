use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use hypolib::behavior::{hl_maximal, HL_SAMPLES};
use hypolib::classical::d_coefficient;
use hypolib::polyspherical::{phi_closed_form, phi_n};
use hypolib::spectral::polyharmonic_kernel;
use hypolib::transforms::{Density, TransformContext};
use hypolib::{BoundaryPoint, Complex64, DiskPoint, RadialFrame, SpectralParam};

fn kernel_eval(c: &mut Criterion) {
    let s = SpectralParam::new(Complex64::new(1.0, 1.0));
    let z = DiskPoint::from_polar(0.9, 0.3).unwrap();
    let xi = BoundaryPoint::new(0.1);
    let mut g = c.benchmark_group("polyharmonic_kernel");
    for n in [0usize, 2, 6] {
        g.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| polyharmonic_kernel(black_box(n), black_box(z), xi, &s))
        });
    }
    g.finish();
}

fn spherical(c: &mut Criterion) {
    let s = SpectralParam::new(Complex64::new(0.0, 1.0));
    let mut g = c.benchmark_group("spherical_function");
    for r in [0.5, 0.99, 0.9999] {
        g.bench_with_input(BenchmarkId::new("quadrature", r), &r, |b, &r| b.iter(|| phi_n(0, black_box(r), &s)));
        g.bench_with_input(BenchmarkId::new("closed_form", r), &r, |b, &r| {
            b.iter(|| phi_closed_form(black_box(r), &s))
        });
    }
    g.finish();
}

fn transform(c: &mut Criterion) {
    let ctx = TransformContext::new(1, SpectralParam::real(0.0)).unwrap();
    let g = Density::Indicator { center: 0.0, half_width: 0.5 };
    let frame = RadialFrame::from_r(0.999);
    c.bench_function("density_transform_r0.999", |b| b.iter(|| ctx.density_value(&g, &frame, black_box(0.2))));
}

fn maximal(c: &mut Criterion) {
    let table = Density::Sawtooth.sample_table(HL_SAMPLES);
    c.bench_function("hl_maximal_4096", |b| b.iter(|| hl_maximal(&table, black_box(BoundaryPoint::new(1.0)))));
}

fn d_coefficients(c: &mut Criterion) {
    let mut g = c.benchmark_group("d_coefficient");
    for r in [0.5, 0.999] {
        g.bench_with_input(BenchmarkId::from_parameter(r), &r, |b, &r| b.iter(|| d_coefficient(black_box(25), r)));
    }
    g.finish();
}

criterion_group!(benches, kernel_eval, spherical, transform, maximal, d_coefficients);
criterion_main!(benches);
