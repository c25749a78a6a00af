use std::sync::Arc;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use jumpmc_bench::{level_params, partition, solver};
use jumpmc_core::config::Discretization;
use jumpmc_core::fem::{assemble, backward_euler, build_mesh, interpolate_initial};
use jumpmc_core::RandomStream;

fn field_sampling(c: &mut Criterion) {
    let solver = solver();
    let mut group = c.benchmark_group("field_sample");
    for level in [0usize, 2, 4] {
        let eps = level_params(Discretization::Adapted, level).eps;
        let embedding = solver.embedding(eps).unwrap();
        let stream = RandomStream::from_seed(1);
        group.bench_with_input(BenchmarkId::from_parameter(level), &level, |b, _| {
            b.iter(|| embedding.sample(&stream))
        });
    }
    group.finish();
}

fn adapted_meshing(c: &mut Criterion) {
    let p = partition(3);
    let mut group = c.benchmark_group("adapted_mesh");
    for level in [0usize, 3, 5] {
        let h = level_params(Discretization::Adapted, level).h_bar;
        group.bench_with_input(BenchmarkId::from_parameter(level), &h, |b, &h| {
            b.iter(|| build_mesh(Discretization::Adapted, &p, h).unwrap())
        });
    }
    group.finish();
}

fn assemble_and_step(c: &mut Criterion) {
    let solver = solver();
    let problem = solver.problem().clone();
    let mut group = c.benchmark_group("assemble_and_step");
    group.sample_size(20);
    for level in [0usize, 2] {
        let params = level_params(Discretization::Adapted, level);
        let sample = solver.draw(params.eps, &RandomStream::from_seed(5)).unwrap();
        let mesh = Arc::new(build_mesh(Discretization::Adapted, sample.partition(), params.h_bar).unwrap());
        group.bench_with_input(BenchmarkId::new("assemble", level), &level, |b, _| {
            b.iter(|| assemble(Arc::clone(&mesh), &sample, &problem.f).unwrap())
        });
        let system = assemble(Arc::clone(&mesh), &sample, &problem.f).unwrap();
        let c0 = interpolate_initial(&system, &problem.u0);
        group.bench_with_input(BenchmarkId::new("backward_euler", level), &level, |b, _| {
            b.iter(|| backward_euler(&system, &c0, problem.t_final, params.dt).unwrap())
        });
    }
    group.finish();
}

fn full_path(c: &mut Criterion) {
    let solver = solver();
    let mut group = c.benchmark_group("path");
    group.sample_size(20);
    for method in [Discretization::Adapted, Discretization::Nonadapted] {
        let params = level_params(method, 0);
        let stream = RandomStream::from_seed(9);
        group.bench_function(BenchmarkId::new(method.to_string(), 0), |b| {
            b.iter(|| solver.solve_levels(&[params], method, &stream).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, field_sampling, adapted_meshing, assemble_and_step, full_path);
criterion_main!(benches);
