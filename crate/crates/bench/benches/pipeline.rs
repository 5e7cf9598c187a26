use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use hammology::filtration::Filtration;
use hammology::matching::{bottleneck, d_new, DistanceOptions};
use hammology::persistence::compute_persistence;
use hammology::separation::{default_epsilon, separate, RadiusTable};
use hammology::Mode;
use hammology_bench::{random_bars, random_set, rng};

fn filtration(c: &mut Criterion) {
    let mut group = c.benchmark_group("filtration");
    for m in [4, 6, 8] {
        let set = random_set(&mut rng(m as u64), 4, 8, m);
        for mode in [Mode::Discrete, Mode::Generalized] {
            group.bench_with_input(BenchmarkId::new(format!("{mode:?}"), m), &set, |b, set| {
                b.iter(|| Filtration::build(black_box(set), mode).unwrap())
            });
        }
    }
    group.finish();
}

fn persistence(c: &mut Criterion) {
    let mut group = c.benchmark_group("persistence");
    for m in [6, 8, 10] {
        let set = random_set(&mut rng(m as u64), 4, 8, m);
        let f = Filtration::build(&set, Mode::Discrete).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(m), &f, |b, f| b.iter(|| compute_persistence(black_box(f))));
    }
    group.finish();
}

fn matching(c: &mut Criterion) {
    let mut group = c.benchmark_group("bottleneck");
    for count in [5, 20, 50] {
        let mut r = rng(count as u64);
        let (left, right) = (random_bars(&mut r, count, 8), random_bars(&mut r, count, 8));
        group.bench_with_input(BenchmarkId::from_parameter(count), &(left, right), |b, (l, r)| {
            b.iter(|| bottleneck(black_box(l), black_box(r)).unwrap())
        });
    }
    group.finish();
}

fn separation(c: &mut Criterion) {
    let mut group = c.benchmark_group("separate");
    group.sample_size(10);
    for m in [4, 5, 6] {
        let set = random_set(&mut rng(m as u64), 3, 5, m);
        let eps = default_epsilon(&RadiusTable::compute(&set).unwrap());
        group.bench_with_input(BenchmarkId::from_parameter(m), &set, |b, set| b.iter(|| separate(black_box(set), &eps).unwrap()));
    }
    group.finish();
}

fn distance(c: &mut Criterion) {
    let mut group = c.benchmark_group("d_new");
    group.sample_size(10);
    for m in [3, 4] {
        let mut r = rng(100 + m as u64);
        let (a, b) = (random_set(&mut r, 3, 5, m), random_set(&mut r, 3, 5, m));
        group.bench_with_input(BenchmarkId::from_parameter(m), &(a, b), |bench, (a, b)| {
            bench.iter(|| d_new(black_box(a), black_box(b), &DistanceOptions::default()).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, filtration, persistence, matching, separation, distance);
criterion_main!(benches);
