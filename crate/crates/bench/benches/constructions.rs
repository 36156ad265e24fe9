use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use grpd_core::fixtures::{group_gamma_fixtures, groupoid_corpus, twisted_fixtures};
use grpd_core::gamma::{hfp_map, swap_comparison};
use grpd_core::generate::{random_filtered_diagram, random_gamma_groupoid, random_weak_equivalence, seeded};
use grpd_core::{bg_hfp_decomposition, hfp, hfp_colimit_comparison, parameter_fibration};

fn fixed_points(c: &mut Criterion) {
    let mut rng = seeded(1);
    let actions: Vec<_> = (0..32).map(|_| random_gamma_groupoid(&mut rng, 60).value).collect();
    c.bench_function("hfp/random-60", |b| b.iter(|| actions.iter().map(|a| hfp(a).groupoid().obj_count()).sum::<usize>()));
    let corpus = groupoid_corpus();
    c.bench_function("swap/corpus", |b| {
        b.iter(|| corpus.iter().filter(|(_, x)| swap_comparison(x.clone()).weak_equivalence).count())
    });
}

fn equivalences(c: &mut Criterion) {
    let mut rng = seeded(2);
    let maps: Vec<_> = (0..32).map(|_| random_weak_equivalence(&mut rng).value).collect();
    c.bench_function("weq/check", |b| b.iter(|| maps.iter().filter(|f| f.map().is_weak_equivalence()).count()));
    c.bench_function("weq/hfp-map", |b| b.iter(|| maps.iter().filter(|f| hfp_map(f).map.is_weak_equivalence()).count()));
}

fn cohomology(c: &mut Criterion) {
    let groups = group_gamma_fixtures();
    c.bench_function("bg-decomposition/fixtures", |b| {
        b.iter(|| groups.iter().filter(|(_, a)| bg_hfp_decomposition(a).weak_equivalence).count())
    });
    let twisted = twisted_fixtures();
    c.bench_function("parameter/fixtures", |b| {
        b.iter(|| twisted.iter().filter(|(_, d)| parameter_fibration(d).verdict() == (true, true)).count())
    });
}

fn colimits(c: &mut Criterion) {
    c.bench_function("colimit/random-filtered", |b| {
        b.iter_batched(
            || {
                let mut rng = seeded(3);
                (0..16).map(|_| random_filtered_diagram(&mut rng).value).collect::<Vec<_>>()
            },
            |ds| ds.iter().filter(|d| hfp_colimit_comparison(d).map(|c| c.isomorphism).unwrap_or(false)).count(),
            BatchSize::SmallInput,
        )
    });
}

criterion_group!(benches, fixed_points, equivalences, cohomology, colimits);
criterion_main!(benches);
