use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use smallcovers::{build_regular, enumerate, Alphabet, PolytopeKind, SearchOptions, SymmetryGroup};
use smallcovers_bench::{cell120, dodecahedron};

fn build(c: &mut Criterion) {
    let mut group = c.benchmark_group("build");
    group.sample_size(10);
    for kind in [PolytopeKind::Dodecahedron, PolytopeKind::Cell120] {
        group.bench_function(kind.name(), |b| {
            b.iter(|| build_regular(black_box(kind)).unwrap())
        });
    }
    group.finish();
}

fn dodecahedron_search(c: &mut Criterion) {
    let p = &dodecahedron().polytope;
    let alphabet = Alphabet::full(3).unwrap();
    let mut group = c.benchmark_group("dodecahedron");
    for depth in [0, 2, 4] {
        let options = SearchOptions {
            split_depth: depth,
            ..Default::default()
        };
        group.bench_with_input(
            BenchmarkId::new("enumerate", depth),
            &options,
            |b, &options| b.iter(|| enumerate(p, &alphabet, options).unwrap()),
        );
    }
    let labelings = enumerate(p, &alphabet, SearchOptions::default())
        .unwrap()
        .labelings;
    let symmetries = SymmetryGroup::new(p, dodecahedron().position_generators(), 1000).unwrap();
    group.bench_function("classify", |b| {
        b.iter(|| symmetries.classify(black_box(&labelings)).unwrap())
    });
    group.finish();
}

fn cell120_search(c: &mut Criterion) {
    let p = &cell120().polytope;
    let mut group = c.benchmark_group("120cell");
    for values in [[1, 2, 4, 8, 15], [1, 2, 4, 8, 7]] {
        let alphabet = Alphabet::new(&values, 4).unwrap();
        for depth in [0, 4] {
            let options = SearchOptions {
                split_depth: depth,
                ..Default::default()
            };
            let id = BenchmarkId::new(format!("enumerate/{}", alphabet.to_csv()), depth);
            group.bench_with_input(id, &options, |b, &options| {
                b.iter(|| enumerate(p, &alphabet, options).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, build, dodecahedron_search, cell120_search);
criterion_main!(benches);
