use criterion::{criterion_group, criterion_main, Criterion};
use hedgehog_core::body::ConvexPolygon;
use hedgehog_core::convexity::is_convexity_point;
use hedgehog_core::hedgehog::{hedgehog_with_hull, hull_vertex_count};
use hedgehog_core::Rat2;

fn octagon() -> ConvexPolygon {
    let coords = [
        (6.8, 0.5),
        (2.54, 1.4),
        (1.04, 4.62),
        (1.8, 7.4),
        (8.24, 10.0),
        (12.9, 6.6),
        (12.7, 4.3),
        (10.66, 1.24),
    ];
    ConvexPolygon::new(
        coords
            .iter()
            .map(|&(x, y)| Rat2::from_f64s(x, y))
            .collect(),
    )
    .unwrap()
}

fn bench_hedgehog(c: &mut Criterion) {
    let p = octagon();
    c.bench_function("octagon hedgehog + hull", |b| {
        b.iter(|| hedgehog_with_hull(std::hint::black_box(&p)).unwrap())
    });
}

fn bench_hull_count(c: &mut Criterion) {
    let p = octagon();
    c.bench_function("octagon hull vertex count", |b| {
        b.iter(|| hull_vertex_count(std::hint::black_box(&p)).unwrap())
    });
}

fn bench_convexity_point(c: &mut Criterion) {
    let tri = ConvexPolygon::new(vec![
        Rat2::from_ints(0, 0),
        Rat2::from_ints(4, 0),
        Rat2::from_ints(0, 4),
    ])
    .unwrap();
    let z = Rat2::from_ints(2, 0);
    c.bench_function("triangle convexity point test", |b| {
        b.iter(|| is_convexity_point(std::hint::black_box(&tri), std::hint::black_box(&z)))
    });
}

criterion_group!(benches, bench_hedgehog, bench_hull_count, bench_convexity_point);
criterion_main!(benches);
