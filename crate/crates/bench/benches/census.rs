use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use coreset::census::{
    full_core_sweep_f2, mixed_union_census, noncore_count_bruteforce, noncore_count_clique, UnionMode,
};
use coreset::classes::all_classes;
use coreset::nullideal::is_core;
use coreset::{FPoly, FieldSpec, Mat2, PolyKind};

fn field(q: u64) -> FieldSpec {
    FieldSpec::from_order(q).unwrap()
}

fn kernel(c: &mut Criterion) {
    let mut group = c.benchmark_group("is_core");
    let f3 = field(3);
    let pair = [Mat2::new(1, 0, 0, 0), Mat2::new(1, 1, 0, 0)];
    group.bench_function("F3 pair", |b| b.iter(|| is_core(&f3, black_box(&pair))));
    let f16 = field(16);
    let mixed: Vec<Mat2> = Mat2::all(&f16).step_by(4099).take(12).collect();
    group.bench_function("F16 twelve matrices", |b| b.iter(|| is_core(&f16, black_box(&mixed))));
    group.finish();
}

fn enumeration(c: &mut Criterion) {
    let mut group = c.benchmark_group("enumeration");
    group.sample_size(10);
    group.bench_function("full sweep of M2(F2)", |b| b.iter(full_core_sweep_f2));
    for q in [3, 4] {
        let f = field(q);
        let sqd = all_classes(&f)
            .unwrap()
            .into_iter()
            .find(|c| c.kind == PolyKind::Sqd)
            .unwrap();
        group.bench_function(format!("brute force SQD F{q}"), |b| {
            b.iter(|| noncore_count_bruteforce(&f, black_box(&sqd)).unwrap())
        });
        group.bench_function(format!("clique structure SQD F{q}"), |b| {
            b.iter(|| noncore_count_clique(&f, black_box(&sqd)).unwrap())
        });
    }
    group.finish();
}

fn unions(c: &mut Criterion) {
    let mut group = c.benchmark_group("union");
    group.sample_size(10);
    let f3 = field(3);
    let classes = all_classes(&f3).unwrap();
    let ids: Vec<usize> = [
        FPoly::from_roots(&f3, &[0, 0]),
        FPoly::from_roots(&f3, &[0, 1]),
        FPoly::from_roots(&f3, &[1, 2]),
    ]
    .iter()
    .map(|m| classes.iter().position(|c| c.m == *m).unwrap())
    .collect();
    for (name, mode) in [
        ("structural", UnionMode::Structural),
        ("exhaustive", UnionMode::Exhaustive),
    ] {
        group.bench_function(format!("SQR and two SQD over F3, {name}"), |b| {
            b.iter(|| mixed_union_census(&f3, black_box(&ids), mode).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, kernel, enumeration, unions);
criterion_main!(benches);
