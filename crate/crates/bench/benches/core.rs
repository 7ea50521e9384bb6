use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use gsc_core::ball::cayley_ball;
use gsc_core::codec::parse_presentation;
use gsc_core::covers::z2_homology_cover;
use gsc_core::quotients::{search_quotient, SearchBudget};
use gsc_core::smallcancel::check_cprime;
use gsc_core::{DehnEngine, GraphicalPresentation};

fn corpus(name: &str) -> GraphicalPresentation {
    let path = format!("{}/../../corpus/{name}", env!("CARGO_MANIFEST_DIR"));
    parse_presentation(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn bench(c: &mut Criterion) {
    let triangle = corpus("triangle.json");
    let long = corpus("long-cycles.json");
    let engine = DehnEngine::new(&triangle).unwrap();
    let alphabet = triangle.alphabet();
    let word = alphabet.parse_word("abcabca'b'c'abcabcc'b'a'").unwrap();

    c.bench_function("check_cprime/long-cycles", |b| b.iter(|| check_cprime(black_box(&long)).unwrap()));
    c.bench_function("z2_cover/long-cycles", |b| {
        b.iter(|| z2_homology_cover(black_box(&long.components()[0])).unwrap())
    });
    c.bench_function("dehn/is_trivial", |b| b.iter(|| engine.is_trivial(black_box(&word))));
    c.bench_function("ball/triangle-r6", |b| b.iter(|| cayley_ball(&engine, 6, 1_000_000)));
    c.bench_function("quotient/triangle-n6", |b| {
        b.iter(|| search_quotient(black_box(&triangle), 6, 1, SearchBudget::default()).unwrap())
    });
}

criterion_group!(benches, bench);
criterion_main!(benches);
