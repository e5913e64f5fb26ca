use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use qwom::construct::d1bca_to_ioc;
use qwom::random::{decorate_wom, random_pfa, seeded};
use qwom::sim::{ClassicalSimulator, Simulator};
use qwom::{parse_machine, serialize_machine, zoo};

fn quantum(c: &mut Criterion) {
    let mut g = c.benchmark_group("quantum");
    let twin = zoo::twin();
    let sim = Simulator::new(&twin).unwrap();
    for n in [8, 32, 128] {
        let half = "ab".repeat(n / 2);
        let word = twin.tokenize(&format!("{half}c{half}")).unwrap();
        g.bench_with_input(BenchmarkId::new("twin", n), &word, |b, w| b.iter(|| sim.run(black_box(w)).unwrap()));
    }
    let ioc = d1bca_to_ioc(&zoo::eq_k(1), 3).unwrap().spec;
    let sim = Simulator::new(&ioc).unwrap();
    for n in [4, 8, 16] {
        let word = ioc.tokenize(&format!("{}{}", "a".repeat(n), "b".repeat(n))).unwrap();
        g.bench_with_input(BenchmarkId::new("d1bca-ioc", 2 * n), &word, |b, w| b.iter(|| sim.run(black_box(w)).unwrap()));
    }
    g.finish();
}

fn classical(c: &mut Criterion) {
    let mut rng = seeded(1);
    let pfa = random_pfa(&mut rng, 6, &["a", "b"]);
    let wom = decorate_wom(&pfa, &mut rng);
    // tape contents multiply the support, so keep the word short
    let word = pfa.tokenize(&"ab".repeat(4)).unwrap();
    let mut g = c.benchmark_group("classical");
    for (name, spec) in [("pfa", &pfa), ("pfa-wom", &wom)] {
        let sim = ClassicalSimulator::new(spec).unwrap();
        g.bench_function(name, |b| b.iter(|| sim.run(black_box(&word)).unwrap()));
    }
    g.finish();
}

fn format(c: &mut Criterion) {
    let text = serialize_machine(&zoo::build_machine("rev-bins").unwrap());
    c.bench_function("parse rev-bins", |b| b.iter(|| parse_machine(black_box(&text)).unwrap()));
}

criterion_group!(benches, quantum, classical, format);
criterion_main!(benches);
