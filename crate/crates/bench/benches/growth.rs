use criterion::{criterion_group, criterion_main, Criterion};

use sushch_core::growth::{ball, eta, Budget};
use sushch_core::sushchansky::{preset, OrderType, PresetName, SushchanskyAutomaton};
use sushch_core::Alphabet;

fn growth(c: &mut Criterion) {
    let aut = SushchanskyAutomaton::build(&OrderType::lex(Alphabet::new(3).unwrap()));
    let mut group = c.benchmark_group("ball");
    group.sample_size(10);
    for name in [PresetName::GLambda, PresetName::H] {
        let g = preset(&aut, name).unwrap();
        group.bench_function(format!("{name} radius 4"), |b| {
            b.iter(|| ball(&g.generators, 4, Budget::unlimited()).elements.len())
        });
    }
    group.finish();
    c.bench_function("eta r=9", |b| b.iter(|| eta(9).unwrap()));
}

criterion_group!(benches, growth);
criterion_main!(benches);
