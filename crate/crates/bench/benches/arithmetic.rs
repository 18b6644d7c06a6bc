use criterion::{black_box, criterion_group, criterion_main, Criterion};

use sushch_core::sushchansky::{OrderType, SushchanskyAutomaton};
use sushch_core::tableau::sushchansky_tableaux;
use sushch_core::{Alphabet, Element};

fn word(aut: &SushchanskyAutomaton, len: usize) -> Element {
    let (a, b) = (aut.a(), aut.b());
    (0..len).fold(aut.identity(), |acc, i| if i % 3 == 2 { &acc * &b.inverse() } else { &acc * [&a, &b][i % 2] })
}

fn arithmetic(c: &mut Criterion) {
    let lambda = OrderType::lex(Alphabet::new(3).unwrap());
    let aut = SushchanskyAutomaton::build(&lambda);
    let (x, y) = (word(&aut, 12), word(&aut, 9));
    c.bench_function("build A_uv p=3", |bch| bch.iter(|| SushchanskyAutomaton::build(black_box(&lambda))));
    c.bench_function("multiply + canonical", |bch| {
        bch.iter(|| {
            let z = black_box(&x) * black_box(&y);
            z.canonical().num_states()
        })
    });
    c.bench_function("inverse", |bch| bch.iter(|| black_box(&x).inverse()));
    c.bench_function("commutator is identity", |bch| {
        bch.iter(|| black_box(&x).commutator(black_box(&y)).is_identity())
    });
    c.bench_function("order of A", |bch| bch.iter(|| aut.a().order(black_box(3u64.pow(7))).unwrap()));
    let (ta, tb) = sushchansky_tableaux(&lambda, 6).unwrap();
    c.bench_function("tableau multiply depth 6", |bch| bch.iter(|| black_box(&ta).multiply(black_box(&tb)).unwrap()));
}

criterion_group!(benches, arithmetic);
criterion_main!(benches);
