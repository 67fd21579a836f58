use criterion::{black_box, criterion_group, criterion_main, Criterion};
use nilgenus::{GroupElement, ParamTuple, PcPresentation};
use num_bigint::BigInt;

fn bench_collection(c: &mut Criterion) {
    let cases = [
        ("2,1,1", ParamTuple::t211(5, 5, 1)),
        ("3,1,1", ParamTuple::t311(3, 4, 6, 1, 1)),
        ("2,1,1,1", ParamTuple::t2111(6, 4, 2, 4, 3, 1, 5)),
        ("2,1,2", ParamTuple::t212(6, 2, 4, 1, 3)),
    ];
    for (name, t) in cases {
        let pres = PcPresentation::from_params(&t).unwrap();
        let n = pres.n();
        let x = GroupElement::from_i64(&[123_456, -98_765, 4_321, -1_000, 77][..n]);
        let y = GroupElement::from_i64(&[-654_321, 13_579, -2_468, 999, -5][..n]);
        c.bench_function(&format!("multiply {name}"), |b| {
            b.iter(|| pres.multiply(black_box(&x), black_box(&y)).unwrap())
        });
        c.bench_function(&format!("inverse {name}"), |b| b.iter(|| pres.inverse(black_box(&x)).unwrap()));
        let e = BigInt::from(1_000_003);
        c.bench_function(&format!("power {name}"), |b| b.iter(|| pres.power(black_box(&x), &e).unwrap()));
    }
}

criterion_group!(benches, bench_collection);
criterion_main!(benches);
