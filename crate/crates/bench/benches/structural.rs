use criterion::{criterion_group, criterion_main, BatchSize, BenchmarkId, Criterion};
use ziptree::{catenate, split, RankPolicy, ZipTree};

const SIZES: [usize; 3] = [1 << 10, 1 << 14, 1 << 17];

fn build(n: usize) -> ZipTree<u64, ()> {
    let mut t = ZipTree::new(RankPolicy::stored(7));
    for k in 0..n as u64 {
        t.insert(k, ()).unwrap();
    }
    t
}

fn split_middle(c: &mut Criterion) {
    let mut g = c.benchmark_group("split_middle");
    for n in SIZES {
        let t = build(n);
        let at = n as u64 / 2;
        g.bench_with_input(BenchmarkId::from_parameter(n), &at, |b, at| {
            b.iter_batched(|| t.clone(), |t| split(t, at), BatchSize::LargeInput)
        });
    }
    g.finish();
}

fn catenate_halves(c: &mut Criterion) {
    let mut g = c.benchmark_group("catenate_halves");
    for n in SIZES {
        let (low, high) = split(build(n), &(n as u64 / 2));
        g.bench_function(BenchmarkId::from_parameter(n), |b| {
            b.iter_batched(
                || (low.clone(), high.clone()),
                |(mut l, mut h)| catenate(&mut l, &mut h).unwrap(),
                BatchSize::LargeInput,
            )
        });
    }
    g.finish();
}

criterion_group!(benches, split_middle, catenate_halves);
criterion_main!(benches);
