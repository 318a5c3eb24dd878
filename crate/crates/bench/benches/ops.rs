use criterion::{black_box, criterion_group, criterion_main, BatchSize, BenchmarkId, Criterion};
use rand::seq::SliceRandom;
use ziptree::{RankPolicy, RngState, Strategy, ZipTree};

const SIZES: [usize; 3] = [1 << 10, 1 << 14, 1 << 17];
const STRATEGIES: [(Strategy, &str); 2] = [(Strategy::Recursive, "rec"), (Strategy::Iterative, "iter")];

fn shuffled(n: usize, seed: u64) -> Vec<u64> {
    let mut keys: Vec<u64> = (0..n as u64).collect();
    keys.shuffle(&mut RngState::new(seed));
    keys
}

fn build(keys: &[u64], strategy: Strategy) -> ZipTree<u64, ()> {
    let mut t = ZipTree::new(RankPolicy::stored(1));
    for &k in keys {
        t.insert_with(k, (), strategy).unwrap();
    }
    t
}

fn insert(c: &mut Criterion) {
    let mut g = c.benchmark_group("insert_all");
    g.sample_size(10);
    for n in SIZES {
        let keys = shuffled(n, 2);
        for (s, name) in STRATEGIES {
            g.bench_with_input(BenchmarkId::new(name, n), &keys, |b, keys| b.iter(|| build(keys, s)));
        }
    }
    g.finish();
}

fn delete(c: &mut Criterion) {
    let mut g = c.benchmark_group("delete_all");
    g.sample_size(10);
    for n in SIZES {
        let keys = shuffled(n, 3);
        let order = shuffled(n, 4);
        for (s, name) in STRATEGIES {
            g.bench_with_input(BenchmarkId::new(name, n), &order, |b, order| {
                b.iter_batched(
                    || build(&keys, s),
                    |mut t| {
                        for k in order {
                            t.delete_with(k, s);
                        }
                        t
                    },
                    BatchSize::LargeInput,
                )
            });
        }
    }
    g.finish();
}

fn search(c: &mut Criterion) {
    let mut g = c.benchmark_group("search");
    for n in SIZES {
        let t = build(&shuffled(n, 5), Strategy::Iterative);
        let probes = shuffled(n, 6);
        g.bench_with_input(BenchmarkId::from_parameter(n), &probes, |b, probes| {
            let mut i = 0;
            b.iter(|| {
                i = (i + 1) % probes.len();
                black_box(t.search(&probes[i]).nodes_visited)
            })
        });
    }
    g.finish();
}

criterion_group!(benches, insert, delete, search);
criterion_main!(benches);
