use statrs::distribution::{ChiSquared, ContinuousCDF};
use ziptree::{draw_rank, rank_of_key, RankPolicy, RngState};

const DRAWS: usize = 1_000_000;

/// Upper-tail probability of Pearson's statistic for `counts` against
/// `probs` (which must sum to 1).
fn chi_square_p_value(counts: &[u64], probs: &[f64]) -> f64 {
    let total: u64 = counts.iter().sum();
    let stat: f64 = counts
        .iter()
        .zip(probs)
        .map(|(&c, &p)| {
            let e = p * total as f64;
            (c as f64 - e).powi(2) / e
        })
        .sum();
    1.0 - ChiSquared::new((counts.len() - 1) as f64).unwrap().cdf(stat)
}

/// Geometric bins `0..cut` plus a tail bin, cut where the expected count
/// drops below 50.
fn geometric_bins(p: f64, draws: usize) -> (usize, Vec<f64>) {
    let mut cut = 0;
    while draws as f64 * p.powi(cut as i32 + 1) >= 50.0 {
        cut += 1;
    }
    let mut probs: Vec<f64> = (0..cut).map(|k| p.powi(k as i32) * (1.0 - p)).collect();
    probs.push(p.powi(cut as i32));
    (cut, probs)
}

fn integer_counts(mut next: impl FnMut() -> u32, cut: usize) -> Vec<u64> {
    let mut counts = vec![0u64; cut + 1];
    for _ in 0..DRAWS {
        counts[(next() as usize).min(cut)] += 1;
    }
    counts
}

#[test]
fn stored_ranks_are_geometric() {
    for (i, p) in [0.5, 1.0 / 3.0, 0.75].into_iter().enumerate() {
        let policy = RankPolicy::default().with_p(p).unwrap();
        let mut rng = RngState::new(100 + i as u64);
        let (cut, probs) = geometric_bins(p, DRAWS);
        let counts = integer_counts(|| draw_rank(&mut rng, &policy).unwrap().integer_part(), cut);
        let pv = chi_square_p_value(&counts, &probs);
        assert!(pv > 1e-3, "p={p}: chi-square p-value {pv}, counts {counts:?}");
    }
}

#[test]
fn fair_rank_mean_is_one() {
    let policy = RankPolicy::default();
    let mut rng = RngState::new(7);
    let sum: u64 = (0..DRAWS)
        .map(|_| draw_rank(&mut rng, &policy).unwrap().integer_part() as u64)
        .sum();
    let mean = sum as f64 / DRAWS as f64;
    assert!((mean - 1.0).abs() <= 0.01, "mean {mean}");
}

#[test]
fn key_ranks_are_geometric() {
    let policy = RankPolicy::key_function(11);
    let (cut, probs) = geometric_bins(0.5, DRAWS);
    let mut key = 0u64;
    let counts = integer_counts(
        || {
            key += 1;
            rank_of_key(&key, &policy).unwrap().integer_part()
        },
        cut,
    );
    let zero = counts[0] as f64 / DRAWS as f64;
    assert!((zero - 0.5).abs() <= 0.002, "P(rank 0) = {zero}");
    let pv = chi_square_p_value(&counts, &probs);
    assert!(pv > 1e-3, "chi-square p-value {pv}");
}

#[test]
fn fractional_parts_are_uniform() {
    let policy = RankPolicy::default().with_fractional_bits(3).unwrap();
    let mut rng = RngState::new(3);
    let mut counts = [0u64; 8];
    for _ in 0..DRAWS / 4 {
        let r = draw_rank(&mut rng, &policy).unwrap();
        assert_eq!(r.fractional_bits(), 3);
        counts[r.numerator() as usize] += 1;
    }
    let pv = chi_square_p_value(&counts, &[1.0 / 8.0; 8]);
    assert!(pv > 1e-3, "chi-square p-value {pv}, counts {counts:?}");
}
