//! Statistical checks of the expected-cost bounds, run on trees of random
//! `u64` keys.
//!
//! Each experiment builds `trials` independent trees. Trial `i` draws its keys
//! and its rank seed from `RngState::derive(seed, i)`, so results do not
//! depend on how trials are scheduled across threads. Every tree is validated
//! before it is measured.

mod summary;
mod treap;

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, RngCore};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::error::TreeError;
use crate::rank::{RankPolicy, RngState};
use crate::tree::{DeleteOutcome, InsertOutcome, Strategy, ZipTree};

pub use summary::SummaryStats;
pub use treap::Treap;

/// Highest rank for which per-rank bounds are reported.
pub const MAX_REPORTED_RANK: u32 = 6;

/// Largest link-write count with its own histogram bucket; larger counts
/// share the last bucket.
pub const LINK_WRITE_BUCKETS: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    pub policy: RankPolicy,
    pub strategy: Strategy,
}

impl ExperimentConfig {
    pub fn new(n: usize, trials: usize, seed: u64) -> Result<ExperimentConfig, ExperimentError> {
        ExperimentConfig {
            n,
            trials,
            seed,
            policy: RankPolicy::default(),
            strategy: Strategy::Iterative,
        }
        .checked()
    }

    pub fn with_policy(mut self, policy: RankPolicy) -> ExperimentConfig {
        self.policy = policy;
        self
    }

    pub fn with_strategy(mut self, strategy: Strategy) -> ExperimentConfig {
        self.strategy = strategy;
        self
    }

    fn checked(self) -> Result<ExperimentConfig, ExperimentError> {
        if self.n < 2 {
            return Err(ExperimentError::Size(self.n));
        }
        if self.trials < 1 {
            return Err(ExperimentError::Trials);
        }
        Ok(self)
    }

    fn lg_n(&self) -> f64 {
        (self.n as f64).log2()
    }

    /// The bounds are stated for fair coin flips; other `p` get no bound.
    fn fair(&self) -> bool {
        self.policy.p() == 0.5
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExperimentError {
    #[error("tree size must be at least 2, got {0}")]
    Size(usize),
    #[error("at least one trial is required")]
    Trials,
    #[error("trial {trial}: tree failed validation: {detail}")]
    Invalid { trial: usize, detail: String },
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error("unknown experiment {0:?}")]
    Unknown(String),
}

/// Keys and rank policy for one trial.
struct Trial {
    index: usize,
    rng: RngState,
    policy: RankPolicy,
}

impl Trial {
    fn new(cfg: &ExperimentConfig, index: usize) -> Trial {
        let mut rng = RngState::derive(cfg.seed, index as u64);
        let policy = cfg.policy.with_seed(rng.next_u64());
        Trial { index, rng, policy }
    }

    fn distinct_keys(&mut self, n: usize) -> Vec<u64> {
        let mut seen = HashSet::with_capacity(n);
        let mut keys = Vec::with_capacity(n);
        while keys.len() < n {
            let k = self.rng.next_u64();
            if seen.insert(k) {
                keys.push(k);
            }
        }
        keys
    }

    /// Inserts `n` random keys in random order; returns the tree and the
    /// number of rank ties met by each insertion.
    fn build(&mut self, n: usize, strategy: Strategy) -> Result<(ZipTree<u64, ()>, Vec<usize>), ExperimentError> {
        let mut tree = ZipTree::new(self.policy);
        let mut ties = Vec::with_capacity(n);
        for k in self.distinct_keys(n) {
            match tree.insert_with(k, (), strategy)? {
                InsertOutcome::Inserted(stats) => ties.push(stats.rank_ties),
                InsertOutcome::AlreadyPresent(()) => unreachable!("keys are distinct"),
            }
        }
        self.check(&tree)?;
        Ok((tree, ties))
    }

    fn check(&self, tree: &ZipTree<u64, ()>) -> Result<(), ExperimentError> {
        tree.validate().map_err(|v| ExperimentError::Invalid {
            trial: self.index,
            detail: v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; "),
        })
    }
}

fn run_trials<T: Send>(
    cfg: &ExperimentConfig,
    f: impl Fn(Trial) -> Result<T, ExperimentError> + Sync,
) -> Result<Vec<T>, ExperimentError> {
    (0..cfg.trials).into_par_iter().map(|i| f(Trial::new(cfg, i))).collect()
}

/// Depth of every node of every trial tree.
pub fn depth_experiment(cfg: &ExperimentConfig) -> Result<SummaryStats, ExperimentError> {
    let cfg = cfg.checked()?;
    let per_trial = run_trials(&cfg, |mut t| Ok(t.build(cfg.n, cfg.strategy)?.0.depths()))?;
    Ok(SummaryStats::from_samples(
        per_trial.into_iter().flatten().map(|d| d as f64),
    ))
}

/// Integer part of the root rank, one sample per trial.
pub fn root_rank_experiment(cfg: &ExperimentConfig) -> Result<SummaryStats, ExperimentError> {
    let cfg = cfg.checked()?;
    let per_trial = run_trials(&cfg, |mut t| {
        let (tree, _) = t.build(cfg.n, cfg.strategy)?;
        Ok(tree.root_rank().expect("n >= 2").integer_part())
    })?;
    Ok(SummaryStats::from_samples(per_trial))
}

/// Costs of the steady-state update workload.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct UpdateCostReport {
    pub insert_path_nodes: SummaryStats,
    pub delete_path_nodes: SummaryStats,
    /// Path nodes of inserts and deletes of a node of integer rank `k`, for
    /// `k` in `0..=MAX_REPORTED_RANK`.
    pub path_nodes_by_rank: Vec<SummaryStats>,
    pub insert_link_writes: SummaryStats,
    pub delete_link_writes: SummaryStats,
    pub link_writes: SummaryStats,
    /// `link_write_histogram[j]` counts updates with exactly `j` link writes;
    /// the last bucket also holds everything larger.
    pub link_write_histogram: Vec<u64>,
}

#[derive(Default)]
struct UpdateSamples {
    insert_paths: Vec<f64>,
    delete_paths: Vec<f64>,
    by_rank: Vec<Vec<f64>>,
    insert_writes: Vec<f64>,
    delete_writes: Vec<f64>,
    histogram: Vec<u64>,
}

impl UpdateSamples {
    fn record(&mut self, insert: bool, rank: u32, path_nodes: usize, link_writes: usize) {
        let (paths, writes) = if insert {
            (&mut self.insert_paths, &mut self.insert_writes)
        } else {
            (&mut self.delete_paths, &mut self.delete_writes)
        };
        paths.push(path_nodes as f64);
        writes.push(link_writes as f64);
        if rank <= MAX_REPORTED_RANK {
            self.by_rank[rank as usize].push(path_nodes as f64);
        }
        self.histogram[link_writes.min(LINK_WRITE_BUCKETS)] += 1;
    }
}

/// Builds a tree of `n` keys, then runs `n` rounds of deleting a uniformly
/// random present key and inserting a fresh one. Only the rounds are
/// measured. Deletions never look at ranks.
pub fn update_cost_experiment(cfg: &ExperimentConfig) -> Result<UpdateCostReport, ExperimentError> {
    let cfg = cfg.checked()?;
    let per_trial = run_trials(&cfg, |mut t| {
        let mut s = UpdateSamples {
            by_rank: vec![Vec::new(); MAX_REPORTED_RANK as usize + 1],
            histogram: vec![0; LINK_WRITE_BUCKETS + 1],
            ..UpdateSamples::default()
        };
        let (mut tree, _) = t.build(cfg.n, cfg.strategy)?;
        let mut present: Vec<u64> = tree.keys().copied().collect();
        for _ in 0..cfg.n {
            let i = t.rng.random_range(0..present.len());
            let victim = present.swap_remove(i);
            let rank = tree.rank_of(&victim).expect("present").integer_part();
            match tree.delete_with(&victim, cfg.strategy) {
                DeleteOutcome::Deleted((), st) => s.record(false, rank, st.path_nodes, st.link_writes),
                DeleteOutcome::NotFound => unreachable!("key is present"),
            }
            let fresh = loop {
                let k = t.rng.next_u64();
                if !tree.contains_key(&k) {
                    break k;
                }
            };
            if let InsertOutcome::Inserted(st) = tree.insert_with(fresh, (), cfg.strategy)? {
                let rank = tree.rank_of(&fresh).expect("inserted").integer_part();
                s.record(true, rank, st.path_nodes, st.link_writes);
            }
            present.push(fresh);
        }
        t.check(&tree)?;
        Ok(s)
    })?;

    let mut all = UpdateSamples {
        by_rank: vec![Vec::new(); MAX_REPORTED_RANK as usize + 1],
        histogram: vec![0; LINK_WRITE_BUCKETS + 1],
        ..UpdateSamples::default()
    };
    for s in per_trial {
        all.insert_paths.extend(s.insert_paths);
        all.delete_paths.extend(s.delete_paths);
        all.insert_writes.extend(s.insert_writes);
        all.delete_writes.extend(s.delete_writes);
        for (a, b) in all.by_rank.iter_mut().zip(s.by_rank) {
            a.extend(b);
        }
        for (a, b) in all.histogram.iter_mut().zip(s.histogram) {
            *a += b;
        }
    }
    let stats = |v: &[f64]| SummaryStats::from_samples(v.iter().copied());
    Ok(UpdateCostReport {
        insert_path_nodes: stats(&all.insert_paths),
        delete_path_nodes: stats(&all.delete_paths),
        path_nodes_by_rank: all.by_rank.iter().map(|v| stats(v)).collect(),
        insert_link_writes: stats(&all.insert_writes),
        delete_link_writes: stats(&all.delete_writes),
        link_writes: SummaryStats::from_samples(all.insert_writes.iter().chain(&all.delete_writes).copied()),
        link_write_histogram: all.histogram,
    })
}

/// Subtree sizes (each node counts itself).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DescendantReport {
    pub overall: SummaryStats,
    /// Sizes of subtrees rooted at integer-rank-`k` nodes, `k` in
    /// `0..=MAX_REPORTED_RANK`.
    pub by_rank: Vec<SummaryStats>,
}

pub fn descendant_experiment(cfg: &ExperimentConfig) -> Result<DescendantReport, ExperimentError> {
    let cfg = cfg.checked()?;
    let per_trial = run_trials(&cfg, |mut t| Ok(t.build(cfg.n, cfg.strategy)?.0.descendant_counts()))?;
    let samples: Vec<_> = per_trial.into_iter().flatten().collect();
    let by_rank = (0..=MAX_REPORTED_RANK)
        .map(|k| {
            SummaryStats::from_samples(
                samples
                    .iter()
                    .filter(|(r, _)| r.integer_part() == k)
                    .map(|&(_, s)| s as f64),
            )
        })
        .collect();
    Ok(DescendantReport {
        overall: SummaryStats::from_samples(samples.iter().map(|&(_, s)| s as f64)),
        by_rank,
    })
}

/// Rank ties met by each insertion while the tree is built: comparisons in
/// which the new node's full rank equals a path node's. The count depends on
/// the strategy, since the two insertions compare against different nodes.
pub fn tie_experiment(cfg: &ExperimentConfig) -> Result<SummaryStats, ExperimentError> {
    let cfg = cfg.checked()?;
    let per_trial = run_trials(&cfg, |mut t| Ok(t.build(cfg.n, cfg.strategy)?.1))?;
    Ok(SummaryStats::from_samples(
        per_trial.into_iter().flatten().map(|x| x as f64),
    ))
}

/// Node depths of rotation treaps with uniform 64-bit priorities, built from
/// the same keys the zip-tree experiments use.
pub fn treap_depth_baseline(cfg: &ExperimentConfig) -> Result<SummaryStats, ExperimentError> {
    let cfg = cfg.checked()?;
    let per_trial = run_trials(&cfg, |mut t| {
        let keys = t.distinct_keys(cfg.n);
        let mut treap = Treap::new();
        for k in keys {
            let priority = t.rng.next_u64();
            treap.insert(k, priority);
        }
        if !treap.is_valid() {
            return Err(ExperimentError::Invalid {
                trial: t.index,
                detail: "treap order violated".into(),
            });
        }
        Ok(treap.depths())
    })?;
    Ok(SummaryStats::from_samples(
        per_trial.into_iter().flatten().map(|d| d as f64),
    ))
}

/// `tail[j]` is the fraction of counts in buckets `j` and above.
pub fn tail_fractions(histogram: &[u64]) -> Vec<f64> {
    let total: u64 = histogram.iter().sum();
    let mut above = total;
    histogram
        .iter()
        .map(|&c| {
            let frac = if total == 0 { 0.0 } else { above as f64 / total as f64 };
            above -= c;
            frac
        })
        .collect()
}

/// `⌈lg lg n⌉ + 3`, the fractional precision that makes ties rare at size `n`.
pub fn suggested_fractional_bits(n: usize) -> u8 {
    let lg = (n.max(2) as f64).log2();
    (lg.log2().ceil().max(0.0) as u8) + 3
}

/// Experiments runnable by name.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExperimentKind {
    Depth,
    RootRank,
    UpdateCost,
    Descendants,
    Ties,
    TreapDepth,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 6] = [
        ExperimentKind::Depth,
        ExperimentKind::RootRank,
        ExperimentKind::UpdateCost,
        ExperimentKind::Descendants,
        ExperimentKind::Ties,
        ExperimentKind::TreapDepth,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::Depth => "depth",
            ExperimentKind::RootRank => "root-rank",
            ExperimentKind::UpdateCost => "update-cost",
            ExperimentKind::Descendants => "descendants",
            ExperimentKind::Ties => "ties",
            ExperimentKind::TreapDepth => "treap-depth",
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExperimentKind {
    type Err = ExperimentError;

    fn from_str(s: &str) -> Result<ExperimentKind, ExperimentError> {
        ExperimentKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| ExperimentError::Unknown(s.to_string()))
    }
}

/// One output row. `bound` is an upper bound on `mean`; `pass` is empty when
/// there is no bound.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentRecord {
    pub experiment: String,
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    pub metric: String,
    pub mean: f64,
    pub stddev: f64,
    pub max: f64,
    pub bound: Option<f64>,
    pub pass: Option<bool>,
}

struct Records<'a> {
    cfg: &'a ExperimentConfig,
    kind: ExperimentKind,
    out: Vec<ExperimentRecord>,
}

impl Records<'_> {
    fn push(&mut self, metric: impl Into<String>, s: &SummaryStats, bound: Option<f64>) {
        self.push_with(metric, s, bound, 0.0);
    }

    /// `slack` standard errors of tolerance above the bound.
    fn push_with(&mut self, metric: impl Into<String>, s: &SummaryStats, bound: Option<f64>, slack: f64) {
        let bound = bound.filter(|_| self.cfg.fair());
        self.out.push(ExperimentRecord {
            experiment: self.kind.name().to_string(),
            n: self.cfg.n,
            trials: self.cfg.trials,
            seed: self.cfg.seed,
            metric: metric.into(),
            mean: s.mean,
            stddev: s.stddev,
            max: s.max,
            bound,
            pass: bound.map(|b| s.mean <= b + slack * s.std_error()),
        });
    }
}

/// Runs `kind` and turns its results into records, with bounds filled in
/// when ranks use fair coin flips.
pub fn run_experiment(kind: ExperimentKind, cfg: &ExperimentConfig) -> Result<Vec<ExperimentRecord>, ExperimentError> {
    let lg = cfg.lg_n();
    let mut r = Records {
        cfg,
        kind,
        out: Vec::new(),
    };
    match kind {
        ExperimentKind::Depth => {
            let s = depth_experiment(cfg)?;
            r.push("node_depth", &s, Some(1.5 * lg + 3.0));
        }
        ExperimentKind::RootRank => {
            let s = root_rank_experiment(cfg)?;
            r.push("root_rank", &s, Some(lg + 3.0));
        }
        ExperimentKind::UpdateCost => {
            let rep = update_cost_experiment(cfg)?;
            r.push("insert_path_nodes", &rep.insert_path_nodes, None);
            r.push("delete_path_nodes", &rep.delete_path_nodes, None);
            for (k, s) in rep.path_nodes_by_rank.iter().enumerate() {
                r.push_with(format!("path_nodes_rank_{k}"), s, Some(1.5 * k as f64 + 0.5), 3.0);
            }
            r.push("insert_link_writes", &rep.insert_link_writes, None);
            r.push("delete_link_writes", &rep.delete_link_writes, None);
            r.push("link_writes", &rep.link_writes, Some(4.0));
            let total: u64 = rep.link_write_histogram.iter().sum();
            for (j, &c) in rep.link_write_histogram.iter().enumerate() {
                let frac = c as f64 / total as f64;
                let s = SummaryStats {
                    mean: frac,
                    stddev: (frac * (1.0 - frac)).sqrt(),
                    max: frac,
                    count: total as usize,
                };
                r.push(format!("link_writes_eq_{j}"), &s, None);
            }
            for (j, &frac) in tail_fractions(&rep.link_write_histogram).iter().enumerate().skip(1) {
                let s = SummaryStats {
                    mean: frac,
                    stddev: (frac * (1.0 - frac)).sqrt(),
                    max: frac,
                    count: total as usize,
                };
                r.push(format!("link_writes_ge_{j}"), &s, None);
            }
        }
        ExperimentKind::Descendants => {
            let rep = descendant_experiment(cfg)?;
            r.push("descendants", &rep.overall, Some(1.5 * lg + 3.0));
            for (k, s) in rep.by_rank.iter().enumerate() {
                r.push_with(
                    format!("descendants_rank_{k}"),
                    s,
                    Some(3.0 * f64::powi(2.0, k as i32) - 1.0),
                    3.0,
                );
            }
        }
        ExperimentKind::Ties => {
            let s = tie_experiment(cfg)?;
            // The recursive insert compares ranks only from the bottom of the
            // path up to its new parent, so it meets at most one tie on each
            // side of the key. The top-down descent meets every equal-rank
            // smaller-key node above the insertion point as well.
            let per_side = match cfg.strategy {
                Strategy::Recursive => 1.0,
                Strategy::Iterative => 2.0,
            };
            let bound = (cfg.policy.fractional_bits() == 0).then_some(per_side);
            r.push("rank_ties_per_insert", &s, bound);
        }
        ExperimentKind::TreapDepth => {
            let treap = treap_depth_baseline(cfg)?;
            let zip = depth_experiment(cfg)?;
            r.push("treap_node_depth", &treap, None);
            r.push("zip_node_depth", &zip, None);
            let ratio = zip.mean / treap.mean;
            let s = SummaryStats {
                mean: ratio,
                stddev: 0.0,
                max: ratio,
                count: 1,
            };
            r.push("zip_treap_depth_ratio", &s, Some(1.09));
            if let Some(last) = r.out.last_mut() {
                last.pass = last.pass.map(|p| p && ratio >= 1.0);
            }
        }
    }
    Ok(r.out)
}
