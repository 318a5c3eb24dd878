//! Randomized invariant suites.
//!
//! For every requested size the runner performs three suites:
//! * `ops`: random inserts, deletes and searches applied to a recursive and
//!   an iterative tree side by side. Both are validated after every step
//!   and must agree in outcome and shape. The final tree must match the
//!   oracle.
//! * `history`: small random key/rank sets inserted in every order must all
//!   give the oracle's shape.
//! * `convert`: skip-list round trips and split/catenate round trips.
//!
//! A failure stops the run and names the suite, size, seed and step.

use rand::seq::SliceRandom;
use rand::{Rng, RngCore};
use ziptree::skiplist::{skiplist_to_tree, tree_to_skiplist};
use ziptree::{
    canonical_build, catenate, split, DeleteOutcome, KeyRankSet, Rank, RankPolicy, RngState, Shape, Strategy, ZipTree,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyConfig {
    pub seed: u64,
    pub sizes: Vec<usize>,
    /// Total random operations of the `ops` suite, shared evenly by sizes.
    pub iterations: usize,
    /// Corrupt a rank halfway through each `ops` run.
    pub inject_fault: bool,
}

impl Default for VerifyConfig {
    fn default() -> VerifyConfig {
        VerifyConfig {
            seed: 0,
            sizes: vec![16, 64, 256, 1024],
            iterations: 100_000,
            inject_fault: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Failure {
    pub suite: &'static str,
    pub size: usize,
    /// Seed of the failing run, derived from the master seed and size index.
    pub seed: u64,
    pub step: usize,
    pub detail: String,
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "FAIL suite={} size={} seed={} step={}: {}",
            self.suite, self.size, self.seed, self.step, self.detail
        )
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerifyReport {
    pub lines: Vec<String>,
    pub failure: Option<Failure>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for l in &self.lines {
            out.push_str(l);
            out.push('\n');
        }
        match &self.failure {
            Some(f) => out.push_str(&format!("{f}\n")),
            None => out.push_str("all suites passed\n"),
        }
        out
    }
}

type Tree = ZipTree<i64, i64>;

/// A suite's step count on success, or the failing step and its detail.
type SuiteResult = Result<usize, (usize, String)>;

pub fn run_verify(cfg: &VerifyConfig) -> VerifyReport {
    let mut report = VerifyReport::default();
    let per_size = cfg.iterations.checked_div(cfg.sizes.len()).unwrap_or(0);
    for (i, &size) in cfg.sizes.iter().enumerate() {
        let seed = RngState::derive(cfg.seed, i as u64).next_u64();
        let suites: [(&'static str, &dyn Fn() -> SuiteResult); 3] = [
            ("ops", &|| ops_suite(size, seed, per_size, cfg.inject_fault)),
            ("history", &|| history_suite(size, seed, (per_size / 100).max(1))),
            ("convert", &|| convert_suite(size, seed)),
        ];
        for (suite, run) in suites {
            match run() {
                Ok(checks) => report.lines.push(format!("{suite} size={size} checks={checks}: ok")),
                Err((step, detail)) => {
                    report.failure = Some(Failure {
                        suite,
                        size,
                        seed,
                        step,
                        detail,
                    });
                    return report;
                }
            }
        }
    }
    report
}

fn check(tree: &Tree) -> Result<(), String> {
    tree.validate().map_err(|v| {
        let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
        parts.join("; ")
    })
}

fn check_oracle(tree: &Tree) -> Result<(), String> {
    let shape = tree.shape();
    let set = KeyRankSet::new(shape.pairs().into_iter().map(|(k, r)| (*k, r)).collect()).map_err(|e| e.to_string())?;
    if canonical_build(&set) == shape {
        Ok(())
    } else {
        Err("shape differs from the canonical build of its key/rank set".into())
    }
}

/// Makes the first node with a child violate heap order.
fn corrupt(shape: &mut Shape<i64>) -> bool {
    let Some(n) = shape.0.as_deref_mut() else {
        return false;
    };
    let parent = n.rank.integer_part();
    if let Some(l) = n.left.0.as_deref_mut() {
        l.rank = Rank::integer(parent);
        return true;
    }
    if let Some(r) = n.right.0.as_deref_mut() {
        r.rank = Rank::integer(parent + 1);
        return true;
    }
    false
}

fn ops_suite(size: usize, seed: u64, ops: usize, inject_fault: bool) -> SuiteResult {
    if size == 0 {
        return Ok(0);
    }
    let mut rng = RngState::new(seed);
    let policy = RankPolicy::stored(seed);
    let mut rec: Tree = ZipTree::new(policy);
    let mut iter: Tree = ZipTree::new(policy);
    let universe = 2 * size as i64;
    let mut injected = false;
    for step in 0..ops {
        let key = rng.random_range(0..universe);
        match rng.random_range(0..3) {
            0 => {
                let a = rec
                    .insert_with(key, key, Strategy::Recursive)
                    .map_err(|e| (step, e.to_string()))?;
                let b = iter
                    .insert_with(key, key, Strategy::Iterative)
                    .map_err(|e| (step, e.to_string()))?;
                if a.is_inserted() != b.is_inserted() {
                    return Err((step, format!("insert {key}: strategies disagree on presence")));
                }
            }
            1 => {
                let a = rec.delete_with(&key, Strategy::Recursive);
                let b = iter.delete_with(&key, Strategy::Iterative);
                if matches!(a, DeleteOutcome::NotFound) != matches!(b, DeleteOutcome::NotFound) {
                    return Err((step, format!("delete {key}: strategies disagree on presence")));
                }
            }
            _ => {
                let (a, b) = (rec.search(&key), iter.search(&key));
                if a != b {
                    return Err((step, format!("search {key}: {a:?} vs {b:?}")));
                }
                if a.value.is_some_and(|v| *v != key) {
                    return Err((step, format!("search {key}: wrong value")));
                }
            }
        }
        if inject_fault && !injected && step >= ops / 2 {
            let mut shape = iter.shape();
            if corrupt(&mut shape) {
                iter = ZipTree::from_shape_unchecked(&shape, policy);
                injected = true;
            }
        }
        check(&rec).map_err(|d| (step, format!("recursive tree: {d}")))?;
        check(&iter).map_err(|d| (step, format!("iterative tree: {d}")))?;
        if rec.shape() != iter.shape() {
            return Err((step, "recursive and iterative shapes differ".into()));
        }
    }
    check_oracle(&iter).map_err(|d| (ops, d))?;
    Ok(ops)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                go(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

fn history_suite(size: usize, seed: u64, sets: usize) -> SuiteResult {
    if size == 0 {
        return Ok(0);
    }
    let m = size.min(6);
    let perms = permutations(m);
    let mut rng = RngState::new(seed ^ 0x68);
    let mut checks = 0;
    for step in 0..sets {
        let mut keys: Vec<i64> = (0..4 * m as i64).collect();
        keys.shuffle(&mut rng);
        let pairs: Vec<(i64, Rank)> = keys[..m]
            .iter()
            .map(|&k| (k, Rank::integer(rng.random_range(0..3))))
            .collect();
        let expected = canonical_build(&KeyRankSet::new(pairs.clone()).expect("distinct keys"));
        for (pi, perm) in perms.iter().enumerate() {
            let strategy = if pi % 2 == 0 {
                Strategy::Iterative
            } else {
                Strategy::Recursive
            };
            let mut t: Tree = ZipTree::new(RankPolicy::default());
            for &i in perm {
                t.insert_ranked(pairs[i].0, 0, pairs[i].1, strategy);
            }
            if t.shape() != expected {
                return Err((
                    step,
                    format!("insertion order {perm:?} of {pairs:?} gave a different shape"),
                ));
            }
            checks += 1;
        }
    }
    Ok(checks)
}

fn convert_suite(size: usize, seed: u64) -> SuiteResult {
    if size == 0 {
        return Ok(0);
    }
    let mut rng = RngState::new(seed ^ 0x63);
    let policy = RankPolicy::stored(seed);
    let mut t: Tree = ZipTree::new(policy);
    while t.len() < size {
        let k = rng.random_range(0..4 * size as i64);
        t.insert(k, k).map_err(|e| (0, e.to_string()))?;
    }
    let shape = t.shape();
    let list = tree_to_skiplist(&t).map_err(|e| (0, e.to_string()))?;
    let back = skiplist_to_tree(&list, policy);
    if back.shape() != shape {
        return Err((0, "tree -> skip list -> tree changed the shape".into()));
    }
    for step in 1..=8 {
        let at = rng.random_range(-1..4 * size as i64 + 1);
        let (mut low, mut high) = split(t.clone(), &at);
        if low.keys().any(|k| *k > at) || high.keys().any(|k| *k <= at) {
            return Err((step, format!("split at {at} put keys on the wrong side")));
        }
        check_oracle(&low).map_err(|d| (step, format!("low side: {d}")))?;
        check_oracle(&high).map_err(|d| (step, format!("high side: {d}")))?;
        let (joined, _) = catenate(&mut low, &mut high).map_err(|e| (step, e.to_string()))?;
        if joined.shape() != shape {
            return Err((step, format!("catenate(split(T, {at})) differs from T")));
        }
    }
    Ok(9)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_sizes_pass_vacuously() {
        let r = run_verify(&VerifyConfig {
            sizes: vec![0],
            ..VerifyConfig::default()
        });
        assert!(r.passed());
        assert_eq!(r.lines.len(), 3);
    }

    #[test]
    fn small_run_passes() {
        let r = run_verify(&VerifyConfig {
            seed: 3,
            sizes: vec![1, 8, 40],
            iterations: 3000,
            inject_fault: false,
        });
        assert!(r.passed(), "{}", r.render());
    }

    #[test]
    fn injected_fault_is_reported() {
        let r = run_verify(&VerifyConfig {
            seed: 3,
            sizes: vec![40],
            iterations: 400,
            inject_fault: true,
        });
        let f = r.failure.expect("fault must be caught");
        assert_eq!(f.suite, "ops");
        assert!(f.detail.contains("heap order"), "{}", f.detail);
    }

    #[test]
    fn permutation_counts() {
        assert_eq!(permutations(0).len(), 1);
        assert_eq!(permutations(4).len(), 24);
    }
}
