//! Whole-tree catenation and splitting.
//!
//! Catenating zips the right spine of the lower tree with the left spine of
//! the upper one; splitting unzips the search path for the split key. Both
//! touch only the nodes on those paths. Node ranks and payloads are never
//! changed, so the results are the canonical trees over their key sets.

use rand::RngCore;

use crate::error::TreeError;
use crate::rank::RngState;
use crate::tree::{unzip as unzip_path, zip_into, zip_recursive, Strategy, ZipTree};

/// Work done by one zip of two trees.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CatenateStats {
    /// Spine nodes stepped through while both spines were non-empty.
    pub nodes_visited: usize,
    /// Spine nodes attached wholesale after the other spine ran out.
    pub tail_nodes: usize,
    pub link_writes: usize,
}

fn check_joinable<K: Ord, V>(low: &ZipTree<K, V>, high: &ZipTree<K, V>) -> Result<(), TreeError> {
    if low.policy() != high.policy() {
        return Err(TreeError::PolicyMismatch);
    }
    if let (Some(max), Some(min)) = (low.last_key(), high.first_key()) {
        if max >= min {
            return Err(TreeError::KeyOverlap);
        }
    }
    Ok(())
}

/// Joins `low` and `high`, every key of `low` being smaller than every key
/// of `high`. Both inputs are left empty on success and untouched on error.
pub fn catenate<K: Ord, V>(
    low: &mut ZipTree<K, V>,
    high: &mut ZipTree<K, V>,
) -> Result<(ZipTree<K, V>, CatenateStats), TreeError> {
    check_joinable(low, high)?;
    let policy = *low.policy();
    let (a, len_a, _, rng) = std::mem::replace(low, ZipTree::new(policy)).into_parts();
    let (b, len_b, _, _) = std::mem::replace(high, ZipTree::new(policy)).into_parts();
    let mut root = None;
    let count = zip_into(&mut root, a, b);
    let stats = CatenateStats {
        nodes_visited: count.merged,
        tail_nodes: count.tail,
        link_writes: count.link_writes,
    };
    Ok((ZipTree::from_parts(root, len_a + len_b, policy, rng), stats))
}

/// [`catenate`] with a choice of zipping algorithm.
pub fn zip<K: Ord, V>(
    low: &mut ZipTree<K, V>,
    high: &mut ZipTree<K, V>,
    strategy: Strategy,
) -> Result<ZipTree<K, V>, TreeError> {
    match strategy {
        Strategy::Iterative => catenate(low, high).map(|(t, _)| t),
        Strategy::Recursive => {
            check_joinable(low, high)?;
            let policy = *low.policy();
            let (a, len_a, _, rng) = std::mem::replace(low, ZipTree::new(policy)).into_parts();
            let (b, len_b, _, _) = std::mem::replace(high, ZipTree::new(policy)).into_parts();
            let root = zip_recursive(a, b, &mut 0);
            Ok(ZipTree::from_parts(root, len_a + len_b, policy, rng))
        }
    }
}

/// Splits `tree` into the keys at most `key` and the keys greater than it.
pub fn split<K: Ord, V>(tree: ZipTree<K, V>, key: &K) -> (ZipTree<K, V>, ZipTree<K, V>) {
    let (root, len, policy, mut rng) = tree.into_parts();
    let (low, high, _) = unzip_path(root, |k| k <= key);
    let fork = RngState::new(rng.next_u64());
    let low = ZipTree::from_parts(low, 0, policy, rng);
    let high = ZipTree::from_parts(high, 0, policy, fork);
    with_counts(low, high, len)
}

/// The low and high trees of a split.
pub type Halves<K, V> = (ZipTree<K, V>, ZipTree<K, V>);

/// Splits `tree` around a key that must be absent: the low tree holds the
/// smaller keys, the high tree the larger ones. On success `tree` is left
/// empty; if `key` is present nothing changes.
pub fn unzip<K: Ord, V>(tree: &mut ZipTree<K, V>, key: &K) -> Result<Halves<K, V>, TreeError> {
    if tree.contains_key(key) {
        return Err(TreeError::KeyPresent);
    }
    let policy = *tree.policy();
    let taken = std::mem::replace(tree, ZipTree::new(policy));
    Ok(split(taken, key))
}

/// Fills in element counts after a split by walking both sides in lockstep
/// until the smaller one is exhausted.
fn with_counts<K, V>(mut low: ZipTree<K, V>, mut high: ZipTree<K, V>, total: usize) -> (ZipTree<K, V>, ZipTree<K, V>) {
    let mut a = low.iter();
    let mut b = high.iter();
    let mut seen = 0;
    let low_len = loop {
        match (a.next(), b.next()) {
            (None, _) => break seen,
            (_, None) => break total - seen,
            _ => seen += 1,
        }
    };
    drop((a, b));
    low.set_len(low_len);
    high.set_len(total - low_len);
    (low, high)
}
