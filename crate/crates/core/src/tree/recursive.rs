//! Recursive insertion, deletion and zipping.
//!
//! Reference versions, kept close to the textbook formulation: insertion
//! recurses to the bottom of the search path and lifts the new node while
//! its rank wins, unzipping as it goes; deletion replaces the node by the zip
//! of its two subtrees. Stack depth equals the search depth.

use std::borrow::Borrow;

use super::{Link, Node, UpdateStats};

/// Inserts `x` (whose key must be absent) into the subtree at `root` and
/// returns the new subtree root.
pub(crate) fn insert<K: Ord, V>(x: Box<Node<K, V>>, root: Link<K, V>) -> (Box<Node<K, V>>, UpdateStats) {
    let mut stats = UpdateStats::default();
    let mut depth = 0;
    let (top, is_x) = insert_into(x, root, &mut stats, &mut depth);
    if is_x {
        // x became the root of the whole tree.
        stats.link_writes += 1;
    }
    stats.nodes_visited = depth - stats.path_nodes;
    (top, stats)
}

/// Returns the new subtree root and whether it is `x`.
fn insert_into<K: Ord, V>(
    mut x: Box<Node<K, V>>,
    root: Link<K, V>,
    stats: &mut UpdateStats,
    depth: &mut usize,
) -> (Box<Node<K, V>>, bool) {
    let Some(mut root) = root else {
        return (x, true);
    };
    *depth += 1;
    if x.key < root.key {
        let (sub, is_x) = insert_into(x, root.left.take(), stats, depth);
        if !is_x {
            root.left = Some(sub);
            return (root, false);
        }
        x = sub;
        if x.rank == root.rank {
            stats.rank_ties += 1;
        }
        stats.link_writes += 1;
        if x.rank < root.rank {
            root.left = Some(x);
            (root, false)
        } else {
            stats.path_nodes += 1;
            root.left = x.right.take();
            x.right = Some(root);
            (x, true)
        }
    } else {
        let (sub, is_x) = insert_into(x, root.right.take(), stats, depth);
        if !is_x {
            root.right = Some(sub);
            return (root, false);
        }
        x = sub;
        if x.rank == root.rank {
            stats.rank_ties += 1;
        }
        stats.link_writes += 1;
        if x.rank <= root.rank {
            root.right = Some(x);
            (root, false)
        } else {
            stats.path_nodes += 1;
            root.right = x.left.take();
            x.left = Some(root);
            (x, true)
        }
    }
}

/// Deletes `key` from the tree rooted at `root`. Returns the new root and
/// the removed node, or the untouched tree and `None` if `key` is absent.
#[allow(clippy::type_complexity)]
pub(crate) fn delete<K, V, Q>(
    key: &Q,
    mut root: Box<Node<K, V>>,
) -> (Link<K, V>, Option<(Box<Node<K, V>>, UpdateStats)>)
where
    K: Borrow<Q>,
    Q: Ord + ?Sized,
{
    let mut stats = UpdateStats {
        nodes_visited: 1,
        ..UpdateStats::default()
    };
    if key == root.key.borrow() {
        let merged = unlink(&mut root, &mut stats);
        return (merged, Some((root, stats)));
    }
    let removed = delete_below(key, &mut root, &mut stats);
    (Some(root), removed.map(|x| (x, stats)))
}

fn delete_below<K, V, Q>(key: &Q, root: &mut Node<K, V>, stats: &mut UpdateStats) -> Option<Box<Node<K, V>>>
where
    K: Borrow<Q>,
    Q: Ord + ?Sized,
{
    let child = if key < root.key.borrow() {
        &mut root.left
    } else {
        &mut root.right
    };
    let c = child.as_deref_mut()?;
    stats.nodes_visited += 1;
    if key == c.key.borrow() {
        let mut x = child.take().expect("checked above");
        *child = unlink(&mut x, stats);
        Some(x)
    } else {
        delete_below(key, c, stats)
    }
}

/// Detaches `x`'s subtrees and returns their zip.
fn unlink<K, V>(x: &mut Node<K, V>, stats: &mut UpdateStats) -> Link<K, V> {
    stats.path_nodes = spine_len(&x.left, |n| &n.right) + spine_len(&x.right, |n| &n.left);
    // The parent link (or root) receives the zipped path.
    stats.link_writes += 1;
    zip(x.left.take(), x.right.take(), &mut stats.link_writes)
}

fn spine_len<K, V>(mut link: &Link<K, V>, next: impl Fn(&Node<K, V>) -> &Link<K, V>) -> usize {
    let mut len = 0;
    while let Some(n) = link.as_deref() {
        len += 1;
        link = next(n);
    }
    len
}

/// Zips the paths topped by `x` and `y`; everything under `x` must have
/// smaller keys than everything under `y`. On equal ranks `x` stays on top.
pub(crate) fn zip<K, V>(x: Link<K, V>, y: Link<K, V>, writes: &mut usize) -> Link<K, V> {
    match (x, y) {
        (None, y) => y,
        (x, None) => x,
        (Some(mut x), Some(mut y)) => {
            *writes += 1;
            if x.rank < y.rank {
                y.left = zip(Some(x), y.left.take(), writes);
                Some(y)
            } else {
                x.right = zip(x.right.take(), Some(y), writes);
                Some(x)
            }
        }
    }
}
