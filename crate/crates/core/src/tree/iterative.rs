//! Top-down insertion and deletion.
//!
//! Both walk the tree once from the root. Unzipping and zipping leave runs
//! of nodes that stay on the same side in place and only rewrite the link at
//! the bottom of each run, so every restructured node has at most one child
//! link changed. `link_writes` counts exactly those changes plus the
//! assignment that hangs the new subtree top from its parent (or the root).

use std::borrow::Borrow;
use std::cmp::Ordering;

use super::{Link, Node, UpdateStats};

/// Inserts `x`, or hands it back if its key is already present.
pub(crate) fn insert<K: Ord, V>(root: &mut Link<K, V>, x: Box<Node<K, V>>) -> Result<UpdateStats, Box<Node<K, V>>> {
    let mut stats = UpdateStats::default();
    let rank = x.rank;

    // Descend to the node x replaces: the first one with a smaller rank, or
    // an equal rank and a larger key.
    let mut slot = root;
    loop {
        let descend = match slot.as_deref() {
            None => false,
            Some(cur) => {
                let by_rank = rank.cmp(&cur.rank);
                if by_rank == Ordering::Equal {
                    stats.rank_ties += 1;
                }
                match x.key.cmp(&cur.key) {
                    Ordering::Equal => return Err(x),
                    by_key => by_rank == Ordering::Less || (by_rank == Ordering::Equal && by_key == Ordering::Greater),
                }
            }
        };
        if !descend {
            break;
        }
        stats.nodes_visited += 1;
        let cur = slot.as_mut().expect("descend implies a node");
        slot = if x.key < cur.key { &mut cur.left } else { &mut cur.right };
    }

    // The rest of the search path is about to be unzipped; refuse duplicates
    // before touching anything.
    if contains(slot, &x.key) {
        return Err(x);
    }

    let mut x = x;
    let rest = slot.take();
    let key = &x.key;
    let (low, high, count) = unzip(rest, |k| k < key);
    x.left = low;
    x.right = high;
    *slot = Some(x);
    stats.path_nodes = count.nodes;
    stats.link_writes = 1 + count.link_writes;
    Ok(stats)
}

fn contains<K: Ord, V>(mut link: &Link<K, V>, key: &K) -> bool {
    while let Some(n) = link.as_deref() {
        link = match key.cmp(&n.key) {
            Ordering::Equal => return true,
            Ordering::Less => &n.left,
            Ordering::Greater => &n.right,
        };
    }
    false
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub(crate) struct UnzipCount {
    pub(crate) nodes: usize,
    pub(crate) link_writes: usize,
}

/// Splits the search path starting at `top` into the nodes whose keys satisfy
/// `goes_low` and the rest.
///
/// `goes_low` must be a downward-closed predicate on keys (a prefix of the
/// key order). The low path keeps its nodes' left subtrees and the high path
/// its nodes' right subtrees. Returns the two path tops.
pub(crate) fn unzip<K, V>(mut top: Link<K, V>, goes_low: impl Fn(&K) -> bool) -> (Link<K, V>, Link<K, V>, UnzipCount) {
    let mut count = UnzipCount::default();
    let mut low: Link<K, V> = None;
    let mut high: Link<K, V> = None;
    let mut low_hook = &mut low;
    let mut high_hook = &mut high;

    while let Some(node) = top {
        if goes_low(&node.key) {
            *low_hook = Some(node);
            // Walk the run of low nodes along right links; they stay put.
            let mut hook = low_hook;
            loop {
                count.nodes += 1;
                let n = hook.as_deref().expect("hook holds the run's current node");
                if !n.right.as_deref().is_some_and(|r| goes_low(&r.key)) {
                    break;
                }
                hook = &mut hook.as_mut().expect("checked above").right;
            }
            low_hook = &mut hook.as_mut().expect("checked above").right;
            top = low_hook.take();
        } else {
            *high_hook = Some(node);
            let mut hook = high_hook;
            loop {
                count.nodes += 1;
                let n = hook.as_deref().expect("hook holds the run's current node");
                if n.left.as_deref().is_none_or(|l| goes_low(&l.key)) {
                    break;
                }
                hook = &mut hook.as_mut().expect("checked above").left;
            }
            high_hook = &mut hook.as_mut().expect("checked above").left;
            top = high_hook.take();
        }
        // The link just emptied ends up holding a different node (or none).
        if top.is_some() {
            count.link_writes += 1;
        }
    }
    (low, high, count)
}

/// Deletes the node with `key`, if present.
pub(crate) fn delete<K, V, Q>(root: &mut Link<K, V>, key: &Q) -> Option<(Box<Node<K, V>>, UpdateStats)>
where
    K: Borrow<Q>,
    Q: Ord + ?Sized,
{
    let mut stats = UpdateStats::default();
    let mut slot = root;
    loop {
        let ord = key.cmp(slot.as_deref()?.key.borrow());
        stats.nodes_visited += 1;
        if ord == Ordering::Equal {
            break;
        }
        let cur = slot.as_mut().expect("checked above");
        slot = if ord == Ordering::Less {
            &mut cur.left
        } else {
            &mut cur.right
        };
    }
    let mut x = slot.take().expect("loop stops on the node");
    let left = x.left.take();
    let right = x.right.take();
    let count = zip_into(slot, left, right);
    stats.path_nodes = count.merged + count.tail;
    stats.link_writes = count.link_writes;
    Some((x, stats))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub(crate) struct ZipCount {
    /// Nodes stepped through while both paths were non-empty.
    pub(crate) merged: usize,
    /// Nodes left on the surviving path once the other ran out; attached
    /// wholesale without being visited.
    pub(crate) tail: usize,
    pub(crate) link_writes: usize,
}

/// Zips the right spine of `left` with the left spine of `right` and stores
/// the merged path in `hook`, which must be empty.
///
/// Ranks are non-increasing down the merged path; on equal ranks the node
/// from `left` goes on top. Every key under `left` must be smaller than
/// every key under `right`.
pub(crate) fn zip_into<K, V>(mut hook: &mut Link<K, V>, mut left: Link<K, V>, mut right: Link<K, V>) -> ZipCount {
    debug_assert!(hook.is_none());
    let mut count = ZipCount {
        link_writes: 1,
        ..ZipCount::default()
    };
    loop {
        match (left, right) {
            (None, rest) => {
                count.tail = spine_len(&rest, |n| &n.left);
                *hook = rest;
                return count;
            }
            (rest, None) => {
                count.tail = spine_len(&rest, |n| &n.right);
                *hook = rest;
                return count;
            }
            (Some(l), Some(r)) => {
                if l.rank >= r.rank {
                    let bound = r.rank;
                    *hook = Some(l);
                    let mut h = hook;
                    loop {
                        count.merged += 1;
                        let n = h.as_deref().expect("run node");
                        if !n.right.as_deref().is_some_and(|next| next.rank >= bound) {
                            break;
                        }
                        h = &mut h.as_mut().expect("checked above").right;
                    }
                    hook = &mut h.as_mut().expect("checked above").right;
                    left = hook.take();
                    right = Some(r);
                } else {
                    let bound = l.rank;
                    *hook = Some(r);
                    let mut h = hook;
                    loop {
                        count.merged += 1;
                        let n = h.as_deref().expect("run node");
                        if !n.left.as_deref().is_some_and(|next| next.rank > bound) {
                            break;
                        }
                        h = &mut h.as_mut().expect("checked above").left;
                    }
                    hook = &mut h.as_mut().expect("checked above").left;
                    right = hook.take();
                    left = Some(l);
                }
                // hook now receives the other path's top (or the remainder).
                count.link_writes += 1;
            }
        }
    }
}

fn spine_len<K, V>(mut link: &Link<K, V>, next: impl Fn(&Node<K, V>) -> &Link<K, V>) -> usize {
    let mut len = 0;
    while let Some(n) = link.as_deref() {
        len += 1;
        link = next(n);
    }
    len
}
