//! The zip tree.
//!
//! A zip tree is a binary search tree whose nodes carry random ranks and are
//! max-heap ordered by rank, with ties broken toward smaller keys: a parent's
//! rank is strictly greater than its left child's and at least its right
//! child's. Insertion unzips the search path below the new node's position
//! into the nodes smaller and larger than its key; deletion zips the right
//! spine of the left subtree with the left spine of the right subtree.
//!
//! Updates come in two flavours selected by [`Strategy`]. The recursive form
//! is short reference code whose stack depth equals the search depth
//! (logarithmic with high probability, linear in the worst case). The
//! iterative form runs top-down in constant space and changes at most one
//! child link per restructured node, and is the default.

mod iterative;
mod recursive;

use std::borrow::Borrow;
use std::cmp::Ordering;
use std::fmt;
use std::hash::Hash;

use serde::Serialize;

use crate::error::TreeError;
use crate::rank::{draw_rank, rank_of_key, Rank, RankMode, RankPolicy, RngState};
use crate::shape::{Shape, ShapeNode};

pub(crate) use iterative::{unzip, zip_into};
pub(crate) use recursive::zip as zip_recursive;

pub(crate) type Link<K, V> = Option<Box<Node<K, V>>>;

#[derive(Clone, Debug)]
pub(crate) struct Node<K, V> {
    pub(crate) key: K,
    pub(crate) rank: Rank,
    pub(crate) value: V,
    pub(crate) left: Link<K, V>,
    pub(crate) right: Link<K, V>,
}

impl<K, V> Node<K, V> {
    pub(crate) fn new(key: K, value: V, rank: Rank) -> Box<Node<K, V>> {
        Box::new(Node {
            key,
            rank,
            value,
            left: None,
            right: None,
        })
    }
}

/// Which update algorithms to run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Strategy {
    Recursive,
    #[default]
    Iterative,
}

/// Work done by one insertion or deletion.
///
/// `nodes_visited` counts search-path nodes above the restructured part;
/// `path_nodes` counts nodes on the unzipped path (insert) or on both zipped
/// spines (delete); `link_writes` counts child-link or root assignments made
/// to nodes already in the tree. `rank_ties` counts rank comparisons that
/// came out equal.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct UpdateStats {
    pub nodes_visited: usize,
    pub path_nodes: usize,
    pub link_writes: usize,
    pub rank_ties: usize,
}

#[derive(Debug, PartialEq)]
pub enum InsertOutcome<V> {
    Inserted(UpdateStats),
    /// The key was present; the tree is untouched and the payload is handed back.
    AlreadyPresent(V),
}

impl<V> InsertOutcome<V> {
    pub fn stats(&self) -> Option<UpdateStats> {
        match self {
            InsertOutcome::Inserted(s) => Some(*s),
            InsertOutcome::AlreadyPresent(_) => None,
        }
    }

    pub fn is_inserted(&self) -> bool {
        matches!(self, InsertOutcome::Inserted(_))
    }
}

#[derive(Debug, PartialEq)]
pub enum DeleteOutcome<V> {
    Deleted(V, UpdateStats),
    NotFound,
}

impl<V> DeleteOutcome<V> {
    pub fn stats(&self) -> Option<UpdateStats> {
        match self {
            DeleteOutcome::Deleted(_, s) => Some(*s),
            DeleteOutcome::NotFound => None,
        }
    }
}

/// Result of [`ZipTree::search`].
#[derive(Debug, PartialEq, Eq)]
pub struct SearchResult<'a, V> {
    pub value: Option<&'a V>,
    pub nodes_visited: usize,
}

/// A broken structural invariant found by [`ZipTree::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation<K> {
    /// In-order neighbours out of order.
    SymmetricOrder {
        before: K,
        after: K,
    },
    DuplicateKey(K),
    /// A left child whose rank is not strictly below its parent's.
    LeftRank {
        parent: K,
        child: K,
    },
    /// A right child whose rank exceeds its parent's.
    RightRank {
        parent: K,
        child: K,
    },
    Count {
        recorded: usize,
        reachable: usize,
    },
}

impl<K: fmt::Debug> fmt::Display for Violation<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::SymmetricOrder { before, after } => {
                write!(f, "symmetric order: {before:?} precedes {after:?}")
            }
            Violation::DuplicateKey(k) => write!(f, "duplicate key {k:?}"),
            Violation::LeftRank { parent, child } => {
                write!(
                    f,
                    "heap order: left child {child:?} ranks at least its parent {parent:?}"
                )
            }
            Violation::RightRank { parent, child } => {
                write!(f, "heap order: right child {child:?} outranks its parent {parent:?}")
            }
            Violation::Count { recorded, reachable } => {
                write!(f, "count mismatch: recorded {recorded}, reachable {reachable}")
            }
        }
    }
}

/// An ordered map stored as a zip tree.
#[derive(Clone)]
pub struct ZipTree<K, V> {
    root: Link<K, V>,
    len: usize,
    policy: RankPolicy,
    rng: RngState,
}

impl<K, V> ZipTree<K, V> {
    /// An empty tree; stored ranks are drawn from a generator seeded by
    /// `policy.seed()`.
    pub fn new(policy: RankPolicy) -> ZipTree<K, V> {
        ZipTree {
            root: None,
            len: 0,
            rng: RngState::new(policy.seed()),
            policy,
        }
    }

    pub(crate) fn from_parts(root: Link<K, V>, len: usize, policy: RankPolicy, rng: RngState) -> Self {
        ZipTree { root, len, policy, rng }
    }

    pub(crate) fn into_parts(mut self) -> (Link<K, V>, usize, RankPolicy, RngState) {
        let root = self.root.take();
        let rng = std::mem::replace(&mut self.rng, RngState::new(0));
        (root, self.len, self.policy, rng)
    }

    pub(crate) fn set_len(&mut self, len: usize) {
        self.len = len;
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn policy(&self) -> &RankPolicy {
        &self.policy
    }

    /// Removes every node.
    pub fn clear(&mut self) {
        drop_link(self.root.take());
        self.len = 0;
    }

    pub fn root_rank(&self) -> Option<Rank> {
        self.root.as_ref().map(|n| n.rank)
    }

    pub fn root_key(&self) -> Option<&K> {
        self.root.as_ref().map(|n| &n.key)
    }

    /// In-order iterator over `(key, value, rank)`.
    pub fn iter(&self) -> Iter<'_, K, V> {
        let mut it = Iter { stack: Vec::new() };
        it.push_left(self.root.as_deref());
        it
    }

    pub fn keys(&self) -> impl Iterator<Item = &K> {
        self.iter().map(|(k, _, _)| k)
    }

    pub fn first_key(&self) -> Option<&K> {
        let mut cur = self.root.as_deref()?;
        while let Some(l) = cur.left.as_deref() {
            cur = l;
        }
        Some(&cur.key)
    }

    pub fn last_key(&self) -> Option<&K> {
        let mut cur = self.root.as_deref()?;
        while let Some(r) = cur.right.as_deref() {
            cur = r;
        }
        Some(&cur.key)
    }

    /// Depth of every node, root at depth 0, in preorder.
    pub fn depths(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.len);
        let mut stack: Vec<(&Node<K, V>, usize)> = self.root.as_deref().map(|n| (n, 0)).into_iter().collect();
        while let Some((n, d)) = stack.pop() {
            out.push(d);
            for c in [n.left.as_deref(), n.right.as_deref()].into_iter().flatten() {
                stack.push((c, d + 1));
            }
        }
        out
    }

    /// Number of edges on the longest root-to-leaf path; `None` when empty.
    pub fn height(&self) -> Option<usize> {
        self.depths().into_iter().max()
    }

    /// Rank and descendant count (itself included) of every node.
    pub fn descendant_counts(&self) -> Vec<(Rank, usize)> {
        fn walk<K, V>(n: &Node<K, V>, out: &mut Vec<(Rank, usize)>) -> usize {
            let size =
                1 + n.left.as_deref().map_or(0, |c| walk(c, out)) + n.right.as_deref().map_or(0, |c| walk(c, out));
            out.push((n.rank, size));
            size
        }
        let mut out = Vec::with_capacity(self.len);
        if let Some(r) = self.root.as_deref() {
            walk(r, &mut out);
        }
        out
    }
}

impl<K: Clone, V> ZipTree<K, V> {
    /// Snapshot of keys, ranks and structure.
    pub fn shape(&self) -> Shape<K> {
        fn walk<K: Clone, V>(link: &Link<K, V>) -> Shape<K> {
            Shape(link.as_deref().map(|n| {
                Box::new(ShapeNode {
                    key: n.key.clone(),
                    rank: n.rank,
                    left: walk(&n.left),
                    right: walk(&n.right),
                })
            }))
        }
        walk(&self.root)
    }
}

impl<K: Clone, V: Default> ZipTree<K, V> {
    /// Rebuilds a tree node-for-node from a shape, without checking any
    /// invariant. Used to build fixtures, including deliberately broken ones.
    #[doc(hidden)]
    pub fn from_shape_unchecked(shape: &Shape<K>, policy: RankPolicy) -> ZipTree<K, V> {
        fn build<K: Clone, V: Default>(s: &Shape<K>) -> Link<K, V> {
            s.root().map(|n| {
                Box::new(Node {
                    key: n.key.clone(),
                    rank: n.rank,
                    value: V::default(),
                    left: build(&n.left),
                    right: build(&n.right),
                })
            })
        }
        let mut tree = ZipTree::new(policy);
        tree.root = build(shape);
        tree.len = shape.len();
        tree
    }
}

impl<K: Ord, V> ZipTree<K, V> {
    /// Looks `key` up, reporting how many nodes the search compared.
    pub fn search<Q>(&self, key: &Q) -> SearchResult<'_, V>
    where
        K: Borrow<Q>,
        Q: Ord + ?Sized,
    {
        let mut visited = 0;
        let mut cur = self.root.as_deref();
        while let Some(n) = cur {
            visited += 1;
            match key.cmp(n.key.borrow()) {
                Ordering::Equal => {
                    return SearchResult {
                        value: Some(&n.value),
                        nodes_visited: visited,
                    }
                }
                Ordering::Less => cur = n.left.as_deref(),
                Ordering::Greater => cur = n.right.as_deref(),
            }
        }
        SearchResult {
            value: None,
            nodes_visited: visited,
        }
    }

    pub fn get<Q>(&self, key: &Q) -> Option<&V>
    where
        K: Borrow<Q>,
        Q: Ord + ?Sized,
    {
        self.search(key).value
    }

    pub fn contains_key<Q>(&self, key: &Q) -> bool
    where
        K: Borrow<Q>,
        Q: Ord + ?Sized,
    {
        self.get(key).is_some()
    }

    pub fn rank_of<Q>(&self, key: &Q) -> Option<Rank>
    where
        K: Borrow<Q>,
        Q: Ord + ?Sized,
    {
        let mut cur = self.root.as_deref();
        while let Some(n) = cur {
            match key.cmp(n.key.borrow()) {
                Ordering::Equal => return Some(n.rank),
                Ordering::Less => cur = n.left.as_deref(),
                Ordering::Greater => cur = n.right.as_deref(),
            }
        }
        None
    }

    /// Inserts with the iterative strategy.
    pub fn insert(&mut self, key: K, value: V) -> Result<InsertOutcome<V>, TreeError>
    where
        K: Hash,
    {
        self.insert_with(key, value, Strategy::Iterative)
    }

    /// Inserts `key` with a rank from the tree's policy.
    ///
    /// In stored mode a rank is drawn even when the key turns out to be
    /// present, so the generator advances identically under both strategies.
    pub fn insert_with(&mut self, key: K, value: V, strategy: Strategy) -> Result<InsertOutcome<V>, TreeError>
    where
        K: Hash,
    {
        let rank = match self.policy.mode() {
            RankMode::Stored => draw_rank(&mut self.rng, &self.policy)?,
            RankMode::KeyFunction => rank_of_key(&key, &self.policy)?,
        };
        Ok(self.insert_ranked(key, value, rank, strategy))
    }

    /// Inserts with a caller-chosen rank. Test and fixture hook.
    #[doc(hidden)]
    pub fn insert_ranked(&mut self, key: K, value: V, rank: Rank, strategy: Strategy) -> InsertOutcome<V> {
        let node = Node::new(key, value, rank);
        let result = match strategy {
            Strategy::Iterative => iterative::insert(&mut self.root, node),
            Strategy::Recursive => {
                if self.contains_key(&node.key) {
                    Err(node)
                } else {
                    let root = self.root.take();
                    let (root, stats) = recursive::insert(node, root);
                    self.root = Some(root);
                    Ok(stats)
                }
            }
        };
        match result {
            Ok(stats) => {
                self.len += 1;
                InsertOutcome::Inserted(stats)
            }
            Err(node) => InsertOutcome::AlreadyPresent(node.value),
        }
    }

    /// Removes `key` with the iterative strategy.
    pub fn remove<Q>(&mut self, key: &Q) -> Option<V>
    where
        K: Borrow<Q>,
        Q: Ord + ?Sized,
    {
        match self.delete_with(key, Strategy::Iterative) {
            DeleteOutcome::Deleted(v, _) => Some(v),
            DeleteOutcome::NotFound => None,
        }
    }

    pub fn delete_with<Q>(&mut self, key: &Q, strategy: Strategy) -> DeleteOutcome<V>
    where
        K: Borrow<Q>,
        Q: Ord + ?Sized,
    {
        let removed = match strategy {
            Strategy::Iterative => iterative::delete(&mut self.root, key),
            Strategy::Recursive => match self.root.take() {
                None => None,
                Some(root) => {
                    let (root, removed) = recursive::delete(key, root);
                    self.root = root;
                    removed
                }
            },
        };
        match removed {
            Some((node, stats)) => {
                self.len -= 1;
                DeleteOutcome::Deleted(node.value, stats)
            }
            None => DeleteOutcome::NotFound,
        }
    }
}

impl<K: Ord + Clone, V> ZipTree<K, V> {
    /// Checks symmetric order, the rank heap rule and the element count,
    /// reporting every violation found.
    pub fn validate(&self) -> Result<(), Vec<Violation<K>>> {
        let mut violations = Vec::new();
        let mut reachable = 0;
        let mut prev: Option<&K> = None;
        // In-order walk; heap rule checked when a node is first reached.
        let mut stack: Vec<&Node<K, V>> = Vec::new();
        let mut cur = self.root.as_deref();
        loop {
            while let Some(n) = cur {
                if let Some(l) = n.left.as_deref() {
                    if l.rank >= n.rank {
                        violations.push(Violation::LeftRank {
                            parent: n.key.clone(),
                            child: l.key.clone(),
                        });
                    }
                }
                if let Some(r) = n.right.as_deref() {
                    if r.rank > n.rank {
                        violations.push(Violation::RightRank {
                            parent: n.key.clone(),
                            child: r.key.clone(),
                        });
                    }
                }
                stack.push(n);
                cur = n.left.as_deref();
            }
            let Some(n) = stack.pop() else { break };
            reachable += 1;
            if let Some(p) = prev {
                match p.cmp(&n.key) {
                    Ordering::Less => {}
                    Ordering::Equal => violations.push(Violation::DuplicateKey(n.key.clone())),
                    Ordering::Greater => violations.push(Violation::SymmetricOrder {
                        before: p.clone(),
                        after: n.key.clone(),
                    }),
                }
            }
            prev = Some(&n.key);
            cur = n.right.as_deref();
        }
        if reachable != self.len {
            violations.push(Violation::Count {
                recorded: self.len,
                reachable,
            });
        }
        if violations.is_empty() {
            Ok(())
        } else {
            Err(violations)
        }
    }
}

impl<K: fmt::Debug, V> fmt::Debug for ZipTree<K, V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.iter().map(|(k, _, r)| (k, r))).finish()
    }
}

impl<K, V> Drop for ZipTree<K, V> {
    fn drop(&mut self) {
        drop_link(self.root.take());
    }
}

/// Frees a subtree without recursion, so degenerate trees cannot overflow
/// the stack.
pub(crate) fn drop_link<K, V>(link: Link<K, V>) {
    let mut stack: Vec<Box<Node<K, V>>> = link.into_iter().collect();
    while let Some(mut n) = stack.pop() {
        stack.extend(n.left.take());
        stack.extend(n.right.take());
    }
}

pub struct Iter<'a, K, V> {
    stack: Vec<&'a Node<K, V>>,
}

impl<'a, K, V> Iter<'a, K, V> {
    fn push_left(&mut self, mut cur: Option<&'a Node<K, V>>) {
        while let Some(n) = cur {
            self.stack.push(n);
            cur = n.left.as_deref();
        }
    }
}

impl<'a, K, V> Iterator for Iter<'a, K, V> {
    type Item = (&'a K, &'a V, Rank);

    fn next(&mut self) -> Option<Self::Item> {
        let n = self.stack.pop()?;
        self.push_left(n.right.as_deref());
        Some((&n.key, &n.value, n.rank))
    }
}
