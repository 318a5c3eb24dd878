//! Structural snapshots of trees.
//!
//! A [`Shape`] records keys, ranks and child structure and nothing else. Two
//! zip trees over the same `(key, rank)` set always have equal shapes, which
//! is what the structural tests compare. The serde form is the structure
//! dump used by the CLI:
//!
//! ```text
//! {"key":2,"rank":{"integer":1,"numerator":0,"bits":0},"left":{...},"right":null}
//! ```

use std::fmt::Debug;

use serde::{Deserialize, Serialize};

use crate::rank::Rank;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShapeNode<K> {
    pub key: K,
    pub rank: Rank,
    pub left: Shape<K>,
    pub right: Shape<K>,
}

/// A possibly empty tree shape.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Shape<K>(pub Option<Box<ShapeNode<K>>>);

impl<K> Default for Shape<K> {
    fn default() -> Self {
        Shape(None)
    }
}

impl<K> Shape<K> {
    pub fn empty() -> Shape<K> {
        Shape(None)
    }

    pub fn node(key: K, rank: Rank, left: Shape<K>, right: Shape<K>) -> Shape<K> {
        Shape(Some(Box::new(ShapeNode { key, rank, left, right })))
    }

    /// Leaf with an integer rank.
    pub fn leaf(key: K, rank: u32) -> Shape<K> {
        Shape::node(key, Rank::integer(rank), Shape::empty(), Shape::empty())
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_none()
    }

    pub fn root(&self) -> Option<&ShapeNode<K>> {
        self.0.as_deref()
    }

    pub fn len(&self) -> usize {
        self.root().map_or(0, |n| 1 + n.left.len() + n.right.len())
    }

    /// In-order `(key, rank)` pairs.
    pub fn pairs(&self) -> Vec<(&K, Rank)> {
        let mut out = Vec::new();
        fn walk<'a, K>(s: &'a Shape<K>, out: &mut Vec<(&'a K, Rank)>) {
            if let Some(n) = s.root() {
                walk(&n.left, out);
                out.push((&n.key, n.rank));
                walk(&n.right, out);
            }
        }
        walk(self, &mut out);
        out
    }

    /// For every node in preorder, its key and its parent's key (root has none).
    pub fn parents(&self) -> Vec<(&K, Option<&K>)> {
        let mut out = Vec::new();
        let mut stack = Vec::new();
        if let Some(n) = self.root() {
            stack.push((n, None));
        }
        while let Some((n, parent)) = stack.pop() {
            out.push((&n.key, parent));
            for child in [&n.left, &n.right] {
                if let Some(c) = child.root() {
                    stack.push((c, Some(&n.key)));
                }
            }
        }
        out
    }
}

impl<K: Serialize> Shape<K> {
    /// Compact single-line JSON structure dump.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("shape serialization cannot fail")
    }
}

/// Node-for-node equality of key, rank and child structure.
pub fn shape_equal<K: PartialEq>(a: &Shape<K>, b: &Shape<K>) -> bool {
    a == b
}

impl<K: Debug> Shape<K> {
    /// Indented multi-line rendering, right subtree on top.
    pub fn pretty(&self) -> String {
        let mut out = String::new();
        fn walk<K: Debug>(s: &Shape<K>, depth: usize, out: &mut String) {
            if let Some(n) = s.root() {
                walk(&n.right, depth + 1, out);
                out.push_str(&format!("{}{:?} r{}\n", "    ".repeat(depth), n.key, n.rank));
                walk(&n.left, depth + 1, out);
            }
        }
        walk(self, 0, &mut out);
        out
    }
}
