//! Brute-force ground truth for tree shapes.
//!
//! A zip tree is determined by its keys and ranks: the root is the node of
//! minimum key among those of maximum rank, and the two subtrees are built
//! the same way from the smaller and larger keys. This module applies that
//! rule directly, in quadratic time, with no shared code path to the update
//! algorithms it is used to check.

use std::collections::BTreeSet;

use crate::error::DuplicateKeys;
use crate::rank::Rank;
use crate::shape::Shape;

/// A set of `(key, rank)` pairs with distinct keys.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KeyRankSet<K> {
    pairs: Vec<(K, Rank)>,
}

impl<K: Ord + Clone> KeyRankSet<K> {
    pub fn new(pairs: Vec<(K, Rank)>) -> Result<KeyRankSet<K>, DuplicateKeys> {
        let distinct: BTreeSet<&K> = pairs.iter().map(|(k, _)| k).collect();
        if distinct.len() != pairs.len() {
            return Err(DuplicateKeys);
        }
        Ok(KeyRankSet { pairs })
    }

    /// Integer-ranked pairs.
    pub fn from_integer_ranks(pairs: &[(K, u32)]) -> Result<KeyRankSet<K>, DuplicateKeys> {
        KeyRankSet::new(pairs.iter().map(|(k, r)| (k.clone(), Rank::integer(*r))).collect())
    }

    pub fn pairs(&self) -> &[(K, Rank)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

/// Builds the unique zip-tree shape over `set`.
pub fn canonical_build<K: Ord + Clone>(set: &KeyRankSet<K>) -> Shape<K> {
    let refs: Vec<&(K, Rank)> = set.pairs.iter().collect();
    build(&refs)
}

/// Convenience wrapper: checks for duplicates, then builds.
pub fn canonical_shape<K: Ord + Clone>(pairs: &[(K, Rank)]) -> Result<Shape<K>, DuplicateKeys> {
    Ok(canonical_build(&KeyRankSet::new(pairs.to_vec())?))
}

fn build<K: Ord + Clone>(pairs: &[&(K, Rank)]) -> Shape<K> {
    let Some(max_rank) = pairs.iter().map(|(_, r)| *r).max() else {
        return Shape::empty();
    };
    let (root_key, root_rank) = pairs
        .iter()
        .filter(|(_, r)| *r == max_rank)
        .min_by(|a, b| a.0.cmp(&b.0))
        .expect("some pair has the maximum rank");
    let smaller: Vec<_> = pairs.iter().copied().filter(|(k, _)| k < root_key).collect();
    let larger: Vec<_> = pairs.iter().copied().filter(|(k, _)| k > root_key).collect();
    Shape::node(root_key.clone(), *root_rank, build(&smaller), build(&larger))
}
