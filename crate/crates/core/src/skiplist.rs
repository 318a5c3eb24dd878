//! Skip lists and their correspondence with zip trees.
//!
//! A zip tree is a compact encoding of a skip list: an item whose node has
//! rank `k` appears in levels `0..=k`. Converting in either direction keeps
//! keys and ranks, so by uniqueness of zip-tree shapes the conversions are
//! mutual inverses. Every level starts with a header sentinel that sorts
//! below all keys.
//!
//! Skip lists here are built only from trees or from explicit levels; they
//! have no update operations of their own.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use crate::error::SkipListError;
use crate::rank::{Rank, RankPolicy};
use crate::tree::{Strategy, ZipTree};

/// An entry of a level list: the header or a real key.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum SkipKey<K> {
    Header,
    Item(K),
}

impl<K> SkipKey<K> {
    pub fn item(&self) -> Option<&K> {
        match self {
            SkipKey::Header => None,
            SkipKey::Item(k) => Some(k),
        }
    }
}

/// Items compared by a skip-list search, as `(key, level)` in visit order.
pub type VisitTrace<'a, K> = Vec<(&'a K, u32)>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkipList<K> {
    levels: Vec<Vec<SkipKey<K>>>,
    item_level: BTreeMap<K, u32>,
}

impl<K: Ord + Clone> SkipList<K> {
    /// A skip list with one level holding only the header.
    pub fn empty() -> SkipList<K> {
        SkipList {
            levels: vec![vec![SkipKey::Header]],
            item_level: BTreeMap::new(),
        }
    }

    /// Builds from explicit level lists (level 0 first, headers omitted).
    ///
    /// Every level must be strictly increasing and contained in the level
    /// below it.
    pub fn from_levels(levels: Vec<Vec<K>>) -> Result<SkipList<K>, SkipListError> {
        if levels.is_empty() {
            return Err(SkipListError::MalformedLevels("no levels".into()));
        }
        for (i, level) in levels.iter().enumerate() {
            if level.windows(2).any(|w| w[0] >= w[1]) {
                return Err(SkipListError::MalformedLevels(format!(
                    "level {i} is not strictly increasing"
                )));
            }
            if i > 0 {
                let below = &levels[i - 1];
                if let Some(pos) = level.iter().position(|k| below.binary_search(k).is_err()) {
                    return Err(SkipListError::MalformedLevels(format!(
                        "item {pos} of level {i} is missing from level {}",
                        i - 1
                    )));
                }
            }
        }
        let mut item_level = BTreeMap::new();
        for (i, level) in levels.iter().enumerate() {
            for k in level {
                item_level.insert(k.clone(), i as u32);
            }
        }
        let levels = levels
            .into_iter()
            .map(|l| {
                std::iter::once(SkipKey::Header)
                    .chain(l.into_iter().map(SkipKey::Item))
                    .collect()
            })
            .collect();
        Ok(SkipList { levels, item_level })
    }

    /// Builds from items and the highest level each one reaches.
    pub fn from_item_levels(items: impl IntoIterator<Item = (K, u32)>) -> Result<SkipList<K>, SkipListError> {
        let item_level: BTreeMap<K, u32> = items.into_iter().collect();
        let top = item_level.values().copied().max().unwrap_or(0);
        let levels = (0..=top)
            .map(|i| {
                item_level
                    .iter()
                    .filter(|(_, &l)| l >= i)
                    .map(|(k, _)| k.clone())
                    .collect()
            })
            .collect();
        SkipList::from_levels(levels)
    }

    /// Level lists, level 0 first, each beginning with the header.
    pub fn levels(&self) -> &[Vec<SkipKey<K>>] {
        &self.levels
    }

    pub fn item_level(&self, key: &K) -> Option<u32> {
        self.item_level.get(key).copied()
    }

    pub fn len(&self) -> usize {
        self.item_level.len()
    }

    pub fn is_empty(&self) -> bool {
        self.item_level.is_empty()
    }

    /// Item copies summed over all levels, headers excluded.
    pub fn total_copies(&self) -> usize {
        self.levels.iter().map(|l| l.len() - 1).sum()
    }

    /// Searches top-down, recording each item compared against `key`.
    ///
    /// Within a level the search moves right past smaller items; on meeting a
    /// larger item or the end of the list it drops to the same position one
    /// level down. An item already known to be larger is not compared again
    /// at lower levels, and header hops cost nothing.
    pub fn search(&self, key: &K) -> (bool, VisitTrace<'_, K>) {
        let mut trace = Vec::new();
        let mut level = self.levels.len() - 1;
        let mut pos = 0;
        let mut bound: Option<&K> = None;
        loop {
            let list = &self.levels[level];
            while let Some(next) = list.get(pos + 1).and_then(SkipKey::item) {
                if bound == Some(next) {
                    break;
                }
                trace.push((next, level as u32));
                match next.cmp(key) {
                    Ordering::Less => pos += 1,
                    Ordering::Equal => return (true, trace),
                    Ordering::Greater => {
                        bound = Some(next);
                        break;
                    }
                }
            }
            if level == 0 {
                return (false, trace);
            }
            let here = &list[pos];
            level -= 1;
            pos = match here {
                SkipKey::Header => 0,
                item => self.levels[level].binary_search(item).expect("levels are nested"),
            };
        }
    }

    /// The zip tree with the same items, each ranked by its top level.
    pub fn to_tree(&self, policy: RankPolicy) -> ZipTree<K, ()> {
        let mut tree = ZipTree::new(policy);
        for (k, &level) in &self.item_level {
            tree.insert_ranked(k.clone(), (), Rank::integer(level), Strategy::Iterative);
        }
        tree
    }
}

/// Skip list whose items are the tree's keys at levels `0..=rank`.
pub fn tree_to_skiplist<K: Ord + Clone, V>(tree: &ZipTree<K, V>) -> Result<SkipList<K>, SkipListError> {
    let mut items = Vec::with_capacity(tree.len());
    for (k, _, rank) in tree.iter() {
        if rank.fractional_bits() != 0 {
            return Err(SkipListError::FractionalRanks);
        }
        items.push((k.clone(), rank.integer_part()));
    }
    SkipList::from_item_levels(items)
}

pub fn skiplist_to_tree<K: Ord + Clone>(list: &SkipList<K>, policy: RankPolicy) -> ZipTree<K, ()> {
    list.to_tree(policy)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn abc() -> SkipList<char> {
        SkipList::from_item_levels([('A', 1), ('B', 0), ('C', 2)]).unwrap()
    }

    #[test]
    fn empty_list_has_header_level() {
        let s = SkipList::<u32>::empty();
        assert_eq!(s.levels(), &[vec![SkipKey::Header]]);
        assert_eq!(s.search(&5), (false, vec![]));
        let tree: ZipTree<u32, ()> = ZipTree::new(RankPolicy::default());
        assert_eq!(tree_to_skiplist(&tree).unwrap(), s);
    }

    #[test]
    fn levels_from_ranks() {
        let s = abc();
        let items = |i: usize| {
            s.levels()[i]
                .iter()
                .filter_map(SkipKey::item)
                .copied()
                .collect::<String>()
        };
        assert_eq!(s.levels().len(), 3);
        assert_eq!(items(0), "ABC");
        assert_eq!(items(1), "AC");
        assert_eq!(items(2), "C");
        assert_eq!(s.total_copies(), 2 + 1 + 3);
    }

    #[test]
    fn search_trace() {
        let s = abc();
        let (found, trace) = s.search(&'B');
        assert!(found);
        assert_eq!(trace, vec![(&'C', 2), (&'A', 1), (&'B', 0)]);
        // Smallest key: the header's successor at each level it appears.
        let (found, trace) = s.search(&'A');
        assert!(found);
        assert_eq!(trace, vec![(&'C', 2), (&'A', 1)]);
        let (found, trace) = s.search(&'D');
        assert!(!found);
        assert_eq!(trace, vec![(&'C', 2)]);
    }

    #[test]
    fn to_tree_shape() {
        let t = abc().to_tree(RankPolicy::default());
        let shape = t.shape();
        let root = shape.root().unwrap();
        assert_eq!((root.key, root.rank), ('C', Rank::integer(2)));
        let a = root.left.root().unwrap();
        assert_eq!((a.key, a.rank), ('A', Rank::integer(1)));
        assert_eq!(a.right.root().unwrap().key, 'B');
        assert!(root.right.is_empty() && a.left.is_empty());
    }

    #[test]
    fn single_item() {
        let s = SkipList::from_levels(vec![vec![7]]).unwrap();
        let t = s.to_tree(RankPolicy::default());
        assert_eq!(t.len(), 1);
        assert_eq!(t.root_rank(), Some(Rank::integer(0)));
    }

    #[test]
    fn malformed_levels() {
        assert!(matches!(
            SkipList::from_levels(vec![vec![1, 2], vec![3]]),
            Err(SkipListError::MalformedLevels(_))
        ));
        assert!(matches!(
            SkipList::from_levels(vec![vec![2, 1]]),
            Err(SkipListError::MalformedLevels(_))
        ));
        assert!(matches!(
            SkipList::<u8>::from_levels(vec![]),
            Err(SkipListError::MalformedLevels(_))
        ));
    }

    #[test]
    fn fractional_tree_rejected() {
        let mut t: ZipTree<u8, ()> = ZipTree::new(RankPolicy::default());
        t.insert_ranked(1, (), Rank::new(0, 1, 2).unwrap(), Strategy::Iterative);
        assert_eq!(tree_to_skiplist(&t), Err(SkipListError::FractionalRanks));
    }
}
