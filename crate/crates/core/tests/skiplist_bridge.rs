use std::collections::HashSet;

use rand::Rng;
use ziptree::skiplist::{skiplist_to_tree, tree_to_skiplist};
use ziptree::{canonical_build, KeyRankSet, RankPolicy, RngState, SkipList, SkipListError, ZipTree};

/// Random tree of up to 64 keys drawn from 0..200, stored fair ranks.
fn random_tree(rng: &mut RngState, seed: u64) -> ZipTree<u32, ()> {
    let n = rng.random_range(0..=64);
    let mut t = ZipTree::new(RankPolicy::stored(seed));
    while t.len() < n {
        t.insert(rng.random_range(0..200), ()).unwrap();
    }
    t
}

/// Parent by the skip-list rule: `y`, the nearest smaller key with rank at
/// least x's, or `z`, the nearest larger key with rank above x's, whichever
/// ranks lower, ties going to `z`.
fn rule_parent(items: &[(u32, u32)], i: usize) -> Option<u32> {
    let r = items[i].1;
    let y = items[..i].iter().rev().find(|p| p.1 >= r);
    let z = items[i + 1..].iter().find(|p| p.1 > r);
    match (y, z) {
        (None, None) => None,
        (Some(y), None) => Some(y.0),
        (None, Some(z)) => Some(z.0),
        (Some(y), Some(z)) => Some(if y.1 < z.1 { y.0 } else { z.0 }),
    }
}

#[test]
fn conversions_are_mutual_inverses() {
    let mut rng = RngState::new(91);
    for seed in 0..1000 {
        let t = random_tree(&mut rng, seed);
        let list = tree_to_skiplist(&t).unwrap();
        let expected_copies: usize = t.iter().map(|(_, _, r)| r.integer_part() as usize + 1).sum();
        assert_eq!(list.total_copies(), expected_copies);
        for (k, _, r) in t.iter() {
            assert_eq!(list.item_level(k), Some(r.integer_part()));
        }
        let back = skiplist_to_tree(&list, RankPolicy::default());
        assert_eq!(back.shape(), t.shape(), "seed {seed}");
        assert!(back.validate().is_ok());
        assert_eq!(tree_to_skiplist(&back).unwrap(), list);
        let set = KeyRankSet::new(
            list.levels()[0]
                .iter()
                .filter_map(|k| k.item())
                .map(|k| (*k, back.rank_of(k).unwrap()))
                .collect(),
        )
        .unwrap();
        assert_eq!(canonical_build(&set), back.shape());
    }
}

#[test]
fn parents_follow_the_skip_list_rule() {
    let mut rng = RngState::new(92);
    for seed in 0..300 {
        let t = random_tree(&mut rng, seed);
        let items: Vec<(u32, u32)> = t.iter().map(|(k, _, r)| (*k, r.integer_part())).collect();
        let shape = t.shape();
        let actual = shape.parents();
        assert_eq!(actual.len(), items.len());
        for (key, parent) in actual {
            let i = items.binary_search_by_key(key, |p| p.0).unwrap();
            assert_eq!(parent.copied(), rule_parent(&items, i), "seed {seed} key {key}");
        }
    }
}

#[test]
fn tree_search_never_costs_more_than_skip_list_search() {
    let mut rng = RngState::new(93);
    for seed in 0..1000 {
        let t = random_tree(&mut rng, seed);
        let list = tree_to_skiplist(&t).unwrap();
        for probe in 0..201 {
            let (found, trace) = list.search(&probe);
            assert_eq!(found, t.contains_key(&probe));
            let items: HashSet<u32> = trace.iter().map(|&(k, _)| *k).collect();
            let mut node = t.shape().0;
            let mut path = Vec::new();
            while let Some(n) = node {
                path.push(n.key);
                node = match probe.cmp(&n.key) {
                    std::cmp::Ordering::Equal => None,
                    std::cmp::Ordering::Less => n.left.0,
                    std::cmp::Ordering::Greater => n.right.0,
                };
            }
            assert_eq!(path.len(), t.search(&probe).nodes_visited);
            assert!(
                path.iter().all(|k| items.contains(k)),
                "seed {seed} probe {probe}: {path:?} vs {trace:?}"
            );
            assert!(path.len() <= trace.len());
        }
    }
}

#[test]
fn smallest_key_search_walks_header_successors() {
    let list = SkipList::from_item_levels([(1, 2), (5, 0), (9, 1)]).unwrap();
    let (found, trace) = list.search(&1);
    assert!(found);
    assert_eq!(trace, vec![(&1, 2)]);
    let (found, trace) = list.search(&0);
    assert!(!found);
    assert_eq!(trace, vec![(&1, 2)]);
}

#[test]
fn malformed_levels_are_rejected() {
    assert!(matches!(
        SkipList::from_levels(vec![vec![1, 2], vec![3]]),
        Err(SkipListError::MalformedLevels(_))
    ));
    assert!(matches!(
        SkipList::from_levels(vec![vec![2, 1]]),
        Err(SkipListError::MalformedLevels(_))
    ));
    let list = SkipList::from_levels(vec![vec![1, 2, 3], vec![3]]).unwrap();
    assert_eq!(list.item_level(&3), Some(1));
    assert_eq!(list.item_level(&1), Some(0));
}
