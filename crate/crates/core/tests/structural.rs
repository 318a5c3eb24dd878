use rand::Rng;
use ziptree::oracle::canonical_shape;
use ziptree::{catenate, split, Rank, RankPolicy, RngState, Shape, TreeError, ZipTree};

fn random_tree(rng: &mut RngState, seed: u64, max: usize) -> ZipTree<i64, i64> {
    let n = rng.random_range(0..=max);
    let mut t = ZipTree::new(RankPolicy::stored(seed));
    while t.len() < n {
        let k = rng.random_range(0..4 * max as i64);
        t.insert(k, -k).unwrap();
    }
    t
}

fn oracle_of(t: &ZipTree<i64, i64>) -> Shape<i64> {
    canonical_shape(&t.iter().map(|(k, _, r)| (*k, r)).collect::<Vec<_>>()).unwrap()
}

fn spine<K: Clone>(shape: &Shape<K>, right: bool) -> Vec<Rank> {
    let mut out = Vec::new();
    let mut node = shape.root();
    while let Some(n) = node {
        out.push(n.rank);
        node = if right { n.right.root() } else { n.left.root() };
    }
    out
}

#[test]
fn catenate_of_split_restores_the_tree() {
    let mut rng = RngState::new(5);
    for seed in 0..1000 {
        let t = random_tree(&mut rng, seed, 100);
        let shape = t.shape();
        let len = t.len();
        let at = rng.random_range(-2..402);
        let (mut low, mut high) = split(t, &at);
        assert!(low.keys().all(|k| *k <= at));
        assert!(high.keys().all(|k| *k > at));
        assert_eq!(low.len() + high.len(), len);
        assert_eq!(low.len(), low.iter().count());
        assert_eq!(high.len(), high.iter().count());
        assert!(low.validate().is_ok() && high.validate().is_ok());
        assert_eq!(low.shape(), oracle_of(&low), "seed {seed} low side");
        assert_eq!(high.shape(), oracle_of(&high), "seed {seed} high side");
        let (joined, _) = catenate(&mut low, &mut high).unwrap();
        assert!(low.is_empty() && high.is_empty());
        assert_eq!(joined.shape(), shape, "seed {seed} split at {at}");
        assert_eq!(joined.len(), len);
    }
}

#[test]
fn catenate_cost_matches_a_merge_of_the_spines() {
    let mut rng = RngState::new(6);
    for seed in 0..500 {
        let t = random_tree(&mut rng, seed, 60);
        let at = rng.random_range(0..240);
        let (mut low, mut high) = split(t, &at);
        let a = spine(&low.shape(), true);
        let b = spine(&high.shape(), false);
        // Top-down merge by rank, the lower side winning ties.
        let (mut i, mut j, mut merged) = (0, 0, 0);
        while i < a.len() && j < b.len() {
            if a[i] >= b[j] {
                i += 1;
            } else {
                j += 1;
            }
            merged += 1;
        }
        let (_, st) = catenate(&mut low, &mut high).unwrap();
        assert_eq!(st.nodes_visited, merged, "seed {seed}");
        assert_eq!(st.nodes_visited + st.tail_nodes, a.len() + b.len());
        assert!(st.link_writes <= st.nodes_visited + st.tail_nodes + 1);
    }
}

#[test]
fn catenate_rejects_overlap_and_policy_mismatch() {
    let mut low: ZipTree<i64, ()> = ZipTree::new(RankPolicy::default());
    let mut high: ZipTree<i64, ()> = ZipTree::new(RankPolicy::default());
    low.insert_ranked(5, (), Rank::integer(1), Default::default());
    high.insert_ranked(5, (), Rank::integer(0), Default::default());
    assert_eq!(catenate(&mut low, &mut high).unwrap_err(), TreeError::KeyOverlap);
    assert_eq!(low.len(), 1);
    assert_eq!(high.len(), 1);

    let mut other: ZipTree<i64, ()> = ZipTree::new(RankPolicy::stored(3));
    assert_eq!(catenate(&mut low, &mut other).unwrap_err(), TreeError::PolicyMismatch);

    let mut empty: ZipTree<i64, ()> = ZipTree::new(RankPolicy::default());
    let (joined, st) = catenate(&mut low, &mut empty).unwrap();
    assert_eq!(joined.len(), 1);
    assert_eq!(st.nodes_visited, 0);
}

#[test]
fn unzip_refuses_present_keys() {
    let mut t: ZipTree<i64, ()> = ZipTree::new(RankPolicy::default());
    for k in [1, 4, 9] {
        t.insert(k, ()).unwrap();
    }
    assert_eq!(ziptree::unzip(&mut t, &4).unwrap_err(), TreeError::KeyPresent);
    assert_eq!(t.len(), 3);
    let (low, high) = ziptree::unzip(&mut t, &5).unwrap();
    assert_eq!(low.keys().copied().collect::<Vec<_>>(), vec![1, 4]);
    assert_eq!(high.keys().copied().collect::<Vec<_>>(), vec![9]);
}

#[test]
fn split_sides_keep_working_as_maps() {
    let mut rng = RngState::new(8);
    let t = random_tree(&mut rng, 1, 200);
    let (mut low, mut high) = split(t, &300);
    for k in 300..310 {
        low.insert(k - 1000, 0).unwrap();
        high.insert(k + 1000, 0).unwrap();
    }
    assert!(low.validate().is_ok() && high.validate().is_ok());
    assert_eq!(low.shape(), oracle_of(&low));
    assert_eq!(high.shape(), oracle_of(&high));
}
