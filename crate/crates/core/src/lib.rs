//! Zip trees: randomized binary search trees updated by unzipping and
//! zipping paths instead of rotating.
//!
//! ```
//! use ziptree::{RankPolicy, ZipTree};
//!
//! let mut map = ZipTree::new(RankPolicy::stored(7));
//! for k in [5u64, 1, 9, 3] {
//!     map.insert(k, k * 10).unwrap();
//! }
//! assert_eq!(map.get(&3), Some(&30));
//! assert_eq!(map.remove(&5), Some(50));
//! assert!(map.validate().is_ok());
//! ```
//!
//! Besides the map itself the crate carries the machinery used to check it:
//! a brute-force [`oracle`] for tree shapes, the [`skiplist`] correspondence,
//! whole-tree [`split`] and [`catenate`], and statistical [`experiments`].

pub mod error;
pub mod experiments;
pub mod oracle;
pub mod rank;
pub mod shape;
pub mod skiplist;
pub mod structural;
pub mod tree;

pub use error::{DuplicateKeys, RankError, SkipListError, TreeError};
pub use oracle::{canonical_build, KeyRankSet};
pub use rank::{compare_ranks, draw_rank, rank_of_key, Rank, RankMode, RankPolicy, RngState};
pub use shape::{shape_equal, Shape, ShapeNode};
pub use skiplist::SkipList;
pub use structural::{catenate, split, unzip, zip, CatenateStats, Halves};
pub use tree::{DeleteOutcome, InsertOutcome, SearchResult, Strategy, UpdateStats, Violation, ZipTree};
