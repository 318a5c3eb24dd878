use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RankError {
    #[error("continuation probability {0} is not strictly between 0 and 1")]
    Probability(f64),
    #[error("fractional precision of {0} bits exceeds 64")]
    Precision(u8),
    #[error("fractional numerator {numerator} does not fit in {bits} bits")]
    Numerator { numerator: u64, bits: u8 },
    #[error("drawn rank {0} reached the rank ceiling")]
    Ceiling(u64),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TreeError {
    #[error("key is already present in the subtree")]
    KeyPresent,
    #[error("key ranges of the trees overlap")]
    KeyOverlap,
    #[error("trees use different rank policies")]
    PolicyMismatch,
    #[error(transparent)]
    Rank(#[from] RankError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SkipListError {
    #[error("tree has fractional ranks; skip-list levels need integer ranks")]
    FractionalRanks,
    #[error("malformed skip list: {0}")]
    MalformedLevels(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("key set contains duplicate keys")]
pub struct DuplicateKeys;
