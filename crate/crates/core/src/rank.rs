//! Node ranks and the policies that generate them.
//!
//! A rank is an integer part drawn from a geometric distribution plus an
//! optional fixed-precision fractional part used to break ties. Ranks are
//! compared as the number `k + f`.
//!
//! The integer part follows `P(k) = p^k (1 - p)`, so at the default
//! `p = 1/2` a rank of `k` has probability `1 / 2^(k+1)` and the mean is 1.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use rand::{Rng, RngCore, SeedableRng};
use rand_distr::{Distribution, Geometric, StandardGeometric};
use rand_xoshiro::SplitMix64;
use serde::{Deserialize, Serialize};
use siphasher::sip::SipHasher13;

use crate::error::RankError;

/// Integer parts at or above this value are rejected as a generator fault.
pub const RANK_CEILING: u32 = 1 << 16;

/// Widest supported fractional part, in bits.
pub const MAX_FRACTIONAL_BITS: u8 = 64;

/// A node rank `k + f`, where `f = numerator / 2^bits`.
///
/// Equality and ordering are numeric, so `(2, 1/2)` equals `(2, 2/4)`.
#[derive(Clone, Copy, Default, Serialize, Deserialize)]
pub struct Rank {
    integer: u32,
    numerator: u64,
    bits: u8,
}

impl Rank {
    /// A rank with no fractional part.
    pub const fn integer(k: u32) -> Rank {
        Rank {
            integer: k,
            numerator: 0,
            bits: 0,
        }
    }

    /// A rank `k + numerator / 2^bits`.
    pub fn new(k: u32, numerator: u64, bits: u8) -> Result<Rank, RankError> {
        if bits > MAX_FRACTIONAL_BITS {
            return Err(RankError::Precision(bits));
        }
        if bits < 64 && numerator >> bits != 0 {
            return Err(RankError::Numerator { numerator, bits });
        }
        Ok(Rank {
            integer: k,
            numerator,
            bits,
        })
    }

    pub fn integer_part(&self) -> u32 {
        self.integer
    }

    pub fn numerator(&self) -> u64 {
        self.numerator
    }

    pub fn fractional_bits(&self) -> u8 {
        self.bits
    }

    /// True when the fractional part is zero, whatever its precision.
    pub fn is_integral(&self) -> bool {
        self.numerator == 0
    }

    /// The fractional numerator rescaled to 64 bits of precision.
    fn scaled_fraction(&self) -> u128 {
        (self.numerator as u128) << (64 - self.bits as u32)
    }
}

impl Ord for Rank {
    fn cmp(&self, other: &Self) -> Ordering {
        self.integer
            .cmp(&other.integer)
            .then_with(|| self.scaled_fraction().cmp(&other.scaled_fraction()))
    }
}

impl PartialOrd for Rank {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl PartialEq for Rank {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Rank {}

impl fmt::Debug for Rank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Rank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.bits == 0 {
            write!(f, "{}", self.integer)
        } else {
            write!(f, "{}+{}/2^{}", self.integer, self.numerator, self.bits)
        }
    }
}

/// Compares two ranks by numeric value.
pub fn compare_ranks(a: &Rank, b: &Rank) -> Ordering {
    a.cmp(b)
}

/// Where ranks come from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RankMode {
    /// Drawn from the tree's generator at insertion and stored in the node.
    Stored,
    /// Recomputed as a keyed hash of the node's key.
    KeyFunction,
}

/// Parameters of rank generation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RankPolicy {
    mode: RankMode,
    p: f64,
    fractional_bits: u8,
    seed: u64,
}

impl Default for RankPolicy {
    fn default() -> Self {
        RankPolicy {
            mode: RankMode::Stored,
            p: 0.5,
            fractional_bits: 0,
            seed: 0,
        }
    }
}

impl RankPolicy {
    /// Stored geometric ranks with `p = 1/2` and no fractional part.
    pub fn stored(seed: u64) -> RankPolicy {
        RankPolicy {
            seed,
            ..RankPolicy::default()
        }
    }

    /// Ranks computed from keys, keyed by `seed`.
    pub fn key_function(seed: u64) -> RankPolicy {
        RankPolicy {
            mode: RankMode::KeyFunction,
            seed,
            ..RankPolicy::default()
        }
    }

    /// Sets the continuation probability `p`; must lie strictly in `(0, 1)`.
    pub fn with_p(mut self, p: f64) -> Result<RankPolicy, RankError> {
        if !(p > 0.0 && p < 1.0) {
            return Err(RankError::Probability(p));
        }
        self.p = p;
        Ok(self)
    }

    pub fn with_fractional_bits(mut self, bits: u8) -> Result<RankPolicy, RankError> {
        if bits > MAX_FRACTIONAL_BITS {
            return Err(RankError::Precision(bits));
        }
        self.fractional_bits = bits;
        Ok(self)
    }

    pub fn with_seed(mut self, seed: u64) -> RankPolicy {
        self.seed = seed;
        self
    }

    pub fn mode(&self) -> RankMode {
        self.mode
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn fractional_bits(&self) -> u8 {
        self.fractional_bits
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

/// Seedable deterministic generator used for rank draws and experiments.
///
/// This is SplitMix64: a single 64-bit state advanced by a Weyl increment
/// and finalized by a 64-bit mixing function. The same seed always yields
/// the same sequence, on every platform.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RngState(SplitMix64);

impl RngState {
    pub fn new(seed: u64) -> RngState {
        RngState(SplitMix64::seed_from_u64(seed))
    }

    /// Generator for sub-stream `index` of `master`, e.g. one per trial.
    pub fn derive(master: u64, index: u64) -> RngState {
        let mut mixer = SplitMix64::seed_from_u64(master ^ index.wrapping_mul(0xA24B_AED4_963E_E407));
        RngState::new(mixer.next_u64())
    }
}

impl RngCore for RngState {
    fn next_u32(&mut self) -> u32 {
        self.0.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.0.fill_bytes(dst)
    }
}

/// Draws a fresh rank, advancing `rng`.
///
/// The integer part is geometric with `P(k) = p^k (1 - p)`; the fractional
/// numerator is uniform over `0..2^fractional_bits`. Fails only if the
/// integer part reaches [`RANK_CEILING`], which signals a broken generator
/// or a `p` absurdly close to 1.
pub fn draw_rank<R: RngCore + ?Sized>(rng: &mut R, policy: &RankPolicy) -> Result<Rank, RankError> {
    let k = if policy.p == 0.5 {
        StandardGeometric.sample(rng)
    } else {
        // rand_distr counts failures before a success of probability 1 - p.
        Geometric::new(1.0 - policy.p)
            .map_err(|_| RankError::Probability(policy.p))?
            .sample(rng)
    };
    if k >= RANK_CEILING as u64 {
        return Err(RankError::Ceiling(k));
    }
    let bits = policy.fractional_bits;
    let numerator = match bits {
        0 => 0,
        64 => rng.next_u64(),
        b => rng.random_range(0..1u64 << b),
    };
    Ok(Rank {
        integer: k as u32,
        numerator,
        bits,
    })
}

/// The rank of `key` under a key-function policy.
///
/// The key is hashed with SipHash-1-3 keyed by the policy seed; the hash
/// seeds a private generator from which one rank is drawn. Equal
/// `(key, seed)` pairs always give equal ranks.
pub fn rank_of_key<K: Hash + ?Sized>(key: &K, policy: &RankPolicy) -> Result<Rank, RankError> {
    let mut hasher = SipHasher13::new_with_keys(policy.seed, 0x7a69_7074_7265_6573);
    key.hash(&mut hasher);
    let mut rng = RngState::new(hasher.finish());
    draw_rank(&mut rng, policy)
}
