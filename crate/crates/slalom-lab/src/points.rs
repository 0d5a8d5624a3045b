//! Elements of Cantor space as deterministic bit generators.
//!
//! A [`Point`] is a total function position → {0,1} backed by a finite prefix
//! with constant tail, an eventually periodic pattern, or a seeded hash
//! stream. Equality of bit streams is undecidable, so comparisons resolve at
//! the first differing bit up to a distinguishing depth and error on ties at
//! that depth.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::partitions::IntervalPartition;

/// Depth used when neither point declares one.
pub const DEFAULT_DISTINGUISHING_DEPTH: u64 = 4096;

enum PointInner {
    /// Stored prefix, then a constant bit.
    PrefixTail { prefix: Vec<bool>, tail: bool },
    /// Stored prefix, then a repeating cycle (nonempty).
    Periodic { prefix: Vec<bool>, cycle: Vec<bool> },
    /// splitmix64 of (seed, position), lowest bit.
    Seeded { seed: u64 },
}

/// A point of Cantor space.
#[derive(Clone)]
pub struct Point {
    inner: Arc<PointInner>,
    /// Comparisons beyond this many bits are refused.
    depth: Option<u64>,
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let head: String = (0..16)
            .map(|p| if self.bit(p) { '1' } else { '0' })
            .collect();
        write!(f, "Point({}…)", head)
    }
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e3779b97f4a7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d049bb133111eb);
    x ^ (x >> 31)
}

impl Point {
    /// All-zero point.
    pub fn zeros() -> Self {
        Self::prefix_tail(Vec::new(), false)
    }

    /// All-one point.
    pub fn ones() -> Self {
        Self::prefix_tail(Vec::new(), true)
    }

    /// Finite prefix followed by a constant tail.
    pub fn prefix_tail(prefix: Vec<bool>, tail: bool) -> Self {
        Self {
            inner: Arc::new(PointInner::PrefixTail { prefix, tail }),
            depth: None,
        }
    }

    /// Eventually periodic: prefix, then `cycle` repeated forever.
    pub fn periodic(prefix: Vec<bool>, cycle: Vec<bool>) -> Result<Self> {
        if cycle.is_empty() {
            return Err(Error::Usage("period must be nonempty".into()));
        }
        Ok(Self {
            inner: Arc::new(PointInner::Periodic { prefix, cycle }),
            depth: None,
        })
    }

    /// Deterministic pseudorandom bits from a seed.
    pub fn seeded(seed: u64) -> Self {
        Self {
            inner: Arc::new(PointInner::Seeded { seed }),
            depth: None,
        }
    }

    /// Same generator with an explicit distinguishing depth.
    pub fn with_depth(mut self, depth: u64) -> Self {
        self.depth = Some(depth);
        self
    }

    pub fn depth(&self) -> Option<u64> {
        self.depth
    }

    /// The bit at `pos`. Deterministic across calls.
    pub fn bit(&self, pos: u64) -> bool {
        match &*self.inner {
            PointInner::PrefixTail { prefix, tail } => {
                if (pos as usize) < prefix.len() {
                    prefix[pos as usize]
                } else {
                    *tail
                }
            }
            PointInner::Periodic { prefix, cycle } => {
                if (pos as usize) < prefix.len() {
                    prefix[pos as usize]
                } else {
                    cycle[(pos as usize - prefix.len()) % cycle.len()]
                }
            }
            PointInner::Seeded { seed } => {
                splitmix64(seed ^ pos.wrapping_mul(0xa24baed4963ee407)) & 1 == 1
            }
        }
    }

    /// The word x↾[lo, hi) as an integer code: bit b of the code is x(lo+b).
    pub fn word(&self, lo: u64, hi: u64) -> BigUint {
        let mut code = BigUint::default();
        for b in 0..(hi - lo) {
            if self.bit(lo + b) {
                code.set_bit(b, true);
            }
        }
        code
    }

    /// Build a point from per-block word codes on a partition window; zero
    /// beyond the window and below the partition's offset.
    pub fn from_block_codes(partition: &IntervalPartition, codes: &[BigUint]) -> Self {
        let end = partition.endpoint(codes.len());
        let mut prefix = vec![false; end as usize];
        for (n, code) in codes.iter().enumerate() {
            let (lo, hi) = partition.block(n);
            for b in 0..(hi - lo) {
                prefix[(lo + b) as usize] = code.bit(b);
            }
        }
        Self::prefix_tail(prefix, false)
    }

    /// Effective comparison depth for a pair.
    fn pair_depth(&self, other: &Point) -> u64 {
        match (self.depth, other.depth) {
            (Some(a), Some(b)) => a.min(b),
            (Some(a), None) | (None, Some(a)) => a,
            (None, None) => DEFAULT_DISTINGUISHING_DEPTH,
        }
    }

    /// Lexicographic comparison resolved at the first differing bit, erroring
    /// on a tie at the pair's distinguishing depth.
    pub fn cmp_lex(&self, other: &Point) -> Result<Ordering> {
        let depth = self.pair_depth(other);
        for p in 0..depth {
            match (self.bit(p), other.bit(p)) {
                (false, true) => return Ok(Ordering::Less),
                (true, false) => return Ok(Ordering::Greater),
                _ => {}
            }
        }
        Err(Error::TieAtDepth { depth })
    }

    /// Whether the two points agree on every bit below the pair depth.
    pub fn agrees_within_depth(&self, other: &Point) -> bool {
        let depth = self.pair_depth(other);
        (0..depth).all(|p| self.bit(p) == other.bit(p))
    }

    /// Descriptor used in condition serializations.
    pub fn to_json(&self) -> Value {
        match &*self.inner {
            PointInner::PrefixTail { prefix, tail } => json!({
                "kind": "prefix_tail",
                "prefix": bits_string(prefix),
                "tail": *tail as u8,
            }),
            PointInner::Periodic { prefix, cycle } => json!({
                "kind": "periodic",
                "prefix": bits_string(prefix),
                "cycle": bits_string(cycle),
            }),
            PointInner::Seeded { seed } => json!({ "kind": "seeded", "seed": seed }),
        }
    }
}

fn bits_string(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}
