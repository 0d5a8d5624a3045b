//! Interval partitions of (cofinite subsets of) the natural numbers.
//!
//! A partition is a strictly increasing endpoint stream k_0 < k_1 < … defining
//! blocks I_n = [k_n, k_{n+1}); the domain starts at k_0 ≥ 0, so partitions of
//! a cofinite subset are supported and the relations below ignore the finite
//! head. Containment and refinement tests work on endpoints only — block
//! contents are never materialized, since block lengths can be astronomical.
//!
//! The two relations between partitions, both evaluated three-valuedly at a
//! horizon:
//!
//! - domination `rel_sq`: eventually every J-block contains some I-block;
//! - refinement `rel_refines`: eventually every J-block is a union of
//!   I-blocks, equivalently both of its endpoints are endpoints of I.
//!
//! `overlap_refute` executes the endpoint argument showing that two partitions
//! sharing only finitely many endpoints admit no common refinement upper
//! bound.

use std::fmt;
use std::sync::{Arc, Mutex};

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::verdict::Verdict3;

enum PartInner {
    /// endpoint(n) = offset + n (unit blocks).
    Unit { offset: u64 },
    /// endpoint(n) = offset + n·len.
    FixedLen { offset: u64, len: u64 },
    /// blockLen(n) = a·n + b with a, b ≥ 1; closed-form endpoints.
    ArithLen { offset: u64, a: u64, b: u64 },
    /// blockLen from a declared function; cumulative endpoints are cached.
    FromLen {
        name: String,
        offset: u64,
        len: Box<dyn Fn(usize) -> u64 + Send + Sync>,
        cache: Mutex<Vec<u64>>,
        len_ge_from: Option<usize>,
    },
    /// Stored endpoint prefix, then constant block length `tail_len`.
    Explicit { endpoints: Vec<u64>, tail_len: u64 },
    /// endpoint(n) = base.endpoint(2n): merges consecutive block pairs.
    MergedPairs { base: IntervalPartition },
    /// Arbitrary strictly increasing endpoint function.
    Custom {
        name: String,
        endpoint: Box<dyn Fn(usize) -> u64 + Send + Sync>,
        len_ge_from: Option<usize>,
    },
}

/// An interval partition given by its endpoint stream.
#[derive(Clone)]
pub struct IntervalPartition {
    inner: Arc<PartInner>,
}

impl fmt::Debug for IntervalPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntervalPartition({})", self.family_name())
    }
}

impl IntervalPartition {
    /// Unit blocks [offset+n, offset+n+1).
    pub fn unit(offset: u64) -> Self {
        Self::wrap(PartInner::Unit { offset })
    }

    /// Constant block length.
    pub fn fixed_len(offset: u64, len: u64) -> Result<Self> {
        if len == 0 {
            return Err(Error::Usage("block length must be positive".into()));
        }
        Ok(Self::wrap(PartInner::FixedLen { offset, len }))
    }

    /// blockLen(n) = a·n + b, a ≥ 1, b ≥ 1. Guarantees blockLen(n) ≥ n + 1.
    pub fn arith_len(offset: u64, a: u64, b: u64) -> Result<Self> {
        if a == 0 || b == 0 {
            return Err(Error::Usage("arith_len needs a ≥ 1 and b ≥ 1".into()));
        }
        Ok(Self::wrap(PartInner::ArithLen { offset, a, b }))
    }

    /// Block lengths from a function. `len_ge_from` declares the least index
    /// from which blockLen(n) ≥ n holds (used as a certificate downstream).
    pub fn from_len_fn(
        name: impl Into<String>,
        offset: u64,
        len: impl Fn(usize) -> u64 + Send + Sync + 'static,
        len_ge_from: Option<usize>,
    ) -> Result<Self> {
        let len = Box::new(len);
        for n in 0..16 {
            if len(n) == 0 {
                return Err(Error::Usage(format!("block {n} has zero length")));
            }
        }
        Ok(Self::wrap(PartInner::FromLen {
            name: name.into(),
            offset,
            len,
            cache: Mutex::new(Vec::new()),
            len_ge_from,
        }))
    }

    /// Explicit endpoint prefix, continuing with constant block length.
    pub fn from_endpoints(endpoints: Vec<u64>, tail_len: u64) -> Result<Self> {
        if endpoints.len() < 2 {
            return Err(Error::Usage("need at least two endpoints".into()));
        }
        if tail_len == 0 {
            return Err(Error::Usage("tail block length must be positive".into()));
        }
        if endpoints.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Usage("endpoints must be strictly increasing".into()));
        }
        Ok(Self::wrap(PartInner::Explicit {
            endpoints,
            tail_len,
        }))
    }

    /// Endpoint function, validated strictly increasing on
    /// [0, validate_window].
    pub fn from_endpoint_fn(
        name: impl Into<String>,
        endpoint: impl Fn(usize) -> u64 + Send + Sync + 'static,
        validate_window: usize,
        len_ge_from: Option<usize>,
    ) -> Result<Self> {
        let endpoint = Box::new(endpoint);
        for n in 0..validate_window {
            if endpoint(n + 1) <= endpoint(n) {
                return Err(Error::Usage(format!(
                    "endpoint function not strictly increasing at {n}"
                )));
            }
        }
        Ok(Self::wrap(PartInner::Custom {
            name: name.into(),
            endpoint,
            len_ge_from,
        }))
    }

    /// The partition whose blocks are consecutive pairs of this one's blocks.
    pub fn merged_pairs(&self) -> Self {
        Self::wrap(PartInner::MergedPairs { base: self.clone() })
    }

    fn wrap(inner: PartInner) -> Self {
        Self {
            inner: Arc::new(inner),
        }
    }

    /// k_n, the n-th endpoint.
    pub fn endpoint(&self, n: usize) -> u64 {
        match &*self.inner {
            PartInner::Unit { offset } => offset + n as u64,
            PartInner::FixedLen { offset, len } => offset + n as u64 * len,
            PartInner::ArithLen { offset, a, b } => {
                let n = n as u64;
                offset + a * (n * n.saturating_sub(1) / 2) + b * n
            }
            PartInner::FromLen {
                offset, len, cache, ..
            } => {
                let mut cum = cache.lock().unwrap();
                if cum.is_empty() {
                    cum.push(*offset);
                }
                while cum.len() <= n {
                    let i = cum.len() - 1;
                    let l = len(i);
                    assert!(l > 0, "block {i} has zero length");
                    let next = cum[i] + l;
                    cum.push(next);
                }
                cum[n]
            }
            PartInner::Explicit {
                endpoints,
                tail_len,
            } => {
                if n < endpoints.len() {
                    endpoints[n]
                } else {
                    endpoints.last().unwrap() + (n - endpoints.len() + 1) as u64 * tail_len
                }
            }
            PartInner::MergedPairs { base } => base.endpoint(2 * n),
            PartInner::Custom { endpoint, .. } => {
                let e = endpoint(n);
                debug_assert!(n == 0 || endpoint(n - 1) < e, "endpoints must increase");
                e
            }
        }
    }

    /// First covered position, k_0.
    pub fn offset(&self) -> u64 {
        self.endpoint(0)
    }

    /// The block I_n = [k_n, k_{n+1}) as a half-open position range.
    pub fn block(&self, n: usize) -> (u64, u64) {
        (self.endpoint(n), self.endpoint(n + 1))
    }

    /// |I_n| = k_{n+1} − k_n ≥ 1.
    pub fn block_len(&self, n: usize) -> u64 {
        let (a, b) = self.block(n);
        b - a
    }

    /// Index of the block containing position `pos` (≥ offset).
    pub fn block_of(&self, pos: u64) -> Result<usize> {
        if pos < self.offset() {
            return Err(Error::RangeViolation(format!(
                "position {pos} below partition offset {}",
                self.offset()
            )));
        }
        // gallop for an upper bound, then bisect on endpoint(n) ≤ pos
        let mut hi = 1usize;
        while self.endpoint(hi) <= pos {
            hi *= 2;
        }
        let mut lo = 0usize;
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if self.endpoint(mid) <= pos {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(lo)
    }

    /// Least index from which blockLen(n) ≥ n is certified, if any.
    pub fn len_ge_index_from(&self) -> Option<usize> {
        match &*self.inner {
            PartInner::Unit { .. } | PartInner::FixedLen { .. } | PartInner::Explicit { .. } => {
                None
            }
            PartInner::ArithLen { .. } => Some(0),
            PartInner::FromLen { len_ge_from, .. } | PartInner::Custom { len_ge_from, .. } => {
                *len_ge_from
            }
            PartInner::MergedPairs { base } => {
                // len_J(n) = len_I(2n)+len_I(2n+1) ≥ 2n ≥ n once 2n ≥ f
                base.len_ge_index_from().map(|f| f.div_ceil(2))
            }
        }
    }

    /// Same underlying object.
    pub fn same_as(&self, other: &IntervalPartition) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
    }

    /// Endpoint agreement on the first `window` blocks.
    pub fn agrees_with(&self, other: &IntervalPartition, window: usize) -> bool {
        self.same_as(other) || (0..=window).all(|n| self.endpoint(n) == other.endpoint(n))
    }

    pub fn endpoint_set(&self) -> EndpointSet {
        EndpointSet {
            partition: self.clone(),
        }
    }

    fn family_name(&self) -> String {
        match &*self.inner {
            PartInner::Unit { .. } => "unit".into(),
            PartInner::FixedLen { .. } => "fixed_len".into(),
            PartInner::ArithLen { .. } => "arith_len".into(),
            PartInner::FromLen { name, .. } => format!("from_len:{name}"),
            PartInner::Explicit { .. } => "explicit".into(),
            PartInner::MergedPairs { .. } => "merged_pairs".into(),
            PartInner::Custom { name, .. } => format!("custom:{name}"),
        }
    }

    /// Serialized literal with a stored endpoint prefix.
    pub fn to_json(&self, prefix_len: usize) -> Value {
        let params = match &*self.inner {
            PartInner::Unit { offset } => json!({ "offset": offset }),
            PartInner::FixedLen { offset, len } => json!({ "offset": offset, "len": len }),
            PartInner::ArithLen { offset, a, b } => {
                json!({ "offset": offset, "a": a, "b": b })
            }
            PartInner::FromLen { name, offset, .. } => {
                json!({ "name": name, "offset": offset })
            }
            PartInner::Explicit { tail_len, .. } => json!({ "tail_len": tail_len }),
            PartInner::MergedPairs { base } => json!({ "base": base.to_json(0) }),
            PartInner::Custom { name, .. } => json!({ "name": name }),
        };
        let prefix: Vec<u64> = (0..prefix_len).map(|n| self.endpoint(n)).collect();
        json!({
            "family": self.family_name(),
            "params": params,
            "endpoints_prefix": prefix,
            "offset": self.offset(),
        })
    }
}

/// Membership view of a partition's endpoint set.
pub struct EndpointSet {
    partition: IntervalPartition,
}

impl EndpointSet {
    /// Whether `pos` is an endpoint.
    pub fn contains(&self, pos: u64) -> bool {
        if pos < self.partition.offset() {
            return false;
        }
        if pos == self.partition.offset() {
            return true;
        }
        match self.partition.block_of(pos) {
            Ok(n) => self.partition.endpoint(n) == pos,
            Err(_) => false,
        }
    }

    /// All shared endpoints of the two sets at positions < pos_limit.
    pub fn intersection_upto(&self, other: &EndpointSet, pos_limit: u64) -> Vec<u64> {
        let mut out = Vec::new();
        let mut n = 0usize;
        loop {
            let e = self.partition.endpoint(n);
            if e >= pos_limit {
                break;
            }
            if other.contains(e) {
                out.push(e);
            }
            n += 1;
        }
        out
    }
}

/// Construct the partition whose endpoints are exactly the values of a
/// strictly increasing generator (the partition induced by an infinite set).
pub fn partition_from_set(
    name: impl Into<String>,
    gen: impl Fn(usize) -> u64 + Send + Sync + 'static,
    validate_window: usize,
) -> Result<IntervalPartition> {
    IntervalPartition::from_endpoint_fn(name, gen, validate_window, None)
}

/// Claim that a relation between two specific partitions holds from a block
/// index on; validated by deciding every block in [from, horizon).
#[derive(Debug, Clone, Copy)]
pub struct RelCertificate {
    pub from: usize,
}

/// `Holds` payload: the certificate's claim checked exactly on the window.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelHolds {
    pub validated_from: usize,
    pub horizon: usize,
}

/// `Fails` payload: a block with no witness, recurring at the window's end (or
/// contradicting a supplied certificate).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelFails {
    pub block: usize,
    pub against_certificate: bool,
}

/// `Unknown` payload: what the scan saw.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelScan {
    pub horizon: usize,
    /// Least index from which every scanned block succeeded.
    pub consistent_from: Option<usize>,
    pub failures: Vec<usize>,
}

pub type RelVerdict = Verdict3<RelHolds, RelFails, RelScan>;

/// Failures count as "recurring" when one lands in the top quarter of the
/// window.
fn tail_region(horizon: usize) -> usize {
    horizon - (horizon / 4).max(1).min(horizon)
}

fn rel_verdict(failures: Vec<usize>, horizon: usize, cert: Option<&RelCertificate>) -> RelVerdict {
    if let Some(c) = cert {
        match failures.iter().find(|&&n| n >= c.from) {
            None => Verdict3::Holds(RelHolds {
                validated_from: c.from,
                horizon,
            }),
            Some(&n) => Verdict3::Fails(RelFails {
                block: n,
                against_certificate: true,
            }),
        }
    } else if let Some(&last) = failures.last() {
        if last >= tail_region(horizon) {
            Verdict3::Fails(RelFails {
                block: last,
                against_certificate: false,
            })
        } else {
            Verdict3::Unknown(RelScan {
                horizon,
                consistent_from: Some(last + 1),
                failures,
            })
        }
    } else {
        Verdict3::Unknown(RelScan {
            horizon,
            consistent_from: Some(0),
            failures,
        })
    }
}

/// Whether some I-block is contained in J_n. The only candidate is the first
/// I-block starting at or after J_n's left endpoint.
pub fn contains_some_block(i: &IntervalPartition, j: &IntervalPartition, n: usize) -> bool {
    witness_block(i, j, n).is_some()
}

/// The index m with I_m ⊆ J_n, if one exists.
pub fn witness_block(i: &IntervalPartition, j: &IntervalPartition, n: usize) -> Option<usize> {
    let (lo, hi) = j.block(n);
    if hi <= i.offset() {
        return None;
    }
    // least m with endpoint_I(m) ≥ lo
    let m = if lo <= i.offset() {
        0
    } else {
        match i.block_of(lo) {
            Ok(b) => {
                if i.endpoint(b) == lo {
                    b
                } else {
                    b + 1
                }
            }
            Err(_) => return None,
        }
    };
    (i.endpoint(m + 1) <= hi).then_some(m)
}

/// Three-valued evaluation of "eventually every J-block contains an I-block"
/// on blocks n < horizon. `I_m ⊆ J_n` is decided purely on endpoints.
pub fn rel_sq(
    i: &IntervalPartition,
    j: &IntervalPartition,
    horizon: usize,
    cert: Option<&RelCertificate>,
) -> RelVerdict {
    let failures: Vec<usize> = (0..horizon)
        .filter(|&n| !contains_some_block(i, j, n))
        .collect();
    rel_verdict(failures, horizon, cert)
}

/// Whether J_n is a finite union of I-blocks: both endpoints of J_n are
/// endpoints of I.
pub fn is_union_of_blocks(i: &IntervalPartition, j: &IntervalPartition, n: usize) -> bool {
    let ep = i.endpoint_set();
    let (lo, hi) = j.block(n);
    ep.contains(lo) && ep.contains(hi)
}

/// Three-valued evaluation of "eventually every J-block is a union of
/// I-blocks" on blocks n < horizon.
pub fn rel_refines(
    i: &IntervalPartition,
    j: &IntervalPartition,
    horizon: usize,
    cert: Option<&RelCertificate>,
) -> RelVerdict {
    let failures: Vec<usize> = (0..horizon)
        .filter(|&n| !is_union_of_blocks(i, j, n))
        .collect();
    rel_verdict(failures, horizon, cert)
}

/// {k : I_k ⊆ J_n}, computed by endpoint scan; contiguous when nonempty.
pub fn subin(i: &IntervalPartition, j: &IntervalPartition, n: usize) -> Vec<usize> {
    let Some(first) = witness_block(i, j, n) else {
        return Vec::new();
    };
    let (_, hi) = j.block(n);
    let mut ks = Vec::new();
    let mut k = first;
    while i.endpoint(k + 1) <= hi {
        ks.push(k);
        k += 1;
    }
    ks
}

/// `Fails` payload of [`overlap_refute`]: the refutation index and which side
/// broke there.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OverlapRefutation {
    /// K-block index past every shared endpoint that is a union of blocks of
    /// exactly one of the two partitions.
    pub block: usize,
    /// True when K_block is an I-union but not a J-union.
    pub refines_i_only: bool,
}

pub type OverlapVerdict = Verdict3<(), OverlapRefutation, RelScan>;

/// Executes the refutation that no K can eventually refine both I and J when
/// ep(I) ∩ ep(J) is finite: beyond the last shared endpoint, a K-block that is
/// a union of I-blocks cannot also be a union of J-blocks.
///
/// Returns `Fails` with the refuting index (meaning: K witnesses that joint
/// refinement is impossible), `Unknown` when K stops refining either partition
/// inside the window, and an error when shared endpoints recur so late in the
/// window that the finiteness precondition has no evidence.
pub fn overlap_refute(
    i: &IntervalPartition,
    j: &IntervalPartition,
    k: &IntervalPartition,
    horizon: usize,
) -> Result<OverlapVerdict> {
    if horizon < 4 {
        return Err(Error::Usage("overlap_refute needs a horizon ≥ 4".into()));
    }
    let pos_limit = k.endpoint(horizon);
    let shared = i
        .endpoint_set()
        .intersection_upto(&j.endpoint_set(), pos_limit);
    if let Some(&last_shared) = shared.last() {
        // evidence of finiteness: shared endpoints must die out inside the window
        if last_shared >= pos_limit - (pos_limit / 4).max(1) {
            return Err(Error::Precondition {
                op: "overlap_refute",
                clause: format!(
                    "shared endpoints of I and J appear cofinal in the window (last at {last_shared} of {pos_limit})"
                ),
            });
        }
    }
    let threshold_pos = shared.last().copied().unwrap_or(0);
    let mut scanned = Vec::new();
    for m in 0..horizon {
        if k.endpoint(m) <= threshold_pos {
            continue;
        }
        let iu = is_union_of_blocks(i, k, m);
        let ju = is_union_of_blocks(j, k, m);
        debug_assert!(
            !(iu && ju),
            "block beyond all shared endpoints refining both partitions"
        );
        if iu != ju {
            return Ok(Verdict3::Fails(OverlapRefutation {
                block: m,
                refines_i_only: iu,
            }));
        }
        scanned.push(m);
    }
    Ok(Verdict3::Unknown(RelScan {
        horizon,
        consistent_from: None,
        failures: scanned,
    }))
}

/// Coarsening join: the partition on the endpoints common to both inputs.
/// Auxiliary plumbing for the driver — the preorders above have no canonical
/// join, and this one is only accurate on the computed window.
pub fn coarsen_common(
    i: &IntervalPartition,
    j: &IntervalPartition,
    window: usize,
) -> Result<IntervalPartition> {
    let pos_limit = i.endpoint(window).min(j.endpoint(window));
    let shared = i
        .endpoint_set()
        .intersection_upto(&j.endpoint_set(), pos_limit);
    if shared.len() < 2 {
        return Err(Error::WindowExhausted(format!(
            "only {} shared endpoints below {pos_limit}",
            shared.len()
        )));
    }
    let tail = shared[shared.len() - 1] - shared[shared.len() - 2];
    IntervalPartition::from_endpoints(shared, tail.max(1))
}
