//! Block slaloms: per-block finite sets of binary words over an interval
//! partition, and the predicates they induce on Cantor space.
//!
//! A slalom φ assigns to block n a finite subset of the 2^|I_n| words on that
//! block. Membership of φ in the vanishing family of a pair (I, ε) — the
//! ratios |φ(n)| / 2^|I_n| vanishing faster than ε_n — is a limit statement;
//! it is represented by a [`VanishingCertificate`], a total threshold function
//! witnessing the reformulation "for every N, eventually N·|φ(n)| < 2^|I_n|·ε_n",
//! with the strict inequality tested exactly. Certificates are supplied by
//! constructors and validated by sampling, never inferred from finite data.
//!
//! Blocks whose word space exceeds 2^20 refuse explicit enumeration and are
//! represented by a cardinality plus a membership test; for small blocks the
//! two representations are cross-checked by exhaustive enumeration in tests.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::partitions::IntervalPartition;
use crate::points::Point;
use crate::rat::{pow2, pow2_rat, rat_big, to_pq, Rat};
use crate::sequences::TailBoundedSeq;
use crate::verdict::Verdict3;

/// Largest block length (in bits) admitting explicit enumeration of codes.
pub const EXPLICIT_MAX_LEN: u64 = 20;
/// Largest block length cross-checked by exhaustive enumeration.
pub const ENUM_CHECK_MAX_LEN: u64 = 12;

/// One word on block n, encoded as an integer: bit b of `code` is the value at
/// the b-th position of the block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockWord {
    pub block: usize,
    pub len: u64,
    pub code: BigUint,
}

/// The content of a slalom at one block.
#[derive(Clone)]
pub enum BlockSet {
    /// Sorted, deduplicated codes. Only for blocks of length ≤ 20 bits.
    Explicit(Vec<BigUint>),
    /// Exact cardinality plus a membership test, for blocks too large to
    /// enumerate.
    Sized {
        size: BigUint,
        member: Arc<dyn Fn(&BigUint) -> bool + Send + Sync>,
        tag: String,
    },
}

impl fmt::Debug for BlockSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BlockSet::Explicit(codes) => write!(f, "Explicit[{}]", codes.len()),
            BlockSet::Sized { size, tag, .. } => write!(f, "Sized[{size}:{tag}]"),
        }
    }
}

impl BlockSet {
    pub fn empty() -> Self {
        BlockSet::Explicit(Vec::new())
    }

    /// Explicit set of codes on a block of length `len`; sorts, dedups, and
    /// range-checks. At most 2^20 codes may be stored — anything denser on a
    /// large block must come in as a sized predicate.
    pub fn explicit(mut codes: Vec<BigUint>, len: u64) -> Result<Self> {
        if codes.len() as u64 > (1 << EXPLICIT_MAX_LEN) {
            return Err(Error::BlockTooLarge(format!(
                "explicit representation refused for {} codes",
                codes.len()
            )));
        }
        let bound = pow2(len);
        if let Some(bad) = codes.iter().find(|c| **c >= bound) {
            return Err(Error::RangeViolation(format!(
                "code {bad} out of range for block length {len}"
            )));
        }
        codes.sort();
        codes.dedup();
        Ok(BlockSet::Explicit(codes))
    }

    /// The `count` lexicographically least codes of a block: explicit when
    /// few, otherwise a sized set with the test `code < count`.
    pub fn first_codes(count: BigUint, len: u64) -> Result<Self> {
        if count > pow2(len) {
            return Err(Error::RangeViolation(format!(
                "{count} codes requested on a {len}-bit block"
            )));
        }
        if count <= BigUint::from(4096u32) {
            let k = u64::try_from(&count).expect("small count");
            Self::explicit((0..k).map(BigUint::from).collect(), len)
        } else {
            let bound = count.clone();
            Ok(BlockSet::Sized {
                size: count,
                member: Arc::new(move |c| *c < bound),
                tag: "first_codes".into(),
            })
        }
    }

    /// The full word space of a block.
    pub fn full(len: u64) -> Self {
        if len <= 16 {
            let n = 1usize << len;
            BlockSet::Explicit((0..n).map(BigUint::from).collect())
        } else {
            BlockSet::Sized {
                size: pow2(len),
                member: Arc::new(|_| true),
                tag: "full".into(),
            }
        }
    }

    pub fn size(&self) -> BigUint {
        match self {
            BlockSet::Explicit(codes) => BigUint::from(codes.len()),
            BlockSet::Sized { size, .. } => size.clone(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.size().is_zero()
    }

    pub fn contains(&self, code: &BigUint) -> bool {
        match self {
            BlockSet::Explicit(codes) => codes.binary_search(code).is_ok(),
            BlockSet::Sized { member, .. } => member(code),
        }
    }

    /// Whether the set is all of the block's word space.
    pub fn is_full(&self, len: u64) -> bool {
        self.size() == pow2(len)
    }

    /// Smallest code of the block not in the set, probing from zero. Errors
    /// past the probe cap for opaque sized sets.
    pub fn smallest_absent(&self, len: u64) -> Result<BigUint> {
        if self.is_full(len) {
            return Err(Error::WindowExhausted(
                "no absent code: block set is full".into(),
            ));
        }
        match self {
            BlockSet::Explicit(codes) => {
                let mut expect = BigUint::zero();
                for c in codes {
                    if *c != expect {
                        break;
                    }
                    expect += 1u32;
                }
                Ok(expect)
            }
            BlockSet::Sized { member, .. } => {
                let mut c = BigUint::zero();
                for _ in 0..4096 {
                    if !member(&c) {
                        return Ok(c);
                    }
                    c += 1u32;
                }
                Err(Error::BlockTooLarge(
                    "sized set dense beyond probe cap; need an explicit block".into(),
                ))
            }
        }
    }

    /// Smallest member, for explicit sets.
    pub fn first_member(&self) -> Result<BigUint> {
        match self {
            BlockSet::Explicit(codes) => codes
                .first()
                .cloned()
                .ok_or_else(|| Error::WindowExhausted("empty block set".into())),
            BlockSet::Sized { member, .. } => {
                let mut c = BigUint::zero();
                for _ in 0..4096 {
                    if member(&c) {
                        return Ok(c);
                    }
                    c += 1u32;
                }
                Err(Error::BlockTooLarge(
                    "sized set sparse beyond probe cap; need an explicit block".into(),
                ))
            }
        }
    }

    /// Cardinality by exhaustive enumeration (cross-check; blocks ≤ 12 bits).
    pub fn enumerated_count(&self, len: u64) -> Result<BigUint> {
        if len > ENUM_CHECK_MAX_LEN {
            return Err(Error::BlockTooLarge(format!(
                "enumeration cross-check limited to {ENUM_CHECK_MAX_LEN}-bit blocks, got {len}"
            )));
        }
        let mut count = 0u64;
        let mut c = BigUint::zero();
        let bound = pow2(len);
        while c < bound {
            if self.contains(&c) {
                count += 1;
            }
            c += 1u32;
        }
        Ok(BigUint::from(count))
    }

    pub fn to_json(&self) -> Value {
        match self {
            BlockSet::Explicit(codes) => {
                json!(codes.iter().map(|c| c.to_string()).collect::<Vec<_>>())
            }
            BlockSet::Sized { size, tag, .. } => {
                json!({ "size": size.to_string(), "predicate": tag })
            }
        }
    }
}

/// Total threshold function witnessing "∀N ∀^∞n: N·|φ(n)| < 2^|I_n|·ε_n":
/// for every n ≥ threshold(N) the strict inequality holds exactly.
#[derive(Clone)]
pub struct VanishingCertificate {
    threshold: Arc<dyn Fn(u64) -> usize + Send + Sync>,
}

impl fmt::Debug for VanishingCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VanishingCertificate")
    }
}

impl VanishingCertificate {
    pub fn new(threshold: impl Fn(u64) -> usize + Send + Sync + 'static) -> Self {
        Self {
            threshold: Arc::new(threshold),
        }
    }

    pub fn threshold(&self, n_factor: u64) -> usize {
        (self.threshold)(n_factor)
    }

    /// Transport along termwise domination: if ε'_n ≥ ε_n for every n ≥ from,
    /// a member for ε is a member for ε' with the threshold pushed past from.
    pub fn under_dominating_eps(&self, from: usize) -> Self {
        let inner = self.clone();
        Self::new(move |n| inner.threshold(n).max(from))
    }

    /// Transport along scaling: a member for k·ε is a member for ε via the
    /// threshold at k·N.
    pub fn under_scaled_eps(&self, k: u64) -> Self {
        assert!(k >= 1);
        let inner = self.clone();
        Self::new(move |n| inner.threshold(n.saturating_mul(k)))
    }
}

/// Witness that 2^|I_n|·ε_n ≥ M for all n ≥ threshold(M) — along the whole
/// index line, or only along an increasing subsequence when `along` is set.
#[derive(Clone)]
pub struct DivergenceCertificate {
    threshold: Arc<dyn Fn(&Rat) -> usize + Send + Sync>,
    along: Option<Arc<dyn Fn(usize) -> usize + Send + Sync>>,
}

impl fmt::Debug for DivergenceCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "DivergenceCertificate({})",
            if self.along.is_some() {
                "subsequence"
            } else {
                "full"
            }
        )
    }
}

impl DivergenceCertificate {
    pub fn full(threshold: impl Fn(&Rat) -> usize + Send + Sync + 'static) -> Self {
        Self {
            threshold: Arc::new(threshold),
            along: None,
        }
    }

    pub fn along_subsequence(
        threshold: impl Fn(&Rat) -> usize + Send + Sync + 'static,
        subsequence: impl Fn(usize) -> usize + Send + Sync + 'static,
    ) -> Self {
        Self {
            threshold: Arc::new(threshold),
            along: Some(Arc::new(subsequence)),
        }
    }

    pub fn threshold(&self, m: &Rat) -> usize {
        (self.threshold)(m)
    }

    pub fn is_full_limit(&self) -> bool {
        self.along.is_none()
    }

    /// Indices the guarantee speaks about inside [from, horizon).
    fn indices_in(&self, from: usize, horizon: usize) -> Vec<usize> {
        match &self.along {
            None => (from..horizon).collect(),
            Some(a) => {
                let mut out = Vec::new();
                let mut j = 0usize;
                loop {
                    let n = a(j);
                    if j > 0 {
                        debug_assert!(n > a(j - 1), "subsequence must increase");
                    }
                    if n >= horizon {
                        break;
                    }
                    if n >= from {
                        out.push(n);
                    }
                    j += 1;
                }
                out
            }
        }
    }
}

/// Witness that the products 2^|I_n|·ε_n stay ≤ bound from an index on (the
/// evidence that a pair is not contributive).
#[derive(Debug, Clone)]
pub struct BoundednessCertificate {
    pub bound: Rat,
    pub from: usize,
}

/// A block slalom over a partition, with optional certificates about its
/// asymptotic shape.
#[derive(Clone)]
pub struct BlockSlalom {
    partition: IntervalPartition,
    at: Arc<dyn Fn(usize) -> BlockSet + Send + Sync>,
    cert: Option<VanishingCertificate>,
    /// ∀ n ≥ from: φ(n) = ∅ (constructor-supplied).
    empty_from: Option<usize>,
    /// ∀ n ≥ from: φ(n) ≠ ∅ (constructor-supplied).
    nonempty_from: Option<usize>,
    name: String,
}

impl fmt::Debug for BlockSlalom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BlockSlalom({})", self.name)
    }
}

impl BlockSlalom {
    /// φ ≡ ∅.
    pub fn empty(partition: IntervalPartition) -> Self {
        Self {
            partition,
            at: Arc::new(|_| BlockSet::empty()),
            cert: Some(VanishingCertificate::new(|_| 0)),
            empty_from: Some(0),
            nonempty_from: None,
            name: "empty".into(),
        }
    }

    /// Arbitrary block function.
    pub fn from_fn(
        partition: IntervalPartition,
        name: impl Into<String>,
        at: impl Fn(usize) -> BlockSet + Send + Sync + 'static,
    ) -> Self {
        Self {
            partition,
            at: Arc::new(at),
            cert: None,
            empty_from: None,
            nonempty_from: None,
            name: name.into(),
        }
    }

    /// Stored window of blocks; empty beyond.
    pub fn from_window(partition: IntervalPartition, window: Vec<BlockSet>) -> Self {
        let len = window.len();
        let window = Arc::new(window);
        Self {
            partition,
            at: Arc::new(move |n| window.get(n).cloned().unwrap_or_else(BlockSet::empty)),
            cert: None,
            empty_from: Some(len),
            nonempty_from: None,
            name: "window".into(),
        }
    }

    /// φ(n) = {0} where `on(n)`, ∅ elsewhere.
    pub fn zero_singleton_on(
        partition: IntervalPartition,
        name: impl Into<String>,
        on: impl Fn(usize) -> bool + Send + Sync + 'static,
    ) -> Self {
        Self {
            partition,
            at: Arc::new(move |n| {
                if on(n) {
                    BlockSet::Explicit(vec![BigUint::zero()])
                } else {
                    BlockSet::empty()
                }
            }),
            cert: None,
            empty_from: None,
            nonempty_from: None,
            name: name.into(),
        }
    }

    pub fn with_certificate(mut self, cert: VanishingCertificate) -> Self {
        self.cert = Some(cert);
        self
    }

    pub fn with_empty_from(mut self, from: usize) -> Self {
        self.empty_from = Some(from);
        self
    }

    pub fn with_nonempty_from(mut self, from: usize) -> Self {
        self.nonempty_from = Some(from);
        self
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn partition(&self) -> &IntervalPartition {
        &self.partition
    }

    pub fn certificate(&self) -> Option<&VanishingCertificate> {
        self.cert.as_ref()
    }

    pub fn empty_from(&self) -> Option<usize> {
        self.empty_from
    }

    pub fn nonempty_from(&self) -> Option<usize> {
        self.nonempty_from
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// φ(n).
    pub fn at(&self, n: usize) -> BlockSet {
        (self.at)(n)
    }

    /// |φ(n)|.
    pub fn size_at(&self, n: usize) -> BigUint {
        self.at(n).size()
    }

    /// |φ(n)| / 2^|I_n|.
    pub fn ratio_at(&self, n: usize) -> Rat {
        rat_big(&self.size_at(n)) / pow2_rat(self.partition.block_len(n))
    }

    /// Shares (or structurally agrees with) the other slalom's partition.
    pub fn same_partition(&self, other: &BlockSlalom, window: usize) -> bool {
        self.partition.agrees_with(&other.partition, window)
    }

    /// Pointwise union with another slalom over the same partition. When both
    /// carry certificates, the union's threshold at N is the larger of the
    /// inputs' thresholds at 2N (the union is at most the sum of the parts).
    pub fn union(&self, other: &BlockSlalom, window_check: usize) -> Result<BlockSlalom> {
        if !self.same_partition(other, window_check) {
            return Err(Error::MismatchedPartitions(
                "pointwise union needs a shared partition".into(),
            ));
        }
        let a = self.at.clone();
        let b = other.at.clone();
        let part = self.partition.clone();
        let cert = match (&self.cert, &other.cert) {
            (Some(ca), Some(cb)) => {
                let (ca, cb) = (ca.clone(), cb.clone());
                Some(VanishingCertificate::new(move |n| {
                    ca.threshold(2 * n).max(cb.threshold(2 * n))
                }))
            }
            _ => None,
        };
        let part_for_union = part.clone();
        let mut out =
            BlockSlalom::from_fn(part, format!("{}∪{}", self.name, other.name), move |n| {
                union_sets(&a(n), &b(n), part_for_union.block_len(n))
            });
        out.cert = cert;
        Ok(out)
    }

    /// Serialize a window of blocks.
    pub fn to_json(&self, window: usize) -> Value {
        let blocks: Vec<Value> = (0..window).map(|n| self.at(n).to_json()).collect();
        json!({ "name": self.name, "blocks": blocks })
    }
}

fn union_sets(a: &BlockSet, b: &BlockSet, len: u64) -> BlockSet {
    match (a, b) {
        (BlockSet::Explicit(xa), BlockSet::Explicit(xb)) => {
            let mut v = xa.clone();
            v.extend_from_slice(xb);
            v.sort();
            v.dedup();
            BlockSet::Explicit(v)
        }
        (x, other) | (other, x) if x.is_empty() => other.clone(),
        _ => {
            // exact size for two opaque sets would need |a ∩ b|
            panic!("union of sized block sets is not supported (block length {len})");
        }
    }
}

/// x↾I_n as a block word.
pub fn restrict(x: &Point, partition: &IntervalPartition, n: usize) -> BlockWord {
    let (lo, hi) = partition.block(n);
    BlockWord {
        block: n,
        len: hi - lo,
        code: x.word(lo, hi),
    }
}

/// Exact counterexample to a vanishing claim: N·|φ(n)| ≥ 2^|I_n|·ε_n.
#[derive(Debug, Clone)]
pub struct SigmaCounterexample {
    pub block: usize,
    pub factor: u64,
    pub lhs: Rat,
    pub rhs: Rat,
    pub against_certificate: bool,
}

/// `Holds` payload: which factors were spot-validated, from which indices.
#[derive(Debug, Clone)]
pub struct SigmaChecked {
    pub checked: Vec<(u64, usize)>,
    pub horizon: usize,
}

/// `Unknown` payload for slalom scans.
#[derive(Debug, Clone)]
pub struct SigmaScan {
    pub horizon: usize,
    /// Largest block index violating N·|φ(n)| < 2^|I_n|·ε_n per sampled N.
    pub last_violation: Vec<(u64, Option<usize>)>,
}

pub type SigmaVerdict = Verdict3<SigmaChecked, SigmaCounterexample, SigmaScan>;

const FACTOR_SAMPLES: [u64; 6] = [1, 2, 3, 8, 64, 1024];

fn first_violation(
    phi: &BlockSlalom,
    eps: &TailBoundedSeq,
    factor: u64,
    from: usize,
    horizon: usize,
) -> Option<(usize, Rat, Rat)> {
    for n in from..horizon {
        let lhs = Rat::from_integer((BigUint::from(factor) * phi.size_at(n)).into());
        let rhs = pow2_rat(phi.partition().block_len(n)) * eps.term(n);
        if lhs >= rhs {
            return Some((n, lhs, rhs));
        }
    }
    None
}

/// Membership of φ in the vanishing family of (I, ε), three-valued at the
/// horizon. `Holds` spot-validates φ's certificate; `Fails` carries an exact
/// violated inequality — against the certificate when there is one, otherwise
/// as recurring evidence (a violation in the top quarter of the window refutes
/// every threshold the scan could have chosen below it).
pub fn sigma_member(phi: &BlockSlalom, eps: &TailBoundedSeq, horizon: usize) -> SigmaVerdict {
    if let Some(cert) = phi.certificate() {
        let mut checked = Vec::new();
        for &factor in &FACTOR_SAMPLES {
            let from = cert.threshold(factor);
            if from >= horizon {
                continue;
            }
            if let Some((block, lhs, rhs)) = first_violation(phi, eps, factor, from, horizon) {
                return Verdict3::Fails(SigmaCounterexample {
                    block,
                    factor,
                    lhs,
                    rhs,
                    against_certificate: true,
                });
            }
            checked.push((factor, from));
        }
        if checked.is_empty() {
            return Verdict3::Unknown(SigmaScan {
                horizon,
                last_violation: Vec::new(),
            });
        }
        return Verdict3::Holds(SigmaChecked { checked, horizon });
    }
    // no certificate: scan for recurring violations
    let tail_start = horizon - (horizon / 4).max(1).min(horizon);
    let mut last_violation = Vec::new();
    for &factor in &FACTOR_SAMPLES {
        let mut last = None;
        for n in (0..horizon).rev() {
            let lhs = Rat::from_integer((BigUint::from(factor) * phi.size_at(n)).into());
            let rhs = pow2_rat(phi.partition().block_len(n)) * eps.term(n);
            if lhs >= rhs {
                last = Some((n, lhs, rhs));
                break;
            }
        }
        if let Some((block, lhs, rhs)) = last {
            if block >= tail_start {
                return Verdict3::Fails(SigmaCounterexample {
                    block,
                    factor,
                    lhs,
                    rhs,
                    against_certificate: false,
                });
            }
            last_violation.push((factor, Some(block)));
        } else {
            last_violation.push((factor, None));
        }
    }
    Verdict3::Unknown(SigmaScan {
        horizon,
        last_violation,
    })
}

/// Evidence about a pair (I, ε) supplied by its constructor.
#[derive(Debug, Clone, Default)]
pub struct PairEvidence {
    pub divergence: Option<DivergenceCertificate>,
    pub boundedness: Option<BoundednessCertificate>,
}

impl PairEvidence {
    pub fn diverging(cert: DivergenceCertificate) -> Self {
        Self {
            divergence: Some(cert),
            boundedness: None,
        }
    }

    pub fn bounded(cert: BoundednessCertificate) -> Self {
        Self {
            divergence: None,
            boundedness: Some(cert),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ContribHolds {
    /// Sampled bounds M validated exactly on the window.
    pub validated: Vec<Rat>,
    pub full_limit: bool,
}

#[derive(Debug, Clone)]
pub struct ContribFails {
    pub bound: Rat,
    pub validated_from: usize,
}

#[derive(Debug, Clone)]
pub struct ContribScan {
    pub horizon: usize,
    pub running_max: Rat,
}

pub type ContribVerdict = Verdict3<ContribHolds, ContribFails, ContribScan>;

fn products_running_max(i: &IntervalPartition, eps: &TailBoundedSeq, horizon: usize) -> Rat {
    (0..horizon)
        .map(|n| pow2_rat(i.block_len(n)) * eps.term(n))
        .max()
        .unwrap_or_else(Rat::zero)
}

fn contributive(
    i: &IntervalPartition,
    eps: &TailBoundedSeq,
    evidence: &PairEvidence,
    horizon: usize,
    need_full_limit: bool,
) -> Result<ContribVerdict> {
    if let Some(div) = &evidence.divergence {
        if !need_full_limit || div.is_full_limit() {
            let mut validated = Vec::new();
            for m in [
                Rat::one(),
                Rat::from_integer(8.into()),
                Rat::from_integer(512.into()),
            ] {
                let from = div.threshold(&m);
                for n in div.indices_in(from, horizon) {
                    let product = pow2_rat(i.block_len(n)) * eps.term(n);
                    if product < m {
                        return Err(Error::MalformedCertificate(format!(
                            "divergence threshold({}) = {from} but 2^|I_{n}|·ε_{n} = {} < {}",
                            to_pq(&m),
                            to_pq(&product),
                            to_pq(&m),
                        )));
                    }
                }
                validated.push(m);
            }
            return Ok(Verdict3::Holds(ContribHolds {
                validated,
                full_limit: div.is_full_limit(),
            }));
        }
    }
    if let Some(b) = &evidence.boundedness {
        for n in b.from..horizon {
            let product = pow2_rat(i.block_len(n)) * eps.term(n);
            if product > b.bound {
                return Err(Error::MalformedCertificate(format!(
                    "boundedness bound {} violated at block {n}: product {}",
                    to_pq(&b.bound),
                    to_pq(&product),
                )));
            }
        }
        return Ok(Verdict3::Fails(ContribFails {
            bound: b.bound.clone(),
            validated_from: b.from,
        }));
    }
    Ok(Verdict3::Unknown(ContribScan {
        horizon,
        running_max: products_running_max(i, eps, horizon),
    }))
}

/// Whether the pair contributes a nontrivial "infinitely often" ideal: the
/// products 2^|I_n|·ε_n must diverge along some subsequence. `Holds` needs a
/// divergence certificate (subsequence allowed), `Fails` a boundedness
/// certificate; both are validated exactly on the window.
pub fn sstar_contributive(
    i: &IntervalPartition,
    eps: &TailBoundedSeq,
    evidence: &PairEvidence,
    horizon: usize,
) -> Result<ContribVerdict> {
    contributive(i, eps, evidence, horizon, false)
}

/// Whether the pair contributes a nontrivial "almost everywhere" ideal: the
/// products must diverge along the whole index line, so only a full-limit
/// divergence certificate yields `Holds`.
pub fn e_contributive(
    i: &IntervalPartition,
    eps: &TailBoundedSeq,
    evidence: &PairEvidence,
    horizon: usize,
) -> Result<ContribVerdict> {
    contributive(i, eps, evidence, horizon, true)
}

/// {n ∈ [window.start, window.end) : x↾I_n ∈ φ(n)}.
pub fn hits(x: &Point, phi: &BlockSlalom, window: std::ops::Range<usize>) -> Vec<usize> {
    window
        .filter(|&n| phi.at(n).contains(&restrict(x, phi.partition(), n).code))
        .collect()
}

/// Claims about where a specific point meets a specific slalom, supplied by
/// the construction that produced them.
#[derive(Clone, Default)]
pub struct PointEvidence {
    /// ∀ n ≥ from: x↾I_n ∈ φ(n).
    pub hit_tail_from: Option<usize>,
    /// Generator of hit indices: next_hit(n) ≥ n is a hit.
    pub next_hit: Option<Arc<dyn Fn(usize) -> usize + Send + Sync>>,
    /// ∀ n ≥ from: x↾I_n ∉ φ(n).
    pub escape_tail_from: Option<usize>,
    /// Generator of escape indices.
    pub next_escape: Option<Arc<dyn Fn(usize) -> usize + Send + Sync>>,
}

impl fmt::Debug for PointEvidence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "PointEvidence(hit_tail={:?}, escape_tail={:?}, next_hit={}, next_escape={})",
            self.hit_tail_from,
            self.escape_tail_from,
            self.next_hit.is_some(),
            self.next_escape.is_some(),
        )
    }
}

impl PointEvidence {
    pub fn hit_tail(from: usize) -> Self {
        Self {
            hit_tail_from: Some(from),
            ..Default::default()
        }
    }

    pub fn hitting_cofinally(next_hit: impl Fn(usize) -> usize + Send + Sync + 'static) -> Self {
        Self {
            next_hit: Some(Arc::new(next_hit)),
            ..Default::default()
        }
    }

    pub fn escaping_cofinally(
        next_escape: impl Fn(usize) -> usize + Send + Sync + 'static,
    ) -> Self {
        Self {
            next_escape: Some(Arc::new(next_escape)),
            ..Default::default()
        }
    }
}

/// Validated claims: (hit tail start, confirmed hits, escape tail start,
/// confirmed escapes).
type ValidatedEvidence = (Option<usize>, Vec<usize>, Option<usize>, Vec<usize>);

/// What a window scan of (x, φ) observed.
#[derive(Debug, Clone)]
pub struct WindowReport {
    pub horizon: usize,
    pub hits: Vec<usize>,
    pub escapes: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct IoHolds {
    pub confirmed_hits: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct IoFails {
    /// Validated claim: every block from here on escapes.
    pub escape_tail_from: usize,
}

pub type IoVerdict = Verdict3<IoHolds, IoFails, WindowReport>;

#[derive(Debug, Clone)]
pub struct AeHolds {
    pub validated_from: usize,
}

#[derive(Debug, Clone)]
pub struct AeFails {
    pub escapes: Vec<usize>,
}

pub type AeVerdict = Verdict3<AeHolds, AeFails, WindowReport>;

fn scan_window(x: &Point, phi: &BlockSlalom, horizon: usize) -> WindowReport {
    let hits = hits(x, phi, 0..horizon);
    let mut escapes = Vec::with_capacity(horizon - hits.len());
    let mut hit_iter = hits.iter().peekable();
    for n in 0..horizon {
        if hit_iter.peek() == Some(&&n) {
            hit_iter.next();
        } else {
            escapes.push(n);
        }
    }
    WindowReport {
        horizon,
        hits,
        escapes,
    }
}

fn validate_point_evidence(
    report: &WindowReport,
    ev: &PointEvidence,
    horizon: usize,
) -> Result<ValidatedEvidence> {
    let is_hit = |n: usize| report.hits.binary_search(&n).is_ok();
    let mut hit_tail = None;
    if let Some(from) = ev.hit_tail_from {
        if let Some(&bad) = report.escapes.iter().find(|&&n| n >= from) {
            return Err(Error::MalformedCertificate(format!(
                "hit-tail claim from {from} but block {bad} escapes"
            )));
        }
        if from < horizon {
            hit_tail = Some(from);
        }
    }
    let mut confirmed_hits = Vec::new();
    if let Some(gen) = &ev.next_hit {
        for start in [0, horizon / 4, horizon / 2, 3 * horizon / 4] {
            let k = gen(start);
            if k < start {
                return Err(Error::MalformedCertificate(format!(
                    "hit generator went backwards: next_hit({start}) = {k}"
                )));
            }
            if k < horizon {
                if !is_hit(k) {
                    return Err(Error::MalformedCertificate(format!(
                        "claimed hit at block {k} is an escape"
                    )));
                }
                confirmed_hits.push(k);
            }
        }
        confirmed_hits.sort();
        confirmed_hits.dedup();
    }
    let mut escape_tail = None;
    if let Some(from) = ev.escape_tail_from {
        if let Some(&bad) = report.hits.iter().find(|&&n| n >= from) {
            return Err(Error::MalformedCertificate(format!(
                "escape-tail claim from {from} but block {bad} hits"
            )));
        }
        if from < horizon {
            escape_tail = Some(from);
        }
    }
    let mut confirmed_escapes = Vec::new();
    if let Some(gen) = &ev.next_escape {
        for start in [0, horizon / 4, horizon / 2, 3 * horizon / 4] {
            let k = gen(start);
            if k < start {
                return Err(Error::MalformedCertificate(format!(
                    "escape generator went backwards: next_escape({start}) = {k}"
                )));
            }
            if k < horizon {
                if is_hit(k) {
                    return Err(Error::MalformedCertificate(format!(
                        "claimed escape at block {k} is a hit"
                    )));
                }
                confirmed_escapes.push(k);
            }
        }
        confirmed_escapes.sort();
        confirmed_escapes.dedup();
    }
    Ok((hit_tail, confirmed_hits, escape_tail, confirmed_escapes))
}

/// Three-valued "x↾I_n ∈ φ(n) for infinitely many n" at the horizon.
/// `Holds` needs a validated hit generator (or hit tail); `Fails` needs a
/// validated escape tail, or a slalom that is eventually empty by
/// construction. Everything else is the window report.
pub fn io_verdict(
    x: &Point,
    phi: &BlockSlalom,
    evidence: Option<&PointEvidence>,
    horizon: usize,
) -> Result<IoVerdict> {
    let report = scan_window(x, phi, horizon);
    if let Some(from) = phi.empty_from() {
        if let Some(&bad) = report.hits.iter().find(|&&n| n >= from) {
            return Err(Error::MalformedCertificate(format!(
                "slalom claims empty from {from} but block {bad} was hit"
            )));
        }
        return Ok(Verdict3::Fails(IoFails {
            escape_tail_from: from,
        }));
    }
    if let Some(ev) = evidence {
        let (hit_tail, confirmed_hits, escape_tail, _) =
            validate_point_evidence(&report, ev, horizon)?;
        if let Some(from) = escape_tail {
            return Ok(Verdict3::Fails(IoFails {
                escape_tail_from: from,
            }));
        }
        if let Some(from) = hit_tail {
            return Ok(Verdict3::Holds(IoHolds {
                confirmed_hits: report.hits.iter().copied().filter(|&n| n >= from).collect(),
            }));
        }
        if !confirmed_hits.is_empty() {
            return Ok(Verdict3::Holds(IoHolds { confirmed_hits }));
        }
    }
    Ok(Verdict3::Unknown(report))
}

/// Three-valued "x↾I_n ∈ φ(n) for all but finitely many n" at the horizon.
/// `Holds` needs a validated hit tail; `Fails` a validated escape generator
/// (or eventually-empty slalom), whose in-window escape indices are returned.
pub fn ae_verdict(
    x: &Point,
    phi: &BlockSlalom,
    evidence: Option<&PointEvidence>,
    horizon: usize,
) -> Result<AeVerdict> {
    let report = scan_window(x, phi, horizon);
    if let Some(from) = phi.empty_from() {
        if let Some(&bad) = report.hits.iter().find(|&&n| n >= from) {
            return Err(Error::MalformedCertificate(format!(
                "slalom claims empty from {from} but block {bad} was hit"
            )));
        }
        let escapes: Vec<usize> = report
            .escapes
            .iter()
            .copied()
            .filter(|&n| n >= from)
            .collect();
        if !escapes.is_empty() {
            return Ok(Verdict3::Fails(AeFails { escapes }));
        }
    }
    if let Some(ev) = evidence {
        let (hit_tail, _, escape_tail, confirmed_escapes) =
            validate_point_evidence(&report, ev, horizon)?;
        if !confirmed_escapes.is_empty() || escape_tail.is_some() {
            let escapes = if let Some(from) = escape_tail {
                report
                    .escapes
                    .iter()
                    .copied()
                    .filter(|&n| n >= from)
                    .collect()
            } else {
                confirmed_escapes
            };
            return Ok(Verdict3::Fails(AeFails { escapes }));
        }
        if let Some(from) = hit_tail {
            return Ok(Verdict3::Holds(AeHolds {
                validated_from: from,
            }));
        }
    }
    Ok(Verdict3::Unknown(report))
}

/// Claim that φ(n) ⊆ ψ(n) from an index on.
#[derive(Debug, Clone, Copy)]
pub struct InclusionCertificate {
    pub from: usize,
}

#[derive(Debug, Clone)]
pub struct InclusionHolds {
    pub validated_from: usize,
}

#[derive(Debug, Clone)]
pub struct InclusionFails {
    /// Blocks where φ(n) ⊈ ψ(n), recurring into the window's top quarter.
    pub witnessed: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct InclusionScan {
    pub horizon: usize,
    pub failures: Vec<usize>,
}

pub type InclusionVerdict = Verdict3<InclusionHolds, InclusionFails, InclusionScan>;

fn subset_at(phi: &BlockSlalom, psi: &BlockSlalom, n: usize) -> Result<bool> {
    match phi.at(n) {
        BlockSet::Explicit(codes) => {
            let target = psi.at(n);
            Ok(codes.iter().all(|c| target.contains(c)))
        }
        BlockSet::Sized { size, .. } => {
            if size.is_zero() || psi.at(n).is_full(phi.partition().block_len(n)) {
                Ok(true)
            } else {
                Err(Error::BlockTooLarge(format!(
                    "inclusion test needs an explicit left block at {n}"
                )))
            }
        }
    }
}

/// Decides "φ(n) ⊆ ψ(n) for all but finitely many n" on the window. `Holds`
/// requires a certificate (identical slaloms hold trivially); differences
/// recurring into the window's top quarter yield `Fails`, whose witnessed
/// indices feed [`refuter_point`].
pub fn pointwise_included(
    phi: &BlockSlalom,
    psi: &BlockSlalom,
    cert: Option<&InclusionCertificate>,
    horizon: usize,
) -> Result<InclusionVerdict> {
    if !phi.same_partition(psi, horizon) {
        return Err(Error::MismatchedPartitions(
            "pointwise inclusion needs a shared partition".into(),
        ));
    }
    if Arc::ptr_eq(&phi.at, &psi.at) {
        return Ok(Verdict3::Holds(InclusionHolds { validated_from: 0 }));
    }
    let mut failures = Vec::new();
    for n in 0..horizon {
        if !subset_at(phi, psi, n)? {
            failures.push(n);
        }
    }
    if let Some(c) = cert {
        return match failures.iter().find(|&&n| n >= c.from) {
            None => Ok(Verdict3::Holds(InclusionHolds {
                validated_from: c.from,
            })),
            Some(&n) => Err(Error::MalformedCertificate(format!(
                "inclusion claimed from {} but φ({n}) ⊈ ψ({n})",
                c.from
            ))),
        };
    }
    match failures.last() {
        Some(&last) if last >= horizon - (horizon / 4).max(1).min(horizon) => {
            Ok(Verdict3::Fails(InclusionFails {
                witnessed: failures,
            }))
        }
        _ => Ok(Verdict3::Unknown(InclusionScan { horizon, failures })),
    }
}

/// Which predicate the refuter separates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RefuterMode {
    /// Separate the "infinitely often" sets: land in φ∖ψ on the witnessed
    /// blocks and escape ψ everywhere else.
    InfinitelyOften,
    /// Separate the "almost everywhere" sets: land in φ∖ψ on the witnessed
    /// blocks and stay inside φ elsewhere (φ must be nonempty there).
    AlmostEverywhere,
}

/// A constructed point separating two slaloms, with the exact blockwise
/// guarantees it was built to satisfy.
#[derive(Debug, Clone)]
pub struct Refuter {
    pub point: Point,
    pub mode: RefuterMode,
    /// Blocks where the point's word lies in φ(n) ∖ ψ(n).
    pub witnessed: Vec<usize>,
    /// Blocks where the side rule could not be applied (full ψ-block in the
    /// infinitely-often mode); must stay finite for the construction to mean
    /// anything.
    pub exceptions: Vec<usize>,
}

/// Builds the point witnessing that pointwise inclusion fails: on every block
/// where φ(n)∖ψ(n) ≠ ∅ the point's word is chosen there (smallest such code),
/// and on the remaining window blocks it escapes ψ (infinitely-often mode) or
/// stays inside φ (almost-everywhere mode, requiring φ nonempty there).
pub fn refuter_point(
    phi: &BlockSlalom,
    psi: &BlockSlalom,
    mode: RefuterMode,
    horizon: usize,
) -> Result<Refuter> {
    if !phi.same_partition(psi, horizon) {
        return Err(Error::MismatchedPartitions(
            "refuter needs a shared partition".into(),
        ));
    }
    let part = phi.partition().clone();
    let mut codes = Vec::with_capacity(horizon);
    let mut witnessed = Vec::new();
    let mut exceptions = Vec::new();
    for n in 0..horizon {
        let len = part.block_len(n);
        let phi_n = phi.at(n);
        let psi_n = psi.at(n);
        let diff_code = match &phi_n {
            BlockSet::Explicit(cs) => cs.iter().find(|c| !psi_n.contains(c)).cloned(),
            BlockSet::Sized { size, .. } if size.is_zero() => None,
            BlockSet::Sized { .. } => {
                return Err(Error::BlockTooLarge(format!(
                    "refuter needs explicit φ-blocks, block {n} is opaque"
                )))
            }
        };
        let code = if let Some(c) = diff_code {
            witnessed.push(n);
            c
        } else {
            match mode {
                RefuterMode::InfinitelyOften => match psi_n.smallest_absent(len) {
                    Ok(c) => c,
                    Err(_) => {
                        exceptions.push(n);
                        BigUint::zero()
                    }
                },
                RefuterMode::AlmostEverywhere => match phi_n.first_member() {
                    Ok(c) => c,
                    Err(_) => {
                        if witnessed.is_empty() {
                            // head block before the construction has started
                            exceptions.push(n);
                            BigUint::zero()
                        } else {
                            return Err(Error::Precondition {
                                op: "refuter_point",
                                clause: format!("φ({n}) is empty in the window tail"),
                            });
                        }
                    }
                },
            }
        };
        codes.push(code);
    }
    if witnessed.is_empty() {
        return Err(Error::WindowExhausted(
            "inclusion not refuted: φ(n)∖ψ(n) empty on every scanned block".into(),
        ));
    }
    Ok(Refuter {
        point: Point::from_block_codes(&part, &codes),
        mode,
        witnessed,
        exceptions,
    })
}
