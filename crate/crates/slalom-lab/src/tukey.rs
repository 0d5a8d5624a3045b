//! Width-bounded slalom systems, the mixed-radix coding of block functions,
//! and the connection maps between localization instances and block slaloms.
//!
//! A [`WidthSlalom`] over (b, h) assigns to column n a subset of [0, b(n)) of
//! size at most h(n); the membership relations are "eventually always" (∈*)
//! and "infinitely often" (∈∞), evaluated three-valuedly like everything else.
//!
//! The coding machinery identifies a tuple of per-block word sets, grouped by
//! an increasing function, with a single integer: block subsets become
//! characteristic bitmasks (codes ordered by value), tuples are ranked
//! lexicographically with radices λ_i = 2^(2^|I_i|). Block lengths are capped
//! at 4 bits for materialized coding, so each radix is at most 2^16.
//!
//! [`coded_pipeline`] is the composite map: it codes the grouped restriction
//! of a certified slalom, filters a width-(n+1)² code slalom through the exact
//! per-block ratio test with margin (n+1)³, and unions what survives into a
//! slalom ψ with |ψ(j)|/2^|I_j| < ε_j/(n+1). When the coded restriction is
//! captured columnwise and the grouping dominates the certificate's threshold
//! sequence, ψ absorbs φ blockwise — checked exactly, never assumed.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::partitions::IntervalPartition;
use crate::points::Point;
use crate::rat::{floor_big, log2_floor, pow2, pow2_inv, pow2_rat, rat_big, rat_int, to_pq, Rat};
use crate::sequences::{
    build_delta, delta_threshold, delta_weighted, DeltaWitness, TailBoundedSeq,
};
use crate::slaloms::{BlockSet, BlockSlalom, DivergenceCertificate, VanishingCertificate};
use crate::verdict::Verdict3;

/// Structural shape of a width slalom's columns, when known by construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Uniformity {
    /// Every column is the whole of [0, b(n)).
    Full,
    /// Every column is empty.
    Empty,
}

/// A slalom in a generic system: column n holds at most width(n) values below
/// base(n).
#[derive(Clone)]
pub struct WidthSlalom {
    base: Arc<dyn Fn(usize) -> BigUint + Send + Sync>,
    width: Arc<dyn Fn(usize) -> BigUint + Send + Sync>,
    at: Arc<dyn Fn(usize) -> Vec<BigUint> + Send + Sync>,
    uniform: Option<Uniformity>,
}

impl fmt::Debug for WidthSlalom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WidthSlalom(uniform={:?})", self.uniform)
    }
}

impl WidthSlalom {
    pub fn new(
        base: impl Fn(usize) -> BigUint + Send + Sync + 'static,
        width: impl Fn(usize) -> BigUint + Send + Sync + 'static,
        at: impl Fn(usize) -> Vec<BigUint> + Send + Sync + 'static,
    ) -> Self {
        Self {
            base: Arc::new(base),
            width: Arc::new(width),
            at: Arc::new(move |n| {
                let mut v = at(n);
                v.sort();
                v.dedup();
                v
            }),
            uniform: None,
        }
    }

    /// Every column full (only sensible for small bases).
    pub fn full_columns(base: impl Fn(usize) -> BigUint + Send + Sync + 'static) -> Self {
        let base: Arc<dyn Fn(usize) -> BigUint + Send + Sync> = Arc::new(base);
        let b2 = base.clone();
        let b3 = base.clone();
        Self {
            base,
            width: b2,
            at: Arc::new(move |n| {
                let bound = u64::try_from(&b3(n)).expect("full columns need a small base");
                (0..bound).map(BigUint::from).collect()
            }),
            uniform: Some(Uniformity::Full),
        }
    }

    /// Every column empty.
    pub fn empty_columns(
        base: impl Fn(usize) -> BigUint + Send + Sync + 'static,
        width: impl Fn(usize) -> BigUint + Send + Sync + 'static,
    ) -> Self {
        Self {
            base: Arc::new(base),
            width: Arc::new(width),
            at: Arc::new(|_| Vec::new()),
            uniform: Some(Uniformity::Empty),
        }
    }

    pub fn base(&self, n: usize) -> BigUint {
        (self.base)(n)
    }

    pub fn width(&self, n: usize) -> BigUint {
        (self.width)(n)
    }

    /// Column values, sorted.
    pub fn at(&self, n: usize) -> Vec<BigUint> {
        (self.at)(n)
    }

    pub fn uniformity(&self) -> Option<Uniformity> {
        self.uniform
    }

    pub fn contains(&self, n: usize, value: &BigUint) -> bool {
        self.at(n).binary_search(value).is_ok()
    }

    /// Column values in range and widths respected, exactly, on the window.
    pub fn validate_window(&self, horizon: usize) -> Result<()> {
        for n in 0..horizon {
            let col = self.at(n);
            if BigUint::from(col.len()) > self.width(n) {
                return Err(Error::RangeViolation(format!(
                    "column {n} has {} values, width is {}",
                    col.len(),
                    self.width(n)
                )));
            }
            let b = self.base(n);
            if let Some(bad) = col.iter().find(|v| **v >= b) {
                return Err(Error::RangeViolation(format!(
                    "column {n} holds {bad} ≥ base {b}"
                )));
            }
        }
        Ok(())
    }

    /// Keep only values below the new base (cardinality restriction map).
    pub fn restrict_base(
        &self,
        new_base: impl Fn(usize) -> BigUint + Send + Sync + 'static,
    ) -> Self {
        let new_base: Arc<dyn Fn(usize) -> BigUint + Send + Sync> = Arc::new(new_base);
        let nb = new_base.clone();
        let at = self.at.clone();
        Self {
            base: new_base,
            width: self.width.clone(),
            at: Arc::new(move |n| {
                let bound = nb(n);
                at(n).into_iter().filter(|v| *v < bound).collect()
            }),
            uniform: None,
        }
    }

    /// Keep only the first new_width(n) values (width truncation map).
    pub fn truncate_width(
        &self,
        new_width: impl Fn(usize) -> BigUint + Send + Sync + 'static,
    ) -> Self {
        let new_width: Arc<dyn Fn(usize) -> BigUint + Send + Sync> = Arc::new(new_width);
        let nw = new_width.clone();
        let at = self.at.clone();
        Self {
            base: self.base.clone(),
            width: new_width,
            at: Arc::new(move |n| {
                let keep = usize::try_from(&nw(n)).unwrap_or(usize::MAX);
                let mut v = at(n);
                v.truncate(keep);
                v
            }),
            uniform: None,
        }
    }
}

/// Membership mode for [`lc_alc_eval`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvalMode {
    /// x(n) ∈ φ(n) for all but finitely many n.
    EverywhereTail,
    /// x(n) ∈ φ(n) for infinitely many n.
    InfinitelyOften,
}

/// What a column scan observed.
#[derive(Debug, Clone)]
pub struct ColumnReport {
    pub horizon: usize,
    pub hits: Vec<usize>,
    pub escapes: Vec<usize>,
}

pub type LcVerdict = Verdict3<Uniformity, ColumnReport, ColumnReport>;

/// Window evaluation of x ∈* φ or x ∈∞ φ. Certified answers come only from
/// structural uniformity (full columns hold both relations, empty columns
/// refute both); anything else is the window report.
pub fn lc_alc_eval(
    x: &[BigUint],
    phi: &WidthSlalom,
    mode: EvalMode,
    horizon: usize,
) -> Result<LcVerdict> {
    let _ = mode; // both modes share certified cases; the report serves either
    let horizon = horizon.min(x.len());
    let mut hits = Vec::new();
    let mut escapes = Vec::new();
    for (n, v) in x.iter().enumerate().take(horizon) {
        if phi.contains(n, v) {
            hits.push(n);
        } else {
            escapes.push(n);
        }
    }
    let report = ColumnReport {
        horizon,
        hits,
        escapes,
    };
    match phi.uniformity() {
        Some(Uniformity::Full) => {
            if !report.escapes.is_empty() {
                return Err(Error::MalformedCertificate(
                    "full-column slalom produced an escape".into(),
                ));
            }
            Ok(Verdict3::Holds(Uniformity::Full))
        }
        Some(Uniformity::Empty) => {
            if !report.hits.is_empty() {
                return Err(Error::MalformedCertificate(
                    "empty-column slalom produced a hit".into(),
                ));
            }
            Ok(Verdict3::Fails(report))
        }
        None => Ok(Verdict3::Unknown(report)),
    }
}

/// Largest block length admitted into materialized coding (radix 2^16).
pub const CODING_MAX_LEN: u64 = 4;

/// λ_i = 2^(2^|I_i|): the number of word subsets on block i.
pub fn radix(partition: &IntervalPartition, i: usize) -> Result<BigUint> {
    let len = partition.block_len(i);
    if len > CODING_MAX_LEN {
        return Err(Error::BlockTooLarge(format!(
            "coding needs blockLen ≤ {CODING_MAX_LEN}, block {i} has {len}"
        )));
    }
    Ok(BigUint::one() << (1usize << len))
}

/// κ = Π_(i ∈ [lo, hi)) λ_i: the number of tuples on the group.
pub fn kappa(partition: &IntervalPartition, lo: usize, hi: usize) -> Result<BigUint> {
    let mut k = BigUint::one();
    for i in lo..hi {
        k *= radix(partition, i)?;
    }
    Ok(k)
}

fn set_to_mask(set: &BlockSet, len: u64) -> Result<BigUint> {
    let mut mask = BigUint::zero();
    match set {
        BlockSet::Explicit(codes) => {
            for c in codes {
                if *c >= pow2(len) {
                    return Err(Error::RangeViolation(format!(
                        "code {c} on a {len}-bit block"
                    )));
                }
                mask.set_bit(u64::try_from(c).expect("short block"), true);
            }
        }
        BlockSet::Sized { .. } => {
            let bound = pow2(len);
            let mut c = BigUint::zero();
            while c < bound {
                if set.contains(&c) {
                    mask.set_bit(u64::try_from(&c).expect("short block"), true);
                }
                c += 1u32;
            }
        }
    }
    Ok(mask)
}

fn mask_to_set(mask: &BigUint, len: u64) -> BlockSet {
    let mut codes = Vec::new();
    for b in 0..(1u64 << len) {
        if mask.bit(b) {
            codes.push(BigUint::from(b));
        }
    }
    BlockSet::Explicit(codes)
}

/// Ranks one tuple of block sets (for blocks [lo, hi)) lexicographically:
/// subsets become bitmasks, masks are the digits, λ_i the radices, most
/// significant digit first.
pub fn code_tuple(
    partition: &IntervalPartition,
    lo: usize,
    hi: usize,
    tuple: &[BlockSet],
) -> Result<BigUint> {
    if tuple.len() != hi - lo {
        return Err(Error::Usage(format!(
            "tuple has {} entries for blocks [{lo}, {hi})",
            tuple.len()
        )));
    }
    let mut code = BigUint::zero();
    for (offset, set) in tuple.iter().enumerate() {
        let i = lo + offset;
        code *= radix(partition, i)?;
        code += set_to_mask(set, partition.block_len(i))?;
    }
    Ok(code)
}

/// Inverse of [`code_tuple`].
pub fn decode_tuple(
    partition: &IntervalPartition,
    lo: usize,
    hi: usize,
    code: &BigUint,
) -> Result<Vec<BlockSet>> {
    if *code >= kappa(partition, lo, hi)? {
        return Err(Error::RangeViolation(format!(
            "code {code} out of range for blocks [{lo}, {hi})"
        )));
    }
    let mut digits = Vec::with_capacity(hi - lo);
    let mut rest = code.clone();
    for i in (lo..hi).rev() {
        let r = radix(partition, i)?;
        let mask = &rest % &r;
        rest /= &r;
        digits.push(mask_to_set(&mask, partition.block_len(i)));
    }
    digits.reverse();
    Ok(digits)
}

/// Codes every group of a block-set tuple sequence.
pub fn code_phi(
    partition: &IntervalPartition,
    grouping: &[usize],
    payload: &[Vec<BlockSet>],
) -> Result<Vec<BigUint>> {
    if grouping.len() != payload.len() + 1 || grouping.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Usage(
            "grouping must be strictly increasing and cover the payload".into(),
        ));
    }
    payload
        .iter()
        .enumerate()
        .map(|(n, tuple)| code_tuple(partition, grouping[n], grouping[n + 1], tuple))
        .collect()
}

/// Decodes a code sequence back into tuples of block sets.
pub fn decode_phi(
    partition: &IntervalPartition,
    grouping: &[usize],
    codes: &[BigUint],
) -> Result<Vec<Vec<BlockSet>>> {
    if grouping.len() != codes.len() + 1 {
        return Err(Error::Usage("grouping must cover the codes".into()));
    }
    codes
        .iter()
        .enumerate()
        .map(|(n, code)| decode_tuple(partition, grouping[n], grouping[n + 1], code))
        .collect()
}

/// The generic-system parameters carried by a pair (I, ε): base 2^|I_n| and
/// width ⌊2^|I_n|·ε_n⌋, together with the maps in both directions.
pub struct AlcParams {
    pub partition: IntervalPartition,
    pub eps: TailBoundedSeq,
}

impl AlcParams {
    pub fn new(partition: IntervalPartition, eps: TailBoundedSeq) -> Self {
        Self { partition, eps }
    }

    /// b(n) = 2^|I_n|.
    pub fn base(&self, n: usize) -> BigUint {
        pow2(self.partition.block_len(n))
    }

    /// h(n) = ⌊2^|I_n| · ε_n⌋.
    pub fn width(&self, n: usize) -> BigUint {
        floor_big(&(pow2_rat(self.partition.block_len(n)) * self.eps.term(n)))
    }

    /// Certified Σ h(n)/b(n) ≤ Σ ε_n: the termwise ratios under ε's own tail.
    pub fn ratio_sum(&self) -> TailBoundedSeq {
        let me = self.partition.clone();
        let eps = self.eps.clone();
        let tail = self.eps.clone();
        TailBoundedSeq::custom(
            "width-over-base",
            move |n| {
                rat_big(&floor_big(&(pow2_rat(me.block_len(n)) * eps.term(n))))
                    * pow2_inv(me.block_len(n))
            },
            move |k| tail.tail_bound(k),
            false,
            false,
        )
    }

    /// Concatenation of per-block words into a point (left inverse of
    /// restriction: the n-th block of the result reads back s(n)).
    pub fn concat(&self, s: &[BigUint]) -> Point {
        Point::from_block_codes(&self.partition, s)
    }

    /// The width slalom of a certified member: blocks below threshold(1) are
    /// emptied; beyond it |φ(n)| < 2^|I_n|·ε_n keeps the width exactly.
    pub fn trim(&self, phi: &BlockSlalom) -> Result<WidthSlalom> {
        let cert = phi
            .certificate()
            .ok_or_else(|| Error::MissingCertificate("trim needs a certified slalom".into()))?;
        let cut = cert.threshold(1);
        let part = self.partition.clone();
        let part_w = self.partition.clone();
        let eps = self.eps.clone();
        let phi = phi.clone();
        Ok(WidthSlalom::new(
            move |n| pow2(part.block_len(n)),
            move |n| floor_big(&(pow2_rat(part_w.block_len(n)) * eps.term(n))),
            move |n| {
                if n < cut {
                    return Vec::new();
                }
                match phi.at(n) {
                    BlockSet::Explicit(cs) => cs,
                    s if s.is_empty() => Vec::new(),
                    _ => panic!("trim needs explicit blocks (block {n})"),
                }
            },
        ))
    }
}

/// Result of [`partition_from_b`]: a pair (I, ε) whose vanishing family
/// absorbs every width slalom of the rounded-down system.
pub struct BFactored {
    pub partition: IntervalPartition,
    pub eps: TailBoundedSeq,
    pub delta: Arc<DeltaWitness>,
    b: Arc<dyn Fn(usize) -> BigUint + Send + Sync>,
}

impl BFactored {
    /// b'(n) = 2^⌊log₂ b(n)⌋.
    pub fn base_rounded(&self, n: usize) -> BigUint {
        pow2(self.partition.block_len(n))
    }

    /// Exact bracketing b'(n) ≤ b(n) < 2·b'(n).
    pub fn bracketing_ok(&self, n: usize) -> bool {
        let b = (self.b)(n);
        let bp = self.base_rounded(n);
        bp <= b && b < (&bp << 1usize)
    }

    /// Membership certificate for any width slalom of the rounded system: the
    /// ratio over ε_n is at most h(n)/(b'(n)·ε_n) = 1/δ_n, exactly.
    pub fn membership_certificate(&self) -> VanishingCertificate {
        let delta = self.delta.clone();
        VanishingCertificate::new(move |n_factor| delta_threshold(&delta, n_factor))
    }

    /// View a width slalom of the rounded system as a block slalom on I.
    pub fn as_block_slalom(&self, w: &WidthSlalom, name: &str) -> BlockSlalom {
        let w = w.clone();
        BlockSlalom::from_fn(self.partition.clone(), name, move |n| {
            BlockSet::Explicit(w.at(n))
        })
        .with_certificate(self.membership_certificate())
    }
}

/// From (b, h) with b(n) ≥ 2, h(n) ≥ 1, and a certified tail for Σ h/b,
/// builds the partition with |I_n| = ⌊log₂ b(n)⌋ and the sequence
/// ε_n = (h(n)/b'(n))·δ_n, where δ comes from the weight construction on the
/// rounded ratios (certified summable since h/b' ≤ 2·h/b per term).
pub fn partition_from_b(
    b: impl Fn(usize) -> BigUint + Send + Sync + 'static,
    h: impl Fn(usize) -> BigUint + Send + Sync + 'static,
    ratio_tail: &TailBoundedSeq,
    validate_window: usize,
) -> Result<BFactored> {
    let b: Arc<dyn Fn(usize) -> BigUint + Send + Sync> = Arc::new(b);
    let h: Arc<dyn Fn(usize) -> BigUint + Send + Sync> = Arc::new(h);
    for n in 0..validate_window {
        let bn = b(n);
        if bn < BigUint::from(2u32) {
            return Err(Error::Usage(format!("b({n}) = {bn} must be ≥ 2")));
        }
        if h(n).is_zero() {
            return Err(Error::Usage(format!("h({n}) must be ≥ 1")));
        }
        let declared = ratio_tail.term(n);
        let actual = rat_big(&h(n)) / rat_big(&bn);
        if declared != actual {
            return Err(Error::MalformedCertificate(format!(
                "ratio certificate term({n}) = {} but h/b = {}",
                to_pq(&declared),
                to_pq(&actual)
            )));
        }
    }
    let b_len = b.clone();
    let partition = IntervalPartition::from_len_fn(
        "log2-of-b",
        0,
        move |n| log2_floor(&b_len(n)).max(1),
        None,
    )?;
    let part_for_seq = partition.clone();
    let h_seq = h.clone();
    let base_tail = ratio_tail.clone();
    let rounded = TailBoundedSeq::custom(
        "width-over-rounded-base",
        move |n| rat_big(&h_seq(n)) * pow2_inv(part_for_seq.block_len(n)),
        move |k| rat_int(2) * base_tail.tail_bound(k),
        true,
        false,
    );
    let delta = Arc::new(build_delta(&rounded)?);
    let eps = delta_weighted(&delta, true);
    Ok(BFactored {
        partition,
        eps,
        delta,
        b,
    })
}

/// Why the pipeline's containment conclusion was or was not exercised.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ContainmentOutcome {
    /// Both hypotheses held and φ(j) ⊆ ψ(j) was verified for every covered j.
    Verified { covered_blocks: usize },
    /// A hypothesis failed; the conclusion is vacuous, not refuted.
    Vacuous { reason: String },
}

/// Full trace of one [`coded_pipeline`] run.
pub struct PipelineOutcome {
    pub psi: BlockSlalom,
    /// Threshold sequence derived from φ's certificate at margin (n+1)³.
    pub k_x: Vec<usize>,
    /// Codes of φ's grouped restriction, one per column.
    pub codes: Vec<BigUint>,
    pub kappas: Vec<BigUint>,
    /// Codes of S(n) that survived the ratio filter, per column.
    pub kept: Vec<Vec<BigUint>>,
    pub hypothesis_grouping_dominates: bool,
    pub hypothesis_codes_captured: bool,
    /// Exact per-block checks (j, |ψ(j)|/2^|I_j|, ε_j/(n+1)); lhs < rhs.
    pub width_checks: Vec<(usize, Rat, Rat)>,
    pub containment: ContainmentOutcome,
}

impl PipelineOutcome {
    /// Full trace: per-column codes and filter survivors, the hypothesis
    /// flags, and every exact ratio check.
    pub fn to_json(&self) -> serde_json::Value {
        use crate::rat::to_pq;
        serde_json::json!({
            "codes": self.codes.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "kappas": self.kappas.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "kept": self.kept.iter().map(|col| {
                col.iter().map(|c| c.to_string()).collect::<Vec<_>>()
            }).collect::<Vec<_>>(),
            "k_x": self.k_x,
            "hypotheses": {
                "grouping_dominates": self.hypothesis_grouping_dominates,
                "codes_captured": self.hypothesis_codes_captured,
            },
            "width_checks": self.width_checks.iter().map(|(j, lhs, rhs)| {
                serde_json::json!({
                    "block": j,
                    "lhs": to_pq(lhs),
                    "relation": "<",
                    "rhs": to_pq(rhs),
                })
            }).collect::<Vec<_>>(),
            "containment": match &self.containment {
                ContainmentOutcome::Verified { covered_blocks } => {
                    serde_json::json!({ "verified_blocks": covered_blocks })
                }
                ContainmentOutcome::Vacuous { reason } => {
                    serde_json::json!({ "vacuous": reason })
                }
            },
        })
    }
}

/// Runs the coded connection map. `grouping` is the window of the increasing
/// function b (length: columns + 1); `s` is a width slalom over codes with
/// |S(n)| ≤ (n+1)². Block lengths on the covered window must be at most 4.
pub fn coded_pipeline(
    phi: &BlockSlalom,
    eps: &TailBoundedSeq,
    grouping: &[usize],
    s: &WidthSlalom,
) -> Result<PipelineOutcome> {
    let cert = phi
        .certificate()
        .ok_or_else(|| Error::MissingCertificate("pipeline input must be certified".into()))?;
    if grouping.len() < 2 || grouping.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Usage("grouping must be strictly increasing".into()));
    }
    let columns = grouping.len() - 1;
    let part = phi.partition().clone();
    // k^X_0 = 0; k^X_n = max(k^X_{n-1}+1, threshold((n+1)³))
    let mut k_x = vec![0usize];
    for n in 1..columns {
        let margin = ((n as u64) + 1).pow(3);
        k_x.push((k_x[n - 1] + 1).max(cert.threshold(margin)));
    }
    // code the grouped restriction of φ
    let payload: Vec<Vec<BlockSet>> = (0..columns)
        .map(|n| (grouping[n]..grouping[n + 1]).map(|j| phi.at(j)).collect())
        .collect();
    let codes = code_phi(&part, grouping, &payload)?;
    let kappas: Vec<BigUint> = (0..columns)
        .map(|n| kappa(&part, grouping[n], grouping[n + 1]))
        .collect::<Result<_>>()?;
    // filter S through the exact ratio test with margin (n+1)³
    let mut kept: Vec<Vec<BigUint>> = Vec::with_capacity(columns);
    let mut union_blocks: Vec<BlockSet> = vec![BlockSet::empty(); grouping[columns]];
    for n in 0..columns {
        let column = s.at(n);
        if column.len() > (n + 1) * (n + 1) {
            return Err(Error::RangeViolation(format!(
                "column {n} of S has {} codes, width is (n+1)² = {}",
                column.len(),
                (n + 1) * (n + 1)
            )));
        }
        let margin = rat_int((((n + 1) * (n + 1)) * (n + 1)) as i64);
        let mut kept_here = Vec::new();
        for code in column {
            if code >= kappas[n] {
                continue;
            }
            let tuple = decode_tuple(&part, grouping[n], grouping[n + 1], &code)?;
            let passes = tuple.iter().enumerate().all(|(off, t)| {
                let j = grouping[n] + off;
                let lhs = rat_big(&t.size()) * &margin;
                let rhs = pow2_rat(part.block_len(j)) * eps.term(j);
                lhs < rhs
            });
            if passes {
                for (off, t) in tuple.iter().enumerate() {
                    let j = grouping[n] + off;
                    if let (BlockSet::Explicit(a), BlockSet::Explicit(new)) = (&union_blocks[j], t)
                    {
                        let mut v = a.clone();
                        v.extend_from_slice(new);
                        v.sort();
                        v.dedup();
                        union_blocks[j] = BlockSet::Explicit(v);
                    }
                }
                kept_here.push(code);
            }
        }
        kept.push(kept_here);
    }
    // ψ: the per-block unions on the covered window, empty off it
    let first_covered = grouping[0];
    let psi = BlockSlalom::from_window(part.clone(), union_blocks).with_name("pipeline-union");
    // exact width checks: |ψ(j)|/2^|I_j| < ε_j/(n+1)
    let mut width_checks = Vec::new();
    for n in 0..columns {
        for j in grouping[n]..grouping[n + 1] {
            let lhs = psi.ratio_at(j);
            let rhs = eps.term(j) / rat_int((n + 1) as i64);
            if lhs >= rhs {
                return Err(Error::MalformedCertificate(format!(
                    "pipeline width bound failed at block {j}: {} ≥ {}",
                    to_pq(&lhs),
                    to_pq(&rhs)
                )));
            }
            width_checks.push((j, lhs, rhs));
        }
    }
    // hypotheses of the connection
    let hypothesis_grouping_dominates = (0..columns).all(|n| k_x[n] <= grouping[n]);
    let hypothesis_codes_captured = (0..columns).all(|n| s.contains(n, &codes[n]));
    let containment = if hypothesis_grouping_dominates && hypothesis_codes_captured {
        let mut covered = 0usize;
        for j in first_covered..grouping[columns] {
            let mine = match phi.at(j) {
                BlockSet::Explicit(cs) => cs,
                s if s.is_empty() => Vec::new(),
                _ => return Err(Error::BlockTooLarge(format!("block {j} not explicit"))),
            };
            for c in &mine {
                if !psi.at(j).contains(c) {
                    return Err(Error::MalformedCertificate(format!(
                        "hypotheses hold but φ({j}) ⊄ ψ({j}) at code {c}"
                    )));
                }
            }
            covered += 1;
        }
        ContainmentOutcome::Verified {
            covered_blocks: covered,
        }
    } else {
        let mut reasons = Vec::new();
        if !hypothesis_grouping_dominates {
            reasons.push("grouping does not dominate the threshold sequence");
        }
        if !hypothesis_codes_captured {
            reasons.push("some column code is not captured by S");
        }
        ContainmentOutcome::Vacuous {
            reason: reasons.join("; "),
        }
    };
    Ok(PipelineOutcome {
        psi,
        k_x,
        codes,
        kappas,
        kept,
        hypothesis_grouping_dominates,
        hypothesis_codes_captured,
        width_checks,
        containment,
    })
}

/// Per-sample outcome of [`na_witness_check`].
pub struct NaReport {
    pub per_point: Vec<crate::slaloms::AeVerdict>,
}

/// Checks the width-n capture format: |φ(n)| ≤ n for every block in the
/// window (violations error out, pinpointed), then evaluates the
/// almost-everywhere verdict of every sample point against φ.
pub fn na_witness_check(
    phi: &BlockSlalom,
    samples: &[(Point, Option<crate::slaloms::PointEvidence>)],
    horizon: usize,
) -> Result<NaReport> {
    for n in 0..horizon {
        if phi.size_at(n) > BigUint::from(n) {
            return Err(Error::Precondition {
                op: "na_witness_check",
                clause: format!("|φ({n})| = {} exceeds {n}", phi.size_at(n)),
            });
        }
    }
    let per_point = samples
        .iter()
        .map(|(x, ev)| crate::slaloms::ae_verdict(x, phi, ev.as_ref(), horizon))
        .collect::<Result<Vec<_>>>()?;
    Ok(NaReport { per_point })
}

/// The parameters embedding width-n capture into an almost-everywhere ideal:
/// 2^|I_n| ≥ n²·2ⁿ (|I_0| = 1) and ε_n = 2⁻ⁿ.
pub struct NaParams {
    pub partition: IntervalPartition,
    pub eps: TailBoundedSeq,
    pub divergence: DivergenceCertificate,
    /// Exact per-n checks (n, 1/(2^|I_n|·ε_n), 1/n²) with lhs ≤ rhs.
    pub contributivity_checks: Vec<(usize, Rat, Rat)>,
    /// Exact per-n checks (n, n/(2^|I_n|·ε_n), 1/n) with lhs ≤ rhs: any
    /// width-n slalom lands in the vanishing family.
    pub width_checks: Vec<(usize, Rat, Rat)>,
}

/// Builds the embedding parameters and validates both inequality chains on
/// [1, horizon). The point map of this connection is the identity on Cantor
/// space, so there is nothing else to construct.
pub fn na_to_e_params(horizon: usize) -> Result<NaParams> {
    let partition = IntervalPartition::from_len_fn(
        "na-embedding",
        0,
        |n| {
            if n == 0 {
                1
            } else {
                let need = BigUint::from((n * n) as u64) << n;
                crate::rat::log2_ceil(&need)
            }
        },
        Some(0),
    )?;
    let eps = TailBoundedSeq::geometric(rat_int(1), crate::rat::rat(1, 2))?;
    let divergence = DivergenceCertificate::full(|m: &Rat| {
        let mut n = 1usize;
        while rat_int((n * n) as i64) < *m {
            n += 1;
        }
        n
    });
    let mut contributivity_checks = Vec::new();
    let mut width_checks = Vec::new();
    for n in 1..horizon {
        let product = pow2_rat(partition.block_len(n)) * eps.term(n);
        let inv = rat_int(1) / &product;
        let bound = rat_int(1) / rat_int((n * n) as i64);
        if inv > bound {
            return Err(Error::MalformedCertificate(format!(
                "contributivity chain failed at {n}: {} > {}",
                to_pq(&inv),
                to_pq(&bound)
            )));
        }
        contributivity_checks.push((n, inv, bound));
        let width = rat_int(n as i64) / &product;
        let wbound = rat_int(1) / rat_int(n as i64);
        if width > wbound {
            return Err(Error::MalformedCertificate(format!(
                "width chain failed at {n}: {} > {}",
                to_pq(&width),
                to_pq(&wbound)
            )));
        }
        width_checks.push((n, width, wbound));
    }
    Ok(NaParams {
        partition,
        eps,
        divergence,
        contributivity_checks,
        width_checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;
    use crate::slaloms::{hits, restrict, sigma_member};

    fn part2n() -> IntervalPartition {
        IntervalPartition::arith_len(0, 2, 2).unwrap()
    }

    #[test]
    fn tuple_coding_examples() {
        let part = IntervalPartition::fixed_len(0, 1).unwrap();
        // all-empty tuple → code 0 (lexicographic minimum)
        let empty = vec![BlockSet::empty(), BlockSet::empty()];
        assert_eq!(code_tuple(&part, 0, 2, &empty).unwrap(), BigUint::zero());
        // |I_0| = 1, f(0) = ({word 1}): bitmask 0b10 → code 2
        let single = vec![BlockSet::explicit(vec![BigUint::one()], 1).unwrap()];
        assert_eq!(
            code_tuple(&part, 0, 1, &single).unwrap(),
            BigUint::from(2u32)
        );
        // radices: λ = 2^(2^1) = 4 per block
        assert_eq!(kappa(&part, 0, 3).unwrap(), BigUint::from(64u32));
    }

    #[test]
    fn coding_roundtrip_exhaustive_small() {
        let part = IntervalPartition::from_len_fn("mix", 0, |n| 1 + (n % 2) as u64, None).unwrap();
        let k = kappa(&part, 0, 2).unwrap();
        let bound = u64::try_from(&k).unwrap();
        for c in 0..bound {
            let code = BigUint::from(c);
            let tuple = decode_tuple(&part, 0, 2, &code).unwrap();
            assert_eq!(code_tuple(&part, 0, 2, &tuple).unwrap(), code);
        }
        assert!(decode_tuple(&part, 0, 2, &k).is_err());
    }

    #[test]
    fn coding_refuses_long_blocks() {
        let part = IntervalPartition::fixed_len(0, 5).unwrap();
        assert!(radix(&part, 0).is_err());
    }

    #[test]
    fn grouped_coding_roundtrip() {
        let part = IntervalPartition::from_len_fn("mix", 0, |n| 1 + (n % 3) as u64, None).unwrap();
        let grouping = vec![0usize, 2, 3, 6];
        let payload: Vec<Vec<BlockSet>> = (0..3)
            .map(|n| {
                (grouping[n]..grouping[n + 1])
                    .map(|j| {
                        BlockSet::explicit(vec![BigUint::from((j % 2) as u32)], part.block_len(j))
                            .unwrap()
                    })
                    .collect()
            })
            .collect();
        let codes = code_phi(&part, &grouping, &payload).unwrap();
        let back = decode_phi(&part, &grouping, &codes).unwrap();
        for (n, tuple) in back.iter().enumerate() {
            for (off, set) in tuple.iter().enumerate() {
                let j = grouping[n] + off;
                assert_eq!(set.size(), payload[n][off].size());
                if let BlockSet::Explicit(cs) = &payload[n][off] {
                    for c in cs {
                        assert!(set.contains(c), "group {n} block {j}");
                    }
                }
            }
        }
    }

    #[test]
    fn alc_params_widths_and_concat() {
        let part = part2n();
        let eps = TailBoundedSeq::geometric(rat_int(1), rat(1, 2)).unwrap();
        let alc = AlcParams::new(part.clone(), eps);
        // h(n) = ⌊2^(2n+2)·2^-n⌋ = 2^(n+2)
        for n in 0..10u64 {
            assert_eq!(alc.width(n as usize), BigUint::one() << (n + 2));
            assert_eq!(alc.base(n as usize), BigUint::one() << (2 * n + 2));
        }
        // Σ h/b certified under Σ ε
        let ratios = alc.ratio_sum();
        for k in 0..6 {
            assert!(ratios.partial_sum(k, 60) <= ratios.tail_bound(k));
        }
        // concat is a left inverse of restriction
        let s: Vec<BigUint> = (0..8u32).map(|n| BigUint::from(n * 3 % 7)).collect();
        let x = alc.concat(&s);
        for (n, code) in s.iter().enumerate() {
            assert_eq!(&restrict(&x, &part, n).code, code);
        }
    }

    #[test]
    fn trim_respects_width_past_threshold() {
        let part = part2n();
        let eps = TailBoundedSeq::geometric(rat(1, 2), rat(1, 2)).unwrap();
        let p = part.clone();
        let e = eps.clone();
        let phi = BlockSlalom::from_fn(part.clone(), "frac", move |n| {
            let budget = pow2_rat(p.block_len(n)) * e.term(n) / rat_int(n as i64 + 1);
            BlockSet::first_codes(floor_big(&budget).min(BigUint::from(6u32)), p.block_len(n))
                .unwrap()
        })
        .with_certificate(VanishingCertificate::new(|n| n as usize));
        let alc = AlcParams::new(part, eps);
        let w = alc.trim(&phi).unwrap();
        w.validate_window(24).unwrap();
        assert!(w.at(0).is_empty()); // below threshold(1) = 1
                                     // connection contract on the window: the concatenated point hits φ at
                                     // exactly the columns where the chosen word lands in trim(φ)
        let s: Vec<BigUint> = (0..24u32).map(|n| BigUint::from(n % 3)).collect();
        let x = alc.concat(&s);
        let phi_hits = hits(&x, &phi, 1..24);
        let trim_hits: Vec<usize> = (1..24).filter(|&n| w.contains(n, &s[n])).collect();
        assert_eq!(phi_hits, trim_hits);
    }

    #[test]
    fn partition_from_b_brackets_and_embeds() {
        // b(n) = 10·3^n, h(n) = n+1
        let b = |n: usize| BigUint::from(10u64) * BigUint::from(3u64).pow(n as u32);
        let h = |n: usize| BigUint::from(n as u64 + 1);
        let ratio_tail = TailBoundedSeq::custom(
            "hb",
            move |n| rat_big(&h(n)) / rat_big(&b(n)),
            // exact: Σ_{n≥k} (n+1)/(10·3^n) = 3(2k+3) / (40·3^k)
            move |k| {
                rat_int(3 * (2 * k as i64 + 3))
                    / (rat_int(40) * rat_big(&BigUint::from(3u64).pow(k as u32)))
            },
            true,
            false,
        );
        let out = partition_from_b(b, h, &ratio_tail, 12).unwrap();
        assert_eq!(out.partition.block_len(0), 3); // ⌊log₂ 10⌋
        for n in 0..12 {
            assert!(out.bracketing_ok(n), "bracketing at {n}");
        }
        // b a power of two → b' = b
        let out2 = partition_from_b(
            |n| BigUint::one() << (n + 4),
            |_| BigUint::one(),
            &TailBoundedSeq::custom(
                "hb2",
                |n| pow2_inv(n as u64 + 4),
                |k| pow2_inv(k as u64 + 3),
                true,
                true,
            ),
            8,
        )
        .unwrap();
        for n in 0..8 {
            assert_eq!(out2.base_rounded(n), BigUint::one() << (n + 4));
        }
        // any width slalom of the rounded system is certified in the family
        let w = WidthSlalom::new(
            {
                let p = out.partition.clone();
                move |n| pow2(p.block_len(n))
            },
            |n| BigUint::from(n as u64 + 1),
            |n| (0..(n as u64 + 1).min(4)).map(BigUint::from).collect(),
        );
        let as_slalom = out.as_block_slalom(&w, "width-member");
        assert!(sigma_member(&as_slalom, &out.eps, 64).is_holds());
        // and the certified ε really is summable against its tails
        for k in 0..6 {
            assert!(out.eps.partial_sum(k, 120) <= out.eps.tail_bound(k));
        }
    }

    #[test]
    fn partition_from_b_rejects_small_b() {
        let tail = TailBoundedSeq::custom("t", |_| rat(1, 2), |_| rat_int(1), true, true);
        assert!(partition_from_b(|_| BigUint::one(), |_| BigUint::one(), &tail, 4).is_err());
    }

    #[test]
    fn lc_alc_eval_three_cases() {
        let full = WidthSlalom::full_columns(|_| BigUint::from(4u32));
        let empty = WidthSlalom::empty_columns(|_| BigUint::from(4u32), |_| BigUint::one());
        let x: Vec<BigUint> = (0..16u32).map(|n| BigUint::from(n % 4)).collect();
        assert!(lc_alc_eval(&x, &full, EvalMode::EverywhereTail, 16)
            .unwrap()
            .is_holds());
        assert!(lc_alc_eval(&x, &empty, EvalMode::InfinitelyOften, 16)
            .unwrap()
            .is_fails());
        let plain = WidthSlalom::new(
            |_| BigUint::from(4u32),
            |_| BigUint::one(),
            |n| vec![BigUint::from((n % 4) as u32)],
        );
        match lc_alc_eval(&x, &plain, EvalMode::InfinitelyOften, 16).unwrap() {
            Verdict3::Unknown(report) => {
                assert_eq!(report.hits, (0..16).collect::<Vec<_>>());
            }
            other => panic!("expected Unknown, got {other:?}"),
        }
    }

    #[test]
    fn column_maps_respect_width() {
        let w = WidthSlalom::new(
            |_| BigUint::from(16u32),
            |_| BigUint::from(5u32),
            |n| {
                (0..5u64)
                    .map(|j| BigUint::from(2 * j + n as u64 % 2))
                    .collect()
            },
        );
        let truncated = w.truncate_width(|_| BigUint::from(2u32));
        truncated.validate_window(10).unwrap();
        for n in 0..10 {
            assert_eq!(truncated.at(n).len(), 2);
            assert_eq!(truncated.at(n), w.at(n)[..2].to_vec());
        }
        let restricted = w.restrict_base(|_| BigUint::from(4u32));
        for n in 0..10 {
            assert!(restricted.at(n).iter().all(|v| *v < BigUint::from(4u32)));
        }
    }

    fn pipeline_pair() -> (IntervalPartition, TailBoundedSeq) {
        // 2-bit blocks with ε_n = (n+1)³/2ⁿ: big enough for nonempty tuples to
        // pass the (n+1)³ filter on a short window, still summable
        let part = IntervalPartition::fixed_len(0, 2).unwrap();
        let eps = TailBoundedSeq::custom(
            "cubes-over-geo",
            |n| rat_int(((n + 1) * (n + 1) * (n + 1)) as i64) / pow2_rat(n as u64),
            |k| rat_int(4000) / pow2_rat(k as u64),
            true,
            false,
        );
        (part, eps)
    }

    /// A singleton on the first four blocks, empty beyond; with the fast
    /// ε of [`pipeline_pair`] this admits the threshold N<4 ↦ 0, else 4.
    fn certified_tiny(part: &IntervalPartition, eps: &TailBoundedSeq) -> BlockSlalom {
        let p = part.clone();
        let _ = eps;
        BlockSlalom::from_fn(part.clone(), "tiny", move |n| {
            if n < 4 {
                BlockSet::first_codes(BigUint::one(), p.block_len(n)).unwrap()
            } else {
                BlockSet::empty()
            }
        })
        .with_certificate(VanishingCertificate::new(|n| if n < 4 { 0 } else { 4 }))
    }

    #[test]
    fn pipeline_captured_codes_give_containment() {
        let (part, eps) = pipeline_pair();
        let phi = certified_tiny(&part, &eps);
        // k^X = [0, 4, 5, 6]; the grouping must dominate it pointwise
        let grouping: Vec<usize> = vec![0, 4, 6, 8, 10];
        // S captures exactly the codes of φ's grouped restriction
        let payload: Vec<Vec<BlockSet>> = (0..4)
            .map(|n| (grouping[n]..grouping[n + 1]).map(|j| phi.at(j)).collect())
            .collect();
        let codes = code_phi(&part, &grouping, &payload).unwrap();
        let codes_for_s = codes.clone();
        let s = WidthSlalom::new(
            {
                let part = part.clone();
                let grouping = grouping.clone();
                move |n| kappa(&part, grouping[n], grouping[n + 1]).unwrap()
            },
            |n| BigUint::from(((n + 1) * (n + 1)) as u64),
            move |n| vec![codes_for_s[n].clone()],
        );
        let out = coded_pipeline(&phi, &eps, &grouping, &s).unwrap();
        assert!(out.hypothesis_codes_captured);
        assert!(out.hypothesis_grouping_dominates, "k^X = {:?}", out.k_x);
        assert_eq!(
            out.containment,
            ContainmentOutcome::Verified { covered_blocks: 10 }
        );
        for (j, lhs, rhs) in &out.width_checks {
            assert!(lhs < rhs, "width check at block {j}");
        }
        // φ's own code survives its filter on every column
        for (n, kept) in out.kept.iter().enumerate() {
            assert!(kept.contains(&out.codes[n]), "column {n}");
        }
    }

    #[test]
    fn pipeline_vacuous_cases_reported() {
        let (part, eps) = pipeline_pair();
        let phi = certified_tiny(&part, &eps);
        let grouping = vec![0usize, 2, 4, 6];
        // S misses the codes entirely
        let s = WidthSlalom::new(
            |_| BigUint::one() << 16,
            |n| BigUint::from(((n + 1) * (n + 1)) as u64),
            |_| vec![BigUint::from(65535u32)],
        );
        let out = coded_pipeline(&phi, &eps, &grouping, &s).unwrap();
        assert!(!out.hypothesis_codes_captured);
        assert!(matches!(
            out.containment,
            ContainmentOutcome::Vacuous { .. }
        ));
        for (_, lhs, rhs) in &out.width_checks {
            assert!(lhs < rhs);
        }
    }

    #[test]
    fn pipeline_filter_can_empty_psi() {
        // ε so small that no nonempty tuple passes the (n+1)³ filter
        let part = IntervalPartition::fixed_len(0, 2).unwrap();
        let eps = TailBoundedSeq::geometric(rat(1, 64), rat(1, 2)).unwrap();
        let phi = BlockSlalom::empty(part.clone());
        let grouping = vec![0usize, 2, 4];
        let s = WidthSlalom::new(
            {
                let part = part.clone();
                let grouping = grouping.clone();
                move |n| kappa(&part, grouping[n], grouping[n + 1]).unwrap()
            },
            |n| BigUint::from(((n + 1) * (n + 1)) as u64),
            |n| {
                if n == 0 {
                    vec![BigUint::from(3u32)]
                } else {
                    vec![BigUint::from(3u32), BigUint::from(7u32)]
                }
            },
        );
        let out = coded_pipeline(&phi, &eps, &grouping, &s).unwrap();
        assert!(out.kept.iter().all(|k| k.is_empty()));
        for j in 0..4 {
            assert!(out.psi.at(j).is_empty());
        }
    }

    #[test]
    fn na_check_width_and_verdicts() {
        let part = part2n();
        let p = part.clone();
        // φ(n) = first min(n, 2^|I_n|) codes
        let phi = BlockSlalom::from_fn(part.clone(), "first-n", move |n| {
            let cap = pow2(p.block_len(n)).min(BigUint::from(n));
            BlockSet::first_codes(cap, p.block_len(n)).unwrap()
        });
        let report = na_witness_check(
            &phi,
            &[(
                Point::zeros(),
                Some(crate::slaloms::PointEvidence::hit_tail(1)),
            )],
            48,
        )
        .unwrap();
        assert!(report.per_point[0].is_holds());
        // φ ≡ ∅ fails every point
        let report0 = na_witness_check(
            &BlockSlalom::empty(part.clone()),
            &[(Point::zeros(), None), (Point::seeded(5), None)],
            48,
        )
        .unwrap();
        assert!(report0.per_point.iter().all(|v| v.is_fails()));
        // random sparse: unknown, with the escape list in the payload
        let p2 = part.clone();
        let sparse = BlockSlalom::from_fn(part.clone(), "sparse", move |n| {
            if n % 5 == 0 && n > 0 {
                BlockSet::first_codes(BigUint::from(n.min(3)), p2.block_len(n)).unwrap()
            } else {
                BlockSet::empty()
            }
        });
        let rep = na_witness_check(&sparse, &[(Point::seeded(9), None)], 48).unwrap();
        assert!(rep.per_point[0].is_unknown());
        // width violation pinpointed
        let p3 = part.clone();
        let wide = BlockSlalom::from_fn(part, "wide", move |n| {
            BlockSet::first_codes(BigUint::from(n + 1), p3.block_len(n)).unwrap()
        });
        assert!(matches!(
            na_witness_check(&wide, &[], 8),
            Err(Error::Precondition { .. })
        ));
    }

    #[test]
    fn na_params_chains() {
        let params = na_to_e_params(40).unwrap();
        // n = 4: minimal length with 2^L ≥ 16·16 = 256 is 8; width ratio 1/4
        assert_eq!(params.partition.block_len(4), 8);
        let (_, width, bound) = &params.width_checks[3];
        assert_eq!(width, &rat(1, 4));
        assert_eq!(bound, &rat(1, 4));
        for (_, lhs, rhs) in &params.contributivity_checks {
            assert!(lhs <= rhs);
        }
        use crate::slaloms::{e_contributive, PairEvidence};
        let ev = PairEvidence::diverging(params.divergence.clone());
        assert!(e_contributive(&params.partition, &params.eps, &ev, 64)
            .unwrap()
            .is_holds());
    }
}

#[cfg(test)]
mod equivalence_tests {
    use num_bigint::BigUint;
    use num_traits::One;

    use crate::constructors::complete_nonempty;
    use crate::partitions::IntervalPartition;
    use crate::points::Point;
    use crate::rat::{pow2_rat, rat, Rat};
    use crate::sequences::TailBoundedSeq;
    use crate::slaloms::{
        ae_verdict, hits, io_verdict, pointwise_included, sigma_member, BlockSet, BlockSlalom,
        DivergenceCertificate, InclusionCertificate, PointEvidence, VanishingCertificate,
    };

    /// The map pair between the two scales: any io-side slalom is completed to
    /// a nonempty one, and pointwise inclusion then transports both the
    /// almost-everywhere sets and the infinitely-often sets.
    #[test]
    fn scale_equivalence_maps_compose() {
        let part = IntervalPartition::arith_len(0, 2, 2).unwrap();
        let eps = TailBoundedSeq::geometric(rat(1, 2), rat(1, 2)).unwrap();
        let div = DivergenceCertificate::full(|m: &Rat| {
            let mut k = 0usize;
            while pow2_rat(k as u64 + 1) < *m {
                k += 1;
            }
            k
        });
        let p = part.clone();
        let phi = BlockSlalom::from_fn(part.clone(), "gappy", move |n| {
            if n % 3 == 0 {
                BlockSet::explicit(vec![BigUint::one()], p.block_len(n)).unwrap()
            } else {
                BlockSet::empty()
            }
        })
        .with_certificate(VanishingCertificate::new(|n| n as usize));
        let completed = complete_nonempty(&phi, &div).unwrap();
        assert!(sigma_member(&completed, &eps, 96).is_holds());
        // a pointwise-larger slalom on the ae side
        let c = completed.clone();
        let p2 = part.clone();
        let psi = BlockSlalom::from_fn(part.clone(), "larger", move |n| match c.at(n) {
            BlockSet::Explicit(mut cs) => {
                cs.push(BigUint::from(3u32));
                BlockSet::explicit(cs, p2.block_len(n)).unwrap()
            }
            other => other,
        });
        assert!(pointwise_included(
            &completed,
            &psi,
            Some(&InclusionCertificate { from: 0 }),
            96
        )
        .unwrap()
        .is_holds());
        // transport on points: a point following the completed slalom lands in
        // the larger one everywhere, on both scales
        let window = 64usize;
        let codes: Vec<BigUint> = (0..window)
            .map(|n| completed.at(n).first_member().unwrap())
            .collect();
        let x = Point::from_block_codes(&part, &codes);
        assert_eq!(hits(&x, &completed, 0..window).len(), window);
        assert_eq!(hits(&x, &psi, 0..window).len(), window);
        let ae = ae_verdict(&x, &psi, Some(&PointEvidence::hit_tail(0)), window).unwrap();
        assert!(ae.is_holds());
        let io = io_verdict(
            &x,
            &psi,
            Some(&PointEvidence::hitting_cofinally(|n| n)),
            window,
        )
        .unwrap();
        assert!(io.is_holds());
    }
}
