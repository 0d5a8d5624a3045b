//! Executable witness constructions.
//!
//! Each function here turns one constructive argument into a computation whose
//! guarantees are exact inequalities checkable on a window:
//!
//! - [`merge_slaloms`]: a single slalom absorbing finitely many certified ones
//!   (the σ-ideal closure step), with the block-group ratio bound ε_j / n;
//! - [`eps_from_summable`]: a sequence ε making a summable-ratio slalom a
//!   member of the vanishing family, with the 1/δ_n certificate;
//! - [`complete_nonempty`]: filling empty blocks with the zero word without
//!   leaving the vanishing family (needs a diverging pair);
//! - [`pad_to_eps`]: inflating blocks to sit just above ε_n — the sandwich
//!   ε_n ≤ |φ̄(n)|/2^|I_n| < ε_n + 2^-|I_n| separates the two ideal scales;
//! - [`s_not_e_witness`] and [`interleave_refuter`]: points witnessing that an
//!   infinitely-often set is not contained in an almost-everywhere set;
//! - [`transfer_e`] / [`transfer_s`]: the product and union-of-cylinders maps
//!   moving a slalom from a finer partition to a coarser one;
//! - [`distinguish_eps_example`]: one slalom inside the family for ε and
//!   provably outside it for ε′, with both inequality chains exact per block.

use std::sync::{Arc, Mutex};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::partitions::{is_union_of_blocks, subin, IntervalPartition};
use crate::points::Point;
use crate::rat::{ceil_big, pow2, pow2_inv, pow2_rat, rat, rat_big, rat_int, to_pq, Rat};
use crate::sequences::{build_delta, DeltaWitness, TailBoundedSeq};
use crate::slaloms::{BlockSet, BlockSlalom, DivergenceCertificate, VanishingCertificate};

/// Result of [`merge_slaloms`]: the absorbing slalom and its block-group
/// boundaries k_0 < k_1 < … (group n unions the first min(n, #inputs) inputs).
pub struct MergedSlalom {
    pub slalom: BlockSlalom,
    groups: Arc<GroupBoundaries>,
    pub input_count: usize,
}

struct GroupBoundaries {
    thresholds: Vec<VanishingCertificate>,
    cache: Mutex<Vec<usize>>,
}

impl GroupBoundaries {
    /// k_n = max(k_{n-1}+1, max_{i < min(n, L)} threshold_i(n²)).
    fn boundary(&self, n: usize) -> usize {
        let mut cache = self.cache.lock().unwrap();
        while cache.len() <= n {
            let m = cache.len();
            let prev = *cache.last().unwrap();
            let wanted = self
                .thresholds
                .iter()
                .take(m)
                .map(|c| c.threshold((m * m) as u64))
                .max()
                .unwrap_or(0);
            cache.push(wanted.max(prev + 1));
        }
        cache[n]
    }

    /// Group index of block j.
    fn group_of(&self, j: usize) -> usize {
        let mut n = 0usize;
        while self.boundary(n + 1) <= j {
            n += 1;
        }
        n
    }
}

impl MergedSlalom {
    pub fn group_boundary(&self, n: usize) -> usize {
        self.groups.boundary(n)
    }

    pub fn group_of(&self, j: usize) -> usize {
        self.groups.group_of(j)
    }
}

/// Merges finitely many certified slaloms over a shared partition into one
/// that eventually absorbs each of them: φ^i(j) ⊆ φ(j) for every j ≥ k_{i+1},
/// and on block group n ≥ 1 the union's ratio is strictly below ε_j / n.
/// The output's certificate is threshold(N) = k_{N+1}.
pub fn merge_slaloms(phis: &[BlockSlalom], window_check: usize) -> Result<MergedSlalom> {
    let first = phis
        .first()
        .ok_or_else(|| Error::Usage("merge needs at least one slalom".into()))?;
    for (i, phi) in phis.iter().enumerate() {
        if !phi.same_partition(first, window_check) {
            return Err(Error::MismatchedPartitions(format!(
                "input {i} disagrees with input 0 on the first {window_check} endpoints"
            )));
        }
        if phi.certificate().is_none() {
            return Err(Error::MissingCertificate(format!(
                "merge input {i} has no vanishing certificate"
            )));
        }
    }
    let groups = Arc::new(GroupBoundaries {
        thresholds: phis
            .iter()
            .map(|p| p.certificate().unwrap().clone())
            .collect(),
        cache: Mutex::new(vec![0]),
    });
    let inputs: Arc<Vec<BlockSlalom>> = Arc::new(phis.to_vec());
    let groups_for_at = groups.clone();
    let part = first.partition().clone();
    let len_of = part.clone();
    let at = move |j: usize| -> BlockSet {
        let n = groups_for_at.group_of(j);
        let take = n.min(inputs.len());
        let mut codes: Vec<BigUint> = Vec::new();
        for phi in inputs.iter().take(take) {
            match phi.at(j) {
                BlockSet::Explicit(cs) => codes.extend(cs),
                s if s.is_empty() => {}
                _ => panic!("merge needs explicit blocks (block {j})"),
            }
        }
        BlockSet::explicit(codes, len_of.block_len(j)).expect("merged codes in range")
    };
    let groups_for_cert = groups.clone();
    let cert =
        VanishingCertificate::new(move |n_factor| groups_for_cert.boundary(n_factor as usize + 1));
    let slalom = BlockSlalom::from_fn(part, "merged", at).with_certificate(cert);
    Ok(MergedSlalom {
        slalom,
        groups,
        input_count: phis.len(),
    })
}

/// Result of [`eps_from_summable`].
pub struct DerivedEps {
    /// The constructed sequence ε_n = δ_n · max(|φ(n)|, 1) / 2^|I_n|.
    pub eps: TailBoundedSeq,
    /// Membership certificate for φ in the vanishing family of (I, ε); the
    /// ratio over ε is exactly ≤ 1/δ_n.
    pub certificate: VanishingCertificate,
    pub delta: Arc<DeltaWitness>,
    /// Whether the max(·,1) guard was in play (φ not known nonempty).
    pub guard_possible: bool,
}

/// From a slalom with certified summable ratios Σ |φ(n)|/2^|I_n|, builds
/// ε ∈ ℓ¹₊ whose vanishing family contains φ, via the weight sequence δ.
///
/// Empty blocks would make the plain product δ_n·|φ(n)|/2^|I_n| vanish, so the
/// term is guarded by max(|φ(n)|, 1); keeping the guarded ratios certified
/// summable requires the partition to certify blockLen(n) ≥ n (the guard mass
/// then sits below a geometric tail). δ is built on the guarded ratios, which
/// keeps Σ δ_n ε_n < 2·s unconditionally.
pub fn eps_from_summable(
    phi: &BlockSlalom,
    ratio_tail: &TailBoundedSeq,
    sample_window: usize,
) -> Result<DerivedEps> {
    for n in 0..sample_window {
        let declared = ratio_tail.term(n);
        let actual = phi.ratio_at(n);
        if declared != actual {
            return Err(Error::MalformedCertificate(format!(
                "ratio certificate term({n}) = {} but |φ({n})|/2^|I_{n}| = {}",
                to_pq(&declared),
                to_pq(&actual)
            )));
        }
    }
    let part = phi.partition().clone();
    let everywhere_nonempty = phi.nonempty_from() == Some(0);
    let guarded: TailBoundedSeq = if everywhere_nonempty {
        ratio_tail.clone()
    } else {
        let len_from = part.len_ge_index_from().ok_or_else(|| {
            Error::MissingCertificate(
                "guarded ratios need a partition certifying blockLen(n) ≥ n".into(),
            )
        })?;
        let p_term = phi.clone();
        let p_tail = part.clone();
        let base_tail = ratio_tail.clone();
        TailBoundedSeq::custom(
            "guarded-ratios",
            move |n| {
                let size = p_term.size_at(n).max(BigUint::one());
                rat_big(&size) * pow2_inv(p_term.partition().block_len(n))
            },
            move |k| {
                // guard mass: Σ_{n≥k} 2^-|I_n| ≤ explicit head + Σ_{n≥max(k,f)} 2^-n
                let f = len_from;
                let mut guard = pow2_inv(k.max(f) as u64) * rat_int(2);
                for n in k..f {
                    guard += pow2_inv(p_tail.block_len(n));
                }
                base_tail.tail_bound(k) + guard
            },
            true,
            false,
        )
    };
    let delta = Arc::new(build_delta(&guarded)?);
    let eps = crate::sequences::delta_weighted(&delta, true);
    let delta_for_cert = delta.clone();
    let certificate = VanishingCertificate::new(move |n_factor| {
        crate::sequences::delta_threshold(&delta_for_cert, n_factor)
    });
    Ok(DerivedEps {
        eps,
        certificate,
        delta,
        guard_possible: !everywhere_nonempty,
    })
}

/// Fills every empty block with the zero word. Requires a full-limit
/// divergence certificate for the pair: past the divergence threshold of N+1
/// the filled block's ratio 2^-|I_n| stays strictly under ε_n / N.
pub fn complete_nonempty(
    phi: &BlockSlalom,
    divergence: &DivergenceCertificate,
) -> Result<BlockSlalom> {
    if !divergence.is_full_limit() {
        return Err(Error::MissingCertificate(
            "completion needs a full-limit divergence certificate".into(),
        ));
    }
    let phi_cert = phi
        .certificate()
        .ok_or_else(|| {
            Error::MissingCertificate("completion input has no vanishing certificate".into())
        })?
        .clone();
    let div = divergence.clone();
    let cert = VanishingCertificate::new(move |n_factor| {
        let strict = Rat::from_integer(BigInt::from(n_factor) + BigInt::one());
        phi_cert.threshold(n_factor).max(div.threshold(&strict))
    });
    let source = phi.clone();
    Ok(BlockSlalom::from_fn(
        phi.partition().clone(),
        format!("fill({})", phi.name()),
        move |n| {
            let s = source.at(n);
            if s.is_empty() {
                BlockSet::Explicit(vec![BigUint::zero()])
            } else {
                s
            }
        },
    )
    .with_certificate(cert)
    .with_nonempty_from(0))
}

/// Per-block record of what [`pad_to_eps`] did.
#[derive(Debug, Clone)]
pub struct PadBlock {
    pub block: usize,
    pub qualifying: bool,
    pub size_before: BigUint,
    pub size_after: BigUint,
    pub ratio_after: Rat,
    pub eps_n: Rat,
}

/// Result of [`pad_to_eps`].
pub struct PaddedSlalom {
    pub slalom: BlockSlalom,
    source: BlockSlalom,
    eps: TailBoundedSeq,
}

impl PaddedSlalom {
    /// Whether block n satisfies 2^-|I_n| ≤ ε_n, ε_n < 1, and
    /// |φ(n)|/2^|I_n| < ε_n + 2^-|I_n| — the sandwich is reached there, by
    /// padding or because the block already sat inside it.
    pub fn qualifying(&self, n: usize) -> bool {
        let len = self.source.partition().block_len(n);
        let eps_n = self.eps.term(n);
        pow2_inv(len) <= eps_n
            && eps_n < Rat::one()
            && self.source.ratio_at(n) < &eps_n + pow2_inv(len)
    }

    pub fn report(&self, n: usize) -> PadBlock {
        PadBlock {
            block: n,
            qualifying: self.qualifying(n),
            size_before: self.source.size_at(n),
            size_after: self.slalom.size_at(n),
            ratio_after: self.slalom.ratio_at(n),
            eps_n: self.eps.term(n),
        }
    }
}

/// Inflates each block with 2^-|I_n| ≤ ε_n, ε_n < 1, |φ(n)|/2^|I_n| < ε_n to
/// exactly ⌈ε_n·2^|I_n|⌉ codes by appending the smallest codes not already
/// present, so that, exactly, ε_n ≤ |φ̄(n)|/2^|I_n| < ε_n + 2^-|I_n| ≤ 2·ε_n.
/// A block already inside the sandwich stays unchanged; everything else comes
/// out empty. Needs explicit source blocks where codes are appended.
pub fn pad_to_eps(phi: &BlockSlalom, eps: &TailBoundedSeq) -> Result<PaddedSlalom> {
    let part = phi.partition().clone();
    let source = phi.clone();
    let eps_for_at = eps.clone();
    let at = move |n: usize| -> BlockSet {
        let len = part.block_len(n);
        let eps_n = eps_for_at.term(n);
        let ratio = source.ratio_at(n);
        if !(pow2_inv(len) <= eps_n && eps_n < Rat::one()) {
            return BlockSet::empty();
        }
        if ratio >= eps_n {
            // already at (or past) the target size
            return if ratio < &eps_n + pow2_inv(len) {
                source.at(n)
            } else {
                BlockSet::empty()
            };
        }
        let target = ceil_big(&(eps_n * pow2_rat(len)));
        let existing = match source.at(n) {
            BlockSet::Explicit(cs) => cs,
            s if s.is_empty() => Vec::new(),
            _ => panic!("pad_to_eps needs explicit blocks (block {n})"),
        };
        // cutoff c with |[0,c) ∖ φ(n)| = target − |φ(n)|: iterate to the fixed point
        let missing = &target - BigUint::from(existing.len());
        let mut cutoff = missing.clone();
        loop {
            let inside = existing.partition_point(|c| *c < cutoff);
            let next = &missing + BigUint::from(inside);
            if next == cutoff {
                break;
            }
            cutoff = next;
        }
        if target <= BigUint::from(4096u32) {
            let mut codes = existing.clone();
            let mut c = BigUint::zero();
            while c < cutoff {
                codes.push(c.clone());
                c += 1u32;
            }
            codes.sort();
            codes.dedup();
            debug_assert_eq!(BigUint::from(codes.len()), target);
            BlockSet::Explicit(codes)
        } else {
            BlockSet::Sized {
                size: target,
                member: Arc::new(move |c| *c < cutoff || existing.binary_search(c).is_ok()),
                tag: "padded".into(),
            }
        }
    };
    let slalom = BlockSlalom::from_fn(phi.partition().clone(), format!("pad({})", phi.name()), at);
    Ok(PaddedSlalom {
        slalom,
        source: phi.clone(),
        eps: eps.clone(),
    })
}

/// Witness separating the infinitely-often scale from the almost-everywhere
/// scale: the point hits the zero-singleton slalom on B and leaves ψ on every
/// complement block where ψ is not full.
pub struct SNotEWitness {
    pub point: Point,
    pub phi_b: BlockSlalom,
    /// Blocks of B inside the window (hits of φ_B).
    pub hit_blocks: Vec<usize>,
    /// Complement blocks where the point escapes ψ.
    pub escape_blocks: Vec<usize>,
}

/// Builds the separating point: φ_B = {zero word} on B; x↾I_n = 0 off the
/// escape set; x↾I_n the smallest code outside ψ(n) on every complement block
/// with ψ(n) not full. Errors when ψ is full on every scanned complement
/// block (evidence against ψ's membership certificate).
pub fn s_not_e_witness(
    partition: &IntervalPartition,
    b_set: impl Fn(usize) -> bool + Send + Sync + 'static,
    psi: &BlockSlalom,
    horizon: usize,
) -> Result<SNotEWitness> {
    if !psi.partition().agrees_with(partition, horizon) {
        return Err(Error::MismatchedPartitions(
            "ψ must live on the given partition".into(),
        ));
    }
    let b = Arc::new(b_set);
    let hit_blocks: Vec<usize> = (0..horizon).filter(|&n| b(n)).collect();
    if hit_blocks.is_empty() || hit_blocks.len() == horizon {
        return Err(Error::Precondition {
            op: "s_not_e_witness",
            clause: "B must be nontrivial inside the window".into(),
        });
    }
    let mut codes: Vec<BigUint> = Vec::with_capacity(horizon);
    let mut escape_blocks = Vec::new();
    for n in 0..horizon {
        let len = partition.block_len(n);
        if b(n) {
            codes.push(BigUint::zero());
            continue;
        }
        match psi.at(n).smallest_absent(len) {
            Ok(c) => {
                escape_blocks.push(n);
                codes.push(c);
            }
            Err(_) => codes.push(BigUint::zero()), // ψ full here; skipped
        }
    }
    if escape_blocks.is_empty() {
        return Err(Error::MalformedCertificate(
            "ψ is full on every scanned complement block".into(),
        ));
    }
    let point = Point::from_block_codes(partition, &codes);
    let phi_b = BlockSlalom::zero_singleton_on(partition.clone(), "zero-on-B", move |n| b(n));
    Ok(SNotEWitness {
        point,
        phi_b,
        hit_blocks,
        escape_blocks,
    })
}

/// Witness from the interleaving construction: a point scheduled to enter φ on
/// an increasing sequence of I-blocks and to leave ψ on an interleaved
/// increasing sequence of J-blocks, the chosen blocks occupying pairwise
/// disjoint stretches of positions.
pub struct InterleaveWitness {
    pub point: Point,
    /// I-blocks where the point's word lies in φ.
    pub i_hits: Vec<usize>,
    /// J-blocks where the point's word avoids ψ.
    pub j_escapes: Vec<usize>,
}

/// Greedily picks an I-block with nonempty φ, then a J-block with non-full ψ
/// strictly above it, and so on; the point is pinned on the chosen blocks
/// (smallest φ-member / smallest ψ-absent code) and zero elsewhere.
pub fn interleave_refuter(
    phi: &BlockSlalom,
    psi: &BlockSlalom,
    horizon: usize,
) -> Result<InterleaveWitness> {
    let ip = phi.partition().clone();
    let jp = psi.partition().clone();
    if (0..horizon).all(|n| phi.at(n).is_empty()) {
        return Err(Error::Precondition {
            op: "interleave_refuter",
            clause: "φ is empty on the whole window".into(),
        });
    }
    let mut assignments: Vec<(u64, u64, BigUint)> = Vec::new();
    let mut i_hits = Vec::new();
    let mut j_escapes = Vec::new();
    let mut pos = 0u64;
    let (mut a, mut bj) = (0usize, 0usize);
    loop {
        // next φ-nonempty I-block starting at or above pos
        let mut found_i = None;
        while a < horizon {
            let (lo, hi) = ip.block(a);
            if lo >= pos && !phi.at(a).is_empty() {
                found_i = Some((a, lo, hi));
                break;
            }
            a += 1;
        }
        let Some((ia, lo_i, hi_i)) = found_i else {
            break;
        };
        let code_i = phi.at(ia).first_member()?;
        // next non-full ψ J-block strictly above it
        let mut found_j = None;
        while bj < horizon {
            let (lo, hi) = jp.block(bj);
            if lo >= hi_i {
                if let Ok(c) = psi.at(bj).smallest_absent(jp.block_len(bj)) {
                    found_j = Some((bj, lo, hi, c));
                    break;
                }
            }
            bj += 1;
        }
        let Some((jb, lo_j, hi_j, code_j)) = found_j else {
            break;
        };
        assignments.push((lo_i, hi_i, code_i));
        assignments.push((lo_j, hi_j, code_j));
        i_hits.push(ia);
        j_escapes.push(jb);
        pos = hi_j;
        a += 1;
        bj += 1;
    }
    if i_hits.is_empty() {
        return Err(Error::WindowExhausted(
            "no interleaved pair found inside the window".into(),
        ));
    }
    let total_bits = assignments.iter().map(|(_, hi, _)| *hi).max().unwrap();
    let mut bits = vec![false; total_bits as usize];
    for (lo, hi, code) in &assignments {
        for b in 0..(hi - lo) {
            bits[(lo + b) as usize] = code.bit(b);
        }
    }
    Ok(InterleaveWitness {
        point: Point::prefix_tail(bits, false),
        i_hits,
        j_escapes,
    })
}

/// Per-block validation data for the transfer maps.
#[derive(Debug, Clone)]
pub struct TransferCheck {
    pub block: usize,
    pub size: BigUint,
    pub lhs: Rat,
    pub rhs: Rat,
}

/// Result of a transfer map.
pub struct Transferred {
    pub slalom: BlockSlalom,
    pub from: usize,
}

/// Product transfer along domination: for I ⊑ J with ε nonincreasing and
/// min subin(n) ≥ n on [from, horizon), ψ(n) asks every contained I-block to
/// agree with φ there. |ψ(n)| = Π |φ(k)| · 2^(|J_n| − Σ|I_k|) exactly, and the
/// ratio over ε_n is at most the product of the φ-side ratios over ε_k.
pub fn transfer_e(
    phi: &BlockSlalom,
    j_part: &IntervalPartition,
    eps: &TailBoundedSeq,
    from: usize,
    horizon: usize,
) -> Result<Transferred> {
    let ip = phi.partition().clone();
    if !eps.is_nonincreasing() {
        return Err(Error::Precondition {
            op: "transfer_e",
            clause: "ε must be declared nonincreasing".into(),
        });
    }
    for n in from..horizon {
        let ks = subin(&ip, j_part, n);
        if ks.is_empty() {
            return Err(Error::Precondition {
                op: "transfer_e",
                clause: format!("no I-block inside J_{n} (domination fails on the window)"),
            });
        }
        if ks[0] < n {
            return Err(Error::Precondition {
                op: "transfer_e",
                clause: format!("min subin(I,J,{n}) = {} < {n}", ks[0]),
            });
        }
        if eps.term(n + 1) > eps.term(n) {
            return Err(Error::Precondition {
                op: "transfer_e",
                clause: format!("ε increases at {n}"),
            });
        }
    }
    let ip_at = ip.clone();
    let jp_at = j_part.clone();
    let phi_at = phi.clone();
    let at = move |n: usize| -> BlockSet {
        if n < from {
            return BlockSet::empty();
        }
        let ks = subin(&ip_at, &jp_at, n);
        let (j_lo, j_hi) = jp_at.block(n);
        let mut size = BigUint::one();
        let mut constrained_bits = 0u64;
        for &k in &ks {
            size *= phi_at.size_at(k);
            constrained_bits += ip_at.block_len(k);
        }
        if size.is_zero() {
            return BlockSet::empty();
        }
        size <<= usize::try_from(j_hi - j_lo - constrained_bits).unwrap();
        let ip_m = ip_at.clone();
        let phi_m = phi_at.clone();
        BlockSet::Sized {
            size,
            member: Arc::new(move |code| {
                ks.iter().all(|&k| {
                    let (lo, hi) = ip_m.block(k);
                    let sub = extract_bits(code, lo - j_lo, hi - j_lo);
                    phi_m.at(k).contains(&sub)
                })
            }),
            tag: "product-transfer".into(),
        }
    };
    let mut out = BlockSlalom::from_fn(j_part.clone(), format!("E[{}]", phi.name()), at);
    if let Some(c) = phi.certificate() {
        let c = c.clone();
        out = out.with_certificate(VanishingCertificate::new(move |n| c.threshold(n).max(from)));
    }
    Ok(Transferred { slalom: out, from })
}

/// Exact ratio-chain check for [`transfer_e`] at block n:
/// |ψ(n)|/(2^|J_n|·ε_n) ≤ Π_k |φ(k)|/(2^|I_k|·ε_k).
pub fn transfer_e_check(
    out: &Transferred,
    phi: &BlockSlalom,
    eps: &TailBoundedSeq,
    n: usize,
) -> TransferCheck {
    let jp = out.slalom.partition();
    let ip = phi.partition();
    let size = out.slalom.size_at(n);
    let lhs = rat_big(&size) / (pow2_rat(jp.block_len(n)) * eps.term(n));
    let rhs = subin(ip, jp, n)
        .iter()
        .map(|&k| phi.ratio_at(k) / eps.term(k))
        .product();
    TransferCheck {
        block: n,
        size,
        lhs,
        rhs,
    }
}

/// Union-of-cylinders transfer along refinement: ψ(n) collects the words on
/// J_n agreeing with φ on at least one contained I-block. Exact size by
/// inclusion–exclusion for up to 4 contained blocks, by enumeration for
/// J-blocks of at most 12 bits; the ratio is bounded by the sum of the φ-side
/// ratios (an upper bound — cylinders overlap). Needs Σ_(k∈subin) ε_k ≤ ε_n
/// on [from, horizon).
pub fn transfer_s(
    phi: &BlockSlalom,
    j_part: &IntervalPartition,
    eps: &TailBoundedSeq,
    from: usize,
    horizon: usize,
) -> Result<Transferred> {
    let ip = phi.partition().clone();
    for n in from..horizon {
        if !is_union_of_blocks(&ip, j_part, n) {
            return Err(Error::Precondition {
                op: "transfer_s",
                clause: format!("J_{n} is not a union of I-blocks"),
            });
        }
        let ks = subin(&ip, j_part, n);
        let sum: Rat = ks.iter().map(|&k| eps.term(k)).sum();
        if sum > eps.term(n) {
            return Err(Error::Precondition {
                op: "transfer_s",
                clause: format!(
                    "Σ ε_k over subin = {} exceeds ε_{n} = {}",
                    to_pq(&sum),
                    to_pq(&eps.term(n))
                ),
            });
        }
    }
    let ip_at = ip.clone();
    let jp_at = j_part.clone();
    let phi_at = phi.clone();
    let at = move |n: usize| -> BlockSet {
        if n < from {
            return BlockSet::empty();
        }
        let ks = subin(&ip_at, &jp_at, n);
        let (j_lo, j_hi) = jp_at.block(n);
        let j_len = j_hi - j_lo;
        let member: Arc<dyn Fn(&BigUint) -> bool + Send + Sync> = {
            let ip_m = ip_at.clone();
            let phi_m = phi_at.clone();
            let ks_m = ks.clone();
            Arc::new(move |code: &BigUint| {
                ks_m.iter().any(|&k| {
                    let (lo, hi) = ip_m.block(k);
                    let sub = extract_bits(code, lo - j_lo, hi - j_lo);
                    phi_m.at(k).contains(&sub)
                })
            })
        };
        let size = if ks.len() <= 4 {
            inclusion_exclusion_size(&ip_at, &phi_at, &ks, j_len)
        } else if j_len <= crate::slaloms::ENUM_CHECK_MAX_LEN {
            let mut count = BigUint::zero();
            let mut c = BigUint::zero();
            let bound = pow2(j_len);
            while c < bound {
                if member(&c) {
                    count += 1u32;
                }
                c += 1u32;
            }
            count
        } else {
            panic!("transfer_s block {n}: more than 4 contained blocks and too long to enumerate");
        };
        BlockSet::Sized {
            size,
            member,
            tag: "cylinder-union".into(),
        }
    };
    let mut out = BlockSlalom::from_fn(j_part.clone(), format!("S[{}]", phi.name()), at);
    if let Some(c) = phi.certificate() {
        let c = c.clone();
        let ip_c = ip.clone();
        let jp_c = j_part.clone();
        out = out.with_certificate(VanishingCertificate::new(move |n_factor| {
            // first block whose contained I-blocks all sit past φ's threshold;
            // a refinement consumes at least one fine block per coarse block,
            // so the search is capped rather than trusted to terminate
            let t = c.threshold(n_factor);
            let mut n = from;
            loop {
                let ks = subin(&ip_c, &jp_c, n);
                if ks.first().is_some_and(|&k| k >= t) {
                    return n;
                }
                n += 1;
                assert!(
                    n <= from + t + (1 << 16),
                    "refinement never outran the threshold {t}"
                );
            }
        }));
    }
    Ok(Transferred { slalom: out, from })
}

/// Union size of per-block cylinders over pairwise disjoint constrained
/// stretches, by inclusion–exclusion: the T-fold intersection has size
/// Π_(k∈T)|φ(k)| · 2^(|J_n| − Σ_(k∈T)|I_k|).
fn inclusion_exclusion_size(
    ip: &IntervalPartition,
    phi: &BlockSlalom,
    ks: &[usize],
    j_len: u64,
) -> BigUint {
    let mut total = BigInt::zero();
    for mask in 1u32..(1 << ks.len()) {
        let mut size = BigInt::one();
        let mut constrained = 0u64;
        for (idx, &k) in ks.iter().enumerate() {
            if mask & (1 << idx) != 0 {
                size *= BigInt::from(phi.size_at(k));
                constrained += ip.block_len(k);
            }
        }
        size <<= usize::try_from(j_len - constrained).unwrap();
        if mask.count_ones() % 2 == 1 {
            total += size;
        } else {
            total -= size;
        }
    }
    debug_assert!(!total.is_negative());
    total.to_biguint().unwrap_or_default()
}

/// Exact union-bound check for [`transfer_s`] at block n:
/// |ψ(n)|/2^|J_n| ≤ Σ_k |φ(k)|/2^|I_k|.
pub fn transfer_s_check(out: &Transferred, phi: &BlockSlalom, n: usize) -> TransferCheck {
    let jp = out.slalom.partition();
    let ip = phi.partition();
    let size = out.slalom.size_at(n);
    let lhs = rat_big(&size) / pow2_rat(jp.block_len(n));
    let rhs = subin(ip, jp, n).iter().map(|&k| phi.ratio_at(k)).sum();
    TransferCheck {
        block: n,
        size,
        lhs,
        rhs,
    }
}

/// Bits [lo, hi) of a code, as a code in its own right.
fn extract_bits(code: &BigUint, lo: u64, hi: u64) -> BigUint {
    let mut out = BigUint::zero();
    for b in lo..hi {
        if code.bit(b) {
            out.set_bit(b - lo, true);
        }
    }
    out
}

/// Output of [`distinguish_eps_example`]: one slalom certified inside the
/// vanishing family for ε and exactly refuted for ε′.
pub struct DistinguishExample {
    /// ε_n = 1/(n+1)² + n/2ⁿ.
    pub eps: TailBoundedSeq,
    /// ε′_n = 1/(n+1)³.
    pub eps_prime: TailBoundedSeq,
    pub phi: BlockSlalom,
    /// Group starts n_1 < n_2 < … ≤ n_(groups+1).
    pub group_starts: Vec<usize>,
    /// Per block i in a group: the exact pair (|φ(i)|/2^|I_i|, ε′_i) with
    /// lhs ≥ rhs, refuting membership for ε′ pointwise.
    pub refutation: Vec<(usize, Rat, Rat)>,
}

/// Greatest m with m / 2^len < 1/(n+1)², i.e. ⌈2^len/(n+1)²⌉ − 1.
fn xi(len: u64, n: usize) -> BigUint {
    let target = pow2_rat(len) / rat_int(((n + 1) * (n + 1)) as i64);
    ceil_big(&target) - BigUint::one()
}

/// Least n ≥ max(K,3) with 2^n(n−K+1) ≥ (n+1)³. Once true it stays true: the
/// left side at least doubles per step while the right grows by the factor
/// (1+1/(n+1))³ ≤ 2 for n ≥ 3.
fn raw_group_start(k: usize) -> usize {
    let mut n = k.max(3);
    loop {
        let lhs = BigUint::from(n as u64 - k as u64 + 1) << n;
        let rhs = BigUint::from((n as u64 + 1).pow(3));
        if lhs >= rhs {
            return n;
        }
        n += 1;
    }
}

/// Builds, on a partition with blockLen(n) ≥ (n+1)³, the slalom with
/// |φ(i)| = ⌈ξ_i/K⌉ on the K-th group, where ξ_i is the largest size keeping
/// the block ratio under 1/(i+1)². The upper chain makes φ a certified member
/// for ε = 1/(n+1)² + n/2ⁿ; the lower chain pins |φ(i)|/2^|I_i| ≥ 1/(i+1)³ =
/// ε′_i on every grouped block, which refutes membership for ε′ through
/// pointwise containment.
pub fn distinguish_eps_example(
    partition: &IntervalPartition,
    groups: usize,
) -> Result<DistinguishExample> {
    if groups == 0 {
        return Err(Error::Usage("need at least one group".into()));
    }
    let eps = TailBoundedSeq::sum(
        TailBoundedSeq::p_series(rat_int(1), 2)?,
        TailBoundedSeq::linear_geometric(rat(1, 2))?,
    );
    let eps_prime = TailBoundedSeq::p_series(rat_int(1), 3)?;
    let mut starts = Vec::with_capacity(groups + 1);
    for k in 1..=groups + 1 {
        let raw = raw_group_start(k);
        let prev = starts.last().copied().unwrap_or(0);
        starts.push(raw.max(prev + 1));
    }
    let horizon = starts[groups];
    for i in 0..=horizon {
        let want = ((i as u64) + 1).pow(3);
        if partition.block_len(i) < want {
            return Err(Error::Precondition {
                op: "distinguish_eps_example",
                clause: format!(
                    "blockLen({i}) = {} < (i+1)³ = {want}",
                    partition.block_len(i)
                ),
            });
        }
    }
    let starts_for_at = starts.clone();
    let part_at = partition.clone();
    let at = move |i: usize| -> BlockSet {
        let first = starts_for_at[0];
        if i < first {
            return BlockSet::empty();
        }
        let k = match starts_for_at.binary_search(&i) {
            Ok(idx) => idx + 1,
            Err(idx) => idx, // idx ≥ 1 since i ≥ starts[0]
        };
        let len = part_at.block_len(i);
        let size = ceil_big(&(rat_big(&xi(len, i)) / rat_int(k as i64)));
        BlockSet::first_codes(size, len).expect("ξ stays below the block space")
    };
    let starts_for_cert = starts.clone();
    let cert = VanishingCertificate::new(move |n_factor| {
        let k = (n_factor as usize) + 1;
        if k <= starts_for_cert.len() {
            starts_for_cert[k - 1]
        } else {
            let mut prev = *starts_for_cert.last().unwrap();
            for kk in starts_for_cert.len() + 1..=k {
                prev = raw_group_start(kk).max(prev + 1);
            }
            prev
        }
    });
    let phi = BlockSlalom::from_fn(partition.clone(), "distinguisher", at)
        .with_certificate(cert)
        .with_nonempty_from(starts[0]);
    let mut refutation = Vec::new();
    for i in starts[0]..horizon {
        let lhs = phi.ratio_at(i);
        let rhs = eps_prime.term(i);
        if lhs < rhs {
            return Err(Error::MalformedCertificate(format!(
                "lower chain broke at block {i}: {} < {}",
                to_pq(&lhs),
                to_pq(&rhs)
            )));
        }
        refutation.push((i, lhs, rhs));
    }
    Ok(DistinguishExample {
        eps,
        eps_prime,
        phi,
        group_starts: starts,
        refutation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::floor_big;
    use crate::sequences::{partial_sum, rat_pow};
    use crate::slaloms::{restrict, sigma_member, ENUM_CHECK_MAX_LEN};

    fn part2n() -> IntervalPartition {
        IntervalPartition::arith_len(0, 2, 2).unwrap()
    }

    fn eps_half() -> TailBoundedSeq {
        TailBoundedSeq::geometric(rat(1, 2), rat(1, 2)).unwrap()
    }

    /// Deterministic certified slalom: block n holds size = min(cap,
    /// ⌊2^|I_n|ε_n/(n+1)⌋) codes spaced by `stride`; threshold(N) = N.
    fn certified(
        part: &IntervalPartition,
        eps: &TailBoundedSeq,
        cap: u64,
        stride: u64,
    ) -> BlockSlalom {
        let p = part.clone();
        let e = eps.clone();
        BlockSlalom::from_fn(part.clone(), format!("c{stride}"), move |n| {
            let budget = pow2_rat(p.block_len(n)) * e.term(n) / rat_int(n as i64 + 1);
            let size = floor_big(&budget).min(BigUint::from(cap));
            let count = u64::try_from(&size).unwrap();
            let bound = pow2(p.block_len(n));
            let codes: Vec<BigUint> = (0..count)
                .map(|j| BigUint::from(j * stride + 1) % &bound)
                .collect();
            BlockSet::explicit(codes, p.block_len(n)).unwrap()
        })
        .with_certificate(VanishingCertificate::new(|n| n as usize))
    }

    #[test]
    fn merge_absorbs_each_input() {
        let part = part2n();
        let eps = eps_half();
        let inputs: Vec<BlockSlalom> = (1..=4).map(|s| certified(&part, &eps, 3, s)).collect();
        let merged = merge_slaloms(&inputs, 16).unwrap();
        let horizon = 120;
        for (i, phi) in inputs.iter().enumerate() {
            let from = merged.group_boundary(i + 1);
            for j in from..horizon {
                let union = merged.slalom.at(j);
                if let BlockSet::Explicit(mine) = phi.at(j) {
                    for c in mine {
                        assert!(union.contains(&c), "input {i} not absorbed at block {j}");
                    }
                }
            }
        }
        // ratio < ε_j / n on group n ≥ 1, exactly
        for j in merged.group_boundary(1)..horizon {
            let n = merged.group_of(j);
            assert!(
                merged.slalom.ratio_at(j) < eps.term(j) / rat_int(n as i64),
                "group bound fails at block {j} (group {n})"
            );
        }
        assert!(sigma_member(&merged.slalom, &eps, horizon).is_holds());
    }

    #[test]
    fn merge_of_one_is_that_slalom_from_k1() {
        let part = part2n();
        let eps = eps_half();
        let phi = certified(&part, &eps, 2, 1);
        let merged = merge_slaloms(std::slice::from_ref(&phi), 8).unwrap();
        let k1 = merged.group_boundary(1);
        for j in k1..60 {
            assert_eq!(merged.slalom.at(j).size(), phi.at(j).size(), "at block {j}");
            if let BlockSet::Explicit(cs) = phi.at(j) {
                for c in cs {
                    assert!(merged.slalom.at(j).contains(&c));
                }
            }
        }
        for j in 0..k1 {
            assert!(merged.slalom.at(j).is_empty());
        }
    }

    #[test]
    fn merge_rejects_mismatched_partitions() {
        let eps = eps_half();
        let a = certified(&part2n(), &eps, 2, 1);
        let b = certified(&IntervalPartition::fixed_len(0, 3).unwrap(), &eps, 2, 1);
        assert!(matches!(
            merge_slaloms(&[a, b], 8),
            Err(Error::MismatchedPartitions(_))
        ));
    }

    #[test]
    fn eps_from_summable_certificate_and_summability() {
        // φ with ratio exactly 2^-(n+1) on |I_n| = 2(n+1): |φ(n)| = 2^(n+1)
        let part = part2n();
        let p = part.clone();
        let phi = BlockSlalom::from_fn(part.clone(), "half-ratio", move |n| {
            BlockSet::first_codes(BigUint::one() << (n + 1), p.block_len(n)).unwrap()
        })
        .with_nonempty_from(0);
        let ratio_tail = TailBoundedSeq::geometric(rat(1, 2), rat(1, 2)).unwrap();
        let derived = eps_from_summable(&phi, &ratio_tail, 24).unwrap();
        for n in 0..40usize {
            let d = derived.delta.value_rat(n).unwrap();
            assert_eq!(
                derived.eps.term(n),
                &d * rat(1, 2) * rat_pow(&rat(1, 2), n as u64)
            );
            // φ's ratio over ε is exactly 1/δ_n
            let over = phi.ratio_at(n) / derived.eps.term(n);
            assert_eq!(over, rat_int(1) / d);
        }
        for k in [0usize, 3, 9, 17] {
            assert!(partial_sum(&derived.eps, k, 160) <= derived.eps.tail_bound(k));
        }
        let phi_cert = phi.with_certificate(derived.certificate.clone());
        assert!(sigma_member(&phi_cert, &derived.eps, 80).is_holds());
        assert!(!derived.guard_possible);
    }

    #[test]
    fn eps_from_summable_guards_empty_blocks() {
        let part = part2n(); // blockLen(n) = 2(n+1) ≥ n, certified
        let phi = BlockSlalom::empty(part.clone());
        let zero_tail =
            TailBoundedSeq::custom("zero-ratios", |_| Rat::zero(), |_| Rat::zero(), false, true);
        let derived = eps_from_summable(&phi, &zero_tail, 16).unwrap();
        assert!(derived.guard_possible);
        for n in 0..24 {
            let d = derived.delta.value_rat(n).unwrap();
            assert_eq!(derived.eps.term(n), d * pow2_inv(part.block_len(n)));
            assert!(derived.eps.term(n).is_positive());
        }
        for k in 0..8 {
            assert!(partial_sum(&derived.eps, k, 120) <= derived.eps.tail_bound(k));
        }
    }

    #[test]
    fn eps_from_summable_rejects_wrong_ratios() {
        let phi = BlockSlalom::empty(part2n());
        let wrong = TailBoundedSeq::geometric(rat_int(1), rat(1, 2)).unwrap();
        assert!(matches!(
            eps_from_summable(&phi, &wrong, 8),
            Err(Error::MalformedCertificate(_))
        ));
    }

    #[test]
    fn completion_fills_empty_blocks() {
        let part = part2n();
        let eps = eps_half();
        let div = DivergenceCertificate::full(|m: &Rat| {
            let mut k = 0usize;
            while pow2_rat(k as u64 + 1) < *m {
                k += 1;
            }
            k
        });
        let p = part.clone();
        let phi = BlockSlalom::from_fn(part.clone(), "alt", move |n| {
            if n % 2 == 0 {
                BlockSet::empty()
            } else {
                BlockSet::explicit(vec![BigUint::from(3u32)], p.block_len(n)).unwrap()
            }
        })
        .with_certificate(VanishingCertificate::new(|n| n as usize));
        let bar = complete_nonempty(&phi, &div).unwrap();
        for n in 0..64 {
            assert!(!bar.at(n).is_empty());
            if n % 2 == 1 {
                assert!(bar.at(n).contains(&BigUint::from(3u32)));
                assert_eq!(bar.size_at(n), BigUint::one());
            } else {
                assert!(bar.at(n).contains(&BigUint::zero()));
            }
        }
        assert!(sigma_member(&bar, &eps, 96).is_holds());
        // φ ≡ ∅ → zero-singletons, ratio 2^-|I_n| < ε_n/N past thresholds
        let bar0 = complete_nonempty(&BlockSlalom::empty(part), &div).unwrap();
        assert!(sigma_member(&bar0, &eps, 96).is_holds());
    }

    #[test]
    fn completion_requires_full_limit() {
        let phi = BlockSlalom::empty(part2n());
        let sub = DivergenceCertificate::along_subsequence(|_| 0, |j| 2 * j);
        assert!(matches!(
            complete_nonempty(&phi, &sub),
            Err(Error::MissingCertificate(_))
        ));
    }

    #[test]
    fn pad_sandwich_exact() {
        let part = IntervalPartition::fixed_len(0, 4).unwrap();
        let p = part.clone();
        let phi = BlockSlalom::from_fn(part.clone(), "seed", move |n| {
            if n % 3 == 0 {
                BlockSet::explicit(vec![BigUint::zero()], p.block_len(n)).unwrap()
            } else {
                BlockSet::empty()
            }
        });
        let eps = TailBoundedSeq::geometric(rat(3, 16), rat(9, 10)).unwrap();
        let padded = pad_to_eps(&phi, &eps).unwrap();
        let r0 = padded.report(0);
        assert!(r0.qualifying);
        assert_eq!(r0.size_after, BigUint::from(3u32)); // ⌈(3/16)·16⌉ = 3
        assert_eq!(r0.ratio_after, rat(3, 16));
        for n in 0..40 {
            let r = padded.report(n);
            if r.qualifying {
                let len = part.block_len(n);
                assert!(r.eps_n <= r.ratio_after, "left side at {n}");
                assert!(
                    r.ratio_after < &r.eps_n + pow2_inv(len),
                    "right side at {n}"
                );
                assert!(r.ratio_after < rat_int(2) * &r.eps_n, "doubling at {n}");
                assert!(r.size_after >= r.size_before);
                if let BlockSet::Explicit(cs) = phi.at(n) {
                    for c in cs {
                        assert!(padded.slalom.at(n).contains(&c), "φ̄ ⊉ φ at {n}");
                    }
                }
            } else {
                assert!(padded.slalom.at(n).is_empty());
            }
        }
    }

    #[test]
    fn pad_keeps_block_already_at_target() {
        let part = IntervalPartition::fixed_len(0, 4).unwrap();
        let p = part.clone();
        // φ(n) = {0,1,2}: exactly the target size for ε = 3/16
        let phi = BlockSlalom::from_fn(part, "at-target", move |n| {
            BlockSet::explicit(
                vec![BigUint::zero(), BigUint::one(), BigUint::from(2u32)],
                p.block_len(n),
            )
            .unwrap()
        });
        let eps = TailBoundedSeq::geometric(rat(3, 16), rat(99, 100)).unwrap();
        let padded = pad_to_eps(&phi, &eps).unwrap();
        assert_eq!(padded.slalom.size_at(0), BigUint::from(3u32));
        assert!(padded.slalom.at(0).contains(&BigUint::from(2u32)));
    }

    #[test]
    fn s_not_e_witness_hits_and_escapes() {
        let part = part2n();
        let p = part.clone();
        // ψ = {0} everywhere, B = evens → escapes pick code 1 on odd blocks
        let psi = BlockSlalom::from_fn(part.clone(), "zero", move |n| {
            BlockSet::explicit(vec![BigUint::zero()], p.block_len(n)).unwrap()
        });
        let w = s_not_e_witness(&part, |n| n % 2 == 0, &psi, 40).unwrap();
        assert_eq!(w.hit_blocks, (0..40).step_by(2).collect::<Vec<_>>());
        assert_eq!(w.escape_blocks, (1..40).step_by(2).collect::<Vec<_>>());
        for &n in &w.hit_blocks {
            assert!(w.phi_b.at(n).contains(&restrict(&w.point, &part, n).code));
        }
        for &n in &w.escape_blocks {
            let word = restrict(&w.point, &part, n).code;
            assert!(!psi.at(n).contains(&word));
            assert_eq!(word, BigUint::one());
        }
        // ψ ≡ ∅: the all-zero point escapes on every complement block
        let w0 =
            s_not_e_witness(&part, |n| n % 2 == 0, &BlockSlalom::empty(part.clone()), 40).unwrap();
        assert_eq!(w0.escape_blocks.len(), 20);
        assert!((0..80).all(|b| !w0.point.bit(b)));
    }

    #[test]
    fn s_not_e_rejects_full_psi() {
        let part = IntervalPartition::fixed_len(0, 2).unwrap();
        let p = part.clone();
        let psi = BlockSlalom::from_fn(part.clone(), "full", move |n| {
            BlockSet::full(p.block_len(n))
        });
        assert!(matches!(
            s_not_e_witness(&part, |n| n % 2 == 0, &psi, 24),
            Err(Error::MalformedCertificate(_))
        ));
    }

    #[test]
    fn interleave_refuter_pins_disjoint_blocks() {
        let ip = IntervalPartition::unit(0);
        let jp = IntervalPartition::fixed_len(0, 2).unwrap();
        let p1 = ip.clone();
        let phi = BlockSlalom::from_fn(ip.clone(), "phi", move |n| {
            if n % 2 == 0 {
                BlockSet::explicit(vec![BigUint::one()], p1.block_len(n)).unwrap()
            } else {
                BlockSet::empty()
            }
        });
        let p2 = jp.clone();
        let psi = BlockSlalom::from_fn(jp.clone(), "psi", move |n| {
            BlockSet::explicit(vec![BigUint::zero()], p2.block_len(n)).unwrap()
        });
        let w = interleave_refuter(&phi, &psi, 64).unwrap();
        assert!(!w.i_hits.is_empty());
        assert_eq!(w.i_hits.len(), w.j_escapes.len());
        for &a in &w.i_hits {
            assert!(phi.at(a).contains(&restrict(&w.point, &ip, a).code));
        }
        for &b in &w.j_escapes {
            assert!(!psi.at(b).contains(&restrict(&w.point, &jp, b).code));
        }
        // chosen blocks interleave along positions
        let mut last_end = 0u64;
        for (&a, &b) in w.i_hits.iter().zip(&w.j_escapes) {
            assert!(ip.block(a).0 >= last_end);
            assert!(jp.block(b).0 >= ip.block(a).1);
            last_end = jp.block(b).1;
        }
    }

    #[test]
    fn interleave_with_empty_psi_is_the_trivial_escape() {
        // every coarse block escapes an empty slalom, so the greedy pairing
        // always succeeds and the point stays zero off the fine hits
        let ip = IntervalPartition::unit(0);
        let jp = IntervalPartition::fixed_len(0, 2).unwrap();
        let p1 = ip.clone();
        let phi = BlockSlalom::from_fn(ip, "evens", move |n| {
            if n % 2 == 0 {
                BlockSet::explicit(vec![BigUint::zero()], p1.block_len(n)).unwrap()
            } else {
                BlockSet::empty()
            }
        });
        let psi = BlockSlalom::empty(jp.clone());
        let w = interleave_refuter(&phi, &psi, 40).unwrap();
        assert!(!w.i_hits.is_empty());
        for &b in &w.j_escapes {
            assert!(!psi.at(b).contains(&restrict(&w.point, &jp, b).code));
        }
    }

    #[test]
    fn interleave_needs_nonempty_phi() {
        let phi = BlockSlalom::empty(IntervalPartition::unit(0));
        let psi = BlockSlalom::empty(IntervalPartition::fixed_len(0, 2).unwrap());
        assert!(matches!(
            interleave_refuter(&phi, &psi, 32),
            Err(Error::Precondition { .. })
        ));
    }

    #[test]
    fn transfer_e_product_formula_matches_enumeration() {
        let ip = IntervalPartition::from_len_fn("small", 0, |n| 1 + (n % 3) as u64, None).unwrap();
        let jp = ip.merged_pairs();
        let p = ip.clone();
        let phi = BlockSlalom::from_fn(ip.clone(), "single", move |n| {
            BlockSet::explicit(vec![BigUint::from((n % 2) as u32)], p.block_len(n)).unwrap()
        })
        .with_certificate(VanishingCertificate::new(|n| n as usize));
        let eps = eps_half();
        let out = transfer_e(&phi, &jp, &eps, 0, 24).unwrap();
        for n in 0..24 {
            let len = jp.block_len(n);
            if len <= ENUM_CHECK_MAX_LEN {
                let enumerated = out.slalom.at(n).enumerated_count(len).unwrap();
                assert_eq!(out.slalom.size_at(n), enumerated, "block {n}");
            }
            let check = transfer_e_check(&out, &phi, &eps, n);
            assert!(check.lhs <= check.rhs, "ratio chain at block {n}");
        }
        // J = I: ψ = φ (subin = {n}, free exponent 0)
        let same = transfer_e(&phi, &ip, &eps, 0, 24).unwrap();
        for n in 0..24 {
            assert_eq!(same.slalom.size_at(n), phi.size_at(n));
            if let BlockSet::Explicit(cs) = phi.at(n) {
                for c in cs {
                    assert!(same.slalom.at(n).contains(&c));
                }
            }
        }
    }

    #[test]
    fn transfer_e_full_factor_drops_out() {
        let ip = IntervalPartition::fixed_len(0, 2).unwrap();
        let jp = ip.merged_pairs();
        let p = ip.clone();
        let phi = BlockSlalom::from_fn(ip.clone(), "mixed", move |n| {
            if n % 2 == 0 {
                BlockSet::full(p.block_len(n))
            } else {
                BlockSet::explicit(vec![BigUint::zero()], p.block_len(n)).unwrap()
            }
        })
        .with_certificate(VanishingCertificate::new(|n| n as usize));
        let eps = eps_half();
        let out = transfer_e(&phi, &jp, &eps, 0, 16).unwrap();
        for n in 0..16 {
            // |ψ(n)| = 4·1·2^0: the full factor contributes its whole space
            assert_eq!(out.slalom.size_at(n), BigUint::from(4u32));
            assert_eq!(
                out.slalom.at(n).enumerated_count(4).unwrap(),
                BigUint::from(4u32)
            );
        }
    }

    #[test]
    fn transfer_e_rejects_broken_preconditions() {
        let ip = IntervalPartition::fixed_len(0, 2).unwrap();
        let phi = BlockSlalom::empty(ip.clone());
        let rising = TailBoundedSeq::custom(
            "rising-head",
            |n| if n == 0 { rat(1, 4) } else { rat(1, 2) },
            |_| rat_int(10),
            true,
            false,
        );
        assert!(matches!(
            transfer_e(&phi, &ip, &rising, 0, 8),
            Err(Error::Precondition { .. })
        ));
    }

    #[test]
    fn transfer_s_inclusion_exclusion_matches_enumeration() {
        let ip = IntervalPartition::from_len_fn("var", 0, |n| 1 + (n % 4) as u64, None).unwrap();
        let jp = ip.merged_pairs();
        // Σ over merged pairs stays under ε_n from n ≥ 1 for ratio 1/8
        let eps = TailBoundedSeq::geometric(rat(1, 4), rat(1, 8)).unwrap();
        let p = ip.clone();
        let phi = BlockSlalom::from_fn(ip.clone(), "pair", move |n| {
            let len = p.block_len(n);
            let mut codes = vec![BigUint::zero()];
            if len >= 2 {
                codes.push(BigUint::from(2u32));
            }
            BlockSet::explicit(codes, len).unwrap()
        })
        .with_certificate(VanishingCertificate::new(|n| n as usize));
        let out = transfer_s(&phi, &jp, &eps, 1, 20).unwrap();
        for n in 1..20 {
            let len = jp.block_len(n);
            assert!(len <= ENUM_CHECK_MAX_LEN);
            let enumerated = out.slalom.at(n).enumerated_count(len).unwrap();
            assert_eq!(out.slalom.size_at(n), enumerated, "block {n}");
            let check = transfer_s_check(&out, &phi, n);
            assert!(check.lhs <= check.rhs, "union bound at block {n}");
        }
    }

    #[test]
    fn transfer_s_single_block_is_a_cylinder() {
        let ip = IntervalPartition::fixed_len(0, 3).unwrap();
        let eps = eps_half();
        let p = ip.clone();
        let phi = BlockSlalom::from_fn(ip.clone(), "s", move |n| {
            BlockSet::explicit(vec![BigUint::from((n % 5) as u32)], p.block_len(n)).unwrap()
        })
        .with_certificate(VanishingCertificate::new(|n| n as usize));
        let out = transfer_s(&phi, &ip, &eps, 0, 24).unwrap();
        for n in 0..24 {
            assert_eq!(out.slalom.size_at(n), BigUint::one());
            assert_eq!(out.slalom.ratio_at(n), phi.ratio_at(n));
        }
        // φ ≡ ∅ → ψ ≡ ∅
        let empty = BlockSlalom::empty(ip.clone());
        let oute = transfer_s(&empty, &ip, &eps, 0, 24).unwrap();
        for n in 0..24 {
            assert!(oute.slalom.at(n).is_empty());
        }
    }

    #[test]
    fn distinguish_example_chains() {
        let part = IntervalPartition::from_len_fn("cubic", 0, |n| ((n + 1) as u64).pow(3), Some(0))
            .unwrap();
        let ex = distinguish_eps_example(&part, 4).unwrap();
        // brute-force the ξ maximization on small word spaces
        for len in 1..=12u64 {
            for n in 0..6usize {
                let mut m = BigUint::zero();
                while rat_big(&(&m + BigUint::one())) / pow2_rat(len)
                    < rat_int(1) / rat_int(((n + 1) * (n + 1)) as i64)
                {
                    m += 1u32;
                }
                assert_eq!(xi(len, n), m, "ξ at len={len}, n={n}");
            }
        }
        // the group-start criterion really holds for every m ≥ n_K on a window
        for (idx, &n_k) in ex.group_starts.iter().enumerate() {
            let k = idx + 1;
            for m in n_k..n_k + 64 {
                let lhs = BigUint::from((m - k + 1) as u64) << m;
                let rhs = BigUint::from((m as u64 + 1).pow(3));
                assert!(lhs >= rhs, "criterion fails at m={m} for K={k}");
            }
        }
        assert!(ex.group_starts.windows(2).all(|w| w[0] < w[1]));
        // upper chain: certified membership for ε
        assert!(sigma_member(&ex.phi, &ex.eps, ex.group_starts[4]).is_holds());
        // per-block upper bound from the worked computation:
        // ratio ≤ 1/((i+1)²K) + i/(2^i·K)
        for (idx, win) in ex.group_starts.windows(2).enumerate() {
            let k = idx + 1;
            for i in win[0]..win[1] {
                let bound = rat_int(1) / rat_int((((i + 1) * (i + 1)) * k) as i64)
                    + rat_int(i as i64) / (rat_pow(&rat_int(2), i as u64) * rat_int(k as i64));
                assert!(ex.phi.ratio_at(i) <= bound, "upper chain at block {i}");
            }
        }
        // lower chain: ratio ≥ ε′ pointwise on every grouped block
        assert!(!ex.refutation.is_empty());
        for (i, lhs, rhs) in &ex.refutation {
            assert!(lhs >= rhs, "refutation at block {i}");
            assert_eq!(*rhs, ex.eps_prime.term(*i));
            assert!(!ex.phi.at(*i).is_empty());
        }
    }
}
