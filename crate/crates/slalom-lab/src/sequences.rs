//! Positive rational sequences with certified tail-sum bounds, and the
//! non-decreasing unbounded weight sequence that keeps the weighted sum finite.
//!
//! A [`TailBoundedSeq`] is a total term function together with a total
//! `tail_bound` function certifying `Σ_{n≥k} term(n) ≤ tail_bound(k)` for every
//! k. The exact sum of a series is not finitely computable, so the bound *is*
//! the interface: every construction downstream consumes tails, never limits.
//! The built-in families all have closed-form rational tails; everything else
//! enters through [`TailBoundedSeq::custom`], which declares its own bounds and
//! is validated by sampling like any other certificate.

use std::fmt;
use std::sync::{Arc, Mutex};

use num_bigint::BigUint;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::rat::{rat_int, to_pq, Rat};

/// r^k by repeated squaring.
pub fn rat_pow(r: &Rat, k: u64) -> Rat {
    let mut base = r.clone();
    let mut k = k;
    let mut acc = Rat::one();
    while k > 0 {
        if k & 1 == 1 {
            acc *= &base;
        }
        base = &base * &base;
        k >>= 1;
    }
    acc
}

enum SeqInner {
    /// first · ratio^n, 0 < ratio < 1. Tail is the exact geometric sum.
    Geometric { first: Rat, ratio: Rat },
    /// scale / (n+1)^power, power ≥ 2. Tail by integral comparison.
    PSeries { scale: Rat, power: u32 },
    /// n · ratio^n. Term 0 vanishes, so this is a summand, not an ℓ¹₊ member
    /// on its own. Tail is the exact sum.
    LinearGeometric { ratio: Rat },
    /// Stored head, then `tail` re-indexed to start where the head ends.
    PrefixThen {
        prefix: Vec<Rat>,
        rest: TailBoundedSeq,
    },
    /// Termwise sum.
    Sum(TailBoundedSeq, TailBoundedSeq),
    /// Caller-declared terms and tails.
    Custom {
        name: String,
        term: Box<dyn Fn(usize) -> Rat + Send + Sync>,
        tail: Box<dyn Fn(usize) -> Rat + Send + Sync>,
        positive: bool,
        nonincreasing: bool,
    },
}

/// A sequence of non-negative rationals carrying a certified upper bound on
/// every tail sum.
///
/// Members of ℓ¹₊ additionally have strictly positive terms; constructions
/// that need positivity check [`TailBoundedSeq::is_positive`]. Tail bounds are
/// nonincreasing in k, which the index searches rely on.
#[derive(Clone)]
pub struct TailBoundedSeq {
    inner: Arc<SeqInner>,
}

impl fmt::Debug for TailBoundedSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TailBoundedSeq({})", self.family_name())
    }
}

/// Cap on index searches; a tail bound that has not dropped below the target
/// by this index is treated as a broken certificate.
const SHRINK_CAP: u64 = 1 << 48;

impl TailBoundedSeq {
    /// ε_n = first · ratio^n with 0 < ratio < 1, first > 0.
    pub fn geometric(first: Rat, ratio: Rat) -> Result<Self> {
        if !first.is_positive() || !ratio.is_positive() || ratio >= Rat::one() {
            return Err(Error::Usage(format!(
                "geometric family needs first > 0 and ratio in (0,1), got first={}, ratio={}",
                to_pq(&first),
                to_pq(&ratio)
            )));
        }
        Ok(Self {
            inner: Arc::new(SeqInner::Geometric { first, ratio }),
        })
    }

    /// ε_n = scale / (n+1)^power with power ≥ 2, scale > 0.
    pub fn p_series(scale: Rat, power: u32) -> Result<Self> {
        if !scale.is_positive() || power < 2 {
            return Err(Error::Usage(format!(
                "p-series family needs scale > 0 and power >= 2, got scale={}, power={power}",
                to_pq(&scale)
            )));
        }
        Ok(Self {
            inner: Arc::new(SeqInner::PSeries { scale, power }),
        })
    }

    /// ε_n = n · ratio^n with 0 < ratio < 1. Term 0 is zero; combine with
    /// [`TailBoundedSeq::sum`] to obtain an ℓ¹₊ member.
    pub fn linear_geometric(ratio: Rat) -> Result<Self> {
        if !ratio.is_positive() || ratio >= Rat::one() {
            return Err(Error::Usage(format!(
                "linear-geometric family needs ratio in (0,1), got {}",
                to_pq(&ratio)
            )));
        }
        Ok(Self {
            inner: Arc::new(SeqInner::LinearGeometric { ratio }),
        })
    }

    /// Finite stored head followed by `rest` (re-indexed from 0).
    pub fn prefix_then(prefix: Vec<Rat>, rest: TailBoundedSeq) -> Result<Self> {
        if prefix.iter().any(|t| t.is_negative()) {
            return Err(Error::Usage("prefix terms must be non-negative".into()));
        }
        Ok(Self {
            inner: Arc::new(SeqInner::PrefixThen { prefix, rest }),
        })
    }

    /// Termwise sum; tails add.
    pub fn sum(a: TailBoundedSeq, b: TailBoundedSeq) -> Self {
        Self {
            inner: Arc::new(SeqInner::Sum(a, b)),
        }
    }

    /// Caller-supplied terms with caller-certified tails. `positive` and
    /// `nonincreasing` are declarations, spot-checked by the operations that
    /// rely on them.
    pub fn custom(
        name: impl Into<String>,
        term: impl Fn(usize) -> Rat + Send + Sync + 'static,
        tail: impl Fn(usize) -> Rat + Send + Sync + 'static,
        positive: bool,
        nonincreasing: bool,
    ) -> Self {
        Self {
            inner: Arc::new(SeqInner::Custom {
                name: name.into(),
                term: Box::new(term),
                tail: Box::new(tail),
                positive,
                nonincreasing,
            }),
        }
    }

    /// The term ε_n.
    pub fn term(&self, n: usize) -> Rat {
        match &*self.inner {
            SeqInner::Geometric { first, ratio } => first * rat_pow(ratio, n as u64),
            SeqInner::PSeries { scale, power } => {
                scale / rat_pow(&rat_int(n as i64 + 1), *power as u64)
            }
            SeqInner::LinearGeometric { ratio } => rat_int(n as i64) * rat_pow(ratio, n as u64),
            SeqInner::PrefixThen { prefix, rest } => {
                if n < prefix.len() {
                    prefix[n].clone()
                } else {
                    rest.term(n - prefix.len())
                }
            }
            SeqInner::Sum(a, b) => a.term(n) + b.term(n),
            SeqInner::Custom { term, .. } => term(n),
        }
    }

    /// Certified bound: Σ_{n≥k} ε_n ≤ tail_bound(k). Nonincreasing in k.
    pub fn tail_bound(&self, k: usize) -> Rat {
        match &*self.inner {
            SeqInner::Geometric { first, ratio } => {
                first * rat_pow(ratio, k as u64) / (Rat::one() - ratio)
            }
            SeqInner::PSeries { scale, power } => {
                let pm1 = rat_int(*power as i64 - 1);
                if k == 0 {
                    scale * (Rat::one() + Rat::one() / pm1)
                } else {
                    scale / (pm1 * rat_pow(&rat_int(k as i64), *power as u64 - 1))
                }
            }
            SeqInner::LinearGeometric { ratio } => {
                // Σ_{n≥k} n r^n = r^k (k(1-r) + r) / (1-r)^2, exactly.
                let one_minus = Rat::one() - ratio;
                rat_pow(ratio, k as u64) * (rat_int(k as i64) * &one_minus + ratio)
                    / (&one_minus * &one_minus)
            }
            SeqInner::PrefixThen { prefix, rest } => {
                if k < prefix.len() {
                    prefix[k..]
                        .iter()
                        .fold(rest.tail_bound(0), |acc, t| acc + t)
                } else {
                    rest.tail_bound(k - prefix.len())
                }
            }
            SeqInner::Sum(a, b) => a.tail_bound(k) + b.tail_bound(k),
            SeqInner::Custom { tail, .. } => tail(k),
        }
    }

    /// Whether every term is strictly positive (declared for custom, derived
    /// for families).
    pub fn is_positive(&self) -> bool {
        match &*self.inner {
            SeqInner::Geometric { .. } | SeqInner::PSeries { .. } => true,
            SeqInner::LinearGeometric { .. } => false,
            SeqInner::PrefixThen { prefix, rest } => {
                prefix.iter().all(|t| t.is_positive()) && rest.is_positive()
            }
            SeqInner::Sum(a, b) => a.is_positive() || b.is_positive(),
            SeqInner::Custom { positive, .. } => *positive,
        }
    }

    /// Whether the terms are nonincreasing. Conservative for sums and
    /// prefixes; operations that require monotonicity also check it exactly on
    /// their window.
    pub fn is_nonincreasing(&self) -> bool {
        match &*self.inner {
            SeqInner::Geometric { .. } | SeqInner::PSeries { .. } => true,
            SeqInner::LinearGeometric { .. } => false,
            SeqInner::PrefixThen { prefix, rest } => {
                rest.is_nonincreasing()
                    && prefix.windows(2).all(|w| w[0] >= w[1])
                    && (prefix.is_empty() || *prefix.last().unwrap() >= rest.term(0))
            }
            SeqInner::Sum(a, b) => a.is_nonincreasing() && b.is_nonincreasing(),
            SeqInner::Custom { nonincreasing, .. } => *nonincreasing,
        }
    }

    /// Exact Σ_{n ∈ [from, to)} ε_n.
    pub fn partial_sum(&self, from: usize, to: usize) -> Rat {
        assert!(from <= to, "partial_sum needs from <= to");
        (from..to).fold(Rat::zero(), |acc, n| acc + self.term(n))
    }

    /// Smallest k > lo with tail_bound(k) < target, by galloping and then
    /// bisecting on the nonincreasing tail. Errors if the bound has not
    /// dropped below `target` by the search cap (broken certificate).
    pub fn first_tail_below(&self, target: &Rat, lo: usize) -> Result<usize> {
        if !target.is_positive() {
            return Err(Error::MalformedCertificate(format!(
                "tail search target must be positive, got {}",
                to_pq(target)
            )));
        }
        let mut step = 1u64;
        let mut hi = lo as u64 + 1;
        while self.tail_bound(hi as usize) >= *target {
            step *= 2;
            hi = hi.saturating_add(step);
            if hi > SHRINK_CAP {
                return Err(Error::MalformedCertificate(format!(
                    "tail bound never drops below {} (searched to {hi})",
                    to_pq(target)
                )));
            }
        }
        // invariant: tail(hi) < target; find the least such index > lo
        let mut low = lo as u64; // tail(low) >= target or low == lo
        while hi - low > 1 {
            let mid = low + (hi - low) / 2;
            if self.tail_bound(mid as usize) < *target {
                hi = mid;
            } else {
                low = mid;
            }
        }
        Ok(hi as usize)
    }

    /// Index k with tail_bound(k) < r (the certificate's shrink map).
    pub fn shrink(&self, r: &Rat) -> Result<usize> {
        if self.tail_bound(0) < *r {
            return Ok(0);
        }
        self.first_tail_below(r, 0)
    }

    fn family_name(&self) -> String {
        match &*self.inner {
            SeqInner::Geometric { .. } => "geometric".into(),
            SeqInner::PSeries { .. } => "p_series".into(),
            SeqInner::LinearGeometric { .. } => "linear_geometric".into(),
            SeqInner::PrefixThen { .. } => "prefix_then".into(),
            SeqInner::Sum(..) => "sum".into(),
            SeqInner::Custom { name, .. } => format!("custom:{name}"),
        }
    }

    /// Serialized literal: family, parameters, and a stored prefix of terms.
    pub fn to_json(&self, prefix_len: usize) -> Value {
        let params = match &*self.inner {
            SeqInner::Geometric { first, ratio } => {
                json!({ "first": to_pq(first), "ratio": to_pq(ratio) })
            }
            SeqInner::PSeries { scale, power } => {
                json!({ "scale": to_pq(scale), "power": power })
            }
            SeqInner::LinearGeometric { ratio } => json!({ "ratio": to_pq(ratio) }),
            SeqInner::PrefixThen { prefix, rest } => {
                json!({
                    "prefix_len": prefix.len(),
                    "rest": rest.to_json(0),
                })
            }
            SeqInner::Sum(a, b) => json!({ "a": a.to_json(0), "b": b.to_json(0) }),
            SeqInner::Custom { name, .. } => json!({ "name": name }),
        };
        let prefix: Vec<String> = (0..prefix_len).map(|n| to_pq(&self.term(n))).collect();
        json!({ "family": self.family_name(), "params": params, "prefix": prefix })
    }

    /// Same underlying object (used to detect aliased inputs cheaply).
    pub fn same_as(&self, other: &TailBoundedSeq) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
    }
}

/// The weight sequence δ produced by [`build_delta`]: nondecreasing, unbounded,
/// with Σ δ_j ε_j certified below `2 · s_bound`.
///
/// δ is constant 2^i on the block group `[breakpoint(i), breakpoint(i+1))`.
/// Breakpoints are computed on demand and cached, so `value` is a total
/// function of the index.
pub struct DeltaWitness {
    eps: TailBoundedSeq,
    s_bound: Rat,
    breakpoints: Mutex<Vec<usize>>,
}

impl DeltaWitness {
    /// The certified bound for Σ ε (= tail_bound(0)).
    pub fn s_bound(&self) -> &Rat {
        &self.s_bound
    }

    pub fn eps(&self) -> &TailBoundedSeq {
        &self.eps
    }

    /// n_i: the i-th breakpoint. n_0 = 0 and, for i ≥ 1,
    /// n_i = min{ k > n_{i-1} : tail_bound(k) < s_bound / 4^i }.
    pub fn breakpoint(&self, i: usize) -> Result<usize> {
        let mut bps = self.breakpoints.lock().unwrap();
        while bps.len() <= i {
            let prev = *bps.last().unwrap();
            let next_i = bps.len() as u64;
            let target = &self.s_bound / rat_pow(&rat_int(4), next_i);
            let k = self.eps.first_tail_below(&target, prev)?;
            bps.push(k);
        }
        Ok(bps[i])
    }

    /// Index i of the group containing j (δ_j = 2^i).
    pub fn group_of(&self, j: usize) -> Result<usize> {
        let mut i = 0usize;
        loop {
            if self.breakpoint(i + 1)? > j {
                return Ok(i);
            }
            i += 1;
        }
    }

    /// δ_j as a big integer (a power of two).
    pub fn value(&self, j: usize) -> Result<BigUint> {
        Ok(BigUint::one() << self.group_of(j)?)
    }

    /// δ_j as a rational.
    pub fn value_rat(&self, j: usize) -> Result<Rat> {
        Ok(Rat::from_integer(self.value(j)?.into()))
    }

    /// Exact Σ_{j < to} δ_j ε_j.
    pub fn weighted_partial_sum(&self, to: usize) -> Result<Rat> {
        let mut acc = Rat::zero();
        let mut j = 0usize;
        let mut group = 0usize;
        while j < to {
            let end = self.breakpoint(group + 1)?.min(to);
            let weight = self.value_rat(j)?;
            while j < end {
                acc += &weight * self.eps.term(j);
                j += 1;
            }
            group += 1;
        }
        Ok(acc)
    }
}

/// Builds the nondecreasing, unbounded weight sequence δ with all weighted
/// partial sums Σ_{j < n_i} δ_j ε_j strictly below 2 · s_bound, where s_bound
/// is the certified bound for Σ ε.
///
/// The i-th block group satisfies, exactly,
/// Σ_{j ∈ [n_i, n_{i+1})} 2^i ε_j ≤ 2^i · tail_bound(n_i), which for i ≥ 1 is
/// < s_bound / 2^i by the choice of n_i; group 0 contributes < s_bound because
/// its sum is a strict partial sum of the whole series.
pub fn build_delta(eps: &TailBoundedSeq) -> Result<DeltaWitness> {
    let s_bound = eps.tail_bound(0);
    if !s_bound.is_positive() {
        return Err(Error::MalformedCertificate(format!(
            "series bound must be positive, got {}",
            to_pq(&s_bound)
        )));
    }
    let witness = DeltaWitness {
        eps: eps.clone(),
        s_bound,
        breakpoints: Mutex::new(vec![0]),
    };
    // Probe the first breakpoint so a dead certificate fails at build time.
    witness.breakpoint(1)?;
    Ok(witness)
}

/// Exact Σ_{n ∈ [from, to)} ε_n (free function mirroring the operation name).
pub fn partial_sum(eps: &TailBoundedSeq, from: usize, to: usize) -> Rat {
    eps.partial_sum(from, to)
}

/// The sequence n ↦ δ_n · base_n for a delta witness over `base`, with the
/// certified tail bound 2^i · base_tail(k) + s · 2^-i for k in block group i
/// (the group's remainder plus the geometric envelope of all later groups).
pub fn delta_weighted(delta: &std::sync::Arc<DeltaWitness>, positive: bool) -> TailBoundedSeq {
    let base_term = delta.eps().clone();
    let base_tail = delta.eps().clone();
    let s_bound = delta.s_bound().clone();
    let d_term = delta.clone();
    let d_tail = delta.clone();
    TailBoundedSeq::custom(
        "delta-weighted",
        move |n| d_term.value_rat(n).expect("delta extends") * base_term.term(n),
        move |k| {
            let i = d_tail.group_of(k).expect("delta extends") as u64;
            crate::rat::pow2_rat(i) * base_tail.tail_bound(k) + &s_bound * crate::rat::pow2_inv(i)
        },
        positive,
        false,
    )
}

/// Membership threshold along a delta witness: the first breakpoint index
/// where δ reaches at least `n_factor` + 1 (so ratios bounded by 1/δ drop
/// strictly below 1/n_factor).
pub fn delta_threshold(delta: &std::sync::Arc<DeltaWitness>, n_factor: u64) -> usize {
    let i = crate::rat::log2_ceil(&BigUint::from(n_factor + 1));
    delta.breakpoint(i as usize).expect("delta extends")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    fn geo_half() -> TailBoundedSeq {
        // ε_n = 2^-n, tail_bound(k) = 2^(1-k)
        TailBoundedSeq::geometric(rat_int(1), rat(1, 2)).unwrap()
    }

    /// Brute-force the breakpoint minimization by linear scan.
    fn breakpoints_by_scan(eps: &TailBoundedSeq, count: usize) -> Vec<usize> {
        let s = eps.tail_bound(0);
        let mut bps = vec![0usize];
        for i in 1..=count {
            let target = &s / rat_pow(&rat_int(4), i as u64);
            let mut k = bps[i - 1] + 1;
            while eps.tail_bound(k) >= target {
                k += 1;
            }
            bps.push(k);
        }
        bps
    }

    #[test]
    fn geometric_tail_is_exact() {
        let eps = geo_half();
        assert_eq!(eps.tail_bound(0), rat_int(2));
        assert_eq!(eps.tail_bound(3), rat(1, 4));
        // partial sums stay under the certified tail
        assert!(eps.partial_sum(2, 50) <= eps.tail_bound(2));
    }

    #[test]
    fn partial_sum_examples() {
        let eps = geo_half();
        assert_eq!(eps.partial_sum(7, 7), Rat::zero());
        assert_eq!(eps.partial_sum(0, 4), rat(15, 8));
        assert!(eps.partial_sum(2, 6) <= eps.tail_bound(2));
    }

    #[test]
    fn delta_breakpoints_match_scan_and_closed_form() {
        let eps = geo_half();
        let delta = build_delta(&eps).unwrap();
        let scanned = breakpoints_by_scan(&eps, 8);
        for (i, want) in scanned.iter().enumerate() {
            assert_eq!(delta.breakpoint(i).unwrap(), *want, "breakpoint {i}");
        }
        // closed form for this instance: 2^(1-k) < 2/4^i  ⟺  k ≥ 2i+1
        for i in 1..=8 {
            assert_eq!(delta.breakpoint(i).unwrap(), 2 * i + 1);
        }
        let first: Vec<BigUint> = (0..7).map(|j| delta.value(j).unwrap()).collect();
        let want: Vec<BigUint> = [1u32, 1, 1, 2, 2, 4, 4]
            .iter()
            .map(|&v| BigUint::from(v))
            .collect();
        assert_eq!(first, want);
    }

    #[test]
    fn delta_weighted_sums_stay_below_twice_bound() {
        for eps in [
            geo_half(),
            TailBoundedSeq::geometric(rat(3, 7), rat(9, 10)).unwrap(),
            TailBoundedSeq::p_series(rat_int(1), 3).unwrap(),
            TailBoundedSeq::p_series(rat(2, 5), 4).unwrap(),
            TailBoundedSeq::prefix_then(vec![rat_int(5), rat(1, 3)], geo_half()).unwrap(),
        ] {
            let delta = build_delta(&eps).unwrap();
            let two_s = rat_int(2) * delta.s_bound();
            for i in 1..=10 {
                let n_i = delta.breakpoint(i).unwrap();
                let sum = delta.weighted_partial_sum(n_i).unwrap();
                assert!(sum < two_s, "partial sum at breakpoint {i} too large");
            }
            // δ nondecreasing and unbounded over the computed horizon
            let horizon = delta.breakpoint(10).unwrap();
            let mut prev = BigUint::zero();
            for j in 0..horizon {
                let v = delta.value(j).unwrap();
                assert!(v >= prev);
                prev = v;
            }
            assert_eq!(prev, BigUint::one() << 9usize);
            assert_eq!(delta.value(horizon).unwrap(), BigUint::one() << 10usize);
        }
    }

    #[test]
    fn delta_block_group_bound() {
        // Σ_{j∈[n_i, n_{i+1})} 2^i ε_j ≤ 2^i tail(n_i), and < s/2^i for i ≥ 1.
        let eps = TailBoundedSeq::p_series(rat_int(1), 3).unwrap();
        let delta = build_delta(&eps).unwrap();
        for i in 0..8 {
            let (a, b) = (
                delta.breakpoint(i).unwrap(),
                delta.breakpoint(i + 1).unwrap(),
            );
            let w = rat_pow(&rat_int(2), i as u64);
            let block = &w * eps.partial_sum(a, b);
            assert!(block <= &w * eps.tail_bound(a));
            if i >= 1 {
                assert!(block < delta.s_bound() / rat_pow(&rat_int(2), i as u64));
            }
        }
    }

    #[test]
    fn shrink_finds_small_tail() {
        let eps = TailBoundedSeq::p_series(rat(1, 2), 2).unwrap();
        for r in [rat(1, 3), rat(1, 100), rat(1, 12345)] {
            let k = eps.shrink(&r).unwrap();
            assert!(eps.tail_bound(k) < r);
            if k > 0 {
                assert!(eps.tail_bound(k - 1) >= r, "shrink not minimal");
            }
        }
    }

    #[test]
    fn dead_tail_is_rejected() {
        // tail bound stuck at 1: the gallop must give up with a certificate error
        let eps = TailBoundedSeq::custom("stuck", |_| rat(1, 2), |_| rat_int(1), true, true);
        assert!(matches!(
            eps.first_tail_below(&rat(1, 2), 0),
            Err(Error::MalformedCertificate(_))
        ));
    }

    #[test]
    fn prefix_then_tails_cover_junction() {
        let eps = TailBoundedSeq::prefix_then(vec![rat_int(3), rat(1, 2)], geo_half()).unwrap();
        assert_eq!(eps.term(0), rat_int(3));
        assert_eq!(eps.term(1), rat(1, 2));
        assert_eq!(eps.term(2), rat_int(1)); // rest re-indexed from 0
        for k in 0..6 {
            assert!(eps.partial_sum(k, 40) <= eps.tail_bound(k));
            assert!(eps.tail_bound(k + 1) <= eps.tail_bound(k));
        }
    }

    #[test]
    fn observed_sum_family_is_positive() {
        // 1/(n+1)^2 + n/2^n: a sum whose second summand alone is not positive
        let eps = TailBoundedSeq::sum(
            TailBoundedSeq::p_series(rat_int(1), 2).unwrap(),
            TailBoundedSeq::linear_geometric(rat(1, 2)).unwrap(),
        );
        assert!(eps.is_positive());
        assert_eq!(eps.term(0), rat_int(1));
        assert_eq!(eps.term(3), rat(1, 16) + rat(3, 8));
        for k in 0..8 {
            assert!(eps.partial_sum(k, 60) <= eps.tail_bound(k));
        }
    }

    #[test]
    fn linear_geometric_tail_exact() {
        // Σ_{n≥k} n/2^n = (k+1) 2^(1-k)
        let lg = TailBoundedSeq::linear_geometric(rat(1, 2)).unwrap();
        for k in 0..10u64 {
            let want = rat_int(k as i64 + 1) * rat_pow(&rat(1, 2), k) * rat_int(2);
            assert_eq!(lg.tail_bound(k as usize), want);
        }
    }
}
