//! A finitary sandbox for the partial order of capture conditions.
//!
//! A condition is a triple (s, N, F): a finite stem of explicit block word
//! sets, a precision level, and finitely many points to be captured from the
//! stem's end onward, constrained by N·|F| ≤ 2^|I_n|·ε_n for every n ≥ |s|.
//! The constraint quantifies over all later blocks, so validation combines an
//! exact scan up to the pair's divergence threshold with the certificate
//! beyond it.
//!
//! True ultrafilters are not computable; limits along a cell of conditions
//! are taken relative to an [`UltrafilterOracle`], restricted to a principal
//! flavor (where every limit identity is exact, if degenerate) and an
//! eventually-periodic pattern flavor (which exercises nontrivial
//! coordinatewise limits). Every oracle answer is logged, and the log can be
//! replayed against the flavor for superset-closure and intersection
//! consistency.
//!
//! A [`ForcingSession`] strings conditions together the way a generic filter
//! would: points are added densely, stems grow by the minimal faithful
//! extension, and the accumulated stem — the generic slalom prefix — provably
//! captures every added point beyond its join index.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Mutex;

use num_bigint::BigUint;
use num_traits::Zero;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::partitions::IntervalPartition;
use crate::points::Point;
use crate::rat::{pow2, pow2_rat, rat_big, to_pq, Rat};
use crate::sequences::TailBoundedSeq;
use crate::slaloms::DivergenceCertificate;

/// The ambient pair and its divergence certificate: every width constraint is
/// decided by an exact scan up to the certificate's threshold.
pub struct ForcingFrame {
    pub partition: IntervalPartition,
    pub eps: TailBoundedSeq,
    pub divergence: DivergenceCertificate,
}

impl ForcingFrame {
    pub fn new(
        partition: IntervalPartition,
        eps: TailBoundedSeq,
        divergence: DivergenceCertificate,
    ) -> Result<Self> {
        if !divergence.is_full_limit() {
            return Err(Error::MissingCertificate(
                "conditions need a full-limit divergence certificate".into(),
            ));
        }
        Ok(Self {
            partition,
            eps,
            divergence,
        })
    }

    /// 2^|I_n| · ε_n.
    pub fn product(&self, n: usize) -> Rat {
        pow2_rat(self.partition.block_len(n)) * self.eps.term(n)
    }

    /// First block violating bound ≤ 2^|I_n|·ε_n for n in [from, ∞), or None:
    /// exact scan to the divergence threshold, certificate beyond (with the
    /// threshold block itself re-checked exactly).
    pub fn width_violation(&self, from: usize, bound: &Rat) -> Result<Option<usize>> {
        if bound.is_zero() {
            return Ok(None);
        }
        let t = self.divergence.threshold(bound).max(from);
        for n in from..t {
            if self.product(n) < *bound {
                return Ok(Some(n));
            }
        }
        if self.product(t) < *bound {
            return Err(Error::MalformedCertificate(format!(
                "divergence threshold({}) = {t} but the product there is {}",
                to_pq(bound),
                to_pq(&self.product(t))
            )));
        }
        Ok(None)
    }
}

fn sort_points(mut points: Vec<Point>) -> Vec<Point> {
    points.sort_by(|a, b| a.cmp_lex(b).unwrap_or(std::cmp::Ordering::Equal));
    points
}

fn dedup_points(points: Vec<Point>) -> Vec<Point> {
    let mut out: Vec<Point> = Vec::with_capacity(points.len());
    for p in points {
        if !out.iter().any(|q| q.agrees_within_depth(&p)) {
            out.push(p);
        }
    }
    out
}

/// A condition (s, N, F): stem of explicit per-block code sets, precision
/// level, and the points to capture. Points are kept sorted by the
/// lexicographic order and pairwise distinct within their comparison depth.
#[derive(Clone)]
pub struct ForcingCondition {
    stem: Vec<Vec<BigUint>>,
    level: u64,
    points: Vec<Point>,
}

impl fmt::Debug for ForcingCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Condition(|s|={}, N={}, |F|={})",
            self.stem.len(),
            self.level,
            self.points.len()
        )
    }
}

impl ForcingCondition {
    /// Builds a condition, sorting the points and refusing indistinct ones.
    pub fn new(stem: Vec<Vec<BigUint>>, level: u64, points: Vec<Point>) -> Result<Self> {
        if level == 0 {
            return Err(Error::Usage("precision level must be positive".into()));
        }
        let stem: Vec<Vec<BigUint>> = stem
            .into_iter()
            .map(|mut block| {
                block.sort();
                block.dedup();
                block
            })
            .collect();
        let sorted = sort_points(points);
        for pair in sorted.windows(2) {
            if pair[0].agrees_within_depth(&pair[1]) {
                return Err(Error::TieAtDepth {
                    depth: crate::points::DEFAULT_DISTINGUISHING_DEPTH,
                });
            }
        }
        Ok(Self {
            stem,
            level,
            points: sorted,
        })
    }

    pub fn stem(&self) -> &[Vec<BigUint>] {
        &self.stem
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    /// The captured points, in lexicographic order.
    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn to_json(&self) -> Value {
        json!({
            "stem": self.stem.iter().map(|block| {
                block.iter().map(|c| c.to_string()).collect::<Vec<_>>()
            }).collect::<Vec<_>>(),
            "level": self.level,
            "points": self.points.iter().map(|p| p.to_json()).collect::<Vec<_>>(),
        })
    }
}

/// `Holds` payload of [`cond_validate`]: the width constraint was checked
/// exactly up to the divergence threshold and certified beyond.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CondValidated {
    pub scanned_to: usize,
}

/// `Fails` payload: the violating block with both sides of the inequality.
#[derive(Debug, Clone)]
pub struct CondViolation {
    pub block: usize,
    pub lhs: Rat,
    pub rhs: Rat,
}

pub type CondVerdict = crate::verdict::Verdict3<CondValidated, CondViolation>;

/// Validates a condition against the frame: stem codes in range and
/// N·|F| ≤ 2^|I_n|·ε_n for every n ≥ |s|.
pub fn cond_validate(frame: &ForcingFrame, c: &ForcingCondition) -> Result<CondVerdict> {
    for (n, block) in c.stem.iter().enumerate() {
        let bound = pow2(frame.partition.block_len(n));
        if let Some(bad) = block.iter().find(|code| **code >= bound) {
            return Err(Error::RangeViolation(format!(
                "stem code {bad} out of range at block {n}"
            )));
        }
    }
    let need = rat_big(&(BigUint::from(c.level) * BigUint::from(c.points.len())));
    match frame.width_violation(c.stem.len(), &need)? {
        Some(block) => Ok(crate::verdict::Verdict3::Fails(CondViolation {
            block,
            lhs: need,
            rhs: frame.product(block),
        })),
        None => Ok(crate::verdict::Verdict3::Holds(CondValidated {
            scanned_to: frame.divergence.threshold(&need).max(c.stem.len()),
        })),
    }
}

/// Outcome of an order test, with the failing clauses when it does not hold.
#[derive(Debug, Clone)]
pub struct LeqReport {
    pub holds: bool,
    pub failures: Vec<String>,
}

/// Whether `stronger` ≤ `weaker`: stem extension, level growth, point-set
/// growth, captured restrictions on the new stem blocks, and the width of
/// every new stem block against the weaker condition's level — all exact.
pub fn cond_leq(
    frame: &ForcingFrame,
    stronger: &ForcingCondition,
    weaker: &ForcingCondition,
) -> LeqReport {
    let mut failures = Vec::new();
    let (t, m, h) = (&stronger.stem, stronger.level, &stronger.points);
    let (s, n_level, f) = (&weaker.stem, weaker.level, &weaker.points);
    if t.len() < s.len() || t[..s.len()] != s[..] {
        failures.push("stem does not extend the weaker stem".into());
    }
    if m < n_level {
        failures.push(format!("level dropped: {m} < {n_level}"));
    }
    for (idx, x) in f.iter().enumerate() {
        if !h.iter().any(|y| y.agrees_within_depth(x)) {
            failures.push(format!("point {idx} of the weaker condition was dropped"));
        }
    }
    if t.len() >= s.len() {
        for (n, block) in t.iter().enumerate().skip(s.len()) {
            let (lo, hi) = frame.partition.block(n);
            for (idx, x) in f.iter().enumerate() {
                let word = x.word(lo, hi);
                if block.binary_search(&word).is_err() {
                    failures.push(format!("point {idx} not captured at new stem block {n}"));
                }
            }
            let width = rat_big(&(BigUint::from(n_level) * BigUint::from(block.len())));
            if width > frame.product(n) {
                failures.push(format!(
                    "new stem block {n} too wide: N·|t(n)| = {} > {}",
                    to_pq(&width),
                    to_pq(&frame.product(n))
                ));
            }
        }
    }
    LeqReport {
        holds: failures.is_empty(),
        failures,
    }
}

/// Extends the stem minimally up to `len` blocks: every new block holds
/// exactly the restrictions of the captured points.
pub fn minimal_extension(
    frame: &ForcingFrame,
    c: &ForcingCondition,
    len: usize,
) -> ForcingCondition {
    let mut stem = c.stem.clone();
    for n in stem.len()..len {
        let (lo, hi) = frame.partition.block(n);
        let mut block: Vec<BigUint> = c.points.iter().map(|x| x.word(lo, hi)).collect();
        block.sort();
        block.dedup();
        stem.push(block);
    }
    ForcingCondition {
        stem,
        level: c.level,
        points: c.points.clone(),
    }
}

/// Adds a point to the captured set: the stem is first lengthened (minimally)
/// so that the enlarged width constraint is certified from the new end on,
/// and the result is a validated condition below the input.
pub fn dense_add_point(
    frame: &ForcingFrame,
    c: &ForcingCondition,
    x: Point,
) -> Result<ForcingCondition> {
    if c.points.iter().any(|y| y.agrees_within_depth(&x)) {
        return Err(Error::TieAtDepth {
            depth: crate::points::DEFAULT_DISTINGUISHING_DEPTH,
        });
    }
    let need = rat_big(&(BigUint::from(c.level) * BigUint::from(c.points.len() + 1)));
    let threshold = frame.divergence.threshold(&need);
    // the certificate only guarantees the width from its threshold; any
    // earlier block must be absorbed into the stem
    let mut target_len = c.stem.len().max(threshold);
    while frame.product(target_len) < need {
        target_len += 1;
    }
    let extended = minimal_extension(frame, c, target_len);
    let out = ForcingCondition::new(
        extended.stem,
        c.level,
        c.points.iter().cloned().chain(std::iter::once(x)).collect(),
    )?;
    match cond_validate(frame, &out)? {
        crate::verdict::Verdict3::Holds(_) => Ok(out),
        other => Err(Error::MalformedCertificate(format!(
            "extended condition failed to validate: {other:?}"
        ))),
    }
}

/// Key of a linked cell: stem, level, and a capacity bound for |F|.
#[derive(Debug, Clone)]
pub struct LinkedCellKey {
    pub stem: Vec<Vec<BigUint>>,
    pub level: u64,
    pub capacity: usize,
}

impl LinkedCellKey {
    pub fn of(c: &ForcingCondition, capacity: usize) -> Self {
        Self {
            stem: c.stem.clone(),
            level: c.level,
            capacity,
        }
    }

    pub fn admits(&self, c: &ForcingCondition) -> bool {
        c.stem == self.stem && c.level == self.level && c.points.len() <= self.capacity
    }
}

/// The linkedness of a cell, exercised: two members sharing a stem and level
/// always admit the common strengthening that pools their points, provided
/// the pooled width fits. The union validates and sits below both inputs.
pub fn cell_union(
    frame: &ForcingFrame,
    a: &ForcingCondition,
    b: &ForcingCondition,
) -> Result<ForcingCondition> {
    if a.stem != b.stem || a.level != b.level {
        return Err(Error::Precondition {
            op: "cell_union",
            clause: "inputs are not in a common cell".into(),
        });
    }
    let pooled = dedup_points(sort_points(
        a.points.iter().chain(&b.points).cloned().collect(),
    ));
    let out = ForcingCondition {
        stem: a.stem.clone(),
        level: a.level,
        points: pooled,
    };
    match cond_validate(frame, &out)? {
        crate::verdict::Verdict3::Holds(_) => Ok(out),
        crate::verdict::Verdict3::Fails(v) => Err(Error::Precondition {
            op: "cell_union",
            clause: format!("pooled width fails at block {}", v.block),
        }),
        crate::verdict::Verdict3::Unknown(_) => unreachable!("validation is two-valued"),
    }
}

/// The two computable oracle flavors.
#[derive(Debug, Clone, Copy)]
pub enum OracleFlavor {
    /// A set is large iff it contains the pivot index: genuine (degenerate)
    /// ultrafilter semantics, all limit identities exact.
    Principal { pivot: usize },
    /// A set is large iff it contains the whole residue class
    /// {i ≥ tail_from : i ≡ residue (mod modulus)} inside the window.
    Pattern {
        modulus: usize,
        residue: usize,
        tail_from: usize,
    },
}

/// A consistent finite-query stand-in for an ultrafilter, with a query log.
pub struct UltrafilterOracle {
    flavor: OracleFlavor,
    log: Mutex<Vec<(BTreeSet<usize>, usize, bool)>>,
}

impl UltrafilterOracle {
    pub fn principal(pivot: usize) -> Self {
        Self {
            flavor: OracleFlavor::Principal { pivot },
            log: Mutex::new(Vec::new()),
        }
    }

    pub fn pattern(modulus: usize, residue: usize, tail_from: usize) -> Self {
        assert!(modulus > 0 && residue < modulus);
        Self {
            flavor: OracleFlavor::Pattern {
                modulus,
                residue,
                tail_from,
            },
            log: Mutex::new(Vec::new()),
        }
    }

    pub fn flavor(&self) -> OracleFlavor {
        self.flavor
    }

    fn decide(&self, set: &BTreeSet<usize>, universe: usize) -> Result<bool> {
        match self.flavor {
            OracleFlavor::Principal { pivot } => {
                if pivot >= universe {
                    return Err(Error::OracleInconsistency(format!(
                        "pivot {pivot} outside the window of {universe}"
                    )));
                }
                Ok(set.contains(&pivot))
            }
            OracleFlavor::Pattern {
                modulus,
                residue,
                tail_from,
            } => {
                let class: Vec<usize> = (tail_from..universe)
                    .filter(|i| i % modulus == residue)
                    .collect();
                if class.is_empty() {
                    return Err(Error::OracleInconsistency(format!(
                        "window of {universe} has no member of the residue class"
                    )));
                }
                Ok(class.iter().all(|i| set.contains(i)))
            }
        }
    }

    /// Decides largeness and records the query.
    pub fn is_large(&self, set: &BTreeSet<usize>, universe: usize) -> Result<bool> {
        let answer = self.decide(set, universe)?;
        self.log
            .lock()
            .unwrap()
            .push((set.clone(), universe, answer));
        Ok(answer)
    }

    /// Picks the unique large member of a partition into classes.
    pub fn select_class(&self, classes: &[BTreeSet<usize>], universe: usize) -> Result<usize> {
        let mut chosen = None;
        for (idx, class) in classes.iter().enumerate() {
            if self.is_large(class, universe)? {
                if chosen.is_some() {
                    return Err(Error::OracleInconsistency(
                        "two disjoint classes both large".into(),
                    ));
                }
                chosen = Some(idx);
            }
        }
        chosen
            .ok_or_else(|| Error::OracleInconsistency("no class of the partition is large".into()))
    }

    /// Replays the log: answers must be reproducible, large sets must be
    /// superset-closed, and any two large sets must intersect in a large set.
    pub fn check_log(&self) -> Result<()> {
        let log = self.log.lock().unwrap();
        for (set, universe, answer) in log.iter() {
            if self.decide(set, *universe)? != *answer {
                return Err(Error::OracleInconsistency(
                    "logged answer not reproducible".into(),
                ));
            }
        }
        for (a, ua, _) in log.iter().filter(|(_, _, l)| *l) {
            for (b, ub, _) in log.iter().filter(|(_, _, l)| *l) {
                let universe = (*ua).min(*ub);
                let both: BTreeSet<usize> = a
                    .intersection(b)
                    .copied()
                    .filter(|i| *i < universe)
                    .collect();
                if both.is_empty() || !self.decide(&both, universe)? {
                    return Err(Error::OracleInconsistency(
                        "two large sets with a small intersection".into(),
                    ));
                }
            }
        }
        for (a, ua, la) in log.iter() {
            if !la {
                continue;
            }
            for (b, ub, lb) in log.iter() {
                if *ub == *ua && a.is_subset(b) && !*lb {
                    return Err(Error::OracleInconsistency(
                        "a superset of a large set answered small".into(),
                    ));
                }
            }
        }
        Ok(())
    }
}

/// Oracle-relative limit of a family inside one linked cell. With a principal
/// oracle the result is exactly the pivot member; with a pattern oracle the
/// family must be constant along the selected residue class, and the limit is
/// that constant.
pub fn d_limit(
    cell: &LinkedCellKey,
    family: &[ForcingCondition],
    oracle: &UltrafilterOracle,
) -> Result<ForcingCondition> {
    if family.is_empty() {
        return Err(Error::Usage("limit of an empty family".into()));
    }
    for (i, c) in family.iter().enumerate() {
        if !cell.admits(c) {
            return Err(Error::Precondition {
                op: "d_limit",
                clause: format!("family member {i} is outside the cell"),
            });
        }
    }
    let universe = family.len();
    // the level set of |F_i| selected as large
    let mut classes: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); cell.capacity + 1];
    for (i, c) in family.iter().enumerate() {
        classes[c.points.len()].insert(i);
    }
    let m_star = oracle.select_class(&classes, universe)?;
    let class = &classes[m_star];
    match oracle.flavor() {
        OracleFlavor::Principal { pivot } => {
            debug_assert!(class.contains(&pivot));
            Ok(family[pivot].clone())
        }
        OracleFlavor::Pattern {
            modulus,
            residue,
            tail_from,
        } => {
            // the largeness of the class is witnessed by the residue tail, so
            // the coordinatewise limit depends on those members only; it is
            // finitely presentable when they all agree
            let members: Vec<usize> = class
                .iter()
                .copied()
                .filter(|i| *i >= tail_from && i % modulus == residue)
                .collect();
            let first = members[0];
            for &i in &members[1..] {
                for k in 0..m_star {
                    if !family[first].points[k].agrees_within_depth(&family[i].points[k]) {
                        return Err(Error::OracleInconsistency(format!(
                            "family not constant along the class: members {first} and {i} differ at point {k}"
                        )));
                    }
                }
            }
            Ok(family[first].clone())
        }
    }
}

/// One limit taken earlier, with the family it came from.
pub struct LimitRecord {
    pub cell: LinkedCellKey,
    pub family: Vec<ForcingCondition>,
    pub limit: ForcingCondition,
}

/// Result of [`amalgamate`].
pub struct Amalgamation {
    pub condition: ForcingCondition,
    /// The family index everything was merged at.
    pub chosen: usize,
    /// Per limit record, the window set b_k of compatible family indices.
    pub b_sets: Vec<BTreeSet<usize>>,
}

/// Given q below every recorded limit, picks one family index n in the given
/// large set at which all the original conditions p_(k,n) are compatible with
/// q, and merges their points into q. The output validates, is below q, and
/// is below every chosen p_(k,n).
///
/// Requires the strengthened width room
/// |F| + Σ_k m_(*,k) ≤ 2^|I_n|·ε_n / N for all n ≥ |s|.
pub fn amalgamate(
    frame: &ForcingFrame,
    q: &ForcingCondition,
    limits: &[LimitRecord],
    oracle: &UltrafilterOracle,
    large_set: &BTreeSet<usize>,
) -> Result<Amalgamation> {
    for (k, rec) in limits.iter().enumerate() {
        let leq = cond_leq(frame, q, &rec.limit);
        if !leq.holds {
            return Err(Error::Precondition {
                op: "amalgamate",
                clause: format!("q is not below limit {k}: {:?}", leq.failures),
            });
        }
    }
    let total_extra: usize = limits.iter().map(|r| r.limit.points.len()).sum();
    let need = rat_big(&BigUint::from(
        q.level * (q.points.len() + total_extra) as u64,
    ));
    if let Some(block) = frame.width_violation(q.stem.len(), &need)? {
        return Err(Error::Precondition {
            op: "amalgamate",
            clause: format!(
                "width room fails at block {block}: need {} ≤ {}",
                to_pq(&need),
                to_pq(&frame.product(block))
            ),
        });
    }
    let universe = limits
        .iter()
        .map(|r| r.family.len())
        .min()
        .unwrap_or(large_set.len());
    // b_k: family indices whose points are captured by q's stem on the
    // blocks the limit's stem does not cover
    let mut b_sets = Vec::with_capacity(limits.len());
    for rec in limits {
        let mut b = BTreeSet::new();
        'family: for (n, p) in rec.family.iter().enumerate().take(universe) {
            for x in &p.points {
                for l in rec.cell.stem.len()..q.stem.len() {
                    let (lo, hi) = frame.partition.block(l);
                    if q.stem[l].binary_search(&x.word(lo, hi)).is_err() {
                        continue 'family;
                    }
                }
            }
            b.insert(n);
        }
        if !oracle.is_large(&b, universe)? {
            return Err(Error::OracleInconsistency(format!(
                "compatibility set of a limit is not large: {b:?}"
            )));
        }
        b_sets.push(b);
    }
    let mut candidates: BTreeSet<usize> = large_set
        .iter()
        .copied()
        .filter(|i| *i < universe)
        .collect();
    for b in &b_sets {
        candidates = candidates.intersection(b).copied().collect();
    }
    let Some(&chosen) = candidates.iter().next() else {
        return Err(Error::WindowExhausted(format!(
            "empty intersection of the large set with {:?}",
            b_sets
        )));
    };
    let mut merged = q.points.clone();
    for rec in limits {
        merged.extend(rec.family[chosen].points.iter().cloned());
    }
    let merged = dedup_points(sort_points(merged));
    let out = ForcingCondition {
        stem: q.stem.clone(),
        level: q.level,
        points: merged,
    };
    match cond_validate(frame, &out)? {
        crate::verdict::Verdict3::Holds(_) => {}
        other => {
            return Err(Error::MalformedCertificate(format!(
                "amalgamated condition failed to validate: {other:?}"
            )))
        }
    }
    let below_q = cond_leq(frame, &out, q);
    if !below_q.holds {
        return Err(Error::MalformedCertificate(format!(
            "amalgamation not below q: {:?}",
            below_q.failures
        )));
    }
    for (k, rec) in limits.iter().enumerate() {
        let below_p = cond_leq(frame, &out, &rec.family[chosen]);
        if !below_p.holds {
            return Err(Error::MalformedCertificate(format!(
                "amalgamation not below p_({k},{chosen}): {:?}",
                below_p.failures
            )));
        }
    }
    Ok(Amalgamation {
        condition: out,
        chosen,
        b_sets,
    })
}

/// One step of a session transcript.
#[derive(Debug, Clone)]
pub enum SessionEvent {
    Init { level: u64 },
    AddPoint { join: usize, descriptor: Value },
    Extend { to: usize, enriched: usize },
}

/// A single-writer session stringing conditions downward, the way a generic
/// filter is met: points join densely, stems extend minimally (optionally
/// enriched on the new blocks), and every intermediate condition is validated
/// and order-checked.
pub struct ForcingSession {
    frame: ForcingFrame,
    current: ForcingCondition,
    joins: Vec<(Point, usize)>,
    trace: Vec<SessionEvent>,
}

impl ForcingSession {
    pub fn start(frame: ForcingFrame, level: u64) -> Result<Self> {
        let root = ForcingCondition::new(Vec::new(), level, Vec::new())?;
        match cond_validate(&frame, &root)? {
            crate::verdict::Verdict3::Holds(_) => {}
            other => {
                return Err(Error::MalformedCertificate(format!(
                    "empty condition failed to validate: {other:?}"
                )))
            }
        }
        Ok(Self {
            frame,
            current: root,
            joins: Vec::new(),
            trace: vec![SessionEvent::Init { level }],
        })
    }

    pub fn frame(&self) -> &ForcingFrame {
        &self.frame
    }

    pub fn current(&self) -> &ForcingCondition {
        &self.current
    }

    /// Joins a point: records where it entered and steps the condition down.
    /// The join index is the stem length of the strengthened condition — the
    /// point is only promised capture from there on.
    pub fn add_point(&mut self, x: Point) -> Result<()> {
        let next = dense_add_point(&self.frame, &self.current, x.clone())?;
        let leq = cond_leq(&self.frame, &next, &self.current);
        if !leq.holds {
            return Err(Error::MalformedCertificate(format!(
                "dense step is not a strengthening: {:?}",
                leq.failures
            )));
        }
        let join = next.stem.len();
        self.joins.push((x, join));
        self.trace.push(SessionEvent::AddPoint {
            join,
            descriptor: next.points().last().unwrap().to_json(),
        });
        self.current = next;
        Ok(())
    }

    /// Extends the stem to `len` blocks, each new block holding the captured
    /// restrictions plus whatever `extra` supplies within the width bound.
    pub fn extend_with(&mut self, len: usize, extra: impl Fn(usize) -> Vec<BigUint>) -> Result<()> {
        if len <= self.current.stem.len() {
            return Ok(());
        }
        let mut next = minimal_extension(&self.frame, &self.current, len);
        let mut enriched = 0usize;
        for n in self.current.stem.len()..len {
            let mut block = next.stem[n].clone();
            let before = block.len();
            block.extend(extra(n));
            block.sort();
            block.dedup();
            let width = rat_big(&(BigUint::from(self.current.level) * BigUint::from(block.len())));
            if width <= self.frame.product(n) {
                enriched += (block.len() > before) as usize;
                next.stem[n] = block;
            }
        }
        let leq = cond_leq(&self.frame, &next, &self.current);
        if !leq.holds {
            return Err(Error::MalformedCertificate(format!(
                "extension is not a strengthening: {:?}",
                leq.failures
            )));
        }
        self.trace.push(SessionEvent::Extend { to: len, enriched });
        self.current = next;
        Ok(())
    }

    /// The generic slalom prefix accumulated so far.
    pub fn generic_prefix(&self) -> &[Vec<BigUint>] {
        self.current.stem()
    }

    /// Every joined point is captured by the prefix beyond its join index.
    pub fn verify_replay(&self) -> Result<()> {
        for (idx, (x, join)) in self.joins.iter().enumerate() {
            for n in *join..self.current.stem.len() {
                let (lo, hi) = self.frame.partition.block(n);
                let word = x.word(lo, hi);
                if self.current.stem[n].binary_search(&word).is_err() {
                    return Err(Error::MalformedCertificate(format!(
                        "replay broke: point {idx} escapes the prefix at block {n}"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn transcript(&self) -> Value {
        json!({
            "events": self.trace.iter().map(|e| match e {
                SessionEvent::Init { level } => json!({"init": {"level": level}}),
                SessionEvent::AddPoint { join, descriptor } => {
                    json!({"add_point": {"join": join, "point": descriptor}})
                }
                SessionEvent::Extend { to, enriched } => {
                    json!({"extend": {"to": to, "enriched_blocks": enriched}})
                }
            }).collect::<Vec<_>>(),
            "final": self.current.to_json(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    fn frame() -> ForcingFrame {
        // |I_k| = 2(k+1), ε_k = 2^-(k+1): products 2^(k+1)
        let partition = IntervalPartition::arith_len(0, 2, 2).unwrap();
        let eps = TailBoundedSeq::geometric(rat(1, 2), rat(1, 2)).unwrap();
        let divergence = DivergenceCertificate::full(|m: &Rat| {
            let mut k = 0usize;
            while pow2_rat(k as u64 + 1) < *m {
                k += 1;
            }
            k
        });
        ForcingFrame::new(partition, eps, divergence).unwrap()
    }

    fn pt(seed: u64) -> Point {
        Point::seeded(seed).with_depth(256)
    }

    #[test]
    fn validation_examples() {
        let fr = frame();
        // F = ∅ holds for any level
        let empty = ForcingCondition::new(vec![], 7, vec![]).unwrap();
        assert!(cond_validate(&fr, &empty).unwrap().is_holds());
        // |F| = 1, N = 1: 1 ≤ 2^(n+1) for all n
        let one = ForcingCondition::new(vec![], 1, vec![pt(1)]).unwrap();
        assert!(cond_validate(&fr, &one).unwrap().is_holds());
        // enormous level with a short stem fails at n = |s|
        let big = ForcingCondition::new(vec![vec![BigUint::zero()]], 1 << 20, vec![pt(2)]).unwrap();
        match cond_validate(&fr, &big).unwrap() {
            crate::verdict::Verdict3::Fails(v) => assert_eq!(v.block, 1),
            other => panic!("expected Fails, got {other:?}"),
        }
    }

    #[test]
    fn distinct_points_required() {
        assert!(matches!(
            ForcingCondition::new(vec![], 1, vec![pt(3), pt(3)]),
            Err(Error::TieAtDepth { .. })
        ));
    }

    #[test]
    fn order_is_reflexive_and_detects_drops() {
        let fr = frame();
        let c = ForcingCondition::new(vec![], 2, vec![pt(1), pt(2)]).unwrap();
        assert!(cond_leq(&fr, &c, &c).holds);
        // dropping a point breaks F ⊆ H
        let dropped = ForcingCondition::new(vec![], 2, vec![pt(1)]).unwrap();
        let rep = cond_leq(&fr, &dropped, &c);
        assert!(!rep.holds);
        assert!(rep.failures.iter().any(|f| f.contains("dropped")));
    }

    #[test]
    fn minimal_extension_is_a_strengthening() {
        let fr = frame();
        let c = ForcingCondition::new(vec![], 1, vec![pt(5), pt(6)]).unwrap();
        let ext = minimal_extension(&fr, &c, 6);
        assert!(cond_leq(&fr, &ext, &c).holds);
        assert!(cond_validate(&fr, &ext).unwrap().is_holds());
        // each new block holds exactly the restrictions
        for n in 0..6 {
            assert!(ext.stem()[n].len() <= 2);
        }
    }

    #[test]
    fn dense_add_point_steps_down() {
        let fr = frame();
        let mut c = ForcingCondition::new(vec![], 2, vec![]).unwrap();
        for seed in 0..5u64 {
            let next = dense_add_point(&fr, &c, pt(seed)).unwrap();
            assert!(cond_validate(&fr, &next).unwrap().is_holds());
            assert!(cond_leq(&fr, &next, &c).holds);
            assert_eq!(next.points().len(), c.points().len() + 1);
            c = next;
        }
        // adding an indistinct point errors
        assert!(matches!(
            dense_add_point(&fr, &c, pt(3)),
            Err(Error::TieAtDepth { .. })
        ));
    }

    #[test]
    fn principal_limit_is_projection() {
        let fr = frame();
        let base = ForcingCondition::new(vec![], 1, vec![]).unwrap();
        let cell = LinkedCellKey::of(&base, 3);
        let family: Vec<ForcingCondition> = (0..8u64)
            .map(|i| ForcingCondition::new(vec![], 1, vec![pt(i), pt(100 + i)]).unwrap())
            .collect();
        let oracle = UltrafilterOracle::principal(5);
        let lim = d_limit(&cell, &family, &oracle).unwrap();
        // bit-exact projection to member 5
        for (a, b) in lim.points().iter().zip(family[5].points()) {
            assert!((0..256).all(|p| a.bit(p) == b.bit(p)));
        }
        assert!(cell.admits(&lim));
        oracle.check_log().unwrap();
        let _ = fr;
    }

    #[test]
    fn constant_family_limit_is_that_condition() {
        let base = ForcingCondition::new(vec![], 1, vec![pt(7)]).unwrap();
        let cell = LinkedCellKey::of(&base, 2);
        let family: Vec<ForcingCondition> = (0..6).map(|_| base.clone()).collect();
        for oracle in [
            UltrafilterOracle::principal(2),
            UltrafilterOracle::pattern(2, 0, 0),
        ] {
            let lim = d_limit(&cell, &family, &oracle).unwrap();
            assert_eq!(lim.points().len(), 1);
            assert!(lim.points()[0].agrees_within_depth(&base.points()[0]));
            oracle.check_log().unwrap();
        }
    }

    #[test]
    fn pattern_limit_selects_even_members() {
        let base = ForcingCondition::new(vec![], 1, vec![]).unwrap();
        let cell = LinkedCellKey::of(&base, 2);
        // alternating family: evens carry {pt(1)}, odds carry {pt(2), pt(3)}
        let family: Vec<ForcingCondition> = (0..10)
            .map(|i| {
                if i % 2 == 0 {
                    ForcingCondition::new(vec![], 1, vec![pt(1)]).unwrap()
                } else {
                    ForcingCondition::new(vec![], 1, vec![pt(2), pt(3)]).unwrap()
                }
            })
            .collect();
        let oracle = UltrafilterOracle::pattern(2, 0, 0);
        let lim = d_limit(&cell, &family, &oracle).unwrap();
        assert_eq!(lim.points().len(), 1);
        assert!(lim.points()[0].agrees_within_depth(&pt(1)));
        oracle.check_log().unwrap();
        // a non-constant family along the class is refused
        let broken: Vec<ForcingCondition> = (0..10u64)
            .map(|i| ForcingCondition::new(vec![], 1, vec![pt(i)]).unwrap())
            .collect();
        assert!(matches!(
            d_limit(&cell, &broken, &oracle),
            Err(Error::OracleInconsistency(_))
        ));
    }

    #[test]
    fn pattern_limit_ignores_the_head() {
        let base = ForcingCondition::new(vec![], 1, vec![]).unwrap();
        let cell = LinkedCellKey::of(&base, 1);
        // junk on early odd indices, constant from index 4 on
        let family: Vec<ForcingCondition> = (0..12u64)
            .map(|i| {
                let seed = if i % 2 == 1 && i >= 4 { 7 } else { 100 + i };
                ForcingCondition::new(vec![], 1, vec![pt(seed)]).unwrap()
            })
            .collect();
        let oracle = UltrafilterOracle::pattern(2, 1, 4);
        let lim = d_limit(&cell, &family, &oracle).unwrap();
        assert!(lim.points()[0].agrees_within_depth(&pt(7)));
        oracle.check_log().unwrap();
    }

    #[test]
    fn amalgamation_merges_at_a_common_index() {
        let fr = frame();
        let base = ForcingCondition::new(vec![], 1, vec![]).unwrap();
        let cell = LinkedCellKey::of(&base, 1);
        // two constant families with distinct points
        let fam_a: Vec<ForcingCondition> = (0..6)
            .map(|_| ForcingCondition::new(vec![], 1, vec![pt(11)]).unwrap())
            .collect();
        let fam_b: Vec<ForcingCondition> = (0..6)
            .map(|_| ForcingCondition::new(vec![], 1, vec![pt(12)]).unwrap())
            .collect();
        let oracle = UltrafilterOracle::principal(4);
        let lim_a = d_limit(&cell, &fam_a, &oracle).unwrap();
        let lim_b = d_limit(&cell, &fam_b, &oracle).unwrap();
        // q below both limits, stem lengthened for the width room
        let q0 = ForcingCondition::new(vec![], 1, vec![pt(11), pt(12)]).unwrap();
        let q = minimal_extension(&fr, &q0, 4);
        let records = vec![
            LimitRecord {
                cell: cell.clone(),
                family: fam_a,
                limit: lim_a,
            },
            LimitRecord {
                cell: cell.clone(),
                family: fam_b,
                limit: lim_b,
            },
        ];
        let large: BTreeSet<usize> = (0..6).collect();
        let out = amalgamate(&fr, &q, &records, &oracle, &large).unwrap();
        // all points were already in q: the amalgamation is q itself
        assert_eq!(out.condition.points().len(), 2);
        assert!(cond_leq(&fr, &out.condition, &q).holds);
        oracle.check_log().unwrap();
    }

    #[test]
    fn amalgamation_adds_new_points_and_orders() {
        let fr = frame();
        let base = ForcingCondition::new(vec![], 1, vec![]).unwrap();
        let cell = LinkedCellKey::of(&base, 1);
        let fam: Vec<ForcingCondition> = (0..6)
            .map(|_| ForcingCondition::new(vec![], 1, vec![pt(21)]).unwrap())
            .collect();
        let oracle = UltrafilterOracle::principal(2);
        let lim = d_limit(&cell, &fam, &oracle).unwrap();
        let q0 = ForcingCondition::new(vec![], 1, vec![pt(21), pt(22)]).unwrap();
        let q = minimal_extension(&fr, &q0, 4);
        let records = vec![LimitRecord {
            cell,
            family: fam.clone(),
            limit: lim,
        }];
        let large: BTreeSet<usize> = (0..6).collect();
        let out = amalgamate(&fr, &q, &records, &oracle, &large).unwrap();
        assert!(cond_validate(&fr, &out.condition).unwrap().is_holds());
        assert!(cond_leq(&fr, &out.condition, &q).holds);
        assert!(cond_leq(&fr, &out.condition, &fam[out.chosen]).holds);
    }

    #[test]
    fn cell_members_are_pairwise_compatible() {
        let fr = frame();
        // shared stem long enough to give width room for the pooled points
        let root = ForcingCondition::new(vec![], 1, vec![]).unwrap();
        let stem_holder = minimal_extension(&fr, &root, 4);
        let mk = |seeds: &[u64]| {
            ForcingCondition::new(
                stem_holder.stem().to_vec(),
                1,
                seeds.iter().map(|&s| pt(s)).collect(),
            )
            .unwrap()
        };
        let a = mk(&[41, 42]);
        let b = mk(&[42, 43]);
        let u = cell_union(&fr, &a, &b).unwrap();
        assert_eq!(u.points().len(), 3); // the shared point pooled once
        assert!(cond_validate(&fr, &u).unwrap().is_holds());
        assert!(cond_leq(&fr, &u, &a).holds);
        assert!(cond_leq(&fr, &u, &b).holds);
        // different levels are not a cell
        let c = ForcingCondition::new(stem_holder.stem().to_vec(), 2, vec![pt(44)]).unwrap();
        assert!(matches!(
            cell_union(&fr, &a, &c),
            Err(Error::Precondition { .. })
        ));
    }

    #[test]
    fn session_replay_property() {
        let fr = frame();
        let mut session = ForcingSession::start(fr, 1).unwrap();
        session.add_point(pt(31)).unwrap();
        session.extend_with(4, |_| vec![]).unwrap();
        session.add_point(pt(32)).unwrap();
        session
            .extend_with(8, |n| vec![BigUint::from((n % 3) as u32)])
            .unwrap();
        session.add_point(pt(33)).unwrap();
        session.extend_with(12, |_| vec![]).unwrap();
        session.verify_replay().unwrap();
        // the transcript mirrors the event sequence
        let t = session.transcript();
        assert_eq!(t["events"].as_array().unwrap().len(), 7);
    }
}
