//! One-shot witness bundles for the driver's constructor subcommands.
//!
//! Each bundle runs a single construction on a deterministic seeded instance
//! and serializes the inputs, the outputs, and every inequality it verified,
//! with both sides as exact `"p/q"` strings.

use num_bigint::BigUint;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::constructors::{
    complete_nonempty, distinguish_eps_example, eps_from_summable, interleave_refuter,
    merge_slaloms, pad_to_eps, s_not_e_witness, transfer_e, transfer_e_check, transfer_s,
    transfer_s_check,
};
use crate::error::{Error, Result};
use crate::forcing::{ForcingFrame, ForcingSession};
use crate::partitions::{coarsen_common, IntervalPartition};
use crate::points::Point;
use crate::rat::{pow2_rat, rat, rat_int, to_pq, Rat};
use crate::sequences::TailBoundedSeq;
use crate::slaloms::{sigma_member, BlockSlalom, DivergenceCertificate, VanishingCertificate};
use crate::suites::{gen_certified_slalom, gen_small_partition};
use crate::tukey::{na_to_e_params, partition_from_b, AlcParams};
use crate::twosmall::{classify_coverage, u2small_covering, NullApprox};

/// The constructor subcommands the driver exposes.
pub const CONSTRUCTORS: &[&str] = &[
    "merge",
    "eps-from-ratios",
    "complete",
    "pad",
    "separator",
    "interleave",
    "transfer-e",
    "transfer-s",
    "distinguish",
    "alc-params",
    "partition-from-b",
    "na-params",
    "null-cover",
    "coarsen",
    "pipeline",
    "forcing-session",
];

fn ineq(item: &str, lhs: &Rat, relation: &str, rhs: &Rat) -> Value {
    let pass = match relation {
        "<" => lhs < rhs,
        "<=" => lhs <= rhs,
        "==" => lhs == rhs,
        ">=" => lhs >= rhs,
        _ => unreachable!(),
    };
    json!({
        "item": item,
        "lhs": to_pq(lhs),
        "relation": relation,
        "rhs": to_pq(rhs),
        "pass": pass,
    })
}

fn doubling_pair() -> (IntervalPartition, TailBoundedSeq, DivergenceCertificate) {
    let part = IntervalPartition::arith_len(0, 2, 2).unwrap();
    let eps = TailBoundedSeq::geometric(rat(1, 2), rat(1, 2)).unwrap();
    let div = DivergenceCertificate::full(|m: &Rat| {
        let mut k = 0usize;
        while pow2_rat(k as u64 + 1) < *m {
            k += 1;
        }
        k
    });
    (part, eps, div)
}

/// Runs one constructor on a seeded instance and returns its bundle.
pub fn witness(constructor: &str, seed: u64, horizon: usize) -> Result<Value> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let horizon = horizon.max(16);
    match constructor {
        "merge" => {
            let (part, eps, _) = doubling_pair();
            let count = (seed as usize % 7) + 2;
            let inputs: Vec<BlockSlalom> = (0..count)
                .map(|_| gen_certified_slalom(&mut rng, &part, &eps, 3, horizon))
                .collect();
            let merged = merge_slaloms(&inputs, 16)?;
            let mut checks = Vec::new();
            for j in merged.group_boundary(1)..horizon {
                let n = merged.group_of(j);
                checks.push(ineq(
                    &format!("group-bound[{j}]"),
                    &merged.slalom.ratio_at(j),
                    "<",
                    &(eps.term(j) / rat_int(n as i64)),
                ));
            }
            Ok(json!({
                "constructor": "merge",
                "inputs": inputs.iter().map(|p| p.to_json(horizon.min(12))).collect::<Vec<_>>(),
                "group_boundaries": (0..=count + 2).map(|n| merged.group_boundary(n)).collect::<Vec<_>>(),
                "output": merged.slalom.to_json(horizon.min(12)),
                "verified": checks,
            }))
        }
        "eps-from-ratios" => {
            let (part, _, _) = doubling_pair();
            let p = part.clone();
            let phi = BlockSlalom::from_fn(part.clone(), "half-ratio", move |n| {
                crate::slaloms::BlockSet::first_codes(BigUint::one() << (n + 1), p.block_len(n))
                    .unwrap()
            })
            .with_nonempty_from(0);
            let ratio_tail = TailBoundedSeq::geometric(rat(1, 2), rat(1, 2))?;
            let derived = eps_from_summable(&phi, &ratio_tail, 16)?;
            let mut checks = Vec::new();
            for n in 0..horizon.min(24) {
                checks.push(ineq(
                    &format!("ratio-over-eps[{n}]"),
                    &(phi.ratio_at(n) / derived.eps.term(n)),
                    "==",
                    &(rat_int(1) / derived.delta.value_rat(n)?),
                ));
            }
            Ok(json!({
                "constructor": "eps-from-ratios",
                "guard_possible": derived.guard_possible,
                "eps": derived.eps.to_json(horizon.min(24)),
                "series_bound": to_pq(derived.delta.s_bound()),
                "verified": checks,
            }))
        }
        "complete" => {
            let (part, eps, div) = doubling_pair();
            let p = part.clone();
            let phi = BlockSlalom::from_fn(part, "alternating", move |n| {
                if n % 2 == 0 {
                    crate::slaloms::BlockSet::empty()
                } else {
                    crate::slaloms::BlockSet::explicit(vec![BigUint::one()], p.block_len(n))
                        .unwrap()
                }
            })
            .with_certificate(VanishingCertificate::new(|n| n as usize));
            let bar = complete_nonempty(&phi, &div)?;
            Ok(json!({
                "constructor": "complete",
                "output": bar.to_json(horizon.min(16)),
                "membership": sigma_member(&bar, &eps, horizon).tag(),
            }))
        }
        "pad" => {
            let part = IntervalPartition::fixed_len(0, 4)?;
            let eps = TailBoundedSeq::geometric(rat(3, 16), rat(9, 10))?;
            let phi = gen_certified_slalom(&mut rng, &part, &eps, 1, horizon);
            let padded = pad_to_eps(&phi, &eps)?;
            let mut checks = Vec::new();
            for n in 0..horizon {
                let r = padded.report(n);
                if r.qualifying {
                    checks.push(ineq(&format!("left[{n}]"), &r.eps_n, "<=", &r.ratio_after));
                    checks.push(ineq(
                        &format!("right[{n}]"),
                        &r.ratio_after,
                        "<",
                        &(&r.eps_n + crate::rat::pow2_inv(part.block_len(n))),
                    ));
                }
            }
            Ok(json!({
                "constructor": "pad",
                "output": padded.slalom.to_json(horizon.min(16)),
                "verified": checks,
            }))
        }
        "separator" => {
            let (part, eps, _) = doubling_pair();
            let psi = gen_certified_slalom(&mut rng, &part, &eps, 2, horizon);
            let w = s_not_e_witness(&part, |n| n % 2 == 0, &psi, horizon)?;
            Ok(json!({
                "constructor": "separator",
                "point": w.point.to_json(),
                "hit_blocks": w.hit_blocks,
                "escape_blocks": w.escape_blocks,
            }))
        }
        "interleave" => {
            let ip = IntervalPartition::unit(0);
            let jp = IntervalPartition::fixed_len(0, 2)?;
            let p1 = ip.clone();
            let phi = BlockSlalom::from_fn(ip, "evens", move |n| {
                if n % 2 == 0 {
                    crate::slaloms::BlockSet::explicit(vec![BigUint::one()], p1.block_len(n))
                        .unwrap()
                } else {
                    crate::slaloms::BlockSet::empty()
                }
            });
            let psi = gen_certified_slalom(
                &mut rng,
                &jp,
                &TailBoundedSeq::geometric(rat(1, 2), rat(1, 2))?,
                2,
                horizon,
            );
            let w = interleave_refuter(&phi, &psi, horizon)?;
            Ok(json!({
                "constructor": "interleave",
                "point": w.point.to_json(),
                "i_hits": w.i_hits,
                "j_escapes": w.j_escapes,
            }))
        }
        "transfer-e" => {
            let ip = gen_small_partition(&mut rng, 4, horizon * 2);
            let jp = ip.merged_pairs();
            let eps = TailBoundedSeq::geometric(rat(1, 2), rat(1, 2))?;
            let phi = gen_certified_slalom(&mut rng, &ip, &eps, 2, horizon * 2);
            let out = transfer_e(&phi, &jp, &eps, 0, horizon)?;
            let checks: Vec<Value> = (0..horizon)
                .map(|n| {
                    let c = transfer_e_check(&out, &phi, &eps, n);
                    ineq(&format!("chain[{n}]"), &c.lhs, "<=", &c.rhs)
                })
                .collect();
            Ok(json!({
                "constructor": "transfer-e",
                "output": out.slalom.to_json(horizon.min(12)),
                "verified": checks,
            }))
        }
        "transfer-s" => {
            let ip = gen_small_partition(&mut rng, 4, horizon * 2);
            let jp = ip.merged_pairs();
            let eps = TailBoundedSeq::geometric(rat(1, 4), rat(1, 8))?;
            let phi = gen_certified_slalom(&mut rng, &ip, &eps, 2, horizon * 2);
            let out = transfer_s(&phi, &jp, &eps, 1, horizon)?;
            let checks: Vec<Value> = (1..horizon)
                .map(|n| {
                    let c = transfer_s_check(&out, &phi, n);
                    ineq(&format!("union-bound[{n}]"), &c.lhs, "<=", &c.rhs)
                })
                .collect();
            Ok(json!({
                "constructor": "transfer-s",
                "output": out.slalom.to_json(horizon.min(12)),
                "verified": checks,
            }))
        }
        "distinguish" => {
            let part =
                IntervalPartition::from_len_fn("cubic", 0, |n| ((n + 1) as u64).pow(3), Some(0))?;
            let ex = distinguish_eps_example(&part, (seed as usize % 3) + 3)?;
            let checks: Vec<Value> = ex
                .refutation
                .iter()
                .map(|(i, lhs, rhs)| ineq(&format!("lower[{i}]"), lhs, ">=", rhs))
                .collect();
            Ok(json!({
                "constructor": "distinguish",
                "group_starts": ex.group_starts,
                "membership_slow": sigma_member(&ex.phi, &ex.eps, *ex.group_starts.last().unwrap()).tag(),
                "verified": checks,
            }))
        }
        "alc-params" => {
            let (part, eps, _) = doubling_pair();
            let alc = AlcParams::new(part, eps);
            Ok(json!({
                "constructor": "alc-params",
                "base": (0..horizon.min(12)).map(|n| alc.base(n).to_string()).collect::<Vec<_>>(),
                "width": (0..horizon.min(12)).map(|n| alc.width(n).to_string()).collect::<Vec<_>>(),
                "ratio_sum_tail0": to_pq(&alc.ratio_sum().tail_bound(0)),
            }))
        }
        "partition-from-b" => {
            let out = partition_from_b(
                |n| BigUint::from(10u64) * BigUint::from(3u64).pow(n as u32),
                |n| BigUint::from(n as u64 + 1),
                &TailBoundedSeq::custom(
                    "hb",
                    |n| {
                        crate::rat::rat_big(&BigUint::from(n as u64 + 1))
                            / crate::rat::rat_big(
                                &(BigUint::from(10u64) * BigUint::from(3u64).pow(n as u32)),
                            )
                    },
                    |k| {
                        rat_int(3 * (2 * k as i64 + 3))
                            / (rat_int(40)
                                * crate::rat::rat_big(&BigUint::from(3u64).pow(k as u32)))
                    },
                    true,
                    false,
                ),
                horizon.min(12),
            )?;
            Ok(json!({
                "constructor": "partition-from-b",
                "partition": out.partition.to_json(horizon.min(12)),
                "bracketing": (0..horizon.min(12)).map(|n| out.bracketing_ok(n)).collect::<Vec<_>>(),
                "eps": out.eps.to_json(horizon.min(12)),
            }))
        }
        "na-params" => {
            let params = na_to_e_params(horizon.max(24))?;
            let checks: Vec<Value> = params
                .width_checks
                .iter()
                .map(|(n, lhs, rhs)| ineq(&format!("width[{n}]"), lhs, "<=", rhs))
                .chain(
                    params
                        .contributivity_checks
                        .iter()
                        .map(|(n, lhs, rhs)| ineq(&format!("contrib[{n}]"), lhs, "<=", rhs)),
                )
                .collect();
            Ok(json!({
                "constructor": "na-params",
                "partition": params.partition.to_json(horizon.min(16)),
                "verified": checks,
            }))
        }
        "null-cover" => {
            let branch = Point::seeded(rng.gen());
            let fa = NullApprox::from_point(branch.clone());
            let eps = TailBoundedSeq::geometric(rat(1, 2), rat(1, 2))?;
            let cover = u2small_covering(&fa, &eps, horizon.clamp(4, 30))?;
            let coverage = classify_coverage(&fa, &cover, &branch)?;
            let checks: Vec<Value> = cover
                .phi
                .groups
                .iter()
                .chain(&cover.psi.groups)
                .flat_map(|g| {
                    let (ratio, wsum, wtail, target) = &g.chain;
                    vec![
                        ineq(&format!("chain1[k={}]", g.k), ratio, "<=", wsum),
                        ineq(&format!("chain2[k={}]", g.k), wsum, "<=", wtail),
                        ineq(&format!("chain3[k={}]", g.k), wtail, "<", target),
                    ]
                })
                .collect();
            Ok(json!({
                "constructor": "null-cover",
                "endpoints": {
                    "n": cover.split.n[1..].to_vec(),
                    "m": cover.split.m[1..].to_vec(),
                },
                "coverage": {
                    "even_hits": coverage.phi_hits,
                    "odd_hits": coverage.psi_hits,
                    "head": coverage.head,
                },
                "verified": checks,
            }))
        }
        "coarsen" => {
            let i = IntervalPartition::fixed_len(0, 2)?;
            let j = IntervalPartition::fixed_len(0, 3)?;
            let c = coarsen_common(&i, &j, horizon.max(24))?;
            Ok(json!({
                "constructor": "coarsen",
                "note": "auxiliary coarsening on shared endpoints; accurate on the computed window only",
                "partition": c.to_json(horizon.min(12)),
            }))
        }
        "pipeline" => {
            let part = IntervalPartition::fixed_len(0, 2)?;
            let eps = TailBoundedSeq::custom(
                "cubes-over-geo",
                |n| rat_int(((n + 1) * (n + 1) * (n + 1)) as i64) / pow2_rat(n as u64),
                |k| rat_int(4000) / pow2_rat(k as u64),
                true,
                false,
            );
            let p = part.clone();
            let phi = BlockSlalom::from_fn(part.clone(), "head", move |n| {
                if n < 4 {
                    crate::slaloms::BlockSet::first_codes(BigUint::one(), p.block_len(n)).unwrap()
                } else {
                    crate::slaloms::BlockSet::empty()
                }
            })
            .with_certificate(VanishingCertificate::new(|n| if n < 4 { 0 } else { 4 }));
            let grouping = vec![0usize, 4, 6, 8, 10];
            let payload: Vec<Vec<crate::slaloms::BlockSet>> = (0..4)
                .map(|n| (grouping[n]..grouping[n + 1]).map(|j| phi.at(j)).collect())
                .collect();
            let codes = crate::tukey::code_phi(&part, &grouping, &payload)?;
            let codes_for_s = codes.clone();
            let s = crate::tukey::WidthSlalom::new(
                {
                    let part = part.clone();
                    let grouping = grouping.clone();
                    move |n| crate::tukey::kappa(&part, grouping[n], grouping[n + 1]).unwrap()
                },
                |n| BigUint::from(((n + 1) * (n + 1)) as u64),
                move |n| vec![codes_for_s[n].clone()],
            );
            let out = crate::tukey::coded_pipeline(&phi, &eps, &grouping, &s)?;
            Ok(json!({
                "constructor": "pipeline",
                "grouping": grouping,
                "trace": out.to_json(),
            }))
        }
        "forcing-session" => {
            let (part, eps, div) = doubling_pair();
            let frame = ForcingFrame::new(part, eps, div)?;
            let mut session = ForcingSession::start(frame, 1)?;
            for s in 0..3u64 {
                session.add_point(Point::seeded(seed ^ (s + 1)).with_depth(512))?;
                session.extend_with(session.current().stem().len() + 2, |_| Vec::new())?;
            }
            session.verify_replay()?;
            Ok(json!({
                "constructor": "forcing-session",
                "transcript": session.transcript(),
            }))
        }
        other => Err(Error::Usage(format!(
            "unknown constructor {other:?}; known: {}",
            CONSTRUCTORS.join(", ")
        ))),
    }
}
