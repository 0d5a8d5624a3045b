//! The coded connection map: group a certified slalom's restriction, rank it
//! into integers, capture the codes with a width-(n+1)² column system, filter
//! through the exact (n+1)³ ratio test, and watch the union absorb the
//! original blockwise.
//!
//!     cargo run --example coded_pipeline

use num_bigint::BigUint;
use num_traits::One;
use slalom_lab::partitions::IntervalPartition;
use slalom_lab::rat::{pow2_rat, rat_int, to_pq};
use slalom_lab::sequences::TailBoundedSeq;
use slalom_lab::slaloms::{BlockSet, BlockSlalom, VanishingCertificate};
use slalom_lab::tukey::{code_phi, coded_pipeline, kappa, ContainmentOutcome, WidthSlalom};

fn main() -> slalom_lab::Result<()> {
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
            BlockSet::first_codes(BigUint::one(), p.block_len(n)).unwrap()
        } else {
            BlockSet::empty()
        }
    })
    .with_certificate(VanishingCertificate::new(|n| if n < 4 { 0 } else { 4 }));
    let grouping = vec![0usize, 4, 6, 8, 10];
    let payload: Vec<Vec<BlockSet>> = (0..4)
        .map(|n| (grouping[n]..grouping[n + 1]).map(|j| phi.at(j)).collect())
        .collect();
    let codes = code_phi(&part, &grouping, &payload)?;
    println!("column codes of the grouped restriction: {codes:?}");
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
    let out = coded_pipeline(&phi, &eps, &grouping, &s)?;
    println!("threshold sequence k^X = {:?}", out.k_x);
    println!(
        "hypotheses: grouping dominates = {}, codes captured = {}",
        out.hypothesis_grouping_dominates, out.hypothesis_codes_captured
    );
    match &out.containment {
        ContainmentOutcome::Verified { covered_blocks } => {
            println!("φ(j) ⊆ ψ(j) verified on all {covered_blocks} covered blocks")
        }
        ContainmentOutcome::Vacuous { reason } => println!("vacuous: {reason}"),
    }
    for (j, lhs, rhs) in out.width_checks.iter().take(5) {
        println!(
            "  width at block {j}: |ψ(j)|/2^|I_j| = {} < {}",
            to_pq(lhs),
            to_pq(rhs)
        );
    }
    Ok(())
}
