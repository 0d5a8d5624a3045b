//! Padding a slalom to sit just above ε, and building the two separating
//! points: one hitting a zero-singleton slalom while escaping a given ψ, and
//! one interleaving hits on a fine partition with escapes on a coarse one.
//!
//!     cargo run --example padding_separators

use num_bigint::BigUint;
use num_traits::{One, Zero};
use slalom_lab::constructors::{interleave_refuter, pad_to_eps, s_not_e_witness};
use slalom_lab::partitions::IntervalPartition;
use slalom_lab::rat::{rat, to_pq};
use slalom_lab::sequences::TailBoundedSeq;
use slalom_lab::slaloms::{BlockSet, BlockSlalom};

fn main() -> slalom_lab::Result<()> {
    // padding: |I_n| = 4, ε_0 = 3/16 → the padded block holds exactly 3 codes
    let part = IntervalPartition::fixed_len(0, 4)?;
    let eps = TailBoundedSeq::geometric(rat(3, 16), rat(9, 10))?;
    let p = part.clone();
    let phi = BlockSlalom::from_fn(part.clone(), "seed", move |n| {
        if n % 2 == 0 {
            BlockSet::explicit(vec![BigUint::from(5u32)], p.block_len(n)).unwrap()
        } else {
            BlockSet::empty()
        }
    });
    let padded = pad_to_eps(&phi, &eps)?;
    for n in 0..6 {
        let r = padded.report(n);
        println!(
            "block {n}: qualifying={} |φ̄|={} ratio={} ε_n={}",
            r.qualifying,
            r.size_after,
            to_pq(&r.ratio_after),
            to_pq(&r.eps_n),
        );
    }

    // the io-vs-ae separator: hits {0} on the evens, escapes ψ on the odds
    let part2 = IntervalPartition::arith_len(0, 2, 2)?;
    let p2 = part2.clone();
    let psi = BlockSlalom::from_fn(part2.clone(), "zero", move |n| {
        BlockSet::explicit(vec![BigUint::zero()], p2.block_len(n)).unwrap()
    });
    let w = s_not_e_witness(&part2, |n| n % 2 == 0, &psi, 16)?;
    println!(
        "\nseparator point: hits zero-slalom on {:?}…, escapes ψ on {:?}…",
        &w.hit_blocks[..4],
        &w.escape_blocks[..4],
    );

    // the interleaving separator across two different partitions
    let fine = IntervalPartition::unit(0);
    let pf = fine.clone();
    let phi2 = BlockSlalom::from_fn(fine.clone(), "odd-bits", move |n| {
        if n % 2 == 0 {
            BlockSet::explicit(vec![BigUint::one()], pf.block_len(n)).unwrap()
        } else {
            BlockSet::empty()
        }
    });
    let coarse = IntervalPartition::fixed_len(0, 2)?;
    let pc = coarse.clone();
    let psi2 = BlockSlalom::from_fn(coarse, "zero", move |n| {
        BlockSet::explicit(vec![BigUint::zero()], pc.block_len(n)).unwrap()
    });
    let iw = interleave_refuter(&phi2, &psi2, 40)?;
    println!(
        "interleaved witness: {} fine hits at {:?}…, coarse escapes at {:?}…",
        iw.i_hits.len(),
        &iw.i_hits[..3.min(iw.i_hits.len())],
        &iw.j_escapes[..3.min(iw.j_escapes.len())],
    );
    Ok(())
}
