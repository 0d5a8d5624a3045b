//! Move a slalom from a fine partition to a coarse one along both maps: the
//! product transfer (every contained block must agree) and the cylinder-union
//! transfer (some contained block must agree), with exact size bookkeeping.
//!
//!     cargo run --example transfer_maps

use num_bigint::BigUint;
use slalom_lab::constructors::{transfer_e, transfer_e_check, transfer_s, transfer_s_check};
use slalom_lab::partitions::{subin, IntervalPartition};
use slalom_lab::rat::{rat, to_pq};
use slalom_lab::sequences::TailBoundedSeq;
use slalom_lab::slaloms::{BlockSet, BlockSlalom, VanishingCertificate};

fn main() -> slalom_lab::Result<()> {
    let fine = IntervalPartition::from_len_fn("varied", 0, |n| 1 + (n % 3) as u64, None)?;
    let coarse = fine.merged_pairs();
    let eps = TailBoundedSeq::geometric(rat(1, 2), rat(1, 2))?;
    let pf = fine.clone();
    let phi = BlockSlalom::from_fn(fine.clone(), "singletons", move |n| {
        BlockSet::explicit(vec![BigUint::from((n % 2) as u32)], pf.block_len(n)).unwrap()
    })
    .with_certificate(VanishingCertificate::new(|n| n as usize));

    let prod = transfer_e(&phi, &coarse, &eps, 0, 16)?;
    println!("product transfer (all contained blocks agree):");
    for n in 0..6 {
        let ks = subin(&fine, &coarse, n);
        let check = transfer_e_check(&prod, &phi, &eps, n);
        let enumerated = prod.slalom.at(n).enumerated_count(coarse.block_len(n))?;
        println!(
            "  block {n} over {ks:?}: |ψ| = {} (enumerated {}), ratio/ε = {} ≤ Π = {}",
            check.size,
            enumerated,
            to_pq(&check.lhs),
            to_pq(&check.rhs),
        );
    }

    let eps_fast = TailBoundedSeq::geometric(rat(1, 4), rat(1, 8))?;
    let pf2 = fine.clone();
    let phi2 = BlockSlalom::from_fn(fine.clone(), "pairs", move |n| {
        let len = pf2.block_len(n);
        let mut codes = vec![BigUint::from(0u32)];
        if len >= 2 {
            codes.push(BigUint::from(2u32));
        }
        BlockSet::explicit(codes, len).unwrap()
    })
    .with_certificate(VanishingCertificate::new(|n| n as usize));
    let uni = transfer_s(&phi2, &coarse, &eps_fast, 1, 16)?;
    println!("cylinder-union transfer (some contained block agrees):");
    for n in 1..6 {
        let check = transfer_s_check(&uni, &phi2, n);
        let enumerated = uni.slalom.at(n).enumerated_count(coarse.block_len(n))?;
        println!(
            "  block {n}: |ψ| = {} (enumerated {}), ratio = {} ≤ Σ = {}",
            check.size,
            enumerated,
            to_pq(&check.lhs),
            to_pq(&check.rhs),
        );
    }
    Ok(())
}
