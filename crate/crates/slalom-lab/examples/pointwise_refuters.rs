//! Pointwise inclusion between slaloms decides containment between the point
//! sets they carve out; when inclusion fails, an explicit point separates
//! them. Both separation modes are built and checked blockwise.
//!
//!     cargo run --example pointwise_refuters

use num_bigint::BigUint;
use slalom_lab::partitions::IntervalPartition;
use slalom_lab::slaloms::{
    hits, pointwise_included, refuter_point, BlockSet, BlockSlalom, RefuterMode,
};
use slalom_lab::verdict::Verdict3;

fn main() -> slalom_lab::Result<()> {
    let part = IntervalPartition::fixed_len(0, 4)?;
    let window = 32;
    let p1 = part.clone();
    // ψ holds one word per block; φ adds a second word on every third block
    let psi = BlockSlalom::from_fn(part.clone(), "psi", move |n| {
        BlockSet::explicit(vec![BigUint::from((n % 7) as u32)], p1.block_len(n)).unwrap()
    });
    let p2 = part.clone();
    let phi = BlockSlalom::from_fn(part.clone(), "phi", move |n| {
        let mut codes = vec![BigUint::from((n % 7) as u32)];
        if n % 3 == 0 {
            codes.push(BigUint::from(9u32));
        }
        BlockSet::explicit(codes, p2.block_len(n)).unwrap()
    })
    .with_nonempty_from(0);

    match pointwise_included(&psi, &phi, None, window)? {
        Verdict3::Unknown(scan) => println!(
            "ψ ⊆ φ consistent up to the horizon (no failure among {} blocks)",
            scan.horizon - scan.failures.len()
        ),
        other => println!("ψ ⊆ φ: {}", other.tag()),
    }
    let witnessed = match pointwise_included(&phi, &psi, None, window)? {
        Verdict3::Fails(f) => {
            println!("φ ⊆ ψ fails on blocks {:?}…", &f.witnessed[..4]);
            f.witnessed
        }
        other => {
            println!("unexpected verdict {}", other.tag());
            return Ok(());
        }
    };

    for mode in [RefuterMode::InfinitelyOften, RefuterMode::AlmostEverywhere] {
        let r = refuter_point(&phi, &psi, mode, window)?;
        assert_eq!(r.witnessed, witnessed);
        let phi_hits = hits(&r.point, &phi, 0..window);
        let psi_hits = hits(&r.point, &psi, 0..window);
        println!(
            "{mode:?}: point hits φ on {} blocks, ψ on {} blocks, difference witnessed {} times",
            phi_hits.len(),
            psi_hits.len(),
            r.witnessed.len(),
        );
        match mode {
            RefuterMode::InfinitelyOften => assert!(psi_hits.is_empty()),
            RefuterMode::AlmostEverywhere => assert_eq!(phi_hits.len(), window),
        }
    }
    Ok(())
}
