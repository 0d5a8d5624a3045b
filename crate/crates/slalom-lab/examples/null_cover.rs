//! From a null-set approximation to two overlapping coarse partitions whose
//! slaloms jointly absorb every point hitting the approximation infinitely
//! often — with the three-term membership chain exact at every group.
//!
//!     cargo run --example null_cover

use slalom_lab::points::Point;
use slalom_lab::rat::{rat, rat_int, to_pq};
use slalom_lab::sequences::TailBoundedSeq;
use slalom_lab::twosmall::{classify_coverage, u2small_covering, NullApprox};

fn main() -> slalom_lab::Result<()> {
    let branch = Point::seeded(77);
    let fa = NullApprox::from_point(branch.clone());
    let eps = TailBoundedSeq::geometric(rat_int(1), rat(1, 2))?;
    let cover = u2small_covering(&fa, &eps, 10)?;
    println!("split endpoints n_k: {:?}", &cover.split.n[1..]);
    println!("split endpoints m_k: {:?}", &cover.split.m[1..]);
    for g in cover.phi.groups.iter().take(4) {
        let (ratio, wsum, wtail, target) = &g.chain;
        println!(
            "even side k={}: {} ≤ {} ≤ {} < {}",
            g.k,
            to_pq(ratio),
            to_pq(wsum),
            to_pq(wtail),
            to_pq(target)
        );
    }
    let coverage = classify_coverage(&fa, &cover, &branch)?;
    println!(
        "branch point classified: {} even-side hits, {} odd-side hits, head {:?}",
        coverage.phi_hits.len(),
        coverage.psi_hits.len(),
        coverage.head
    );
    Ok(())
}
