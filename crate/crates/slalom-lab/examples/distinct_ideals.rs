//! One slalom, two summable sequences: certified membership for the slower
//! sequence, exact pointwise refutation for the faster one. On cubes-long
//! blocks the two vanishing families genuinely differ.
//!
//!     cargo run --example distinct_ideals

use slalom_lab::constructors::distinguish_eps_example;
use slalom_lab::partitions::IntervalPartition;
use slalom_lab::rat::to_pq;
use slalom_lab::slaloms::sigma_member;

fn main() -> slalom_lab::Result<()> {
    let part = IntervalPartition::from_len_fn("cubes", 0, |n| ((n + 1) as u64).pow(3), Some(0))?;
    let ex = distinguish_eps_example(&part, 4)?;
    println!("group starts n_1..n_5: {:?}", ex.group_starts);
    let horizon = *ex.group_starts.last().unwrap();
    println!(
        "membership for ε = 1/(n+1)² + n/2ⁿ over {horizon} blocks: {}",
        sigma_member(&ex.phi, &ex.eps, horizon).tag()
    );
    println!("refutation for ε′ = 1/(n+1)³, per block:");
    let short = |s: String| {
        if s.len() > 28 {
            format!("an exact ratio of {} characters", s.len())
        } else {
            s
        }
    };
    for (i, lhs, rhs) in &ex.refutation {
        println!(
            "  block {i}: |φ(i)|/2^|I_i| = {} ≥ ε′_i = {}",
            short(to_pq(lhs)),
            to_pq(rhs)
        );
    }
    println!("(any slalom absorbing φ pointwise is therefore too big for ε′)");
    Ok(())
}
