//! Merge several certified slaloms into one that absorbs each of them
//! eventually, with the block-group ratio bound ε_j / n checked exactly.
//!
//!     cargo run --example merge_union

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use slalom_lab::constructors::merge_slaloms;
use slalom_lab::partitions::IntervalPartition;
use slalom_lab::rat::{rat, rat_int, to_pq};
use slalom_lab::sequences::TailBoundedSeq;
use slalom_lab::slaloms::sigma_member;
use slalom_lab::suites::gen_certified_slalom;

fn main() -> slalom_lab::Result<()> {
    let part = IntervalPartition::arith_len(0, 2, 2)?; // |I_n| = 2(n+1)
    let eps = TailBoundedSeq::geometric(rat(1, 2), rat(1, 2))?; // ε_n = 2^-(n+1)
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let window = 120;
    let inputs: Vec<_> = (0..5)
        .map(|_| gen_certified_slalom(&mut rng, &part, &eps, 3, window))
        .collect();
    let merged = merge_slaloms(&inputs, 16)?;
    println!("merged {} certified slaloms", merged.input_count);
    print!("group boundaries k_0..k_6:");
    for n in 0..=6 {
        print!(" {}", merged.group_boundary(n));
    }
    println!();
    for (i, phi) in inputs.iter().enumerate() {
        let from = merged.group_boundary(i + 1);
        let absorbed = (from..window).all(|j| match phi.at(j) {
            slalom_lab::slaloms::BlockSet::Explicit(cs) => {
                cs.iter().all(|c| merged.slalom.at(j).contains(c))
            }
            s => s.is_empty(),
        });
        println!("  input {i} absorbed from block {from}: {absorbed}");
    }
    for j in [merged.group_boundary(1), 20, 60, window - 1] {
        let n = merged.group_of(j);
        println!(
            "  block {j} (group {n}): |φ(j)|/2^|I_j| = {}  <  ε_j/{n} = {}",
            to_pq(&merged.slalom.ratio_at(j)),
            to_pq(&(eps.term(j) / rat_int(n as i64))),
        );
    }
    println!(
        "membership verdict over {window} blocks: {}",
        sigma_member(&merged.slalom, &eps, window).tag()
    );
    Ok(())
}
