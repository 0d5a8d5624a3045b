//! Build the nondecreasing unbounded weight sequence δ for a summable ε and
//! watch every weighted partial sum stay under twice the certified bound.
//!
//!     cargo run --example delta_witness

use slalom_lab::rat::{rat, rat_int, to_pq};
use slalom_lab::sequences::{build_delta, TailBoundedSeq};

fn main() -> slalom_lab::Result<()> {
    let instances = vec![
        (
            "geometric 2^-n",
            TailBoundedSeq::geometric(rat_int(1), rat(1, 2))?,
        ),
        (
            "p-series 1/(n+1)^3",
            TailBoundedSeq::p_series(rat_int(1), 3)?,
        ),
        (
            "prefix (5, 1/3) then geometric",
            TailBoundedSeq::prefix_then(
                vec![rat_int(5), rat(1, 3)],
                TailBoundedSeq::geometric(rat(2, 3), rat(9, 10))?,
            )?,
        ),
    ];
    for (name, eps) in instances {
        let delta = build_delta(&eps)?;
        let two_s = rat_int(2) * delta.s_bound();
        println!("{name}: series bound {}", to_pq(delta.s_bound()));
        print!("  breakpoints:");
        for i in 0..=10 {
            print!(" {}", delta.breakpoint(i)?);
        }
        println!();
        for i in [1usize, 4, 7, 10] {
            let n_i = delta.breakpoint(i)?;
            let sum = delta.weighted_partial_sum(n_i)?;
            println!(
                "  Σ_(j<{n_i}) δ_j ε_j = {}  <  2s = {}   (δ there: {})",
                to_pq(&sum),
                to_pq(&two_s),
                delta.value(n_i)?,
            );
            assert!(sum < two_s);
        }
    }
    Ok(())
}
