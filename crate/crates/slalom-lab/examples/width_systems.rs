//! Generic width-bounded systems: extracting (base, width) parameters from a
//! pair, concatenating column choices into a point, factoring an arbitrary
//! base through powers of two, and the width-n capture embedding.
//!
//!     cargo run --example width_systems

use num_bigint::BigUint;
use slalom_lab::partitions::IntervalPartition;
use slalom_lab::rat::{rat, rat_big, rat_int, to_pq};
use slalom_lab::sequences::TailBoundedSeq;
use slalom_lab::slaloms::restrict;
use slalom_lab::tukey::{
    lc_alc_eval, na_to_e_params, partition_from_b, AlcParams, EvalMode, WidthSlalom,
};

fn main() -> slalom_lab::Result<()> {
    // parameters of a doubling pair
    let part = IntervalPartition::arith_len(0, 2, 2)?;
    let eps = TailBoundedSeq::geometric(rat_int(1), rat(1, 2))?;
    let alc = AlcParams::new(part.clone(), eps);
    print!("widths h(n) = ⌊2^|I_n|·ε_n⌋:");
    for n in 0..6 {
        print!(" {}", alc.width(n));
    }
    println!();
    let s: Vec<BigUint> = (0..8u32).map(|n| BigUint::from((3 * n) % 5)).collect();
    let x = alc.concat(&s);
    let recovered: Vec<BigUint> = (0..8).map(|n| restrict(&x, &part, n).code).collect();
    println!("concatenation read back: {}", s == recovered);

    // column evaluation of the three structural cases
    let full = WidthSlalom::full_columns(|_| BigUint::from(4u32));
    let empty = WidthSlalom::empty_columns(|_| BigUint::from(4u32), |_| BigUint::from(1u32));
    let x4: Vec<BigUint> = (0..12u32).map(|n| BigUint::from(n % 4)).collect();
    println!(
        "full columns: {} / empty columns: {}",
        lc_alc_eval(&x4, &full, EvalMode::EverywhereTail, 12)?.tag(),
        lc_alc_eval(&x4, &empty, EvalMode::InfinitelyOften, 12)?.tag(),
    );

    // factor b(n) = 10·3^n through powers of two
    let out = partition_from_b(
        |n| BigUint::from(10u64) * BigUint::from(3u64).pow(n as u32),
        |n| BigUint::from(n as u64 + 1),
        &TailBoundedSeq::custom(
            "hb",
            |n| {
                rat_big(&BigUint::from(n as u64 + 1))
                    / rat_big(&(BigUint::from(10u64) * BigUint::from(3u64).pow(n as u32)))
            },
            |k| {
                rat_int(3 * (2 * k as i64 + 3))
                    / (rat_int(40) * rat_big(&BigUint::from(3u64).pow(k as u32)))
            },
            true,
            false,
        ),
        10,
    )?;
    for n in 0..5 {
        println!(
            "  b'({n}) = {} ≤ b({n}) < 2b'({n}): {}",
            out.base_rounded(n),
            out.bracketing_ok(n)
        );
    }

    // the width-n capture embedding parameters
    let na = na_to_e_params(12)?;
    for (n, lhs, rhs) in na.width_checks.iter().take(4) {
        println!(
            "  width-{n} slalom ratio over ε: {} ≤ 1/{n} = {}",
            to_pq(lhs),
            to_pq(rhs)
        );
    }
    Ok(())
}
