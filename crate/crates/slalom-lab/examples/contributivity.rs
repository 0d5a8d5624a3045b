//! Three reference pairs and their contributivity verdicts: bounded products
//! refuse both scales, diverging products certify them.
//!
//!     cargo run --example contributivity

use slalom_lab::partitions::IntervalPartition;
use slalom_lab::rat::{pow2_rat, rat, rat_int, to_pq, Rat};
use slalom_lab::sequences::TailBoundedSeq;
use slalom_lab::slaloms::{
    e_contributive, sstar_contributive, BoundednessCertificate, DivergenceCertificate, PairEvidence,
};

fn main() -> slalom_lab::Result<()> {
    let horizon = 96;
    // |I_n| = max(n,1) with ε_n = 2^-n: the products sit at 1 forever
    let i = IntervalPartition::from_len_fn("len-n", 0, |n| (n as u64).max(1), None)?;
    let eps = TailBoundedSeq::geometric(rat_int(1), rat(1, 2))?;
    let bounded = PairEvidence::bounded(BoundednessCertificate {
        bound: rat_int(2),
        from: 0,
    });
    println!(
        "products ≡ 1:  io-scale {}, ae-scale {}",
        sstar_contributive(&i, &eps, &bounded, horizon)?.tag(),
        e_contributive(&i, &eps, &bounded, horizon)?.tag(),
    );
    // same partition, ε'_n = n·2^-n: products = n → ∞
    let eps2 = TailBoundedSeq::linear_geometric(rat(1, 2))?;
    let diverging = PairEvidence::diverging(DivergenceCertificate::full(|m: &Rat| {
        u64::try_from(&slalom_lab::rat::ceil_big(m))
            .unwrap_or(1)
            .max(1) as usize
    }));
    println!(
        "products = n:  io-scale {}, ae-scale {}",
        sstar_contributive(&i, &eps2, &diverging, horizon)?.tag(),
        e_contributive(&i, &eps2, &diverging, horizon)?.tag(),
    );
    // |I_k| = 2(k+1) with ε_k = 2^-(k+1): products 2^(k+1), explicit threshold
    let i3 = IntervalPartition::arith_len(0, 2, 2)?;
    let eps3 = TailBoundedSeq::geometric(rat(1, 2), rat(1, 2))?;
    let threshold = |m: &Rat| {
        let mut k = 0usize;
        while pow2_rat(k as u64 + 1) < *m {
            k += 1;
        }
        k
    };
    let div3 = PairEvidence::diverging(DivergenceCertificate::full(threshold));
    println!(
        "products 2^(k+1):  ae-scale {}",
        e_contributive(&i3, &eps3, &div3, horizon)?.tag(),
    );
    for m in [2i64, 10, 100, 1000] {
        let m = rat_int(m);
        println!(
            "  threshold({}) = {}  (product there: {})",
            to_pq(&m),
            threshold(&m),
            to_pq(&pow2_rat(threshold(&m) as u64 + 1)),
        );
    }
    Ok(())
}
