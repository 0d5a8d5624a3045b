//! Conditions (stem, level, points), their order, oracle-relative limits in a
//! linked cell, amalgamation, and a dense session whose accumulated stem
//! captures every joined point beyond its join index.
//!
//!     cargo run --example forcing_session

use std::collections::BTreeSet;

use slalom_lab::forcing::{
    amalgamate, cond_leq, cond_validate, d_limit, minimal_extension, ForcingCondition,
    ForcingFrame, ForcingSession, LimitRecord, LinkedCellKey, UltrafilterOracle,
};
use slalom_lab::partitions::IntervalPartition;
use slalom_lab::points::Point;
use slalom_lab::rat::{pow2_rat, rat, Rat};
use slalom_lab::sequences::TailBoundedSeq;
use slalom_lab::slaloms::DivergenceCertificate;

fn frame() -> slalom_lab::Result<ForcingFrame> {
    ForcingFrame::new(
        IntervalPartition::arith_len(0, 2, 2)?,
        TailBoundedSeq::geometric(rat(1, 2), rat(1, 2))?,
        DivergenceCertificate::full(|m: &Rat| {
            let mut k = 0usize;
            while pow2_rat(k as u64 + 1) < *m {
                k += 1;
            }
            k
        }),
    )
}

fn pt(seed: u64) -> Point {
    Point::seeded(seed).with_depth(512)
}

fn main() -> slalom_lab::Result<()> {
    let fr = frame()?;
    // a principal limit is an exact projection
    let base = ForcingCondition::new(Vec::new(), 1, Vec::new())?;
    let cell = LinkedCellKey::of(&base, 1);
    let family: Vec<ForcingCondition> = (0..6u64)
        .map(|i| ForcingCondition::new(Vec::new(), 1, vec![pt(i)]).unwrap())
        .collect();
    let oracle = UltrafilterOracle::principal(3);
    let limit = d_limit(&cell, &family, &oracle)?;
    println!(
        "principal limit projects to member 3: {}",
        limit.points()[0].agrees_within_depth(&family[3].points()[0])
    );

    // amalgamation below the limit at a common family index
    let q = minimal_extension(
        &fr,
        &ForcingCondition::new(Vec::new(), 1, vec![pt(3), pt(50)])?,
        4,
    );
    let out = amalgamate(
        &fr,
        &q,
        &[LimitRecord {
            cell,
            family: family.clone(),
            limit,
        }],
        &oracle,
        &(0..6).collect::<BTreeSet<_>>(),
    )?;
    println!(
        "amalgamated at index {}: validates = {}, below q = {}, below p = {}",
        out.chosen,
        cond_validate(&fr, &out.condition)?.is_holds(),
        cond_leq(&fr, &out.condition, &q).holds,
        cond_leq(&fr, &out.condition, &family[out.chosen]).holds,
    );
    oracle.check_log()?;

    // a dense session: the generic prefix captures everything it joined
    let mut session = ForcingSession::start(frame()?, 1)?;
    for seed in [101u64, 102, 103] {
        session.add_point(pt(seed))?;
        let to = session.current().stem().len() + 2;
        session.extend_with(to, |_| Vec::new())?;
    }
    session.verify_replay()?;
    println!(
        "session: stem length {}, replay verified, {} transcript events",
        session.current().stem().len(),
        session.transcript()["events"].as_array().unwrap().len(),
    );
    Ok(())
}
