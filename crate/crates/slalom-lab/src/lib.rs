//! An exact-arithmetic laboratory for interval partitions of the natural
//! numbers, summable sequences of positive rationals, and the block slaloms
//! they carry on Cantor space.
//!
//! Everything here is computed with arbitrary-precision rationals; there is no
//! floating point anywhere in the crate. Statements of the form "for all but
//! finitely many n" or "for infinitely many n" are not finitely decidable, so
//! the operations that evaluate them return three-valued verdicts at a
//! caller-supplied horizon, and a verdict of `Holds` is only ever issued on the
//! strength of a certificate (a total threshold function supplied by a
//! constructor and spot-validated by exact checks on the window).
//!
//! The main pieces:
//!
//! - [`sequences`]: positive rational sequences with certified tail-sum bounds,
//!   and the non-decreasing unbounded weight sequence that keeps a weighted sum
//!   finite.
//! - [`partitions`]: interval partitions of (cofinite subsets of) the naturals,
//!   the domination and refinement preorders between them, and the endpoint
//!   machinery used to refute joint refinements.
//! - [`points`]: elements of Cantor space as deterministic bit generators.
//! - [`slaloms`]: per-block finite sets of binary words, membership in the
//!   vanishing family relative to a pair (partition, sequence), contributivity
//!   of the pair, and constructive refuters for pointwise inclusion.
//! - [`constructors`]: executable witnesses — merging countably many slaloms
//!   into one, deriving a sequence from a summable ratio profile, padding,
//!   separating witnesses, and the transfer maps between partitions.
//! - [`tukey`]: generic width-bounded slalom systems, the mixed-radix coding of
//!   block functions, and the connection maps that transport localization
//!   instances into block-slalom instances and back.
//! - [`twosmall`]: null-set approximations and the even/odd split of a single
//!   partition into two overlapping coarser ones that jointly cover.
//! - [`forcing`]: a finitary sandbox for the poset of conditions (s, N, F),
//!   its order, oracle-relative limits in linked cells, and amalgamation.
//! - [`suites`]: seeded batch verification suites with JSON-line reports, the
//!   engine behind the command-line driver.
//!
//! Run `cargo run --example delta_witness` (or any other example) for a guided
//! tour of one capability; `cargo test --workspace` runs the unit and
//! acceptance suites.

pub mod error;
pub mod rat;
pub mod verdict;

pub mod sequences;

pub mod partitions;
pub mod points;
pub mod slaloms;

pub mod constructors;
pub mod tukey;
pub mod twosmall;

pub mod forcing;

pub mod suites;
pub mod witness;

pub use error::{Error, Result};
pub use rat::Rat;
pub use verdict::Verdict3;

#[cfg(test)]
mod concurrency_tests {
    fn assert_shareable<T: Send + Sync>() {}

    #[test]
    fn shared_values_agree_across_threads() {
        use crate::rat::{rat, rat_int};
        let eps = crate::sequences::TailBoundedSeq::geometric(rat_int(1), rat(1, 2)).unwrap();
        let delta = std::sync::Arc::new(crate::sequences::build_delta(&eps).unwrap());
        let handles: Vec<_> = (0..4)
            .map(|_| {
                let d = delta.clone();
                std::thread::spawn(move || {
                    (0..8).map(|i| d.breakpoint(i).unwrap()).collect::<Vec<_>>()
                })
            })
            .collect();
        let results: Vec<Vec<usize>> = handles.into_iter().map(|h| h.join().unwrap()).collect();
        assert!(results.windows(2).all(|w| w[0] == w[1]));
    }

    #[test]
    fn core_values_are_send_and_sync() {
        assert_shareable::<crate::sequences::TailBoundedSeq>();
        assert_shareable::<crate::sequences::DeltaWitness>();
        assert_shareable::<crate::partitions::IntervalPartition>();
        assert_shareable::<crate::points::Point>();
        assert_shareable::<crate::slaloms::BlockSlalom>();
        assert_shareable::<crate::slaloms::BlockSet>();
        assert_shareable::<crate::tukey::WidthSlalom>();
        assert_shareable::<crate::twosmall::NullApprox>();
        assert_shareable::<crate::forcing::ForcingCondition>();
        assert_shareable::<crate::forcing::UltrafilterOracle>();
    }
}
