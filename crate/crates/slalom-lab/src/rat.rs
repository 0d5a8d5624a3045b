//! Arbitrary-precision rational arithmetic helpers.
//!
//! All quantities in this crate — sequence terms, tail bounds, block ratios —
//! are [`Rat`] values backed by big integers, kept in lowest terms with a
//! positive denominator by `num-rational`. The helpers here cover the handful
//! of operations the rest of the crate needs on top of plain field arithmetic:
//! powers of two, floors and ceilings, and the `"p/q"` string form used by
//! every JSON interface.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational number: big-integer numerator, positive big-integer
/// denominator, always in lowest terms.
pub type Rat = num_rational::BigRational;

/// `p/q` from machine integers.
pub fn rat(p: i64, q: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(q))
}

/// Integer as a rational.
pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Unsigned big integer as a rational.
pub fn rat_big(n: &BigUint) -> Rat {
    Rat::from_integer(BigInt::from(n.clone()))
}

/// 2^bits as a big integer.
pub fn pow2(bits: u64) -> BigUint {
    BigUint::one() << usize::try_from(bits).expect("block length fits a machine word")
}

/// 2^bits as a rational.
pub fn pow2_rat(bits: u64) -> Rat {
    rat_big(&pow2(bits))
}

/// 2^-bits as a rational.
pub fn pow2_inv(bits: u64) -> Rat {
    Rat::new(BigInt::one(), BigInt::from(pow2(bits)))
}

/// ⌈r⌉ for a non-negative rational, as an unsigned big integer.
pub fn ceil_big(r: &Rat) -> BigUint {
    assert!(!r.is_negative(), "ceil_big expects a non-negative rational");
    let (num, den) = (r.numer(), r.denom());
    let (q, rem) = num.div_rem(den);
    let q = if rem.is_zero() { q } else { q + BigInt::one() };
    q.to_biguint().expect("non-negative by construction")
}

/// ⌊r⌋ for a non-negative rational, as an unsigned big integer.
pub fn floor_big(r: &Rat) -> BigUint {
    assert!(
        !r.is_negative(),
        "floor_big expects a non-negative rational"
    );
    (r.numer() / r.denom())
        .to_biguint()
        .expect("non-negative by construction")
}

/// Render as `"p/q"` (or just `"p"` when the denominator is 1).
pub fn to_pq(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parse `"p/q"` or `"p"`.
pub fn parse_pq(s: &str) -> Result<Rat> {
    let parse_int = |t: &str| -> Result<BigInt> {
        t.trim()
            .parse::<BigInt>()
            .map_err(|e| Error::Usage(format!("bad integer {t:?}: {e}")))
    };
    match s.split_once('/') {
        Some((p, q)) => {
            let den = parse_int(q)?;
            if den.is_zero() {
                return Err(Error::Usage(format!("zero denominator in {s:?}")));
            }
            Ok(Rat::new(parse_int(p)?, den))
        }
        None => Ok(Rat::from_integer(parse_int(s)?)),
    }
}

/// Minimal L with 2^L ≥ n (and L ≥ 1 for n ≤ 2).
pub fn log2_ceil(n: &BigUint) -> u64 {
    if n <= &BigUint::from(2u32) {
        return 1;
    }
    let bits = n.bits();
    // 2^(bits-1) ≤ n < 2^bits; n a power of two iff exactly one set bit.
    if n.count_ones() == 1 {
        bits - 1
    } else {
        bits
    }
}

/// ⌊log₂ n⌋ for n ≥ 1.
pub fn log2_floor(n: &BigUint) -> u64 {
    assert!(!n.is_zero(), "log2_floor expects n >= 1");
    n.bits() - 1
}

/// Convenience for indices that must fit a machine word.
pub fn as_usize(n: &BigUint, what: &str) -> Result<usize> {
    n.to_usize()
        .ok_or_else(|| Error::RangeViolation(format!("{what} does not fit usize: {n}")))
}
