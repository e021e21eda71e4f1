//! `ln n!` for exact and interval-valued `n`.
//!
//! Small `n` go through the exact factorial. Large `n` use the Stirling
//! series for `ln Γ(x + 1)` truncated after ten Bernoulli terms; for real
//! `x > 0` the remainder is bounded by the first omitted term, which is
//! added to both ends of the interval.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use super::float::{ln_float, ln_int, ln2_interval, pi_interval, Float, Interval};

/// Above this the exact factorial is replaced by the Stirling series.
pub const EXACT_FACTORIAL_MAX: u64 = 20_000;

/// `(B_2k)` for `k = 1..=11` as `(numerator, denominator)`.
const BERNOULLI: [(i64, i64); 11] = [
    (1, 6),
    (-1, 30),
    (1, 42),
    (-1, 30),
    (5, 66),
    (-691, 2730),
    (7, 6),
    (-3617, 510),
    (43867, 798),
    (-174611, 330),
    (854513, 138),
];

pub fn factorial(n: u64) -> BigUint {
    (2..=n).map(BigUint::from).product()
}

/// Stirling series for `ln Γ(x + 1)` at a single point `x >= 1000`.
fn stirling(x: &Float, prec: u64) -> Interval {
    let wp = prec + 32;
    let xi = Interval::point(x.clone());
    let half = Interval::point(Float::from_parts(BigInt::one(), -1));
    let ln_x = ln_float(x, wp);
    let ln_2pi = ln2_interval(wp).add(&pi_interval(wp).ln(wp), wp);
    // (x + 1/2) ln x - x + ln(2π)/2
    let mut s = xi
        .add(&half, wp)
        .mul(&ln_x, wp)
        .sub(&xi, wp)
        .add(&ln_2pi.mul(&half, wp), wp);
    let x2 = xi.mul(&xi, wp);
    let mut xpow = xi.clone();
    let terms = BERNOULLI.len() - 1;
    for (k, &(p, q)) in BERNOULLI.iter().enumerate().take(terms) {
        let k = k as i64 + 1;
        let c = BigRational::new(p.into(), BigInt::from(q * 2 * k * (2 * k - 1)));
        s = s.add(&Interval::from_ratio(&c, wp).div(&xpow, wp), wp);
        xpow = xpow.mul(&x2, wp);
    }
    let (p, q) = BERNOULLI[terms];
    let k = terms as i64 + 1;
    let r = BigRational::new(p.abs().into(), BigInt::from(q * 2 * k * (2 * k - 1)));
    let rem = Interval::from_ratio(&r, wp).div(&xpow, wp).hi;
    let widened = Interval {
        lo: s.lo.sub(&rem, wp, super::float::Dir::Down),
        hi: s.hi.add(&rem, wp, super::float::Dir::Up),
    };
    Interval {
        lo: widened.lo.round(prec, super::float::Dir::Down),
        hi: widened.hi.round(prec, super::float::Dir::Up),
    }
}

/// `ln n!` for an exact `n`.
pub fn ln_factorial(n: &BigUint, prec: u64) -> Interval {
    match n.to_u64() {
        Some(m) if m <= EXACT_FACTORIAL_MAX => ln_int(&BigInt::from(factorial(m)), prec),
        _ => stirling(&Float::from_int(BigInt::from(n.clone())), prec),
    }
}

/// `ln Γ(x + 1)` over real `x` in `[lo, hi]` with `lo >= 1000`, using that the
/// function is increasing there.
pub fn ln_gamma1_interval(x: &Interval, prec: u64) -> Interval {
    Interval {
        lo: stirling(&x.lo, prec).lo,
        hi: stirling(&x.hi, prec).hi,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stirling_matches_exact_factorial() {
        for n in [1000u64, 5000, 20_000] {
            let exact = ln_int(&BigInt::from(factorial(n)), 300);
            let approx = stirling(&Float::from_int(n), 300);
            assert!(exact.compare(&approx).is_none(), "n = {n}");
            assert!(approx.relative_width() < 1e-60, "n = {n}: {}", approx.relative_width());
        }
    }

    #[test]
    fn small_factorials() {
        assert_eq!(factorial(0), BigUint::one());
        assert_eq!(factorial(5), BigUint::from(120u32));
        let l = ln_factorial(&BigUint::from(3u32), 200);
        assert!(l.compare(&ln_int(&BigInt::from(6), 200)).is_none());
        let one = ln_factorial(&BigUint::from(1u32), 200);
        assert!(one.is_point() && one.lo.is_zero());
    }

    #[test]
    fn huge_argument_stays_ordered() {
        let big = Float::from_parts(BigInt::from(3), 5000);
        let v = ln_factorial(&BigUint::from(10u32).pow(1500), 256);
        let w = stirling(&big, 256);
        assert!(v.lo > Float::zero() && w.lo > v.hi);
    }
}
