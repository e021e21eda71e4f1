//! Exact and log-space evaluation of the exclusion thresholds for word maps
//! with a large fiber, the per-family bounds for simple groups, and the
//! computable radical-index estimates.
//!
//! Magnitudes are carried as [`LogNumber`]s: a rigorous interval for the
//! natural log, plus the exact value when it has at most [`EXACT_DIGITS`]
//! decimal digits.

pub mod float;
pub mod gamma;

use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::Mutex;

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::words::{m_constant, m_prime, ReducedWord};
use crate::{ratio_string, serialize_ratio, Error, Result};
use float::{exp_float, ln_int, ln_rational, to_scientific, Dir, Float, Interval};
use gamma::{factorial, ln_factorial, ln_gamma1_interval};

/// Working precision in bits for reported logarithms.
pub const PREC: u64 = 256;
/// Exact values are kept up to this many decimal digits.
pub const EXACT_DIGITS: u64 = 10_000;
/// Significant digits printed for `ln_value`.
pub const LN_DIGITS: usize = 60;
/// Significant digits printed for real-valued outputs.
pub const REAL_DIGITS: usize = 40;

/// log2(10) rounded up, used to turn digit limits into bit limits.
fn digits_to_bits(d: u64) -> u64 {
    d * 3322 / 1000 + 1
}

/// A nonnegative magnitude known through its logarithm.
#[derive(Debug, Clone)]
pub struct LogNumber {
    exact: Option<BigRational>,
    ln: Interval,
    factorial_of: Option<Box<LogNumber>>,
}

impl LogNumber {
    pub fn one() -> LogNumber {
        LogNumber {
            exact: Some(BigRational::one()),
            ln: Interval::zero(),
            factorial_of: None,
        }
    }

    /// From an exact positive rational; keeps it only when small enough.
    pub fn from_ratio(r: BigRational) -> LogNumber {
        let ln = ln_rational(&r, PREC);
        let small = r.numer().bits().max(r.denom().bits()) <= digits_to_bits(EXACT_DIGITS);
        LogNumber {
            exact: small.then_some(r),
            ln,
            factorial_of: None,
        }
    }

    pub fn from_int(n: BigUint) -> LogNumber {
        LogNumber::from_ratio(BigRational::from_integer(n.into()))
    }

    /// Only the logarithm is known.
    pub fn from_ln(ln: Interval) -> LogNumber {
        LogNumber {
            exact: None,
            ln,
            factorial_of: None,
        }
    }

    pub fn exact(&self) -> Option<&BigRational> {
        self.exact.as_ref()
    }

    /// The exact value when it is an integer.
    pub fn exact_integer(&self) -> Option<BigUint> {
        self.exact
            .as_ref()
            .filter(|r| r.is_integer())
            .and_then(|r| r.numer().to_biguint())
    }

    pub fn ln(&self) -> &Interval {
        &self.ln
    }

    /// The argument `n` when this value is `n!`.
    pub fn factorial_of(&self) -> Option<&LogNumber> {
        self.factorial_of.as_deref()
    }

    pub fn ln_value(&self) -> String {
        to_scientific(&self.ln, LN_DIGITS)
    }

    /// Product, exact when both factors are and the result stays small.
    pub fn mul(&self, other: &LogNumber) -> LogNumber {
        let ln = self.ln.add(&other.ln, PREC);
        let exact = match (&self.exact, &other.exact) {
            (Some(a), Some(b)) => {
                let bits = a.numer().bits() + b.numer().bits();
                (bits <= digits_to_bits(EXACT_DIGITS) + 1)
                    .then(|| a * b)
                    .filter(|p| p.numer().bits() <= digits_to_bits(EXACT_DIGITS))
            }
            _ => None,
        };
        LogNumber {
            exact,
            ln,
            factorial_of: None,
        }
    }

    /// Order by value when it is decided at the current precision.
    pub fn compare(&self, other: &LogNumber) -> Option<Ordering> {
        if let (Some(a), Some(b)) = (&self.exact, &other.exact) {
            return Some(a.cmp(b));
        }
        self.ln.compare(&other.ln)
    }
}

impl Serialize for LogNumber {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(None)?;
        if let Some(e) = &self.exact {
            m.serialize_entry("exact", &ratio_string(e))?;
        }
        m.serialize_entry("ln_value", &self.ln_value())?;
        if let Some(f) = &self.factorial_of {
            m.serialize_entry("is_factorial_of", f)?;
        }
        m.end()
    }
}

/// A real number: an enclosing interval, plus its exact value when rational.
#[derive(Debug, Clone)]
pub struct RealValue {
    pub exact: Option<BigRational>,
    pub value: Interval,
}

impl RealValue {
    pub fn exact(r: BigRational) -> RealValue {
        RealValue {
            value: Interval::from_ratio(&r, PREC),
            exact: Some(r),
        }
    }

    pub fn compare(&self, other: &RealValue) -> Option<Ordering> {
        if let (Some(a), Some(b)) = (&self.exact, &other.exact) {
            return Some(a.cmp(b));
        }
        self.value.compare(&other.value)
    }

    pub fn decimal(&self) -> String {
        to_scientific(&self.value, REAL_DIGITS)
    }
}

impl Serialize for RealValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(None)?;
        if let Some(e) = &self.exact {
            m.serialize_entry("exact", &ratio_string(e))?;
        }
        m.serialize_entry("value", &self.decimal())?;
        m.end()
    }
}

fn serialize_display<T: std::fmt::Display, S: Serializer>(v: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// Parses `p/q`, an integer, a decimal such as `0.125`, or a decimal with an
/// exponent such as `1e-3`, to an exact rational.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let t = text.trim();
    let bad = || Error::Param(format!("not a rational number: {text:?}"));
    if let Some((p, q)) = t.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(Error::Param(format!("zero denominator in {text:?}")));
        }
        return Ok(BigRational::new(p, q));
    }
    let (mantissa, exp) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i64>().map_err(|_| bad())?),
        None => (t, 0),
    };
    let (neg, mantissa) = match mantissa.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int.is_empty() && frac.is_empty()
        || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit())
    {
        return Err(bad());
    }
    let digits: BigInt = format!("{int}{frac}0").parse::<BigInt>().map_err(|_| bad())? / 10;
    let scale = exp - frac.len() as i64;
    if scale.unsigned_abs() > 100_000 {
        return Err(bad());
    }
    let ten = BigInt::from(10);
    let mut r = if scale >= 0 {
        BigRational::from_integer(digits * Pow::pow(&ten, scale as u32))
    } else {
        BigRational::new(digits, Pow::pow(&ten, (-scale) as u32))
    };
    if neg {
        r = -r;
    }
    Ok(r)
}

fn check_rho(rho: &BigRational) -> Result<()> {
    if !rho.is_positive() || rho > &BigRational::one() {
        return Err(Error::Param(format!(
            "rho must lie in (0, 1], got {}",
            ratio_string(rho)
        )));
    }
    Ok(())
}

fn word_params(w: &ReducedWord) -> Result<(u64, u64)> {
    w.require_nonempty()?;
    Ok((w.len() as u64, w.num_vars() as u64))
}

fn int_interval(n: &BigUint) -> Interval {
    Interval::from_int(BigInt::from(n.clone()))
}

// ---------------------------------------------------------------------------
// alternating groups

/// `⌈256 l^16 e^x⌉` with `x` an integer, as a [`LogNumber`]; the exact value
/// is included when it has at most [`EXACT_DIGITS`] digits.
fn ceil_exp_argument(l: u64, x: &BigInt) -> LogNumber {
    let c = BigInt::from(256) * Pow::pow(&BigInt::from(l), 16u32);
    let ln_c = ln_int(&c, PREC + 64);
    let ln_arg = ln_c.add(&Interval::from_int(x.clone()), PREC + 64);
    // digits of the argument ≈ ln / ln 10
    let approx_bits: BigInt = ln_arg.hi.to_fixed(&BigInt::zero(), Dir::Up) * 3u32 / 2u32 + 2u32;
    let small = approx_bits <= BigInt::from(digits_to_bits(EXACT_DIGITS)) && x.sign() != Sign::Minus;
    if small {
        let mut prec = approx_bits.to_u64().unwrap() + 96;
        loop {
            let a = exp_float(&Float::from_int(x.clone()), prec).mul(&Interval::from_int(c.clone()), prec);
            if let Some(n) = a.ceil() {
                let n = n.to_biguint().expect("positive");
                return LogNumber::from_int(n);
            }
            prec *= 2;
        }
    }
    // N in [A, A + 1): ln N in [ln A, ln A + 1/A], and 1/A is far below the
    // last bit kept
    let hi = ln_arg.hi.add(&Float::from_parts(BigInt::one(), -(2 * PREC as i64 + 64)), PREC, Dir::Up);
    LogNumber::from_ln(Interval {
        lo: ln_arg.lo.round(PREC, Dir::Down),
        hi,
    })
}

/// `⌈256 l^16 e^{16M'l-2}⌉!`, memoised per `l`.
fn alt_factorial_term(l: u64) -> LogNumber {
    static CACHE: Mutex<Option<HashMap<u64, LogNumber>>> = Mutex::new(None);
    if let Some(v) = CACHE
        .lock()
        .unwrap_or_else(|e| e.into_inner())
        .get_or_insert_with(HashMap::new)
        .get(&l)
    {
        return v.clone();
    }
    let x = BigInt::from(m_prime(l)) * 16 * l - 2;
    let arg = ceil_exp_argument(l, &x);
    let ln = match arg.exact_integer() {
        Some(n) => ln_factorial(&n, PREC),
        None => {
            let a = arg.ln().exp(PREC + 64);
            let n = Interval {
                lo: a.lo,
                hi: a.hi.add(&Float::from_int(1), PREC + 64, Dir::Up),
            };
            ln_gamma1_interval(&n, PREC)
        }
    };
    let v = LogNumber {
        exact: None,
        ln,
        factorial_of: Some(Box::new(arg)),
    };
    CACHE
        .lock()
        .unwrap_or_else(|e| e.into_inner())
        .get_or_insert_with(HashMap::new)
        .insert(l, v.clone());
    v
}

/// `ρ^{-k}` for a positive integer `k`.
fn inverse_power(rho: &BigRational, k: &BigUint) -> LogNumber {
    if rho.is_one() {
        return LogNumber::one();
    }
    let inv = rho.recip();
    let ln = ln_rational(&inv, PREC + 64).mul(&int_interval(k), PREC);
    let size = BigUint::from(inv.numer().bits().max(inv.denom().bits())) * k;
    let exact = (size <= BigUint::from(digits_to_bits(EXACT_DIGITS)))
        .then(|| Pow::pow(&inv, k.to_u32().expect("small exponent")))
        .filter(|r: &BigRational| r.numer().bits() <= digits_to_bits(EXACT_DIGITS));
    LogNumber {
        exact,
        ln,
        factorial_of: None,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AltThreshold {
    pub term_factorial: LogNumber,
    pub term_rho: LogNumber,
    pub threshold: LogNumber,
    /// `"factorial"` or `"rho"`.
    pub attained_by: &'static str,
}

/// No alternating group of order above `threshold` can be a composition
/// factor of a group whose word map has a fiber of proportion at least `ρ`.
pub fn alt_exclusion_threshold(w: &ReducedWord, rho: &BigRational) -> Result<AltThreshold> {
    check_rho(rho)?;
    let (l, _) = word_params(w)?;
    let mp = m_prime(l);
    let term_factorial = alt_factorial_term(l);
    let term_rho = inverse_power(rho, &(mp * 16u32));
    // the factorial term is irrational-free: ties would need equal logs
    let rho_wins = term_rho.compare(&term_factorial) == Some(Ordering::Greater);
    let (threshold, attained_by) = if rho_wins {
        (term_rho.clone(), "rho")
    } else {
        (term_factorial.clone(), "factorial")
    };
    Ok(AltThreshold {
        term_factorial,
        term_rho,
        threshold,
        attained_by,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct SimpleGroupBoundAlt {
    pub n_threshold: LogNumber,
    #[serde(serialize_with = "serialize_ratio")]
    pub exponent: BigRational,
    #[serde(serialize_with = "serialize_display")]
    pub m: BigUint,
}

/// For `n >= 256 l^16 e^{16Md-2}`, `P_w(Alt_n) <= |Alt_n|^{d - 1/(16M)}` with
/// `M = M(d, l)`. The threshold's exact value is its ceiling when small.
pub fn simple_group_bound_alt(w: &ReducedWord) -> Result<SimpleGroupBoundAlt> {
    let (l, d) = word_params(w)?;
    let m = m_constant(d, l);
    let x = BigInt::from(m.clone()) * 16 * d - 2;
    let n_threshold = ceil_exp_argument(l, &x);
    let exponent = BigRational::from_integer(d.into())
        - BigRational::new(BigInt::one(), BigInt::from(m.clone()) * 16);
    Ok(SimpleGroupBoundAlt {
        n_threshold,
        exponent,
        m,
    })
}

// ---------------------------------------------------------------------------
// Lie type groups

#[derive(Debug, Clone, Serialize)]
pub struct LieThreshold {
    #[serde(serialize_with = "serialize_display")]
    pub term_const: BigUint,
    pub term_rho: RealValue,
    pub threshold: RealValue,
    /// `"const"` or `"rho"`.
    pub attained_by: &'static str,
}

/// `log2(1/ρ)` exactly when `1/ρ` is a power of two.
fn exact_log2_inv(rho: &BigRational) -> Option<BigUint> {
    let inv = rho.recip();
    let n = inv.numer();
    (inv.denom().is_one() && n.is_positive() && (n & (n - BigInt::one())).is_zero())
        .then(|| BigUint::from(n.bits() - 1))
}

/// No classical Lie type group of untwisted rank above `threshold` can be a
/// composition factor.
pub fn lie_rank_threshold(w: &ReducedWord, rho: &BigRational) -> Result<LieThreshold> {
    check_rho(rho)?;
    let (l, _) = word_params(w)?;
    let term_const = BigUint::from(72 * (l + 1) * (l + 1) * l * l);
    let term_rho = if let Some(k) = exact_log2_inv(rho) {
        let sq = &term_const * k;
        let r = sq.sqrt();
        if &r * &r == sq {
            RealValue::exact(BigRational::from_integer(r.into()))
        } else {
            RealValue {
                exact: None,
                value: int_interval(&sq).sqrt(PREC),
            }
        }
    } else {
        let wp = PREC + 64;
        let log2 = ln_rational(&rho.recip(), wp).div(&float::ln2_interval(wp), wp);
        RealValue {
            exact: None,
            value: log2.mul(&int_interval(&term_const), wp).sqrt(PREC),
        }
    };
    let c = RealValue::exact(BigRational::from_integer(term_const.clone().into()));
    let rho_wins = term_rho.compare(&c) == Some(Ordering::Greater);
    let (threshold, attained_by) = if rho_wins {
        (term_rho.clone(), "rho")
    } else {
        (c, "const")
    };
    Ok(LieThreshold {
        term_const,
        term_rho,
        threshold,
        attained_by,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct SimpleGroupBoundLie {
    #[serde(serialize_with = "serialize_display")]
    pub rank_threshold: BigUint,
    #[serde(serialize_with = "serialize_ratio")]
    pub exponent: BigRational,
}

/// For classical Lie type groups of untwisted rank at least `72(d+1)^2 l^2`,
/// `P_w(G) <= |G|^{d - 1/(72(d+1)l^2)}`.
pub fn simple_group_bound_lie(w: &ReducedWord) -> Result<SimpleGroupBoundLie> {
    let (l, d) = word_params(w)?;
    let rank_threshold = BigUint::from(72 * (d + 1) * (d + 1) * l * l);
    let exponent = BigRational::from_integer(d.into())
        - BigRational::new(BigInt::one(), BigInt::from(72 * (d + 1) * l * l));
    Ok(SimpleGroupBoundLie {
        rank_threshold,
        exponent,
    })
}

// ---------------------------------------------------------------------------
// the radical index

fn check_simple_order(s: &BigUint) -> Result<()> {
    if s < &BigUint::from(60u32) {
        return Err(Error::Param(format!(
            "simple group order must be at least 60, got {s}"
        )));
    }
    Ok(())
}

/// `1 - 1/|S|^l`, an upper bound on the largest fiber proportion over the
/// variations of a word of length `l` on a nonabelian simple group `S`.
pub fn epsilon_upper_bound(s_order: &BigUint, l: u64) -> Result<BigRational> {
    check_simple_order(s_order)?;
    if l == 0 {
        return Err(Error::Param("word length must be at least 1".into()));
    }
    let sl = BigInt::from(Pow::pow(s_order, l as u32));
    Ok(BigRational::one() - BigRational::new(BigInt::one(), sl))
}

/// `⌊l^2 ln ρ / ln(1 - 1/|S|^l)⌋`.
pub fn n0_bound(w: &ReducedWord, rho: &BigRational, s_order: &BigUint) -> Result<BigUint> {
    check_rho(rho)?;
    check_simple_order(s_order)?;
    let (l, _) = word_params(w)?;
    if rho.is_one() {
        return Ok(BigUint::zero());
    }
    let q = epsilon_upper_bound(s_order, l)?;
    let l2 = BigInt::from(l * l);
    let size_hint = s_order.bits() * l + rho.denom().bits() + rho.numer().bits() + 2 * l.max(2).ilog2() as u64;
    let mut prec = PREC + size_hint;
    loop {
        let a = ln_rational(rho, prec).mul(&Interval::from_int(l2.clone()), prec);
        let b = ln_rational(&q, prec);
        let v = a.div(&b, prec);
        if let Some(f) = v.floor() {
            return Ok(f.to_biguint().expect("nonnegative"));
        }
        // an integer k lies in the interval: decide whether the value is k
        let k = -(v.lo.neg().floor());
        if k.is_positive() && is_exact_ratio(rho, l, s_order, &k) {
            return Ok(k.to_biguint().unwrap());
        }
        prec *= 2;
        if prec > 1 << 22 {
            return Err(Error::Param("n0 floor did not resolve".into()));
        }
    }
}

/// Whether `ρ^{l^2} = (1 - 1/s^l)^k` exactly.
fn is_exact_ratio(rho: &BigRational, l: u64, s: &BigUint, k: &BigInt) -> bool {
    let sl = BigInt::from(Pow::pow(s, l as u32));
    let l2 = (l * l) as u32;
    // denominators must agree: b^{l^2} = s^{lk}
    let lhs_bits = rho.denom().bits() * l2 as u64 + 1;
    let Some(k) = k.to_u32() else { return false };
    if (sl.bits() - 1) * k as u64 > lhs_bits {
        return false;
    }
    let left = Pow::pow(rho, l2);
    let right = Pow::pow(&BigRational::new(&sl - 1, sl), k);
    left == right
}

/// `|Aut S|^{n0} · n0!` for one factor.
fn radical_factor(aut_order: &BigUint, n0: &BigUint) -> LogNumber {
    if n0.is_zero() {
        return LogNumber::one();
    }
    let ln = ln_int(&BigInt::from(aut_order.clone()), PREC + 64)
        .mul(&int_interval(n0), PREC + 32)
        .add(&ln_factorial(n0, PREC + 32), PREC);
    let max_bits = digits_to_bits(EXACT_DIGITS);
    let est_bits = aut_order.bits() as u128 * n0.to_u128().unwrap_or(u128::MAX)
        + n0.to_u128().map(|n| n * 64).unwrap_or(u128::MAX);
    let exact = (est_bits <= max_bits as u128).then(|| {
        let n = n0.to_u64().unwrap();
        Pow::pow(aut_order, n as u32) * factorial(n)
    });
    LogNumber {
        exact: exact
            .filter(|e| e.bits() <= max_bits)
            .map(|e| BigRational::from_integer(e.into())),
        ln,
        factorial_of: None,
    }
}

/// `∏_S |Aut S|^{n0(S)} · n0(S)!` over a candidate list of `(|S|, |Aut S|)`.
///
/// Every `|S|` must be at most `max{N0, ρ^{-1/η0}}`.
pub fn radical_index_bound(
    factors: &[(BigUint, BigUint)],
    w: &ReducedWord,
    rho: &BigRational,
    n0_cap: &BigUint,
    eta0: &BigRational,
) -> Result<LogNumber> {
    check_rho(rho)?;
    word_params(w)?;
    if !eta0.is_positive() {
        return Err(Error::Param("eta0 must be positive".into()));
    }
    let mut out = LogNumber::one();
    for (s, a) in factors {
        check_simple_order(s)?;
        if a < s {
            return Err(Error::Param(format!(
                "|Aut S| = {a} is smaller than |S| = {s}"
            )));
        }
        if s > n0_cap && !within_rho_bound(s, rho, eta0)? {
            return Err(Error::Param(format!(
                "|S| = {s} exceeds max{{N0, rho^(-1/eta0)}}"
            )));
        }
        let n0 = n0_bound(w, rho, s)?;
        out = out.mul(&radical_factor(a, &n0));
    }
    Ok(out)
}

/// `s <= ρ^{-1/η0}`, i.e. `s^p ρ^q <= 1` for `η0 = p/q`.
fn within_rho_bound(s: &BigUint, rho: &BigRational, eta0: &BigRational) -> Result<bool> {
    let (p, q) = (eta0.numer(), eta0.denom());
    let lhs = ln_int(&BigInt::from(s.clone()), PREC)
        .mul(&Interval::from_int(p.clone()), PREC)
        .add(&ln_rational(rho, PREC).mul(&Interval::from_int(q.clone()), PREC), PREC);
    if lhs.hi.sign() != Sign::Plus {
        return Ok(true);
    }
    if lhs.lo.sign() == Sign::Plus {
        return Ok(false);
    }
    let (Some(p), Some(q)) = (p.to_u32(), q.to_u32()) else {
        return Err(Error::Param("eta0 too large to decide the order bound".into()));
    };
    let bits = s.bits() * p as u64 + rho.denom().bits() * q as u64;
    if bits > 1 << 22 {
        return Err(Error::Param("order bound too large to decide exactly".into()));
    }
    let v = BigRational::from_integer(BigInt::from(Pow::pow(s, p))) * Pow::pow(rho, q);
    Ok(v <= BigRational::one())
}

// ---------------------------------------------------------------------------
// report

#[derive(Debug, Clone, Serialize)]
pub struct ExclusionReport {
    pub l: u64,
    pub d: u64,
    #[serde(serialize_with = "serialize_ratio")]
    pub rho: BigRational,
    #[serde(rename = "M", serialize_with = "serialize_display")]
    pub m: BigUint,
    #[serde(rename = "M_prime", serialize_with = "serialize_display")]
    pub m_prime: BigUint,
    pub alt_threshold: AltThreshold,
    pub lie_rank_threshold: LieThreshold,
    /// Per-family bounds stated with `d` and `M(d, l)`, for comparison.
    pub simple_group_alt: SimpleGroupBoundAlt,
    pub simple_group_lie: SimpleGroupBoundLie,
    pub narrative: Vec<String>,
}

pub fn excluded_factors_report(w: &ReducedWord, rho: &BigRational) -> Result<ExclusionReport> {
    check_rho(rho)?;
    let (l, d) = word_params(w)?;
    let alt = alt_exclusion_threshold(w, rho)?;
    let lie = lie_rank_threshold(w, rho)?;
    let sg_alt = simple_group_bound_alt(w)?;
    let sg_lie = simple_group_bound_lie(w)?;
    let rho_s = ratio_string(rho);
    let alt_desc = match alt.threshold.exact_integer() {
        Some(n) if n.bits() < 200 => n.to_string(),
        _ => match alt.threshold.factorial_of() {
            Some(n) => format!(
                "N! with ln N = {}",
                to_scientific(n.ln(), 20)
            ),
            None => format!("exp({})", to_scientific(alt.threshold.ln(), 20)),
        },
    };
    let narrative = vec![
        format!(
            "Word of length l = {l} in d = {d} variables; groups G whose word map has a fiber of size at least {rho_s}·|G|^d."
        ),
        format!(
            "Excluded as composition factors: alternating groups of order larger than {alt_desc} (attained by the {} term).",
            alt.attained_by
        ),
        format!(
            "Excluded as composition factors: classical simple groups of Lie type with untwisted Lie rank larger than {} (attained by the {} term).",
            lie.threshold.decimal(),
            if lie.attained_by == "const" { "constant" } else { "rho" }
        ),
        "Never excluded: the sporadic simple groups, exceptional groups of Lie type, and classical groups of Lie type of rank at most the threshold.".into(),
        "Never excluded: cyclic groups of prime order; the thresholds only concern nonabelian factors.".into(),
        format!(
            "These thresholds use l for both length and variable count. With d itself: Alt_n satisfies P_w <= |Alt_n|^({}) once n >= 256 l^16 e^(16 M(d,l) d - 2), M(d,l) = {}; classical groups satisfy P_w <= |G|^({}) once the untwisted rank is at least {}.",
            ratio_string(&sg_alt.exponent),
            sg_alt.m,
            ratio_string(&sg_lie.exponent),
            sg_lie.rank_threshold
        ),
    ];
    Ok(ExclusionReport {
        l,
        d,
        rho: rho.clone(),
        m: m_constant(d, l),
        m_prime: m_prime(l),
        alt_threshold: alt,
        lie_rank_threshold: lie,
        simple_group_alt: sg_alt,
        simple_group_lie: sg_lie,
        narrative,
    })
}
