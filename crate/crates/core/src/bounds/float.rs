//! Binary floating point with big-integer exponents and outward-rounded
//! intervals, plus rigorous `ln`, `exp` and the constants they need.
//!
//! Every interval returned here contains the exact real value; series are
//! summed in fixed point with an explicit bound on the accumulated error.

use std::cmp::Ordering;
use std::sync::Mutex;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dir {
    Down,
    Up,
}

/// `man · 2^exp`. Equality and ordering are by value.
#[derive(Debug, Clone)]
pub struct Float {
    man: BigInt,
    exp: BigInt,
}

fn bits(x: &BigInt) -> u64 {
    x.bits()
}

fn small(x: &BigInt) -> usize {
    x.to_usize().expect("shift amount fits in usize")
}

/// `floor(x / 2^s)` or `ceil(x / 2^s)`.
fn shr_dir(x: &BigInt, s: usize, dir: Dir) -> BigInt {
    if s == 0 {
        return x.clone();
    }
    let d = BigInt::one() << s;
    match dir {
        Dir::Down => x.div_floor(&d),
        Dir::Up => -((-x).div_floor(&d)),
    }
}

fn div_dir(a: &BigInt, b: &BigInt, dir: Dir) -> BigInt {
    match dir {
        Dir::Down => a.div_floor(b),
        Dir::Up => -((-a).div_floor(b)),
    }
}

impl Float {
    pub fn zero() -> Float {
        Float {
            man: BigInt::zero(),
            exp: BigInt::zero(),
        }
    }

    pub fn from_int(n: impl Into<BigInt>) -> Float {
        Float {
            man: n.into(),
            exp: BigInt::zero(),
        }
    }

    /// `man · 2^exp` exactly.
    pub fn from_parts(man: BigInt, exp: impl Into<BigInt>) -> Float {
        Float {
            man,
            exp: exp.into(),
        }
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.man
    }

    pub fn exponent(&self) -> &BigInt {
        &self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.man.is_zero()
    }

    pub fn sign(&self) -> Sign {
        self.man.sign()
    }

    /// `t` with `2^(t-1) <= |x| < 2^t`; meaningless for zero.
    pub fn top(&self) -> BigInt {
        &self.exp + BigInt::from(bits(&self.man))
    }

    pub fn neg(&self) -> Float {
        Float {
            man: -&self.man,
            exp: self.exp.clone(),
        }
    }

    pub fn abs(&self) -> Float {
        Float {
            man: self.man.abs(),
            exp: self.exp.clone(),
        }
    }

    /// Rounds to at most `prec` mantissa bits in direction `dir`.
    pub fn round(&self, prec: u64, dir: Dir) -> Float {
        let b = bits(&self.man);
        if b <= prec {
            return self.clone();
        }
        let s = (b - prec) as usize;
        Float {
            man: shr_dir(&self.man, s, dir),
            exp: &self.exp + BigInt::from(s),
        }
    }

    /// Same value with exactly `n` mantissa bits if it has fewer.
    fn widen(&self, n: u64) -> Float {
        let b = bits(&self.man);
        if b >= n || self.is_zero() {
            return self.clone();
        }
        let s = (n - b) as usize;
        Float {
            man: &self.man << s,
            exp: &self.exp - BigInt::from(s),
        }
    }

    fn align(a: &Float, b: &Float) -> (BigInt, BigInt, BigInt) {
        let e = a.exp.clone().min(b.exp.clone());
        let am = &a.man << small(&(&a.exp - &e));
        let bm = &b.man << small(&(&b.exp - &e));
        (am, bm, e)
    }

    pub fn add(&self, other: &Float, prec: u64, dir: Dir) -> Float {
        if self.is_zero() {
            return other.round(prec, dir);
        }
        if other.is_zero() {
            return self.round(prec, dir);
        }
        let (big, little) = if self.top() >= other.top() {
            (self, other)
        } else {
            (other, self)
        };
        let gap = big.top() - little.top();
        if gap > BigInt::from(prec + 4) {
            // |little| is below one unit in the last place of big at prec + 4 bits
            let r = big.round(prec + 4, dir).widen(prec + 4);
            let nudge = match (dir, little.sign()) {
                (Dir::Down, Sign::Minus) => -1,
                (Dir::Up, Sign::Plus) => 1,
                _ => 0,
            };
            let r = Float {
                man: r.man + nudge,
                exp: r.exp,
            };
            return r.round(prec, dir);
        }
        let (am, bm, e) = Float::align(self, other);
        Float { man: am + bm, exp: e }.round(prec, dir)
    }

    pub fn sub(&self, other: &Float, prec: u64, dir: Dir) -> Float {
        self.add(&other.neg(), prec, dir)
    }

    pub fn mul(&self, other: &Float, prec: u64, dir: Dir) -> Float {
        Float {
            man: &self.man * &other.man,
            exp: &self.exp + &other.exp,
        }
        .round(prec, dir)
    }

    pub fn div(&self, other: &Float, prec: u64, dir: Dir) -> Float {
        assert!(!other.is_zero(), "division by zero");
        if self.is_zero() {
            return Float::zero();
        }
        let shift = (prec + 2 + bits(&other.man)).saturating_sub(bits(&self.man)) as usize;
        let q = div_dir(&(&self.man << shift), &other.man, dir);
        Float {
            man: q,
            exp: &self.exp - &other.exp - BigInt::from(shift),
        }
        .round(prec, dir)
    }

    pub fn sqrt(&self, prec: u64, dir: Dir) -> Float {
        assert!(self.sign() != Sign::Minus, "square root of a negative number");
        if self.is_zero() {
            return Float::zero();
        }
        let mut s = (2 * prec + 4).saturating_sub(bits(&self.man));
        if (&self.exp - BigInt::from(s)).is_odd() {
            s += 1;
        }
        let m = &self.man << s as usize;
        let mut r = m.sqrt();
        if dir == Dir::Up && &r * &r != m {
            r += 1;
        }
        Float {
            man: r,
            exp: (&self.exp - BigInt::from(s)) / 2,
        }
        .round(prec, dir)
    }

    pub fn from_ratio(r: &BigRational, prec: u64, dir: Dir) -> Float {
        Float::from_int(r.numer().clone()).div(&Float::from_int(r.denom().clone()), prec, dir)
    }

    /// Exact value as a rational; only for moderate exponents.
    pub fn to_ratio(&self) -> BigRational {
        if self.exp.sign() == Sign::Minus {
            BigRational::new(self.man.clone(), BigInt::one() << small(&-&self.exp))
        } else {
            BigRational::from_integer(&self.man << small(&self.exp))
        }
    }

    /// `floor(x)`; only for moderate exponents.
    pub fn floor(&self) -> BigInt {
        if self.exp.sign() == Sign::Minus {
            shr_dir(&self.man, small(&-&self.exp), Dir::Down)
        } else {
            &self.man << small(&self.exp)
        }
    }

    /// `floor(x · 2^p)` or `ceil(x · 2^p)`, with `p` possibly negative.
    pub fn to_fixed(&self, p: &BigInt, dir: Dir) -> BigInt {
        let e = &self.exp + p;
        if e.sign() == Sign::Minus {
            shr_dir(&self.man, small(&-e), dir)
        } else {
            &self.man << small(&e)
        }
    }

    pub fn to_f64(&self) -> f64 {
        let b = bits(&self.man) as i64;
        let keep = b.min(60);
        let m = shr_dir(&self.man, (b - keep) as usize, Dir::Down).to_f64().unwrap_or(0.0);
        let e = self.exp.to_i64().unwrap_or(if self.exp.is_negative() { i64::MIN / 2 } else { i64::MAX / 2 })
            + (b - keep);
        m * 2f64.powi(e.clamp(-2000, 2000) as i32)
    }
}

impl PartialEq for Float {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Float {}

impl PartialOrd for Float {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Float {
    fn cmp(&self, other: &Self) -> Ordering {
        let (sa, sb) = (self.sign(), other.sign());
        let rank = |s: Sign| match s {
            Sign::Minus => 0,
            Sign::NoSign => 1,
            Sign::Plus => 2,
        };
        if rank(sa) != rank(sb) {
            return rank(sa).cmp(&rank(sb));
        }
        if sa == Sign::NoSign {
            return Ordering::Equal;
        }
        let by_top = self.top().cmp(&other.top());
        if by_top != Ordering::Equal {
            return if sa == Sign::Plus { by_top } else { by_top.reverse() };
        }
        let (am, bm, _) = Float::align(self, other);
        am.cmp(&bm)
    }
}

/// A closed interval `[lo, hi]` of floats.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    pub lo: Float,
    pub hi: Float,
}

impl Interval {
    pub fn point(x: Float) -> Interval {
        Interval { lo: x.clone(), hi: x }
    }

    pub fn from_int(n: impl Into<BigInt>) -> Interval {
        Interval::point(Float::from_int(n))
    }

    pub fn from_ratio(r: &BigRational, prec: u64) -> Interval {
        Interval {
            lo: Float::from_ratio(r, prec, Dir::Down),
            hi: Float::from_ratio(r, prec, Dir::Up),
        }
    }

    pub fn zero() -> Interval {
        Interval::point(Float::zero())
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn add(&self, o: &Interval, prec: u64) -> Interval {
        Interval {
            lo: self.lo.add(&o.lo, prec, Dir::Down),
            hi: self.hi.add(&o.hi, prec, Dir::Up),
        }
    }

    pub fn sub(&self, o: &Interval, prec: u64) -> Interval {
        Interval {
            lo: self.lo.sub(&o.hi, prec, Dir::Down),
            hi: self.hi.sub(&o.lo, prec, Dir::Up),
        }
    }

    pub fn neg(&self) -> Interval {
        Interval {
            lo: self.hi.neg(),
            hi: self.lo.neg(),
        }
    }

    pub fn mul(&self, o: &Interval, prec: u64) -> Interval {
        let cands = [(&self.lo, &o.lo), (&self.lo, &o.hi), (&self.hi, &o.lo), (&self.hi, &o.hi)];
        let lo = cands
            .iter()
            .map(|(a, b)| a.mul(b, prec, Dir::Down))
            .min()
            .unwrap();
        let hi = cands
            .iter()
            .map(|(a, b)| a.mul(b, prec, Dir::Up))
            .max()
            .unwrap();
        Interval { lo, hi }
    }

    /// Requires `o` not to contain zero.
    pub fn div(&self, o: &Interval, prec: u64) -> Interval {
        assert!(
            o.lo.sign() == o.hi.sign() && !o.lo.is_zero(),
            "divisor interval contains zero"
        );
        let cands = [(&self.lo, &o.lo), (&self.lo, &o.hi), (&self.hi, &o.lo), (&self.hi, &o.hi)];
        let lo = cands
            .iter()
            .map(|(a, b)| a.div(b, prec, Dir::Down))
            .min()
            .unwrap();
        let hi = cands
            .iter()
            .map(|(a, b)| a.div(b, prec, Dir::Up))
            .max()
            .unwrap();
        Interval { lo, hi }
    }

    /// Lower end clamped at zero.
    pub fn sqrt(&self, prec: u64) -> Interval {
        let lo = if self.lo.sign() == Sign::Minus {
            Float::zero()
        } else {
            self.lo.sqrt(prec, Dir::Down)
        };
        Interval {
            lo,
            hi: self.hi.sqrt(prec, Dir::Up),
        }
    }

    pub fn ln(&self, prec: u64) -> Interval {
        Interval {
            lo: ln_float(&self.lo, prec).lo,
            hi: ln_float(&self.hi, prec).hi,
        }
    }

    pub fn exp(&self, prec: u64) -> Interval {
        Interval {
            lo: exp_float(&self.lo, prec).lo,
            hi: exp_float(&self.hi, prec).hi,
        }
    }

    pub fn max(&self, o: &Interval) -> Interval {
        Interval {
            lo: self.lo.clone().max(o.lo.clone()),
            hi: self.hi.clone().max(o.hi.clone()),
        }
    }

    /// `Some(floor)` when both ends share it.
    pub fn floor(&self) -> Option<BigInt> {
        let (a, b) = (self.lo.floor(), self.hi.floor());
        (a == b).then_some(a)
    }

    /// `Some(ceil)` when both ends share it.
    pub fn ceil(&self) -> Option<BigInt> {
        let c = |x: &Float| -(x.neg().floor());
        let (a, b) = (c(&self.lo), c(&self.hi));
        (a == b).then_some(a)
    }

    /// Strictly below / above / overlapping.
    pub fn compare(&self, o: &Interval) -> Option<Ordering> {
        if self.hi < o.lo {
            Some(Ordering::Less)
        } else if self.lo > o.hi {
            Some(Ordering::Greater)
        } else if self.is_point() && o.is_point() && self.lo == o.lo {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    pub fn contains(&self, x: &Float) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn mid(&self) -> Float {
        let s = Float::align(&self.lo, &self.hi);
        Float {
            man: s.0 + s.1,
            exp: s.2 - 1,
        }
    }

    /// `(hi - lo) / |lo|` as an `f64`, for diagnostics and tests.
    pub fn relative_width(&self) -> f64 {
        if self.lo.is_zero() {
            return self.hi.to_f64().abs();
        }
        let w = self.hi.sub(&self.lo, 64, Dir::Up);
        w.div(&self.lo.abs(), 64, Dir::Up).to_f64()
    }
}

// ---------------------------------------------------------------------------
// constants

struct Cached {
    scale: u64,
    value: BigInt,
}

static LN2: Mutex<Option<Cached>> = Mutex::new(None);
static PI: Mutex<Option<Cached>> = Mutex::new(None);

/// Guard bits for a series of about `scale / 2` terms.
fn guard(scale: u64) -> u64 {
    24 + 64 - scale.leading_zeros() as u64
}

/// `ln 2` in fixed point at scale `2^p`; error at most 3 units.
pub fn ln2_fixed(p: u64) -> BigInt {
    cached(&LN2, p, |q| {
        // ln 2 = 2 atanh(1/3) = 2 sum 1 / ((2j+1) 3^(2j+1))
        let g = guard(q);
        let one = BigInt::one() << (q + g) as usize;
        let mut pow: BigInt = &one / 3u32;
        let mut sum = BigInt::zero();
        let mut j = 0u64;
        while !pow.is_zero() {
            sum += &pow / (2 * j + 1);
            pow /= 9;
            j += 1;
        }
        shr_dir(&(sum * 2), g as usize, Dir::Down)
    })
}

/// `π` in fixed point at scale `2^p`; error at most 3 units.
pub fn pi_fixed(p: u64) -> BigInt {
    cached(&PI, p, |q| {
        let g = guard(q);
        let one = BigInt::one() << (q + g) as usize;
        let atan_inv = |n: u64| {
            // atan(1/n) = sum (-1)^j / ((2j+1) n^(2j+1))
            let n2 = BigInt::from(n * n);
            let mut pow: BigInt = &one / n;
            let mut sum = BigInt::zero();
            let mut j = 0u64;
            while !pow.is_zero() {
                let t = &pow / (2 * j + 1);
                if j.is_multiple_of(2) {
                    sum += t;
                } else {
                    sum -= t;
                }
                pow /= &n2;
                j += 1;
            }
            sum
        };
        let v = atan_inv(5) * 16 - atan_inv(239) * 4;
        shr_dir(&v, g as usize, Dir::Down)
    })
}

fn cached(slot: &Mutex<Option<Cached>>, p: u64, compute: impl Fn(u64) -> BigInt) -> BigInt {
    let mut guard = slot.lock().unwrap_or_else(|e| e.into_inner());
    if let Some(c) = guard.as_ref() {
        if c.scale >= p {
            return shr_dir(&c.value, (c.scale - p) as usize, Dir::Down);
        }
    }
    let scale = p.max(256).next_power_of_two();
    let value = compute(scale);
    let out = shr_dir(&value, (scale - p) as usize, Dir::Down);
    *guard = Some(Cached { scale, value });
    out
}

/// Error allowance, in units of the last place, for the cached constants
/// (series error plus one truncation when rescaling).
const CONST_ERR: u64 = 4;

fn fixed_interval(center: &BigInt, err: &BigInt, p: &BigInt, prec: u64) -> Interval {
    Interval {
        lo: Float::from_parts(center - err, -p).round(prec, Dir::Down),
        hi: Float::from_parts(center + err, -p).round(prec, Dir::Up),
    }
}

pub fn ln2_interval(prec: u64) -> Interval {
    let p = prec + 16;
    fixed_interval(&ln2_fixed(p), &BigInt::from(CONST_ERR), &BigInt::from(p), prec)
}

pub fn pi_interval(prec: u64) -> Interval {
    let p = prec + 16;
    fixed_interval(&pi_fixed(p), &BigInt::from(CONST_ERR), &BigInt::from(p), prec)
}

// ---------------------------------------------------------------------------
// ln

/// `ln x` given `x = f · 2^k` with `f` in `[3/4, 3/2)` supplied in fixed
/// point by `f_fixed(P) = floor(f · 2^P)`, and `extra` extra bits of
/// absolute precision to spend when `k = 0` and `f` is close to one.
fn ln_core(k: &BigInt, f_fixed: &dyn Fn(u64) -> BigInt, extra: u64, prec: u64) -> Interval {
    let p = prec + 32 + extra + guard(prec + extra);
    let s = BigInt::one() << p as usize;
    let f = f_fixed(p);
    // t = (f - 1) / (f + 1), |t| <= 1/5
    let t = div_dir(&((&f - &s) << p as usize), &(&f + &s), Dir::Down);
    let t2 = shr_dir(&(&t * &t), p as usize, Dir::Down);
    let mut pow = t.clone();
    let mut sum = BigInt::zero();
    let mut terms = 0u64;
    let mut j = 0u64;
    while !pow.is_zero() {
        // truncating division so that negative terms also reach zero
        sum += &pow / BigInt::from(2 * j + 1);
        pow = (&pow * &t2) / &s;
        j += 1;
        terms += 1;
    }
    let mut total = sum * 2;
    // truncations in f, t, t^2, each power and each quotient, doubled
    let mut err = BigInt::from(8 * terms + 32);
    if !k.is_zero() {
        let kb = bits(k);
        let q = p + kb + 4;
        let l2 = ln2_fixed(q);
        total += shr_dir(&(k * l2), (q - p) as usize, Dir::Down);
        err += CONST_ERR + 2;
    }
    fixed_interval(&total, &err, &BigInt::from(p), prec)
}

/// `(k, extra)` for `x = f · 2^k` with `f` in `[3/4, 3/2)`.
fn ln_float_parts(x: &Float) -> (BigInt, u64) {
    let mut k = x.top();
    // x / 2^top is in [1/2, 1); move to [3/4, 3/2)
    let m = x.man.abs();
    let b = bits(&m) as usize;
    if b >= 2 && m < (BigInt::from(3) << (b - 2)) {
        k -= 1;
    } else if b < 2 {
        // mantissa 1: x = 2^(top-1), f = 1 after shifting
        k -= 1;
    }
    let extra = if k.is_zero() {
        let d = x.sub(&Float::from_int(1), u64::MAX / 4, Dir::Down);
        if d.is_zero() {
            0
        } else {
            (-d.top()).to_u64().unwrap_or(0)
        }
    } else {
        0
    };
    (k, extra)
}

/// `ln x` for `x > 0`.
pub fn ln_float(x: &Float, prec: u64) -> Interval {
    assert!(x.sign() == Sign::Plus, "ln of a non-positive number");
    if x == &Float::from_int(1) {
        return Interval::zero();
    }
    let (k, extra) = ln_float_parts(x);
    let f_fixed = |p: u64| x.abs().to_fixed(&(BigInt::from(p) - &k), Dir::Down);
    ln_core(&k, &f_fixed, extra, prec)
}

/// `ln r` for a positive rational, without rounding `r` first.
pub fn ln_rational(r: &BigRational, prec: u64) -> Interval {
    assert!(r.is_positive(), "ln of a non-positive number");
    if r.is_one() {
        return Interval::zero();
    }
    let (a, b) = (r.numer(), r.denom());
    // 2^(k-1) <= a/b < 2^(k+1) with k = bits(a) - bits(b)
    let mut k = BigInt::from(bits(a)) - BigInt::from(bits(b));
    let scaled = |k: &BigInt, p: u64| -> BigInt {
        let e = BigInt::from(p) - k;
        if e.sign() == Sign::Minus {
            div_dir(a, &(b << small(&-e)), Dir::Down)
        } else {
            div_dir(&(a << small(&e)), b, Dir::Down)
        }
    };
    // normalise f = r / 2^k into [3/4, 3/2) using a coarse fixed value
    let probe = |k: &BigInt| scaled(k, 8);
    while probe(&k) < BigInt::from(192) {
        k -= 1;
    }
    while probe(&k) >= BigInt::from(384) {
        k += 1;
    }
    let extra = if k.is_zero() {
        let d = (r - BigRational::one()).abs();
        (bits(d.denom()) as i64 - bits(d.numer()) as i64 + 1).max(0) as u64
    } else {
        0
    };
    let f_fixed = |p: u64| scaled(&k, p);
    ln_core(&k, &f_fixed, extra, prec)
}

pub fn ln_int(n: &BigInt, prec: u64) -> Interval {
    ln_float(&Float::from_int(n.clone()), prec)
}

// ---------------------------------------------------------------------------
// exp

/// `exp x` as an interval.
pub fn exp_float(x: &Float, prec: u64) -> Interval {
    if x.is_zero() {
        return Interval::from_int(1);
    }
    let tb = x.top().to_i64().unwrap_or(i64::MAX).max(0) as u64;
    let p = prec + 32 + tb + guard(prec + tb);
    let pb = BigInt::from(p);
    let s = BigInt::one() << p as usize;
    let xf = x.to_fixed(&pb, Dir::Down);
    let x_err = BigInt::one();
    // k = round(x / ln 2) with a coarse ln 2 is enough: only |r| < 1 matters
    let l0 = ln2_fixed(p);
    let k = div_dir(&(&xf * 2 + &l0), &(&l0 * 2), Dir::Down);
    let q = p + bits(&k) + 4;
    let kl = shr_dir(&(&k * ln2_fixed(q)), (q - p) as usize, Dir::Down);
    let r = &xf - kl;
    let r_err = x_err + CONST_ERR + 2;
    // Taylor series of exp(r), |r| < 1
    let mut term = s.clone();
    let mut sum = s.clone();
    let mut n = 1u64;
    loop {
        term = (&term * &r) / (BigInt::from(n) << p as usize);
        if term.is_zero() {
            break;
        }
        sum += &term;
        n += 1;
    }
    // exp(r ± δ) = exp(r)(1 ± 2δ) for small δ, exp(r) < 3
    let err = BigInt::from(2 * n + 8) + r_err * 6;
    let lo = Float::from_parts(&sum - &err, &k - &pb).round(prec, Dir::Down);
    let hi = Float::from_parts(&sum + &err, &k - &pb).round(prec, Dir::Up);
    Interval { lo, hi }
}

pub fn exp_interval(x: &Interval, prec: u64) -> Interval {
    x.exp(prec)
}

// ---------------------------------------------------------------------------
// decimal output

/// `d.ddd…e±E` with `digits` significant digits, from the midpoint.
pub fn to_scientific(x: &Interval, digits: usize) -> String {
    let m = x.mid();
    if m.is_zero() {
        return "0".into();
    }
    let sign = if m.sign() == Sign::Minus { "-" } else { "" };
    let a = m.abs();
    let prec = (digits as u64) * 4 + 64 + bits(&a.top()) * 2;
    let ln_a = ln_float(&a, prec);
    let ln10 = ln_int(&BigInt::from(10), prec + bits(&a.top()));
    let y = ln_a.div(&ln10, prec);
    let mut e10 = y.mid().floor();
    for _ in 0..4 {
        // mantissa = a / 10^(e10 - digits + 1)
        let shift = &e10 - BigInt::from(digits as i64 - 1);
        let z = ln_a.sub(&Interval::from_int(shift.clone()).mul(&ln10, prec), prec);
        let v = z.exp(prec).mid();
        let n = v.add(&Float::from_parts(BigInt::one(), -1), prec, Dir::Down).floor();
        let s = n.to_string();
        if s.len() > digits {
            e10 += 1;
            continue;
        }
        if s.len() < digits {
            e10 -= 1;
            continue;
        }
        let (head, tail) = s.split_at(1);
        let tail = tail.trim_end_matches('0');
        let body = if tail.is_empty() {
            head.to_string()
        } else {
            format!("{head}.{tail}")
        };
        let exp_sign = if e10.is_negative() { "-" } else { "+" };
        return format!("{sign}{body}e{exp_sign}{}", e10.abs());
    }
    unreachable!("decimal exponent did not settle")
}
