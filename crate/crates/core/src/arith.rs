//! Scalar types and certified sign evaluation.
//!
//! Geometry code is written once against [`Real`] and instantiated with
//! plain `f64` (fast path), [`F64Interval`] (first certified rung) and
//! [`BigInterval`] (MPFR-backed intervals at a chosen precision).

use std::any::Any;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::OnceLock;

use num_traits::{One, Zero};
use rug::float::{Constant, Round};
use rug::ops::AssignRound;
use rug::{Float, Rational};

/// Sign of a real quantity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn of_f64(x: f64) -> Sign {
        if x > 0.0 {
            Sign::Positive
        } else if x < 0.0 {
            Sign::Negative
        } else {
            Sign::Zero
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Negative => Sign::Positive,
            Sign::Zero => Sign::Zero,
            Sign::Positive => Sign::Negative,
        }
    }

    pub fn to_i32(self) -> i32 {
        match self {
            Sign::Negative => -1,
            Sign::Zero => 0,
            Sign::Positive => 1,
        }
    }
}

/// Commutative ring operations plus a (possibly undecided) sign.
pub trait Ring:
    Clone
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    /// Definite sign, or `None` when the value cannot be separated from zero.
    fn sign(&self) -> Option<Sign>;
}

/// Field operations and the elementary functions needed by the disk model.
///
/// `prec` arguments are bit precisions; types with a fixed format ignore them.
pub trait Real: Ring + Div<Output = Self> + fmt::Debug + Send + Sync + 'static {
    fn from_f64(x: f64, prec: u32) -> Self;
    fn from_rational(q: &Rational, prec: u32) -> Self;
    fn from_big(x: &BigInterval) -> Self;
    fn pi(prec: u32) -> Self;
    fn sqrt(&self) -> Self;
    fn sin(&self) -> Self;
    fn cos(&self) -> Self;
    fn atan(&self) -> Self;
    fn tanh(&self) -> Self;
    fn atanh(&self) -> Self;
    fn cosh(&self) -> Self;
    fn acosh(&self) -> Self;
    fn ln(&self) -> Self;
    fn abs(&self) -> Self;
    /// A representative value (midpoint for intervals).
    fn mid(&self) -> f64;
    fn precision(&self) -> u32;

    fn from_i64(k: i64, prec: u32) -> Self {
        Self::from_f64(k as f64, prec)
    }

    fn square(&self) -> Self {
        self.clone() * self.clone()
    }

    /// Certified comparison `self < other`; `None` when undecided.
    fn lt(&self, other: &Self) -> Option<bool> {
        (other.clone() - self.clone()).sign().map(|s| s == Sign::Positive)
    }
}

// ---------------------------------------------------------------- f64

impl Ring for f64 {
    fn sign(&self) -> Option<Sign> {
        if self.is_nan() {
            None
        } else {
            Some(Sign::of_f64(*self))
        }
    }
}

impl Real for f64 {
    fn from_f64(x: f64, _prec: u32) -> Self {
        x
    }
    fn from_rational(q: &Rational, _prec: u32) -> Self {
        q.to_f64()
    }
    fn from_big(x: &BigInterval) -> Self {
        x.mid()
    }
    fn pi(_prec: u32) -> Self {
        std::f64::consts::PI
    }
    fn sqrt(&self) -> Self {
        f64::sqrt(*self)
    }
    fn sin(&self) -> Self {
        f64::sin(*self)
    }
    fn cos(&self) -> Self {
        f64::cos(*self)
    }
    fn atan(&self) -> Self {
        f64::atan(*self)
    }
    fn tanh(&self) -> Self {
        f64::tanh(*self)
    }
    fn atanh(&self) -> Self {
        f64::atanh(*self)
    }
    fn cosh(&self) -> Self {
        f64::cosh(*self)
    }
    fn acosh(&self) -> Self {
        f64::acosh(*self)
    }
    fn ln(&self) -> Self {
        f64::ln(*self)
    }
    fn abs(&self) -> Self {
        f64::abs(*self)
    }
    fn mid(&self) -> f64 {
        *self
    }
    fn precision(&self) -> u32 {
        53
    }
}

// ---------------------------------------------------------------- F64Interval

/// Closed interval of doubles with outward rounding after every operation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct F64Interval {
    lo: f64,
    hi: f64,
}

const LIBM_ULPS: usize = 4;

fn down_n(mut x: f64, n: usize) -> f64 {
    for _ in 0..n {
        x = x.next_down();
    }
    x
}

fn up_n(mut x: f64, n: usize) -> f64 {
    for _ in 0..n {
        x = x.next_up();
    }
    x
}

fn min4(a: f64, b: f64, c: f64, d: f64) -> f64 {
    a.min(b).min(c.min(d))
}

fn max4(a: f64, b: f64, c: f64, d: f64) -> f64 {
    a.max(b).max(c.max(d))
}

impl F64Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        if lo.is_nan() || hi.is_nan() || lo > hi {
            return Self::entire();
        }
        F64Interval { lo, hi }
    }

    pub fn point(x: f64) -> Self {
        F64Interval { lo: x, hi: x }
    }

    pub fn entire() -> Self {
        F64Interval {
            lo: f64::NEG_INFINITY,
            hi: f64::INFINITY,
        }
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    fn bounded(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    fn increasing(&self, f: impl Fn(f64) -> f64) -> Self {
        let lo = f(self.lo);
        let hi = f(self.hi);
        let lo = if lo.is_infinite() { lo } else { down_n(lo, LIBM_ULPS) };
        let hi = if hi.is_infinite() { hi } else { up_n(hi, LIBM_ULPS) };
        F64Interval::new(lo, hi)
    }

    fn lipschitz1(&self, f: impl Fn(f64) -> f64) -> Self {
        if !self.bounded() {
            return F64Interval::new(-1.0, 1.0);
        }
        let m = 0.5 * self.lo + 0.5 * self.hi;
        let r = (m - self.lo).max(self.hi - m).next_up();
        let v = f(m);
        let slack = up_n(r + 4.0 * f64::EPSILON, 2);
        F64Interval::new((v - slack).next_down().max(-1.0), (v + slack).next_up().min(1.0))
    }
}

impl Zero for F64Interval {
    fn zero() -> Self {
        F64Interval::point(0.0)
    }
    fn is_zero(&self) -> bool {
        self.lo == 0.0 && self.hi == 0.0
    }
}

impl One for F64Interval {
    fn one() -> Self {
        F64Interval::point(1.0)
    }
}

impl Add for F64Interval {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        F64Interval::new((self.lo + o.lo).next_down(), (self.hi + o.hi).next_up())
    }
}

impl Sub for F64Interval {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        F64Interval::new((self.lo - o.hi).next_down(), (self.hi - o.lo).next_up())
    }
}

impl Mul for F64Interval {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        if !self.bounded() || !o.bounded() {
            return F64Interval::entire();
        }
        let (a, b, c, d) = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi);
        F64Interval::new(min4(a, b, c, d).next_down(), max4(a, b, c, d).next_up())
    }
}

impl Div for F64Interval {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        if !self.bounded() || !o.bounded() || (o.lo <= 0.0 && o.hi >= 0.0) {
            return F64Interval::entire();
        }
        let (a, b, c, d) = (self.lo / o.lo, self.lo / o.hi, self.hi / o.lo, self.hi / o.hi);
        F64Interval::new(min4(a, b, c, d).next_down(), max4(a, b, c, d).next_up())
    }
}

impl Neg for F64Interval {
    type Output = Self;
    fn neg(self) -> Self {
        F64Interval {
            lo: -self.hi,
            hi: -self.lo,
        }
    }
}

impl Ring for F64Interval {
    fn sign(&self) -> Option<Sign> {
        if self.lo > 0.0 {
            Some(Sign::Positive)
        } else if self.hi < 0.0 {
            Some(Sign::Negative)
        } else if self.lo == 0.0 && self.hi == 0.0 {
            Some(Sign::Zero)
        } else {
            None
        }
    }
}

impl Real for F64Interval {
    fn from_f64(x: f64, _prec: u32) -> Self {
        F64Interval::point(x)
    }
    fn from_rational(q: &Rational, _prec: u32) -> Self {
        let lo = Float::with_val_round(53, q, Round::Down).0.to_f64();
        let hi = Float::with_val_round(53, q, Round::Up).0.to_f64();
        F64Interval::new(lo, hi)
    }
    fn from_big(x: &BigInterval) -> Self {
        F64Interval::new(x.lo.to_f64_round(Round::Down), x.hi.to_f64_round(Round::Up))
    }
    fn pi(_prec: u32) -> Self {
        F64Interval::new(std::f64::consts::PI, std::f64::consts::PI.next_up())
    }
    fn sqrt(&self) -> Self {
        if self.hi < 0.0 {
            return F64Interval::entire();
        }
        let lo = self.lo.max(0.0).sqrt().next_down().max(0.0);
        F64Interval::new(lo, self.hi.sqrt().next_up())
    }
    fn sin(&self) -> Self {
        self.lipschitz1(f64::sin)
    }
    fn cos(&self) -> Self {
        self.lipschitz1(f64::cos)
    }
    fn atan(&self) -> Self {
        self.increasing(f64::atan)
    }
    fn tanh(&self) -> Self {
        let r = self.increasing(f64::tanh);
        F64Interval::new(r.lo.max(-1.0), r.hi.min(1.0))
    }
    fn atanh(&self) -> Self {
        if self.lo <= -1.0 || self.hi >= 1.0 {
            return F64Interval::entire();
        }
        self.increasing(f64::atanh)
    }
    fn cosh(&self) -> Self {
        if self.lo >= 0.0 {
            let r = self.increasing(f64::cosh);
            F64Interval::new(r.lo.max(1.0), r.hi)
        } else if self.hi <= 0.0 {
            (-*self).cosh()
        } else {
            let m = self.lo.abs().max(self.hi);
            F64Interval::new(1.0, up_n(m.cosh(), LIBM_ULPS))
        }
    }
    fn acosh(&self) -> Self {
        if self.lo < 1.0 {
            if self.hi < 1.0 {
                return F64Interval::entire();
            }
            return F64Interval::new(0.0, up_n(self.hi.acosh(), LIBM_ULPS));
        }
        let r = self.increasing(f64::acosh);
        F64Interval::new(r.lo.max(0.0), r.hi)
    }
    fn ln(&self) -> Self {
        if self.lo <= 0.0 {
            return F64Interval::entire();
        }
        self.increasing(f64::ln)
    }
    fn abs(&self) -> Self {
        if self.lo >= 0.0 {
            *self
        } else if self.hi <= 0.0 {
            -*self
        } else {
            F64Interval::new(0.0, self.hi.max(-self.lo))
        }
    }
    fn mid(&self) -> f64 {
        0.5 * self.lo + 0.5 * self.hi
    }
    fn precision(&self) -> u32 {
        53
    }
}

// ---------------------------------------------------------------- BigInterval

/// Interval with MPFR endpoints; results are rounded outward at `prec` bits.
#[derive(Clone)]
pub struct BigInterval {
    lo: Float,
    hi: Float,
    prec: u32,
}

impl fmt::Debug for BigInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:e}, {:e}]@{}", self.lo.to_f64(), self.hi.to_f64(), self.prec)
    }
}

fn fdown<T>(p: u32, v: T) -> Float
where
    Float: AssignRound<T, Round = Round, Ordering = std::cmp::Ordering>,
{
    Float::with_val_round(p, v, Round::Down).0
}

fn fup<T>(p: u32, v: T) -> Float
where
    Float: AssignRound<T, Round = Round, Ordering = std::cmp::Ordering>,
{
    Float::with_val_round(p, v, Round::Up).0
}

impl BigInterval {
    pub fn from_bounds(lo: Float, hi: Float, prec: u32) -> Self {
        if lo.is_nan() || hi.is_nan() || lo > hi {
            return Self::entire(prec);
        }
        BigInterval { lo, hi, prec }
    }

    pub fn entire(prec: u32) -> Self {
        let p = prec.max(2);
        BigInterval {
            lo: Float::with_val(p, f64::NEG_INFINITY),
            hi: Float::with_val(p, f64::INFINITY),
            prec,
        }
    }

    pub fn lo(&self) -> &Float {
        &self.lo
    }

    pub fn hi(&self) -> &Float {
        &self.hi
    }

    pub fn with_prec(mut self, prec: u32) -> Self {
        self.prec = prec;
        self
    }

    fn bounded(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    pub fn contains_zero(&self) -> bool {
        self.lo <= 0 && self.hi >= 0
    }

    /// Interval `[mid - r, mid + r]` around a correctly rounded centre.
    fn around(&self, f: impl Fn(&Float, u32) -> Float) -> Self {
        let p = self.prec;
        if !self.bounded() {
            return BigInterval::from_bounds(Float::with_val(p, -1), Float::with_val(p, 1), p);
        }
        let q = p + 16;
        let m = Float::with_val(q, &self.lo + &self.hi) / 2u32;
        let r1 = fup(q, &m - &self.lo);
        let r2 = fup(q, &self.hi - &m);
        let r = if r1 > r2 { r1 } else { r2 };
        let v = f(&m, q);
        let mut lo = fdown(p, &v - &r);
        let mut hi = fup(p, &v + &r);
        lo.next_down();
        hi.next_up();
        if lo < -1 {
            lo = Float::with_val(p, -1);
        }
        if hi > 1 {
            hi = Float::with_val(p, 1);
        }
        BigInterval::from_bounds(lo, hi, p)
    }

    /// Rounds the midpoint to `bits` significant bits and returns it exactly.
    pub fn mid_rational(&self, bits: u32) -> Rational {
        let m = Float::with_val(self.lo.prec().max(self.hi.prec()) + 2, &self.lo + &self.hi) / 2u32;
        let r = Float::with_val(bits, &m);
        r.to_rational().unwrap_or_default()
    }
}

impl Zero for BigInterval {
    fn zero() -> Self {
        BigInterval {
            lo: Float::new(2),
            hi: Float::new(2),
            prec: 2,
        }
    }
    fn is_zero(&self) -> bool {
        self.lo.is_zero() && self.hi.is_zero()
    }
}

impl One for BigInterval {
    fn one() -> Self {
        BigInterval {
            lo: Float::with_val(2, 1),
            hi: Float::with_val(2, 1),
            prec: 2,
        }
    }
}

impl Add for BigInterval {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let p = self.prec.max(o.prec);
        BigInterval::from_bounds(fdown(p, &self.lo + &o.lo), fup(p, &self.hi + &o.hi), p)
    }
}

impl Sub for BigInterval {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        let p = self.prec.max(o.prec);
        BigInterval::from_bounds(fdown(p, &self.lo - &o.hi), fup(p, &self.hi - &o.lo), p)
    }
}

impl Mul for BigInterval {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let p = self.prec.max(o.prec);
        if !self.bounded() || !o.bounded() {
            return BigInterval::entire(p);
        }
        if self.lo >= 0 && o.lo >= 0 {
            return BigInterval::from_bounds(fdown(p, &self.lo * &o.lo), fup(p, &self.hi * &o.hi), p);
        }
        let pairs = [(&self.lo, &o.lo), (&self.lo, &o.hi), (&self.hi, &o.lo), (&self.hi, &o.hi)];
        let mut lo: Option<Float> = None;
        let mut hi: Option<Float> = None;
        for (x, y) in pairs {
            let d = fdown(p, x * y);
            let u = fup(p, x * y);
            if lo.as_ref().is_none_or(|l| d < *l) {
                lo = Some(d);
            }
            if hi.as_ref().is_none_or(|h| u > *h) {
                hi = Some(u);
            }
        }
        BigInterval::from_bounds(lo.unwrap(), hi.unwrap(), p)
    }
}

impl Div for BigInterval {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        let p = self.prec.max(o.prec);
        if !self.bounded() || !o.bounded() || o.contains_zero() {
            return BigInterval::entire(p);
        }
        let pairs = [(&self.lo, &o.lo), (&self.lo, &o.hi), (&self.hi, &o.lo), (&self.hi, &o.hi)];
        let mut lo: Option<Float> = None;
        let mut hi: Option<Float> = None;
        for (x, y) in pairs {
            let d = fdown(p, x / y);
            let u = fup(p, x / y);
            if lo.as_ref().is_none_or(|l| d < *l) {
                lo = Some(d);
            }
            if hi.as_ref().is_none_or(|h| u > *h) {
                hi = Some(u);
            }
        }
        BigInterval::from_bounds(lo.unwrap(), hi.unwrap(), p)
    }
}

impl Neg for BigInterval {
    type Output = Self;
    fn neg(self) -> Self {
        BigInterval {
            lo: -self.hi,
            hi: -self.lo,
            prec: self.prec,
        }
    }
}

impl Ring for BigInterval {
    fn sign(&self) -> Option<Sign> {
        if self.lo > 0 {
            Some(Sign::Positive)
        } else if self.hi < 0 {
            Some(Sign::Negative)
        } else if self.lo.is_zero() && self.hi.is_zero() {
            Some(Sign::Zero)
        } else {
            None
        }
    }
}

impl Real for BigInterval {
    fn from_f64(x: f64, prec: u32) -> Self {
        let v = Float::with_val(53, x);
        BigInterval {
            lo: v.clone(),
            hi: v,
            prec,
        }
    }
    fn from_rational(q: &Rational, prec: u32) -> Self {
        BigInterval::from_bounds(fdown(prec, q), fup(prec, q), prec)
    }
    fn from_big(x: &BigInterval) -> Self {
        x.clone()
    }
    fn pi(prec: u32) -> Self {
        BigInterval::from_bounds(fdown(prec, Constant::Pi), fup(prec, Constant::Pi), prec)
    }
    fn sqrt(&self) -> Self {
        let p = self.prec;
        if self.hi < 0 || !self.bounded() {
            return BigInterval::entire(p);
        }
        let lo = if self.lo <= 0 { Float::new(p) } else { fdown(p, self.lo.sqrt_ref()) };
        BigInterval::from_bounds(lo, fup(p, self.hi.sqrt_ref()), p)
    }
    fn sin(&self) -> Self {
        self.around(|m, q| Float::with_val(q, m.sin_ref()))
    }
    fn cos(&self) -> Self {
        self.around(|m, q| Float::with_val(q, m.cos_ref()))
    }
    fn atan(&self) -> Self {
        let p = self.prec;
        BigInterval::from_bounds(fdown(p, self.lo.atan_ref()), fup(p, self.hi.atan_ref()), p)
    }
    fn tanh(&self) -> Self {
        let p = self.prec;
        BigInterval::from_bounds(fdown(p, self.lo.tanh_ref()), fup(p, self.hi.tanh_ref()), p)
    }
    fn atanh(&self) -> Self {
        let p = self.prec;
        if self.lo <= -1 || self.hi >= 1 {
            return BigInterval::entire(p);
        }
        BigInterval::from_bounds(fdown(p, self.lo.atanh_ref()), fup(p, self.hi.atanh_ref()), p)
    }
    fn cosh(&self) -> Self {
        let p = self.prec;
        if !self.bounded() {
            return BigInterval::entire(p);
        }
        if self.lo >= 0 {
            BigInterval::from_bounds(fdown(p, self.lo.cosh_ref()), fup(p, self.hi.cosh_ref()), p)
        } else if self.hi <= 0 {
            BigInterval::from_bounds(fdown(p, self.hi.cosh_ref()), fup(p, self.lo.cosh_ref()), p)
        } else {
            let a = Float::with_val(p, self.lo.abs_ref());
            let m = if a > self.hi { a } else { self.hi.clone() };
            BigInterval::from_bounds(Float::with_val(p, 1), fup(p, m.cosh_ref()), p)
        }
    }
    fn acosh(&self) -> Self {
        let p = self.prec;
        if self.hi < 1 || !self.bounded() {
            return BigInterval::entire(p);
        }
        let lo = if self.lo <= 1 { Float::new(p) } else { fdown(p, self.lo.acosh_ref()) };
        BigInterval::from_bounds(lo, fup(p, self.hi.acosh_ref()), p)
    }
    fn ln(&self) -> Self {
        let p = self.prec;
        if self.lo <= 0 || !self.bounded() {
            return BigInterval::entire(p);
        }
        BigInterval::from_bounds(fdown(p, self.lo.ln_ref()), fup(p, self.hi.ln_ref()), p)
    }
    fn abs(&self) -> Self {
        if self.lo >= 0 {
            self.clone()
        } else if self.hi <= 0 {
            -self.clone()
        } else {
            let a = Float::with_val(self.prec.max(2), self.lo.abs_ref());
            let m = if a > self.hi { a } else { self.hi.clone() };
            BigInterval::from_bounds(Float::new(self.prec.max(2)), m, self.prec)
        }
    }
    fn mid(&self) -> f64 {
        if !self.bounded() {
            return f64::NAN;
        }
        let m = Float::with_val(self.prec.max(64) + 2, &self.lo + &self.hi) / 2u32;
        m.to_f64()
    }
    fn precision(&self) -> u32 {
        self.prec
    }
}

// ---------------------------------------------------------------- exact rationals

/// Exact rational scalar; supports the ring-only predicate formulas.
#[derive(Clone, Debug, PartialEq)]
pub struct Exact(pub Rational);

impl Zero for Exact {
    fn zero() -> Self {
        Exact(Rational::new())
    }
    fn is_zero(&self) -> bool {
        self.0.cmp0() == std::cmp::Ordering::Equal
    }
}

impl One for Exact {
    fn one() -> Self {
        Exact(Rational::from(1))
    }
}

impl Add for Exact {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Exact(self.0 + o.0)
    }
}

impl Sub for Exact {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Exact(self.0 - o.0)
    }
}

impl Mul for Exact {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Exact(self.0 * o.0)
    }
}

impl Neg for Exact {
    type Output = Self;
    fn neg(self) -> Self {
        Exact(-self.0)
    }
}

impl Ring for Exact {
    fn sign(&self) -> Option<Sign> {
        Some(match self.0.cmp0() {
            std::cmp::Ordering::Less => Sign::Negative,
            std::cmp::Ordering::Equal => Sign::Zero,
            std::cmp::Ordering::Greater => Sign::Positive,
        })
    }
}

// ---------------------------------------------------------------- ladder

/// First multiple-precision rung; later rungs double it.
pub const FIRST_BIG_BITS: u32 = 106;

/// Raised when a sign is still undecided at the precision cap.
#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
#[error("sign undecided at the {bits}-bit precision cap")]
pub struct PrecisionExhausted {
    pub bits: u32,
}

/// Precision cap for genus `g`: `512·g` bits unless `HYPDT_PRECISION_BITS` is set.
pub fn precision_cap(g: u32) -> u32 {
    static OVERRIDE: OnceLock<Option<u32>> = OnceLock::new();
    let o = OVERRIDE.get_or_init(|| {
        std::env::var("HYPDT_PRECISION_BITS")
            .ok()
            .and_then(|s| s.trim().parse::<u32>().ok())
            .filter(|&b| b >= 64)
    });
    o.unwrap_or(512 * g)
}

/// Bits kept when a constructed point is rounded to a rational.
pub fn storage_bits(g: u32) -> u32 {
    (precision_cap(g) / 2).max(64)
}

/// The multiple-precision rungs up to and including `cap`.
pub fn rungs(cap: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut p = FIRST_BIG_BITS;
    while p < cap {
        out.push(p);
        p *= 2;
    }
    out.push(cap);
    out
}

/// An expression whose sign is wanted; evaluated at any scalar type.
pub trait SignExpr {
    fn eval<T: Real>(&self, prec: u32) -> T;
}

static RESOLVED_FAST: AtomicU64 = AtomicU64::new(0);
static RESOLVED_BIG: AtomicU64 = AtomicU64::new(0);
static EXHAUSTED: AtomicU64 = AtomicU64::new(0);

/// Counters of where signs were decided.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct FilterStats {
    pub fast: u64,
    pub escalated: u64,
    pub exhausted: u64,
}

pub fn filter_stats() -> FilterStats {
    FilterStats {
        fast: RESOLVED_FAST.load(Ordering::Relaxed),
        escalated: RESOLVED_BIG.load(Ordering::Relaxed),
        exhausted: EXHAUSTED.load(Ordering::Relaxed),
    }
}

/// Sign via the escalation ladder: f64 intervals, then MPFR intervals up to `cap`.
pub fn certified_sign<E: SignExpr>(e: &E, cap: u32) -> Result<Sign, PrecisionExhausted> {
    if let Some(s) = e.eval::<F64Interval>(53).sign() {
        RESOLVED_FAST.fetch_add(1, Ordering::Relaxed);
        return Ok(s);
    }
    for p in rungs(cap) {
        if let Some(s) = e.eval::<BigInterval>(p).sign() {
            RESOLVED_BIG.fetch_add(1, Ordering::Relaxed);
            return Ok(s);
        }
    }
    EXHAUSTED.fetch_add(1, Ordering::Relaxed);
    Err(PrecisionExhausted { bits: cap })
}

/// Sign from a single evaluation at `bits`, with no filter in front.
pub fn sign_at<E: SignExpr>(e: &E, bits: u32) -> Option<Sign> {
    e.eval::<BigInterval>(bits).sign()
}

/// Uncertified sign from plain double evaluation.
pub fn fast_sign<E: SignExpr>(e: &E) -> Sign {
    let v: f64 = e.eval(53);
    Sign::of_f64(v)
}

/// How predicates are evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Plain doubles, no certification.
    Fast,
    /// Certified ladder; undecided at the cap is an error.
    Certified { cap: u32 },
    /// Certified ladder; undecided at the cap counts as zero.
    Tolerant { cap: u32 },
}

impl Mode {
    pub fn certified(g: u32) -> Mode {
        Mode::Certified { cap: precision_cap(g) }
    }

    pub fn sign<E: SignExpr>(&self, e: &E) -> Result<Sign, PrecisionExhausted> {
        match *self {
            Mode::Fast => Ok(fast_sign(e)),
            Mode::Certified { cap } => certified_sign(e, cap),
            Mode::Tolerant { cap } => Ok(certified_sign(e, cap).unwrap_or(Sign::Zero)),
        }
    }
}

/// Downcasts a value to a concrete scalar type when the types agree.
pub fn cast_ref<A: 'static, B: 'static>(a: &A) -> Option<&B> {
    (a as &dyn Any).downcast_ref::<B>()
}
