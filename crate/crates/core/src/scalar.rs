//! Exact values `q·√d·π^(e/2)` and the exact-or-float [`Scalar`].

use std::fmt;
use std::ops::{Div, Mul, Neg};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// `q · √radicand · π^(pi_half/2)`, with `radicand` squarefree.
///
/// Sums are only defined inside one radical class `(radicand, pi_half)`;
/// zero belongs to every class.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExactValue {
    q: BigRational,
    radicand: u64,
    pi_half: i32,
}

fn squarefree_split(mut n: u64) -> (u64, u64) {
    // n = f² · d with d squarefree; returns (f, d).  Trial division up to the
    // cube root leaves a cofactor with at most two prime factors.
    const CBRT_MAX: u64 = 2_642_246;
    let mut f = 1u64;
    let mut d = 1u64;
    let mut p = 2u64;
    while p <= CBRT_MAX && p * p <= n {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        for _ in 0..e / 2 {
            f *= p;
        }
        if e % 2 == 1 {
            d *= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    let r = n.isqrt();
    if n > 1 && r * r == n {
        return (f * r, d);
    }
    (f, d * n)
}

impl ExactValue {
    pub fn new(q: BigRational, radicand: u64, pi_half: i32) -> Result<Self> {
        if radicand == 0 {
            return Ok(Self::zero());
        }
        let (f, d) = squarefree_split(radicand);
        Ok(Self::normalized(q * BigInt::from(f), d, pi_half))
    }

    fn normalized(q: BigRational, radicand: u64, pi_half: i32) -> Self {
        if q.is_zero() {
            Self::zero()
        } else {
            ExactValue { q, radicand, pi_half }
        }
    }

    pub fn zero() -> Self {
        ExactValue { q: BigRational::zero(), radicand: 1, pi_half: 0 }
    }

    pub fn one() -> Self {
        Self::rational(BigRational::one())
    }

    pub fn rational(q: BigRational) -> Self {
        Self::normalized(q, 1, 0)
    }

    pub fn int(n: i64) -> Self {
        Self::rational(BigRational::from_integer(n.into()))
    }

    pub fn ratio(p: i64, q: i64) -> Self {
        Self::rational(BigRational::new(p.into(), q.into()))
    }

    /// `q·√π`.
    pub fn with_sqrt_pi(q: BigRational) -> Self {
        Self::normalized(q, 1, 1)
    }

    pub fn sqrt_pi() -> Self {
        Self::with_sqrt_pi(BigRational::one())
    }

    pub fn q(&self) -> &BigRational {
        &self.q
    }

    pub fn radicand(&self) -> u64 {
        self.radicand
    }

    /// Exponent `e` of `π^(e/2)`.
    pub fn pi_half_exp(&self) -> i32 {
        self.pi_half
    }

    pub fn class(&self) -> (u64, i32) {
        (self.radicand, self.pi_half)
    }

    pub fn is_zero(&self) -> bool {
        self.q.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.radicand == 1 && self.pi_half == 0
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        self.is_rational().then_some(&self.q)
    }

    pub fn signum(&self) -> i32 {
        if self.q.is_zero() {
            0
        } else if self.q.is_negative() {
            -1
        } else {
            1
        }
    }

    pub fn to_f64(&self) -> f64 {
        let mut v = self.q.to_f64().unwrap_or(f64::NAN);
        if self.radicand != 1 {
            v *= (self.radicand as f64).sqrt();
        }
        if self.pi_half != 0 {
            v *= std::f64::consts::PI.powf(self.pi_half as f64 / 2.0);
        }
        v
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.class() != other.class() {
            return Err(Error::MixedRadical(self.to_string(), other.to_string()));
        }
        Ok(Self::normalized(&self.q + &other.q, self.radicand, self.pi_half))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&-other)
    }

    /// `None` when the combined radicand overflows `u64`.
    pub fn checked_mul(&self, other: &Self) -> Option<Self> {
        if self.is_zero() || other.is_zero() {
            return Some(Self::zero());
        }
        let g = self.radicand.gcd(&other.radicand);
        let d = (self.radicand / g).checked_mul(other.radicand / g)?;
        let pi_half = self.pi_half.checked_add(other.pi_half)?;
        Some(Self::normalized(&self.q * &other.q * BigInt::from(g), d, pi_half))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Option<Self>> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        // 1/(q√d) = √d/(q·d)
        let inv = Self::normalized(
            BigRational::one() / (&other.q * BigInt::from(other.radicand)),
            other.radicand,
            -other.pi_half,
        );
        Ok(self.checked_mul(&inv))
    }

    pub fn pow_i(&self, n: i32) -> Result<Option<Self>> {
        if n < 0 {
            let p = match self.pow_i(-n)? {
                Some(p) => p,
                None => return Ok(None),
            };
            return Self::one().checked_div(&p);
        }
        let mut acc = Self::one();
        for _ in 0..n {
            acc = match acc.checked_mul(self) {
                Some(a) => a,
                None => return Ok(None),
            };
        }
        Ok(Some(acc))
    }
}

impl Neg for &ExactValue {
    type Output = ExactValue;
    fn neg(self) -> ExactValue {
        ExactValue { q: -&self.q, radicand: self.radicand, pi_half: self.pi_half }
    }
}

impl Neg for ExactValue {
    type Output = ExactValue;
    fn neg(self) -> ExactValue {
        -&self
    }
}

fn fmt_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for ExactValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut factors = Vec::new();
        if self.radicand != 1 {
            factors.push(format!("sqrt({})", self.radicand));
        }
        match self.pi_half {
            0 => {}
            1 => factors.push("sqrt(pi)".into()),
            2 => factors.push("pi".into()),
            e if e % 2 == 0 => factors.push(format!("pi^{}", e / 2)),
            e => factors.push(format!("pi^({e}/2)")),
        }
        if factors.is_empty() {
            return f.write_str(&fmt_rational(&self.q));
        }
        let tail = factors.join("*");
        if self.q.is_one() {
            write!(f, "{tail}")
        } else if (-&self.q).is_one() {
            write!(f, "-{tail}")
        } else {
            write!(f, "{}*{tail}", fmt_rational(&self.q))
        }
    }
}

fn parse_bigint(s: &str) -> Result<BigInt> {
    let digits = s.strip_prefix('-').unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::Parse(format!("not an integer: {s:?}")));
    }
    s.parse().map_err(|_| Error::Parse(format!("not an integer: {s:?}")))
}

fn parse_rational(s: &str) -> Result<BigRational> {
    match s.split_once('/') {
        Some((p, q)) => {
            let q = parse_bigint(q)?;
            if q.is_zero() {
                return Err(Error::Parse("zero denominator".into()));
            }
            Ok(BigRational::new(parse_bigint(p)?, q))
        }
        None => Ok(BigRational::from_integer(parse_bigint(s)?)),
    }
}

fn parse_factor(s: &str) -> Result<ExactValue> {
    if s == "sqrt(pi)" {
        return Ok(ExactValue::sqrt_pi());
    }
    if s == "pi" {
        return Ok(ExactValue::normalized(BigRational::one(), 1, 2));
    }
    if let Some(inner) = s.strip_prefix("sqrt(").and_then(|r| r.strip_suffix(')')) {
        let d: u64 = inner
            .parse()
            .map_err(|_| Error::Parse(format!("bad radicand in {s:?}")))?;
        if d == 0 || !inner.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::Parse(format!("bad radicand in {s:?}")));
        }
        return ExactValue::new(BigRational::one(), d, 0);
    }
    if let Some(exp) = s.strip_prefix("pi^") {
        let e = if let Some(half) = exp.strip_prefix('(').and_then(|r| r.strip_suffix("/2)")) {
            half.parse::<i32>().ok()
        } else {
            exp.parse::<i32>().ok().and_then(|k| k.checked_mul(2))
        };
        let e = e.ok_or_else(|| Error::Parse(format!("bad pi exponent in {s:?}")))?;
        if e.unsigned_abs() > 1 << 16 {
            return Err(Error::Parse(format!("pi exponent out of range in {s:?}")));
        }
        return Ok(ExactValue::normalized(BigRational::one(), 1, e));
    }
    Err(Error::Parse(format!("unknown factor {s:?}")))
}

impl FromStr for ExactValue {
    type Err = Error;

    /// Accepts the `Display` format: `p/q`, `p/q*sqrt(d)*sqrt(pi)`, `-pi^(3/2)`, ...
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::Parse("empty value".into()));
        }
        let (neg, body) = match s.strip_prefix('-') {
            Some(rest) if rest.starts_with(|c: char| c.is_ascii_alphabetic()) => (true, rest),
            _ => (false, s),
        };
        let mut parts = body.split('*');
        let first = parts.next().unwrap_or_default();
        let mut acc = if first.starts_with(|c: char| c.is_ascii_digit() || c == '-') {
            ExactValue::rational(parse_rational(first)?)
        } else {
            parse_factor(first)?
        };
        for p in parts {
            let f = parse_factor(p)?;
            acc = acc
                .checked_mul(&f)
                .ok_or_else(|| Error::Parse("radicand overflow".into()))?;
        }
        Ok(if neg { -acc } else { acc })
    }
}

/// A value on the half-integer lattice, `twice / 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct HalfInt {
    pub twice: i64,
}

impl HalfInt {
    pub fn new(twice: i64) -> Self {
        HalfInt { twice }
    }

    pub fn int(n: i64) -> Self {
        HalfInt { twice: 2 * n }
    }

    pub fn is_integer(self) -> bool {
        self.twice % 2 == 0
    }

    pub fn from_scalar(x: &Scalar) -> Option<Self> {
        let q = x.as_rational()?;
        let t = q * BigInt::from(2);
        if t.is_integer() {
            t.to_integer().to_i64().map(HalfInt::new)
        } else {
            None
        }
    }
}

impl From<HalfInt> for Scalar {
    fn from(h: HalfInt) -> Scalar {
        Scalar::ratio(h.twice, 2)
    }
}

/// Either an exact value or a float with an absolute error bound.
#[derive(Clone, Debug, PartialEq)]
pub enum Scalar {
    Exact(ExactValue),
    Float { value: f64, abs_err: f64 },
}

const EPS: f64 = f64::EPSILON;

impl Scalar {
    pub fn int(n: i64) -> Self {
        Scalar::Exact(ExactValue::int(n))
    }

    pub fn ratio(p: i64, q: i64) -> Self {
        Scalar::Exact(ExactValue::ratio(p, q))
    }

    pub fn rational(q: BigRational) -> Self {
        Scalar::Exact(ExactValue::rational(q))
    }

    pub fn bigint(n: BigInt) -> Self {
        Scalar::rational(BigRational::from_integer(n))
    }

    pub fn zero() -> Self {
        Scalar::int(0)
    }

    pub fn one() -> Self {
        Scalar::int(1)
    }

    pub fn sqrt_pi() -> Self {
        Scalar::Exact(ExactValue::sqrt_pi())
    }

    /// A float taken at face value (zero error).
    pub fn float(value: f64) -> Self {
        Scalar::Float { value, abs_err: 0.0 }
    }

    pub fn float_rel(value: f64, rel_err: f64) -> Self {
        Scalar::Float { value, abs_err: (value * rel_err).abs() }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact(_))
    }

    pub fn as_exact(&self) -> Option<&ExactValue> {
        match self {
            Scalar::Exact(e) => Some(e),
            _ => None,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        self.as_exact().and_then(|e| e.as_rational())
    }

    pub fn as_integer(&self) -> Option<BigInt> {
        self.as_rational().filter(|q| q.is_integer()).map(|q| q.to_integer())
    }

    pub fn as_i64(&self) -> Option<i64> {
        self.as_integer().and_then(|n| n.to_i64())
    }

    /// Nonnegative integer value, if any.
    pub fn as_usize(&self) -> Option<usize> {
        self.as_integer().and_then(|n| n.to_usize())
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(e) => e.to_f64(),
            Scalar::Float { value, .. } => *value,
        }
    }

    /// Demotes to a float carrying the conversion rounding.
    pub fn to_float(&self) -> Scalar {
        match self {
            Scalar::Exact(e) => {
                let v = e.to_f64();
                Scalar::Float { value: v, abs_err: if e.is_rational() { 0.5 } else { 2.0 } * EPS * v.abs() }
            }
            f => f.clone(),
        }
    }

    pub fn abs_err(&self) -> f64 {
        match self {
            Scalar::Exact(_) => 0.0,
            Scalar::Float { abs_err, .. } => *abs_err,
        }
    }

    pub fn rel_err(&self) -> f64 {
        match self {
            Scalar::Exact(_) => 0.0,
            Scalar::Float { value, abs_err } => {
                if *abs_err == 0.0 {
                    0.0
                } else {
                    abs_err / value.abs()
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(e) => e.is_zero(),
            Scalar::Float { value, .. } => *value == 0.0,
        }
    }

    /// Zero and known to be zero (exact zero).
    pub fn is_exact_zero(&self) -> bool {
        matches!(self, Scalar::Exact(e) if e.is_zero())
    }

    pub fn is_positive(&self) -> bool {
        match self {
            Scalar::Exact(e) => e.signum() > 0,
            Scalar::Float { value, .. } => *value > 0.0,
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Scalar::Exact(e) => e.signum() < 0,
            Scalar::Float { value, .. } => *value < 0.0,
        }
    }

    /// Exact comparison for rationals, float comparison otherwise.
    pub fn gt(&self, other: &Scalar) -> bool {
        match (self.as_rational(), other.as_rational()) {
            (Some(a), Some(b)) => a > b,
            _ => self.to_f64() > other.to_f64(),
        }
    }

    pub fn try_add(&self, other: &Scalar) -> Result<Scalar> {
        if let (Scalar::Exact(a), Scalar::Exact(b)) = (self, other) {
            return a.try_add(b).map(Scalar::Exact);
        }
        let (a, b) = (self.to_float(), other.to_float());
        let v = a.to_f64() + b.to_f64();
        Ok(Scalar::Float { value: v, abs_err: a.abs_err() + b.abs_err() + 0.5 * EPS * v.abs() })
    }

    pub fn try_sub(&self, other: &Scalar) -> Result<Scalar> {
        self.try_add(&-other)
    }

    /// Adds an integer; works for any rational or float value.
    pub fn add_int(&self, n: i64) -> Scalar {
        match self {
            Scalar::Exact(e) if e.is_rational() || e.is_zero() => {
                Scalar::rational(e.q() + BigRational::from_integer(n.into()))
            }
            _ => self.try_add(&Scalar::int(n).to_float()).expect("float add"),
        }
    }

    /// Division that reports a zero divisor instead of panicking.
    pub fn checked_div(&self, other: &Scalar) -> Result<Scalar> {
        if other.is_exact_zero() {
            return Err(Error::DivisionByZero);
        }
        if let (Scalar::Exact(a), Scalar::Exact(b)) = (self, other) {
            if let Some(r) = a.checked_div(b)? {
                return Ok(Scalar::Exact(r));
            }
        }
        let (a, b) = (self.to_float(), other.to_float());
        let (av, bv) = (a.to_f64(), b.to_f64());
        if bv == 0.0 {
            return Err(Error::DivisionByZero);
        }
        let v = av / bv;
        let abs_err = (a.abs_err() + v.abs() * b.abs_err()) / bv.abs() + 0.5 * EPS * v.abs();
        Ok(Scalar::Float { value: v, abs_err })
    }

    fn float_mul(&self, other: &Scalar) -> Scalar {
        let (a, b) = (self.to_float(), other.to_float());
        let (av, bv) = (a.to_f64(), b.to_f64());
        let v = av * bv;
        Scalar::Float {
            value: v,
            abs_err: a.abs_err() * bv.abs() + b.abs_err() * av.abs() + a.abs_err() * b.abs_err() + 0.5 * EPS * v.abs(),
        }
    }

    pub fn sum<'a, I: IntoIterator<Item = &'a Scalar>>(items: I) -> Result<Scalar> {
        let mut acc = Scalar::zero();
        for x in items {
            acc = acc.try_add(x)?;
        }
        Ok(acc)
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, other: &Scalar) -> Scalar {
        if let (Scalar::Exact(a), Scalar::Exact(b)) = (self, other) {
            if let Some(r) = a.checked_mul(b) {
                return Scalar::Exact(r);
            }
        }
        if self.is_exact_zero() || other.is_exact_zero() {
            return Scalar::zero();
        }
        self.float_mul(other)
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, other: Scalar) -> Scalar {
        &self * &other
    }
}

impl Mul<&Scalar> for Scalar {
    type Output = Scalar;
    fn mul(self, other: &Scalar) -> Scalar {
        &self * other
    }
}

impl Div for &Scalar {
    type Output = Scalar;
    /// Panics on an exact zero divisor; use [`Scalar::checked_div`] when that can happen.
    fn div(self, other: &Scalar) -> Scalar {
        self.checked_div(other).expect("division by zero")
    }
}

impl Div for Scalar {
    type Output = Scalar;
    fn div(self, other: Scalar) -> Scalar {
        &self / &other
    }
}

impl Div<&Scalar> for Scalar {
    type Output = Scalar;
    fn div(self, other: &Scalar) -> Scalar {
        &self / other
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Exact(e) => Scalar::Exact(-e),
            Scalar::Float { value, abs_err } => Scalar::Float { value: -value, abs_err: *abs_err },
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl From<ExactValue> for Scalar {
    fn from(e: ExactValue) -> Scalar {
        Scalar::Exact(e)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Scalar {
        Scalar::int(n)
    }
}

fn fmt_float(v: f64) -> String {
    let a = v.abs();
    if a == 0.0 || (1e-5..1e16).contains(&a) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(e) => write!(f, "{e}"),
            Scalar::Float { value, .. } => write!(f, "{}±{:.1e}", fmt_float(*value), self.rel_err()),
        }
    }
}

impl FromStr for Scalar {
    type Err = Error;

    /// Exact syntax first; `v±rel` (or `v+-rel`) is a float with budget; a bare
    /// decimal is a float with zero budget.
    fn from_str(s: &str) -> Result<Scalar> {
        let s = s.trim();
        let split = s.split_once('±').or_else(|| s.split_once("+-"));
        if let Some((v, rel)) = split {
            let v: f64 = v.trim().parse().map_err(|_| Error::Parse(format!("bad float {v:?}")))?;
            let rel: f64 = rel.trim().parse().map_err(|_| Error::Parse(format!("bad budget {rel:?}")))?;
            if !v.is_finite() || !(rel >= 0.0) {
                return Err(Error::Parse(format!("bad float value {s:?}")));
            }
            return Ok(Scalar::float_rel(v, rel));
        }
        if let Ok(e) = s.parse::<ExactValue>() {
            return Ok(Scalar::Exact(e));
        }
        match s.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(Scalar::float(v)),
            _ => Err(Error::Parse(format!("not a scalar: {s:?}"))),
        }
    }
}
