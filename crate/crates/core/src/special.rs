//! Γ, Pochhammer, binomials, harmonic numbers and powers over [`Scalar`].
//!
//! Exact on the lattice ℤ ∪ (ℤ+½); everything else goes through f64 with an
//! error budget.

use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::scalar::{ExactValue, Scalar};

const EPS: f64 = f64::EPSILON;
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

static FACTORIALS: OnceLock<RwLock<Vec<BigInt>>> = OnceLock::new();

/// `n!`, memoized.
pub fn factorial(n: usize) -> BigInt {
    let table = FACTORIALS.get_or_init(|| RwLock::new(vec![BigInt::one()]));
    if let Some(v) = table.read().unwrap().get(n) {
        return v.clone();
    }
    let mut t = table.write().unwrap();
    while t.len() <= n {
        let k = t.len();
        let next = &t[k - 1] * BigInt::from(k);
        t.push(next);
    }
    t[n].clone()
}

pub fn binomial_int(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    factorial(n) / (factorial(k) * factorial(n - k))
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

/// `(a)_n` for rational `a`, one division at the end.
pub fn pochhammer_rational(a: &BigRational, n: usize) -> BigRational {
    let (p, q) = (a.numer(), a.denom());
    let mut num = BigInt::one();
    let mut term = p.clone();
    for _ in 0..n {
        num *= &term;
        if num.is_zero() {
            return BigRational::zero();
        }
        term += q;
    }
    BigRational::new(num, num_traits::pow(q.clone(), n))
}

/// Rising factorial `(a)_n = a(a+1)…(a+n−1)`.
pub fn pochhammer(a: &Scalar, n: usize) -> Scalar {
    if let Some(q) = a.as_rational() {
        return Scalar::rational(pochhammer_rational(q, n));
    }
    let a = a.to_float();
    let mut acc = Scalar::one();
    for i in 0..n {
        acc = &acc * &a.add_int(i as i64);
    }
    acc
}

/// Pochhammer with a possibly negative index: `(a)_{−k} = 1/(a−k)_k`.
pub fn poch_signed(a: &Scalar, n: i64) -> Result<Scalar> {
    if n >= 0 {
        return Ok(pochhammer(a, n as usize));
    }
    let k = n.unsigned_abs() as usize;
    let d = pochhammer(&a.add_int(n), k);
    if d.is_exact_zero() {
        return Err(Error::Pole(format!("({a})_{n}")));
    }
    Scalar::one().checked_div(&d)
}

/// Generalised binomial `x(x−1)…(x−k+1)/k!`.
pub fn gen_binomial(x: &Scalar, k: usize) -> Scalar {
    if let Some(q) = x.as_rational() {
        let (p, d) = (q.numer(), q.denom());
        let mut num = BigInt::one();
        let mut term = p.clone();
        for _ in 0..k {
            num *= &term;
            if num.is_zero() {
                return Scalar::zero();
            }
            term -= d;
        }
        return Scalar::rational(BigRational::new(num, num_traits::pow(d.clone(), k) * factorial(k)));
    }
    let x = x.to_float();
    let mut acc = Scalar::one();
    for i in 0..k {
        acc = &acc * &x.add_int(-(i as i64));
    }
    acc / Scalar::bigint(factorial(k))
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Lanczos approximation (g = 7, 9 terms), valid for x > 0.
pub fn gamma_f64(x: f64) -> f64 {
    if x < 0.5 {
        return std::f64::consts::PI / ((std::f64::consts::PI * x).sin() * gamma_f64(1.0 - x));
    }
    let x = x - 1.0;
    let mut t = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        t += c / (x + i as f64);
    }
    let w = x + LANCZOS_G + 0.5;
    // split the power so w^(x+½) does not overflow before exp(−w) brings it back
    let h = w.powf(0.5 * (x + 0.5));
    (2.0 * std::f64::consts::PI).sqrt() * h * (h * (-w).exp()) * t
}

/// ln Γ(x) for x > 0 (Lanczos, no overflow).
pub fn ln_gamma_f64(x: f64) -> f64 {
    if x < 0.5 {
        return (std::f64::consts::PI / (std::f64::consts::PI * x).sin()).ln() - ln_gamma_f64(1.0 - x);
    }
    let x = x - 1.0;
    let mut t = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        t += c / (x + i as f64);
    }
    let w = x + LANCZOS_G + 0.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * w.ln() - w + t.ln()
}

/// Digamma for x > 0: upward recurrence, then the asymptotic series.
pub fn digamma_f64(mut x: f64) -> f64 {
    let mut acc = 0.0;
    while x < 10.0 {
        acc -= 1.0 / x;
        x += 1.0;
    }
    let x2 = 1.0 / (x * x);
    let series = x2
        * (1.0 / 12.0
            - x2 * (1.0 / 120.0 - x2 * (1.0 / 252.0 - x2 * (1.0 / 240.0 - x2 * (1.0 / 132.0 - x2 * 691.0 / 32760.0)))));
    acc + x.ln() - 0.5 / x - series
}

fn gamma_float(x: &Scalar) -> Result<Scalar> {
    let xf = x.to_float();
    let v = xf.to_f64();
    if !(v > 0.0) {
        return Err(Error::Domain(format!("Γ({v}) outside the lattice with nonpositive argument")));
    }
    let g = gamma_f64(v);
    if !g.is_finite() {
        return Err(Error::Domain(format!("Γ({v}) overflows f64")));
    }
    // Lanczos core ~1e-15; w^(x+½)·e^(−w) loses about |x ln x| ulps.
    let rel = 1e-14 + 2.0 * EPS * v * (1.0 + v.max(1.0).ln()) + digamma_f64(v).abs() * xf.abs_err();
    Ok(Scalar::float_rel(g, rel))
}

/// Γ(x): exact on ℤ ∪ (ℤ+½), float elsewhere for x > 0.
pub fn gamma(x: &Scalar) -> Result<Scalar> {
    let Some(q) = x.as_rational() else {
        return gamma_float(x);
    };
    if q.is_integer() {
        let n = q.to_integer();
        if !n.is_positive() {
            return Err(Error::Pole(format!("Γ({n})")));
        }
        let n = n.to_usize().ok_or_else(|| Error::Domain(format!("Γ({n}) too large")))?;
        return Ok(Scalar::bigint(factorial(n - 1)));
    }
    if q.denom() == &BigInt::from(2) {
        // x = k + ½
        let k = (q.numer() - BigInt::one()).div_floor(&BigInt::from(2));
        let k = k.to_i64().ok_or_else(|| Error::Domain(format!("Γ({q}) too large")))?;
        let m = k.unsigned_abs() as usize;
        let ratio = BigRational::new(factorial(2 * m), BigInt::from(4).pow(m as u32) * factorial(m));
        let c = if k >= 0 {
            ratio
        } else {
            // Γ(½−m) = (−4)^m m!/(2m)! √π
            let sign = if m % 2 == 0 { 1 } else { -1 };
            BigRational::from_integer(sign.into()) / ratio
        };
        return Ok(Scalar::Exact(ExactValue::with_sqrt_pi(c)));
    }
    if q.is_negative() {
        return Err(Error::Domain(format!("Γ({q}): negative argument off the lattice")));
    }
    gamma_float(x)
}

/// 1/Γ(x), zero at the poles.
pub fn rgamma(x: &Scalar) -> Result<Scalar> {
    match gamma(x) {
        Ok(g) => Scalar::one().checked_div(&g),
        Err(Error::Pole(_)) => Ok(Scalar::zero()),
        Err(e) => Err(e),
    }
}

/// Γ(a)/Γ(b) with both arguments shifted onto a common integer offset when
/// possible (avoids huge Γ values and pole ratios).
pub fn gamma_ratio(a: &Scalar, b: &Scalar) -> Result<Scalar> {
    if let (Some(x), Some(y)) = (a.as_rational(), b.as_rational()) {
        let d = x - y;
        if d.is_integer() {
            let n = d.to_integer().to_i64().ok_or_else(|| Error::Domain("Γ ratio offset".into()))?;
            // Γ(b+n)/Γ(b) = (b)_n
            return poch_signed(b, n);
        }
    }
    Ok(gamma(a)? / gamma(b)?)
}

/// H_x: exact for integers, ψ(x+1)+γ_E otherwise.
pub fn harmonic_general(x: &Scalar) -> Result<Scalar> {
    if let Some(q) = x.as_rational() {
        if q.is_integer() {
            let n = q.to_integer();
            if n.is_negative() {
                return Err(Error::Pole(format!("H_{n}")));
            }
            let n = n.to_u64().ok_or_else(|| Error::Domain("harmonic index too large".into()))?;
            let mut acc = BigRational::zero();
            for i in 1..=n {
                acc += BigRational::new(BigInt::one(), i.into());
            }
            return Ok(Scalar::rational(acc));
        }
    }
    let xf = x.to_float();
    let v = xf.to_f64();
    if !(v > -1.0) {
        return Err(Error::Domain(format!("H_{v} requires x > −1")));
    }
    let h = digamma_f64(v + 1.0) + EULER_GAMMA;
    // derivative of H_x is ψ'(x+1) ≤ 1/(x+1) + 1/(x+1)²
    let slope = 1.0 / (v + 1.0) + 1.0 / ((v + 1.0) * (v + 1.0));
    Ok(Scalar::Float { value: h, abs_err: 8.0 * EPS * (1.0 + h.abs()) + slope * xf.abs_err() })
}

/// Exact √(p/q) = √(pq)/q for positive rationals whose product fits in u64.
fn sqrt_rational(q: &BigRational) -> Option<ExactValue> {
    let pq = (q.numer() * q.denom()).to_u64()?;
    let root = ExactValue::new(BigRational::one(), pq, 0).ok()?;
    root.checked_div(&ExactValue::rational(BigRational::from_integer(q.denom().clone())))
        .ok()
        .flatten()
}

/// `base^exponent`: exact for rational bases with integer or half-integer
/// exponents, float otherwise.
pub fn pow(base: &Scalar, exponent: &Scalar) -> Result<Scalar> {
    if let (Scalar::Exact(b), Some(e)) = (base, exponent.as_rational()) {
        let twice = e * rat(2);
        if twice.is_integer() {
            if let Some(t) = twice.to_integer().to_i32() {
                if b.is_zero() {
                    return match t.signum() {
                        0 => Ok(Scalar::one()),
                        1 => Ok(Scalar::zero()),
                        _ => Err(Error::DivisionByZero),
                    };
                }
                let whole = t.div_euclid(2);
                if let Some(p) = b.pow_i(whole)? {
                    if t % 2 == 0 {
                        return Ok(Scalar::Exact(p));
                    }
                    if let Some(r) = b.as_rational().filter(|r| r.is_positive()).and_then(sqrt_rational) {
                        if let Some(v) = p.checked_mul(&r) {
                            return Ok(Scalar::Exact(v));
                        }
                    }
                }
            }
        }
    }
    let (b, e) = (base.to_float(), exponent.to_float());
    let (bv, ev) = (b.to_f64(), e.to_f64());
    if bv < 0.0 {
        return Err(Error::Domain(format!("({bv})^({ev}) with negative base")));
    }
    if bv == 0.0 {
        return if ev > 0.0 { Ok(Scalar::zero().to_float()) } else { Err(Error::DivisionByZero) };
    }
    let v = bv.powf(ev);
    let lb = bv.ln();
    let rel = 2.0 * EPS * (1.0 + (ev * lb).abs()) + lb.abs() * e.abs_err() + ev.abs() * b.abs_err() / bv;
    Ok(Scalar::float_rel(v, rel))
}

pub fn pow_int(base: &Scalar, n: i64) -> Result<Scalar> {
    pow(base, &Scalar::int(n))
}
