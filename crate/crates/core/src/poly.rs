//! Classical families, monomial-basis polynomials, norms and basis changes.

use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::series::{hyp2f1_terminating, hyp3f2_terminating};
use crate::special::{factorial, gamma, gamma_ratio, gen_binomial, pochhammer, pow, pow_int};

static DEGREE_CAP: AtomicUsize = AtomicUsize::new(64);

pub fn degree_cap() -> usize {
    DEGREE_CAP.load(Ordering::Relaxed)
}

/// Changes the global degree cap (default 64).
pub fn set_degree_cap(cap: usize) {
    DEGREE_CAP.store(cap, Ordering::Relaxed);
}

pub fn check_degree(n: usize) -> Result<()> {
    let cap = degree_cap();
    if n > cap {
        Err(Error::DegreeCap { degree: n, cap })
    } else {
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FamilyKind {
    Laguerre,
    Hermite,
    Jacobi,
}

impl FamilyKind {
    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::Laguerre => "laguerre",
            FamilyKind::Hermite => "hermite",
            FamilyKind::Jacobi => "jacobi",
        }
    }
}

impl std::str::FromStr for FamilyKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "laguerre" => Ok(FamilyKind::Laguerre),
            "hermite" => Ok(FamilyKind::Hermite),
            "jacobi" => Ok(FamilyKind::Jacobi),
            _ => Err(Error::Parse(format!("unknown family {s:?}"))),
        }
    }
}

/// A classical family with its weight parameters.
///
/// Weights: Laguerre `x^α e^{−x}` on (0,∞), Hermite `e^{−x²}` on ℝ,
/// Jacobi `(1−x)^α (1+x)^γ` on (−1,1).
#[derive(Clone, Debug, PartialEq)]
pub enum FamilySpec {
    Laguerre { alpha: Scalar },
    Hermite,
    Jacobi { alpha: Scalar, gamma: Scalar },
}

impl FamilySpec {
    pub fn laguerre(alpha: Scalar) -> Self {
        FamilySpec::Laguerre { alpha }
    }

    pub fn jacobi(alpha: Scalar, gamma: Scalar) -> Self {
        FamilySpec::Jacobi { alpha, gamma }
    }

    pub fn kind(&self) -> FamilyKind {
        match self {
            FamilySpec::Laguerre { .. } => FamilyKind::Laguerre,
            FamilySpec::Hermite => FamilyKind::Hermite,
            FamilySpec::Jacobi { .. } => FamilyKind::Jacobi,
        }
    }

    pub fn alpha(&self) -> Option<&Scalar> {
        match self {
            FamilySpec::Laguerre { alpha } | FamilySpec::Jacobi { alpha, .. } => Some(alpha),
            FamilySpec::Hermite => None,
        }
    }

    pub fn gamma(&self) -> Option<&Scalar> {
        match self {
            FamilySpec::Jacobi { gamma, .. } => Some(gamma),
            _ => None,
        }
    }

    /// All parameters exact rationals.
    pub fn is_rational(&self) -> bool {
        self.alpha().is_none_or(|a| a.as_rational().is_some()) && self.gamma().is_none_or(|g| g.as_rational().is_some())
    }

    pub fn to_float(&self) -> Self {
        match self {
            FamilySpec::Laguerre { alpha } => FamilySpec::Laguerre { alpha: alpha.to_float() },
            FamilySpec::Hermite => FamilySpec::Hermite,
            FamilySpec::Jacobi { alpha, gamma } => FamilySpec::Jacobi { alpha: alpha.to_float(), gamma: gamma.to_float() },
        }
    }

    /// Orthogonality validity: α > −1 (and γ > −1).
    pub fn validate(&self) -> Result<()> {
        let minus_one = Scalar::int(-1);
        for (name, p) in [("alpha", self.alpha()), ("gamma", self.gamma())] {
            if let Some(p) = p {
                if !p.gt(&minus_one) {
                    return Err(Error::InvalidParameter(format!("{name} = {p} must exceed -1")));
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilySpec::Laguerre { alpha } => write!(f, "laguerre(alpha={alpha})"),
            FamilySpec::Hermite => write!(f, "hermite"),
            FamilySpec::Jacobi { alpha, gamma } => write!(f, "jacobi(alpha={alpha}, gamma={gamma})"),
        }
    }
}

/// Dense coefficients in the monomial basis, lowest degree first.
#[derive(Clone, Debug, PartialEq)]
pub struct MonomialPoly {
    coeffs: Vec<Scalar>,
}

impl MonomialPoly {
    pub fn new(mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_exact_zero()) {
            coeffs.pop();
        }
        MonomialPoly { coeffs }
    }

    pub fn zero() -> Self {
        MonomialPoly { coeffs: vec![] }
    }

    pub fn constant(c: Scalar) -> Self {
        Self::new(vec![c])
    }

    pub fn one() -> Self {
        Self::constant(Scalar::one())
    }

    /// `c·x^k`
    pub fn monomial(k: usize, c: Scalar) -> Self {
        let mut v = vec![Scalar::zero(); k + 1];
        v[k] = c;
        Self::new(v)
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Scalar {
        self.coeffs.get(k).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        let n = self.coeffs.len().max(other.coeffs.len());
        let v = (0..n).map(|k| self.coeff(k).try_add(&other.coeff(k))).collect::<Result<_>>()?;
        Ok(Self::new(v))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.scale(&Scalar::int(-1)))
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero());
        }
        let mut v = vec![Scalar::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_exact_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                v[i + j] = v[i + j].try_add(&(a * b))?;
            }
        }
        Ok(Self::new(v))
    }

    /// Multiplies by `x^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut v = vec![Scalar::zero(); k];
        v.extend(self.coeffs.iter().cloned());
        Self::new(v)
    }

    /// `Σ c_k p_k` for a coefficient list against a basis of polynomials.
    pub fn combine(coeffs: &[Scalar], basis: impl Fn(usize) -> Result<MonomialPoly>) -> Result<Self> {
        let mut acc = Self::zero();
        for (k, c) in coeffs.iter().enumerate() {
            if !c.is_exact_zero() {
                acc = acc.try_add(&basis(k)?.scale(c))?;
            }
        }
        Ok(acc)
    }
}

impl Serialize for MonomialPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.coeffs.iter().map(|c| c.to_string()))
    }
}

impl<'de> Deserialize<'de> for MonomialPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        let coeffs = v.iter().map(|s| s.parse::<Scalar>().map_err(D::Error::custom)).collect::<std::result::Result<_, _>>()?;
        Ok(MonomialPoly::new(coeffs))
    }
}

fn rat_poly_pow(base: &[BigRational], e: usize) -> Vec<BigRational> {
    let mut acc = vec![BigRational::one()];
    for _ in 0..e {
        let mut next = vec![BigRational::zero(); acc.len() + base.len() - 1];
        for (i, a) in acc.iter().enumerate() {
            for (j, b) in base.iter().enumerate() {
                next[i + j] += a * b;
            }
        }
        acc = next;
    }
    acc
}

/// Monomial coefficients of `L_n^(α)`, `H_n` or `P_n^(α,γ)`.
pub fn poly_coeffs(family: &FamilySpec, n: usize) -> Result<MonomialPoly> {
    check_degree(n)?;
    match family {
        FamilySpec::Laguerre { alpha } => {
            // c_i = (−1)^i / i! · C(n+α, n−i)
            let top = alpha.add_int(n as i64);
            let v = (0..=n)
                .map(|i| {
                    let c = gen_binomial(&top, n - i) / Scalar::bigint(factorial(i));
                    if i % 2 == 1 { -c } else { c }
                })
                .collect();
            Ok(MonomialPoly::new(v))
        }
        FamilySpec::Hermite => {
            let mut v = vec![Scalar::zero(); n + 1];
            for k in 0..=n / 2 {
                let c = BigRational::new(
                    factorial(n) * BigInt::from(2).pow((n - 2 * k) as u32),
                    factorial(k) * factorial(n - 2 * k),
                );
                v[n - 2 * k] = Scalar::rational(if k % 2 == 1 { -c } else { c });
            }
            Ok(MonomialPoly::new(v))
        }
        FamilySpec::Jacobi { alpha, gamma } => {
            // Σ_s C(n+α, n−s) C(n+γ, s) ((x−1)/2)^s ((x+1)/2)^{n−s}
            let half = BigRational::new(1.into(), 2.into());
            let xm = [-half.clone(), half.clone()];
            let xp = [half.clone(), half];
            let a_top = alpha.add_int(n as i64);
            let g_top = gamma.add_int(n as i64);
            let mut acc = MonomialPoly::zero();
            for s in 0..=n {
                let w = &gen_binomial(&a_top, n - s) * &gen_binomial(&g_top, s);
                let a = rat_poly_pow(&xm, s);
                let b = rat_poly_pow(&xp, n - s);
                let mut prod = vec![BigRational::zero(); n + 1];
                for (i, x) in a.iter().enumerate() {
                    for (j, y) in b.iter().enumerate() {
                        prod[i + j] += x * y;
                    }
                }
                let p = MonomialPoly::new(prod.into_iter().map(Scalar::rational).collect());
                acc = acc.try_add(&p.scale(&w))?;
            }
            Ok(acc)
        }
    }
}

/// Squared norm `h_n = ∫ ω p_n²`.
pub fn norm_h(family: &FamilySpec, n: usize) -> Result<Scalar> {
    family.validate()?;
    match family {
        FamilySpec::Laguerre { alpha } => Ok(gamma(&alpha.add_int(n as i64 + 1))? / Scalar::bigint(factorial(n))),
        FamilySpec::Hermite => Ok(&Scalar::bigint(BigInt::from(2).pow(n as u32) * factorial(n)) * &Scalar::sqrt_pi()),
        FamilySpec::Jacobi { alpha, gamma: g } => jacobi_norm(alpha, g, n),
    }
}

/// Jacobi squared norm for arbitrary parameters `(Λ, Δ)` with Λ, Δ > −1.
pub(crate) fn jacobi_norm(lam: &Scalar, del: &Scalar, n: usize) -> Result<Scalar> {
    let ld = lam.try_add(del)?;
    let two_pow = pow(&Scalar::int(2), &ld.add_int(1))?;
    let n_i = n as i64;
    if n == 0 {
        // 2^{Λ+Δ+1} Γ(Λ+1)Γ(Δ+1)/Γ(Λ+Δ+2)
        let v = &(&two_pow * &gamma(&lam.add_int(1))?) * &gamma_ratio(&del.add_int(1), &ld.add_int(2))?;
        return Ok(v);
    }
    // 2^{Λ+Δ+1}/(2n+Λ+Δ+1) · Γ(n+Λ+1)Γ(n+Δ+1)/(n! Γ(n+Λ+Δ+1))
    let a = gamma(&lam.add_int(n_i + 1))?;
    let b = gamma_ratio(&del.add_int(n_i + 1), &ld.add_int(n_i + 1))?;
    let den = &ld.add_int(2 * n_i + 1) * &Scalar::bigint(factorial(n));
    Ok(&(&two_pow * &a) * &b / den)
}

/// `H_m(x) = sign · scale · x^ν · L^{(ν−½)}_{degree}(x²)`.
#[derive(Clone, Debug, PartialEq)]
pub struct HermiteLaguerre {
    pub sign: i8,
    pub scale: Scalar,
    pub nu: usize,
    pub degree: usize,
    pub param: Scalar,
}

pub fn hermite_to_laguerre(m: usize) -> HermiteLaguerre {
    let nu = m % 2;
    let degree = (m - nu) / 2;
    let scale = Scalar::bigint(factorial(m)) / pochhammer(&Scalar::ratio(1, 2), (m + nu) / 2);
    HermiteLaguerre {
        sign: if degree % 2 == 0 { 1 } else { -1 },
        scale,
        nu,
        degree,
        param: Scalar::ratio(2 * nu as i64 - 1, 2),
    }
}

fn signed(c: Scalar, odd: bool) -> Scalar {
    if odd { -c } else { c }
}

/// Coefficients `c_{kj}` of `P_k^(α,γ) = Σ_j c_{kj} P_j^(αβ,γβ)`.
pub fn jacobi_param_shift(k: usize, alpha: &Scalar, gamma_p: &Scalar, beta: &Scalar) -> Result<Vec<Scalar>> {
    check_degree(k)?;
    let ab = alpha * beta;
    let ag = alpha.try_add(gamma_p)?;
    let big_b = beta * &ag;
    let one = Scalar::one();
    (0..=k)
        .map(|j| {
            let (ji, ki) = (j as i64, k as i64);
            // (ag+k+1)_j (α+j+1)_{k−j} / ((k−j)! (B+j+1)_j) · 3F2(…; 1)
            let pre = &pochhammer(&ag.add_int(ki + 1), j) * &pochhammer(&alpha.add_int(ji + 1), k - j);
            let den = &Scalar::bigint(factorial(k - j)) * &pochhammer(&big_b.add_int(ji + 1), j);
            let f = hyp3f2_terminating(
                &Scalar::int(ji - ki),
                &ag.add_int(ki + ji + 1),
                &ab.add_int(ji + 1),
                &alpha.add_int(ji + 1),
                &big_b.add_int(2 * ji + 2),
                &one,
            )?;
            Ok(&(&pre * &f) / &den)
        })
        .collect()
}

/// Connection coefficients `A(i,k)` of `P_i^(α,γ) = Σ_k A(i,k) P_k^(Λ,Δ)`
/// for an arbitrary target basis.
pub fn jacobi_connection(i: usize, alpha: &Scalar, gamma_p: &Scalar, lam: &Scalar, del: &Scalar) -> Result<Vec<Scalar>> {
    check_degree(i)?;
    let ag = alpha.try_add(gamma_p)?;
    let ld = lam.try_add(del)?;
    let one = Scalar::one();
    (0..=i)
        .map(|k| {
            let (ii, ki) = (i as i64, k as i64);
            // (Λ+Δ+2k+1) Γ(k+Λ+Δ+1)/Γ(i+k+Λ+Δ+2), pole-free
            let r = if k == 0 {
                Scalar::one() / pochhammer(&ld.add_int(2), i)
            } else {
                ld.add_int(2 * ki + 1) / pochhammer(&ld.add_int(ki + 1), i + 1)
            };
            let p = &(&pochhammer(&gamma_p.add_int(ki + 1), i - k) * &pochhammer(&lam.add_int(ki + 1), i - k))
                * &pochhammer(&ag.add_int(ii + 1), k);
            let f = hyp3f2_terminating(
                &Scalar::int(ki - ii),
                &(-alpha).add_int(-ii),
                &del.add_int(ki + 1),
                &(-lam).add_int(-ii),
                &gamma_p.add_int(ki + 1),
                &one,
            )?;
            let v = &(&p * &r) * &f / Scalar::bigint(factorial(i - k));
            Ok(signed(v, (i - k) % 2 == 1))
        })
        .collect()
}

/// Coefficients `d_ℓ` of `x^s = Σ_ℓ d_ℓ p_ℓ` in the given basis.
pub fn monomial_inversion(s: usize, basis: &FamilySpec) -> Result<Vec<Scalar>> {
    check_degree(s)?;
    match basis {
        FamilySpec::Laguerre { alpha } => {
            // x^s = s! Σ_ℓ (−1)^ℓ C(s+α, s−ℓ) L_ℓ
            let top = alpha.add_int(s as i64);
            let sf = Scalar::bigint(factorial(s));
            Ok((0..=s).map(|l| signed(&sf * &gen_binomial(&top, s - l), l % 2 == 1)).collect())
        }
        FamilySpec::Hermite => {
            // x^s = s!/2^s Σ_k H_{s−2k}/(k!(s−2k)!)
            let mut d = vec![Scalar::zero(); s + 1];
            for k in 0..=s / 2 {
                d[s - 2 * k] = Scalar::rational(BigRational::new(
                    factorial(s),
                    BigInt::from(2).pow(s as u32) * factorial(k) * factorial(s - 2 * k),
                ));
            }
            Ok(d)
        }
        FamilySpec::Jacobi { alpha: lam, gamma: del } => {
            // d_j = (−1)^{s−j} C(s,j) 2F1(j−s, Δ+j+1; Λ+Δ+2j+2; 2) 2^j j!/(Λ+Δ+j+1)_j
            let ld = lam.try_add(del)?;
            let two = Scalar::int(2);
            (0..=s)
                .map(|j| {
                    let ji = j as i64;
                    let f = hyp2f1_terminating(
                        &Scalar::int(ji - s as i64),
                        &del.add_int(ji + 1),
                        &ld.add_int(2 * ji + 2),
                        &two,
                    )?;
                    let c = &Scalar::bigint(crate::special::binomial_int(s, j) * factorial(j)) * &pow_int(&two, ji)?;
                    let v = &(&c * &f) / &pochhammer(&ld.add_int(ji + 1), j);
                    Ok(signed(v, (s - j) % 2 == 1))
                })
                .collect()
        }
    }
}
