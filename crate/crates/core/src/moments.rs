//! Moments of the density `ρ_n = ω p_n²`: power, Krein-like, logarithmic,
//! exponential and weight-log functionals.
//!
//! All moments are unnormalized (`⟨x^0⟩_n = h_n`) unless the request asks
//! for `normalized`, which divides by `h_n`.

use std::fmt;

use crate::error::{Error, Result};
use crate::krein::{evaluate, hermite_fa, jacobi_c0, laguerre_c0, Backend, FunctionalRequest};
use crate::poly::{check_degree, hermite_to_laguerre, norm_h, poly_coeffs, FamilyKind, FamilySpec};
use crate::scalar::Scalar;
use crate::special::{binomial_int, harmonic_general, ln_gamma_f64};

const EPS: f64 = f64::EPSILON;

/// Coarsest finite-difference step is `1/FD_STEP_DEN`; each tableau level halves it.
pub const FD_STEP_DEN: i64 = 100;
pub const FD_LEVELS: usize = 4;
/// A derivative whose error budget exceeds this (relative, floored at 1)
/// is reported as an accuracy failure.
pub const FD_TOL: f64 = 1e-6;

pub const EXP_TERM_CAP: usize = 200;
/// Relative tail target for the exponential series.
pub const EXP_TAIL_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub enum MomentKind {
    /// `⟨x^s⟩_n`
    Power { s: Scalar },
    /// `⟨ω^k⟩_n`
    Krein { k: Scalar },
    /// `⟨(log x)^k⟩_n` (`log|x|` on Hermite and Jacobi)
    Log { k: usize },
    /// `⟨x^k e^{−a x}⟩_n`
    Exponential { k: usize, a: Scalar },
    /// `⟨ω^k log ω⟩_n`
    WeightLog { k: Scalar },
}

impl MomentKind {
    pub fn name(&self) -> &'static str {
        match self {
            MomentKind::Power { .. } => "power",
            MomentKind::Krein { .. } => "krein",
            MomentKind::Log { .. } => "log",
            MomentKind::Exponential { .. } => "exponential",
            MomentKind::WeightLog { .. } => "weight_log",
        }
    }
}

impl fmt::Display for MomentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MomentKind::Power { s } => write!(f, "power(s={s})"),
            MomentKind::Krein { k } => write!(f, "krein(k={k})"),
            MomentKind::Log { k } => write!(f, "log(k={k})"),
            MomentKind::Exponential { k, a } => write!(f, "exponential(k={k}, a={a})"),
            MomentKind::WeightLog { k } => write!(f, "weight_log(k={k})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MomentRequest {
    pub family: FamilySpec,
    pub n: usize,
    pub kind: MomentKind,
    pub backend: Backend,
    pub normalized: bool,
}

impl MomentRequest {
    pub fn new(family: FamilySpec, n: usize, kind: MomentKind) -> Self {
        MomentRequest { family, n, kind, backend: Backend::Exact, normalized: false }
    }

    pub fn with_backend(mut self, backend: Backend) -> Self {
        self.backend = backend;
        self
    }

    pub fn normalized(mut self, yes: bool) -> Self {
        self.normalized = yes;
        self
    }
}

/// Value plus a short description of how it was obtained.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentReport {
    pub value: Scalar,
    pub method: String,
    pub terms: u64,
}

fn functional(family: &FamilySpec, n: usize, s: Scalar, beta: Scalar, backend: Backend) -> Result<(Scalar, String, u64)> {
    let req = FunctionalRequest::new(family.clone(), vec![n, n], s, beta).with_backend(backend);
    let rep = evaluate(&req)?;
    Ok((rep.value, rep.route.to_string(), rep.terms))
}

/// `⟨x^s⟩_n = 𝒥_{n,n}(s, β=1)`.
pub fn power_moment(family: &FamilySpec, n: usize, s: &Scalar) -> Result<Scalar> {
    Ok(functional(family, n, s.clone(), Scalar::one(), Backend::Exact)?.0)
}

/// `⟨ω^k⟩_n = 𝒥_{n,n}(0, β=k+1)`.
pub fn krein_moment(family: &FamilySpec, n: usize, k: &Scalar) -> Result<Scalar> {
    Ok(functional(family, n, Scalar::zero(), k.add_int(1), Backend::Exact)?.0)
}

// ---------------------------------------------------------------------------
// finite differences

#[derive(Clone, Copy, Debug, PartialEq)]
struct Derivative {
    value: f64,
    error: f64,
}

impl Derivative {
    fn scalar(self) -> Scalar {
        Scalar::Float { value: self.value, abs_err: self.error }
    }
}

/// `f^{(k)}(0)` from the central stencil
/// `D(h) = h^{−k} Σ_i (−1)^i C(k,i) f((k/2−i)h)` at `h = h₀/2^l`, extrapolated
/// in `h²`.  Stencil points are exact rationals.
fn fd_derivative(k: usize, f: impl Fn(&Scalar) -> Result<Scalar>) -> Result<Derivative> {
    let mut t = [[0.0f64; FD_LEVELS]; FD_LEVELS];
    let mut noise = [[0.0f64; FD_LEVELS]; FD_LEVELS];
    for l in 0..FD_LEVELS {
        let den = 2 * (FD_STEP_DEN << l);
        let hinv_k = ((FD_STEP_DEN << l) as f64).powi(k as i32);
        let (mut d, mut err, mut mag) = (0.0, 0.0, 0.0);
        for i in 0..=k {
            let v = f(&Scalar::ratio(k as i64 - 2 * i as i64, den))?.to_float();
            let c: f64 = binomial_int(k, i).to_string().parse().expect("binomial fits f64");
            let term = c * v.to_f64();
            d += if i % 2 == 0 { term } else { -term };
            err += c * v.abs_err();
            mag += term.abs();
        }
        t[l][0] = d * hinv_k;
        noise[l][0] = (err + (k + 1) as f64 * EPS * mag) * hinv_k;
        for j in 1..=l {
            let r = (4f64).powi(j as i32) - 1.0;
            t[l][j] = t[l][j - 1] + (t[l][j - 1] - t[l - 1][j - 1]) / r;
            noise[l][j] = noise[l][j - 1] + (noise[l][j - 1] + noise[l - 1][j - 1]) / r;
        }
    }
    let last = FD_LEVELS - 1;
    let value = t[last][last];
    let error = (value - t[last - 1][last - 1]).abs() + noise[last][last];
    if !value.is_finite() || error > FD_TOL * value.abs().max(1.0) {
        return Err(Error::Accuracy { estimate: value, error });
    }
    Ok(Derivative { value, error })
}

/// `f'(0)/f(0)`.
fn fd_log_derivative(f: impl Fn(&Scalar) -> Result<Scalar>) -> Result<Scalar> {
    let c = f(&Scalar::zero())?.to_float();
    let d = fd_derivative(1, f)?.scalar();
    d.checked_div(&c)
}

/// `⟨(log x)^k⟩_n`: the k-th s-derivative of `⟨x^s⟩_n` at `s = 0`.
pub fn log_moment(family: &FamilySpec, n: usize, k: usize) -> Result<Scalar> {
    if k == 0 {
        return power_moment(family, n, &Scalar::zero());
    }
    Ok(fd_derivative(k, |s| power_moment(family, n, s))?.scalar())
}

// ---------------------------------------------------------------------------
// exponential functional

/// Majorant for the exponential-series terms: `|T_i| ≤ v_i = a^i/i!·B(k+i)`
/// with `B(j) = Σ_l |c_l| ∫ ω |x|^{j+l}` (`c_l` the monomial coefficients of
/// `p_n²`), or `B = h_n` on Jacobi where `|x| ≤ 1`.  Termwise Γ ratios give
/// `B(j+1)/B(j) ≤ j+α+1+2n` (Laguerre) and `B(j+2)/B(j) ≤ (j+1)/2+n` (Hermite).
struct TailModel {
    kind: FamilyKind,
    a: f64,
    k: usize,
    n: usize,
    alpha: f64,
    /// `(l, ln|c_l|)` for the nonzero coefficients of `p_n²`.
    ln_coeffs: Vec<(usize, f64)>,
    ln_hn: f64,
}

impl TailModel {
    fn new(family: &FamilySpec, n: usize, k: usize, a: f64) -> Result<Self> {
        let p = poly_coeffs(family, n)?;
        let ln_coeffs = p
            .try_mul(&p)?
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(_, c)| c.to_f64() != 0.0)
            .map(|(l, c)| (l, c.to_f64().abs().ln()))
            .collect();
        let ln_hn = match family {
            FamilySpec::Jacobi { .. } => norm_h(family, n)?.to_f64().ln(),
            _ => 0.0,
        };
        let alpha = family.alpha().map_or(0.0, Scalar::to_f64);
        Ok(TailModel { kind: family.kind(), a, k, n, alpha, ln_coeffs, ln_hn })
    }

    fn ln_b(&self, j: usize) -> f64 {
        let ln_g = |l: usize| match self.kind {
            FamilyKind::Laguerre => ln_gamma_f64((j + l) as f64 + self.alpha + 1.0),
            _ => ln_gamma_f64(((j + l) as f64 + 1.0) / 2.0),
        };
        let terms: Vec<f64> = self.ln_coeffs.iter().map(|&(l, c)| c + ln_g(l)).collect();
        let top = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        top + terms.iter().map(|x| (x - top).exp()).sum::<f64>().ln()
    }

    fn v(&self, i: usize) -> f64 {
        let ln_b = if self.kind == FamilyKind::Jacobi { self.ln_hn } else { self.ln_b(self.k + i) };
        (i as f64 * self.a.ln() - ln_gamma_f64(i as f64 + 1.0) + ln_b).exp()
    }

    /// Bound on `Σ_{i>m} |T_i|`, or ∞ when the majorant does not converge.
    fn after(&self, m: usize) -> f64 {
        let (a, k, n) = (self.a, self.k as f64, self.n as f64);
        let geometric = |first: f64, q: f64| if q >= 1.0 { f64::INFINITY } else { first / (1.0 - q) };
        match self.kind {
            FamilyKind::Laguerre => {
                // q_i = a(k+i+α+1+2n)/(i+1) is monotone in i with limit a
                let i = (m + 1) as f64;
                let q = a * (k + i + self.alpha + 1.0 + 2.0 * n) / (i + 1.0);
                geometric(self.v(m + 1), q.max(a))
            }
            FamilyKind::Hermite => {
                // odd k+i vanish; q_i = a²((k+i+1)/2+n)/((i+1)(i+2)) decreases in i
                let i = (m + 2) as f64;
                let q = a * a * ((k + i + 1.0) / 2.0 + n) / ((i + 1.0) * (i + 2.0));
                geometric(self.v(m + 2), q)
            }
            FamilyKind::Jacobi => geometric(self.v(m + 1), a / (m as f64 + 2.0)),
        }
    }
}

/// Partial sum of the exponential series and the bound on what is left.
#[derive(Clone, Debug, PartialEq)]
pub struct PartialSum {
    pub sum: Scalar,
    pub tail_bound: f64,
    pub terms: usize,
}

/// Sums at most `max_terms` terms, stopping early once the tail bound is
/// below `stop_rel·|S|` when `stop_rel` is given.
fn exp_partial(
    family: &FamilySpec,
    n: usize,
    k: usize,
    a: &Scalar,
    backend: Backend,
    max_terms: usize,
    stop_rel: Option<f64>,
) -> Result<PartialSum> {
    let model = TailModel::new(family, n, k, a.to_f64())?;
    let hermite = matches!(family, FamilySpec::Hermite);
    let mut sum = Scalar::zero();
    let mut coef = Scalar::one();
    let mut tail = f64::INFINITY;
    let minus_a = -a;
    for m in 0..max_terms {
        let j = functional(family, n, Scalar::int((k + m) as i64), Scalar::one(), backend)?.0;
        sum = sum.try_add(&(&coef * &j))?;
        // odd Hermite terms vanish; the bound from the last even one stands
        if !(hermite && (k + m) % 2 == 1) {
            tail = model.after(m);
            if stop_rel.is_some_and(|r| tail <= r * sum.to_f64().abs()) {
                return Ok(PartialSum { sum, tail_bound: tail, terms: m + 1 });
            }
        }
        coef = &(&coef * &minus_a) / &Scalar::int(m as i64 + 1);
    }
    Ok(PartialSum { sum, tail_bound: tail, terms: max_terms })
}

/// The first `terms` terms of `Σ_m (−a)^m/m! ⟨x^{k+m}⟩_n` with the tail bound.
pub fn exp_partial_sum(family: &FamilySpec, n: usize, k: usize, a: &Scalar, terms: usize) -> Result<PartialSum> {
    exp_partial(family, n, k, a, Backend::Exact, terms, None)
}

fn exp_series(family: &FamilySpec, n: usize, k: usize, a: &Scalar, backend: Backend) -> Result<(Scalar, String, u64)> {
    // the Laguerre series only converges for a < 1
    let laguerre = matches!(family, FamilySpec::Laguerre { .. });
    let mut best = None;
    if !(laguerre && a.to_f64() >= 1.0) {
        let p = exp_partial(family, n, k, a, backend, EXP_TERM_CAP, Some(EXP_TAIL_TOL))?;
        if p.tail_bound <= EXP_TAIL_TOL * p.sum.to_f64().abs() {
            let s = p.sum.to_float();
            let v = Scalar::Float { value: s.to_f64(), abs_err: s.abs_err() + p.tail_bound };
            return Ok((v, "series".into(), p.terms as u64));
        }
        best = Some(p);
    }
    if let FamilySpec::Laguerre { alpha } = family {
        // x^α e^{−x} x^k e^{−a x} = ω^{1+a} x^{k−αa}
        let s = Scalar::int(k as i64).try_sub(&(alpha * a))?;
        let (v, route, terms) = functional(family, n, s, a.add_int(1), backend)?;
        return Ok((v, format!("reduction/{route}"), terms));
    }
    let p = best.expect("series attempted");
    Err(Error::Accuracy { estimate: p.sum.to_f64(), error: p.tail_bound })
}

/// `⟨x^k e^{−a x}⟩_n = Σ_m (−a)^m/m! ⟨x^{k+m}⟩_n`, truncated once the tail
/// bound drops below `EXP_TAIL_TOL` relative; the bound is part of the
/// returned error.
pub fn exp_functional(family: &FamilySpec, n: usize, k: usize, a: &Scalar) -> Result<Scalar> {
    Ok(exp_impl(family, n, k, a, Backend::Exact)?.0)
}

fn exp_impl(family: &FamilySpec, n: usize, k: usize, a: &Scalar, backend: Backend) -> Result<(Scalar, String, u64)> {
    if !a.to_f64().is_finite() || a.is_negative() {
        return Err(Error::Precondition(format!("exponential rate a = {a} must be finite and nonnegative")));
    }
    if a.is_exact_zero() {
        return functional(family, n, Scalar::int(k as i64), Scalar::one(), backend);
    }
    exp_series(family, n, k, a, backend)
}

// ---------------------------------------------------------------------------
// weight-log functional

fn weight_log_impl(family: &FamilySpec, n: usize, k: &Scalar, backend: Backend) -> Result<(Scalar, String, u64)> {
    let beta = k.add_int(1);
    let (j, _, terms) = functional(family, n, Scalar::zero(), beta.clone(), backend)?;
    let fam = if backend == Backend::Float { family.to_float() } else { family.clone() };
    let degrees = [n, n];
    let at = |x: &Scalar| beta.try_add(x);
    let bf = beta.to_float();
    let bracket = match &fam {
        FamilySpec::Laguerre { alpha } => {
            // d/dk log c₀ − 1/(k+1) − α(1 + ln(1+k))
            let d = fd_log_derivative(|x| Ok(laguerre_c0(&degrees, alpha, &Scalar::zero(), &at(x)?)?.value))?;
            let lb = bf.to_f64().ln();
            let ln_b = Scalar::Float { value: lb, abs_err: EPS * lb.abs() + bf.abs_err() / bf.to_f64() };
            d.try_sub(&Scalar::one().checked_div(&bf)?)?.try_sub(&(alpha * &ln_b.add_int(1)))?
        }
        FamilySpec::Hermite => {
            // d/dk log F_A − (N+1)/(2(k+1))
            let big_n = 2 * hermite_to_laguerre(n).nu as i64;
            let d = fd_log_derivative(|x| Ok(hermite_fa(&degrees, &Scalar::zero(), &at(x)?)?.value))?;
            d.try_sub(&Scalar::ratio(big_n + 1, 2).checked_div(&beta)?)?
        }
        FamilySpec::Jacobi { alpha, gamma } => {
            // d/dk log c̃₀ + αH_Λ + γH_Δ − (α+γ)(H_{Λ+Δ+1} − ln 2)
            let d = fd_log_derivative(|x| {
                let b = at(x)?;
                Ok(jacobi_c0(&degrees, alpha, gamma, &(alpha * &b), &(gamma * &b), 0)?.value)
            })?;
            let (lam, del) = (alpha * &beta, gamma * &beta);
            let ag = alpha.try_add(gamma)?;
            let h_sum = harmonic_general(&lam.try_add(&del)?.add_int(1))?;
            let ln2 = Scalar::float_rel(std::f64::consts::LN_2, EPS);
            d.try_add(&(alpha * &harmonic_general(&lam)?))?
                .try_add(&(gamma * &harmonic_general(&del)?))?
                .try_sub(&(&ag * &h_sum.try_sub(&ln2)?))?
        }
    };
    Ok((&j * &bracket, "finite_difference".into(), terms))
}

/// `⟨ω^k log ω⟩_n = d/dk 𝒥_{n,n}(0, β=k+1)`, from the logarithmic derivative
/// of the closed form with only the hypergeometric part differentiated
/// numerically.
pub fn weight_log_functional(family: &FamilySpec, n: usize, k: &Scalar) -> Result<Scalar> {
    Ok(weight_log_impl(family, n, k, Backend::Exact)?.0)
}

// ---------------------------------------------------------------------------
// dispatch

/// Evaluates any moment request, honouring `backend` and `normalized`.
pub fn moment(req: &MomentRequest) -> Result<MomentReport> {
    check_degree(req.n)?;
    let (fam, n, be) = (&req.family, req.n, req.backend);
    let (value, method, terms) = match &req.kind {
        MomentKind::Power { s } => functional(fam, n, s.clone(), Scalar::one(), be)?,
        MomentKind::Krein { k } => functional(fam, n, Scalar::zero(), k.add_int(1), be)?,
        MomentKind::Log { k: 0 } => functional(fam, n, Scalar::zero(), Scalar::one(), be)?,
        MomentKind::Log { k } => {
            let d = fd_derivative(*k, |s| Ok(functional(fam, n, s.clone(), Scalar::one(), be)?.0))?;
            (d.scalar(), "finite_difference".into(), (FD_LEVELS * (k + 1)) as u64)
        }
        MomentKind::Exponential { k, a } => exp_impl(fam, n, *k, a, be)?,
        MomentKind::WeightLog { k } => weight_log_impl(fam, n, k, be)?,
    };
    let value = if req.normalized {
        let h = norm_h(fam, n)?;
        value.checked_div(&if be == Backend::Float { h.to_float() } else { h })?
    } else {
        value
    };
    Ok(MomentReport { value, method, terms })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::EULER_GAMMA;

    fn s(x: &str) -> Scalar {
        x.parse().unwrap()
    }

    fn close(v: &Scalar, want: f64, tol: f64) {
        assert!((v.to_f64() - want).abs() <= tol * want.abs().max(1.0), "{v} vs {want}");
    }

    #[test]
    fn power_examples() {
        let lag = FamilySpec::laguerre(s("3/2"));
        assert_eq!(power_moment(&lag, 0, &s("2")).unwrap(), crate::special::gamma(&s("9/2")).unwrap());
        let half_sqrt_pi = &Scalar::ratio(1, 2) * &Scalar::sqrt_pi();
        assert_eq!(power_moment(&FamilySpec::Hermite, 0, &s("2")).unwrap(), half_sqrt_pi);
        // ∫ x(1−x)² e^{−x} dx = 1 − 4 + 6
        assert_eq!(power_moment(&FamilySpec::laguerre(Scalar::zero()), 1, &s("1")).unwrap(), s("3"));
    }

    #[test]
    fn krein_examples() {
        assert_eq!(krein_moment(&FamilySpec::laguerre(s("1")), 0, &s("1")).unwrap(), s("1/4"));
        assert_eq!(krein_moment(&FamilySpec::jacobi(s("1"), s("1")), 0, &s("1")).unwrap(), s("16/15"));
        let v = krein_moment(&FamilySpec::Hermite, 0, &s("1")).unwrap();
        close(&v, (std::f64::consts::PI / 2.0).sqrt(), 1e-15);
    }

    #[test]
    fn log_moment_euler() {
        let v = log_moment(&FamilySpec::laguerre(Scalar::zero()), 0, 1).unwrap();
        close(&v, -EULER_GAMMA, 1e-10);
        assert!(v.abs_err() < 1e-8);
    }

    #[test]
    fn exp_examples() {
        let lag = FamilySpec::laguerre(Scalar::zero());
        assert_eq!(exp_functional(&lag, 0, 0, &Scalar::zero()).unwrap(), Scalar::one());
        let v = exp_functional(&lag, 0, 0, &Scalar::one()).unwrap();
        assert_eq!(v, s("1/2"));
        // a < 1 goes through the series: ∫ e^{−3x/2} = 2/3
        let v = exp_functional(&lag, 0, 0, &s("1/2")).unwrap();
        close(&v, 2.0 / 3.0, 1e-12);
        assert!(!v.is_exact());
    }

    #[test]
    fn weight_log_examples() {
        let v = weight_log_functional(&FamilySpec::Hermite, 0, &Scalar::zero()).unwrap();
        close(&v, -0.5 * std::f64::consts::PI.sqrt(), 1e-10);
        let v = weight_log_functional(&FamilySpec::laguerre(Scalar::zero()), 0, &Scalar::zero()).unwrap();
        close(&v, -1.0, 1e-10);
        // k = 1: ∫ e^{−2x}(−x) dx
        let v = weight_log_functional(&FamilySpec::laguerre(Scalar::zero()), 0, &Scalar::one()).unwrap();
        close(&v, -0.25, 1e-10);
    }

    #[test]
    fn normalized_first_moment() {
        for n in 0..4 {
            let req = MomentRequest::new(FamilySpec::laguerre(s("2")), n, MomentKind::Power { s: Scalar::one() }).normalized(true);
            assert_eq!(moment(&req).unwrap().value, Scalar::int(2 * n as i64 + 3));
        }
    }
}
