//! Krein-like functionals `𝒥 = ∫ ω(x)^β x^s p_{m1}(x)…p_{mr}(x) dx`.
//!
//! Three closed-form routes are available:
//! * `lauricella` — any r ≥ 1, via Lauricella `F_A` (Laguerre, Hermite) or
//!   the Srivastava–Daoust array (Jacobi);
//! * `ode` — r = 2, via `x^s p_m` and product linearization;
//! * `algebraic` — r = 2, via explicit single-sum connection formulas.
//!
//! `oracle` expands everything in monomials, and `auto` picks a route.
//!
//! For non-integer `s` the Hermite and Jacobi kernels are `|x|^s`.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};
use crate::linearize::{hermite_xs, jacobi_shift_pair, jacobi_xs, laguerre_explicit_inner, laguerre_product, laguerre_xs};
use crate::oracle::oracle_functional;
use crate::poly::{check_degree, hermite_to_laguerre, jacobi_connection, jacobi_norm, monomial_inversion, FamilySpec};
use crate::scalar::{ExactValue, Scalar};
use crate::series::{hyp2f1_terminating, lauricella_fa, srivastava_daoust, SrivastavaDaoustSpec, TerminatingSeriesSpec};
use crate::special::{binomial_int, factorial, gamma, gen_binomial, pochhammer, pow, pow_int, rgamma};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Route {
    Lauricella,
    Ode,
    Algebraic,
    Oracle,
    Auto,
}

impl Route {
    pub const CLOSED_FORM: [Route; 3] = [Route::Lauricella, Route::Ode, Route::Algebraic];

    pub fn name(self) -> &'static str {
        match self {
            Route::Lauricella => "lauricella",
            Route::Ode => "ode",
            Route::Algebraic => "algebraic",
            Route::Oracle => "oracle",
            Route::Auto => "auto",
        }
    }
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Route {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "lauricella" => Ok(Route::Lauricella),
            "ode" => Ok(Route::Ode),
            "algebraic" => Ok(Route::Algebraic),
            "oracle" => Ok(Route::Oracle),
            "auto" => Ok(Route::Auto),
            _ => Err(Error::Parse(format!("unknown route {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Backend {
    #[default]
    Exact,
    Float,
}

impl Backend {
    pub fn name(self) -> &'static str {
        match self {
            Backend::Exact => "exact",
            Backend::Float => "float",
        }
    }
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Backend {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "exact" => Ok(Backend::Exact),
            "float" => Ok(Backend::Float),
            _ => Err(Error::Parse(format!("unknown backend {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FunctionalRequest {
    pub family: FamilySpec,
    pub degrees: Vec<usize>,
    pub s: Scalar,
    pub beta: Scalar,
    pub route: Route,
    pub backend: Backend,
}

impl FunctionalRequest {
    /// Exact-backend request on the `auto` route.
    pub fn new(family: FamilySpec, degrees: Vec<usize>, s: Scalar, beta: Scalar) -> Self {
        FunctionalRequest { family, degrees, s, beta, route: Route::Auto, backend: Backend::Exact }
    }

    pub fn with_route(mut self, route: Route) -> Self {
        self.route = route;
        self
    }

    pub fn with_backend(mut self, backend: Backend) -> Self {
        self.backend = backend;
        self
    }

    pub fn total_degree(&self) -> usize {
        self.degrees.iter().sum()
    }

    /// Integer kernel exponent, if `s` is one.
    pub fn s_int(&self) -> Option<usize> {
        self.s.as_usize()
    }

    /// Checks the integrability conditions and basic shape.
    pub fn validate(&self) -> Result<()> {
        if self.degrees.is_empty() {
            return Err(Error::Precondition("at least one degree is required".into()));
        }
        for x in [&self.s, &self.beta].into_iter().chain(self.family.alpha()).chain(self.family.gamma()) {
            if !x.to_f64().is_finite() {
                return Err(Error::Precondition(format!("parameter {x} is not finite")));
            }
        }
        if !self.beta.is_positive() {
            return Err(Error::Precondition("beta must be positive".into()));
        }
        for &m in &self.degrees {
            check_degree(m)?;
        }
        let minus_one = Scalar::int(-1);
        // Laguerre only needs αβ+s > −1; the |x|^s kernels need s > −1
        if !matches!(self.family, FamilySpec::Laguerre { .. }) && !self.s.gt(&minus_one) {
            return Err(Error::Precondition(format!("s = {} must exceed -1", self.s)));
        }
        match &self.family {
            FamilySpec::Laguerre { alpha } => {
                if !(alpha * &self.beta).try_add(&self.s)?.gt(&minus_one) {
                    return Err(Error::Precondition(format!(
                        "alpha > -(s+1)/beta required (alpha = {alpha}, s = {}, beta = {})",
                        self.s, self.beta
                    )));
                }
            }
            FamilySpec::Hermite => {}
            FamilySpec::Jacobi { alpha, gamma } => {
                for (name, p) in [("alpha", alpha), ("gamma", gamma)] {
                    if !(p * &self.beta).gt(&minus_one) {
                        return Err(Error::Precondition(format!("{name} > -1/beta required ({name} = {p}, beta = {})", self.beta)));
                    }
                }
            }
        }
        Ok(())
    }

    /// Parameters as the backend sees them: the float backend demotes the
    /// weight parameters and β; an integer `s` stays exact.
    pub fn effective(&self) -> FunctionalRequest {
        match self.backend {
            Backend::Exact => self.clone(),
            Backend::Float => FunctionalRequest {
                family: self.family.to_float(),
                s: if self.s.as_integer().is_some() { self.s.clone() } else { self.s.to_float() },
                beta: self.beta.to_float(),
                ..self.clone()
            },
        }
    }

    /// Exact inputs whose Γ arguments land on ℤ ∪ (ℤ+½), so every route
    /// returns an exact value.
    pub fn is_lattice(&self) -> bool {
        let half_int = |x: &Scalar| x.as_rational().is_some_and(|q| (q * BigRational::from_integer(2.into())).is_integer());
        if self.s.as_integer().is_none() || self.beta.as_rational().is_none() || !self.family.is_rational() {
            return false;
        }
        match &self.family {
            FamilySpec::Laguerre { alpha } => half_int(&(alpha * &self.beta)),
            FamilySpec::Hermite => true,
            FamilySpec::Jacobi { alpha, gamma } => half_int(&(alpha * &self.beta)) && half_int(&(gamma * &self.beta)),
        }
    }

    fn pair(&self, route: Route) -> Result<(usize, usize)> {
        match self.degrees.as_slice() {
            &[m, n] => Ok((m, n)),
            _ => Err(Error::RouteInapplicable(format!("{route} route needs exactly two degrees, got {}", self.degrees.len()))),
        }
    }

    fn integer_s(&self, route: Route) -> Result<usize> {
        self.s_int()
            .ok_or_else(|| Error::RouteInapplicable(format!("{route} route needs a nonnegative integer s, got {}", self.s)))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EvaluationReport {
    pub value: Scalar,
    pub route: Route,
    pub terms: u64,
    pub wall_time: Duration,
    pub notes: Vec<String>,
}

impl EvaluationReport {
    pub fn error_budget(&self) -> f64 {
        self.value.abs_err()
    }
}

/// A route's value plus the number of summed terms.
#[derive(Clone, Debug, PartialEq)]
pub(crate) struct RouteValue {
    pub value: Scalar,
    pub terms: u64,
}

fn rv(value: Scalar, terms: u64) -> Result<RouteValue> {
    Ok(RouteValue { value, terms })
}

fn recip(x: &Scalar) -> Result<Scalar> {
    Scalar::one().checked_div(x)
}

fn half(x: &Scalar) -> Scalar {
    x * &Scalar::ratio(1, 2)
}

fn signed(c: Scalar, odd: bool) -> Scalar {
    if odd { -c } else { c }
}

fn pi() -> Scalar {
    Scalar::Exact(ExactValue::new(BigRational::one(), 1, 2).expect("pi"))
}

/// Hermite parity: the integrand is odd, so the functional vanishes.
fn hermite_vanishes(degrees: &[usize], s: &Scalar) -> bool {
    let m: usize = degrees.iter().sum();
    match s.as_usize() {
        Some(si) => (si + m) % 2 == 1,
        None => m % 2 == 1,
    }
}

// ---------------------------------------------------------------------------
// lauricella route

/// `Γ(μ+1) Π C(m_i+α, m_i) F_A(μ+1; −m; α+1; 1/β)` with `μ = βα+s`.
pub(crate) fn laguerre_c0(degrees: &[usize], alpha: &Scalar, s: &Scalar, beta: &Scalar) -> Result<RouteValue> {
    let a = (alpha * beta).try_add(s)?.add_int(1);
    let r = degrees.len();
    let spec = TerminatingSeriesSpec::new(
        a.clone(),
        degrees.iter().map(|&m| Scalar::int(-(m as i64))).collect(),
        vec![alpha.add_int(1); r],
        vec![recip(beta)?; r],
    )?;
    let fa = lauricella_fa(&spec)?;
    let mut c0 = gamma(&a)?;
    for &m in degrees {
        c0 = &c0 * &gen_binomial(&alpha.add_int(m as i64), m);
    }
    rv(&c0 * &fa.value, fa.terms)
}

fn laguerre_lauricella(req: &FunctionalRequest, alpha: &Scalar) -> Result<RouteValue> {
    let c0 = laguerre_c0(&req.degrees, alpha, &req.s, &req.beta)?;
    let a = (alpha * &req.beta).try_add(&req.s)?.add_int(1);
    rv(&pow(&req.beta, &-a)? * &c0.value, c0.terms)
}

/// The β-dependent Lauricella factor of the Hermite functional:
/// `F_A((s+N+1)/2; −k_i; ν_i+½; 1/β)`.
pub(crate) fn hermite_fa(degrees: &[usize], s: &Scalar, beta: &Scalar) -> Result<RouteValue> {
    let hl: Vec<_> = degrees.iter().map(|&m| hermite_to_laguerre(m)).collect();
    let big_n: usize = hl.iter().map(|h| h.nu).sum();
    let a = half(&s.add_int(big_n as i64 + 1));
    let r = degrees.len();
    let spec = TerminatingSeriesSpec::new(
        a,
        hl.iter().map(|h| Scalar::int(-(h.degree as i64))).collect(),
        hl.iter().map(|h| h.param.add_int(1)).collect(),
        vec![recip(beta)?; r],
    )?;
    let v = lauricella_fa(&spec)?;
    rv(v.value, v.terms)
}

fn hermite_lauricella(req: &FunctionalRequest) -> Result<RouteValue> {
    if hermite_vanishes(&req.degrees, &req.s) {
        return rv(Scalar::zero(), 0);
    }
    let hl: Vec<_> = req.degrees.iter().map(|&m| hermite_to_laguerre(m)).collect();
    let big_n: usize = hl.iter().map(|h| h.nu).sum();
    let a = half(&req.s.add_int(big_n as i64 + 1));
    // Γ((s+N+1)/2) β^{−(s+N+1)/2} Π (−1)^{k_i} m_i!/(½)_{(m_i+ν_i)/2} C(k_i+ν_i−½, k_i)
    let mut pre = &gamma(&a)? * &pow(&req.beta, &-&a)?;
    for h in &hl {
        let c = &h.scale * &gen_binomial(&h.param.add_int(h.degree as i64), h.degree);
        pre = &pre * &signed(c, h.sign < 0);
    }
    let fa = hermite_fa(&req.degrees, &req.s, &req.beta)?;
    rv(&pre * &fa.value, fa.terms)
}

/// `Π C(m_i+α, m_i) · SD(Λ+l+1; (−m_i, α+γ+m_i+1); Λ+Δ+l+2; α+1; 1)`.
pub(crate) fn jacobi_c0(degrees: &[usize], alpha: &Scalar, gamma_p: &Scalar, lam: &Scalar, del: &Scalar, l: usize) -> Result<RouteValue> {
    let ag = alpha.try_add(gamma_p)?;
    let ld = lam.try_add(del)?;
    let r = degrees.len();
    let spec = SrivastavaDaoustSpec::new(
        lam.add_int(l as i64 + 1),
        degrees.iter().map(|&m| (Scalar::int(-(m as i64)), ag.add_int(m as i64 + 1))).collect(),
        ld.add_int(l as i64 + 2),
        vec![alpha.add_int(1); r],
        vec![Scalar::one(); r],
    )?;
    let sd = srivastava_daoust(&spec)?;
    let mut c = sd.value;
    for &m in degrees {
        c = &c * &gen_binomial(&alpha.add_int(m as i64), m);
    }
    rv(c, sd.terms)
}

fn jacobi_lauricella(req: &FunctionalRequest, alpha: &Scalar, gamma_p: &Scalar) -> Result<RouteValue> {
    let s = req.integer_s(Route::Lauricella)?;
    let (lam, del) = (alpha * &req.beta, gamma_p * &req.beta);
    let ld = lam.try_add(&del)?;
    // x^s = Σ_l C(s,l) (−2)^l ((1−x)/2)^l; each power of (1−x)/2 shifts Λ
    let b0 = jacobi_norm(&lam, &del, 0)?;
    let mut acc = Scalar::zero();
    let mut terms = 0;
    for l in 0..=s {
        let c = jacobi_c0(&req.degrees, alpha, gamma_p, &lam, &del, l)?;
        terms += c.terms;
        let w = &(&Scalar::bigint(binomial_int(s, l)) * &pow_int(&Scalar::int(-2), l as i64)?)
            * &(pochhammer(&lam.add_int(1), l) / pochhammer(&ld.add_int(2), l));
        acc = acc.try_add(&(&w * &c.value))?;
    }
    rv(&b0 * &acc, terms)
}

pub(crate) fn lauricella_route(req: &FunctionalRequest) -> Result<RouteValue> {
    match &req.family {
        FamilySpec::Laguerre { alpha } => laguerre_lauricella(req, alpha),
        FamilySpec::Hermite => hermite_lauricella(req),
        FamilySpec::Jacobi { alpha, gamma } => jacobi_lauricella(req, alpha, gamma),
    }
}

// ---------------------------------------------------------------------------
// ode route

fn laguerre_ode(req: &FunctionalRequest, alpha: &Scalar) -> Result<RouteValue> {
    let (m, n) = req.pair(Route::Ode)?;
    let beta = &req.beta;
    // x^{s+αβ} = x^{γ'} x^α with γ' = s + α(β−1)
    let gp = req.s.try_add(&(alpha * &beta.add_int(-1)))?;
    let g = gp
        .as_usize()
        .ok_or_else(|| Error::RouteInapplicable(format!("ode route needs s + alpha(beta-1) = {gp} to be a nonnegative integer")))?;
    check_degree(m + g)?;
    let cl = laguerre_xs(m, g, alpha)?;
    // w_k = (α+1)_k/k! ((β−1)/β)^k
    let ratio = beta.add_int(-1).checked_div(beta)?;
    let kmax = m + g + n;
    let mut w = Vec::with_capacity(kmax + 1);
    let mut cur = Scalar::one();
    for k in 0..=kmax {
        w.push(cur.clone());
        cur = &(&cur * &alpha.add_int(k as i64 + 1)) * &(&ratio / &Scalar::int(k as i64 + 1));
    }
    let mut acc = Scalar::zero();
    let mut terms = 0;
    for (j, cj) in cl.iter().enumerate() {
        if cj.is_exact_zero() {
            continue;
        }
        let mut inner = Scalar::zero();
        for (k, d) in laguerre_product(j, n, alpha)?.iter().enumerate() {
            inner = inner.try_add(&(d * &w[k]))?;
            terms += 1;
        }
        acc = acc.try_add(&(cj * &inner))?;
    }
    let pre = &gamma(&alpha.add_int(1))? * &pow(beta, &(-alpha).add_int(-1))?;
    rv(&pre * &acc, terms)
}

fn hermite_ode(req: &FunctionalRequest) -> Result<RouteValue> {
    let (m, n) = req.pair(Route::Ode)?;
    let s = req.integer_s(Route::Ode)?;
    if (m + n + s) % 2 == 1 {
        return rv(Scalar::zero(), 0);
    }
    let ratio = req.beta.add_int(-1).checked_div(&req.beta)?;
    let xs = hermite_xs(m, s)?;
    let mut acc = Scalar::zero();
    let mut terms = 0;
    for (big_j, c) in xs.iter().enumerate() {
        if c.is_exact_zero() {
            continue;
        }
        let mut inner = Scalar::zero();
        for k in 0..=big_j.min(n) {
            // ∫ e^{−βx²} H_J H_n expanded: only even N = J+n−2k survive
            let big_n = big_j + n - 2 * k;
            if big_n % 2 == 1 {
                continue;
            }
            let p = (big_n / 2) as i64;
            let c = Scalar::bigint(binomial_int(big_j, k) * binomial_int(n, k) * factorial(k) * BigInt::from(2).pow((big_j + n - k) as u32));
            let g = &pi() * &rgamma(&Scalar::ratio(1 - 2 * p, 2))?;
            inner = inner.try_add(&(&(&c * &g) * &pow_int(&ratio, p)?))?;
            terms += 1;
        }
        acc = acc.try_add(&(c * &inner))?;
    }
    rv(&acc * &pow(&req.beta, &Scalar::ratio(-1, 2))?, terms)
}

fn jacobi_ode(req: &FunctionalRequest, alpha: &Scalar, gamma_p: &Scalar) -> Result<RouteValue> {
    let (m, n) = req.pair(Route::Ode)?;
    let s = req.integer_s(Route::Ode)?;
    let (lam, del) = (alpha * &req.beta, gamma_p * &req.beta);
    let an = jacobi_connection(n, alpha, gamma_p, &lam, &del)?;
    let am = jacobi_connection(m, alpha, gamma_p, &lam, &del)?;
    let h = (0..=m).map(|j| jacobi_norm(&lam, &del, j)).collect::<Result<Vec<_>>>()?;
    let mut acc = Scalar::zero();
    let mut terms = 0;
    for (k, ank) in an.iter().enumerate() {
        if ank.is_exact_zero() {
            continue;
        }
        let cp = jacobi_xs(k, s, &lam, &del)?;
        let mut inner = Scalar::zero();
        for j in 0..=m.min(k + s) {
            inner = inner.try_add(&(&(&am[j] * &cp[j]) * &h[j]))?;
            terms += 1;
        }
        acc = acc.try_add(&(ank * &inner))?;
    }
    rv(acc, terms)
}

pub(crate) fn ode_route(req: &FunctionalRequest) -> Result<RouteValue> {
    match &req.family {
        FamilySpec::Laguerre { alpha } => laguerre_ode(req, alpha),
        FamilySpec::Hermite => hermite_ode(req),
        FamilySpec::Jacobi { alpha, gamma } => jacobi_ode(req, alpha, gamma),
    }
}

// ---------------------------------------------------------------------------
// algebraic route

fn laguerre_algebraic(req: &FunctionalRequest, alpha: &Scalar) -> Result<RouteValue> {
    let (m, n) = req.pair(Route::Algebraic)?;
    let beta = &req.beta;
    let a = (alpha * beta).try_add(&req.s)?.add_int(1);
    let x = recip(beta)?;
    let c = alpha.add_int(1);
    let mut acc = Scalar::zero();
    let mut terms = 0;
    for k in n.abs_diff(m)..=n + m {
        // (−1)^k (α+1)_k / (2^k (m+n−k)!) · inner_k · 2F1(−k, μ+1; α+1; 1/β)
        let inner = laguerre_explicit_inner(n, m, k, alpha)?;
        let f = hyp2f1_terminating(&Scalar::int(-(k as i64)), &a, &c, &x)?;
        let den = Scalar::bigint(BigInt::from(2).pow(k as u32) * factorial(m + n - k));
        let t = &(&(&pochhammer(&c, k) / &den) * &inner) * &f;
        acc = acc.try_add(&signed(t, k % 2 == 1))?;
        terms += k as u64 + 1;
    }
    let pre = &(&pow_int(&Scalar::int(-2), (n + m) as i64)? * &pow(beta, &-&a)?) * &gamma(&a)?;
    rv(&pre * &acc, terms)
}

fn hermite_algebraic(req: &FunctionalRequest) -> Result<RouteValue> {
    let (m, n) = req.pair(Route::Algebraic)?;
    let s = req.integer_s(Route::Algebraic)?;
    if (m + n + s) % 2 == 1 {
        return rv(Scalar::zero(), 0);
    }
    let (mi, ni, si) = (m as i64, n as i64, s as i64);
    let half_beta = half(&req.beta);
    let mut acc = Scalar::zero();
    let mut terms = 0;
    for k in 0..=m.min(n) {
        let ki = k as i64;
        let a1 = Scalar::ratio(2 * ki - mi - ni, 2);
        let a2 = Scalar::ratio(1 + 2 * ki - mi - ni, 2);
        let c = Scalar::ratio(1 + 2 * ki - mi - ni - si, 2);
        let f = hyp2f1_terminating(&a1, &a2, &c, &req.beta)?;
        let g = gamma(&Scalar::ratio(1 - 2 * ki + mi + ni + si, 2))?;
        let w = &Scalar::bigint(binomial_int(m, k) * binomial_int(n, k) * factorial(k)) * &pow_int(&half_beta, ki)?;
        acc = acc.try_add(&(&(&w * &g) * &f))?;
        terms += (m + n) as u64 / 2 + 1;
    }
    let pre = &pow_int(&Scalar::int(2), mi + ni)? * &pow(&req.beta, &Scalar::ratio(-(mi + ni + si + 1), 2))?;
    rv(&pre * &acc, terms)
}

fn jacobi_algebraic(req: &FunctionalRequest, alpha: &Scalar, gamma_p: &Scalar) -> Result<RouteValue> {
    let (m, n) = req.pair(Route::Algebraic)?;
    let s = req.integer_s(Route::Algebraic)?;
    // P_n P_m = Σ_j e_j P_j^(Λ,Δ), x^s = Σ_j d_j P_j^(Λ,Δ); orthogonality pairs them
    let e = jacobi_shift_pair(n, m, alpha, gamma_p, &req.beta)?;
    let d = monomial_inversion(s, &e.family)?;
    let (lam, del) = (e.family.alpha().expect("jacobi").clone(), e.family.gamma().expect("jacobi").clone());
    let mut acc = Scalar::zero();
    let mut terms = 0;
    for (j, dj) in d.iter().enumerate().take(n + m + 1) {
        let ej = e.get(j);
        if ej.is_exact_zero() || dj.is_exact_zero() {
            continue;
        }
        acc = acc.try_add(&(&(&ej * dj) * &jacobi_norm(&lam, &del, j)?))?;
        terms += 1;
    }
    rv(acc, terms)
}

pub(crate) fn algebraic_route(req: &FunctionalRequest) -> Result<RouteValue> {
    match &req.family {
        FamilySpec::Laguerre { alpha } => laguerre_algebraic(req, alpha),
        FamilySpec::Hermite => hermite_algebraic(req),
        FamilySpec::Jacobi { alpha, gamma } => jacobi_algebraic(req, alpha, gamma),
    }
}

// ---------------------------------------------------------------------------
// public entry points

fn run_route(route: Route, req: &FunctionalRequest) -> Result<RouteValue> {
    match route {
        Route::Lauricella => lauricella_route(req),
        Route::Ode => ode_route(req),
        Route::Algebraic => algebraic_route(req),
        Route::Oracle => {
            let o = oracle_functional(req)?;
            rv(o.value, o.terms)
        }
        Route::Auto => unreachable!("auto is resolved by evaluate"),
    }
}

fn checked_route(route: Route, req: &FunctionalRequest) -> Result<Scalar> {
    req.validate()?;
    Ok(run_route(route, &req.effective())?.value)
}

/// Lauricella / Srivastava–Daoust route (any r ≥ 1).
pub fn krein_lauricella(req: &FunctionalRequest) -> Result<Scalar> {
    checked_route(Route::Lauricella, req)
}

/// Linearization route (r = 2).
pub fn krein_ode(req: &FunctionalRequest) -> Result<Scalar> {
    checked_route(Route::Ode, req)
}

/// Explicit connection-coefficient route (r = 2).
pub fn krein_algebraic(req: &FunctionalRequest) -> Result<Scalar> {
    checked_route(Route::Algebraic, req)
}

/// Order in which `auto` tries routes.
pub fn auto_order(req: &FunctionalRequest) -> Vec<Route> {
    let mut order = Vec::with_capacity(4);
    if req.degrees.len() == 2 && req.backend == Backend::Exact && req.is_lattice() {
        order.push(Route::Algebraic);
    }
    for r in [Route::Lauricella, Route::Ode, Route::Algebraic] {
        if !order.contains(&r) {
            order.push(r);
        }
    }
    order
}

/// Evaluates the request on its route, resolving `auto`.
pub fn evaluate(req: &FunctionalRequest) -> Result<EvaluationReport> {
    req.validate()?;
    let eff = req.effective();
    let start = Instant::now();
    let mut notes = Vec::new();
    let (route, out) = if req.route == Route::Auto {
        let mut chosen = None;
        for r in auto_order(&eff) {
            match run_route(r, &eff) {
                Ok(v) => {
                    chosen = Some((r, v));
                    break;
                }
                Err(e) if e.is_route_local() => notes.push(format!("{r}: {e}")),
                Err(e) => return Err(e),
            }
        }
        match chosen {
            Some(c) => c,
            None => match run_route(Route::Oracle, &eff) {
                Ok(v) => {
                    notes.push("no closed-form route applies; used the oracle".into());
                    (Route::Oracle, v)
                }
                Err(e) => return Err(Error::NoRoute(format!("{}; oracle: {e}", notes.join("; ")))),
            },
        }
    } else {
        (req.route, run_route(req.route, &eff)?)
    };
    if !out.value.is_exact() && req.backend == Backend::Exact {
        notes.push("value is not exact: non-lattice parameters".into());
    }
    Ok(EvaluationReport { value: out.value, route, terms: out.terms, wall_time: start.elapsed(), notes })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(x: &str) -> Scalar {
        x.parse().unwrap()
    }

    fn req(family: FamilySpec, degrees: &[usize], sv: &str, beta: &str) -> FunctionalRequest {
        FunctionalRequest::new(family, degrees.to_vec(), s(sv), s(beta))
    }

    fn all_routes(r: &FunctionalRequest) -> Vec<Scalar> {
        [Route::Lauricella, Route::Ode, Route::Algebraic, Route::Oracle]
            .iter()
            .map(|&rt| evaluate(&r.clone().with_route(rt)).unwrap().value)
            .collect()
    }

    #[test]
    fn golden_laguerre() {
        let r = req(FamilySpec::laguerre(Scalar::int(4)), &[7, 15], "2", "3");
        let want = s("10908801561641984000/68630377364883");
        for v in all_routes(&r) {
            assert_eq!(v, want);
        }
        assert_eq!(evaluate(&r).unwrap().route, Route::Algebraic);
    }

    #[test]
    fn small_cases() {
        let lag = req(FamilySpec::laguerre(Scalar::zero()), &[0, 0], "0", "1");
        assert!(all_routes(&lag).iter().all(|v| *v == Scalar::one()));
        let her = req(FamilySpec::Hermite, &[1, 1], "0", "1");
        let two_sqrt_pi = &Scalar::int(2) * &Scalar::sqrt_pi();
        assert!(all_routes(&her).iter().all(|v| *v == two_sqrt_pi));
        let jac = req(FamilySpec::jacobi(Scalar::zero(), Scalar::zero()), &[1, 1], "0", "1");
        assert!(all_routes(&jac).iter().all(|v| *v == s("2/3")));
        let odd = req(FamilySpec::Hermite, &[2, 1], "0", "2");
        assert!(all_routes(&odd).iter().all(|v| v.is_exact_zero()));
    }

    #[test]
    fn hermite_radicals() {
        let r = req(FamilySpec::Hermite, &[2, 2], "2", "2");
        let v = all_routes(&r);
        assert!(v.iter().all(|x| *x == v[3]), "{v:?}");
    }

    #[test]
    fn jacobi_mixed() {
        let r = req(FamilySpec::jacobi(Scalar::int(1), Scalar::int(2)), &[3, 2], "2", "3");
        let v = all_routes(&r);
        assert!(v.iter().all(|x| *x == v[3]), "{v:?}");
    }

    #[test]
    fn ternary_hermite_auto() {
        let r = req(FamilySpec::Hermite, &[1, 1, 2], "0", "1");
        let rep = evaluate(&r).unwrap();
        assert_eq!(rep.route, Route::Lauricella);
        assert_eq!(rep.value, evaluate(&r.with_route(Route::Oracle)).unwrap().value);
    }

    #[test]
    fn preconditions() {
        let r = req(FamilySpec::Hermite, &[1], "0", "0");
        assert_eq!(evaluate(&r).unwrap_err(), Error::Precondition("beta must be positive".into()));
        let r = req(FamilySpec::laguerre(s("-3")), &[1], "0", "1");
        assert!(matches!(evaluate(&r), Err(Error::Precondition(_))));
        let r = req(FamilySpec::laguerre(s("1/3")), &[1, 1], "0", "1/2").with_route(Route::Ode);
        assert!(matches!(evaluate(&r), Err(Error::RouteInapplicable(_))));
    }

    #[test]
    fn float_lauricella_auto() {
        let r = req(FamilySpec::laguerre(Scalar::float(0.3)), &[2, 2], "0.7", "1.5");
        let rep = evaluate(&r).unwrap();
        assert_eq!(rep.route, Route::Lauricella);
        assert!(!rep.value.is_exact());
    }
}
