//! Independent ground truth for the closed-form routes.
//!
//! The exact path multiplies the monomial coefficients of the polynomials
//! and integrates `x^t ω^β` term by term; it never touches the series or
//! linearization machinery.  Everything else goes to adaptive quadrature
//! with a private floating-point evaluator.

use std::fmt;

use crate::error::{Error, Result};
use crate::krein::FunctionalRequest;
use crate::poly::{poly_coeffs, FamilyKind, FamilySpec, MonomialPoly};
use crate::quad::{doublings, endpoint_map, integrate, tail_map};
use crate::scalar::Scalar;
use crate::special::{binomial_int, gamma, pow, pow_int};

/// Relative tolerance used when the exact expansion is not available.
pub const DEFAULT_QUAD_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleMethod {
    ExactExpansion,
    Quadrature,
}

impl OracleMethod {
    pub fn name(self) -> &'static str {
        match self {
            OracleMethod::ExactExpansion => "exact_expansion",
            OracleMethod::Quadrature => "quadrature",
        }
    }
}

impl fmt::Display for OracleMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OracleResult {
    pub value: Scalar,
    pub method: OracleMethod,
    pub error_estimate: f64,
    /// Monomial terms integrated, or quadrature panels used.
    pub terms: u64,
}

fn divergent(what: String) -> Error {
    Error::Domain(format!("divergent integral: {what}"))
}

/// `∫ x^t ω(x)^β dx`.  For Hermite a non-integer `t` means `|x|^t`;
/// Jacobi needs a nonnegative integer `t`.
pub fn integrate_monomial_weight(family: &FamilySpec, t: &Scalar, beta: &Scalar) -> Result<Scalar> {
    if !beta.is_positive() {
        return Err(Error::Precondition("beta must be positive".into()));
    }
    let minus_one = Scalar::int(-1);
    match family {
        FamilySpec::Laguerre { alpha } => {
            // Γ(p+1)/β^{p+1}, p = t + αβ
            let p1 = t.try_add(&(alpha * beta))?.add_int(1);
            if !p1.is_positive() {
                return Err(divergent(format!("x^{t} x^(alpha*beta) at 0")));
            }
            Ok(&gamma(&p1)? * &pow(beta, &-&p1)?)
        }
        FamilySpec::Hermite => {
            if !t.gt(&minus_one) {
                return Err(divergent(format!("|x|^{t} at 0")));
            }
            if let Some(ti) = t.as_integer() {
                if ti.bit(0) {
                    return Ok(Scalar::zero());
                }
            }
            let h = &t.add_int(1) * &Scalar::ratio(1, 2);
            Ok(&gamma(&h)? * &pow(beta, &-&h)?)
        }
        FamilySpec::Jacobi { alpha, gamma: g } => {
            let ti = t
                .as_usize()
                .ok_or_else(|| Error::Domain(format!("Jacobi moment needs a nonnegative integer exponent, got {t}")))?;
            let (a, b) = (alpha * beta, g * beta);
            if !a.gt(&minus_one) || !b.gt(&minus_one) {
                return Err(divergent("Jacobi weight at an endpoint".into()));
            }
            Ok(jacobi_moments(&a, &b, ti)?.pop().expect("nonempty"))
        }
    }
}

/// `∫_{−1}^{1} x^t (1−x)^A (1+x)^G dx` for `t = 0..=tmax`, via `x = 2u−1`
/// and Beta integrals.
fn jacobi_moments(a: &Scalar, g: &Scalar, tmax: usize) -> Result<Vec<Scalar>> {
    let ag = a.try_add(g)?;
    let scale = pow(&Scalar::int(2), &ag.add_int(1))?;
    let ga = gamma(&a.add_int(1))?;
    // B(A+1, G+j+1)
    let betas = (0..=tmax)
        .map(|j| Ok(&(&ga * &gamma(&g.add_int(j as i64 + 1))?) / &gamma(&ag.add_int(j as i64 + 2))?))
        .collect::<Result<Vec<_>>>()?;
    (0..=tmax)
        .map(|t| {
            let mut acc = Scalar::zero();
            for (j, b) in betas.iter().enumerate().take(t + 1) {
                let c = &Scalar::bigint(binomial_int(t, j)) * &pow_int(&Scalar::int(2), j as i64)?;
                let c = if (t - j) % 2 == 1 { -c } else { c };
                acc = acc.try_add(&(&c * b))?;
            }
            Ok(&scale * &acc)
        })
        .collect()
}

fn product_poly(family: &FamilySpec, degrees: &[usize]) -> Result<MonomialPoly> {
    let mut p = MonomialPoly::one();
    for &m in degrees {
        p = p.try_mul(&poly_coeffs(family, m)?)?;
    }
    Ok(p)
}

/// `∫ x^s p(x) ω(x)^β dx` for a monomial-basis `p`, integrated termwise
/// (Hermite with non-integer `s` reads the kernel as `|x|^s`).  `None` when
/// the kernel has no termwise closed form (Jacobi with non-integer `s`).
pub fn integrate_poly(family: &FamilySpec, p: &MonomialPoly, s: &Scalar, beta: &Scalar) -> Result<Option<Scalar>> {
    let mut acc = Scalar::zero();
    match family {
        FamilySpec::Laguerre { .. } => {
            for (k, c) in p.coeffs().iter().enumerate() {
                if !c.is_exact_zero() {
                    let t = s.add_int(k as i64);
                    acc = acc.try_add(&(c * &integrate_monomial_weight(family, &t, beta)?))?;
                }
            }
        }
        FamilySpec::Hermite => {
            let abs_kernel = s.as_integer().is_none();
            for (k, c) in p.coeffs().iter().enumerate() {
                // |x|^s x^k is odd for odd k
                if c.is_exact_zero() || (abs_kernel && k % 2 == 1) {
                    continue;
                }
                let t = s.add_int(k as i64);
                acc = acc.try_add(&(c * &integrate_monomial_weight(family, &t, beta)?))?;
            }
        }
        FamilySpec::Jacobi { alpha, gamma: g } => {
            let Some(s) = s.as_usize() else {
                return Ok(None);
            };
            let m = jacobi_moments(&(alpha * beta), &(g * beta), p.degree() + s)?;
            for (k, c) in p.coeffs().iter().enumerate() {
                if !c.is_exact_zero() {
                    acc = acc.try_add(&(c * &m[k + s]))?;
                }
            }
        }
    }
    Ok(Some(acc))
}

/// Termwise integration of `x^s Π p_{m_i}` against `ω^β`, plus the number
/// of nonzero monomials.
fn expansion(req: &FunctionalRequest) -> Result<Option<(Scalar, u64)>> {
    let p = product_poly(&req.family, &req.degrees)?;
    let nonzero = p.coeffs().iter().filter(|c| !c.is_exact_zero()).count() as u64;
    Ok(integrate_poly(&req.family, &p, &req.s, &req.beta)?.map(|v| (v, nonzero)))
}

/// Exact termwise expansion when every Γ argument is on the lattice,
/// adaptive quadrature otherwise.
pub fn oracle_functional(req: &FunctionalRequest) -> Result<OracleResult> {
    req.validate()?;
    let eff = req.effective();
    let exact_inputs = eff.family.is_rational() && eff.beta.as_rational().is_some() && eff.s.as_rational().is_some();
    if exact_inputs {
        if let Some((value, terms)) = expansion(&eff)? {
            if value.is_exact() {
                return Ok(OracleResult { value, method: OracleMethod::ExactExpansion, error_estimate: 0.0, terms });
            }
        }
    }
    quad_functional(&eff, DEFAULT_QUAD_TOL)
}

/// Float description of `∫ ω^β · k(x) · e^{−a x} · (log|x|)^L · Π p_{m_i}` with
/// kernel `k = x^s` (integer `s`) or `|x|^s`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadSpec {
    pub kind: FamilyKind,
    pub alpha: f64,
    pub gamma: f64,
    pub degrees: Vec<usize>,
    pub s: f64,
    pub beta: f64,
    pub exp_rate: f64,
    pub log_power: u32,
}

impl QuadSpec {
    pub fn from_request(req: &FunctionalRequest) -> Self {
        QuadSpec {
            kind: req.family.kind(),
            alpha: req.family.alpha().map_or(0.0, Scalar::to_f64),
            gamma: req.family.gamma().map_or(0.0, Scalar::to_f64),
            degrees: req.degrees.clone(),
            s: req.s.to_f64(),
            beta: req.beta.to_f64(),
            exp_rate: 0.0,
            log_power: 0,
        }
    }

    fn integer_s(&self) -> Option<i32> {
        (self.s.fract() == 0.0 && self.s >= 0.0 && self.s < 1e6).then_some(self.s as i32)
    }
}

/// Polynomial values `p_0(x)..p_nmax(x)` by three-term recurrence, with a
/// monomial fallback when the Jacobi recurrence degenerates.
struct Evaluator {
    kind: FamilyKind,
    a: f64,
    b: f64,
    nmax: usize,
    fallback: Option<Vec<Vec<f64>>>,
}

impl Evaluator {
    fn new(spec: &QuadSpec) -> Result<Self> {
        let nmax = spec.degrees.iter().copied().max().unwrap_or(0);
        let (a, b) = (spec.alpha, spec.gamma);
        let degenerate = spec.kind == FamilyKind::Jacobi && (1..nmax).any(|k| {
            let k = k as f64;
            (k + a + b + 1.0) == 0.0 || (2.0 * k + a + b) == 0.0
        });
        let fallback = if degenerate {
            let fam = FamilySpec::jacobi(Scalar::float(a), Scalar::float(b));
            Some(
                (0..=nmax)
                    .map(|n| Ok(poly_coeffs(&fam, n)?.coeffs().iter().map(Scalar::to_f64).collect()))
                    .collect::<Result<Vec<_>>>()?,
            )
        } else {
            None
        };
        Ok(Evaluator { kind: spec.kind, a, b, nmax, fallback })
    }

    fn values(&self, x: f64, out: &mut Vec<f64>) {
        out.clear();
        if let Some(c) = &self.fallback {
            out.extend(c.iter().map(|p| p.iter().rev().fold(0.0, |acc, &ci| acc * x + ci)));
            return;
        }
        out.push(1.0);
        if self.nmax == 0 {
            return;
        }
        let (a, b) = (self.a, self.b);
        let p1 = match self.kind {
            FamilyKind::Laguerre => 1.0 + a - x,
            FamilyKind::Hermite => 2.0 * x,
            FamilyKind::Jacobi => (a + 1.0) + (a + b + 2.0) * (x - 1.0) / 2.0,
        };
        out.push(p1);
        for k in 1..self.nmax {
            let kf = k as f64;
            let (pk, pm) = (out[k], out[k - 1]);
            let next = match self.kind {
                FamilyKind::Laguerre => ((2.0 * kf + 1.0 + a - x) * pk - (kf + a) * pm) / (kf + 1.0),
                FamilyKind::Hermite => 2.0 * x * pk - 2.0 * kf * pm,
                FamilyKind::Jacobi => {
                    let c = 2.0 * kf + a + b;
                    let lhs = 2.0 * (kf + 1.0) * (kf + a + b + 1.0) * c;
                    let r1 = (c + 1.0) * (c * (c + 2.0) * x + a * a - b * b);
                    let r2 = 2.0 * (kf + a) * (kf + b) * (c + 2.0);
                    (r1 * pk - r2 * pm) / lhs
                }
            };
            out.push(next);
        }
    }
}

struct Integrand<'a> {
    spec: &'a QuadSpec,
    eval: Evaluator,
    s_int: Option<i32>,
}

impl Integrand<'_> {
    fn f(&self, x: f64) -> f64 {
        self.at(x, 1.0 - x, 1.0 + x)
    }

    /// Value at `x`, with `1−x` and `1+x` supplied by the caller so they keep
    /// full relative precision next to the Jacobi endpoints.
    fn at(&self, x: f64, omx: f64, opx: f64) -> f64 {
        let sp = self.spec;
        let ln_abs = x.abs().ln();
        // log of |weight · kernel · exponential|
        let mut lw = -sp.exp_rate * x;
        match sp.kind {
            FamilyKind::Laguerre => {
                if x <= 0.0 {
                    return 0.0;
                }
                lw += (sp.alpha * sp.beta) * ln_abs - sp.beta * x;
            }
            FamilyKind::Hermite => lw -= sp.beta * x * x,
            FamilyKind::Jacobi => {
                if omx <= 0.0 || opx <= 0.0 {
                    return 0.0;
                }
                lw += sp.alpha * sp.beta * omx.ln() + sp.gamma * sp.beta * opx.ln();
            }
        }
        let mut v = match self.s_int {
            Some(si) => lw.exp() * x.powi(si),
            None => {
                if x == 0.0 {
                    return 0.0;
                }
                (lw + sp.s * ln_abs).exp()
            }
        };
        if v == 0.0 {
            return 0.0;
        }
        if sp.log_power > 0 {
            if x == 0.0 {
                return 0.0;
            }
            v *= ln_abs.powi(sp.log_power as i32);
        }
        let mut vals = Vec::with_capacity(self.eval.nmax + 1);
        self.eval.values(x, &mut vals);
        for &m in &sp.degrees {
            v *= vals[m];
        }
        v
    }

    /// Exponent of the algebraic behaviour at 0 (log factors count as a
    /// slight singularity so that the endpoint map still applies).
    fn zero_exponent(&self, base: f64) -> f64 {
        let p = if self.s_int.is_some() { base } else { base + self.spec.s };
        if self.spec.log_power > 0 { p - 0.5 } else { p }
    }
}

type Piece<'a> = Box<dyn Fn(f64) -> f64 + 'a>;

/// `∫_a^b f` with the algebraic singularity at `a`, as a map onto `[0,1]`;
/// `f` is called with the offset `x − a`.
fn from_left<'a>(f: impl Fn(f64) -> f64 + 'a, a: f64, b: f64, p: f64) -> Piece<'a> {
    Box::new(endpoint_map(f, a, b, doublings(p)))
}

/// `∫_a^b f` with the singularity at `b`; `f` gets the offset `x − b`.
fn from_right<'a>(f: impl Fn(f64) -> f64 + 'a, a: f64, b: f64, p: f64) -> Piece<'a> {
    let g = endpoint_map(f, b, a, doublings(p));
    Box::new(move |u| -g(u))
}

/// Adaptive quadrature of the integral described by `spec`.
pub fn quad_integral(spec: &QuadSpec, tol: f64) -> Result<OracleResult> {
    let s_int = spec.integer_s();
    let it = Integrand { spec, eval: Evaluator::new(spec)?, s_int };
    let it = &it;
    let total: usize = spec.degrees.iter().sum();
    let mut pieces: Vec<Piece> = Vec::new();
    match spec.kind {
        FamilyKind::Laguerre => {
            let p = it.zero_exponent(spec.alpha * spec.beta);
            let rate = spec.beta + spec.exp_rate.max(0.0);
            let c = ((4 * total) as f64 + p.abs() + 2.0) / rate;
            pieces.push(from_left(move |d| it.f(d), 0.0, c, p));
            pieces.push(Box::new(tail_map(move |x| it.f(x), c, c)));
        }
        FamilyKind::Hermite => {
            let p = it.zero_exponent(0.0);
            let c = (((2 * total) as f64 + spec.s.abs() + 2.0) / spec.beta).sqrt() + spec.exp_rate.abs() / (2.0 * spec.beta) + 1.0;
            let fold = move |x: f64| it.f(x) + it.f(-x);
            pieces.push(from_left(fold, 0.0, c, p));
            pieces.push(Box::new(tail_map(fold, c, c)));
        }
        FamilyKind::Jacobi => {
            let p0 = it.zero_exponent(0.0);
            let pl = spec.gamma * spec.beta;
            let pr = spec.alpha * spec.beta;
            pieces.push(from_left(move |d| it.at(d - 1.0, 2.0 - d, d), -1.0, -0.5, pl));
            pieces.push(from_right(move |d| it.f(d), -0.5, 0.0, p0));
            pieces.push(from_left(move |d| it.f(d), 0.0, 0.5, p0));
            pieces.push(from_right(move |d| it.at(1.0 + d, -d, 2.0 + d), 0.5, 1.0, pr));
        }
    }
    let refs: Vec<(&dyn Fn(f64) -> f64, f64, f64)> = pieces.iter().map(|p| (p.as_ref() as &dyn Fn(f64) -> f64, 0.0, 1.0)).collect();
    let out = integrate(&refs, tol, 0.0)?;
    Ok(OracleResult {
        value: Scalar::Float { value: out.value, abs_err: out.error },
        method: OracleMethod::Quadrature,
        error_estimate: out.error,
        terms: out.panels as u64,
    })
}

/// Adaptive quadrature of the functional to relative tolerance `tol`.
pub fn quad_functional(req: &FunctionalRequest, tol: f64) -> Result<OracleResult> {
    req.validate()?;
    quad_integral(&QuadSpec::from_request(req), tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(x: &str) -> Scalar {
        x.parse().unwrap()
    }

    #[test]
    fn monomial_weights() {
        let lag = FamilySpec::laguerre(Scalar::zero());
        assert_eq!(integrate_monomial_weight(&lag, &Scalar::zero(), &Scalar::one()).unwrap(), Scalar::one());
        assert_eq!(integrate_monomial_weight(&FamilySpec::Hermite, &Scalar::int(2), &Scalar::one()).unwrap(), s("1/2*sqrt(pi)"));
        let leg = FamilySpec::jacobi(Scalar::zero(), Scalar::zero());
        assert_eq!(integrate_monomial_weight(&leg, &Scalar::zero(), &Scalar::one()).unwrap(), Scalar::int(2));
        assert_eq!(integrate_monomial_weight(&leg, &Scalar::int(2), &Scalar::one()).unwrap(), s("2/3"));
        assert!(integrate_monomial_weight(&lag, &Scalar::int(-1), &Scalar::one()).is_err());
    }

    #[test]
    fn golden_expansion_and_quadrature() {
        let req = FunctionalRequest::new(FamilySpec::laguerre(Scalar::int(4)), vec![7, 15], Scalar::int(2), Scalar::int(3));
        let o = oracle_functional(&req).unwrap();
        assert_eq!(o.method, OracleMethod::ExactExpansion);
        assert_eq!(o.value, s("10908801561641984000/68630377364883"));
        let q = quad_functional(&req, 1e-10).unwrap();
        assert!((q.value.to_f64() - 158950.04487071103773).abs() < 1e-6, "{:?}", q);
    }

    #[test]
    fn exponential_integral() {
        let req = FunctionalRequest::new(FamilySpec::laguerre(Scalar::zero()), vec![0], Scalar::zero(), Scalar::one());
        let q = quad_functional(&req, 1e-12).unwrap();
        assert!((q.value.to_f64() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn singular_jacobi_matches_exact() {
        let fam = FamilySpec::jacobi(s("-1/2"), s("-1/2"));
        let req = FunctionalRequest::new(fam, vec![2, 3], Scalar::int(1), Scalar::one());
        let exact = oracle_functional(&req).unwrap();
        assert!(exact.value.is_exact());
        let q = quad_functional(&req, 1e-11).unwrap();
        let (e, v) = (exact.value.to_f64(), q.value.to_f64());
        assert!((e - v).abs() <= 1e-10 * e.abs(), "{e} vs {v}");
    }

    #[test]
    fn hermite_odd_folds_to_zero() {
        let req = FunctionalRequest::new(FamilySpec::Hermite, vec![2, 1], Scalar::zero(), Scalar::one());
        assert_eq!(quad_functional(&req, 1e-12).unwrap().value.to_f64(), 0.0);
    }
}
