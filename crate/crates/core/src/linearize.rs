//! Linearization data: `x^s·p_m` expansions and products `p_n·p_m`, each in
//! a family basis.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::poly::{check_degree, jacobi_param_shift, poly_coeffs, FamilySpec, MonomialPoly};
use crate::scalar::Scalar;
use crate::series::{hyp2f1_terminating, hyp3f2_terminating};
use crate::special::{binomial_int, factorial, poch_signed, pochhammer, pow_int};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExpansionKind {
    XsExpand,
    Product,
}

/// Coefficients indexed by basis degree: `coeffs[k]` multiplies `p_k` of
/// `family`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExpansionCoeffs {
    pub family: FamilySpec,
    pub kind: ExpansionKind,
    pub coeffs: Vec<Scalar>,
}

impl ExpansionCoeffs {
    pub fn get(&self, k: usize) -> Scalar {
        self.coeffs.get(k).cloned().unwrap_or_else(Scalar::zero)
    }

    /// Re-assembles `Σ c_k p_k` in the monomial basis.
    pub fn to_monomial(&self) -> Result<MonomialPoly> {
        MonomialPoly::combine(&self.coeffs, |k| poly_coeffs(&self.family, k))
    }
}

fn int(n: BigInt) -> Scalar {
    Scalar::bigint(n)
}

fn fact(n: usize) -> Scalar {
    int(factorial(n))
}

fn signed(c: Scalar, odd: bool) -> Scalar {
    if odd { -c } else { c }
}

fn nonneg_int(s: &Scalar, what: &str) -> Result<usize> {
    s.as_usize()
        .ok_or_else(|| Error::RouteInapplicable(format!("{what} = {s} is not a nonnegative integer")))
}

/// `x^g L_m^(α) = Σ_j c_{mgj} L_j^(α)`, j = 0..=m+g.
pub fn laguerre_xs(m: usize, g: usize, alpha: &Scalar) -> Result<Vec<Scalar>> {
    let g2 = fact(g) * fact(g);
    (0..=m + g)
        .map(|j| {
            let mut acc = Scalar::zero();
            for l in j.saturating_sub(g)..=j.min(m) {
                // 1/Γ(l−m+g+1) vanishes for l < m−g
                if l + g < m {
                    continue;
                }
                // Γ(l+α+g+1)/Γ(j+α+1)
                let ratio = pochhammer(&alpha.add_int(j as i64 + 1), l + g - j);
                let den = int(factorial(m - l) * factorial(g + l - j) * factorial(l + g - m));
                acc = acc.try_add(&(&(&int(binomial_int(j, l)) * &ratio) / &den))?;
            }
            Ok(signed(&g2 * &acc, (j + m) % 2 == 1))
        })
        .collect()
}

/// `x^s H_m = Σ_J c H_J`, returned indexed by Hermite degree J.
pub fn hermite_xs(m: usize, s: usize) -> Result<Vec<Scalar>> {
    let mut out = vec![Scalar::zero(); m + s + 1];
    for j in 0..=(m + s) / 2 {
        let big_j = m + s - 2 * j;
        let mut acc = Scalar::zero();
        for k in m.saturating_sub(2 * j)..=big_j.min(m) {
            if k + j < m {
                continue;
            }
            let den = BigInt::from(2).pow(k as u32) * factorial(m - k) * factorial(k + j - m);
            acc = acc.try_add(&Scalar::rational(num_rational::BigRational::new(binomial_int(big_j, k), den)))?;
        }
        // 2^{m−s} m! s!/J!
        let pre = &(&pow_int(&Scalar::int(2), m as i64 - s as i64)? * &int(factorial(m) * factorial(s))) / &fact(big_j);
        out[big_j] = &pre * &acc;
    }
    Ok(out)
}

/// `x^s P_k^(Λ,Δ) = Σ_i c_{ksi} P_i^(Λ,Δ)`, i = 0..=k+s.
pub fn jacobi_xs(k: usize, s: usize, lam: &Scalar, del: &Scalar) -> Result<Vec<Scalar>> {
    let ld = lam.try_add(del)?;
    let two = Scalar::int(2);
    let (ki, si) = (k as i64, s as i64);
    (0..=k + s)
        .map(|i| {
            let ii = i as i64;
            // (2i+ΛΔ+1)Γ(i+ΛΔ+1)/Γ(2i+k−r+ΛΔ+2) is folded into each r term below
            let pre = &(&(&pow_int(&two, ii)? * &fact(s)) * &poch_signed(&lam.add_int(ii + 1), ki - ii)?)
                * &poch_signed(&del.add_int(ii + 1), ki - ii)?;
            let mut tot = Scalar::zero();
            for r in i.saturating_sub(s)..=i.min(k) {
                let ri = r as i64;
                let lead = if i == 0 {
                    Scalar::one() / pochhammer(&ld.add_int(2), k - r)
                } else {
                    ld.add_int(2 * ii + 1) / pochhammer(&ld.add_int(ii + 1), i + k - r + 1)
                };
                let mut inner = Scalar::zero();
                for l in 0..=k - r {
                    let li = l as i64;
                    let f = hyp2f1_terminating(
                        &Scalar::int(ii - si - ri),
                        &del.add_int(ii + li + 1),
                        &ld.add_int(2 * ii + ki - ri + 2),
                        &two,
                    )?;
                    let num = &pochhammer(&lam.add_int(ki - li + 1), i - r) * &pochhammer(&del.add_int(ri + li + 1), i - r);
                    let t = &(&num * &f) / &int(factorial(l) * factorial(k - r - l));
                    inner = inner.try_add(&signed(t, l % 2 == 1))?;
                }
                let w = &(&(&int(binomial_int(i, r)) * &pochhammer(&ld.add_int(ki + 1), r)) * &lead)
                    / &int(BigInt::from(2).pow(r as u32) * factorial(s + r - i));
                tot = tot.try_add(&(&w * &inner))?;
            }
            Ok(signed(&pre * &tot, (k + s - i) % 2 == 1))
        })
        .collect()
}

/// Coefficient list of `L_j L_n` in the `L_k^(α)` basis (equal parameters).
pub fn laguerre_product(j: usize, n: usize, alpha: &Scalar) -> Result<Vec<Scalar>> {
    let pre = int(factorial(j) * factorial(n));
    // rising factorial of an integer, exactly zero once it crosses 0
    let poch_int = |a: i64, len: usize| -> BigInt { (0..len as i64).map(|t| BigInt::from(a + t)).product() };
    (0..=j + n)
        .map(|k| {
            let (ji, ni, ki) = (j as i64, n as i64, k as i64);
            // integer weights grouped by r, so only (α+k+1)_r is a Scalar product
            let rmax = j.min(n);
            let mut by_r = vec![BigInt::zero(); rmax + 1];
            for i in k.saturating_sub(n)..=k.min(j) {
                for r in 0..=(j - i).min(n + i - k) {
                    let ri = r as i64;
                    let p = poch_int(ki - ji + ri + 1, j - i - r) * poch_int(ki - ni + ri + 1, n + i - k - r);
                    if p.is_zero() {
                        continue;
                    }
                    by_r[r] += binomial_int(j, i)
                        * binomial_int(n, k - i)
                        * binomial_int(j - i, r)
                        * binomial_int(n + i - k, r)
                        * factorial(r)
                        * factorial(k)
                        * p;
                }
            }
            let a = alpha.add_int(ki + 1);
            let mut acc = Scalar::zero();
            let mut pa = Scalar::one();
            for (r, w) in by_r.into_iter().enumerate() {
                if r > 0 {
                    pa = &pa * &a.add_int(r as i64 - 1);
                }
                if !w.is_zero() {
                    acc = acc.try_add(&(&int(w) * &pa))?;
                }
            }
            Ok(signed(&acc / &pre, (j + n + k) % 2 == 1))
        })
        .collect()
}

/// The same product coefficients via the hypergeometric-free explicit sum
/// over `|n−m| ≤ k ≤ n+m` used by the algebraic route.
pub fn laguerre_product_explicit(n: usize, m: usize, alpha: &Scalar) -> Result<Vec<Scalar>> {
    let mut out = vec![Scalar::zero(); n + m + 1];
    let sign_nm = (n + m) % 2 == 1;
    for (k, slot) in out.iter_mut().enumerate().skip(n.abs_diff(m)) {
        let inner = laguerre_explicit_inner(n, m, k, alpha)?;
        // (−2)^{n+m}(−1)^k k!/(2^k (m+n−k)!) = ±2^{n+m−k} k!/(m+n−k)!
        let c = num_rational::BigRational::new(
            BigInt::from(2).pow((n + m - k) as u32) * factorial(k),
            factorial(n + m - k),
        );
        *slot = signed(&Scalar::rational(c) * &inner, sign_nm ^ (k % 2 == 1));
    }
    Ok(out)
}

/// `Σ_j ((k−m−n)/2)_j ((k−m−n+1)/2)_j (α+k+1)_j / (j! Γ(k−n+1+j) Γ(k−m+1+j))`
pub(crate) fn laguerre_explicit_inner(n: usize, m: usize, k: usize, alpha: &Scalar) -> Result<Scalar> {
    let d = k as i64 - (m + n) as i64;
    let (a1, a2) = (Scalar::ratio(d, 2), Scalar::ratio(d + 1, 2));
    let a3 = alpha.add_int(k as i64 + 1);
    let mut acc = Scalar::zero();
    let lo = n.saturating_sub(k).max(m.saturating_sub(k));
    for j in lo..=(m + n - k + 1) / 2 {
        let p = &(&pochhammer(&a1, j) * &pochhammer(&a2, j)) * &pochhammer(&a3, j);
        let den = factorial(j) * factorial(k + j - n) * factorial(k + j - m);
        acc = acc.try_add(&(&p / &int(den)))?;
    }
    Ok(acc)
}

/// `H_m H_n = Σ_k C(m,k) C(n,k) 2^k k! H_{m+n−2k}`, indexed by degree.
pub fn hermite_product(n: usize, m: usize) -> Vec<Scalar> {
    let mut out = vec![Scalar::zero(); n + m + 1];
    for k in 0..=n.min(m) {
        out[n + m - 2 * k] = int(binomial_int(m, k) * binomial_int(n, k) * BigInt::from(2).pow(k as u32) * factorial(k));
    }
    out
}

/// `b_{nmk}` with `P_n P_m = Σ_k b_{nmk} P_k` (all `P^(α,γ)`).
pub fn jacobi_product(n: usize, m: usize, alpha: &Scalar, gamma_p: &Scalar) -> Result<Vec<Scalar>> {
    let ag = alpha.try_add(gamma_p)?;
    let (ni, mi) = (n as i64, m as i64);
    let one = Scalar::one();
    let mut out = vec![Scalar::zero(); n + m + 1];
    let common = &(&pochhammer(&ag.add_int(ni + 1), n) * &pochhammer(&ag.add_int(mi + 1), m)) / &int(factorial(n) * factorial(m));
    for (k, slot) in out.iter_mut().enumerate().skip(n.abs_diff(m)) {
        let ki = k as i64;
        let pre = &(&common * &fact(k)) / &pochhammer(&ag.add_int(ki + 1), k);
        let mut tot = Scalar::zero();
        for t in k.saturating_sub(m)..=k.min(n) {
            let ti = t as i64;
            let mut s1 = Scalar::zero();
            for w in 0..=m + t - k {
                let wi = w as i64;
                let e = ki + wi - mi - ti;
                let f = hyp3f2_terminating(
                    &Scalar::int(ti - ni),
                    &ag.add_int(ni + ti + 1),
                    &alpha.add_int(ki + wi + 1),
                    &alpha.add_int(ti + 1),
                    &ag.add_int(2 * ki + wi + 2),
                    &one,
                )?;
                let v = &(&(&poch_signed(&ag.add_int(2 * mi + 1), e)? / &poch_signed(&alpha.add_int(mi + 1), e)?)
                    * &pochhammer(&alpha.add_int(ki + 1), w))
                    / &pochhammer(&ag.add_int(2 * ki + 2), w);
                let v = &(&int(binomial_int(m + t - k, w)) * &v) * &f;
                s1 = s1.try_add(&signed(v, w % 2 == 1))?;
            }
            let c = &(&int(binomial_int(n, t) * binomial_int(m, k - t)) * &pochhammer(&alpha.add_int(ti + 1), n - t))
                / &pochhammer(&ag.add_int(ni + ti + 1), n - t);
            tot = tot.try_add(&(&c * &s1))?;
        }
        *slot = &pre * &tot;
    }
    Ok(out)
}

/// Expansion of `x^{s_eff} p_m` in the basis of `family` (for Jacobi the
/// family's parameters are the shifted pair (Λ,Δ)).
pub fn xs_expand(family: &FamilySpec, m: usize, s_eff: &Scalar) -> Result<ExpansionCoeffs> {
    let s = nonneg_int(s_eff, "exponent")?;
    check_degree(m + s)?;
    let coeffs = match family {
        FamilySpec::Laguerre { alpha } => laguerre_xs(m, s, alpha)?,
        FamilySpec::Hermite => hermite_xs(m, s)?,
        FamilySpec::Jacobi { alpha, gamma } => jacobi_xs(m, s, alpha, gamma)?,
    };
    Ok(ExpansionCoeffs { family: family.clone(), kind: ExpansionKind::XsExpand, coeffs })
}

/// `p_n p_m` in the same-family basis.
pub fn product_linearize(family: &FamilySpec, n: usize, m: usize) -> Result<ExpansionCoeffs> {
    check_degree(n + m)?;
    let coeffs = match family {
        FamilySpec::Laguerre { alpha } => laguerre_product(n, m, alpha)?,
        FamilySpec::Hermite => hermite_product(n, m),
        FamilySpec::Jacobi { alpha, gamma } => jacobi_product(n, m, alpha, gamma)?,
    };
    Ok(ExpansionCoeffs { family: family.clone(), kind: ExpansionKind::Product, coeffs })
}

/// `P_n^(α,γ) P_m^(α,γ)` directly in the `P_j^(αβ,γβ)` basis.
pub fn jacobi_shift_pair(n: usize, m: usize, alpha: &Scalar, gamma_p: &Scalar, beta: &Scalar) -> Result<ExpansionCoeffs> {
    check_degree(n + m)?;
    let b = jacobi_product(n, m, alpha, gamma_p)?;
    let mut out = vec![Scalar::zero(); n + m + 1];
    for (k, bk) in b.iter().enumerate() {
        if bk.is_exact_zero() {
            continue;
        }
        for (j, c) in jacobi_param_shift(k, alpha, gamma_p, beta)?.iter().enumerate() {
            out[j] = out[j].try_add(&(bk * c))?;
        }
    }
    Ok(ExpansionCoeffs {
        family: FamilySpec::jacobi(alpha * beta, gamma_p * beta),
        kind: ExpansionKind::Product,
        coeffs: out,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(x: &str) -> Scalar {
        x.parse().unwrap()
    }

    fn ints(v: &[i64]) -> Vec<Scalar> {
        v.iter().map(|&x| Scalar::int(x)).collect()
    }

    #[test]
    fn xs_examples() {
        let a = s("3/2");
        let fam = FamilySpec::laguerre(a.clone());
        assert_eq!(xs_expand(&fam, 3, &Scalar::zero()).unwrap().coeffs, ints(&[0, 0, 0, 1]));
        assert_eq!(xs_expand(&fam, 0, &Scalar::one()).unwrap().coeffs, vec![a.add_int(1), Scalar::int(-1)]);
        assert_eq!(xs_expand(&FamilySpec::Hermite, 1, &Scalar::one()).unwrap().coeffs, vec![Scalar::one(), Scalar::zero(), s("1/2")]);
        assert!(matches!(xs_expand(&fam, 1, &s("1/2")), Err(Error::RouteInapplicable(_))));
    }

    #[test]
    fn product_examples() {
        let a = s("2/5");
        let fam = FamilySpec::laguerre(a);
        let p = product_linearize(&fam, 0, 3).unwrap();
        assert_eq!(p.coeffs, ints(&[0, 0, 0, 1]));
        assert_eq!(product_linearize(&FamilySpec::Hermite, 1, 1).unwrap().coeffs, ints(&[2, 0, 1]));
        let leg = FamilySpec::jacobi(Scalar::zero(), Scalar::zero());
        assert_eq!(product_linearize(&leg, 1, 1).unwrap().coeffs, vec![s("1/3"), Scalar::zero(), s("2/3")]);
    }

    #[test]
    fn shift_pair_examples() {
        let z = Scalar::zero();
        let one = Scalar::one();
        assert_eq!(jacobi_shift_pair(0, 0, &z, &z, &one).unwrap().coeffs, ints(&[1]));
        let direct = jacobi_product(2, 3, &one, &z).unwrap();
        assert_eq!(jacobi_shift_pair(2, 3, &one, &z, &one).unwrap().coeffs, direct);
    }

    #[test]
    fn laguerre_product_forms_agree() {
        for a in ["0", "3", "1/2"] {
            for n in 0..5 {
                for m in 0..5 {
                    assert_eq!(laguerre_product(n, m, &s(a)).unwrap(), laguerre_product_explicit(n, m, &s(a)).unwrap());
                }
            }
        }
    }
}
