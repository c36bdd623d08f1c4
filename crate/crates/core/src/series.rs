//! Terminating hypergeometric sums: pFq, Lauricella F_A and the
//! Srivastava–Daoust array with one linked top/bottom Pochhammer pair.
//!
//! All-rational inputs are summed exactly; the innermost single sum is
//! fraction-free (integer numerator/denominator recurrences, one gcd at the
//! end).  Anything else runs on the float path with an error budget.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Value of a finite multi-sum plus the size of its support box.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesValue {
    pub value: Scalar,
    pub terms: u64,
}

fn nonpositive_int(x: &Scalar) -> Option<usize> {
    let n = x.as_integer()?;
    if n > BigInt::zero() {
        return None;
    }
    (-n).to_usize()
}

/// A denominator `c = −p` blocks a sum running to `t` when `p < t`.
fn check_denominator(c: &Scalar, t: usize, what: &str) -> Result<()> {
    match nonpositive_int(c) {
        Some(p) if p < t => Err(Error::Pole(format!("{what} denominator {c} inside support 0..={t}"))),
        _ => Ok(()),
    }
}

/// `F_A^(r)(a; b_1..b_r; c_1..c_r; x_1..x_r)` with every `b_i = −t_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct TerminatingSeriesSpec {
    pub a: Scalar,
    pub b: Vec<Scalar>,
    pub c: Vec<Scalar>,
    pub x: Vec<Scalar>,
    bounds: Vec<usize>,
}

impl TerminatingSeriesSpec {
    pub fn new(a: Scalar, b: Vec<Scalar>, c: Vec<Scalar>, x: Vec<Scalar>) -> Result<Self> {
        if b.is_empty() || b.len() != c.len() || b.len() != x.len() {
            return Err(Error::InvalidParameter("F_A needs matching nonempty b, c, x".into()));
        }
        let bounds = b
            .iter()
            .map(|bi| nonpositive_int(bi).ok_or_else(|| Error::NonTerminating(format!("b = {bi}"))))
            .collect::<Result<Vec<_>>>()?;
        for (ci, &t) in c.iter().zip(&bounds) {
            check_denominator(ci, t, "F_A")?;
        }
        Ok(TerminatingSeriesSpec { a, b, c, x, bounds })
    }

    pub fn bounds(&self) -> &[usize] {
        &self.bounds
    }
}

/// The `F^{1:2;…;2}_{1:1;…;1}` Srivastava–Daoust array:
/// `Σ (a0)_J/(b0)_J Π (a_i1)_{j_i}(a_i2)_{j_i}/(b_i)_{j_i} x_i^{j_i}/j_i!`, `J = Σ j_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct SrivastavaDaoustSpec {
    pub a0: Scalar,
    pub a: Vec<(Scalar, Scalar)>,
    pub b0: Scalar,
    pub b: Vec<Scalar>,
    pub x: Vec<Scalar>,
    bounds: Vec<usize>,
}

impl SrivastavaDaoustSpec {
    pub fn new(a0: Scalar, a: Vec<(Scalar, Scalar)>, b0: Scalar, b: Vec<Scalar>, x: Vec<Scalar>) -> Result<Self> {
        if a.is_empty() || a.len() != b.len() || a.len() != x.len() {
            return Err(Error::InvalidParameter("Srivastava–Daoust needs matching nonempty rows".into()));
        }
        let bounds = a
            .iter()
            .map(|(a1, _)| nonpositive_int(a1).ok_or_else(|| Error::NonTerminating(format!("a = {a1}"))))
            .collect::<Result<Vec<_>>>()?;
        for (bi, &t) in b.iter().zip(&bounds) {
            check_denominator(bi, t, "Srivastava–Daoust")?;
        }
        check_denominator(&b0, bounds.iter().sum(), "Srivastava–Daoust linked")?;
        Ok(SrivastavaDaoustSpec { a0, a, b0, b, x, bounds })
    }

    pub fn bounds(&self) -> &[usize] {
        &self.bounds
    }
}

trait Field: Clone {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_usize(n: usize) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Self;
    fn is_zero(&self) -> bool;

    fn shift(&self, j: usize) -> Self {
        self.add(&Self::from_usize(j))
    }

    /// `Σ_{j=0}^{t} Π(num)_j/Π(den)_j · x^j/j!`
    fn pfq(num: &[Self], den: &[Self], x: &Self, t: usize) -> Result<Self> {
        let mut term = Self::one();
        let mut acc = Self::one();
        for j in 0..t {
            let mut p = x.clone();
            for a in num {
                p = p.mul(&a.shift(j));
            }
            if p.is_zero() {
                break;
            }
            let mut q = Self::from_usize(j + 1);
            for c in den {
                q = q.mul(&c.shift(j));
            }
            if q.is_zero() {
                return Err(Error::Pole("denominator parameter hit zero".into()));
            }
            term = term.mul(&p).div(&q);
            acc = acc.add(&term);
        }
        Ok(acc)
    }
}

impl Field for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_usize(n: usize) -> Self {
        BigRational::from_integer(n.into())
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }

    fn pfq(num: &[Self], den: &[Self], x: &Self, t: usize) -> Result<Self> {
        // term_{j+1}/term_j = P_j/Q_j with integer P_j, Q_j; S = T/D.
        let num_d: BigInt = num.iter().map(|a| a.denom()).product();
        let den_d: BigInt = den.iter().map(|c| c.denom()).product();
        let mut acc_num = BigInt::one();
        let mut total = BigInt::one();
        let mut denom = BigInt::one();
        for j in 0..t {
            let jb = BigInt::from(j);
            let mut p = x.numer() * &den_d;
            for a in num {
                p *= a.numer() + &jb * a.denom();
            }
            if p.is_zero() {
                break;
            }
            let mut q = x.denom() * &num_d * BigInt::from(j + 1);
            for c in den {
                q *= c.numer() + &jb * c.denom();
            }
            if q.is_zero() {
                return Err(Error::Pole("denominator parameter hit zero".into()));
            }
            acc_num *= p;
            total = total * &q + &acc_num;
            denom *= q;
        }
        Ok(BigRational::new(total, denom))
    }
}

impl Field for Scalar {
    fn zero() -> Self {
        Scalar::zero().to_float()
    }
    fn one() -> Self {
        Scalar::one().to_float()
    }
    fn from_usize(n: usize) -> Self {
        Scalar::int(n as i64).to_float()
    }
    fn add(&self, o: &Self) -> Self {
        self.try_add(o).expect("float addition cannot fail")
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
    fn shift(&self, j: usize) -> Self {
        self.add_int(j as i64)
    }
}

struct Row<T> {
    num: Vec<T>,
    den: Vec<T>,
    x: T,
    t: usize,
}

fn multi_sum<T: Field>(lnum: &[T], lden: &[T], rows: &[Row<T>]) -> Result<T> {
    let (row, rest) = rows.split_first().expect("at least one row");
    if rest.is_empty() {
        let num: Vec<T> = lnum.iter().chain(&row.num).cloned().collect();
        let den: Vec<T> = lden.iter().chain(&row.den).cloned().collect();
        return T::pfq(&num, &den, &row.x, row.t);
    }
    let mut w = T::one();
    let mut acc = T::zero();
    for j in 0..=row.t {
        if j > 0 {
            let mut p = row.x.clone();
            for a in lnum.iter().chain(&row.num) {
                p = p.mul(&a.shift(j - 1));
            }
            if p.is_zero() {
                break;
            }
            let mut q = T::from_usize(j);
            for c in lden.iter().chain(&row.den) {
                q = q.mul(&c.shift(j - 1));
            }
            if q.is_zero() {
                return Err(Error::Pole("denominator parameter hit zero".into()));
            }
            w = w.mul(&p).div(&q);
        }
        let sn: Vec<T> = lnum.iter().map(|a| a.shift(j)).collect();
        let sd: Vec<T> = lden.iter().map(|c| c.shift(j)).collect();
        acc = acc.add(&w.mul(&multi_sum(&sn, &sd, rest)?));
    }
    Ok(acc)
}

struct Problem<'a> {
    lnum: Vec<&'a Scalar>,
    lden: Vec<&'a Scalar>,
    rows: Vec<(Vec<&'a Scalar>, Vec<&'a Scalar>, &'a Scalar, usize)>,
}

impl Problem<'_> {
    fn all(&self) -> impl Iterator<Item = &Scalar> {
        self.lnum.iter().chain(&self.lden).copied().chain(
            self.rows
                .iter()
                .flat_map(|(n, d, x, _)| n.iter().chain(d.iter()).copied().chain(std::iter::once(*x))),
        )
    }

    fn terms(&self) -> u64 {
        self.rows.iter().map(|r| r.3 as u64 + 1).product()
    }

    fn solve(&self) -> Result<SeriesValue> {
        let terms = self.terms();
        if self.all().all(|s| s.as_rational().is_some()) {
            let q = |s: &&Scalar| s.as_rational().unwrap().clone();
            let rows: Vec<Row<BigRational>> = self
                .rows
                .iter()
                .map(|(n, d, x, t)| Row { num: n.iter().map(q).collect(), den: d.iter().map(q).collect(), x: q(x), t: *t })
                .collect();
            let lnum: Vec<_> = self.lnum.iter().map(q).collect();
            let lden: Vec<_> = self.lden.iter().map(q).collect();
            let v = multi_sum(&lnum, &lden, &rows)?;
            return Ok(SeriesValue { value: Scalar::rational(v), terms });
        }
        let f = |s: &&Scalar| s.to_float();
        let rows: Vec<Row<Scalar>> = self
            .rows
            .iter()
            .map(|(n, d, x, t)| Row { num: n.iter().map(f).collect(), den: d.iter().map(f).collect(), x: f(x), t: *t })
            .collect();
        let lnum: Vec<_> = self.lnum.iter().map(f).collect();
        let lden: Vec<_> = self.lden.iter().map(f).collect();
        let v = multi_sum(&lnum, &lden, &rows)?;
        Ok(SeriesValue { value: v, terms })
    }
}

/// Terminating `pFq(num; den; x)`; the shortest nonpositive-integer numerator
/// parameter sets the support.
pub fn pfq_terminating(num: &[Scalar], den: &[Scalar], x: &Scalar) -> Result<SeriesValue> {
    let t = num
        .iter()
        .filter_map(nonpositive_int)
        .min()
        .ok_or_else(|| Error::NonTerminating("no nonpositive integer numerator parameter".into()))?;
    for c in den {
        check_denominator(c, t, "pFq")?;
    }
    Problem { lnum: vec![], lden: vec![], rows: vec![(num.iter().collect(), den.iter().collect(), x, t)] }.solve()
}

pub fn hyp2f1_terminating(a: &Scalar, b: &Scalar, c: &Scalar, x: &Scalar) -> Result<Scalar> {
    Ok(pfq_terminating(&[a.clone(), b.clone()], &[c.clone()], x)?.value)
}

pub fn hyp3f2_terminating(a1: &Scalar, a2: &Scalar, a3: &Scalar, b1: &Scalar, b2: &Scalar, x: &Scalar) -> Result<Scalar> {
    Ok(pfq_terminating(&[a1.clone(), a2.clone(), a3.clone()], &[b1.clone(), b2.clone()], x)?.value)
}

/// Lauricella `F_A^(r)`, summed row by row with the linked `(a)_{j1+…+jr}`
/// carried into the inner sums.
pub fn lauricella_fa(spec: &TerminatingSeriesSpec) -> Result<SeriesValue> {
    let rows = (0..spec.b.len())
        .map(|i| (vec![&spec.b[i]], vec![&spec.c[i]], &spec.x[i], spec.bounds[i]))
        .collect();
    Problem { lnum: vec![&spec.a], lden: vec![], rows }.solve()
}

pub fn srivastava_daoust(spec: &SrivastavaDaoustSpec) -> Result<SeriesValue> {
    let rows = (0..spec.a.len())
        .map(|i| (vec![&spec.a[i].0, &spec.a[i].1], vec![&spec.b[i]], &spec.x[i], spec.bounds[i]))
        .collect();
    Problem { lnum: vec![&spec.a0], lden: vec![&spec.b0], rows }.solve()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(x: &str) -> Scalar {
        x.parse().unwrap()
    }

    #[test]
    fn hyp2f1_examples() {
        assert_eq!(hyp2f1_terminating(&s("3/7"), &Scalar::zero(), &s("5/2"), &Scalar::one()).unwrap(), Scalar::one());
        // 1 − b x / c
        let (b, c, x) = (s("2/3"), s("5/4"), s("3"));
        let want = Scalar::one().try_sub(&(&(&b * &x) / &c)).unwrap();
        assert_eq!(hyp2f1_terminating(&Scalar::int(-1), &b, &c, &x).unwrap(), want);
        assert_eq!(hyp2f1_terminating(&Scalar::int(-2), &Scalar::one(), &Scalar::one(), &Scalar::one()).unwrap(), Scalar::zero());
    }

    #[test]
    fn hyp3f2_examples() {
        let one = Scalar::one();
        assert_eq!(hyp3f2_terminating(&Scalar::zero(), &s("1/3"), &s("2"), &s("7"), &s("3/5"), &one).unwrap(), one);
        // j=0..2 of (−2)_j(1)_j(1)_j/((2)_j(2)_j j!) = 1 − 1/2 + 1/9
        let v = hyp3f2_terminating(&Scalar::int(-2), &one, &one, &Scalar::int(2), &Scalar::int(2), &one).unwrap();
        assert_eq!(v, s("11/18"));
    }

    #[test]
    fn pole_and_termination_errors() {
        let one = Scalar::one();
        assert!(matches!(
            hyp2f1_terminating(&Scalar::int(-3), &one, &Scalar::int(-1), &one),
            Err(Error::Pole(_))
        ));
        // c = −t is fine: (−t)_j never vanishes for j ≤ t
        assert!(hyp2f1_terminating(&Scalar::int(-2), &one, &Scalar::int(-2), &one).is_ok());
        assert!(matches!(hyp2f1_terminating(&s("1/2"), &one, &one, &one), Err(Error::NonTerminating(_))));
    }

    #[test]
    fn lauricella_small_grid() {
        let one = Scalar::one();
        let spec = TerminatingSeriesSpec::new(
            one.clone(),
            vec![Scalar::int(-1), Scalar::int(-1)],
            vec![one.clone(), one.clone()],
            vec![one.clone(), one.clone()],
        )
        .unwrap();
        let v = lauricella_fa(&spec).unwrap();
        // 1 − 1 − 1 + (1)_2 = 1
        assert_eq!(v.value, Scalar::one());
        assert_eq!(v.terms, 4);
    }

    #[test]
    fn float_path_carries_budget() {
        let v = hyp2f1_terminating(&Scalar::int(-5), &s("0.7"), &s("1.3"), &s("0.4")).unwrap();
        assert!(!v.is_exact());
        assert!(v.abs_err() > 0.0 && v.rel_err() < 1e-13);
    }
}
