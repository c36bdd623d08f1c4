//! Closed-form routes against the quadrature oracle on one request.

use std::hint::black_box;
use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::krein::{evaluate, FunctionalRequest, Route};
use crate::oracle::{oracle_functional, quad_functional};
use crate::scalar::Scalar;

/// Quadrature tolerance the closed forms are timed against.
pub const BENCH_QUAD_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub label: String,
    pub mean: Duration,
    pub value: Scalar,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchReport {
    pub trials: usize,
    /// Closed-form routes that apply, then the exact-expansion oracle if it applies.
    pub rows: Vec<BenchRow>,
    pub quadrature: BenchRow,
}

impl BenchReport {
    /// Quadrature time over row time.
    pub fn speedup(&self, row: &BenchRow) -> f64 {
        self.quadrature.mean.as_secs_f64() / row.mean.as_secs_f64().max(1e-12)
    }

    /// Rows for the closed-form routes only.
    pub fn closed_form(&self) -> impl Iterator<Item = &BenchRow> {
        self.rows.iter().filter(|r| Route::CLOSED_FORM.iter().any(|c| c.name() == r.label))
    }
}

fn mean_time<T>(trials: usize, mut f: impl FnMut() -> T) -> Duration {
    let start = Instant::now();
    for _ in 0..trials {
        black_box(f());
    }
    start.elapsed() / trials.max(1) as u32
}

fn agree(a: &Scalar, b: &Scalar) -> bool {
    if a.is_exact() && b.is_exact() {
        return a == b;
    }
    let (x, y) = (a.to_f64(), b.to_f64());
    (x - y).abs() <= a.abs_err() + b.abs_err() + 1e-12 * x.abs().max(y.abs())
}

/// Times every applicable closed-form route, the exact-expansion oracle and
/// the quadrature oracle over `trials` runs each, after checking that all
/// values agree.  `corrupt` perturbs one route's value (negative test).
pub fn benchmark(req: &FunctionalRequest, trials: usize, corrupt: Option<Route>) -> Result<BenchReport> {
    req.validate()?;
    let mut rows = Vec::new();
    for route in Route::CLOSED_FORM {
        let r = req.clone().with_route(route);
        let mut value = match evaluate(&r) {
            Ok(rep) => rep.value,
            Err(e) if e.is_route_local() => continue,
            Err(e) => return Err(e),
        };
        if corrupt == Some(route) {
            value = &value * &Scalar::ratio(1001, 1000);
        }
        rows.push((Some(r), BenchRow { label: route.name().into(), mean: Duration::ZERO, value }));
    }
    let eff = req.effective();
    if let Ok(o) = oracle_functional(&eff) {
        if o.value.is_exact() {
            rows.push((None, BenchRow { label: "oracle".into(), mean: Duration::ZERO, value: o.value }));
        }
    }
    let q = quad_functional(req, BENCH_QUAD_TOL)?;
    let quad = BenchRow { label: "quadrature".into(), mean: Duration::ZERO, value: q.value.clone() };

    // correctness precedes speed
    for (_, row) in &rows {
        if let Some((_, first)) = rows.first() {
            if !agree(&row.value, &first.value) {
                return Err(Error::Mismatch(format!("{} = {} but {} = {}", row.label, row.value, first.label, first.value)));
            }
        }
        let (v, qv) = (row.value.to_f64(), q.value.to_f64());
        if (v - qv).abs() > q.error_estimate + row.value.abs_err() + 1e-12 * qv.abs() {
            return Err(Error::Mismatch(format!("{} = {} but quadrature = {} ± {:e}", row.label, row.value, qv, q.error_estimate)));
        }
    }

    let rows = rows
        .into_iter()
        .map(|(r, mut row)| {
            row.mean = match r {
                Some(r) => mean_time(trials, || evaluate(&r)),
                None => mean_time(trials, || oracle_functional(&eff)),
            };
            row
        })
        .collect();
    let quadrature = BenchRow { mean: mean_time(trials, || quad_functional(req, BENCH_QUAD_TOL)), ..quad };
    Ok(BenchReport { trials, rows, quadrature })
}
