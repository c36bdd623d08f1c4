//! Versioned JSON job files (`"schema": "kreinpoly/1"`) and result records.
//!
//! ```json
//! {"schema": "kreinpoly/1",
//!  "jobs": [{"family": "laguerre", "alpha": 4, "degrees": [7, 15], "s": 2, "beta": 3},
//!           {"family": "hermite", "degrees": [2], "kind": "power", "s": "1/2"}]}
//! ```
//!
//! Parameters are JSON integers, JSON decimals (float) or strings in the
//! scalar syntax (`"p/q"`, `"0.7"`, `"1.5±1e-9"`).  Unknown keys are rejected.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::krein::{evaluate, Backend, FunctionalRequest, Route};
use crate::moments::{moment, MomentKind, MomentRequest};
use crate::poly::{FamilyKind, FamilySpec};
use crate::scalar::Scalar;

pub const SCHEMA: &str = "kreinpoly/1";

/// Fixed CSV columns.
pub const CSV_HEADER: [&str; 11] = ["family", "alpha", "gamma", "degrees", "s", "beta", "route", "value", "rel_err", "terms", "micros"];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Param {
    Int(i64),
    Number(f64),
    Text(String),
}

impl Param {
    pub fn to_scalar(&self) -> Result<Scalar> {
        match self {
            Param::Int(n) => Ok(Scalar::int(*n)),
            Param::Number(v) if v.is_finite() => Ok(Scalar::float(*v)),
            Param::Number(v) => Err(Error::Job(format!("non-finite parameter {v}"))),
            Param::Text(s) => s.parse(),
        }
    }
}

impl From<&Scalar> for Param {
    fn from(s: &Scalar) -> Param {
        Param::Text(s.to_string())
    }
}

/// One entry of the `jobs` array, as written.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Job {
    pub family: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<Param>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<Param>,
    pub degrees: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<Param>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<Param>,
    /// `functional` (default) or a moment kind.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<Param>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<Param>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub route: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub backend: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub normalized: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobFile {
    pub schema: String,
    pub jobs: Vec<Job>,
}

/// A validated job ready to run.
#[derive(Clone, Debug, PartialEq)]
pub enum Task {
    Functional(FunctionalRequest),
    Moment(MomentRequest),
}

fn job_err(i: usize, msg: impl std::fmt::Display) -> Error {
    Error::Job(format!("job {i}: {msg}"))
}

fn param(i: usize, name: &str, p: &Option<Param>) -> Result<Option<Scalar>> {
    p.as_ref().map(|p| p.to_scalar().map_err(|e| job_err(i, format!("{name}: {e}")))).transpose()
}

fn required(i: usize, name: &str, p: &Option<Param>) -> Result<Scalar> {
    param(i, name, p)?.ok_or_else(|| job_err(i, format!("missing {name:?}")))
}

fn forbid(i: usize, name: &str, present: bool, why: &str) -> Result<()> {
    if present {
        return Err(job_err(i, format!("{name:?} is not allowed {why}")));
    }
    Ok(())
}

fn nonneg_int(i: usize, name: &str, x: &Scalar) -> Result<usize> {
    x.as_usize().ok_or_else(|| job_err(i, format!("{name} must be a nonnegative integer, got {x}")))
}

impl Job {
    /// Builds the family from the `family`/`alpha`/`gamma` keys.
    pub fn family_spec(&self, i: usize) -> Result<FamilySpec> {
        let kind: FamilyKind = self.family.parse().map_err(|e| job_err(i, e))?;
        match kind {
            FamilyKind::Laguerre => {
                forbid(i, "gamma", self.gamma.is_some(), "for laguerre")?;
                Ok(FamilySpec::laguerre(required(i, "alpha", &self.alpha)?))
            }
            FamilyKind::Hermite => {
                forbid(i, "alpha", self.alpha.is_some(), "for hermite")?;
                forbid(i, "gamma", self.gamma.is_some(), "for hermite")?;
                Ok(FamilySpec::Hermite)
            }
            FamilyKind::Jacobi => Ok(FamilySpec::jacobi(required(i, "alpha", &self.alpha)?, required(i, "gamma", &self.gamma)?)),
        }
    }

    /// Checks the key combination and converts to a [`Task`].  Mathematical
    /// preconditions (β > 0 etc.) are left to evaluation time so they show
    /// up as per-record errors.
    pub fn to_task(&self, i: usize) -> Result<Task> {
        let family = self.family_spec(i)?;
        let scalars: Vec<Scalar> = [&self.alpha, &self.gamma, &self.s, &self.beta, &self.k, &self.a]
            .into_iter()
            .zip(["alpha", "gamma", "s", "beta", "k", "a"])
            .filter_map(|(p, name)| param(i, name, p).transpose())
            .collect::<Result<_>>()?;
        let backend = match &self.backend {
            Some(b) => b.parse().map_err(|e| job_err(i, e))?,
            // decimals route to the float backend
            None if scalars.iter().any(|x| !x.is_exact()) => Backend::Float,
            None => Backend::Exact,
        };
        let kind = self.kind.as_deref().unwrap_or("functional");
        if kind == "functional" {
            forbid(i, "k", self.k.is_some(), "for functionals")?;
            forbid(i, "a", self.a.is_some(), "for functionals")?;
            forbid(i, "normalized", self.normalized.is_some(), "for functionals")?;
            let route = match &self.route {
                Some(r) => r.parse().map_err(|e| job_err(i, e))?,
                None => Route::Auto,
            };
            let req = FunctionalRequest::new(family, self.degrees.clone(), required(i, "s", &self.s)?, required(i, "beta", &self.beta)?)
                .with_route(route)
                .with_backend(backend);
            return Ok(Task::Functional(req));
        }
        forbid(i, "route", self.route.is_some(), "for moments")?;
        forbid(i, "beta", self.beta.is_some(), "for moments")?;
        let n = match self.degrees.as_slice() {
            &[n] => n,
            d => return Err(job_err(i, format!("moments take exactly one degree, got {}", d.len()))),
        };
        let no_s = |why| forbid(i, "s", self.s.is_some(), why);
        let no_a = |why| forbid(i, "a", self.a.is_some(), why);
        let mk = match kind {
            "power" => {
                forbid(i, "k", self.k.is_some(), "for power moments")?;
                no_a("for power moments")?;
                MomentKind::Power { s: required(i, "s", &self.s)? }
            }
            "krein" | "weight_log" => {
                no_s("for this moment kind")?;
                no_a("for this moment kind")?;
                let k = required(i, "k", &self.k)?;
                if kind == "krein" { MomentKind::Krein { k } } else { MomentKind::WeightLog { k } }
            }
            "log" => {
                no_s("for log moments")?;
                no_a("for log moments")?;
                MomentKind::Log { k: nonneg_int(i, "k", &required(i, "k", &self.k)?)? }
            }
            "exponential" => {
                no_s("for exponential moments")?;
                MomentKind::Exponential { k: nonneg_int(i, "k", &required(i, "k", &self.k)?)?, a: required(i, "a", &self.a)? }
            }
            other => return Err(job_err(i, format!("unknown kind {other:?}"))),
        };
        Ok(Task::Moment(MomentRequest::new(family, n, mk).with_backend(backend).normalized(self.normalized.unwrap_or(false))))
    }
}

impl JobFile {
    /// Parses and schema-checks a job file; nothing is evaluated.
    pub fn parse(text: &str) -> Result<JobFile> {
        let file: JobFile = serde_json::from_str(text).map_err(|e| Error::Job(e.to_string()))?;
        if file.schema != SCHEMA {
            return Err(Error::Job(format!("unsupported schema {:?} (expected {SCHEMA:?})", file.schema)));
        }
        file.tasks()?;
        Ok(file)
    }

    pub fn tasks(&self) -> Result<Vec<Task>> {
        self.jobs.iter().enumerate().map(|(i, j)| j.to_task(i)).collect()
    }
}

/// Parses a job file straight to tasks.
pub fn parse_job_file(text: &str) -> Result<Vec<Task>> {
    JobFile::parse(text)?.tasks()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErrorInfo {
    pub kind: String,
    pub message: String,
}

impl From<&Error> for ErrorInfo {
    fn from(e: &Error) -> Self {
        ErrorInfo { kind: e.kind().into(), message: e.to_string() }
    }
}

/// One output line: the request echo plus the value or the error.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub index: usize,
    pub family: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<String>,
    pub degrees: Vec<usize>,
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<String>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub normalized: bool,
    pub backend: String,
    /// Route (functionals) or method (moments); absent on error.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub route: Option<String>,
    /// Exact value string, or `v±rel` for floats.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<String>,
    pub exact: bool,
    pub abs_err: f64,
    pub rel_err: f64,
    pub terms: u64,
    pub micros: u64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorInfo>,
}

impl ResultRecord {
    fn echo(index: usize, task: &Task) -> Self {
        let text = |x: &Scalar| Some(x.to_string());
        let (family, degrees, kind, backend) = match task {
            Task::Functional(r) => (&r.family, r.degrees.clone(), "functional".to_string(), r.backend),
            Task::Moment(m) => (&m.family, vec![m.n], m.kind.name().to_string(), m.backend),
        };
        let mut rec = ResultRecord {
            index,
            family: family.kind().name().into(),
            alpha: family.alpha().and_then(text),
            gamma: family.gamma().and_then(text),
            degrees,
            kind,
            s: None,
            beta: None,
            k: None,
            a: None,
            normalized: false,
            backend: backend.name().into(),
            route: None,
            value: None,
            exact: false,
            abs_err: 0.0,
            rel_err: 0.0,
            terms: 0,
            micros: 0,
            notes: Vec::new(),
            error: None,
        };
        match task {
            Task::Functional(r) => {
                rec.s = text(&r.s);
                rec.beta = text(&r.beta);
            }
            Task::Moment(m) => {
                rec.normalized = m.normalized;
                match &m.kind {
                    MomentKind::Power { s } => rec.s = text(s),
                    MomentKind::Krein { k } | MomentKind::WeightLog { k } => rec.k = text(k),
                    MomentKind::Log { k } => rec.k = Some(k.to_string()),
                    MomentKind::Exponential { k, a } => {
                        rec.k = Some(k.to_string());
                        rec.a = text(a);
                    }
                }
            }
        }
        rec
    }

    fn set_value(&mut self, v: &Scalar) {
        self.value = Some(v.to_string());
        self.exact = v.is_exact();
        self.abs_err = v.abs_err();
        self.rel_err = v.rel_err();
    }

    /// Re-parses the printed value.
    pub fn value_scalar(&self) -> Option<Result<Scalar>> {
        self.value.as_deref().map(str::parse)
    }

    pub fn is_ok(&self) -> bool {
        self.error.is_none()
    }

    /// Row in [`CSV_HEADER`] order.  Moments put their parameters in the
    /// `s` column (`s`, or `k=…;a=…`) and `kind/method` in `route`.
    pub fn csv_row(&self) -> [String; 11] {
        let opt = |x: &Option<String>| x.clone().unwrap_or_default();
        let degrees = self.degrees.iter().map(usize::to_string).collect::<Vec<_>>().join(",");
        let (s, route) = if self.kind == "functional" {
            (opt(&self.s), opt(&self.route))
        } else {
            let mut parts = Vec::new();
            for (name, v) in [("s", &self.s), ("k", &self.k), ("a", &self.a)] {
                if let Some(v) = v {
                    parts.push(format!("{name}={v}"));
                }
            }
            (parts.join(";"), self.route.as_ref().map_or_else(String::new, |r| format!("{}/{r}", self.kind)))
        };
        let (route, value) = match &self.error {
            Some(e) => ("error".to_string(), format!("{}: {}", e.kind, e.message)),
            None => (route, opt(&self.value)),
        };
        [
            self.family.clone(),
            opt(&self.alpha),
            opt(&self.gamma),
            degrees,
            s,
            opt(&self.beta),
            route,
            value,
            format!("{:e}", self.rel_err),
            self.terms.to_string(),
            self.micros.to_string(),
        ]
    }
}

/// Runs one task; with `timing == false` the `micros` field is 0 so the
/// output is reproducible byte for byte.
pub fn run_task(index: usize, task: &Task, timing: bool) -> ResultRecord {
    let mut rec = ResultRecord::echo(index, task);
    let start = Instant::now();
    let out = match task {
        Task::Functional(r) => evaluate(r).map(|rep| (rep.value, rep.route.to_string(), rep.terms, rep.notes)),
        Task::Moment(m) => moment(m).map(|rep| (rep.value, rep.method, rep.terms, Vec::new())),
    };
    let elapsed = start.elapsed();
    match out {
        Ok((value, route, terms, notes)) => {
            rec.set_value(&value);
            rec.route = Some(route);
            rec.terms = terms;
            rec.notes = notes;
        }
        Err(e) => rec.error = Some(ErrorInfo::from(&e)),
    }
    if timing {
        rec.micros = elapsed.as_micros() as u64;
    }
    rec
}
