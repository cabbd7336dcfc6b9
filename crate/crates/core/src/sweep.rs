//! Grid sweeps: enumerate every knot vector within given bounds, evaluate
//! them with each `a2` method, and compare. Vectors are independent, so the
//! sweep is a data-parallel map; output is sorted by vector afterwards and
//! does not depend on the execution mode or thread count.

use std::fmt;

use serde::Serialize;

use crate::a2::{skein, A2Context, Method, MethodValue, SkeinStep};
use crate::error::{Error, Result};
use crate::formulas;
use crate::pretzel::TwistVector;

/// Odd integers in `[-max, max]`, ascending.
fn odd_values(max: i64) -> Vec<i64> {
    (-max..=max).filter(|x| x % 2 != 0).collect()
}

fn even_values(max: i64) -> Vec<i64> {
    (-max..=max).filter(|x| x % 2 == 0).collect()
}

fn product(choices: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let mut out: Vec<Vec<i64>> = vec![Vec::new()];
    for values in choices {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                values.iter().map(move |&x| {
                    let mut next = prefix.clone();
                    next.push(x);
                    next
                })
            })
            .collect();
    }
    out
}

fn vectors(raw: Vec<Vec<i64>>) -> Vec<TwistVector> {
    raw.into_iter()
        .map(|v| TwistVector::new(v).expect("grid vectors are non-empty"))
        .collect()
}

/// Every odd-type vector of length `n` (odd) with `|p_i| <= max`.
pub fn odd_grid(n: usize, max: i64) -> Vec<TwistVector> {
    if n % 2 == 0 {
        return Vec::new();
    }
    vectors(product(&vec![odd_values(max); n]))
}

/// Every even-type vector of length `n`: one even entry with
/// `|p| <= even_max` at any position, the rest odd with `|p| <= odd_max`.
pub fn even_grid(n: usize, even_max: i64, odd_max: i64) -> Vec<TwistVector> {
    let mut out = Vec::new();
    for at in 0..n {
        let mut choices = vec![odd_values(odd_max); n];
        choices[at] = even_values(even_max);
        out.extend(vectors(product(&choices)));
    }
    out.sort();
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GridKind {
    Odd,
    Even,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct GridSpec {
    pub kind: GridKind,
    pub n: usize,
    pub max: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub even_max: Option<i64>,
}

impl GridSpec {
    pub fn odd(n: usize, max: i64) -> Self {
        GridSpec {
            kind: GridKind::Odd,
            n,
            max,
            even_max: None,
        }
    }

    pub fn even(n: usize, even_max: i64, odd_max: i64) -> Self {
        GridSpec {
            kind: GridKind::Even,
            n,
            max: odd_max,
            even_max: Some(even_max),
        }
    }

    pub fn vectors(&self) -> Vec<TwistVector> {
        match self.kind {
            GridKind::Odd => odd_grid(self.n, self.max),
            GridKind::Even => even_grid(self.n, self.even_max.unwrap_or(self.max), self.max),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |reason: String| Error::Parse {
            input: self.to_string(),
            reason,
        };
        if self.n == 0 {
            return Err(bad("grid length must be at least 1".into()));
        }
        if self.kind == GridKind::Odd && self.n % 2 == 0 {
            return Err(bad(format!("odd-type knots need odd n, got {}", self.n)));
        }
        if self.max < 0 || self.even_max.is_some_and(|m| m < 0) {
            return Err(bad("bounds must be non-negative".into()));
        }
        Ok(())
    }
}

impl fmt::Display for GridSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            GridKind::Odd => write!(f, "odd n={} |p|<={}", self.n, self.max),
            GridKind::Even => write!(
                f,
                "even n={} |even|<={} |odd|<={}",
                self.n,
                self.even_max.unwrap_or(self.max),
                self.max
            ),
        }
    }
}

/// How a sweep maps over its vectors.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    /// Rayon's pool, or a dedicated pool of `jobs` threads. Without the
    /// `parallel` feature this runs sequentially.
    Parallel { jobs: Option<usize> },
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel { jobs: None }
        } else {
            Execution::Sequential
        }
    }
}

impl Execution {
    pub fn from_jobs(jobs: Option<usize>) -> Self {
        match jobs {
            Some(1) => Execution::Sequential,
            jobs => Execution::Parallel { jobs },
        }
    }

    /// Applies `f` to every item, preserving input order in the output.
    pub fn map<T, R, F>(self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        match self {
            Execution::Sequential => items.iter().map(f).collect(),
            Execution::Parallel { jobs } => parallel_map(items, jobs, f),
        }
    }
}

#[cfg(feature = "parallel")]
fn parallel_map<T, R, F>(items: &[T], jobs: Option<usize>, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    use rayon::prelude::*;
    let run = || items.par_iter().map(&f).collect();
    match jobs {
        None => run(),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .expect("thread pool")
            .install(run),
    }
}

#[cfg(not(feature = "parallel"))]
fn parallel_map<T, R, F>(items: &[T], _jobs: Option<usize>, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    items.iter().map(f).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VectorCheck {
    pub vector: TwistVector,
    pub values: Vec<MethodValue>,
    pub agree: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CrossCheckSummary {
    pub vectors: usize,
    pub agreeing: usize,
    pub disagreeing: usize,
    pub oracle_checked: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CrossCheckReport {
    pub grids: Vec<String>,
    pub results: Vec<VectorCheck>,
    pub summary: CrossCheckSummary,
    pub first_failure: Option<String>,
}

impl CrossCheckReport {
    pub fn all_agree(&self) -> bool {
        self.summary.disagreeing == 0
    }
}

/// Skein, closed form, and the Alexander oracle when `v` is under the cap.
pub fn check_vector(v: &TwistVector, ctx: &A2Context) -> VectorCheck {
    let mut methods = vec![Method::Skein, Method::Formula];
    if ctx.oracle_applies(v) {
        methods.push(Method::Alexander);
    }
    let mut values = Vec::with_capacity(methods.len());
    for method in methods {
        match ctx.compute(v, method, false) {
            Ok(r) => values.push(MethodValue {
                method,
                value: r.value,
            }),
            Err(e) => {
                return VectorCheck {
                    vector: v.clone(),
                    values,
                    agree: false,
                    error: Some(format!("{method}: {e}")),
                }
            }
        }
    }
    let agree = values.iter().all(|m| m.value == values[0].value);
    VectorCheck {
        vector: v.clone(),
        values,
        agree,
        error: None,
    }
}

pub fn crosscheck(grids: &[GridSpec], ctx: &A2Context, exec: Execution) -> Result<CrossCheckReport> {
    for g in grids {
        g.validate()?;
    }
    let mut all: Vec<TwistVector> = grids.iter().flat_map(GridSpec::vectors).collect();
    all.sort();
    all.dedup();
    let results = exec.map(&all, |v| check_vector(v, ctx));

    let mut summary = CrossCheckSummary {
        vectors: results.len(),
        ..Default::default()
    };
    let mut first_failure = None;
    for r in &results {
        if r.agree {
            summary.agreeing += 1;
        } else {
            summary.disagreeing += 1;
            if first_failure.is_none() {
                first_failure = Some(describe_failure(r));
            }
        }
        if r.values.iter().any(|m| m.method == Method::Alexander) {
            summary.oracle_checked += 1;
        }
    }
    Ok(CrossCheckReport {
        grids: grids.iter().map(GridSpec::to_string).collect(),
        results,
        summary,
        first_failure,
    })
}

fn describe_failure(r: &VectorCheck) -> String {
    let values = r
        .values
        .iter()
        .map(|m| format!("{}={}", m.method, m.value))
        .collect::<Vec<_>>()
        .join(", ");
    match &r.error {
        Some(e) => format!("{}: {e} ({values})", r.vector),
        None => format!("{}: {values}", r.vector),
    }
}

impl fmt::Display for CrossCheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for g in &self.grids {
            writeln!(f, "grid {g}")?;
        }
        let s = &self.summary;
        writeln!(
            f,
            "{} vectors, {} agree, {} disagree, {} also checked by the Alexander oracle",
            s.vectors, s.agreeing, s.disagreeing, s.oracle_checked
        )?;
        if let Some(first) = &self.first_failure {
            writeln!(f, "first failure: {first}")?;
        }
        Ok(())
    }
}

/// Which displayed linking-number expression a recursion step was held to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LkForm {
    /// Odd type, bands before `i` all `+1`:
    /// `sgn(p_i) * 1/2 {(i - 1) + Σ_{k>i} p_k}`.
    OddUnitPrefix,
    /// Odd type, bands before `i` all `±1`: `sgn(p_i) * 1/2 Σ_{k≠i} p_k`.
    OddSignedPrefix,
    /// Even entry first, `n` even: `sgn(q) * 1/2 {(q - sgn q) + Σ_{i>=2} p_i}`.
    EvenFirstEvenN,
    /// Even entry first, `n` odd: `-sgn(q) * 1/2 Σ_{i>=2} p_i`.
    EvenFirstOddN,
}

/// The closed-form contribution `a2(v) - a2(next)` for a step, if any
/// displayed expression covers it. Returns twice the value so that it stays
/// integral.
pub fn expected_contribution(step: &SkeinStep) -> Option<(LkForm, i64)> {
    let p = step.vector.entries();
    let i = step.band - 1;
    let q = p[i];
    let s = q.signum();
    if step.vector.even_count() == 0 && p.len() >= 3 {
        let prefix = &p[..i];
        if prefix.iter().all(|&x| x == 1) {
            let rest: i64 = p[i + 1..].iter().sum();
            return Some((LkForm::OddUnitPrefix, s * (i as i64 + rest)));
        }
        if prefix.iter().all(|x| x.abs() == 1) {
            let others: i64 = p.iter().sum::<i64>() - q;
            return Some((LkForm::OddSignedPrefix, s * others));
        }
        return None;
    }
    if step.vector.even_count() == 1 && i == 0 && q % 2 == 0 {
        let rest: i64 = p[1..].iter().sum();
        return Some(if p.len() % 2 == 0 {
            (LkForm::EvenFirstEvenN, s * ((q - s) + rest))
        } else {
            (LkForm::EvenFirstOddN, -s * rest)
        });
    }
    None
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct LkMismatch {
    pub vector: TwistVector,
    pub step: SkeinStep,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub form: Option<LkForm>,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct LkReport {
    pub grids: Vec<String>,
    pub vectors: usize,
    pub steps: usize,
    pub replayed: usize,
    pub odd_unit_prefix: usize,
    pub odd_signed_prefix: usize,
    pub even_first_even_n: usize,
    pub even_first_odd_n: usize,
    pub mismatches: Vec<LkMismatch>,
}

impl LkReport {
    pub fn ok(&self) -> bool {
        self.mismatches.is_empty()
    }

    fn count(&mut self, form: LkForm) {
        match form {
            LkForm::OddUnitPrefix => self.odd_unit_prefix += 1,
            LkForm::OddSignedPrefix => self.odd_signed_prefix += 1,
            LkForm::EvenFirstEvenN => self.even_first_even_n += 1,
            LkForm::EvenFirstOddN => self.even_first_odd_n += 1,
        }
    }
}

struct VectorLk {
    steps: usize,
    replayed: bool,
    forms: Vec<LkForm>,
    mismatches: Vec<LkMismatch>,
}

fn lk_vector(v: &TwistVector, ctx: &A2Context) -> Result<VectorLk> {
    let (value, trace) = ctx.engine.a2_traced(v)?;
    let replayed = skein::replay(v, &trace)? == value;
    let mut out = VectorLk {
        steps: trace.steps.len(),
        replayed,
        forms: Vec::new(),
        mismatches: Vec::new(),
    };
    for step in &trace.steps {
        if step.contribution != step.crossing_sign * step.lk {
            out.mismatches.push(LkMismatch {
                vector: v.clone(),
                step: step.clone(),
                form: None,
                detail: "contribution is not sign * lk".into(),
            });
            continue;
        }
        if let Some((form, twice)) = expected_contribution(step) {
            out.forms.push(form);
            if 2 * step.contribution != twice {
                out.mismatches.push(LkMismatch {
                    vector: v.clone(),
                    step: step.clone(),
                    form: Some(form),
                    detail: format!(
                        "diagram gives {}, closed form gives {}/2",
                        step.contribution, twice
                    ),
                });
            }
        }
    }
    Ok(out)
}

/// Replays every recursion step of every grid vector and holds each step's
/// diagram linking number to the closed-form expression covering it.
pub fn lkcheck(grids: &[GridSpec], ctx: &A2Context, exec: Execution) -> Result<LkReport> {
    for g in grids {
        g.validate()?;
    }
    let mut all: Vec<TwistVector> = grids.iter().flat_map(GridSpec::vectors).collect();
    all.sort();
    all.dedup();
    let per_vector = exec.map(&all, |v| lk_vector(v, ctx));
    let mut report = LkReport {
        grids: grids.iter().map(GridSpec::to_string).collect(),
        vectors: all.len(),
        ..Default::default()
    };
    for r in per_vector {
        let r = r?;
        report.steps += r.steps;
        report.replayed += r.replayed as usize;
        for form in r.forms {
            report.count(form);
        }
        report.mismatches.extend(r.mismatches);
    }
    if report.replayed != report.vectors {
        return Err(Error::Invariant(format!(
            "{} of {} traces failed to replay",
            report.vectors - report.replayed,
            report.vectors
        )));
    }
    Ok(report)
}

impl fmt::Display for LkReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for g in &self.grids {
            writeln!(f, "grid {g}")?;
        }
        writeln!(
            f,
            "{} vectors, {} steps, {} traces replayed",
            self.vectors, self.steps, self.replayed
        )?;
        writeln!(
            f,
            "closed-form checks: odd/unit prefix {}, odd/signed prefix {}, even first/n even {}, even first/n odd {}",
            self.odd_unit_prefix, self.odd_signed_prefix, self.even_first_even_n, self.even_first_odd_n
        )?;
        match self.mismatches.first() {
            None => writeln!(f, "all linking numbers match"),
            Some(m) => writeln!(
                f,
                "{} mismatches; first: {} band {}: {}",
                self.mismatches.len(),
                m.step.vector,
                m.step.band,
                m.detail
            ),
        }
    }
}

/// Vectors of a grid on which a closed form, rather than just `a2`, is
/// available for the Δ-unknotting number: positive vectors.
pub fn positive_vectors(grid: &[TwistVector]) -> Vec<TwistVector> {
    grid.iter()
        .filter(|v| formulas::positive_form(v).is_some())
        .cloned()
        .collect()
}

/// `P(-1, p2, ..., pn)` with odd `1 <= p_i <= max`, for odd `n >= 3`.
pub fn minus_one_grid(n: usize, max: i64) -> Vec<TwistVector> {
    if n < 3 || n % 2 == 0 {
        return Vec::new();
    }
    let positives: Vec<i64> = (1..=max).filter(|x| x % 2 == 1).collect();
    let mut choices = vec![vec![-1]];
    choices.extend(std::iter::repeat_n(positives, n - 1));
    vectors(product(&choices))
}
