//! Δ-unknotting numbers: exact values on the classes where they are
//! settled, parity lower bounds elsewhere, and checkable Δ-move cost
//! certificates for `P(-1, p2, ..., pn)`.
//!
//! Any two knots satisfy `d(K, K') - |a2(K) - a2(K')| ∈ {0, 2, 4, ...}` for
//! the Δ-Gordian distance `d`, hence `u^Δ(K) ∈ {|a2|, |a2| + 2, ...}`.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::a2::A2Context;
use crate::error::{Error, Result};
use crate::formulas::{self, ClosedForm};
use crate::pretzel::{self, TwistVector};
use crate::table::KnotTable;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(n: i64) -> Self {
        if n % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

/// `(|a2|, parity of |a2|)`: the admissible values are `|a2| + 2k`, `k >= 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LowerBound {
    pub value: i64,
    pub parity: Parity,
}

impl LowerBound {
    pub fn from_a2(a2: i64) -> Self {
        LowerBound {
            value: a2.abs(),
            parity: Parity::of(a2.abs()),
        }
    }

    pub fn admits(&self, u: i64) -> bool {
        u >= self.value && (u - self.value) % 2 == 0
    }
}

pub fn lower_bound(v: &TwistVector, ctx: &A2Context) -> Result<LowerBound> {
    Ok(LowerBound::from_a2(ctx.skein(v)?))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum DeltaKind {
    Exact {
        value: i64,
        closed_form: ClosedForm,
        /// The symmetric image of the input the closed form was applied to.
        via: TwistVector,
    },
    Bounds {
        lower: i64,
        parity: Parity,
        #[serde(skip_serializing_if = "Option::is_none")]
        upper: Option<i64>,
        /// Values listed for this knot in a loaded table, never collapsed.
        #[serde(skip_serializing_if = "Option::is_none")]
        known: Option<BTreeSet<i64>>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeltaResult {
    pub vector: TwistVector,
    pub a2: i64,
    #[serde(flatten)]
    pub kind: DeltaKind,
}

impl fmt::Display for DeltaResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            DeltaKind::Exact {
                value, closed_form, ..
            } => write!(
                f,
                "{}: u_delta = {} ({}), a2 = {}",
                self.vector,
                value,
                closed_form.describe(),
                self.a2
            ),
            DeltaKind::Bounds {
                lower,
                upper,
                known,
                ..
            } => {
                write!(
                    f,
                    "{}: u_delta in {{{}, {}, {}, ...}} (|a2| = {} plus an even number)",
                    self.vector,
                    lower,
                    lower + 2,
                    lower + 4,
                    self.a2.abs()
                )?;
                if let Some(u) = upper {
                    write!(f, ", upper bound {u}")?;
                }
                if let Some(k) = known {
                    let vals: Vec<String> = k.iter().map(|x| x.to_string()).collect();
                    write!(f, ", table lists {}", vals.join(" or "))?;
                }
                Ok(())
            }
        }
    }
}

/// Images of `v` under rotation and reflection of the bands and under
/// mirroring. All of them have the same Δ-unknotting number; arbitrary
/// band permutations are deliberately excluded.
fn symmetric_images(v: &TwistVector) -> Vec<TwistVector> {
    let mut out = v.dihedral_images();
    for image in pretzel::mirror(v).dihedral_images() {
        if !out.contains(&image) {
            out.push(image);
        }
    }
    out
}

fn exact_for(w: &TwistVector) -> Result<Option<(i64, ClosedForm)>> {
    let p = w.entries();
    if p.len() >= 3 && p.iter().all(|&x| x == 1) {
        return Ok(Some((
            formulas::u_delta_torus(2, p.len() as i64)?,
            ClosedForm::TorusKnot,
        )));
    }
    if formulas::positive_form(w).is_some() {
        return formulas::u_delta_positive_formula(w).map(Some);
    }
    if formulas::is_minus_one_class(w) {
        return Ok(Some((
            formulas::u_delta_oddone_formula(w)?,
            ClosedForm::MinusOneOddType,
        )));
    }
    Ok(None)
}

/// Δ-unknotting number of a pretzel knot, exact where a closed form covers
/// some rotation, reflection or mirror image of `v`, bounds otherwise.
pub fn u_delta(v: &TwistVector, ctx: &A2Context, table: Option<&KnotTable>) -> Result<DeltaResult> {
    if !pretzel::is_knot(v) {
        return Err(Error::NotAKnot(v.clone()));
    }
    let a2 = ctx.skein(v)?;
    let bound = LowerBound::from_a2(a2);
    let images = symmetric_images(v);
    for w in &images {
        if let Some((value, closed_form)) = exact_for(w)? {
            if !bound.admits(value) {
                return Err(Error::Invariant(format!(
                    "exact value {value} for {v} violates the parity bound from a2 = {a2}"
                )));
            }
            return Ok(DeltaResult {
                vector: v.clone(),
                a2,
                kind: DeltaKind::Exact {
                    value,
                    closed_form,
                    via: w.clone(),
                },
            });
        }
    }
    let known = table.and_then(|t| {
        images
            .iter()
            .find_map(|w| t.lookup(w))
            .map(|entry| entry.u_delta_known.clone())
    });
    Ok(DeltaResult {
        vector: v.clone(),
        a2,
        kind: DeltaKind::Bounds {
            lower: bound.value,
            parity: bound.parity,
            upper: known.as_ref().and_then(|k| k.iter().max().copied()),
            known,
        },
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Citation {
    /// The leaf is a single band, the unknot.
    TrivialKnot,
    /// The leaf is a positive pretzel knot of odd type, whose Δ-unknotting
    /// number equals `a2`.
    PositiveOddType,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertStep {
    pub before: TwistVector,
    pub after: TwistVector,
    /// One-based band index.
    pub band: usize,
    /// Number of Δ-moves spent on this crossing change.
    pub cost: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CertLeaf {
    pub vector: TwistVector,
    pub cited_cost: i64,
    pub citation: Citation,
}

/// Upper bound on the Δ-unknotting number of `initial`: a chain of
/// crossing changes with explicit Δ-move costs ending in a leaf whose cost
/// is cited rather than constructed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeltaCertificate {
    pub initial: TwistVector,
    pub steps: Vec<CertStep>,
    pub leaf: CertLeaf,
    pub total: i64,
}

impl DeltaCertificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse {
            input: "certificate".into(),
            reason: e.to_string(),
        })
    }
}

/// Cost of exchanging the marked crossing in band 2 of
/// `(-1, p2, p3, ..., pn)`: the clasp passes `(Σ_{i>=3} p_i - 1) / 2`
/// hurdles, one Δ-move each.
pub fn clasp_cost(v: &TwistVector) -> Result<i64> {
    if !formulas::is_minus_one_class(v) {
        return Err(Error::Hypothesis {
            vector: v.clone(),
            reason: "clasp cost needs (-1, p2, ..., pn) with odd positive p_i, n odd".into(),
        });
    }
    let rest: i64 = v.entries()[2..].iter().sum();
    Ok((rest - 1) / 2)
}

fn leaf_citation(leaf: &TwistVector) -> Citation {
    if leaf.len() == 1 {
        Citation::TrivialKnot
    } else {
        Citation::PositiveOddType
    }
}

/// Certificate for `(-1, p2, ..., pn)`: `(p2 - 1) / 2` crossing changes in
/// band 2, then the isotopy `P(-1, 1, p3, ...) = P(p3, ...)` to the leaf.
pub fn build_certificate_oddone(v: &TwistVector) -> Result<DeltaCertificate> {
    let expected = formulas::u_delta_oddone_formula(v)?;
    let mut steps = Vec::new();
    let mut cur = v.clone();
    while cur.entries()[1] > 1 {
        let after = cur.with_entry(1, cur.entries()[1] - 2);
        steps.push(CertStep {
            before: cur.clone(),
            after: after.clone(),
            band: 2,
            cost: clasp_cost(&cur)?,
        });
        cur = after;
    }
    let leaf_vector = pretzel::cancel_unit_pair(&cur).expect("(-1, 1, ...) has a unit pair");
    let citation = leaf_citation(&leaf_vector);
    let cited_cost = match citation {
        Citation::TrivialKnot => 0,
        Citation::PositiveOddType => formulas::u_delta_positive_formula(&leaf_vector)?.0,
    };
    let total = steps.iter().map(|s| s.cost).sum::<i64>() + cited_cost;
    if total != expected {
        return Err(Error::Invariant(format!(
            "certificate total {total} for {v} differs from the closed form {expected}"
        )));
    }
    Ok(DeltaCertificate {
        initial: v.clone(),
        steps,
        leaf: CertLeaf {
            vector: leaf_vector,
            cited_cost,
            citation,
        },
        total,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "check")]
pub enum Violation {
    InitialOutsideClass,
    ChainBroken { step: usize },
    StepShape { step: usize, reason: String },
    StepCost { step: usize, expected: i64, found: i64 },
    LeafVector { expected: TwistVector, found: TwistVector },
    LeafCitation { expected: Citation, found: Citation },
    LeafCost { expected: i64, found: i64 },
    Total { expected: i64, found: i64 },
    LowerBound { total: i64, abs_a2: i64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::InitialOutsideClass => {
                write!(f, "initial vector is not of the form (-1, odd positives), n odd")
            }
            Violation::ChainBroken { step } => write!(f, "step {step} does not start where the previous one ended"),
            Violation::StepShape { step, reason } => write!(f, "step {step}: {reason}"),
            Violation::StepCost { step, expected, found } => {
                write!(f, "step {step}: clasp cost should be {expected}, certificate says {found}")
            }
            Violation::LeafVector { expected, found } => {
                write!(f, "leaf should be {expected}, certificate says {found}")
            }
            Violation::LeafCitation { expected, found } => {
                write!(f, "leaf citation should be {expected:?}, certificate says {found:?}")
            }
            Violation::LeafCost { expected, found } => {
                write!(f, "leaf cost should be {expected}, certificate says {found}")
            }
            Violation::Total { expected, found } => {
                write!(f, "total should be {expected}, certificate says {found}")
            }
            Violation::LowerBound { total, abs_a2 } => write!(
                f,
                "total {total} is not |a2| = {abs_a2} plus a non-negative even number"
            ),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub violation: Option<Violation>,
}

impl VerifyReport {
    fn pass() -> Self {
        VerifyReport {
            ok: true,
            violation: None,
        }
    }

    fn fail(v: Violation) -> Self {
        VerifyReport {
            ok: false,
            violation: Some(v),
        }
    }
}

fn check_step(index: usize, step: &CertStep) -> Option<Violation> {
    let shape = |reason: &str| {
        Some(Violation::StepShape {
            step: index,
            reason: reason.to_string(),
        })
    };
    if step.band != 2 {
        return shape("crossing changes happen in band 2");
    }
    if !formulas::is_minus_one_class(&step.before) || step.before.entries()[1] < 3 {
        return shape("vector before the change must be (-1, p2 >= 3, odd positives)");
    }
    let p2 = step.before.entries()[1];
    if step.after != step.before.with_entry(1, p2 - 2) {
        return shape("band 2 must lose exactly two half-twists and nothing else change");
    }
    let expected = clasp_cost(&step.before).expect("class checked");
    if step.cost != expected {
        return Some(Violation::StepCost {
            step: index,
            expected,
            found: step.cost,
        });
    }
    None
}

/// Recomputes every part of a certificate independently. The leaf cost is
/// re-derived from `a2` of the leaf by the skein route, and the total is
/// gated by the parity lower bound of the initial knot.
pub fn verify_certificate(c: &DeltaCertificate, ctx: &A2Context) -> Result<VerifyReport> {
    if !formulas::is_minus_one_class(&c.initial) {
        return Ok(VerifyReport::fail(Violation::InitialOutsideClass));
    }
    let mut cur = c.initial.clone();
    for (i, step) in c.steps.iter().enumerate() {
        if step.before != cur {
            return Ok(VerifyReport::fail(Violation::ChainBroken { step: i }));
        }
        if let Some(v) = check_step(i, step) {
            return Ok(VerifyReport::fail(v));
        }
        cur = step.after.clone();
    }
    if cur.entries()[1] != 1 {
        return Ok(VerifyReport::fail(Violation::StepShape {
            step: c.steps.len(),
            reason: "chain must end with band 2 reduced to a single half-twist".into(),
        }));
    }
    let expected_leaf = TwistVector::new(cur.entries()[2..].to_vec())?;
    if c.leaf.vector != expected_leaf {
        return Ok(VerifyReport::fail(Violation::LeafVector {
            expected: expected_leaf,
            found: c.leaf.vector.clone(),
        }));
    }
    let citation = leaf_citation(&expected_leaf);
    if c.leaf.citation != citation {
        return Ok(VerifyReport::fail(Violation::LeafCitation {
            expected: citation,
            found: c.leaf.citation,
        }));
    }
    let leaf_cost = match citation {
        Citation::TrivialKnot => 0,
        Citation::PositiveOddType => {
            if !pretzel::is_positive(&expected_leaf)? {
                return Ok(VerifyReport::fail(Violation::LeafVector {
                    expected: expected_leaf.clone(),
                    found: c.leaf.vector.clone(),
                }));
            }
            ctx.skein(&expected_leaf)?
        }
    };
    if c.leaf.cited_cost != leaf_cost {
        return Ok(VerifyReport::fail(Violation::LeafCost {
            expected: leaf_cost,
            found: c.leaf.cited_cost,
        }));
    }
    let total = c.steps.iter().map(|s| s.cost).sum::<i64>() + c.leaf.cited_cost;
    if c.total != total {
        return Ok(VerifyReport::fail(Violation::Total {
            expected: total,
            found: c.total,
        }));
    }
    let bound = lower_bound(&c.initial, ctx)?;
    if !bound.admits(c.total) {
        return Ok(VerifyReport::fail(Violation::LowerBound {
            total: c.total,
            abs_a2: bound.value,
        }));
    }
    Ok(VerifyReport::pass())
}
