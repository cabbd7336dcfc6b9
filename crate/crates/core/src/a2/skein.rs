//! `a2` by crossing changes.
//!
//! For a crossing `c` of a knot diagram `d`,
//! `a2(d) = a2(switch(d, c)) + sign(c) * lk(smooth(d, c))`.
//! Switching one crossing of a twist band and cancelling the resulting
//! half-twist pair moves that entry two steps toward zero, so the recursion
//! walks the twist vector down to one of three base cases:
//!
//! * a single band: the unknot, `a2 = 0`;
//! * a zero entry: a connected sum of `T(2, p_j)`, `a2 = Σ (p_j^2 - 1) / 8`;
//! * only `±1` entries: after cancelling `(+1, -1)` pairs this is `T(2, m)`
//!   or its mirror, `a2 = (m^2 - 1) / 8`.
//!
//! Linking numbers always come from the smoothed diagram itself.

use dashmap::DashMap;
use serde::Serialize;

use crate::diagram::build_diagram;
use crate::error::{Error, Result};
use crate::pretzel::{self, TwistVector};
use crate::rational::ExactRational;

/// One crossing change in a recursion trace.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SkeinStep {
    pub vector: TwistVector,
    /// One-based band whose top crossing was changed.
    pub band: usize,
    pub crossing_sign: i64,
    pub lk: i64,
    /// `crossing_sign * lk`, i.e. `a2(vector) - a2(next vector)`.
    pub contribution: i64,
}

impl SkeinStep {
    /// Vector after the crossing change and band reduction.
    pub fn next_vector(&self) -> TwistVector {
        let i = self.band - 1;
        let p = self.vector.entries()[i];
        self.vector.with_entry(i, p - 2 * p.signum())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BaseRule {
    SingleBand,
    ConnectedSum,
    TorusChain,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BaseCase {
    pub vector: TwistVector,
    pub rule: BaseRule,
    #[serde(serialize_with = "crate::a2::serialize_rational")]
    pub value: ExactRational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SkeinTrace {
    pub steps: Vec<SkeinStep>,
    pub base: BaseCase,
}

impl SkeinTrace {
    /// Step list as JSON.
    pub fn steps_json(&self) -> String {
        serde_json::to_string_pretty(&self.steps).expect("trace serializes")
    }
}

/// Closed-form value when `v` is one of the base cases.
pub fn base_case(v: &TwistVector) -> Option<BaseCase> {
    let p = v.entries();
    let eighth = |num: i64| ExactRational::ratio(num, 8);
    let (rule, value) = if p.len() == 1 {
        (BaseRule::SingleBand, ExactRational::zero())
    } else if let Some(zero) = p.iter().position(|&x| x == 0) {
        let value = p
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != zero)
            .map(|(_, &x)| eighth(x * x - 1))
            .sum();
        (BaseRule::ConnectedSum, value)
    } else if p.iter().all(|x| x.abs() == 1) {
        let mut w = v.clone();
        while let Some(next) = pretzel::cancel_unit_pair(&w) {
            w = next;
        }
        let m = w.len() as i64;
        (BaseRule::TorusChain, eighth(m * m - 1))
    } else {
        return None;
    };
    Some(BaseCase {
        vector: v.clone(),
        rule,
        value,
    })
}

/// Performs the crossing change on the first band with `|p| >= 2`.
pub fn skein_step(v: &TwistVector) -> Result<Option<SkeinStep>> {
    let Some(i) = v.entries().iter().position(|p| p.abs() >= 2) else {
        return Ok(None);
    };
    let d = build_diagram(v);
    let c = d.band_crossings(i)[0];
    let crossing_sign = d.sign(c)?;
    let lk = d.smooth_crossing(c)?.linking_number()?;
    Ok(Some(SkeinStep {
        vector: v.clone(),
        band: i + 1,
        crossing_sign,
        lk,
        contribution: crossing_sign * lk,
    }))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum KeyMode {
    /// Cache by the vector as given.
    #[default]
    Exact,
    /// Cache by the sorted entries. Relies on `a2` being invariant under
    /// band permutations.
    Sorted,
}

/// Memoized skein evaluator. The cache is safe to share between threads;
/// concurrent writers store equal values.
#[derive(Debug, Default)]
pub struct SkeinEngine {
    memo: DashMap<Vec<i64>, ExactRational>,
    mode: KeyMode,
}

impl SkeinEngine {
    pub fn new(mode: KeyMode) -> Self {
        SkeinEngine {
            memo: DashMap::new(),
            mode,
        }
    }

    pub fn mode(&self) -> KeyMode {
        self.mode
    }

    pub fn cached(&self) -> usize {
        self.memo.len()
    }

    fn key(&self, v: &TwistVector) -> Vec<i64> {
        match self.mode {
            KeyMode::Exact => v.entries().to_vec(),
            KeyMode::Sorted => pretzel::canonical_key(v),
        }
    }

    pub fn a2(&self, v: &TwistVector) -> Result<i64> {
        self.evaluate(v, false).map(|(value, _)| value)
    }

    /// Like [`SkeinEngine::a2`] but bypasses cached values so that every
    /// step is recorded.
    pub fn a2_traced(&self, v: &TwistVector) -> Result<(i64, SkeinTrace)> {
        let (value, trace) = self.evaluate(v, true)?;
        Ok((value, trace.expect("trace recorded")))
    }

    fn evaluate(&self, v: &TwistVector, record: bool) -> Result<(i64, Option<SkeinTrace>)> {
        if !pretzel::is_knot(v) {
            return Err(Error::NotAKnot(v.clone()));
        }
        let mut steps = Vec::new();
        let mut cur = v.clone();
        let mut base = None;
        let bottom = loop {
            if !record {
                if let Some(hit) = self.memo.get(&self.key(&cur)) {
                    break hit.clone();
                }
            }
            if let Some(b) = base_case(&cur) {
                let value = b.value.clone();
                base = Some(b);
                break value;
            }
            let step = skein_step(&cur)?.expect("non-base vector has a band to reduce");
            cur = step.next_vector();
            steps.push(step);
        };

        let mut acc = bottom;
        self.memo.insert(self.key(&cur), acc.clone());
        for step in steps.iter().rev() {
            acc = acc + ExactRational::integer(step.contribution);
            self.memo.insert(self.key(&step.vector), acc.clone());
        }
        let value = acc.to_integer()?;
        let trace = base.filter(|_| record).map(|base| SkeinTrace { steps, base });
        Ok((value, trace))
    }
}

/// Replays a trace against freshly built diagrams and returns the value it
/// certifies.
pub fn replay(v: &TwistVector, trace: &SkeinTrace) -> Result<i64> {
    let mut expected = v.clone();
    let mut acc = ExactRational::zero();
    for step in &trace.steps {
        if step.vector != expected {
            return Err(Error::Invariant(format!(
                "trace step on {} does not follow {}",
                step.vector, expected
            )));
        }
        let again = skein_step(&step.vector)?
            .ok_or_else(|| Error::Invariant(format!("{} has no band to reduce", step.vector)))?;
        if again != *step || step.contribution != step.crossing_sign * step.lk {
            return Err(Error::Invariant(format!(
                "step on {} does not replay: logged {:?}, recomputed {:?}",
                step.vector, step, again
            )));
        }
        acc = acc + ExactRational::integer(step.contribution);
        expected = step.next_vector();
    }
    let base = base_case(&expected)
        .ok_or_else(|| Error::Invariant(format!("{expected} is not a base case")))?;
    if base != trace.base {
        return Err(Error::Invariant(format!(
            "base case of {expected} does not replay"
        )));
    }
    (acc + base.value).to_integer()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tv(s: &str) -> TwistVector {
        s.parse().unwrap()
    }

    #[test]
    fn examples() {
        let e = SkeinEngine::default();
        assert_eq!(e.a2(&tv("1,1,1")), Ok(1));
        assert_eq!(e.a2(&tv("2,3,3")), Ok(-1));
        assert_eq!(e.a2(&tv("2,1,1,3,3")), Ok(-2));
        assert_eq!(e.a2(&tv("0,3,5")), Ok(4));
        assert_eq!(e.a2(&tv("3,5,7")), Ok(18));
        assert_eq!(e.a2(&tv("-3,-5,-7")), Ok(18));
        assert_eq!(e.a2(&tv("7")), Ok(0));
        assert_eq!(e.a2(&tv("3,3")), Err(Error::NotAKnot(tv("3,3"))));
    }

    #[test]
    fn base_cases() {
        assert_eq!(base_case(&tv("5")).unwrap().rule, BaseRule::SingleBand);
        let b = base_case(&tv("0,3,5")).unwrap();
        assert_eq!((b.rule, b.value), (BaseRule::ConnectedSum, ExactRational::integer(4)));
        let b = base_case(&tv("1,-1,1,1,1")).unwrap();
        assert_eq!((b.rule, b.value), (BaseRule::TorusChain, ExactRational::integer(1)));
        assert!(base_case(&tv("3,1,1")).is_none());
    }

    #[test]
    fn trace_replays() {
        let e = SkeinEngine::default();
        let v = tv("3,5,7");
        let (value, trace) = e.a2_traced(&v).unwrap();
        assert_eq!(value, 18);
        assert_eq!(trace.steps.len(), 1 + 2 + 3);
        assert_eq!(trace.steps[0].lk, 6);
        assert_eq!(trace.base.vector, tv("1,1,1"));
        assert_eq!(replay(&v, &trace), Ok(18));

        let mut forged = trace.clone();
        forged.steps[2].lk += 1;
        forged.steps[2].contribution += 1;
        assert!(replay(&v, &forged).is_err());
    }

    #[test]
    fn trace_json_field_names() {
        let (_, trace) = SkeinEngine::default().a2_traced(&tv("3,1,1")).unwrap();
        let json: serde_json::Value = serde_json::from_str(&trace.steps_json()).unwrap();
        let step = &json[0];
        for field in ["vector", "band", "crossingSign", "lk", "contribution"] {
            assert!(step.get(field).is_some(), "{field}");
        }
    }

    #[test]
    fn sorted_keys_agree() {
        let exact = SkeinEngine::new(KeyMode::Exact);
        let sorted = SkeinEngine::new(KeyMode::Sorted);
        for s in ["3,-5,1", "-5,1,3", "1,3,-5", "2,-3,5,1", "5,1,2,-3"] {
            assert_eq!(exact.a2(&tv(s)), sorted.a2(&tv(s)), "{s}");
        }
    }
}
