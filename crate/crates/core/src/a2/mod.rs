//! Three independent routes to the second Conway coefficient `a2`: the
//! crossing-change recursion, the Alexander polynomial of the generated
//! diagram, and the closed forms of [`crate::formulas`].

pub mod alexander;
mod poly;
pub mod skein;

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

pub use alexander::{a2_alexander, alexander_poly, SymmetricAlexander, DEFAULT_ORACLE_CAP};
pub use skein::{KeyMode, SkeinEngine, SkeinStep, SkeinTrace};

use crate::diagram::build_diagram;
use crate::error::{Error, Result};
use crate::formulas;
use crate::pretzel::{self, TwistVector};
use crate::rational::ExactRational;

pub(crate) fn serialize_rational<S: Serializer>(
    value: &ExactRational,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&value.to_string())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Skein,
    Alexander,
    Formula,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Skein => "skein",
            Method::Alexander => "alexander",
            Method::Formula => "formula",
        })
    }
}

/// Method selection for [`a2`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Selection {
    One(Method),
    /// Every applicable method; any disagreement is an error.
    All,
}

impl FromStr for Selection {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "skein" => Ok(Selection::One(Method::Skein)),
            "alexander" => Ok(Selection::One(Method::Alexander)),
            "formula" => Ok(Selection::One(Method::Formula)),
            "all" => Ok(Selection::All),
            other => Err(format!(
                "unknown method {other:?} (expected skein, alexander, formula or all)"
            )),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct A2Value {
    pub value: i64,
    pub method: Method,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<SkeinTrace>,
}

/// Shared state for `a2` evaluation: the skein cache and the crossing cap
/// above which the Alexander oracle is skipped.
#[derive(Debug)]
pub struct A2Context {
    pub engine: SkeinEngine,
    pub oracle_cap: usize,
}

impl Default for A2Context {
    fn default() -> Self {
        A2Context::new(DEFAULT_ORACLE_CAP)
    }
}

impl A2Context {
    pub fn new(oracle_cap: usize) -> Self {
        A2Context {
            engine: SkeinEngine::default(),
            oracle_cap,
        }
    }

    pub fn with_engine(engine: SkeinEngine, oracle_cap: usize) -> Self {
        A2Context { engine, oracle_cap }
    }

    pub fn skein(&self, v: &TwistVector) -> Result<i64> {
        self.engine.a2(v)
    }

    pub fn alexander(&self, v: &TwistVector) -> Result<i64> {
        if !pretzel::is_knot(v) {
            return Err(Error::NotAKnot(v.clone()));
        }
        a2_alexander(&build_diagram(v), self.oracle_cap)
    }

    pub fn oracle_applies(&self, v: &TwistVector) -> bool {
        v.crossing_count() <= self.oracle_cap
    }

    pub fn compute(&self, v: &TwistVector, method: Method, trace: bool) -> Result<A2Value> {
        let (value, trace) = match method {
            Method::Skein if trace => {
                let (value, t) = self.engine.a2_traced(v)?;
                (value, Some(t))
            }
            Method::Skein => (self.skein(v)?, None),
            Method::Alexander => (self.alexander(v)?, None),
            Method::Formula => (formulas::a2_formula(v)?, None),
        };
        Ok(A2Value {
            value,
            method,
            trace,
        })
    }
}

/// A single method's answer, without trace.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct MethodValue {
    pub method: Method,
    pub value: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct A2Outcome {
    pub vector: TwistVector,
    pub value: i64,
    pub results: Vec<A2Value>,
}

impl A2Outcome {
    pub fn value_of(&self, method: Method) -> Option<i64> {
        self.results
            .iter()
            .find(|r| r.method == method)
            .map(|r| r.value)
    }
}

/// Dispatches to one method, or to every applicable one with agreement
/// enforced. The Alexander oracle is skipped under [`Selection::All`] when
/// the diagram exceeds the oracle cap.
pub fn a2(
    v: &TwistVector,
    selection: Selection,
    ctx: &A2Context,
    trace: bool,
) -> Result<A2Outcome> {
    if !pretzel::is_knot(v) {
        return Err(Error::NotAKnot(v.clone()));
    }
    let methods: Vec<Method> = match selection {
        Selection::One(m) => vec![m],
        Selection::All => {
            let mut m = vec![Method::Skein, Method::Formula];
            if ctx.oracle_applies(v) {
                m.push(Method::Alexander);
            }
            m
        }
    };
    let results = methods
        .into_iter()
        .map(|m| ctx.compute(v, m, trace && m == Method::Skein))
        .collect::<Result<Vec<_>>>()?;
    let value = results[0].value;
    if results.iter().any(|r| r.value != value) {
        let detail = results
            .iter()
            .map(|r| format!("{}={}", r.method, r.value))
            .collect::<Vec<_>>()
            .join(", ");
        return Err(Error::Mismatch {
            vector: v.clone(),
            detail,
        });
    }
    Ok(A2Outcome {
        vector: v.clone(),
        value,
        results,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tv(s: &str) -> TwistVector {
        s.parse().unwrap()
    }

    #[test]
    fn all_methods_agree_on_examples() {
        let ctx = A2Context::default();
        for (s, expected) in [("3,5,7", 18), ("2,1,1,1,1,-3,1", 0), ("1", 0), ("2,5,1", 0)] {
            let out = a2(&tv(s), Selection::All, &ctx, false).unwrap();
            assert_eq!(out.value, expected, "{s}");
            assert_eq!(out.results.len(), 3, "{s}");
        }
    }

    #[test]
    fn oracle_skipped_above_cap() {
        let ctx = A2Context::new(10);
        let out = a2(&tv("3,5,7"), Selection::All, &ctx, false).unwrap();
        assert_eq!(out.value_of(Method::Alexander), None);
        assert!(matches!(
            a2(&tv("3,5,7"), Selection::One(Method::Alexander), &ctx, false),
            Err(Error::OracleCap { .. })
        ));
    }

    #[test]
    fn selection_parsing() {
        assert_eq!("all".parse(), Ok(Selection::All));
        assert_eq!("skein".parse(), Ok(Selection::One(Method::Skein)));
        assert!("jones".parse::<Selection>().is_err());
    }

    #[test]
    fn links_are_rejected() {
        let ctx = A2Context::default();
        assert_eq!(
            a2(&tv("3,3"), Selection::All, &ctx, false),
            Err(Error::NotAKnot(tv("3,3")))
        );
    }
}
