//! Closed forms for `a2` and the Δ-unknotting number, evaluated in exact
//! rational arithmetic. Every result is checked to be an integer before it
//! leaves this module.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pretzel::{self, TwistVector};
use crate::rational::ExactRational;

/// Which closed form settled an exact Δ-unknotting number.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClosedForm {
    /// Positive pretzel knot, all entries odd.
    PositiveOddType,
    /// Positive pretzel knot, one even entry, `n` even.
    PositiveEvenTypeEvenN,
    /// Positive pretzel knot, one even entry, `n` odd.
    PositiveEvenTypeOddN,
    /// `P(-1, p2, ..., pn)` with odd positive `p2..pn`, `n` odd.
    MinusOneOddType,
    /// Torus knot `T(2, n)` presented as `P(1, ..., 1)`.
    TorusKnot,
}

impl ClosedForm {
    pub fn describe(self) -> &'static str {
        match self {
            ClosedForm::PositiveOddType => "positive pretzel knot of odd type",
            ClosedForm::PositiveEvenTypeEvenN => "positive pretzel knot of even type, n even",
            ClosedForm::PositiveEvenTypeOddN => "positive pretzel knot of even type, n odd",
            ClosedForm::MinusOneOddType => "odd type with a single -1 band",
            ClosedForm::TorusKnot => "torus knot T(2,n)",
        }
    }
}

fn hypothesis(v: &TwistVector, reason: &str) -> Error {
    Error::Hypothesis {
        vector: v.clone(),
        reason: reason.to_string(),
    }
}

fn q(n: i64) -> ExactRational {
    ExactRational::integer(n)
}

fn frac(num: i64, den: i64) -> ExactRational {
    ExactRational::ratio(num, den)
}

fn pair_sum(entries: &[i64]) -> i64 {
    let mut s = 0;
    for i in 0..entries.len() {
        for j in i + 1..entries.len() {
            s += entries[i] * entries[j];
        }
    }
    s
}

fn square_sum(entries: &[i64]) -> i64 {
    entries.iter().map(|p| p * p).sum()
}

/// `a2` of an odd-type pretzel knot (any signs):
/// `1/4 Σ_{i<j} p_i p_j + 1/8 (n - 1)`.
///
/// The second form `1/8 ((Σ p_i)^2 - Σ p_i^2) + 1/8 (n - 1)` is evaluated
/// as well and must agree.
pub fn a2_odd_formula(v: &TwistVector) -> Result<i64> {
    let p = v.entries();
    if p.iter().any(|x| x % 2 == 0) || p.len() % 2 == 0 {
        return Err(hypothesis(v, "odd type needs all entries odd and n odd"));
    }
    let n = p.len() as i64;
    let tail = frac(n - 1, 8);
    let pairwise = frac(1, 4) * q(pair_sum(p)) + tail.clone();
    let total: i64 = p.iter().sum();
    let squares = frac(1, 8) * (q(total * total) - q(square_sum(p))) + tail;
    if pairwise != squares {
        return Err(Error::Invariant(format!(
            "odd-type forms disagree on {v}: {pairwise} vs {squares}"
        )));
    }
    pairwise.to_integer()
}

/// Splits an even-type vector into its even entry and the odd rest, taking
/// the even entry to the front by rotation.
fn even_front(v: &TwistVector) -> Result<(i64, Vec<i64>)> {
    if v.even_count() != 1 {
        return Err(hypothesis(v, "even type needs exactly one even entry"));
    }
    let at = v
        .entries()
        .iter()
        .position(|x| x % 2 == 0)
        .expect("one even entry");
    let rotated = v.rotated(at);
    Ok((rotated.entries()[0], rotated.entries()[1..].to_vec()))
}

/// `a2` of an even-type pretzel knot (any signs); the even entry may be at
/// any position.
///
/// * `n` even: `1/8 Σ p_i^2 + 1/4 p1 Σ_{i>=2} p_i - 1/8 (n - 1)`
/// * `n` odd: `1/8 Σ_{i>=2} p_i^2 - 1/4 p1 Σ_{i>=2} p_i - 1/8 (n - 1)`
pub fn a2_even_formula(v: &TwistVector) -> Result<i64> {
    let (even, rest) = even_front(v)?;
    let n = v.len() as i64;
    let rest_sum: i64 = rest.iter().sum();
    let rest_squares = square_sum(&rest);
    let tail = frac(n - 1, 8);
    let value = if n % 2 == 0 {
        frac(1, 8) * q(even * even + rest_squares) + frac(1, 4) * q(even * rest_sum) - tail
    } else {
        frac(1, 8) * q(rest_squares) - frac(1, 4) * q(even * rest_sum) - tail
    };
    value.to_integer()
}

/// Whichever of the two lemma formulas matches the parity pattern of `v`.
pub fn a2_formula(v: &TwistVector) -> Result<i64> {
    if !pretzel::is_knot(v) {
        return Err(Error::NotAKnot(v.clone()));
    }
    if v.even_count() == 0 {
        a2_odd_formula(v)
    } else {
        a2_even_formula(v)
    }
}

fn torus_value(p: i64, q_: i64) -> Result<i64> {
    if p < 1 || q_ < 1 || p.gcd(&q_) != 1 {
        return Err(Error::NotCoprime { p, q: q_ });
    }
    (frac(1, 24) * q(p * p - 1) * q(q_ * q_ - 1)).to_integer()
}

/// `a2(T(p, q)) = (p^2 - 1)(q^2 - 1) / 24`.
pub fn a2_torus(p: i64, q: i64) -> Result<i64> {
    torus_value(p, q)
}

/// `u^Δ(T(p, q)) = (p^2 - 1)(q^2 - 1) / 24`, coprime `p, q >= 1`.
pub fn u_delta_torus(p: i64, q: i64) -> Result<i64> {
    torus_value(p, q)
}

/// The closed form that applies to a positive pretzel knot, if `v` is one.
pub fn positive_form(v: &TwistVector) -> Option<ClosedForm> {
    let class = pretzel::classify(v);
    if !class.is_knot() || !class.positive {
        return None;
    }
    Some(match class.even_index {
        None => ClosedForm::PositiveOddType,
        Some(_) if v.len() % 2 == 0 => ClosedForm::PositiveEvenTypeEvenN,
        Some(_) => ClosedForm::PositiveEvenTypeOddN,
    })
}

/// Δ-unknotting number of a positive pretzel knot. On this class it equals
/// `a2`, so the odd- or even-type formula is evaluated.
pub fn u_delta_positive_formula(v: &TwistVector) -> Result<(i64, ClosedForm)> {
    let form = positive_form(v)
        .ok_or_else(|| hypothesis(v, "not a positive pretzel knot"))?;
    let value = match form {
        ClosedForm::PositiveOddType => a2_odd_formula(v)?,
        _ => a2_even_formula(v)?,
    };
    Ok((value, form))
}

/// True when `v = (-1, p2, ..., pn)` with every `p_i` (i >= 2) odd and
/// positive and `n` odd.
pub fn is_minus_one_class(v: &TwistVector) -> bool {
    let p = v.entries();
    p.len() % 2 == 1
        && p.len() >= 3
        && p[0] == -1
        && p[1..].iter().all(|x| *x > 0 && x % 2 == 1)
}

/// Δ-unknotting number of `P(-1, p2, ..., pn)`:
/// `-1/4 Σ_{i>=2} p_i + 1/4 Σ_{2<=i<j} p_i p_j + 1/8 (n - 1)`.
pub fn u_delta_oddone_formula(v: &TwistVector) -> Result<i64> {
    if !is_minus_one_class(v) {
        return Err(hypothesis(
            v,
            "expected (-1, p2, ..., pn) with p2..pn odd positive and n odd",
        ));
    }
    let rest = &v.entries()[1..];
    let n = v.len() as i64;
    let value = -frac(1, 4) * q(rest.iter().sum())
        + frac(1, 4) * q(pair_sum(rest))
        + frac(n - 1, 8);
    value.to_integer()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tv(s: &str) -> TwistVector {
        s.parse().unwrap()
    }

    #[test]
    fn odd_formula_examples() {
        assert_eq!(a2_odd_formula(&tv("1,1,1")), Ok(1));
        assert_eq!(a2_odd_formula(&tv("3,5,7")), Ok(18));
        assert_eq!(a2_odd_formula(&tv("-1,3,3")), Ok(1));
        assert_eq!(a2_odd_formula(&tv("9")), Ok(0));
        assert!(a2_odd_formula(&tv("2,3,3")).is_err());
        assert!(a2_odd_formula(&tv("3,3")).is_err());
    }

    #[test]
    fn even_formula_examples() {
        assert_eq!(a2_even_formula(&tv("2,3,3")), Ok(-1));
        assert_eq!(a2_even_formula(&tv("2,-3,-3,1")), Ok(0));
        assert_eq!(a2_even_formula(&tv("2,5,3")), Ok(0));
        assert_eq!(a2_even_formula(&tv("-2,3,3")), Ok(5));
        assert_eq!(a2_even_formula(&tv("3,-2,3")), Ok(5));
        assert_eq!(a2_even_formula(&tv("2,5,1")), Ok(0));
        assert_eq!(a2_even_formula(&tv("2,1,1,3,3")), Ok(-2));
        assert_eq!(a2_even_formula(&tv("2,1,1,1,1,-3,1")), Ok(0));
        assert!(a2_even_formula(&tv("2,4,3")).is_err());
        assert!(a2_even_formula(&tv("3,5,7")).is_err());
    }

    #[test]
    fn torus_values() {
        assert_eq!(u_delta_torus(2, 3), Ok(1));
        assert_eq!(u_delta_torus(2, 7), Ok(6));
        assert_eq!(u_delta_torus(3, 4), Ok(5));
        assert_eq!(u_delta_torus(1, 9), Ok(0));
        assert_eq!(u_delta_torus(4, 6), Err(Error::NotCoprime { p: 4, q: 6 }));
        assert!(u_delta_torus(0, 1).is_err());
        assert_eq!(a2_torus(2, 5), Ok(3));
    }

    #[test]
    fn positive_gate() {
        assert_eq!(
            u_delta_positive_formula(&tv("3,5,7")),
            Ok((18, ClosedForm::PositiveOddType))
        );
        assert_eq!(
            u_delta_positive_formula(&tv("-2,3,3")),
            Ok((5, ClosedForm::PositiveEvenTypeOddN))
        );
        assert_eq!(
            u_delta_positive_formula(&tv("2,3,1,5")).map(|r| r.1),
            Ok(ClosedForm::PositiveEvenTypeEvenN)
        );
        assert!(u_delta_positive_formula(&tv("2,1,3")).is_err());
    }

    #[test]
    fn minus_one_class() {
        assert_eq!(u_delta_oddone_formula(&tv("-1,3,3")), Ok(1));
        assert_eq!(u_delta_oddone_formula(&tv("-1,1,1")), Ok(0));
        assert_eq!(u_delta_oddone_formula(&tv("-1,3,5,5,7")), Ok(32));
        assert_eq!(u_delta_oddone_formula(&tv("-1,5,3,3,3")), Ok(15));
        assert!(u_delta_oddone_formula(&tv("3,-1,3")).is_err());
        assert!(u_delta_oddone_formula(&tv("-1,3,-3")).is_err());
        assert!(u_delta_oddone_formula(&tv("-1,3,3,3")).is_err());
    }
}
