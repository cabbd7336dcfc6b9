//! Alexander polynomial of a knot diagram from the Wirtinger presentation.
//!
//! Generators are the over-arcs. At a crossing with over-arc `k`, incoming
//! under-arc `i` and outgoing under-arc `j`, Fox differentiation of the
//! relator and abelianization `x -> t` give the row
//!
//! * positive crossing: `(1 - t)` at `k`, `t` at `i`, `-1` at `j`
//! * negative crossing: `(t - 1)` at `k`, `1` at `i`, `-t` at `j`
//!
//! (the negative row is scaled by `t`). Dropping one row and one column and
//! taking the determinant yields `Δ(t)` up to a unit `±t^k`.

use serde::Serialize;

use super::poly::{self, Linear};
use crate::diagram::Diagram;
use crate::error::{Error, Result};

pub const DEFAULT_ORACLE_CAP: usize = 20;

/// `Δ(t)` normalized so that `Δ(t) = Δ(1/t)` and `Δ(1) = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SymmetricAlexander {
    /// Coefficients of `t^-m, ..., t^m`.
    coefficients: Vec<i64>,
}

impl SymmetricAlexander {
    pub fn one() -> Self {
        SymmetricAlexander {
            coefficients: vec![1],
        }
    }

    /// Normalizes a polynomial known up to a unit `±t^k`.
    pub fn from_unnormalized(coeffs: &[i64]) -> Result<Self> {
        let lo = coeffs
            .iter()
            .position(|&c| c != 0)
            .ok_or_else(|| Error::Invariant("Alexander determinant vanished".into()))?;
        let hi = coeffs.iter().rposition(|&c| c != 0).expect("non-zero entry");
        let mut body = coeffs[lo..=hi].to_vec();
        if body.len() % 2 == 0 {
            return Err(Error::Invariant(format!(
                "Alexander polynomial {body:?} has odd span"
            )));
        }
        match body.iter().sum::<i64>() {
            1 => {}
            -1 => body.iter_mut().for_each(|c| *c = -*c),
            s => {
                return Err(Error::Invariant(format!(
                    "Alexander polynomial {body:?} has value {s} at t = 1"
                )))
            }
        }
        if body.iter().ne(body.iter().rev()) {
            return Err(Error::Invariant(format!(
                "Alexander polynomial {body:?} is not symmetric"
            )));
        }
        Ok(SymmetricAlexander { coefficients: body })
    }

    pub fn half_span(&self) -> i64 {
        (self.coefficients.len() / 2) as i64
    }

    pub fn coefficients(&self) -> &[i64] {
        &self.coefficients
    }

    /// Coefficient of `t^exponent`.
    pub fn coefficient(&self, exponent: i64) -> i64 {
        let index = exponent + self.half_span();
        if index < 0 {
            return 0;
        }
        self.coefficients.get(index as usize).copied().unwrap_or(0)
    }

    fn terms(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        let m = self.half_span();
        self.coefficients
            .iter()
            .enumerate()
            .map(move |(i, &c)| (i as i64 - m, c))
    }

    /// `Δ''(1)` for the symmetric form, which equals `Σ c_k k^2`.
    pub fn second_derivative_at_one(&self) -> i64 {
        self.terms().map(|(k, c)| c * k * (k - 1)).sum()
    }

    /// `a2 = Δ''(1) / 2`.
    pub fn a2(&self) -> Result<i64> {
        let d2 = self.second_derivative_at_one();
        if d2 % 2 != 0 {
            return Err(Error::NonIntegral(format!("{d2}/2")));
        }
        Ok(d2 / 2)
    }
}

impl std::fmt::Display for SymmetricAlexander {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut first = true;
        for (k, c) in self.terms().collect::<Vec<_>>().into_iter().rev() {
            if c == 0 {
                continue;
            }
            let sign = if c < 0 { "-" } else if first { "" } else { "+" };
            let mag = c.abs();
            let body = match (k, mag) {
                (0, _) => mag.to_string(),
                (_, 1) if k == 1 => "t".to_string(),
                (_, 1) => format!("t^{k}"),
                (1, _) => format!("{mag}t"),
                _ => format!("{mag}t^{k}"),
            };
            if first {
                write!(f, "{sign}{body}")?;
            } else {
                write!(f, " {sign} {body}")?;
            }
            first = false;
        }
        Ok(())
    }
}

/// Fox-calculus matrix of the Wirtinger presentation, one row per crossing
/// and one column per over-arc.
pub fn alexander_matrix(d: &Diagram) -> Vec<Vec<Linear>> {
    let crossings = d.crossings();
    let edge_count = d.edges().len();
    let mut parent: Vec<usize> = (0..edge_count).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        let mut y = x;
        while parent[y] != r {
            let next = parent[y];
            parent[y] = r;
            y = next;
        }
        r
    }
    for (c, crossing) in crossings.iter().enumerate() {
        let (over_in, _) = d.incoming_slots(c);
        let (ra, rb) = (
            find(&mut parent, crossing.slots[over_in]),
            find(&mut parent, crossing.slots[(over_in + 2) % 4]),
        );
        parent[ra] = rb;
    }
    let mut arc_of_root = vec![usize::MAX; edge_count];
    let mut arc = vec![0; edge_count];
    let mut arcs = 0;
    for e in 0..edge_count {
        let r = find(&mut parent, e);
        if arc_of_root[r] == usize::MAX {
            arc_of_root[r] = arcs;
            arcs += 1;
        }
        arc[e] = arc_of_root[r];
    }

    let mut rows = vec![vec![[0i64; 2]; arcs]; crossings.len()];
    for (c, row) in rows.iter_mut().enumerate() {
        let (over_in, under_in) = d.incoming_slots(c);
        let slots = crossings[c].slots;
        let k = arc[slots[over_in]];
        let i = arc[slots[under_in]];
        let j = arc[slots[(under_in + 2) % 4]];
        let positive = d.sign(c).expect("crossing in range") > 0;
        let (ek, ei, ej) = if positive {
            ([1, -1], [0, 1], [-1, 0])
        } else {
            ([-1, 1], [1, 0], [0, -1])
        };
        for (col, e) in [(k, ek), (i, ei), (j, ej)] {
            row[col][0] += e[0];
            row[col][1] += e[1];
        }
    }
    rows
}

/// Which exact determinant route to use for the Alexander minor.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DeterminantRoute {
    /// Modular interpolation when its coefficient bound allows, Bareiss
    /// over `Z[t]` otherwise.
    Auto,
    FractionFree,
    Modular,
}

pub fn alexander_poly(d: &Diagram, cap: usize) -> Result<SymmetricAlexander> {
    alexander_poly_with(d, cap, DeterminantRoute::Auto)
}

pub fn alexander_poly_with(
    d: &Diagram,
    cap: usize,
    route: DeterminantRoute,
) -> Result<SymmetricAlexander> {
    let found = d.component_count();
    if found != 1 {
        return Err(Error::ComponentCount { expected: 1, found });
    }
    if d.crossing_count() > cap {
        return Err(Error::OracleCap {
            crossings: d.crossing_count(),
            cap,
        });
    }
    if d.crossing_count() == 0 {
        return Ok(SymmetricAlexander::one());
    }
    let full = alexander_matrix(d);
    let size = full.len() - 1;
    let minor: Vec<Vec<Linear>> = full[..size].iter().map(|row| row[..size].to_vec()).collect();
    let det = match route {
        DeterminantRoute::FractionFree => poly::det_fraction_free(&minor)?,
        DeterminantRoute::Modular => poly::det_modular(&minor)?,
        DeterminantRoute::Auto if poly::modular_applies(&minor) => poly::det_modular(&minor)?,
        DeterminantRoute::Auto => poly::det_fraction_free(&minor)?,
    };
    SymmetricAlexander::from_unnormalized(&poly::to_i64(&det)?)
}

pub fn a2_alexander(d: &Diagram, cap: usize) -> Result<i64> {
    alexander_poly(d, cap)?.a2()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::build_diagram;

    fn poly_of(s: &str) -> SymmetricAlexander {
        alexander_poly(&build_diagram(&s.parse().unwrap()), DEFAULT_ORACLE_CAP).unwrap()
    }

    #[test]
    fn trefoil() {
        let p = poly_of("1,1,1");
        assert_eq!(p.coefficients(), &[1, -1, 1]);
        assert_eq!(p.to_string(), "t - 1 + t^-1");
        assert_eq!(p.second_derivative_at_one(), 2);
        assert_eq!(p.a2(), Ok(1));
        assert_eq!(poly_of("-1,-1,-1"), p);
    }

    #[test]
    fn unknots() {
        assert_eq!(poly_of("1"), SymmetricAlexander::one());
        assert_eq!(poly_of("-1,1,1"), SymmetricAlexander::one());
        assert_eq!(poly_of("5"), SymmetricAlexander::one());
        assert_eq!(poly_of("0"), SymmetricAlexander::one());
    }

    #[test]
    fn table_knots() {
        // 8_2, 8_5 and 8_21 via their pretzel presentations
        assert_eq!(poly_of("2,5,1").a2(), Ok(0));
        assert_eq!(poly_of("2,3,3").a2(), Ok(-1));
        assert_eq!(poly_of("2,-3,-3,1").a2(), Ok(0));
        // figure-eight knot P(2,1,1) has a2 = -1
        assert_eq!(poly_of("2,1,1").coefficients(), &[-1, 3, -1]);
    }

    #[test]
    fn determinant_routes_agree() {
        for s in ["3,5,7", "2,-3,-3,1", "-2,3,3", "2,1,1,3,3", "1,-3,5"] {
            let d = build_diagram(&s.parse().unwrap());
            let a = alexander_poly_with(&d, 30, DeterminantRoute::FractionFree).unwrap();
            let b = alexander_poly_with(&d, 30, DeterminantRoute::Modular).unwrap();
            assert_eq!(a, b, "{s}");
        }
    }

    #[test]
    fn rejects_links_and_large_diagrams() {
        let link = build_diagram(&"3,3".parse().unwrap());
        assert!(matches!(
            alexander_poly(&link, 20),
            Err(Error::ComponentCount { expected: 1, found: 2 })
        ));
        let big = build_diagram(&"7,7,7".parse().unwrap());
        assert_eq!(
            alexander_poly(&big, 20),
            Err(Error::OracleCap { crossings: 21, cap: 20 })
        );
    }
}
