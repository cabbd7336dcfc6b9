//! Twist vectors and the parity rules that decide when a pretzel link is a
//! knot, which type it has, and whether it is a positive pretzel knot.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::diagram;
use crate::error::{Error, Result};

/// The half-twist counts `(p1, ..., pn)` of a pretzel link.
///
/// Entries are signed; the sign selects the twist direction of the band.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct TwistVector(Vec<i64>);

impl TwistVector {
    pub fn new(entries: Vec<i64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::Parse {
                input: String::new(),
                reason: "a pretzel link needs at least one band".into(),
            });
        }
        Ok(TwistVector(entries))
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn crossing_count(&self) -> usize {
        self.0.iter().map(|p| p.unsigned_abs() as usize).sum()
    }

    pub fn even_count(&self) -> usize {
        self.0.iter().filter(|p| *p % 2 == 0).count()
    }

    /// Copy with entry `index` replaced.
    pub fn with_entry(&self, index: usize, value: i64) -> TwistVector {
        let mut entries = self.0.clone();
        entries[index] = value;
        TwistVector(entries)
    }

    /// Cyclic rotation so that entry `start` comes first.
    pub fn rotated(&self, start: usize) -> TwistVector {
        let mut entries = self.0.clone();
        entries.rotate_left(start % self.len());
        TwistVector(entries)
    }

    pub fn reversed(&self) -> TwistVector {
        TwistVector(self.0.iter().rev().copied().collect())
    }

    /// All rotations and reflections of the band sequence. These are
    /// isotopies of the pretzel link itself, unlike arbitrary permutations.
    pub fn dihedral_images(&self) -> Vec<TwistVector> {
        let mut images = Vec::with_capacity(2 * self.len());
        for flipped in [self.clone(), self.reversed()] {
            for start in 0..self.len() {
                let image = flipped.rotated(start);
                if !images.contains(&image) {
                    images.push(image);
                }
            }
        }
        images
    }
}

impl From<TwistVector> for Vec<i64> {
    fn from(v: TwistVector) -> Self {
        v.0
    }
}

impl TryFrom<Vec<i64>> for TwistVector {
    type Error = Error;

    fn try_from(entries: Vec<i64>) -> Result<Self> {
        TwistVector::new(entries)
    }
}

impl fmt::Display for TwistVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P(")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for TwistVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for TwistVector {
    type Err = Error;

    /// Parses `"-1,3,5"`. Whitespace, an optional `P(...)` wrapper and the
    /// Unicode minus sign are accepted.
    fn from_str(s: &str) -> Result<Self> {
        parse_list(s, ',')
    }
}

pub(crate) fn parse_list(s: &str, sep: char) -> Result<TwistVector> {
    let err = |reason: String| Error::Parse {
        input: s.to_string(),
        reason,
    };
    let normalized = s.replace('\u{2212}', "-");
    let mut body = normalized.trim();
    if let Some(rest) = body.strip_prefix('P').or_else(|| body.strip_prefix('p')) {
        body = rest.trim_start();
    }
    if let Some(inner) = body.strip_prefix('(').and_then(|b| b.strip_suffix(')')) {
        body = inner;
    }
    if body.trim().is_empty() {
        return Err(err("empty list".into()));
    }
    let entries = body
        .split(sep)
        .map(|tok| {
            let tok = tok.trim();
            tok.parse::<i64>()
                .map_err(|_| err(format!("{tok:?} is not an integer")))
        })
        .collect::<Result<Vec<_>>>()?;
    TwistVector::new(entries)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum LinkKind {
    Knot,
    Link { components: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum KnotType {
    OddType,
    EvenType,
    /// `n = 1`: a single twisted band closes up to the unknot.
    Trivial,
    NotApplicable,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PretzelClass {
    pub kind: LinkKind,
    pub knot_type: KnotType,
    pub positive: bool,
    /// Zero-based position of the unique even entry, if there is one.
    pub even_index: Option<usize>,
}

impl PretzelClass {
    pub fn is_knot(&self) -> bool {
        self.kind == LinkKind::Knot
    }
}

/// Knot criterion: precisely one entry even, or all odd with `n` odd.
pub fn is_knot(v: &TwistVector) -> bool {
    match v.even_count() {
        0 => v.len() % 2 == 1,
        1 => true,
        _ => false,
    }
}

pub fn classify(v: &TwistVector) -> PretzelClass {
    if !is_knot(v) {
        let components = if v.even_count() == 0 {
            2
        } else {
            diagram::build_diagram(v).component_count()
        };
        return PretzelClass {
            kind: LinkKind::Link { components },
            knot_type: KnotType::NotApplicable,
            positive: false,
            even_index: None,
        };
    }
    let even_index = v.entries().iter().position(|p| p % 2 == 0);
    let knot_type = if v.len() == 1 {
        KnotType::Trivial
    } else if even_index.is_some() {
        KnotType::EvenType
    } else {
        KnotType::OddType
    };
    PretzelClass {
        kind: LinkKind::Knot,
        knot_type,
        positive: positive_unchecked(v, even_index),
        even_index,
    }
}

fn positive_unchecked(v: &TwistVector, even_index: Option<usize>) -> bool {
    let odd_all_positive = v
        .entries()
        .iter()
        .enumerate()
        .filter(|(i, _)| Some(*i) != even_index)
        .all(|(_, p)| *p > 0);
    if !odd_all_positive {
        return false;
    }
    match even_index {
        None => v.len() % 2 == 1,
        Some(i) => {
            let even = v.entries()[i];
            if v.len() % 2 == 0 {
                even > 0
            } else {
                even < 0
            }
        }
    }
}

/// Positive pretzel knot test on the parameters. The even entry may sit at
/// any position.
///
/// With a single twist convention the two families are mirror to each
/// other: `P(2, 1)` is the mirror image of `P(1, 1, 1)`. The generated
/// diagram of a positive odd-type vector has only positive crossings, that
/// of a positive even-type vector only negative ones. Both `a2` and the
/// Δ-unknotting number are unchanged by mirroring.
pub fn is_positive(v: &TwistVector) -> Result<bool> {
    let class = classify(v);
    if !class.is_knot() {
        return Err(Error::NotAKnot(v.clone()));
    }
    Ok(class.positive)
}

pub fn mirror(v: &TwistVector) -> TwistVector {
    TwistVector(v.entries().iter().map(|p| -p).collect())
}

/// Removes one `+1` and one `-1` entry, or returns `None` when no such pair
/// exists.
pub fn cancel_unit_pair(v: &TwistVector) -> Option<TwistVector> {
    let plus = v.entries().iter().position(|&p| p == 1)?;
    let minus = v.entries().iter().position(|&p| p == -1)?;
    let entries = v
        .entries()
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != plus && *i != minus)
        .map(|(_, p)| *p)
        .collect::<Vec<_>>();
    Some(TwistVector(entries))
}

/// Sorted entries, used as a memoization key in sorted-key mode.
pub fn canonical_key(v: &TwistVector) -> Vec<i64> {
    let mut key = v.entries().to_vec();
    key.sort_unstable();
    key
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tv(s: &str) -> TwistVector {
        s.parse().unwrap()
    }

    #[test]
    fn classify_examples() {
        let c = classify(&tv("3,5,7"));
        assert_eq!(c.kind, LinkKind::Knot);
        assert_eq!(c.knot_type, KnotType::OddType);
        assert!(c.positive);

        let c = classify(&tv("2,3,3"));
        assert_eq!(c.knot_type, KnotType::EvenType);
        assert_eq!(c.even_index, Some(0));
        assert!(!c.positive);

        assert_eq!(classify(&tv("3,3")).kind, LinkKind::Link { components: 2 });
        assert!(!classify(&tv("2,4,3")).is_knot());
        assert_eq!(classify(&tv("7")).knot_type, KnotType::Trivial);
    }

    #[test]
    fn two_even_entries_component_count() {
        match classify(&tv("2,4,3")).kind {
            LinkKind::Link { components } => assert!(components >= 2),
            LinkKind::Knot => panic!("expected a link"),
        }
    }

    #[test]
    fn positivity() {
        assert!(is_positive(&tv("3,5,7")).unwrap());
        assert!(is_positive(&tv("-2,3,3")).unwrap());
        assert!(is_positive(&tv("3,-2,3")).unwrap());
        assert!(is_positive(&tv("4,3,1,5")).unwrap());
        assert!(!is_positive(&tv("2,3,3")).unwrap());
        assert!(!is_positive(&tv("-4,3,1,5")).unwrap());
        assert!(!is_positive(&tv("-1,3,3")).unwrap());
        assert!(is_positive(&tv("3,3")).is_err());
    }

    #[test]
    fn mirror_and_involution() {
        assert_eq!(mirror(&tv("3,5,7")), tv("-3,-5,-7"));
        assert_eq!(mirror(&tv("-1,3,3")), tv("1,-3,-3"));
        let v = tv("2,-3,-3,1");
        assert_eq!(mirror(&mirror(&v)), v);
    }

    #[test]
    fn unit_pair_cancellation() {
        assert_eq!(cancel_unit_pair(&tv("-1,1,3,3,5")), Some(tv("3,3,5")));
        assert_eq!(cancel_unit_pair(&tv("-1,1,7")), Some(tv("7")));
        assert_eq!(cancel_unit_pair(&tv("3,5,7")), None);
        assert_eq!(cancel_unit_pair(&tv("1,3,-1")), Some(tv("3")));
    }

    #[test]
    fn keys() {
        assert_eq!(canonical_key(&tv("5,3,7")), vec![3, 5, 7]);
        assert_eq!(canonical_key(&tv("2,-3,-3,1")), vec![-3, -3, 1, 2]);
        assert_eq!(canonical_key(&tv("1")), vec![1]);
    }

    #[test]
    fn parsing() {
        assert_eq!(tv(" -1 , 3,5 "), TwistVector(vec![-1, 3, 5]));
        assert_eq!(tv("\u{2212}1,3,5"), TwistVector(vec![-1, 3, 5]));
        assert_eq!(tv("P(2,3,3)"), TwistVector(vec![2, 3, 3]));
        assert!("".parse::<TwistVector>().is_err());
        assert!("1,,3".parse::<TwistVector>().is_err());
        assert!("a,b".parse::<TwistVector>().is_err());
    }

    #[test]
    fn dihedral_images_of_three_bands() {
        let images = tv("1,2,3").dihedral_images();
        assert_eq!(images.len(), 6);
        assert!(images.contains(&tv("3,2,1")));
        assert!(images.contains(&tv("2,3,1")));
        assert_eq!(tv("5,5,5").dihedral_images().len(), 1);
    }
}
