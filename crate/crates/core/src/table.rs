//! Named pretzel knots with published `a2` and Δ-unknotting values, and the
//! reconciliation of those values against what this crate computes.
//!
//! The CSV layout is `name,twists,a2,u_delta`. Twists are separated by `;`
//! and alternative Δ-unknotting values by `|`, so no field needs quoting:
//!
//! ```text
//! name,twists,a2,u_delta
//! 10_76,2;1;1;3;3,-2,2|4
//! ```

use std::collections::BTreeSet;
use std::fmt;
use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::a2::{A2Context, Method, MethodValue};
use crate::delta::{self, DeltaKind, LowerBound};
use crate::error::{Error, Result};
use crate::pretzel::{self, TwistVector};

const BUILTIN_CSV: &str = include_str!("../data/knots.csv");
const COLUMNS: [&str; 4] = ["name", "twists", "a2", "u_delta"];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", try_from = "RawEntry")]
pub struct KnotTableEntry {
    pub name: String,
    pub twists: TwistVector,
    pub a2_known: i64,
    /// Every value the source allows; a multi-valued entry stays multi-valued.
    pub u_delta_known: BTreeSet<i64>,
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase")]
struct RawEntry {
    name: String,
    twists: TwistVector,
    a2_known: i64,
    u_delta_known: BTreeSet<i64>,
}

impl TryFrom<RawEntry> for KnotTableEntry {
    type Error = String;

    fn try_from(raw: RawEntry) -> std::result::Result<Self, String> {
        KnotTableEntry::new(raw.name, raw.twists, raw.a2_known, raw.u_delta_known)
    }
}

impl KnotTableEntry {
    pub fn new(
        name: String,
        twists: TwistVector,
        a2_known: i64,
        u_delta_known: BTreeSet<i64>,
    ) -> std::result::Result<Self, String> {
        if name.is_empty() {
            return Err("empty knot name".into());
        }
        if !pretzel::is_knot(&twists) {
            return Err(format!("{twists} is a link, not a knot"));
        }
        if u_delta_known.is_empty() {
            return Err("u_delta needs at least one value".into());
        }
        if u_delta_known.iter().any(|&u| u < 0) {
            return Err("u_delta values are non-negative".into());
        }
        Ok(KnotTableEntry {
            name,
            twists,
            a2_known,
            u_delta_known,
        })
    }

    fn from_record(record: &csv::StringRecord) -> std::result::Result<Self, String> {
        if record.len() != COLUMNS.len() {
            return Err(format!(
                "expected {} fields, found {}",
                COLUMNS.len(),
                record.len()
            ));
        }
        let twists = pretzel::parse_list(&record[1], ';').map_err(|e| e.to_string())?;
        let a2_known = record[2]
            .parse::<i64>()
            .map_err(|_| format!("a2 {:?} is not an integer", &record[2]))?;
        let u_delta_known = record[3]
            .split('|')
            .map(|tok| {
                tok.trim()
                    .parse::<i64>()
                    .map_err(|_| format!("u_delta value {tok:?} is not an integer"))
            })
            .collect::<std::result::Result<BTreeSet<_>, _>>()?;
        KnotTableEntry::new(record[0].to_string(), twists, a2_known, u_delta_known)
    }

    fn csv_fields(&self) -> [String; 4] {
        let join = |items: Vec<String>, sep: &str| items.join(sep);
        [
            self.name.clone(),
            join(self.twists.entries().iter().map(i64::to_string).collect(), ";"),
            self.a2_known.to_string(),
            join(self.u_delta_known.iter().map(i64::to_string).collect(), "|"),
        ]
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct KnotTable {
    entries: Vec<KnotTableEntry>,
}

impl KnotTable {
    pub fn new(entries: Vec<KnotTableEntry>) -> Self {
        KnotTable { entries }
    }

    /// The six knots shipped in `data/knots.csv`.
    pub fn builtin() -> Self {
        KnotTable::from_csv(BUILTIN_CSV.as_bytes()).expect("shipped table parses")
    }

    pub fn entries(&self) -> &[KnotTableEntry] {
        &self.entries
    }

    pub fn lookup(&self, twists: &TwistVector) -> Option<&KnotTableEntry> {
        self.entries.iter().find(|e| &e.twists == twists)
    }

    pub fn by_name(&self, name: &str) -> Option<&KnotTableEntry> {
        self.entries.iter().find(|e| e.name == name)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let file = std::fs::File::open(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        KnotTable::from_csv(file)
    }

    /// Parses the CSV layout. Errors carry the one-based line number.
    pub fn from_csv<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .comment(Some(b'#'))
            .flexible(true)
            .from_reader(reader);
        let header_err = |reason: String| Error::Table { line: 1, reason };
        let headers = rdr
            .headers()
            .map_err(|e| header_err(e.to_string()))?
            .clone();
        if headers.iter().collect::<Vec<_>>() != COLUMNS {
            return Err(header_err(format!(
                "header must be {:?}, found {:?}",
                COLUMNS.join(","),
                headers.iter().collect::<Vec<_>>().join(",")
            )));
        }
        let mut entries = Vec::new();
        for record in rdr.records() {
            let record = record.map_err(|e| Error::Table {
                line: e.position().map_or(0, |p| p.line()),
                reason: e.to_string(),
            })?;
            let line = record.position().map_or(0, |p| p.line());
            let entry =
                KnotTableEntry::from_record(&record).map_err(|reason| Error::Table { line, reason })?;
            entries.push(entry);
        }
        Ok(KnotTable { entries })
    }

    pub fn to_csv(&self) -> String {
        let mut wtr = csv::Writer::from_writer(Vec::new());
        wtr.write_record(COLUMNS).expect("write to memory");
        for e in &self.entries {
            wtr.write_record(e.csv_fields()).expect("write to memory");
        }
        String::from_utf8(wtr.into_inner().expect("flush to memory")).expect("utf-8 fields")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("table serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Table {
            line: e.line() as u64,
            reason: e.to_string(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ReconciledEntry {
    pub name: String,
    pub twists: TwistVector,
    pub a2_known: i64,
    pub a2_computed: Vec<MethodValue>,
    pub a2_match: bool,
    pub u_delta_known: BTreeSet<i64>,
    pub lower_bound: LowerBound,
    pub admissible: bool,
    /// Exact Δ-unknotting number when a closed form covers the knot.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub u_delta_exact: Option<i64>,
    pub exact_consistent: bool,
}

impl ReconciledEntry {
    pub fn ok(&self) -> bool {
        self.a2_match && self.admissible && self.exact_consistent
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Reconciliation {
    pub entries: Vec<ReconciledEntry>,
    pub all_ok: bool,
}

/// Recomputes `a2` of every entry by each applicable method and checks the
/// listed Δ-unknotting values against the parity lower bound and, where one
/// exists, the exact value.
pub fn reconcile(table: &KnotTable, ctx: &A2Context) -> Result<Reconciliation> {
    let mut entries = Vec::with_capacity(table.entries().len());
    for e in table.entries() {
        let mut methods = vec![Method::Skein, Method::Formula];
        if ctx.oracle_applies(&e.twists) {
            methods.push(Method::Alexander);
        }
        let a2_computed = methods
            .into_iter()
            .map(|method| {
                ctx.compute(&e.twists, method, false)
                    .map(|r| MethodValue { method, value: r.value })
            })
            .collect::<Result<Vec<_>>>()?;
        let a2_match = a2_computed.iter().all(|m| m.value == e.a2_known);
        let lower_bound = delta::lower_bound(&e.twists, ctx)?;
        let admissible = e.u_delta_known.iter().all(|&u| lower_bound.admits(u));
        let u_delta_exact = match delta::u_delta(&e.twists, ctx, None)?.kind {
            DeltaKind::Exact { value, .. } => Some(value),
            DeltaKind::Bounds { .. } => None,
        };
        let exact_consistent = u_delta_exact.is_none_or(|u| e.u_delta_known.contains(&u));
        entries.push(ReconciledEntry {
            name: e.name.clone(),
            twists: e.twists.clone(),
            a2_known: e.a2_known,
            a2_computed,
            a2_match,
            u_delta_known: e.u_delta_known.clone(),
            lower_bound,
            admissible,
            u_delta_exact,
            exact_consistent,
        });
    }
    let all_ok = entries.iter().all(ReconciledEntry::ok);
    Ok(Reconciliation { entries, all_ok })
}

impl fmt::Display for Reconciliation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{:<8} {:<20} {:>4}  {:<38} {:<8} {:<6} status",
            "knot", "twists", "a2", "computed", "u_delta", "bound"
        )?;
        for e in &self.entries {
            let computed = e
                .a2_computed
                .iter()
                .map(|m| format!("{}={}", m.method, m.value))
                .collect::<Vec<_>>()
                .join(" ");
            let known = e
                .u_delta_known
                .iter()
                .map(i64::to_string)
                .collect::<Vec<_>>()
                .join("|");
            let status = if e.ok() {
                "ok"
            } else if !e.a2_match {
                "A2 MISMATCH"
            } else if !e.admissible {
                "INADMISSIBLE"
            } else {
                "EXACT MISMATCH"
            };
            writeln!(
                f,
                "{:<8} {:<20} {:>4}  {:<38} {:<8} {:<6} {}",
                e.name,
                e.twists.to_string(),
                e.a2_known,
                computed,
                known,
                format!(">={}", e.lower_bound.value),
                status
            )?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_has_six_knots() {
        let t = KnotTable::builtin();
        let names: Vec<_> = t.entries().iter().map(|e| e.name.as_str()).collect();
        assert_eq!(names, ["8_2", "8_5", "8_21", "9_8", "10_46", "10_76"]);
        let e = t.by_name("8_21").unwrap();
        assert_eq!(e.twists, "2,-3,-3,1".parse().unwrap());
        assert_eq!(t.by_name("10_76").unwrap().u_delta_known, BTreeSet::from([2, 4]));
    }

    #[test]
    fn builtin_reconciles() {
        let r = reconcile(&KnotTable::builtin(), &A2Context::default()).unwrap();
        assert!(r.all_ok, "{r}");
        assert!(r.entries.iter().all(|e| e.a2_computed.len() == 3));
    }

    #[test]
    fn tampered_a2_is_reported() {
        let csv = "name,twists,a2,u_delta\n8_5,2;3;3,7,3\n";
        let r = reconcile(&KnotTable::from_csv(csv.as_bytes()).unwrap(), &A2Context::default())
            .unwrap();
        assert!(!r.all_ok);
        assert!(!r.entries[0].a2_match);
        assert!(r.entries[0].admissible);
    }

    #[test]
    fn inadmissible_value_is_reported() {
        let csv = "name,twists,a2,u_delta\n8_5,2;3;3,-1,2\n";
        let r = reconcile(&KnotTable::from_csv(csv.as_bytes()).unwrap(), &A2Context::default())
            .unwrap();
        assert!(r.entries[0].a2_match);
        assert!(!r.entries[0].admissible);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let bad = "name,twists,a2,u_delta\n8_2,2;5;1,0,2\n8_5,2;x;3,-1,3\n";
        match KnotTable::from_csv(bad.as_bytes()) {
            Err(Error::Table { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        let link = "name,twists,a2,u_delta\nL,3;3,0,1\n";
        assert!(matches!(
            KnotTable::from_csv(link.as_bytes()),
            Err(Error::Table { line: 2, .. })
        ));
        let empty_set = "name,twists,a2,u_delta\nK,2;3;3,-1,\n";
        assert!(KnotTable::from_csv(empty_set.as_bytes()).is_err());
        let header = "knot,twists,a2,u\n";
        assert!(matches!(
            KnotTable::from_csv(header.as_bytes()),
            Err(Error::Table { line: 1, .. })
        ));
    }

    #[test]
    fn value_sets_round_trip() {
        let t = KnotTable::builtin();
        let via_csv = KnotTable::from_csv(t.to_csv().as_bytes()).unwrap();
        assert_eq!(via_csv, t);
        let via_json = KnotTable::from_json(&t.to_json()).unwrap();
        assert_eq!(via_json, t);
        let json: serde_json::Value = serde_json::from_str(&t.to_json()).unwrap();
        assert_eq!(json[5]["uDeltaKnown"], serde_json::json!([2, 4]));
        assert!(KnotTable::from_json(r#"[{"name":"K","twists":[3,3],"a2Known":0,"uDeltaKnown":[1]}]"#).is_err());
    }
}
