//! Command-line front end. [`run`] produces the complete output of a
//! command before anything is printed, so a command that fails with exit
//! code 1 prints nothing to stdout.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use crate::a2::{self, A2Context, Selection};
use crate::delta::{self, DeltaCertificate};
use crate::diagram::build_diagram;
use crate::error::{Error, Result};
use crate::formulas;
use crate::pretzel::{self, LinkKind, TwistVector};
use crate::sweep::{self, Execution, GridSpec};
use crate::table::{self, KnotTable};

#[derive(Debug, Parser)]
#[command(
    name = "pretzel",
    version,
    about = "Second Conway coefficient and Δ-unknotting number of pretzel knots"
)]
pub struct Cli {
    /// Machine-readable JSON on stdout.
    #[arg(long, global = true)]
    pub json: bool,

    /// Worker threads for grid sweeps (default: available parallelism).
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub jobs: Option<u64>,

    /// Largest crossing number handed to the Alexander oracle.
    #[arg(long, global = true, default_value_t = a2::DEFAULT_ORACLE_CAP)]
    pub oracle_cap: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Knot or link, odd or even type, positivity.
    Classify {
        #[arg(allow_hyphen_values = true)]
        vector: TwistVector,
        /// Also print the PD code of the standard diagram.
        #[arg(long)]
        pd: bool,
    },
    /// Second Conway coefficient.
    A2 {
        #[arg(allow_hyphen_values = true)]
        vector: TwistVector,
        /// skein, alexander, formula or all.
        #[arg(long, default_value = "all")]
        method: Selection,
        /// Include the crossing-change recursion steps.
        #[arg(long)]
        trace: bool,
    },
    /// Δ-unknotting number, exact or bounded.
    Delta {
        #[arg(allow_hyphen_values = true)]
        vector: TwistVector,
        /// Knot table consulted for upper bounds (default: the shipped table).
        #[arg(long)]
        table: Option<PathBuf>,
        /// Do not consult any knot table.
        #[arg(long, conflicts_with = "table")]
        no_table: bool,
    },
    /// Δ-move cost certificate for P(-1, p2, ..., pn).
    Certify {
        #[arg(allow_hyphen_values = true)]
        vector: Option<TwistVector>,
        /// Verify a certificate read from a JSON file instead of building one.
        #[arg(long, conflicts_with = "vector")]
        verify: Option<PathBuf>,
    },
    /// a2 and Δ-unknotting number of the torus knot T(p, q).
    Torus {
        #[arg(allow_hyphen_values = true)]
        p: i64,
        #[arg(allow_hyphen_values = true)]
        q: i64,
    },
    /// Compare every a2 method over grids of knot vectors.
    Crosscheck(GridArgs),
    /// Reconcile a knot table against computed values.
    Table {
        /// CSV file with columns name,twists,a2,u_delta (default: the shipped table).
        #[arg(long)]
        file: Option<PathBuf>,
    },
    /// Check recursion-step linking numbers against their closed forms.
    Lkcheck(GridArgs),
}

#[derive(Debug, Args)]
pub struct GridArgs {
    /// Lengths of odd-type grids.
    #[arg(long, value_delimiter = ',')]
    pub odd_n: Vec<usize>,
    /// Lengths of even-type grids.
    #[arg(long, value_delimiter = ',')]
    pub even_n: Vec<usize>,
    /// Shorthand for the same lengths in both --odd-n (odd lengths only) and --even-n.
    #[arg(long, value_delimiter = ',')]
    pub n: Vec<usize>,
    /// Bound on |p| for odd entries.
    #[arg(long, default_value_t = 5)]
    pub max: i64,
    /// Bound on |p| for the even entry (default: the even number max or max + 1).
    #[arg(long)]
    pub even_max: Option<i64>,
}

impl GridArgs {
    pub fn grids(&self) -> Vec<GridSpec> {
        let even_max = self
            .even_max
            .unwrap_or(if self.max % 2 == 0 { self.max } else { self.max + 1 });
        let mut odd: BTreeSet<usize> = self.odd_n.iter().copied().collect();
        let mut even: BTreeSet<usize> = self.even_n.iter().copied().collect();
        for &n in &self.n {
            if n % 2 == 1 {
                odd.insert(n);
            }
            even.insert(n);
        }
        if odd.is_empty() && even.is_empty() {
            odd.insert(3);
        }
        odd.into_iter()
            .map(|n| GridSpec::odd(n, self.max))
            .chain(even.into_iter().map(|n| GridSpec::even(n, even_max, self.max)))
            .collect()
    }
}

/// Everything a command wants to emit, plus its exit code.
#[derive(Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub code: u8,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome {
            code: 0,
            stdout,
            stderr: String::new(),
        }
    }

    fn disagreement(stdout: String, message: &str) -> Self {
        Outcome {
            code: 2,
            stdout,
            stderr: format!("error: {message}\n"),
        }
    }

    fn error(e: &Error) -> Self {
        Outcome {
            code: e.exit_code(),
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("output serializes");
    s.push('\n');
    s
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp
                | clap::error::ErrorKind::DisplayVersion
                | clap::error::ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
                    Outcome::ok(rendered)
                }
                _ => Outcome {
                    code: 1,
                    stdout: String::new(),
                    stderr: rendered,
                },
            };
        }
    };
    match execute(&cli) {
        Ok(outcome) => outcome,
        Err(e) => Outcome::error(&e),
    }
}

fn execute(cli: &Cli) -> Result<Outcome> {
    let ctx = A2Context::new(cli.oracle_cap);
    let exec = Execution::from_jobs(cli.jobs.map(|j| j as usize));
    let json = cli.json;
    match &cli.command {
        Command::Classify { vector, pd } => classify(vector, *pd, json),
        Command::A2 {
            vector,
            method,
            trace,
        } => a2_cmd(vector, *method, *trace, &ctx, json),
        Command::Delta {
            vector,
            table,
            no_table,
        } => {
            let table = match (table, no_table) {
                (_, true) => None,
                (Some(path), _) => Some(KnotTable::load(path)?),
                (None, _) => Some(KnotTable::builtin()),
            };
            let r = delta::u_delta(vector, &ctx, table.as_ref())?;
            Ok(Outcome::ok(if json { to_json(&r) } else { format!("{r}\n") }))
        }
        Command::Certify { vector, verify } => match (vector, verify) {
            (_, Some(path)) => verify_file(path, &ctx, json),
            (Some(v), None) => certify(v, &ctx, json),
            (None, None) => Err(Error::Parse {
                input: String::new(),
                reason: "certify needs a vector or --verify FILE".into(),
            }),
        },
        Command::Torus { p, q } => {
            let a2 = formulas::a2_torus(*p, *q)?;
            let u = formulas::u_delta_torus(*p, *q)?;
            Ok(Outcome::ok(if json {
                to_json(&json!({"p": p, "q": q, "a2": a2, "uDelta": u}))
            } else {
                format!("T({p},{q}): a2 = {a2}, u_delta = {u}\n")
            }))
        }
        Command::Crosscheck(args) => {
            let report = sweep::crosscheck(&args.grids(), &ctx, exec)?;
            let out = if json { to_json(&report) } else { report.to_string() };
            Ok(if report.all_agree() {
                Outcome::ok(out)
            } else {
                Outcome::disagreement(out, "a2 methods disagree")
            })
        }
        Command::Table { file } => {
            let t = match file {
                Some(path) => KnotTable::load(path)?,
                None => KnotTable::builtin(),
            };
            let r = table::reconcile(&t, &ctx)?;
            let out = if json { to_json(&r) } else { r.to_string() };
            Ok(if r.all_ok {
                Outcome::ok(out)
            } else {
                Outcome::disagreement(out, "knot table does not reconcile")
            })
        }
        Command::Lkcheck(args) => {
            let report = sweep::lkcheck(&args.grids(), &ctx, exec)?;
            let out = if json { to_json(&report) } else { report.to_string() };
            Ok(if report.ok() {
                Outcome::ok(out)
            } else {
                Outcome::disagreement(out, "linking numbers disagree with the closed forms")
            })
        }
    }
}

fn classify(v: &TwistVector, pd: bool, json: bool) -> Result<Outcome> {
    let class = pretzel::classify(v);
    let components = match class.kind {
        LinkKind::Knot => 1,
        LinkKind::Link { components } => components,
    };
    let pd_code = pd.then(|| build_diagram(v).to_pd());
    if json {
        let mut value = json!({
            "vector": v,
            "knot": class.is_knot(),
            "components": components,
            "type": class.knot_type,
            "positive": class.positive,
            "evenIndex": class.even_index,
            "crossings": v.crossing_count(),
        });
        if let Some(code) = &pd_code {
            value["pd"] = json!(code.lines().collect::<Vec<_>>());
        }
        return Ok(Outcome::ok(to_json(&value)));
    }
    let mut out = String::new();
    if class.is_knot() {
        let kind = match class.knot_type {
            pretzel::KnotType::OddType => "odd type",
            pretzel::KnotType::EvenType => "even type",
            pretzel::KnotType::Trivial => "trivial (one band)",
            pretzel::KnotType::NotApplicable => "n/a",
        };
        let sign = if class.positive { "positive" } else { "not positive" };
        writeln!(out, "{v}: knot, {kind}, {sign}").unwrap();
    } else {
        writeln!(out, "{v}: link with {components} components").unwrap();
    }
    if let Some(code) = pd_code {
        out.push_str(&code);
    }
    Ok(Outcome::ok(out))
}

fn a2_cmd(
    v: &TwistVector,
    selection: Selection,
    trace: bool,
    ctx: &A2Context,
    json: bool,
) -> Result<Outcome> {
    let outcome = a2::a2(v, selection, ctx, trace)?;
    if json {
        return Ok(Outcome::ok(to_json(&outcome)));
    }
    let mut out = String::new();
    let methods = outcome
        .results
        .iter()
        .map(|r| r.method.to_string())
        .collect::<Vec<_>>();
    let agreement = if methods.len() > 1 {
        format!(" ({} agree)", methods.join(", "))
    } else {
        format!(" ({})", methods[0])
    };
    writeln!(out, "{v}: a2 = {}{agreement}", outcome.value).unwrap();
    for r in &outcome.results {
        let Some(t) = &r.trace else { continue };
        for s in &t.steps {
            writeln!(
                out,
                "  {} band {}: sign {:+}, lk {}, contributes {}",
                s.vector, s.band, s.crossing_sign, s.lk, s.contribution
            )
            .unwrap();
        }
        writeln!(out, "  {} base case: {}", t.base.vector, t.base.value).unwrap();
    }
    Ok(Outcome::ok(out))
}

fn render_certificate(c: &DeltaCertificate) -> String {
    let mut out = String::new();
    writeln!(out, "certificate for {}", c.initial).unwrap();
    for (i, s) in c.steps.iter().enumerate() {
        writeln!(
            out,
            "  step {}: {} -> {} (band {}), cost {}",
            i + 1,
            s.before,
            s.after,
            s.band,
            s.cost
        )
        .unwrap();
    }
    let citation = match c.leaf.citation {
        delta::Citation::TrivialKnot => "trivial knot",
        delta::Citation::PositiveOddType => "positive pretzel knot of odd type",
    };
    writeln!(
        out,
        "  leaf: {} ({citation}), cost {}",
        c.leaf.vector, c.leaf.cited_cost
    )
    .unwrap();
    writeln!(out, "  total: {}", c.total).unwrap();
    out
}

fn certify(v: &TwistVector, ctx: &A2Context, json: bool) -> Result<Outcome> {
    let cert = delta::build_certificate_oddone(v)?;
    let report = delta::verify_certificate(&cert, ctx)?;
    if let Some(violation) = report.violation {
        return Err(Error::Invariant(format!(
            "freshly built certificate for {v} fails verification: {violation}"
        )));
    }
    Ok(Outcome::ok(if json {
        cert.to_json() + "\n"
    } else {
        let mut s = render_certificate(&cert);
        s.push_str("  verified\n");
        s
    }))
}

fn verify_file(path: &PathBuf, ctx: &A2Context, json: bool) -> Result<Outcome> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let cert = DeltaCertificate::from_json(&text)?;
    let report = delta::verify_certificate(&cert, ctx)?;
    match &report.violation {
        None => Ok(Outcome::ok(if json {
            to_json(&report)
        } else {
            format!("certificate for {} verifies, total {}\n", cert.initial, cert.total)
        })),
        Some(v) => Err(Error::Hypothesis {
            vector: cert.initial.clone(),
            reason: format!("certificate rejected: {v}"),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> Outcome {
        run(std::iter::once("pretzel").chain(args.iter().copied()))
    }

    #[test]
    fn a2_all_methods() {
        let o = run_args(&["a2", "2,3,3", "--method", "all"]);
        assert_eq!(o.code, 0, "{}", o.stderr);
        assert!(o.stdout.starts_with("P(2,3,3): a2 = -1"), "{}", o.stdout);
    }

    #[test]
    fn negative_leading_entry_parses() {
        let o = run_args(&["certify", "-1,3,3", "--json"]);
        assert_eq!(o.code, 0, "{}", o.stderr);
        let v: serde_json::Value = serde_json::from_str(&o.stdout).unwrap();
        assert_eq!(v["total"], 1);
    }

    #[test]
    fn invalid_input_prints_nothing() {
        for args in [
            &["a2", "3,3"][..],
            &["delta", "2,4,3"],
            &["torus", "4", "6"],
            &["certify", "1,3,3"],
            &["a2", "x"],
            &["frobnicate"],
            &["--jobs", "0", "crosscheck"],
        ] {
            let o = run_args(args);
            assert_eq!(o.code, 1, "{args:?}");
            assert!(o.stdout.is_empty(), "{args:?}");
            assert!(!o.stderr.is_empty(), "{args:?}");
        }
    }

    #[test]
    fn help_exits_zero() {
        let o = run_args(&["--help"]);
        assert_eq!(o.code, 0);
        assert!(o.stdout.contains("crosscheck"));
    }

    #[test]
    fn grid_defaults() {
        let args = GridArgs {
            odd_n: vec![],
            even_n: vec![],
            n: vec![],
            max: 5,
            even_max: None,
        };
        assert_eq!(args.grids(), vec![GridSpec::odd(3, 5)]);
        let args = GridArgs {
            n: vec![3, 4],
            ..args
        };
        assert_eq!(
            args.grids(),
            vec![GridSpec::odd(3, 5), GridSpec::even(3, 6, 5), GridSpec::even(4, 6, 5)]
        );
    }
}
