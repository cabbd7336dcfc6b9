//! Acceptance criteria, one PASS/FAIL line each. All comparisons are exact
//! integer equalities.

use std::collections::BTreeSet;
use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use pretzel_core::a2::{A2Context, Method};
use pretzel_core::delta::{self, Citation, DeltaCertificate};
use pretzel_core::formulas;
use pretzel_core::pretzel;
use pretzel_core::sweep::{self, Execution, GridSpec};
use pretzel_core::table::KnotTable;
use pretzel_core::{Error, TwistVector};

type Check = std::result::Result<String, String>;

fn tv(entries: &[i64]) -> TwistVector {
    TwistVector::new(entries.to_vec()).unwrap()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit_secs: u64, what: &str) -> std::result::Result<(), String> {
    ensure(elapsed <= Duration::from_secs(limit_secs), || {
        format!("{what} took {:.1} s, limit {limit_secs} s", elapsed.as_secs_f64())
    })
}

fn table_reproduction() -> Check {
    let start = Instant::now();
    let expected = [
        ("8_2", tv(&[2, 5, 1]), 0),
        ("8_5", tv(&[2, 3, 3]), -1),
        ("8_21", tv(&[2, -3, -3, 1]), 0),
        ("9_8", tv(&[2, 1, 1, 1, 1, -3, 1]), 0),
        ("10_46", tv(&[2, 5, 3]), 0),
        ("10_76", tv(&[2, 1, 1, 3, 3]), -2),
    ];
    let ctx = A2Context::default();
    for (name, v, a2) in &expected {
        for method in [Method::Skein, Method::Alexander, Method::Formula] {
            let got = ctx.compute(v, method, false).map_err(|e| format!("{name}: {e}"))?;
            ensure(got.value == *a2, || {
                format!("{name} {v}: {method} gives {}, expected {a2}", got.value)
            })?;
        }
    }
    within(start.elapsed(), 10, "table reproduction")?;
    Ok(format!("6 knots x 3 methods in {:.2} s", start.elapsed().as_secs_f64()))
}

fn agreement_grids() -> Check {
    let start = Instant::now();
    let ctx = A2Context::new(20);
    let grids = [
        GridSpec::odd(3, 7),
        GridSpec::odd(5, 7),
        GridSpec::even(2, 6, 5),
        GridSpec::even(3, 6, 5),
        GridSpec::even(4, 6, 5),
        GridSpec::even(5, 6, 5),
    ];
    let report = sweep::crosscheck(&grids, &ctx, Execution::default()).map_err(|e| e.to_string())?;
    ensure(report.all_agree(), || {
        format!("disagreement: {}", report.first_failure.clone().unwrap_or_default())
    })?;
    let under_cap = report
        .results
        .iter()
        .filter(|r| r.vector.crossing_count() <= 20)
        .count();
    ensure(report.summary.oracle_checked == under_cap, || {
        format!(
            "oracle ran on {} vectors, {under_cap} are within 20 crossings",
            report.summary.oracle_checked
        )
    })?;
    let formula_everywhere = report.results.iter().all(|r| {
        [Method::Skein, Method::Formula]
            .iter()
            .all(|m| r.values.iter().any(|v| v.method == *m))
    });
    ensure(formula_everywhere, || "a vector is missing skein or formula".into())?;
    within(start.elapsed(), 300, "agreement grids")?;
    Ok(format!(
        "{} vectors agree, {} also by the oracle, {:.1} s",
        report.summary.vectors,
        report.summary.oracle_checked,
        start.elapsed().as_secs_f64()
    ))
}

fn step_level_lk() -> Check {
    let ctx = A2Context::default();
    let grids = [GridSpec::odd(3, 7), GridSpec::even(3, 6, 5)];
    let report = sweep::lkcheck(&grids, &ctx, Execution::default()).map_err(|e| e.to_string())?;
    ensure(report.ok(), || report.to_string())?;
    ensure(report.replayed == report.vectors, || "a trace did not replay".into())?;
    let checked = report.odd_unit_prefix
        + report.odd_signed_prefix
        + report.even_first_even_n
        + report.even_first_odd_n;
    ensure(checked > 0 && report.even_first_odd_n > 0, || {
        "closed forms were never exercised".into()
    })?;
    Ok(format!(
        "{} steps replayed over {} vectors, {checked} held to a closed form",
        report.steps, report.vectors
    ))
}

fn torus_chain() -> Check {
    let start = Instant::now();
    let ctx = A2Context::default();
    for n in (1..=13i64).step_by(2) {
        let ones = tv(&vec![1; n as usize]);
        let skein = ctx.skein(&ones).map_err(|e| e.to_string())?;
        ensure(8 * skein == n * n - 1, || format!("a2 of {ones} is {skein}"))?;
        let u = formulas::u_delta_torus(2, n).map_err(|e| e.to_string())?;
        ensure(u == skein, || format!("u_delta_torus(2,{n}) = {u}, a2 = {skein}"))?;
    }
    let (mut coprime, mut rejected) = (0, 0);
    for p in 1..=12i64 {
        for q in 1..=12i64 {
            let r = formulas::u_delta_torus(p, q);
            if num_gcd(p, q) == 1 {
                let u = r.map_err(|e| format!("T({p},{q}): {e}"))?;
                ensure(24 * u == (p * p - 1) * (q * q - 1), || format!("T({p},{q}) gives {u}"))?;
                coprime += 1;
            } else {
                ensure(matches!(r, Err(Error::NotCoprime { .. })), || {
                    format!("T({p},{q}) was not rejected")
                })?;
                rejected += 1;
            }
        }
    }
    within(start.elapsed(), 5, "torus chain")?;
    Ok(format!("odd n <= 13 chain, {coprime} coprime pairs, {rejected} rejected"))
}

fn num_gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a
    } else {
        num_gcd(b, a % b)
    }
}

/// Every certificate that differs from `c` in exactly one scalar field or
/// one vector entry.
fn mutations(c: &DeltaCertificate) -> Vec<DeltaCertificate> {
    let mut out = Vec::new();
    let bump_vector = |v: &TwistVector| -> Vec<TwistVector> {
        let mut vs = Vec::new();
        for i in 0..v.len() {
            for d in [-2, -1, 1, 2] {
                vs.push(v.with_entry(i, v.entries()[i] + d));
            }
        }
        vs
    };
    for v in bump_vector(&c.initial) {
        out.push(DeltaCertificate { initial: v, ..c.clone() });
    }
    for (i, step) in c.steps.iter().enumerate() {
        for v in bump_vector(&step.before) {
            let mut m = c.clone();
            m.steps[i].before = v;
            out.push(m);
        }
        for v in bump_vector(&step.after) {
            let mut m = c.clone();
            m.steps[i].after = v;
            out.push(m);
        }
        for d in [-1, 1] {
            let mut m = c.clone();
            m.steps[i].band = (step.band as i64 + d) as usize;
            out.push(m);
            let mut m = c.clone();
            m.steps[i].cost += d;
            out.push(m);
        }
    }
    for v in bump_vector(&c.leaf.vector) {
        let mut m = c.clone();
        m.leaf.vector = v;
        out.push(m);
    }
    let mut m = c.clone();
    m.leaf.citation = match c.leaf.citation {
        Citation::TrivialKnot => Citation::PositiveOddType,
        Citation::PositiveOddType => Citation::TrivialKnot,
    };
    out.push(m);
    for d in [-2, -1, 1, 2] {
        let mut m = c.clone();
        m.leaf.cited_cost += d;
        out.push(m);
        let mut m = c.clone();
        m.total += d;
        out.push(m);
    }
    out
}

fn certificates() -> Check {
    let start = Instant::now();
    let ctx = A2Context::default();
    let (mut certs, mut killed) = (0, 0);
    for n in [3, 5] {
        for v in sweep::minus_one_grid(n, 7) {
            let cert = delta::build_certificate_oddone(&v).map_err(|e| format!("{v}: {e}"))?;
            let formula = formulas::u_delta_oddone_formula(&v).map_err(|e| e.to_string())?;
            let lemma = formulas::a2_odd_formula(&v).map_err(|e| e.to_string())?;
            let skein = ctx.skein(&v).map_err(|e| e.to_string())?;
            ensure(
                cert.total == formula && formula == lemma && lemma == skein,
                || format!("{v}: total {}, formula {formula}, lemma {lemma}, skein {skein}", cert.total),
            )?;
            let report = delta::verify_certificate(&cert, &ctx).map_err(|e| e.to_string())?;
            ensure(report.ok, || format!("{v}: {:?}", report.violation))?;
            for m in mutations(&cert) {
                let r = delta::verify_certificate(&m, &ctx);
                ensure(!matches!(r, Ok(ref r) if r.ok), || {
                    format!("mutation of {v} passed verification: {}", m.to_json())
                })?;
                killed += 1;
            }
            certs += 1;
        }
    }
    within(start.elapsed(), 30, "certificates")?;
    Ok(format!("{certs} certificates verified, {killed} mutations rejected"))
}

fn invariance() -> Check {
    let ctx = A2Context::default();
    let grid = sweep::odd_grid(3, 7);
    let mut perms = 0;
    for v in &grid {
        let base = ctx.skein(v).map_err(|e| format!("{v}: {e}"))?;
        let m = pretzel::mirror(v);
        ensure(ctx.skein(&m) == Ok(base), || format!("mirror of {v}"))?;
        let p = v.entries();
        for order in [[0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]] {
            let w = tv(&order.map(|i| p[i]));
            ensure(ctx.skein(&w) == Ok(base), || format!("{w} differs from {v}"))?;
            perms += 1;
        }
    }
    let mut formulas_checked = 0;
    let wider = [sweep::odd_grid(5, 5), sweep::even_grid(4, 6, 5), sweep::even_grid(3, 6, 7)];
    for v in wider.iter().flatten() {
        ctx.skein(v).map_err(|e| format!("integrality on {v}: {e}"))?;
        formulas::a2_formula(v).map_err(|e| format!("formula on {v}: {e}"))?;
        if formulas::positive_form(v).is_some() {
            formulas::u_delta_positive_formula(v).map_err(|e| format!("{v}: {e}"))?;
        }
        if formulas::is_minus_one_class(v) {
            formulas::u_delta_oddone_formula(v).map_err(|e| format!("{v}: {e}"))?;
        }
        formulas_checked += 1;
    }
    Ok(format!(
        "{} mirrors, {perms} permutations, {formulas_checked} integral formula evaluations",
        grid.len()
    ))
}

fn admissibility() -> Check {
    let ctx = A2Context::default();
    let table = KnotTable::builtin();
    for e in table.entries() {
        let bound = delta::lower_bound(&e.twists, &ctx).map_err(|err| err.to_string())?;
        for &u in &e.u_delta_known {
            ensure(bound.admits(u), || {
                format!("{}: {u} is not |a2| = {} plus an even number", e.name, bound.value)
            })?;
        }
    }
    let both = BTreeSet::from([2, 4]);
    let k = table.by_name("10_76").ok_or("10_76 missing")?;
    ensure(k.u_delta_known == both, || format!("10_76 lists {:?}", k.u_delta_known))?;
    let via_csv = KnotTable::from_csv(table.to_csv().as_bytes()).map_err(|e| e.to_string())?;
    let via_json = KnotTable::from_json(&table.to_json()).map_err(|e| e.to_string())?;
    for t in [&via_csv, &via_json] {
        let k = t.by_name("10_76").ok_or("10_76 lost in round trip")?;
        ensure(k.u_delta_known == both, || "10_76 set collapsed in round trip".into())?;
    }
    ensure(via_csv == table && via_json == table, || "round trip changed the table".into())?;
    let r = delta::u_delta(&k.twists, &ctx, Some(&table)).map_err(|e| e.to_string())?;
    let json: serde_json::Value = serde_json::to_value(&r).map_err(|e| e.to_string())?;
    ensure(json["known"] == serde_json::json!([2, 4]), || {
        format!("delta JSON for 10_76 reports {}", json["known"])
    })?;
    Ok(format!("{} knots admissible, 10_76 keeps {{2, 4}}", table.entries().len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Check); 7] = [
        ("table reproduction", table_reproduction),
        ("formula, skein and oracle agreement grids", agreement_grids),
        ("step-level linking numbers", step_level_lk),
        ("torus chain", torus_chain),
        ("Δ-move certificates", certificates),
        ("invariance suites", invariance),
        ("lower-bound admissibility", admissibility),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let result = panic::catch_unwind(AssertUnwindSafe(check))
            .unwrap_or_else(|p| {
                let msg = p
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                Err(format!("panicked: {msg}"))
            });
        match result {
            Ok(detail) => println!("PASS  {}  {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {}  {name}: {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
