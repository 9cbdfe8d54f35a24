//! Text renderings of reports and plans.

use std::fmt::Write;

use markov_core::invariants::InvariantReport;
use markov_core::plan::{Check, PlanOutcome, Step};

fn tag<T: serde::Serialize>(v: &T) -> String {
    match serde_json::to_value(v).expect("serializable") {
        serde_json::Value::String(s) => s,
        other => other.to_string(),
    }
}

pub fn report(r: &InvariantReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "group:              {}", r.group);
    let _ = writeln!(out, "cardinality:        {}", r.cardinality);
    let _ = writeln!(out, "exponent:           {}", r.exponent);
    let rp = &r.rank_profile;
    let mut ranks = format!("r_0={}", rp.r0);
    for (p, c) in &rp.rp {
        let _ = write!(ranks, " r_{p}={c}");
    }
    if let Some(c) = &rp.generic {
        let _ = write!(ranks, " r_p(other)={c}");
    }
    let _ = writeln!(out, "ranks:              {ranks} r={}", rp.r);
    let _ = writeln!(out, "w_d:                {}", r.w_d);
    let _ = writeln!(out, "r_d:                {}", r.r_d);
    if let Some(uk) = &r.uk {
        for (p, row) in &uk.rows {
            let alphas: Vec<String> = row.alphas.iter().map(ToString::to_string).collect();
            let _ = writeln!(out, "uk(p={p}):           [{}] leading {}", alphas.join(", "), row.leading);
        }
    }
    let m = match &r.m_group_witness {
        Some(w) => format!("false (witness m={}, |{}G|={})", w.m, w.m, w.size),
        None => r.flags.m_group.to_string(),
    };
    let _ = writeln!(out, "m-group:            {m}");
    let _ = writeln!(out, "w-divisible:        {}", r.flags.w_divisible);
    let _ = writeln!(out, "r-divisible:        {}", r.flags.r_divisible);
    let _ = write!(out, "strongly-unbounded: {}", r.flags.strongly_unbounded);
    out
}

/// Presentations in a check come back from serde as `{"terms": [...]}`;
/// print them in expression syntax instead.
fn arg(v: &serde_json::Value) -> String {
    use serde_json::Value;
    match v {
        Value::String(s) => s.clone(),
        Value::Array(items) => items.iter().map(arg).collect::<Vec<_>>().join("; "),
        Value::Object(o) => match o.get("terms").and_then(Value::as_array) {
            Some(terms) if terms.is_empty() => "0".to_string(),
            Some(terms) => terms
                .iter()
                .map(|t| {
                    let block = t["block"].as_str().unwrap_or("?");
                    match t["mult"].as_str() {
                        Some("1") | None => block.to_string(),
                        Some(m) => format!("{block}^{m}"),
                    }
                })
                .collect::<Vec<_>>()
                .join(" + "),
            None => v.to_string(),
        },
        other => other.to_string(),
    }
}

fn check(c: &Check) -> String {
    let value = serde_json::to_value(c).expect("serializable");
    let obj = value.as_object().expect("checks serialize as objects");
    let name = obj.get("predicate").and_then(|v| v.as_str()).unwrap_or("?");
    let args: Vec<String> = obj
        .iter()
        .filter(|(k, _)| *k != "predicate" && *k != "result")
        .map(|(k, v)| format!("{k}={}", arg(v)))
        .collect();
    format!("[{}] {name}({})", if c.result { "ok" } else { "FAILED" }, args.join(", "))
}

fn step(out: &mut String, s: &Step, depth: usize) {
    let pad = "  ".repeat(depth);
    let inputs: Vec<String> = s.inputs.iter().map(ToString::to_string).collect();
    let outputs: Vec<String> = s.outputs.iter().map(ToString::to_string).collect();
    let _ = write!(out, "{pad}{}: {}", tag(&s.lemma), inputs.join(" ; "));
    if !outputs.is_empty() {
        let _ = write!(out, " -> {}", outputs.join(" ; "));
    }
    for (k, v) in &s.params {
        let _ = write!(out, " {k}={v}");
    }
    out.push('\n');
    for c in &s.checks {
        let _ = writeln!(out, "{pad}  {}", check(c));
    }
    if let Some(leaf) = &s.leaf {
        let _ = writeln!(out, "{pad}  leaf: {}", tag(leaf));
    }
    for child in &s.children {
        step(out, child, depth + 1);
    }
}

pub fn plan(outcome: &PlanOutcome) -> String {
    match outcome {
        PlanOutcome::Certificate(cert) => {
            let mut out = format!("certificate for {}\n", cert.group);
            step(&mut out, &cert.root, 0);
            let v = cert.verify();
            let _ = write!(
                out,
                "verified {} checks: {}",
                v.checks,
                if v.ok() { "all hold".to_string() } else { format!("{} failed", v.failures.len()) }
            );
            out
        }
        PlanOutcome::Refusal(r) => {
            format!("refused: {} is not an M-group (witness m={}, |{}G|={})", r.group, r.m, r.m, r.size)
        }
    }
}
