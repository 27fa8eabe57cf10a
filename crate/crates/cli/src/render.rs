//! CSV, JSON and text rendering of verdicts, scans and censuses.

use std::fmt::Write as _;
use std::io::Write;

use anyhow::Result;
use serde::Serialize;
use serde_json::json;

use pnveri::criteria::{Classification, Status, Verdict};
use pnveri::sing::{MultiplicityReport, SingSummary};

pub const SCHEMA: &str = "pnveri/1";

pub const CSV_HEADER: [&str; 9] =
    ["p", "t", "case", "classification", "group_attained", "proven_by", "failed", "skipped", "notes"];

fn ids_with(v: &Verdict, pick: impl Fn(&Status) -> bool) -> String {
    v.conditions.iter().filter(|c| pick(&c.status)).map(|c| c.id.to_string()).collect::<Vec<_>>().join(";")
}

fn notes(v: &Verdict) -> String {
    let mut out: Vec<String> = Vec::new();
    match &v.classification {
        Classification::Exceptional(w) => out.push(w.clone()),
        Classification::Skipped(r) => out.push(r.clone()),
        _ => {}
    }
    out.extend(v.notes.iter().cloned());
    out.join("; ")
}

pub fn csv_row(v: &Verdict) -> [String; 9] {
    [
        v.p.to_string(),
        v.t.to_string(),
        v.case.map(|c| c.to_string()).unwrap_or_default(),
        v.classification.label().to_string(),
        v.group_attained.map(|g| g.to_string()).unwrap_or_default(),
        ids_with(v, |s| *s == Status::Proven),
        ids_with(v, |s| *s == Status::Fails),
        ids_with(v, |s| matches!(s, Status::Skipped(_))),
        notes(v),
    ]
}

pub fn write_csv<W: Write>(out: W, verdicts: &[Verdict]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for v in verdicts {
        w.write_record(csv_row(v))?;
    }
    w.flush()?;
    Ok(())
}

pub fn verdict_text(v: &Verdict) -> String {
    let mut s = String::new();
    let case = v.case.map(|c| format!(", case {c}")).unwrap_or_default();
    let reduced = if v.t_reduced != v.t { format!(" (reduced to {})", v.t_reduced) } else { String::new() };
    writeln!(s, "p = {}, t = {}{reduced}{case}", v.p, v.t).unwrap();
    let detail = v.classification.detail();
    let group = v.group_attained.map(|g| format!(", group {g}")).unwrap_or_default();
    if detail.is_empty() {
        writeln!(s, "classification: {}{group}", v.classification.label()).unwrap();
    } else {
        writeln!(s, "classification: {} ({detail}){group}", v.classification.label()).unwrap();
    }
    for c in &v.conditions {
        writeln!(s, "  {:<10} {:<13} {}", c.id.to_string(), c.status.label(), c.trace).unwrap();
    }
    for n in &v.notes {
        writeln!(s, "note: {n}").unwrap();
    }
    s
}

pub fn verdict_json(v: &Verdict) -> serde_json::Value {
    json!({ "schema": SCHEMA, "verdict": v })
}

#[derive(Debug, Clone, Serialize)]
pub struct GroupRow {
    pub group: u8,
    pub unresolved: Vec<u64>,
    pub skipped: Vec<u64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Discrepancy {
    pub t: u64,
    pub note: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanSummary {
    pub p: u64,
    pub t_min: u64,
    pub t_max: u64,
    pub case_b_unresolved: Vec<u64>,
    pub case_b_discrepancies: Vec<Discrepancy>,
    pub case_a: Vec<GroupRow>,
    pub exceptional: Vec<u64>,
}

pub fn summary_text(s: &ScanSummary) -> String {
    let list = |v: &[u64]| v.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(", ");
    let mut out = String::new();
    writeln!(out, "unresolved exponents, p = {}, {} <= t <= {} (t coprime to p)", s.p, s.t_min, s.t_max).unwrap();
    writeln!(out, "  (B)          {} values: {}", s.case_b_unresolved.len(), list(&s.case_b_unresolved)).unwrap();
    for d in &s.case_b_discrepancies {
        writeln!(out, "    t = {}: {}", d.t, d.note).unwrap();
    }
    for row in &s.case_a {
        writeln!(out, "  (A) group {}  {} values: {}", row.group, row.unresolved.len(), list(&row.unresolved)).unwrap();
        if !row.skipped.is_empty() {
            writeln!(out, "    skipped by caps: {}", list(&row.skipped)).unwrap();
        }
    }
    writeln!(out, "  exceptional (omitted): {}", list(&s.exceptional)).unwrap();
    out
}

pub fn census_text(s: &SingSummary, shown: usize, check: Option<&MultiplicityReport>) -> String {
    let mut out = String::new();
    writeln!(out, "p = {}, t = {}, case {}, points in F_{}^{}", s.p, s.t, s.case, s.p, s.field_degree).unwrap();
    if let Some(n) = s.n_t {
        writeln!(out, "N_t = {n}").unwrap();
        let hist: Vec<String> = s.class_size_histogram.iter().map(|(k, v)| format!("{v} x size {k}")).collect();
        writeln!(out, "class sizes: {}", hist.join(", ")).unwrap();
        if let Some(b) = s.condition_b {
            writeln!(out, "N_t < (t-2)^2/4: {b}").unwrap();
        }
    }
    if let Some(n1) = s.n1 {
        writeln!(out, "N1 = {n1}, N2 = {}", s.n2.unwrap_or(0)).unwrap();
        let counts: Vec<String> = s.type_counts.iter().map(|(k, v)| format!("{k}: {v}")).collect();
        writeln!(out, "types: {}", counts.join(", ")).unwrap();
    }
    writeln!(out, "bounds ok: {}", s.bound_ok).unwrap();
    for n in &s.bound_notes {
        writeln!(out, "  {n}").unwrap();
    }
    for pt in s.points.iter().take(shown) {
        writeln!(out, "  {:<7} {}  m_f = {}, m_g = {}", pt.kind.to_string(), pt.describe(), pt.m_f, pt.m_g).unwrap();
    }
    if s.points.len() > shown || s.points_truncated {
        writeln!(out, "  ... ({} listed{})", s.points.len(), if s.points_truncated { ", truncated by cap" } else { "" })
            .unwrap();
    }
    if let Some(r) = check {
        writeln!(out, "taylor check: {} points agree with the predicted multiplicities", r.checked.len()).unwrap();
    }
    out
}
