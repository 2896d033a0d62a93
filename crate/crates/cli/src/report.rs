//! Run reports: a fixed-order JSON schema and the plain-text rendering.

use std::collections::BTreeMap;

use fames_core::fairness::{EoReading, FairnessVerdict};
use fames_core::formula::display_plan;
use fames_core::world::{Binding, Valuation};
use fames_core::ActionInstance;
use serde::Serialize;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Serialize)]
pub struct Report {
    pub version: &'static str,
    pub domain: String,
    pub command: &'static str,
    pub verdicts: Vec<VerdictReport>,
    /// Command-specific payload for `worlds`, `forget` and `proxy`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub result: Option<serde_json::Value>,
    pub warnings: Vec<String>,
    pub timing_ms: f64,
}

impl Report {
    pub fn new(domain: &str, command: &'static str) -> Self {
        Report {
            version: VERSION,
            domain: domain.to_string(),
            command,
            verdicts: Vec::new(),
            result: None,
            warnings: Vec::new(),
            timing_ms: 0.0,
        }
    }
}

fn plan_strings(plan: &[ActionInstance]) -> Vec<String> {
    plan.iter().map(ToString::to_string).collect()
}

#[derive(Debug, Serialize)]
pub struct VerdictReport {
    pub notion: String,
    /// The plan the verdict is about (`plan` command only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub plan: Option<Vec<String>>,
    pub holds: bool,
    pub failed_clause: Option<String>,
    pub counterexample_world: Option<BTreeMap<String, bool>>,
    pub failing_prefix: Option<Vec<String>>,
    pub reading: Option<EoReading>,
    pub detail: Option<String>,
    pub derived_theory: Option<String>,
    pub instantiation: Vec<Binding>,
    pub subformula_path: Vec<String>,
    pub witness_world: Option<BTreeMap<String, bool>>,
}

fn valuation_map(v: &Valuation) -> BTreeMap<String, bool> {
    v.0.iter().map(|(a, b)| (a.to_string(), *b)).collect()
}

impl VerdictReport {
    pub fn from_verdict(v: &FairnessVerdict, plan: Option<&[ActionInstance]>) -> Self {
        let d = v.diagnostics.as_ref();
        let failing_prefix = match (&v.failing_prefix, d) {
            (Some(p), _) => Some(plan_strings(p)),
            (None, Some(d)) => Some(plan_strings(&d.failing_prefix)),
            (None, None) => None,
        };
        VerdictReport {
            notion: v.notion.to_string(),
            plan: plan.map(plan_strings),
            holds: v.holds,
            failed_clause: v.failed_clause.clone(),
            counterexample_world: d.map(|d| valuation_map(&d.counterexample_world)),
            failing_prefix,
            reading: v.reading,
            detail: v.detail.clone(),
            derived_theory: v.derived_theory.clone(),
            instantiation: d.map(|d| d.instantiation.clone()).unwrap_or_default(),
            subformula_path: d.map(|d| d.subformula_path.clone()).unwrap_or_default(),
            witness_world: d.and_then(|d| d.witness_world.as_ref()).map(valuation_map),
        }
    }
}

fn world_text(w: &BTreeMap<String, bool>) -> String {
    let parts: Vec<String> = w.iter().map(|(a, b)| if *b { a.clone() } else { format!("!{a}") }).collect();
    parts.join(" & ")
}

/// Human-readable lines for one verdict.
pub fn verdict_text(v: &VerdictReport) -> String {
    let mut out = String::new();
    let status = if v.holds { "HOLDS" } else { "FAILS" };
    match &v.plan {
        Some(p) => out += &format!("{status} {} [{}]\n", v.notion, p.join("; ")),
        None => out += &format!("{status} {}\n", v.notion),
    }
    if let Some(r) = v.reading {
        out += &format!("  reading: {r}\n");
    }
    if let Some(c) = &v.failed_clause {
        out += &format!("  failed clause: {c}\n");
    }
    if let Some(d) = &v.detail {
        out += &format!("  {d}\n");
    }
    if let Some(p) = &v.failing_prefix {
        let shown = if p.is_empty() { "<empty>".to_string() } else { p.join("; ") };
        out += &format!("  failing prefix ({}): {shown}\n", p.len());
    }
    if let Some(w) = &v.counterexample_world {
        out += &format!("  actual world: {}\n", world_text(w));
    }
    if let Some(w) = &v.witness_world {
        out += &format!("  compatible world: {}\n", world_text(w));
    }
    if !v.instantiation.is_empty() {
        let b: Vec<String> = v.instantiation.iter().map(|b| format!("{}={}", b.var, b.object)).collect();
        out += &format!("  instantiation: {}\n", b.join(", "));
    }
    if let Some(last) = v.subformula_path.last() {
        out += &format!("  failing subformula: {last}\n");
    }
    if let Some(t) = &v.derived_theory {
        out += &format!("  derived theory: {t}\n");
    }
    out
}

pub fn plan_line(plan: &[ActionInstance]) -> String {
    if plan.is_empty() {
        "<empty plan>".to_string()
    } else {
        display_plan(plan)
    }
}
