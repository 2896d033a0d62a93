//! `fames`: check epistemic fairness notions of plans, search for fair plans,
//! and inspect the worlds of a theory.
//!
//! Exit codes: 0 holds / plan found, 1 fails / no plan, 2 usage or parse
//! error, 3 resource limit exceeded.

mod report;

use std::path::Path;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use fames_core::dsl::parse_atoms;
use fames_core::fairness::{check_with, proxy_set};
use fames_core::forget::forget_theory;
use fames_core::{
    bundled, find_plans, parse_formula_with_free, parse_plan, parse_theory, EngineConfig, Engine, EoReading,
    Error, FairnessQuery, Notion, ParseDiagnostic, SearchConfig, Theory, TheorySource,
};
use serde_json::json;

use report::{plan_line, verdict_text, Report, VerdictReport};

#[derive(Parser)]
#[command(name = "fames", version, about = "Epistemic fairness checking for plans over basic action theories")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check one fairness notion for a fixed plan.
    Check {
        #[command(flatten)]
        common: QueryArgs,
        /// Plan as `act; act; ...` (empty for the empty plan).
        #[arg(long, default_value = "")]
        plan: String,
    },
    /// Search for plans up to a horizon that satisfy a notion.
    Plan {
        #[command(flatten)]
        common: QueryArgs,
        #[arg(long)]
        horizon: usize,
        #[arg(long, default_value_t = 1)]
        max_results: usize,
        /// Comma-separated action names to restrict the search to.
        #[arg(long)]
        actions: Option<String>,
    },
    /// Count initial worlds and the worlds compatible after a plan.
    Worlds {
        #[command(flatten)]
        out: Output,
        #[arg(long, default_value = "")]
        after: String,
        /// Index of the actual world in W0 (default: the first).
        #[arg(long)]
        world: Option<usize>,
    },
    /// Forget ground atoms from the initial theory.
    Forget {
        #[command(flatten)]
        out: Output,
        /// Comma-separated ground atoms, e.g. `Eligible(n),Eligible(nprime)`.
        #[arg(long)]
        atoms: String,
    },
    /// List the known proxies of a protected attribute.
    Proxy {
        #[command(flatten)]
        out: Output,
        #[arg(long)]
        protected: String,
    },
}

#[derive(Args)]
struct Output {
    /// Theory file, or the name of a bundled theory.
    #[arg(long)]
    domain: String,
    /// Print a JSON report instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct QueryArgs {
    #[command(flatten)]
    out: Output,
    #[arg(long)]
    notion: Notion,
    /// Goal formula; free in `x` for dp, strong-dp, ftu-dp and eo.
    #[arg(long, default_value = "true")]
    goal: String,
    #[arg(long)]
    protected: String,
    #[arg(long)]
    individual: Option<String>,
    #[arg(long)]
    criterion: Option<String>,
    #[arg(long)]
    property: Option<String>,
    #[arg(long, default_value_t = EoReading::Conditioned)]
    eo_reading: EoReading,
}

/// Why a command stopped without a verdict.
enum Failure {
    Usage(String),
    Parse { origin: String, diags: Vec<ParseDiagnostic> },
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    fn report(&self) -> u8 {
        match self {
            Failure::Usage(m) => {
                eprintln!("error: {m}");
                2
            }
            Failure::Parse { origin, diags } => {
                for d in diags {
                    eprintln!("{origin}:{d}");
                }
                2
            }
            Failure::Core(e) => {
                eprintln!("error: {e}");
                if e.is_resource() {
                    3
                } else {
                    2
                }
            }
        }
    }
}

type Outcome = Result<(Report, bool), Failure>;

fn parse_err(origin: &str) -> impl Fn(Vec<ParseDiagnostic>) -> Failure + '_ {
    move |diags| Failure::Parse { origin: origin.to_string(), diags }
}

/// A file path, or failing that a bundled theory name such as `loan.fth`.
fn load_theory(domain: &str) -> Result<Theory, Failure> {
    if Path::new(domain).is_file() {
        let src = TheorySource::from_file(domain).map_err(|e| Failure::Usage(format!("cannot read {domain}: {e}")))?;
        return parse_theory(&src).map_err(parse_err(domain));
    }
    bundled::by_name(domain).ok_or_else(|| Failure::Usage(format!("no theory file or bundled theory named `{domain}`")))
}

fn engine_for(theory: &Theory) -> Result<Engine, Failure> {
    let config = EngineConfig::from_env()?;
    Ok(Engine::with_config(theory, config)?)
}

fn build_query(a: &QueryArgs, theory: &Theory, plan: &str) -> Result<FairnessQuery, Failure> {
    let free: &[&str] = if a.notion.parametric_goal() { &["x"] } else { &[] };
    let goal = parse_formula_with_free(&a.goal, theory, free).map_err(parse_err("--goal"))?;
    let plan = parse_plan(plan, theory).map_err(parse_err("--plan"))?;
    let mut q = FairnessQuery::new(plan, goal, &a.protected).with_reading(a.eo_reading);
    if let Some(c) = &a.criterion {
        q = q.with_criterion(c);
    }
    if let Some(p) = &a.property {
        q = q.with_property(p);
    }
    if let Some(i) = &a.individual {
        q = q.with_individual(i.as_str());
    }
    Ok(q)
}

fn cmd_check(a: &QueryArgs, plan: &str) -> Outcome {
    let theory = load_theory(&a.out.domain)?;
    let engine = engine_for(&theory)?;
    let q = build_query(a, &theory, plan)?;
    let v = check_with(&mut engine.session(), a.notion, &q)?;
    let mut r = Report::new(&a.out.domain, "check");
    r.warnings = v.warnings.clone();
    r.verdicts.push(VerdictReport::from_verdict(&v, None));
    Ok((r, v.holds))
}

fn cmd_plan(a: &QueryArgs, horizon: usize, max_results: usize, actions: Option<&str>) -> Outcome {
    let theory = load_theory(&a.out.domain)?;
    let engine = engine_for(&theory)?;
    let q = build_query(a, &theory, "")?;
    let mut cfg = SearchConfig::new(a.notion, q, horizon).with_max_results(max_results);
    if let Some(list) = actions {
        cfg = cfg.with_actions(list.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect());
    }
    let found = find_plans(&engine, &cfg)?;
    let mut r = Report::new(&a.out.domain, "plan");
    for (plan, v) in &found {
        r.warnings.extend(v.warnings.iter().cloned());
        r.verdicts.push(VerdictReport::from_verdict(v, Some(plan)));
    }
    r.warnings.dedup();
    r.result = Some(json!({ "plans": found.iter().map(|(p, _)| plan_line(p)).collect::<Vec<_>>() }));
    Ok((r, !found.is_empty()))
}

fn cmd_worlds(o: &Output, after: &str, world: Option<usize>) -> Outcome {
    let theory = load_theory(&o.domain)?;
    let engine = engine_for(&theory)?;
    let plan = parse_plan(after, &theory).map_err(parse_err("--after"))?;
    let mut result = json!({ "w0": engine.w0().len(), "e": engine.e().len() });
    let idx = world.unwrap_or(0);
    match engine.w0().get(idx) {
        Some(&w) => {
            let compatible = engine.compatible_worlds(w, &plan)?;
            result["actual_world"] = json!(idx);
            result["after"] = json!(plan.iter().map(ToString::to_string).collect::<Vec<_>>());
            result["compatible"] = json!(compatible.len());
        }
        None if world.is_some() => {
            return Err(Failure::Usage(format!("--world {idx} is out of range (|W0|={})", engine.w0().len())));
        }
        None => {}
    }
    let mut r = Report::new(&o.domain, "worlds");
    r.result = Some(result);
    Ok((r, true))
}

fn cmd_forget(o: &Output, atoms: &str) -> Outcome {
    let theory = load_theory(&o.domain)?;
    let atoms = parse_atoms(atoms, &theory).map_err(parse_err("--atoms"))?;
    let before = engine_for(&theory)?;
    let forgotten = forget_theory(&theory, &atoms)?;
    let after = engine_for(&forgotten)?;
    let mut r = Report::new(&o.domain, "forget");
    r.result = Some(json!({
        "atoms": atoms.iter().map(ToString::to_string).collect::<Vec<_>>(),
        "init_true": forgotten.init_true.to_string(),
        "init_known": forgotten.init_known.to_string(),
        "w0_before": before.w0().len(),
        "e_before": before.e().len(),
        "w0_after": after.w0().len(),
        "e_after": after.e().len(),
    }));
    Ok((r, true))
}

fn cmd_proxy(o: &Output, protected: &str) -> Outcome {
    let theory = load_theory(&o.domain)?;
    let engine = engine_for(&theory)?;
    let proxies = proxy_set(&engine, protected)?;
    let mut r = Report::new(&o.domain, "proxy");
    r.result = Some(json!({ "protected": protected, "proxies": proxies }));
    Ok((r, true))
}

fn text(r: &Report) -> String {
    let mut out = String::new();
    for v in &r.verdicts {
        out += &verdict_text(v);
    }
    let res = r.result.as_ref();
    let count = |k: &str| res.and_then(|v| v.get(k)).and_then(|v| v.as_u64()).unwrap_or(0);
    let list = |k: &str| -> Vec<String> {
        res.and_then(|v| v.get(k))
            .and_then(|v| v.as_array())
            .map(|a| a.iter().filter_map(|s| s.as_str().map(String::from)).collect())
            .unwrap_or_default()
    };
    match r.command {
        "plan" if r.verdicts.is_empty() => out += "no plan found\n",
        "worlds" => {
            out += &format!("|W0|={} |E|={}\n", count("w0"), count("e"));
            if res.is_some_and(|v| v.get("compatible").is_some()) {
                let after = list("after");
                let shown = if after.is_empty() { "<empty plan>".to_string() } else { after.join("; ") };
                out += &format!(
                    "compatible with W0[{}] after {shown}: {}\n",
                    count("actual_world"),
                    count("compatible")
                );
            }
        }
        "forget" => {
            let s = |k: &str| res.and_then(|v| v.get(k)).and_then(|v| v.as_str()).unwrap_or("").to_string();
            out += &format!("forgot {}\n", list("atoms").join(", "));
            out += &format!("init true:  {}\n", s("init_true"));
            out += &format!("init known: {}\n", s("init_known"));
            out += &format!("|W0|: {} -> {}\n", count("w0_before"), count("w0_after"));
            out += &format!("|E|: {} -> {}\n", count("e_before"), count("e_after"));
        }
        "proxy" => {
            let p = list("proxies");
            out += &if p.is_empty() { "no proxies\n".to_string() } else { format!("{}\n", p.join("\n")) };
        }
        _ => {}
    }
    for w in &r.warnings {
        out += &format!("warning: {w}\n");
    }
    out
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let (json, outcome) = match &cli.command {
        Command::Check { common, plan } => (common.out.json, cmd_check(common, plan)),
        Command::Plan { common, horizon, max_results, actions } => {
            (common.out.json, cmd_plan(common, *horizon, *max_results, actions.as_deref()))
        }
        Command::Worlds { out, after, world } => (out.json, cmd_worlds(out, after, *world)),
        Command::Forget { out, atoms } => (out.json, cmd_forget(out, atoms)),
        Command::Proxy { out, protected } => (out.json, cmd_proxy(out, protected)),
    };
    match outcome {
        Ok((mut report, ok)) => {
            report.timing_ms = start.elapsed().as_secs_f64() * 1e3;
            if json {
                println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
            } else {
                print!("{}", text(&report));
            }
            ExitCode::from(if ok { 0 } else { 1 })
        }
        Err(f) => ExitCode::from(f.report()),
    }
}
