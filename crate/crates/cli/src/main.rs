//! `markov`: command-line front end for markov-core.
//!
//! Exit codes: `0` when a result was computed (a "false" decision included),
//! `2` when a precondition fails or a comparison is undecidable, `3` when an
//! expression does not parse.

mod hm_cmd;
mod render;

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use markov_core::cardinal::Cardinal;
use markov_core::decompose::{self, DecomposeError};
use markov_core::dsl::{parse, parse_cardinal, DslError};
use markov_core::invariants::{self, InvariantError};
use markov_core::oracle::{self, OracleError};
use markov_core::plan::{self, PlanError};
use markov_core::presentation::Presentation;
use markov_core::Undecidable;
use serde::Serialize;
use serde_json::json;

pub const EXIT_OK: u8 = 0;
pub const EXIT_PRECONDITION: u8 = 2;
pub const EXIT_PARSE: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "markov", version, about = "Connected group topologies on abelian group presentations")]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for randomized scenarios.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Cardinality, exponent, ranks, divisible weight and rank, flags.
    Invariants { expr: String },
    /// Decide a single property.
    Decide {
        predicate: DecidePredicate,
        expr: String,
        #[arg(long)]
        sigma: Option<String>,
        #[arg(long)]
        kappa: Option<String>,
    },
    /// Run one of the constructive decompositions.
    Decompose {
        mode: DecomposeMode,
        expr: String,
        /// σ for the `sigma` and `homogeneous` modes (default `c`).
        #[arg(long)]
        sigma: Option<String>,
    },
    /// Certificate for a connected group topology, or a refusal witness.
    Plan {
        expr: String,
        /// Realize `expr` as the connected component of this group.
        #[arg(long)]
        within: Option<String>,
    },
    /// Compare `mG` and `G[m]` with brute-force enumeration.
    OracleCheck {
        expr: String,
        #[arg(long, default_value_t = 24)]
        max_m: u64,
        #[arg(long, default_value_t = oracle::DEFAULT_BOUND)]
        bound: u64,
    },
    /// Hartman-Mycielski simulator scenarios.
    Hm(hm_cmd::HmArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
enum DecidePredicate {
    MGroup,
    ConnectedTopology,
    WDivisible,
    RDivisible,
    StronglyUnbounded,
    SigmaHomogeneous,
    TorusEmbedding,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum DecomposeMode {
    BoundedWdiv,
    Sigma,
    Homogeneous,
    WdivSubgroup,
    FiniteRank,
    Hm,
}

/// Failure of a command, carrying its exit code.
#[derive(Debug)]
pub enum Failure {
    Parse(String),
    Precondition(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Parse(_) => EXIT_PARSE,
            Failure::Precondition(_) => EXIT_PRECONDITION,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Parse(m) | Failure::Precondition(m) => m,
        }
    }
}

impl From<DslError> for Failure {
    fn from(e: DslError) -> Self {
        Failure::Parse(e.to_string())
    }
}

macro_rules! precondition_from {
    ($($t:ty),*) => {
        $(impl From<$t> for Failure {
            fn from(e: $t) -> Self {
                Failure::Precondition(e.to_string())
            }
        })*
    };
}

precondition_from!(InvariantError, DecomposeError, PlanError, OracleError, Undecidable, markov_core::hm::HmError);

pub type Outcome = Result<Rendered, Failure>;

/// A computed result in both renderings.
pub struct Rendered {
    pub text: String,
    pub json: serde_json::Value,
}

fn group(expr: &str) -> Result<Presentation, Failure> {
    Ok(parse(expr)?)
}

fn cardinal_arg(text: Option<&str>, default: Cardinal) -> Result<Cardinal, Failure> {
    match text {
        Some(t) => Ok(parse_cardinal(t)?),
        None => Ok(default),
    }
}

fn run_invariants(expr: &str) -> Outcome {
    let g = group(expr)?;
    let report = invariants::report(&g)?;
    Ok(Rendered { text: render::report(&report), json: serde_json::to_value(&report).expect("serializable") })
}

fn run_decide(pred: DecidePredicate, expr: &str, sigma: Option<&str>, kappa: Option<&str>) -> Outcome {
    let g = group(expr)?;
    let (result, note, detail) = match pred {
        DecidePredicate::MGroup | DecidePredicate::ConnectedTopology => {
            let d = invariants::is_m_group(&g)?;
            let note = d.witness.as_ref().map(|w| format!("witness m={}, |{}G|={}", w.m, w.m, w.size));
            (d.holds, note, json!({ "witness": d.witness }))
        }
        DecidePredicate::WDivisible => {
            let wd = invariants::divisible_weight(&g);
            let holds = invariants::is_w_divisible(&g)?;
            let note = format!("w_d={wd}, |G|={}", g.cardinality());
            (holds, Some(note), json!({ "w_d": wd, "cardinality": g.cardinality() }))
        }
        DecidePredicate::RDivisible => {
            let rd = invariants::divisible_rank(&g);
            let r = markov_core::structure::rank_profile(&g).r;
            let holds = invariants::is_r_divisible(&g)?;
            (holds, Some(format!("r_d={rd}, r={r}")), json!({ "r_d": rd, "r": r }))
        }
        DecidePredicate::StronglyUnbounded => {
            let su = invariants::is_strongly_unbounded(&g)?;
            let note = su.certificate.as_ref().map(|c| {
                let case = serde_json::to_value(c.case).expect("serializable");
                format!("case {}, {} unbounded summands", case.as_str().unwrap_or_default(), c.index)
            });
            (su.holds, note, json!({ "certificate": su.certificate }))
        }
        DecidePredicate::SigmaHomogeneous => {
            let sigma = cardinal_arg(sigma, Cardinal::CONTINUUM)?;
            let holds = invariants::is_sigma_homogeneous(&g, &sigma)?;
            (holds, Some(format!("sigma={sigma}")), json!({ "sigma": sigma }))
        }
        DecidePredicate::TorusEmbedding => {
            let kappa = cardinal_arg(kappa, Cardinal::CONTINUUM)?;
            let e = invariants::check_torus_embedding(&g, &kappa)?;
            (e.holds, Some(e.reason.clone()), json!({ "kappa": kappa, "reason": e.reason }))
        }
    };
    let text = match &note {
        Some(n) => format!("{result} ({n})"),
        None => result.to_string(),
    };
    let mut value = json!({ "predicate": pred, "group": g.to_string(), "result": result });
    if let (Some(obj), serde_json::Value::Object(extra)) = (value.as_object_mut(), detail) {
        obj.extend(extra);
    }
    Ok(Rendered { text, json: value })
}

fn parts(names: &[&str], groups: &[&Presentation]) -> Rendered {
    let text = names
        .iter()
        .zip(groups)
        .map(|(n, g)| format!("{n} = {g}"))
        .collect::<Vec<_>>()
        .join("\n");
    let mut map = serde_json::Map::new();
    for (n, g) in names.iter().zip(groups) {
        map.insert(n.to_string(), serde_json::to_value(g).expect("serializable"));
    }
    Rendered { text, json: serde_json::Value::Object(map) }
}

fn run_decompose(mode: DecomposeMode, expr: &str, sigma: Option<&str>) -> Outcome {
    let g = group(expr)?;
    Ok(match mode {
        DecomposeMode::BoundedWdiv => {
            let (k, m) = decompose::split_bounded_wdiv(&g)?;
            parts(&["K", "M"], &[&k, &m])
        }
        DecomposeMode::Sigma => {
            let sigma = cardinal_arg(sigma, Cardinal::CONTINUUM)?;
            let (l, n) = decompose::split_sigma(&g, &sigma)?;
            parts(&["L", "N"], &[&l, &n])
        }
        DecomposeMode::Homogeneous => {
            let sigma = cardinal_arg(sigma, Cardinal::CONTINUUM)?;
            let (n, h) = decompose::homogeneous_split(&g, &sigma)?;
            parts(&["N", "H"], &[&n, &h])
        }
        DecomposeMode::WdivSubgroup => {
            let h = decompose::homogeneous_wdiv_subgroup(&g)?;
            parts(&["H"], &[&h])
        }
        DecomposeMode::FiniteRank => {
            let d = decompose::finite_rank_decomposition(&g)?;
            let mut r = parts(&["G0", "D", "B"], &[&d.g0, &d.d, &d.b]);
            r.text.push_str(&format!("\nr_d = {}", d.r_d));
            r.json["r_d"] = serde_json::to_value(&d.r_d).expect("serializable");
            r
        }
        DecomposeMode::Hm => {
            let h = decompose::hm_symbolic(&g);
            parts(&["HM"], &[&h])
        }
    })
}

fn run_plan(expr: &str, within: Option<&str>) -> Outcome {
    let h = group(expr)?;
    let outcome = match within {
        Some(w) => plan::plan_component(&group(w)?, &h)?,
        None => plan::plan_connected_topology(&h)?,
    };
    Ok(Rendered { text: render::plan(&outcome), json: serde_json::to_value(&outcome).expect("serializable") })
}

fn run_oracle_check(expr: &str, max_m: u64, bound: u64) -> Outcome {
    let g = group(expr)?;
    let rows = oracle::cross_check(&g, max_m, bound)?;
    let agree = rows.iter().all(|r| r.agree);
    let mut text = String::new();
    for r in &rows {
        text.push_str(&format!(
            "m={:<3} mG = {} | G[m] = {}{}\n",
            r.m,
            r.oracle_image,
            r.oracle_kernel,
            if r.agree { "" } else { "  MISMATCH" }
        ));
    }
    text.push_str(&format!("{} multipliers, {}", rows.len(), if agree { "all agree" } else { "mismatches found" }));
    Ok(Rendered { text, json: json!({ "group": g.to_string(), "agree": agree, "rows": rows }) })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Invariants { expr } => run_invariants(expr),
        Command::Decide { predicate, expr, sigma, kappa } => {
            run_decide(*predicate, expr, sigma.as_deref(), kappa.as_deref())
        }
        Command::Decompose { mode, expr, sigma } => run_decompose(*mode, expr, sigma.as_deref()),
        Command::Plan { expr, within } => run_plan(expr, within.as_deref()),
        Command::OracleCheck { expr, max_m, bound } => run_oracle_check(expr, *max_m, *bound),
        Command::Hm(args) => hm_cmd::run(args, cli.seed),
    };
    match outcome {
        Ok(r) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&r.json).expect("serializable"));
            } else {
                println!("{}", r.text);
            }
            ExitCode::from(EXIT_OK)
        }
        Err(f) => {
            if cli.json {
                println!("{}", json!({ "error": f.message(), "exit_code": f.code() }));
            } else {
                eprintln!("error: {}", f.message());
            }
            ExitCode::from(f.code())
        }
    }
}
