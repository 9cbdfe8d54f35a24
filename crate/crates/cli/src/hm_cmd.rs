//! `markov hm <scenario>`: seeded runs of the step-function simulator.

use clap::{Args, ValueEnum};
use markov_core::corpus;
use markov_core::hm::{self, BaseGroup, StepFunction, Q};
use rand::Rng;
use serde_json::json;

use crate::{Failure, Outcome, Rendered};

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum Scenario {
    /// Truncation path from 0 to a random h inside the ε-ball.
    BallPath,
    /// Pointwise rounding of a random Q/Z-valued function to (1/N)Z/Z.
    Density,
    /// Metric and group-law spot checks on random triples.
    Metric,
    /// `s, mu(h_s != 0)` table for a random h.
    Trace,
}

#[derive(Args, Debug)]
pub struct HmArgs {
    scenario: Scenario,
    /// Base group, e.g. `Z/2`, `Z/2xZ/3`, `Q/Z`.
    #[arg(long, default_value = "Z/2")]
    base: String,
    #[arg(long, default_value_t = 64)]
    samples: usize,
    #[arg(long, default_value = "1/4")]
    eps: String,
    /// Denominator of the approximating subgroup for `density`.
    #[arg(long, default_value_t = 16)]
    n: u64,
    /// Maximum number of pieces of generated functions.
    #[arg(long, default_value_t = 6)]
    pieces: usize,
    /// Write the trace CSV to this path instead of stdout.
    #[arg(long)]
    csv: Option<std::path::PathBuf>,
}

const MAX_DEN: i64 = 12;

fn rational(text: &str) -> Result<Q, Failure> {
    text.trim().parse::<Q>().map_err(|_| Failure::Parse(format!("cannot parse rational {text:?}")))
}

fn base(text: &str) -> Result<BaseGroup, Failure> {
    text.parse::<BaseGroup>().map_err(|e| Failure::Parse(e.to_string()))
}

pub fn run(args: &HmArgs, seed: u64) -> Outcome {
    let mut rng = corpus::rng(seed);
    match args.scenario {
        Scenario::BallPath => {
            let b = base(&args.base)?;
            let eps = rational(&args.eps)?;
            if eps <= Q::from_integer(0.into()) {
                return Err(Failure::Precondition("eps must be positive".into()));
            }
            // supported on [0, ε/2), so mu(h != 0) < ε
            let h = hm::truncate(&hm::random_function(&mut rng, &b, args.pieces, MAX_DEN), &(&eps / Q::from_integer(2.into())));
            let report = hm::ball_path_check(&h, &eps, args.samples)?;
            let text = format!(
                "h = {h}\n{}: {} samples, max mu = {}, max deviation = {}",
                if report.pass { "pass" } else { "FAIL" },
                report.samples,
                report.max_measure,
                report.max_deviation
            );
            Ok(Rendered { text, json: json!({ "h": h, "report": report }) })
        }
        Scenario::Density => {
            let eps = rational(&args.eps)?;
            let f = hm::random_function(&mut rng, &BaseGroup::Circle, args.pieces, MAX_DEN);
            let report = hm::density_approx(&f, args.n, &eps)?;
            let text = format!(
                "f = {f}\napprox = {}\ndistance = {} (bound {}), within eps: {}",
                report.approx, report.distance, report.bound, report.within_epsilon
            );
            Ok(Rendered { text, json: json!({ "f": f, "report": report }) })
        }
        Scenario::Metric => metric(&base(&args.base)?, args, &mut rng),
        Scenario::Trace => {
            let b = base(&args.base)?;
            let h = hm::random_function(&mut rng, &b, args.pieces, MAX_DEN);
            let csv = hm::truncation_trace_csv(&h, args.samples);
            let rows: Vec<serde_json::Value> = csv
                .lines()
                .skip(1)
                .filter_map(|l| l.split_once(','))
                .map(|(s, m)| json!({ "s": s, "mu": m }))
                .collect();
            let text = match &args.csv {
                Some(path) => {
                    std::fs::write(path, &csv)
                        .map_err(|e| Failure::Precondition(format!("cannot write {}: {e}", path.display())))?;
                    format!("h = {h}\nwrote {} rows to {}", rows.len(), path.display())
                }
                None => csv.trim_end().to_string(),
            };
            Ok(Rendered { text, json: json!({ "h": h, "rows": rows }) })
        }
    }
}

fn metric<R: Rng>(b: &BaseGroup, args: &HmArgs, rng: &mut R) -> Outcome {
    let mut failures: Vec<&'static str> = Vec::new();
    let trials = args.samples.max(1);
    for _ in 0..trials {
        let f: Vec<StepFunction> = (0..3).map(|_| hm::random_function(rng, b, args.pieces, MAX_DEN)).collect();
        for (name, d) in [("mu", hm::mu_diff as fn(&_, &_) -> _), ("kyfan", hm::kyfan)] {
            let fg = d(&f[0], &f[1])?;
            if fg != d(&f[1], &f[0])? {
                failures.push(if name == "mu" { "mu symmetry" } else { "kyfan symmetry" });
            }
            if fg > d(&f[0], &f[2])? + d(&f[2], &f[1])? {
                failures.push(if name == "mu" { "mu triangle" } else { "kyfan triangle" });
            }
            if fg != d(&hm::sf_add(&f[0], &f[2])?, &hm::sf_add(&f[1], &f[2])?)? {
                failures.push(if name == "mu" { "mu translation" } else { "kyfan translation" });
            }
        }
        if hm::kyfan(&f[0], &f[1])? > hm::mu_diff(&f[0], &f[1])? {
            failures.push("kyfan <= mu");
        }
        if !hm::sf_add(&f[0], &hm::sf_neg(&f[0]))?.is_zero() {
            failures.push("inverse");
        }
        if hm::sf_add(&hm::sf_add(&f[0], &f[1])?, &f[2])? != hm::sf_add(&f[0], &hm::sf_add(&f[1], &f[2])?)? {
            failures.push("associativity");
        }
    }
    failures.sort_unstable();
    failures.dedup();
    let text = if failures.is_empty() {
        format!("{trials} random triples over {b}: all laws hold")
    } else {
        format!("{trials} random triples over {b}: violated {}", failures.join(", "))
    };
    Ok(Rendered { text, json: json!({ "base": b, "trials": trials, "violations": failures }) })
}
