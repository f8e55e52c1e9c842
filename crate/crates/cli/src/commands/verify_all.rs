use std::time::{Duration, Instant};

use clap::Args;
use serde::Serialize;
use serde_json::{json, Value};

use super::echo;
use crate::config::Settings;
use crate::output::{Body, Report};
use crate::verify::CRITERIA;
use crate::UsageError;

#[derive(Debug, Clone, Args, Serialize)]
pub struct VerifyAllArgs {
    /// Wall-clock budget in seconds; criteria not started in time are skipped
    #[arg(long, default_value_t = 900.0)]
    pub budget: f64,
}

/// Runs the numeric acceptance criteria in order. Timing goes into a
/// separate section so the payload is reproducible for a fixed seed.
pub fn run(args: &VerifyAllArgs, settings: &Settings) -> anyhow::Result<Report> {
    if settings.tol.is_some() {
        return Err(UsageError("verify-all uses the fixed acceptance tolerances; drop --tol".into()).into());
    }
    if !(args.budget > 0.0) || !args.budget.is_finite() {
        return Err(UsageError(format!("budget must be positive, got {}", args.budget)).into());
    }
    let budget = Duration::from_secs_f64(args.budget);
    let start = Instant::now();
    let mut outcomes: Vec<Value> = Vec::new();
    let mut timings: Vec<Value> = Vec::new();
    let mut pass = true;
    let mut runtime_ok = true;
    for c in &CRITERIA {
        if start.elapsed() >= budget {
            pass = false;
            outcomes.push(json!({ "id": c.id, "name": c.name, "pass": false, "details": { "skipped": "budget exhausted" } }));
            continue;
        }
        let (outcome, timing) = c.run(settings.seed);
        eprintln!(
            "[{}] {} {} ({:.2} s)",
            if outcome.pass && timing.within_limit { "PASS" } else { "FAIL" },
            c.id,
            c.name,
            timing.seconds
        );
        pass &= outcome.pass;
        runtime_ok &= timing.within_limit;
        outcomes.push(serde_json::to_value(outcome)?);
        timings.push(serde_json::to_value(timing)?);
    }
    Ok(Report {
        command: "verify-all",
        config: echo(settings, None, args),
        body: Body::Record(json!({ "criteria": outcomes })),
        pass,
        timing: Some(json!({
            "total_seconds": start.elapsed().as_secs_f64(),
            "criteria": timings,
            "within_limits": runtime_ok,
        })),
        runtime_ok,
    })
}
