//! Acceptance suite: one line per criterion, non-zero exit on any failure.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use spacelike_cli::verify::CRITERIA;

const DETERMINISM_SEED: &str = "42";
const DETERMINISM_LIMIT: Duration = Duration::from_secs(600);

fn line(pass: bool, id: u8, name: &str, seconds: f64, note: &str) {
    let tag = if pass { "PASS" } else { "FAIL" };
    println!("[{tag}] criterion {id}: {name} ({seconds:.2} s){note}");
}

/// Everything before the trailing timing object.
fn payload(text: &str) -> &str {
    text.find("\n  \"timing\":").map_or(text, |i| &text[..i])
}

fn determinism() -> Result<(), String> {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut texts = Vec::new();
    for run in 0..2 {
        let path = dir.path().join(format!("run{run}.json"));
        let out = Command::new(env!("CARGO_BIN_EXE_spacelike"))
            .args(["verify-all", "--seed", DETERMINISM_SEED, "--out"])
            .arg(&path)
            .output()
            .map_err(|e| e.to_string())?;
        if out.status.code() != Some(0) {
            return Err(format!("run {run} exited with {}", out.status));
        }
        texts.push(std::fs::read_to_string(&path).map_err(|e| e.to_string())?);
    }
    let (a, b) = (payload(&texts[0]), payload(&texts[1]));
    if !texts[0].contains("\"timing\"") {
        return Err("no timing section found".into());
    }
    if a != b {
        return Err("payloads differ".into());
    }
    Ok(())
}

fn main() -> ExitCode {
    let seed: u64 = DETERMINISM_SEED.parse().expect("numeric seed");
    let mut all = true;
    for c in &CRITERIA {
        let (outcome, timing) = c.run(seed);
        let note = match (outcome.pass, timing.within_limit) {
            (true, true) => String::new(),
            (false, _) => format!(" details: {}", outcome.details),
            (true, false) => format!(" exceeded {:.0} s", timing.limit_seconds),
        };
        let ok = outcome.pass && timing.within_limit;
        all &= ok;
        line(ok, c.id, c.name, timing.seconds, &note);
    }
    let start = Instant::now();
    let det = determinism();
    let elapsed = start.elapsed();
    let ok = det.is_ok() && elapsed <= DETERMINISM_LIMIT;
    all &= ok;
    let note = match det {
        Ok(()) => String::new(),
        Err(e) => format!(" {e}"),
    };
    line(ok, 9, "determinism of verify-all --seed 42", elapsed.as_secs_f64(), &note);
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
