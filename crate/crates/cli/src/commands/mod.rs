pub mod chsh;
pub mod cluster;
pub mod gfactor;
pub mod lhv;
pub mod randomfield;
pub mod theorem8;
pub mod verify_all;
pub mod wightman;

use serde::Serialize;
use serde_json::{json, Value};

use crate::config::Settings;
use crate::UsageError;

/// Largest number of rows a scan may produce.
const MAX_ROWS: usize = 100_000;

/// Inclusive grid min, min + step, … up to max.
pub(crate) fn grid(min: f64, max: f64, step: f64) -> Result<Vec<f64>, UsageError> {
    if !(step > 0.0) || !min.is_finite() || !max.is_finite() || max < min {
        return Err(UsageError(format!("invalid range {min}..{max} step {step}")));
    }
    let count = ((max - min) / step + 1e-9).floor() as usize + 1;
    if count > MAX_ROWS {
        return Err(UsageError(format!("range produces {count} rows, limit {MAX_ROWS}")));
    }
    // rounding keeps 0.1-style steps printable as typed
    Ok((0..count)
        .map(|i| ((min + i as f64 * step) * 1e12).round() / 1e12)
        .collect())
}

/// Config echo: the settings that influence the result plus the parameters.
pub(crate) fn echo(settings: &Settings, tol: Option<f64>, params: &impl Serialize) -> Value {
    json!({
        "seed": settings.seed,
        "tol": tol,
        "params": serde_json::to_value(params).expect("parameters serialize"),
    })
}
