//! Deterministic artifact writing: every float is rounded to 12 significant
//! digits before it reaches disk, so reruns with the same seed are
//! byte-identical and diffable.

use std::path::Path;

use serde_json::Value;

use crate::CliError;

/// Formats a float with 12 significant digits in scientific notation, the
/// representation used in all CSV output.
pub fn sig12(x: f64) -> String {
    format!("{x:.11e}")
}

/// Rounds a float to 12 significant digits.
pub fn round12(x: f64) -> f64 {
    if x.is_finite() {
        sig12(x).parse().unwrap()
    } else {
        x
    }
}

/// Recursively rounds every number in a JSON tree to 12 significant digits.
fn round_tree(v: &mut Value) {
    match v {
        Value::Number(n) => {
            if let Some(f) = n.as_f64() {
                if n.as_i64().is_none() && n.as_u64().is_none() {
                    *v = Value::from(round12(f));
                }
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_tree),
        Value::Object(map) => map.values_mut().for_each(round_tree),
        _ => {}
    }
}

pub fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut tree = serde_json::to_value(value)
        .map_err(|e| CliError::Io(format!("cannot serialize {}: {e}", path.display())))?;
    round_tree(&mut tree);
    let mut text = serde_json::to_string_pretty(&tree)
        .map_err(|e| CliError::Io(format!("cannot serialize {}: {e}", path.display())))?;
    text.push('\n');
    std::fs::write(path, text)
        .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}

pub fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text)
        .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}
