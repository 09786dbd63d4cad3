//! JSON number formatting shared by every command.

use std::str::FromStr;

use serde_json::{Number, Value};

pub use crate::series::{bigint_json, rational_json};

/// Schema tag carried by every top-level JSON document.
pub const SCHEMA: &str = "ihara-lab/1";

/// A float with 17 significant digits, so it round-trips; `null` if not finite.
pub fn float(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    let text = format!("{x:.16e}");
    Value::Number(Number::from_str(&text).expect("float literal"))
}

/// Same digits as [`float`], for tables and CSV.
pub fn float_text(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        "nan".into()
    }
}

pub fn floats(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|&x| float(x)).collect())
}
