//! JSON with floats at 17 significant digits, which round-trip exactly.

use serde::Serialize;
use serde_json::value::RawValue;

pub type Num = Box<RawValue>;

pub fn num(x: f64) -> Num {
    let s = if x.is_finite() { format!("{x:.16e}") } else { "null".to_string() };
    RawValue::from_string(s).expect("formatted float is valid JSON")
}

pub fn nums(xs: &[f64]) -> Vec<Num> {
    xs.iter().map(|&x| num(x)).collect()
}

pub fn to_string<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report serializes");
    s.push('\n');
    s
}

/// A CSV field at 17 significant digits.
pub fn field(x: f64) -> String {
    format!("{x:.16e}")
}
