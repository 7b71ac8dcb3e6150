//! Machine-readable output.
//!
//! Every command emits one [`OutputDoc`]. Integers are decimal strings,
//! rationals are `"num/den"` strings (always with a denominator), and
//! polynomials are coefficient lists, lowest degree first. A coefficient
//! in ℚ(s) is `{"num": [...], "den": [...]}` with both parts given as
//! polynomials in `s`. Object keys are sorted, so output is byte-stable.

use cfquad_core::arith::{Poly, Rat, RatFunc};
use cfquad_core::{CfWord, Int};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputDoc {
    pub schema_version: u32,
    pub command: String,
    pub inputs: Value,
    pub result: Value,
    pub status: String,
}

impl OutputDoc {
    pub fn new(command: &str, inputs: Value, result: Value, status: &str) -> Self {
        OutputDoc {
            schema_version: SCHEMA_VERSION,
            command: command.to_string(),
            inputs,
            result,
            status: status.to_string(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("values are plain JSON")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}

/// Conversion of exact values to their JSON form.
pub trait ToJson {
    fn to_json(&self) -> Value;
}

impl ToJson for Int {
    fn to_json(&self) -> Value {
        Value::String(self.to_string())
    }
}

impl ToJson for Rat {
    fn to_json(&self) -> Value {
        Value::String(format!("{}/{}", self.numer(), self.denom()))
    }
}

impl ToJson for RatFunc {
    fn to_json(&self) -> Value {
        json!({ "num": self.numer().to_json(), "den": self.denom().to_json() })
    }
}

impl<T: ToJson> ToJson for Poly<T>
where
    T: cfquad_core::Field,
{
    fn to_json(&self) -> Value {
        Value::Array(self.coeffs().iter().map(ToJson::to_json).collect())
    }
}

impl<T: ToJson> ToJson for CfWord<T> {
    fn to_json(&self) -> Value {
        Value::Array(self.0.iter().map(ToJson::to_json).collect())
    }
}

impl<T: ToJson> ToJson for [T] {
    fn to_json(&self) -> Value {
        Value::Array(self.iter().map(ToJson::to_json).collect())
    }
}
