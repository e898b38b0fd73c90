use serde::{Serialize, Serializer};
use serde_json::Value;

use crate::linalg::{format_q, Q};

/// One failed instance of an identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub constraint: String,
    pub witness: Vec<String>,
    #[serde(serialize_with = "serialize_q")]
    pub residual: Q,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub ok: bool,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn from_violations(violations: Vec<Violation>) -> Self {
        Self {
            ok: violations.is_empty(),
            violations,
        }
    }
}

/// JSON value for a rational: an integer when it is one and fits in `i64`, else a `"p/q"` string.
pub fn q_to_json(value: &Q) -> Value {
    if value.is_integer() {
        if let Ok(n) = i64::try_from(value.numer()) {
            return Value::from(n);
        }
    }
    Value::String(format_q(value))
}

pub fn serialize_q<S: Serializer>(value: &Q, s: S) -> Result<S::Ok, S::Error> {
    q_to_json(value).serialize(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::q;

    #[test]
    fn rationals_render_as_numbers_when_integral() {
        assert_eq!(q_to_json(&q(-3)), Value::from(-3));
        assert_eq!(q_to_json(&(q(1) / q(3))), Value::from("1/3"));
    }
}
