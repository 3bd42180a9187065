use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

/// One invocation, as written to stdout.
#[derive(Debug, Serialize)]
pub struct RunRecord {
    pub command: String,
    pub argv: Vec<String>,
    /// SHA-256 over the arguments and the contents of every input file.
    pub inputs_sha256: String,
    pub seed: Option<u64>,
    pub outputs: Value,
    pub wall_seconds: f64,
    pub counters: Counters,
    pub version: &'static str,
}

#[derive(Debug, Default, Serialize)]
pub struct Counters {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub branches: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<u64>,
}

pub fn digest(argv: &[String], inputs: &[Vec<u8>]) -> String {
    let mut h = Sha256::new();
    for a in argv {
        h.update(a.as_bytes());
        h.update([0]);
    }
    for i in inputs {
        h.update((i.len() as u64).to_le_bytes());
        h.update(i);
    }
    hex::encode(h.finalize())
}

/// Rounds to 15 significant digits.
pub fn sig15(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.14e}").parse().unwrap_or(x)
}

/// Applies [`sig15`] to every float in `v`.
pub fn round_floats(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            if let Some(r) = n.as_f64().and_then(|x| serde_json::Number::from_f64(sig15(x))) {
                *n = r;
            }
        }
        Value::Array(a) => a.iter_mut().for_each(round_floats),
        Value::Object(o) => o.values_mut().for_each(round_floats),
        _ => {}
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn fifteen_digits() {
        assert_eq!(sig15(0.1 + 0.2), 0.3);
        assert_eq!(sig15(1.0 / 3.0), 0.333333333333333);
        assert_eq!(sig15(-2.5e-300), -2.5e-300);
        assert_eq!(sig15(0.0), 0.0);
    }

    #[test]
    fn rounds_nested_values() {
        let mut v = json!({"a": [0.1 + 0.2, 3], "b": {"c": 1.0 / 3.0}});
        round_floats(&mut v);
        assert_eq!(v, json!({"a": [0.3, 3], "b": {"c": 0.333333333333333}}));
    }

    #[test]
    fn digest_separates_arguments() {
        let a = digest(&["ab".into(), "c".into()], &[]);
        let b = digest(&["a".into(), "bc".into()], &[]);
        assert_ne!(a, b);
        assert_eq!(a.len(), 64);
        assert_eq!(a, digest(&["ab".into(), "c".into()], &[]));
    }
}
