//! Report rendering: one canonical JSON form (byte-stable under
//! parse → re-serialize) and a flat text form carrying the same numbers.

use serde_json::Value;

/// Finite floats only; anything else renders as null so every numeric field
/// in a report is finite by construction.
pub fn num(x: f64) -> Value {
    if x.is_finite() {
        Value::from(x)
    } else {
        Value::Null
    }
}

/// Canonical serialization: object keys in insertion order, two-space
/// indentation, floats at 17 significant digits (`{:.16e}`), integers bare.
/// Parsing the output and re-serializing reproduces it byte for byte.
pub fn to_canonical_json(v: &Value) -> String {
    let mut out = String::new();
    write_value(&mut out, v, 0);
    out
}

fn write_value(out: &mut String, v: &Value, indent: usize) {
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => write_number(out, n),
        Value::String(s) => out.push_str(&serde_json::to_string(s).expect("string escapes")),
        Value::Array(items) => {
            if items.is_empty() {
                out.push_str("[]");
                return;
            }
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                out.push('\n');
                push_indent(out, indent + 1);
                write_value(out, item, indent + 1);
                if i + 1 < items.len() {
                    out.push(',');
                }
            }
            out.push('\n');
            push_indent(out, indent);
            out.push(']');
        }
        Value::Object(map) => {
            if map.is_empty() {
                out.push_str("{}");
                return;
            }
            out.push('{');
            for (i, (key, item)) in map.iter().enumerate() {
                out.push('\n');
                push_indent(out, indent + 1);
                out.push_str(&serde_json::to_string(key).expect("string escapes"));
                out.push_str(": ");
                write_value(out, item, indent + 1);
                if i + 1 < map.len() {
                    out.push(',');
                }
            }
            out.push('\n');
            push_indent(out, indent);
            out.push('}');
        }
    }
}

fn write_number(out: &mut String, n: &serde_json::Number) {
    if n.is_u64() || n.is_i64() {
        out.push_str(&n.to_string());
    } else {
        let x = n.as_f64().expect("numbers are u64, i64, or f64");
        out.push_str(&format!("{x:.16e}"));
    }
}

fn push_indent(out: &mut String, levels: usize) {
    for _ in 0..levels {
        out.push_str("  ");
    }
}

/// Flat `path = value` lines over the same tree; scalars are formatted by the
/// JSON writer so both formats carry identical numbers.
pub fn to_text(v: &Value) -> String {
    let mut out = String::new();
    walk_text(&mut out, v, String::new());
    out
}

fn walk_text(out: &mut String, v: &Value, path: String) {
    match v {
        Value::Array(items) if !items.is_empty() => {
            for (i, item) in items.iter().enumerate() {
                walk_text(out, item, format!("{path}[{i}]"));
            }
        }
        Value::Object(map) if !map.is_empty() => {
            for (key, item) in map {
                let sub = if path.is_empty() { key.clone() } else { format!("{path}.{key}") };
                walk_text(out, item, sub);
            }
        }
        Value::String(s) => {
            out.push_str(&format!("{path} = {s}\n"));
        }
        other => {
            let mut scalar = String::new();
            write_value(&mut scalar, other, 0);
            out.push_str(&format!("{path} = {scalar}\n"));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn canonical_json_round_trips_bytes() {
        let report = json!({
            "input": {"command": "critical", "k": 100},
            "fit": null,
            "critical": {"v": 10.0, "sigma0": 46.051701859880914, "gap": 1.0152e-4},
            "warnings": ["k = 5 is small"],
            "empty_obj": {},
            "empty_arr": [],
        });
        let first = to_canonical_json(&report);
        let reparsed: Value = serde_json::from_str(&first).unwrap();
        assert_eq!(first.as_bytes(), to_canonical_json(&reparsed).as_bytes());
    }

    #[test]
    fn floats_carry_seventeen_significant_digits() {
        let j = to_canonical_json(&json!({"x": 45.951701859880914}));
        assert!(j.contains("4.5951701859880913e1"), "{j}");
        let j = to_canonical_json(&json!({"x": 0.011}));
        assert!(j.contains("1.0999999999999999e-2"), "{j}");
        let j = to_canonical_json(&json!({"x": 0.015625}));
        assert!(j.contains("1.5625000000000000e-2"), "{j}");
    }

    #[test]
    fn integers_stay_bare_through_reparse() {
        let first = to_canonical_json(&json!({"k": 100, "x": 4.0}));
        assert!(first.contains("\"k\": 100"));
        assert!(first.contains("4.0000000000000000e0"));
        let reparsed: Value = serde_json::from_str(&first).unwrap();
        assert_eq!(first, to_canonical_json(&reparsed));
    }

    #[test]
    fn non_finite_maps_to_null() {
        assert_eq!(num(f64::NAN), Value::Null);
        assert_eq!(num(f64::INFINITY), Value::Null);
        assert_eq!(num(1.5), json!(1.5));
    }

    #[test]
    fn text_flattens_with_identical_numbers() {
        let report = json!({
            "critical": {"v": 10.0, "list": [1.5, 2u32]},
            "verdict": "Solvent",
            "fit": null,
        });
        let text = to_text(&report);
        assert!(text.contains("critical.v = 1.0000000000000000e1\n"));
        assert!(text.contains("critical.list[0] = 1.5000000000000000e0\n"));
        assert!(text.contains("critical.list[1] = 2\n"));
        assert!(text.contains("verdict = Solvent\n"));
        assert!(text.contains("fit = null\n"));
    }
}
