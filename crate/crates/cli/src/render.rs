//! `key: value` rendering of JSON reports.

use serde_json::Value;

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        _ => None,
    }
}

fn walk(prefix: &str, v: &Value, out: &mut String) {
    if let Some(s) = scalar(v) {
        out.push_str(&format!("{}: {}\n", prefix, s));
        return;
    }
    match v {
        Value::Array(items) => {
            if items.is_empty() {
                out.push_str(&format!("{}: (none)\n", prefix));
            } else if let Some(parts) = items.iter().map(scalar).collect::<Option<Vec<_>>>() {
                out.push_str(&format!("{}: {}\n", prefix, parts.join(", ")));
            } else {
                for (i, x) in items.iter().enumerate() {
                    walk(&format!("{}[{}]", prefix, i), x, out);
                }
            }
        }
        Value::Object(map) => {
            for (k, x) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{}.{}", prefix, k) };
                walk(&key, x, out);
            }
        }
        _ => unreachable!(),
    }
}

pub fn text(v: &Value) -> String {
    let mut out = String::new();
    walk("", v, &mut out);
    out
}
