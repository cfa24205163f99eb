use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Text,
}

/// Renders a report; the output always ends with a newline.
pub fn render(value: &Value, format: Format) -> String {
    match format {
        Format::Json => {
            let mut out = String::new();
            json_pretty(value, 0, &mut out);
            out.push('\n');
            out
        }
        Format::Text => {
            let mut out = String::new();
            text_lines(value, "", &mut out);
            out
        }
    }
}

fn is_leaf(value: &Value) -> bool {
    match value {
        Value::Object(_) => false,
        Value::Array(items) => items.iter().all(is_leaf),
        _ => true,
    }
}

// Pretty JSON with two-space indent; arrays of scalars (and nested arrays of
// scalars, i.e. vectors and matrices) stay on one line.
fn json_pretty(value: &Value, indent: usize, out: &mut String) {
    let pad = |n: usize| "  ".repeat(n);
    match value {
        Value::Object(map) if !map.is_empty() => {
            out.push_str("{\n");
            for (i, (k, v)) in map.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                out.push_str(&Value::String(k.clone()).to_string());
                out.push_str(": ");
                json_pretty(v, indent + 1, out);
                out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push('}');
        }
        Value::Array(items) if !is_leaf(value) => {
            out.push_str("[\n");
            for (i, v) in items.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                json_pretty(v, indent + 1, out);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push(']');
        }
        leaf => out.push_str(&leaf.to_string()),
    }
}

// `path: value` per leaf, nested keys joined by '.', array elements as [i].
fn text_lines(value: &Value, path: &str, out: &mut String) {
    if is_leaf(value) {
        let shown = match value {
            Value::String(s) => s.clone(),
            other => other.to_string(),
        };
        if path.is_empty() {
            out.push_str(&shown);
        } else {
            out.push_str(path);
            out.push_str(": ");
            out.push_str(&shown);
        }
        out.push('\n');
        return;
    }
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                let p = if path.is_empty() {
                    k.clone()
                } else {
                    format!("{path}.{k}")
                };
                text_lines(v, &p, out);
            }
        }
        Value::Array(items) => {
            for (i, v) in items.iter().enumerate() {
                text_lines(v, &format!("{path}[{i}]"), out);
            }
        }
        _ => unreachable!("leaves handled above"),
    }
}
