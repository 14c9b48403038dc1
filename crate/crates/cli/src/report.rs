//! JSON report assembly and the plain-text rendering.

use serde_json::{json, Map, Value};
use subriem::calculus::Matrix;
use subriem::symexpr::{Chart, Expr, SamplingPlan, ZeroVerdict};

pub const ENGINE: &str = "subriem";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Result of one command: whether every verdict passed, and its payload.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub passed: bool,
    pub results: Value,
}

pub fn text(e: &Expr, chart: &Chart) -> Value {
    Value::String(e.simplify().to_text(chart))
}

pub fn matrix(m: &Matrix, chart: &Chart) -> Value {
    Value::Array(
        m.iter()
            .map(|row| Value::Array(row.iter().map(|e| text(e, chart)).collect()))
            .collect(),
    )
}

pub fn verdict(v: &ZeroVerdict) -> Value {
    serde_json::to_value(v).expect("verdicts serialize")
}

/// Worst verdict of a collection plus the indices of failing entries.
pub fn verdict_summary<'a, I>(items: I) -> Value
where
    I: IntoIterator<Item = (Vec<usize>, &'a ZeroVerdict)>,
{
    let items: Vec<_> = items.into_iter().collect();
    let worst = ZeroVerdict::combine(items.iter().map(|(_, v)| *v));
    let failing: Vec<Value> = items
        .iter()
        .filter(|(_, v)| !v.is_zero())
        .map(|(i, v)| json!({"index": i, "verdict": verdict(v)}))
        .collect();
    json!({"checked": items.len(), "worst": verdict(&worst), "failing": failing})
}

pub fn plan(p: SamplingPlan) -> Value {
    json!({"samples": p.samples, "tolerance": p.tolerance, "seed": p.seed})
}

/// Top-level envelope; keys come out sorted because `serde_json::Map` is ordered.
pub fn envelope(
    command: &str,
    p: SamplingPlan,
    structure: Option<Value>,
    body: Map<String, Value>,
) -> Value {
    let mut m = Map::new();
    m.insert("command".into(), json!(command));
    m.insert("engine".into(), json!({"name": ENGINE, "version": VERSION}));
    m.insert("plan".into(), plan(p));
    if let Some(s) = structure {
        m.insert("structure".into(), s);
    }
    m.extend(body);
    Value::Object(m)
}

pub fn error_report(kind: &str, message: &str) -> Value {
    json!({
        "engine": {"name": ENGINE, "version": VERSION},
        "error": {"kind": kind, "message": message},
        "passed": false,
    })
}

fn is_verdict(m: &Map<String, Value>) -> bool {
    m.contains_key("kind") && m.contains_key("max_abs") && m.contains_key("samples_used")
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

fn verdict_line(m: &Map<String, Value>) -> String {
    let kind = m["kind"].as_str().unwrap_or("?");
    let mut s = kind.to_string();
    if kind != "symbolic_zero" {
        s.push_str(&format!(
            "  max|·|={}  samples={}",
            scalar(&m["max_abs"]),
            scalar(&m["samples_used"])
        ));
    }
    if let Some(w) = m.get("witness") {
        s.push_str(&format!(
            "  witness {} -> {}",
            inline(&w["point"]).unwrap_or_default(),
            scalar(&w["value"])
        ));
    }
    s
}

/// `{"index": [...], "value": x}` and `{"pair": [...], "value": x}` table entries.
fn entry_line(m: &Map<String, Value>) -> Option<String> {
    if m.len() != 2 {
        return None;
    }
    let key = m.get("index").or_else(|| m.get("pair"))?;
    let value = m.get("value")?;
    Some(format!("{}  {}", inline(key)?, inline(value)?))
}

fn inline(v: &Value) -> Option<String> {
    match v {
        Value::Object(m) if is_verdict(m) => Some(verdict_line(m)),
        Value::Object(m) if entry_line(m).is_some() => entry_line(m),
        Value::Object(m) if m.is_empty() => Some("{}".into()),
        Value::Object(_) => None,
        Value::Array(a) if a.iter().all(|x| !x.is_object() && !x.is_array()) => Some(format!(
            "[{}]",
            a.iter().map(scalar).collect::<Vec<_>>().join(", ")
        )),
        Value::Array(_) => None,
        other => Some(scalar(other)),
    }
}

/// Rows of scalars with column alignment.
fn grid(rows: &[Value]) -> Option<Vec<String>> {
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|r| match r {
            Value::Array(a) if a.iter().all(|x| !x.is_object() && !x.is_array()) => {
                Some(a.iter().map(scalar).collect())
            }
            _ => None,
        })
        .collect::<Option<_>>()?;
    let cols = cells.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|c| {
            cells
                .iter()
                .filter_map(|r| r.get(c))
                .map(|s| s.chars().count())
                .max()
                .unwrap_or(0)
        })
        .collect();
    Some(
        cells
            .iter()
            .map(|r| {
                let parts: Vec<String> = r
                    .iter()
                    .enumerate()
                    .map(|(c, s)| format!("{s:<w$}", w = widths[c]))
                    .collect();
                format!("[ {} ]", parts.join("  ").trim_end())
            })
            .collect(),
    )
}

fn render_into(v: &Value, indent: usize, out: &mut Vec<String>) {
    let pad = " ".repeat(indent);
    match v {
        Value::Object(m) => {
            let width = m.keys().map(|k| k.chars().count()).max().unwrap_or(0);
            for (k, x) in m {
                if let Some(line) = inline(x) {
                    out.push(format!("{pad}{k:<width$}  {line}"));
                } else {
                    out.push(format!("{pad}{k}:"));
                    render_into(x, indent + 2, out);
                }
            }
        }
        Value::Array(a) => {
            if let Some(rows) = grid(a) {
                out.extend(rows.into_iter().map(|r| format!("{pad}{r}")));
                return;
            }
            for (i, x) in a.iter().enumerate() {
                match inline(x) {
                    Some(line) => out.push(format!("{pad}- {line}")),
                    None => {
                        out.push(format!("{pad}- [{i}]"));
                        render_into(x, indent + 2, out);
                    }
                }
            }
        }
        other => out.push(format!("{pad}{}", scalar(other))),
    }
}

/// Aligned plain-text view of a report.
pub fn render(v: &Value) -> String {
    let mut out = Vec::new();
    render_into(v, 0, &mut out);
    out.push(String::new());
    out.join("\n")
}

pub fn to_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}
