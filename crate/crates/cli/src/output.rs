//! Rendering of reports and tables as JSON, CSV or aligned text.

use serde::Serialize;
use serde_json::Value;

use crate::liyau::LiYauTable;
use crate::report::Report;
use crate::sweep::{SweepRow, SWEEP_HEADER};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// Shortest representation that parses back to the same `f64`.
pub fn num(v: f64) -> String {
    if v != 0.0 && (v.abs() < 1e-4 || v.abs() >= 1e16) {
        format!("{v:e}")
    } else {
        format!("{v}")
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn leaf(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::Bool(b) => b.to_string(),
        Value::Number(n) => match (n.as_u64(), n.as_i64(), n.as_f64()) {
            (Some(u), _, _) => u.to_string(),
            (_, Some(i), _) => i.to_string(),
            (_, _, Some(f)) => num(f),
            _ => n.to_string(),
        },
        Value::String(s) => s.clone(),
        _ => unreachable!("containers are flattened"),
    }
}

/// `(dotted.path, value)` for every leaf, in serialization order.
pub fn flatten(v: &Value) -> Vec<(String, String)> {
    fn walk(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
        let join = |k: &str| {
            if prefix.is_empty() {
                k.to_string()
            } else {
                format!("{prefix}.{k}")
            }
        };
        match v {
            Value::Object(map) => {
                for (k, child) in map {
                    walk(&join(k), child, out);
                }
            }
            Value::Array(items) => {
                for (i, child) in items.iter().enumerate() {
                    walk(&join(&i.to_string()), child, out);
                }
            }
            other => out.push((prefix.to_string(), leaf(other))),
        }
    }
    let mut out = Vec::new();
    walk("", v, &mut out);
    out
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

fn key_value(value: &Value, format: Format) -> String {
    let pairs = flatten(value);
    let mut out = String::new();
    match format {
        Format::Csv => {
            out.push_str("field,value\n");
            for (k, v) in pairs {
                out.push_str(&format!("{},{}\n", csv_field(&k), csv_field(&v)));
            }
        }
        _ => {
            let width = pairs.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
            for (k, v) in pairs {
                out.push_str(&format!("{k:<width$}  {v}\n"));
            }
        }
    }
    out
}

pub fn render_report(report: &Report, format: Format) -> String {
    match format {
        Format::Json => json(report),
        _ => key_value(
            &serde_json::to_value(report).expect("report types serialize"),
            format,
        ),
    }
}

pub fn render_liyau(table: &LiYauTable, format: Format) -> String {
    match format {
        Format::Json => json(table),
        Format::Csv => {
            let mut out =
                String::from("convention,x,value,reference,threshold,gap,reference_gap\n");
            for r in &table.rows {
                out.push_str(&format!(
                    "{},{},{},{},{},{},{}\n",
                    r.convention,
                    num(r.x),
                    num(r.value),
                    num(r.reference),
                    num(r.threshold),
                    num(r.gap),
                    num(r.reference_gap)
                ));
            }
            out
        }
        Format::Text => {
            let mut out = format!(
                "{:<10} {:>12} {:>14} {:>14} {:>10} {:>14}\n",
                "convention", "x", "value", "reference", "threshold", "gap"
            );
            for r in &table.rows {
                out.push_str(&format!(
                    "{:<10} {:>12.6} {:>14.9} {:>14.9} {:>10.6} {:>14.9}\n",
                    r.convention, r.x, r.value, r.reference, r.threshold, r.gap
                ));
            }
            out.push_str(&table.summary_line());
            out.push('\n');
            out
        }
    }
}

pub fn render_sweep(rows: &[SweepRow], format: Format) -> String {
    match format {
        Format::Json => json(&rows),
        Format::Csv => {
            let mut out = format!("{SWEEP_HEADER}\n");
            for r in rows {
                out.push_str(&format!(
                    "{},{},{},{},{},{},{},{},{}\n",
                    num(r.param),
                    num(r.kappa0),
                    num(r.c_star),
                    num(r.c_upper),
                    num(r.lower),
                    num(r.upper),
                    num(r.cross_ratio),
                    num(r.d_hyp),
                    r.wz_lower.map(num).unwrap_or_default()
                ));
            }
            out
        }
        Format::Text => {
            let cols: Vec<&str> = SWEEP_HEADER.split(',').collect();
            let mut out = cols
                .iter()
                .map(|c| format!("{c:>14}"))
                .collect::<Vec<_>>()
                .join(" ");
            out.push('\n');
            for r in rows {
                let vals = [
                    r.param,
                    r.kappa0,
                    r.c_star,
                    r.c_upper,
                    r.lower,
                    r.upper,
                    r.cross_ratio,
                    r.d_hyp,
                ];
                let mut line: Vec<String> = vals.iter().map(|v| format!("{v:>14.8}")).collect();
                line.push(
                    r.wz_lower
                        .map(|v| format!("{v:>14.8}"))
                        .unwrap_or_else(|| format!("{:>14}", "-")),
                );
                out.push_str(&line.join(" "));
                out.push('\n');
            }
            out
        }
    }
}

/// Whether every number in a serialized value is finite (non-finite floats
/// serialize as `null`, so any null outside an optional slot is suspect).
pub fn all_finite(v: &Value) -> bool {
    match v {
        Value::Null => false,
        Value::Number(n) => n.as_f64().is_some_and(f64::is_finite),
        Value::Array(items) => items.iter().all(all_finite),
        Value::Object(map) => map.values().all(all_finite),
        _ => true,
    }
}
