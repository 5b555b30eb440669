//! Flat result rows and their CSV / JSON serialisation.
//!
//! Every number is written with 12 significant digits (`{:.11e}`); non-finite
//! values are written as `inf`, `-inf` or `NaN`, which parse back unchanged.

use std::fs;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use serde::Serialize;

use crate::{Error, Result};

pub const COLUMNS: [&str; 8] = ["check_id", "family", "params", "scale", "lhs", "rhs", "ratio", "verdict"];

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub check_id: String,
    pub family: String,
    pub params: String,
    pub scale: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
    pub verdict: String,
}

impl Row {
    /// A row that carries only a verdict.
    pub fn summary(check_id: impl Into<String>, family: &str, params: &str, verdict: impl Into<String>) -> Self {
        Self {
            check_id: check_id.into(),
            family: family.to_string(),
            params: params.to_string(),
            scale: f64::NAN,
            lhs: f64::NAN,
            rhs: f64::NAN,
            ratio: f64::NAN,
            verdict: verdict.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(Error::param("format", format!("expected csv or json, got {other:?}"))),
        }
    }
}

pub fn format_number(x: f64) -> String {
    if x.is_nan() {
        "NaN".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{x:.11e}")
    }
}

fn parse_number(s: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| Error::InvalidSequence(format!("not a number: {s:?}")))
}

pub fn to_csv(rows: &[Row]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::InvalidSequence(format!("csv: {e}"));
    w.write_record(COLUMNS).map_err(io)?;
    for r in rows {
        w.write_record([
            r.check_id.as_str(),
            r.family.as_str(),
            r.params.as_str(),
            &format_number(r.scale),
            &format_number(r.lhs),
            &format_number(r.rhs),
            &format_number(r.ratio),
            r.verdict.as_str(),
        ])
        .map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::InvalidSequence(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn parse_csv(text: &str) -> Result<Vec<Row>> {
    let mut rd = csv::Reader::from_reader(text.as_bytes());
    let io = |e: csv::Error| Error::InvalidSequence(format!("csv: {e}"));
    let header = rd.headers().map_err(io)?.clone();
    if header.iter().ne(COLUMNS) {
        return Err(Error::InvalidSequence(format!("unexpected header {header:?}")));
    }
    let mut rows = Vec::new();
    for rec in rd.records() {
        let rec = rec.map_err(io)?;
        rows.push(Row {
            check_id: rec[0].to_string(),
            family: rec[1].to_string(),
            params: rec[2].to_string(),
            scale: parse_number(&rec[3])?,
            lhs: parse_number(&rec[4])?,
            rhs: parse_number(&rec[5])?,
            ratio: parse_number(&rec[6])?,
            verdict: rec[7].to_string(),
        });
    }
    Ok(rows)
}

#[derive(Serialize)]
struct JsonRow<'a> {
    check_id: &'a str,
    family: &'a str,
    params: &'a str,
    scale: serde_json::Value,
    lhs: serde_json::Value,
    rhs: serde_json::Value,
    ratio: serde_json::Value,
    verdict: &'a str,
}

fn json_number(x: f64) -> serde_json::Value {
    let s = format_number(x);
    match s.parse::<f64>().ok().and_then(serde_json::Number::from_f64) {
        Some(n) => serde_json::Value::Number(n),
        None => serde_json::Value::String(s),
    }
}

pub fn to_json(rows: &[Row]) -> String {
    let out: Vec<JsonRow> = rows
        .iter()
        .map(|r| JsonRow {
            check_id: &r.check_id,
            family: &r.family,
            params: &r.params,
            scale: json_number(r.scale),
            lhs: json_number(r.lhs),
            rhs: json_number(r.rhs),
            ratio: json_number(r.ratio),
            verdict: &r.verdict,
        })
        .collect();
    let mut s = serde_json::to_string_pretty(&out).expect("rows serialise");
    s.push('\n');
    s
}

pub fn render(rows: &[Row], format: Format) -> Result<String> {
    match format {
        Format::Csv => to_csv(rows),
        Format::Json => Ok(to_json(rows)),
    }
}

/// Write the report to `path`, or to stdout when `path` is `None`.
pub fn emit_report(rows: &[Row], format: Format, path: Option<&Path>) -> Result<()> {
    let text = render(rows, format)?;
    match path {
        Some(p) => fs::write(p, text).map_err(|source| Error::Io {
            path: p.to_path_buf(),
            source,
        }),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).map_err(|source| Error::Io {
                path: "<stdout>".into(),
                source,
            })
        }
    }
}
