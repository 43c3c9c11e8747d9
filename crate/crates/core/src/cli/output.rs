//! Flat output records in JSON or CSV, and the validator that re-reads them.
//!
//! Every record carries `schema_version = "1"` and a `kind`. Floats are written
//! as `{:.16e}` (17 significant digits) in both formats, so the numeric text is
//! identical between a JSON and a CSV file of the same run.
//!
//! Column order per kind is fixed; see [`columns`].

use std::collections::BTreeMap;
use std::io::Write;

use serde_json::Value as Json;

pub const SCHEMA_VERSION: &str = "1";

/// Columns that hold text rather than numbers.
const TEXT_COLUMNS: [&str; 5] = ["schema_version", "kind", "init", "law", "scaling"];

#[derive(Debug, Clone, PartialEq)]
pub enum Field {
    Text(String),
    Int(i64),
    Float(f64),
    Null,
}

impl Field {
    fn render(&self) -> String {
        match self {
            Field::Text(s) => s.clone(),
            Field::Int(v) => v.to_string(),
            Field::Float(v) if v.is_finite() => format!("{v:.16e}"),
            Field::Float(_) | Field::Null => String::new(),
        }
    }

    fn render_json(&self) -> String {
        match self {
            Field::Text(s) => Json::String(s.clone()).to_string(),
            Field::Float(v) if !v.is_finite() => "null".into(),
            Field::Null => "null".into(),
            other => other.render(),
        }
    }
}

impl From<f64> for Field {
    fn from(v: f64) -> Self {
        Field::Float(v)
    }
}

impl From<Option<f64>> for Field {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Field::Null, Field::Float)
    }
}

impl From<usize> for Field {
    fn from(v: usize) -> Self {
        Field::Int(v as i64)
    }
}

impl From<u64> for Field {
    fn from(v: u64) -> Self {
        Field::Int(v as i64)
    }
}

impl From<&str> for Field {
    fn from(v: &str) -> Self {
        Field::Text(v.to_string())
    }
}

/// One flat output row, keys in column order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Record {
    fields: Vec<(&'static str, Field)>,
}

impl Record {
    pub fn new(kind: &str) -> Self {
        Self::default()
            .with("schema_version", SCHEMA_VERSION)
            .with("kind", kind)
    }

    pub fn with(mut self, key: &'static str, value: impl Into<Field>) -> Self {
        self.fields.push((key, value.into()));
        self
    }

    pub fn keys(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.fields.iter().map(|(k, _)| *k)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

pub fn write_records<W: Write + ?Sized>(out: &mut W, records: &[Record], format: Format) -> std::io::Result<()> {
    match format {
        Format::Json => {
            out.write_all(b"[")?;
            for (i, rec) in records.iter().enumerate() {
                out.write_all(if i == 0 { b"\n  {" } else { b",\n  {" })?;
                for (j, (k, v)) in rec.fields.iter().enumerate() {
                    if j > 0 {
                        out.write_all(b", ")?;
                    }
                    write!(out, "\"{k}\": {}", v.render_json())?;
                }
                out.write_all(b"}")?;
            }
            out.write_all(b"\n]\n")
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            if let Some(first) = records.first() {
                w.write_record(first.keys())?;
            }
            for rec in records {
                w.write_record(rec.fields.iter().map(|(_, v)| v.render()))?;
            }
            w.flush()
        }
    }
}

/// Fixed column order per record kind. Trailing optional columns are listed
/// separately.
pub fn columns(kind: &str) -> Option<(&'static [&'static str], &'static [&'static str])> {
    Some(match kind {
        "simulate" => (
            &[
                "schema_version",
                "kind",
                "a",
                "b",
                "n",
                "seed",
                "init",
                "index",
                "letter",
            ],
            &["count1", "count2", "s", "r1", "r2"],
        ),
        "laws" => (
            &[
                "schema_version",
                "kind",
                "a",
                "b",
                "law",
                "centering_rate",
                "scaling",
                "scale",
                "variance",
                "y",
                "density",
                "cdf",
            ],
            &[],
        ),
        "li-law" => (
            &[
                "schema_version",
                "kind",
                "a",
                "b",
                "n",
                "trials",
                "seed",
                "trial",
                "li",
                "centering",
                "scaled",
            ],
            &[],
        ),
        "shape-joint" => (
            &[
                "schema_version",
                "kind",
                "a",
                "b",
                "n",
                "trials",
                "seed",
                "trial",
                "r1",
                "r2",
                "scaled1",
                "scaled2",
            ],
            &[],
        ),
        "moment-check" => (
            &[
                "schema_version",
                "kind",
                "a",
                "b",
                "n",
                "trials",
                "seed",
                "k",
                "mc_mean",
                "exact_mean",
                "mean_se",
                "mc_var",
                "exact_var",
                "var_se",
            ],
            &[],
        ),
        "drift-vanish" => (
            &[
                "schema_version",
                "kind",
                "a",
                "b",
                "n",
                "trials",
                "seed",
                "z",
                "c_n",
                "exceedance",
                "se",
                "bound",
            ],
            &[],
        ),
        _ => return None,
    })
}

/// A parsed cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(String),
    Null,
}

pub type Row = BTreeMap<String, Cell>;

/// Parses a JSON or CSV output file (detected from the first non-blank byte).
pub fn parse_records(text: &str) -> Result<Vec<Row>, String> {
    if text.trim_start().starts_with('[') {
        parse_json(text)
    } else {
        parse_csv(text)
    }
}

fn parse_json(text: &str) -> Result<Vec<Row>, String> {
    let value: Json = serde_json::from_str(text).map_err(|e| format!("invalid JSON: {e}"))?;
    let items = value.as_array().ok_or("top level is not an array")?;
    items
        .iter()
        .enumerate()
        .map(|(i, item)| {
            let obj = item.as_object().ok_or(format!("record {i} is not an object"))?;
            obj.iter()
                .map(|(k, v)| {
                    let cell = match v {
                        Json::Null => Cell::Null,
                        Json::String(s) => Cell::Text(s.clone()),
                        Json::Number(n) => Cell::Num(n.as_f64().ok_or(format!("record {i}: bad number in {k}"))?),
                        other => return Err(format!("record {i}: nested value {other} in {k}")),
                    };
                    Ok((k.clone(), cell))
                })
                .collect()
        })
        .collect()
}

fn parse_csv(text: &str) -> Result<Vec<Row>, String> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| format!("invalid CSV header: {e}"))?
        .clone();
    reader
        .records()
        .enumerate()
        .map(|(i, rec)| {
            let rec = rec.map_err(|e| format!("invalid CSV row {i}: {e}"))?;
            headers
                .iter()
                .zip(rec.iter())
                .map(|(k, v)| {
                    let cell = if v.is_empty() {
                        Cell::Null
                    } else if TEXT_COLUMNS.contains(&k) {
                        Cell::Text(v.to_string())
                    } else {
                        Cell::Num(v.parse().map_err(|_| format!("row {i}: {k} = {v:?} is not a number"))?)
                    };
                    Ok((k.to_string(), cell))
                })
                .collect()
        })
        .collect()
}

fn num(row: &Row, key: &str) -> Result<f64, String> {
    match row.get(key) {
        Some(Cell::Num(v)) if v.is_finite() => Ok(*v),
        other => Err(format!("{key}: expected a finite number, found {other:?}")),
    }
}

fn opt_num(row: &Row, key: &str) -> Result<Option<f64>, String> {
    match row.get(key) {
        None | Some(Cell::Null) => Ok(None),
        _ => num(row, key).map(Some),
    }
}

/// Re-checks the schema and the per-kind invariants of parsed records.
/// Returns the number of records on success.
pub fn validate_rows(rows: &[Row]) -> Result<usize, String> {
    for (i, row) in rows.iter().enumerate() {
        validate_row(row).map_err(|e| format!("record {i}: {e}"))?;
    }
    Ok(rows.len())
}

fn validate_row(row: &Row) -> Result<(), String> {
    match row.get("schema_version") {
        Some(Cell::Text(v)) if v == SCHEMA_VERSION => {}
        other => return Err(format!("schema_version must be \"{SCHEMA_VERSION}\", found {other:?}")),
    }
    let kind = match row.get("kind") {
        Some(Cell::Text(k)) => k.as_str(),
        other => return Err(format!("missing kind, found {other:?}")),
    };
    let (required, optional) = columns(kind).ok_or(format!("unknown kind {kind:?}"))?;
    for key in required {
        if !row.contains_key(*key) {
            return Err(format!("missing column {key}"));
        }
    }
    if let Some(extra) = row
        .keys()
        .find(|k| !required.contains(&k.as_str()) && !optional.contains(&k.as_str()))
    {
        return Err(format!("unexpected column {extra}"));
    }
    for key in ["a", "b"] {
        let p = num(row, key)?;
        if !(0.0..=1.0).contains(&p) {
            return Err(format!("{key} = {p} outside [0, 1]"));
        }
    }
    let is_int = |v: f64| v.fract() == 0.0 && v >= 0.0;
    match kind {
        "simulate" => {
            let letter = num(row, "letter")?;
            if letter != 1.0 && letter != 2.0 {
                return Err(format!("letter {letter} not in {{1, 2}}"));
            }
            if let (Some(c1), Some(c2), Some(s)) =
                (opt_num(row, "count1")?, opt_num(row, "count2")?, opt_num(row, "s")?)
            {
                if c1 + c2 != num(row, "index")? || s != c1 - c2 {
                    return Err("walk columns inconsistent".into());
                }
            }
            if let (Some(r1), Some(r2)) = (opt_num(row, "r1")?, opt_num(row, "r2")?) {
                if r1 + r2 != num(row, "n")? || r2 > r1 {
                    return Err("shape columns inconsistent".into());
                }
            }
        }
        "laws" => {
            if let Some(c) = opt_num(row, "cdf")? {
                if !(0.0..=1.0).contains(&c) {
                    return Err(format!("cdf {c} outside [0, 1]"));
                }
            }
            if let Some(d) = opt_num(row, "density")? {
                if d < 0.0 {
                    return Err(format!("negative density {d}"));
                }
            }
        }
        "li-law" => {
            let (li, n) = (num(row, "li")?, num(row, "n")?);
            if !is_int(li) || li > n {
                return Err(format!("li = {li} not an integer in 0..=n"));
            }
            let want = (li - num(row, "centering")?) / n.sqrt();
            let got = num(row, "scaled")?;
            if (got - want).abs() > 1e-12 * want.abs().max(1.0) {
                return Err(format!("scaled = {got}, recomputed {want}"));
            }
        }
        "shape-joint" => {
            let (r1, r2, n) = (num(row, "r1")?, num(row, "r2")?, num(row, "n")?);
            if r1 + r2 != n || r2 > r1 {
                return Err(format!("rows ({r1}, {r2}) do not form a shape of size {n}"));
            }
            if num(row, "scaled1")? + num(row, "scaled2")? != 0.0 {
                return Err("scaled rows do not cancel".into());
            }
        }
        "moment-check" => {
            if num(row, "mean_se")? < 0.0 || num(row, "var_se")? < 0.0 || num(row, "exact_var")? < -1e-12 {
                return Err("negative standard error or variance".into());
            }
        }
        "drift-vanish" => {
            let p = num(row, "exceedance")?;
            if !(0.0..=1.0).contains(&p) || num(row, "se")? < 0.0 {
                return Err(format!("exceedance {p} is not a probability"));
            }
            opt_num(row, "bound")?;
        }
        _ => unreachable!(),
    }
    Ok(())
}
