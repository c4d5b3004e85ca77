//! Table writer and reader for CLI output.
//!
//! CSV files start with `#`-prefixed header lines (`# key: value`), then a
//! column line and comma-separated rows. JSON output is one object holding
//! the same header, the summary keys and the rows. Floats are written with
//! 15 significant digits.

use serde::Serialize;
use serde_json::{Map, Value};

use crate::{Error, Result, VERSION};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Bool(bool),
    Text(String),
    Empty,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_owned())
    }
}

/// `x` in scientific notation with 15 significant digits.
pub fn format_num(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{x:.14e}")
    }
}

/// `x` rounded to 15 significant digits as a JSON number (`null` if not finite).
pub fn json_num(x: f64) -> Value {
    if x.is_finite() {
        Value::from(format_num(x).parse::<f64>().unwrap_or(x))
    } else {
        Value::Null
    }
}

/// Rounds every float inside `v` to 15 significant digits.
pub fn round_json(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => json_num(n.as_f64().unwrap_or(f64::NAN)),
        Value::Array(items) => Value::Array(items.into_iter().map(round_json).collect()),
        Value::Object(map) => {
            Value::Object(map.into_iter().map(|(k, v)| (k, round_json(v))).collect())
        }
        other => other,
    }
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(x) => format_num(*x),
            Cell::Int(i) => i.to_string(),
            Cell::Bool(b) => b.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(x) => json_num(*x),
            Cell::Int(i) => Value::from(*i),
            Cell::Bool(b) => Value::from(*b),
            Cell::Text(s) => Value::from(s.as_str()),
            Cell::Empty => Value::Null,
        }
    }
}

/// Everything one command run emits.
#[derive(Debug, Clone)]
pub struct Report {
    pub command: String,
    pub config: Value,
    pub tolerances: Vec<(String, f64)>,
    pub summary: Vec<(String, Value)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Report {
    pub fn new(command: &str, config: Value) -> Self {
        Report {
            command: command.into(),
            config: round_json(config),
            tolerances: Vec::new(),
            summary: Vec::new(),
            columns: Vec::new(),
            rows: Vec::new(),
        }
    }

    pub fn tolerance(mut self, name: &str, value: f64) -> Self {
        self.tolerances.push((name.into(), value));
        self
    }

    pub fn summary(&mut self, key: &str, value: impl Into<Value>) {
        self.summary.push((key.into(), round_json(value.into())));
    }

    pub fn columns<S: AsRef<str>>(&mut self, names: &[S]) {
        self.columns = names.iter().map(|s| s.as_ref().to_owned()).collect();
    }

    pub fn push_row(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    fn tolerance_object(&self) -> Value {
        Value::Object(
            self.tolerances
                .iter()
                .map(|(k, v)| (k.clone(), json_num(*v)))
                .collect(),
        )
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.render_csv(),
            Format::Json => self.render_json(),
        }
    }

    fn render_csv(&self) -> String {
        let mut out = String::new();
        let mut line = |k: &str, v: String| out.push_str(&format!("# {k}: {v}\n"));
        line("program", format!("hypstab {VERSION}"));
        line("command", self.command.clone());
        line("config", self.config.to_string());
        line("tolerances", self.tolerance_object().to_string());
        for (k, v) in &self.summary {
            line(k, v.to_string());
        }
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::csv).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    fn render_json(&self) -> String {
        let mut header = Map::new();
        header.insert("program".into(), "hypstab".into());
        header.insert("version".into(), VERSION.into());
        header.insert("command".into(), self.command.clone().into());
        header.insert("config".into(), self.config.clone());
        header.insert("tolerances".into(), self.tolerance_object());
        let mut obj = Map::new();
        obj.insert("header".into(), Value::Object(header));
        for (k, v) in &self.summary {
            obj.insert(k.clone(), v.clone());
        }
        obj.insert("columns".into(), self.columns.clone().into());
        obj.insert(
            "rows".into(),
            Value::Array(
                self.rows
                    .iter()
                    .map(|r| Value::Array(r.iter().map(Cell::json).collect()))
                    .collect(),
            ),
        );
        let mut s = serde_json::to_string_pretty(&Value::Object(obj)).unwrap_or_default();
        s.push('\n');
        s
    }
}

/// Parsed CSV output.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn parse_csv(text: &str) -> Result<Table> {
        let mut header = Vec::new();
        let mut lines = text.lines().peekable();
        while let Some(line) = lines.next_if(|l| l.starts_with('#')) {
            let body = line.trim_start_matches('#').trim_start();
            let (k, v) = body
                .split_once(": ")
                .ok_or_else(|| Error::InvalidInput(format!("malformed header line '{line}'")))?;
            header.push((k.to_owned(), v.to_owned()));
        }
        let columns: Vec<String> = lines
            .next()
            .ok_or_else(|| Error::InvalidInput("missing column line".into()))?
            .split(',')
            .map(str::to_owned)
            .collect();
        let mut rows = Vec::new();
        for line in lines {
            let row: Vec<String> = line.split(',').map(str::to_owned).collect();
            if row.len() != columns.len() {
                return Err(Error::InvalidInput(format!(
                    "row has {} fields, expected {}",
                    row.len(),
                    columns.len()
                )));
            }
            rows.push(row);
        }
        Ok(Table {
            header,
            columns,
            rows,
        })
    }

    pub fn header_value(&self, key: &str) -> Option<&str> {
        self.header
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn column_index(&self, name: &str) -> Result<usize> {
        self.columns
            .iter()
            .position(|c| c == name)
            .ok_or_else(|| Error::InvalidInput(format!("no column '{name}'")))
    }

    /// Column parsed as floats; empty cells are rejected.
    pub fn numbers(&self, name: &str) -> Result<Vec<f64>> {
        let i = self.column_index(name)?;
        self.rows
            .iter()
            .map(|r| {
                r[i].parse::<f64>().map_err(|_| {
                    Error::InvalidInput(format!("'{}' in column '{name}' is not a number", r[i]))
                })
            })
            .collect()
    }

    pub fn text(&self, name: &str) -> Result<Vec<&str>> {
        let i = self.column_index(name)?;
        Ok(self.rows.iter().map(|r| r[i].as_str()).collect())
    }
}

pub fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("malformed JSON: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn sample() -> Report {
        let mut r = Report::new("demo", json!({"a": 0.1, "n": 3})).tolerance("tol", 1e-9);
        r.summary("total", 4);
        r.summary("bracket", json!([0.1 + 0.2, 1.0 / 3.0]));
        r.columns(&["x", "label", "flag", "y"]);
        r.push_row(vec![
            Cell::Num(std::f64::consts::PI),
            "p".into(),
            true.into(),
            Cell::Empty,
        ]);
        r.push_row(vec![
            Cell::Num(-1.0e-300),
            "q".into(),
            false.into(),
            Cell::Int(7),
        ]);
        r
    }

    #[test]
    fn number_formatting() {
        assert_eq!(format_num(0.5), "5.00000000000000e-1");
        assert_eq!(format_num(-1234.5), "-1.23450000000000e3");
        assert_eq!(format_num(f64::NAN), "nan");
        assert_eq!(json_num(0.1 + 0.2), json!(0.3));
        assert_eq!(json_num(f64::INFINITY), Value::Null);
        let digits = format_num(std::f64::consts::E).replace(['.', '-'], "");
        assert_eq!(digits.split('e').next().unwrap().len(), 15);
    }

    #[test]
    fn csv_round_trip() {
        let r = sample();
        let text = r.render(Format::Csv);
        let t = Table::parse_csv(&text).unwrap();
        assert_eq!(t.header_value("command"), Some("demo"));
        assert_eq!(
            t.header_value("program"),
            Some(format!("hypstab {VERSION}").as_str())
        );
        assert_eq!(t.header_value("total"), Some("4"));
        assert_eq!(t.columns, ["x", "label", "flag", "y"]);
        let x = t.numbers("x").unwrap();
        assert!((x[0] - std::f64::consts::PI).abs() < 1e-14);
        assert_eq!(x[1], -1.0e-300);
        assert_eq!(t.text("label").unwrap(), ["p", "q"]);
        assert_eq!(t.text("y").unwrap(), ["", "7"]);
        assert!(t.numbers("y").is_err());
        assert!(t.column_index("missing").is_err());
        let config = parse_json(t.header_value("config").unwrap()).unwrap();
        assert_eq!(config["n"], 3);
    }

    #[test]
    fn json_round_trip() {
        let v = parse_json(&sample().render(Format::Json)).unwrap();
        assert_eq!(v["header"]["command"], "demo");
        assert_eq!(v["header"]["tolerances"]["tol"], 1e-9);
        assert_eq!(v["total"], 4);
        assert_eq!(v["bracket"][0], 0.3);
        assert_eq!(v["rows"][0][2], true);
        assert_eq!(v["rows"][0][3], Value::Null);
        assert_eq!(v["rows"][1][0], -1.0e-300);
    }

    #[test]
    fn rejects_malformed_csv() {
        assert!(Table::parse_csv("# broken\nx\n").is_err());
        assert!(Table::parse_csv("x,y\n1\n").is_err());
        assert!(Table::parse_csv("").is_err());
        assert!(parse_json("{").is_err());
    }
}
