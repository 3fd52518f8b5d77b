//! Result tables and their CSV / JSON emitters.

use std::io::Write;

use num_complex::Complex64;
use polyharmonic::Error;
use serde::Serialize;
use serde_json::value::RawValue;

use crate::config::RunConfig;
use crate::CliError;

/// Column names, shared by both emitters.
pub const COLUMNS: [&str; 10] = [
    "kind",
    "inputs",
    "value_re",
    "value_im",
    "reference_re",
    "reference_im",
    "abs_error",
    "bound",
    "status",
    "text",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Ok,
    /// Error exceeds bound.
    Fail,
    /// Numerical failure other than a singularity.
    Error,
    Singular,
    /// Invalid per-row input.
    Rejected,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Fail => "fail",
            Status::Error => "error",
            Status::Singular => "singular",
            Status::Rejected => "rejected",
        }
    }
}

/// Status for a library error attached to a row.
pub fn classify(e: &Error) -> Status {
    match e {
        Error::Singular(_) => Status::Singular,
        Error::InvalidDimension(_)
        | Error::DimensionMismatch { .. }
        | Error::NonFinite(_)
        | Error::InvalidOrder
        | Error::NotHomogeneous
        | Error::Parse { .. }
        | Error::InvalidLambda(_)
        | Error::GeneratingRadius(_)
        | Error::OffSphere { .. }
        | Error::NotInterior { .. }
        | Error::OutsideLieDomain(_)
        | Error::Resolution(_)
        | Error::UnsupportedDimension(_)
        | Error::InvalidArgument(_) => Status::Rejected,
        _ => Status::Error,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Row {
    pub kind: String,
    pub inputs: String,
    pub value: Option<Complex64>,
    pub reference: Option<Complex64>,
    pub abs_error: Option<f64>,
    pub bound: Option<f64>,
    pub status: Status,
    pub text: String,
}

impl Row {
    pub fn new(kind: &str, inputs: impl Into<String>) -> Self {
        Self {
            kind: kind.into(),
            inputs: inputs.into(),
            value: None,
            reference: None,
            abs_error: None,
            bound: None,
            status: Status::Ok,
            text: String::new(),
        }
    }

    pub fn failed(kind: &str, inputs: impl Into<String>, e: &Error) -> Self {
        let mut r = Self::new(kind, inputs);
        r.status = classify(e);
        r.text = e.to_string();
        r
    }

    pub fn value(mut self, v: Complex64) -> Self {
        self.value = Some(v);
        self
    }

    pub fn reference(mut self, r: Complex64) -> Self {
        self.reference = Some(r);
        self
    }

    /// Sets error and bound; status becomes `fail` unless `error <= bound`.
    pub fn checked(mut self, error: f64, bound: f64) -> Self {
        self.abs_error = Some(error);
        self.bound = Some(bound);
        if !(error <= bound) {
            self.status = Status::Fail;
        }
        self
    }

    pub fn text(mut self, t: impl Into<String>) -> Self {
        self.text = t.into();
        self
    }

    /// Cells as text; `None` is an empty cell. Numbers carry 17 significant digits.
    fn cells(&self) -> [Cell; 10] {
        let num = |x: Option<f64>| x.map_or(Cell::Empty, Cell::Number);
        [
            Cell::Text(self.kind.clone()),
            Cell::Text(self.inputs.clone()),
            num(self.value.map(|v| v.re)),
            num(self.value.map(|v| v.im)),
            num(self.reference.map(|v| v.re)),
            num(self.reference.map(|v| v.im)),
            num(self.abs_error),
            num(self.bound),
            Cell::Text(self.status.name().into()),
            Cell::Text(self.text.clone()),
        ]
    }
}

enum Cell {
    Empty,
    Number(f64),
    Text(String),
}

/// `x` with 17 significant digits; `inf`, `-inf`, `nan` for non-finite values.
pub fn format_number(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{x:.16e}")
    }
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Empty => String::new(),
            Cell::Number(x) => format_number(*x),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Box<RawValue> {
        let text = match self {
            Cell::Empty => "null".to_string(),
            Cell::Number(x) if x.is_finite() => format_number(*x),
            Cell::Number(x) => serde_json::to_string(&format_number(*x)).expect("string"),
            Cell::Text(s) => serde_json::to_string(s).expect("string"),
        };
        RawValue::from_string(text).expect("valid JSON cell")
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Metadata {
    pub command: String,
    pub cli_version: String,
    pub library_version: String,
    pub config_hash: String,
    pub seed: u64,
    pub config: Box<RawValue>,
    pub rule: Option<Box<RawValue>>,
}

impl Metadata {
    pub fn new(command: &str, cfg: &RunConfig, rule_json: Option<String>) -> Self {
        Self {
            command: command.into(),
            cli_version: env!("CARGO_PKG_VERSION").into(),
            library_version: polyharmonic::VERSION.into(),
            config_hash: cfg.hash(),
            seed: cfg.seed(),
            config: RawValue::from_string(cfg.canonical_json()).expect("config JSON"),
            rule: rule_json.and_then(|r| RawValue::from_string(r).ok()),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ResultTable {
    pub metadata: Metadata,
    pub rows: Vec<Row>,
}

#[derive(Serialize)]
struct JsonTable<'a> {
    metadata: &'a Metadata,
    columns: &'a [&'a str],
    rows: Vec<Vec<Box<RawValue>>>,
}

impl ResultTable {
    /// 0 when every row is ok; otherwise 2 for rejected input, 3 for a
    /// singularity, 1 for tolerance or other numerical failures.
    pub fn exit_code(&self) -> u8 {
        let worst = |s: Status| self.rows.iter().any(|r| r.status == s);
        if worst(Status::Rejected) {
            2
        } else if worst(Status::Singular) {
            3
        } else if worst(Status::Fail) || worst(Status::Error) {
            1
        } else {
            0
        }
    }

    pub fn write_json(&self, out: &mut dyn Write) -> Result<(), CliError> {
        let table = JsonTable {
            metadata: &self.metadata,
            columns: &COLUMNS,
            rows: self.rows.iter().map(|r| r.cells().iter().map(Cell::json).collect()).collect(),
        };
        serde_json::to_writer_pretty(&mut *out, &table).map_err(|e| CliError::Io(e.into()))?;
        writeln!(out)?;
        Ok(())
    }

    /// Metadata as `# key: value` comment lines, then a header and the rows.
    pub fn write_csv(&self, out: &mut dyn Write) -> Result<(), CliError> {
        let m = &self.metadata;
        writeln!(out, "# command: {}", m.command)?;
        writeln!(out, "# cli_version: {}", m.cli_version)?;
        writeln!(out, "# library_version: {}", m.library_version)?;
        writeln!(out, "# config_hash: {}", m.config_hash)?;
        writeln!(out, "# seed: {}", m.seed)?;
        writeln!(out, "# config: {}", m.config.get())?;
        if let Some(rule) = &m.rule {
            writeln!(out, "# rule: {}", rule.get())?;
        }
        let mut w = csv::Writer::from_writer(out);
        w.write_record(COLUMNS).map_err(csv_err)?;
        for r in &self.rows {
            w.write_record(r.cells().iter().map(Cell::csv)).map_err(csv_err)?;
        }
        w.flush()?;
        Ok(())
    }
}

fn csv_err(e: csv::Error) -> CliError {
    CliError::Io(std::io::Error::other(e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(rows: Vec<Row>) -> ResultTable {
        ResultTable {
            metadata: Metadata::new("test", &RunConfig::default(), None),
            rows,
        }
    }

    #[test]
    fn seventeen_digits() {
        assert_eq!(format_number(3.0), "3.0000000000000000e0");
        assert_eq!(format_number(-0.1), "-1.0000000000000001e-1");
        assert_eq!(format_number(f64::INFINITY), "inf");
        let x = 0.1 + 0.2;
        assert_eq!(format_number(x).parse::<f64>().unwrap(), x);
    }

    #[test]
    fn exit_codes() {
        let ok = Row::new("a", "").checked(1e-12, 1e-10);
        assert_eq!(table(vec![ok.clone()]).exit_code(), 0);
        let fail = Row::new("a", "").checked(1e-9, 1e-10);
        assert_eq!(fail.status, Status::Fail);
        assert_eq!(table(vec![ok.clone(), fail.clone()]).exit_code(), 1);
        let sing = Row::failed("a", "", &Error::Singular(0.0));
        assert_eq!(table(vec![fail.clone(), sing.clone()]).exit_code(), 3);
        let rej = Row::failed("a", "", &Error::InvalidOrder);
        assert_eq!(table(vec![sing, rej]).exit_code(), 2);
        assert_eq!(Row::new("a", "").checked(f64::NAN, 1.0).status, Status::Fail);
    }

    #[test]
    fn emitters_agree() {
        let t = table(vec![
            Row::new("k", "m=1, route=X").value(Complex64::new(1.5, -2.0)).reference(Complex64::new(1.5, 0.0)).checked(2.0, 3.0),
            Row::new("k", "quote \"here\"").text("a,b").checked(1.0, f64::INFINITY),
        ]);
        let mut csv_out = Vec::new();
        t.write_csv(&mut csv_out).unwrap();
        let mut json_out = Vec::new();
        t.write_json(&mut json_out).unwrap();
        let mut reader = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(&csv_out[..]);
        let csv_rows: Vec<Vec<String>> = reader.records().map(|r| r.unwrap().iter().map(String::from).collect()).collect();
        let v: serde_json::Value = serde_json::from_slice(&json_out).unwrap();
        let json_rows: Vec<Vec<String>> = v["rows"]
            .as_array()
            .unwrap()
            .iter()
            .map(|r| {
                r.as_array()
                    .unwrap()
                    .iter()
                    .map(|c| match c {
                        serde_json::Value::Null => String::new(),
                        serde_json::Value::String(s) => s.clone(),
                        n => format_number(n.as_f64().unwrap()),
                    })
                    .collect()
            })
            .collect();
        assert_eq!(csv_rows, json_rows);
        assert_eq!(v["metadata"]["config"]["n"], 2);
    }
}
