//! Result rows and their CSV / JSON-lines encodings.

use std::io::{self, Write};

use serde_json::{Map, Number, Value};

use crate::error::Error;
use crate::rate::{Method, RateResult};

pub const SCHEMA_LINE: &str = "# schema=1";

pub const COLUMNS: [&str; 16] = [
    "axis",
    "axis_value",
    "kappa",
    "mu",
    "m",
    "gamma_bar_db",
    "a_exp",
    "antennas",
    "rho_db",
    "method",
    "rate_bps_hz",
    "stderr",
    "diag_nodes",
    "diag_trials",
    "seed",
    "error",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

/// Inputs of one evaluation, in CLI units (dB).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointSpec {
    pub kappa: f64,
    pub mu: f64,
    pub m: f64,
    pub gamma_bar_db: f64,
    pub a_exp: f64,
    pub antennas: u32,
    pub rho_db: f64,
}

/// One output row: a point, a method, and either a result or an error.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub axis: &'static str,
    pub axis_value: Option<f64>,
    pub point: PointSpec,
    pub method: Method,
    pub rate: Option<f64>,
    pub stderr: Option<f64>,
    pub diag_nodes: Option<f64>,
    pub diag_trials: Option<u64>,
    pub seed: Option<u64>,
    pub error: Option<String>,
}

impl Row {
    pub fn from_result(
        axis: &'static str,
        axis_value: Option<f64>,
        point: PointSpec,
        method: Method,
        result: &Result<RateResult, Error>,
    ) -> Row {
        let mut row = Row {
            axis,
            axis_value,
            point,
            method,
            rate: None,
            stderr: None,
            diag_nodes: None,
            diag_trials: None,
            seed: None,
            error: None,
        };
        match result {
            Ok(r) => {
                row.rate = Some(r.rate);
                row.stderr = r.diagnostic("stderr");
                row.diag_nodes = r.diagnostic("nodes");
                row.diag_trials = r.diagnostic("trials").map(|t| t as u64);
                row.seed = r.diagnostic("seed").map(|s| s as u64);
            }
            Err(e) => row.error = Some(e.to_string()),
        }
        row
    }

    fn axis_value_text(&self) -> String {
        match (self.axis, self.axis_value) {
            (_, None) => String::new(),
            ("antennas", Some(v)) => format!("{}", v as u64),
            (_, Some(v)) => fmt_f64(v),
        }
    }

    fn fields(&self) -> Vec<String> {
        let opt = |v: Option<f64>| v.map(fmt_f64).unwrap_or_default();
        vec![
            self.axis.to_owned(),
            self.axis_value_text(),
            fmt_f64(self.point.kappa),
            fmt_f64(self.point.mu),
            fmt_f64(self.point.m),
            fmt_f64(self.point.gamma_bar_db),
            fmt_f64(self.point.a_exp),
            self.point.antennas.to_string(),
            fmt_f64(self.point.rho_db),
            self.method.tag().to_owned(),
            opt(self.rate),
            opt(self.stderr),
            opt(self.diag_nodes),
            self.diag_trials.map(|t| t.to_string()).unwrap_or_default(),
            self.seed.map(|s| s.to_string()).unwrap_or_default(),
            self.error.clone().unwrap_or_default(),
        ]
    }

    fn json(&self) -> Value {
        let num = |v: f64| Number::from_f64(v).map_or(Value::Null, Value::Number);
        let opt = |v: Option<f64>| v.map_or(Value::Null, num);
        let mut obj = Map::new();
        obj.insert("axis".into(), Value::from(self.axis));
        obj.insert(
            "axis_value".into(),
            match (self.axis, self.axis_value) {
                ("antennas", Some(v)) => Value::from(v as u64),
                (_, v) => opt(v),
            },
        );
        obj.insert("kappa".into(), num(self.point.kappa));
        obj.insert("mu".into(), num(self.point.mu));
        obj.insert("m".into(), num(self.point.m));
        obj.insert("gamma_bar_db".into(), num(self.point.gamma_bar_db));
        obj.insert("a_exp".into(), num(self.point.a_exp));
        obj.insert("antennas".into(), Value::from(self.point.antennas));
        obj.insert("rho_db".into(), num(self.point.rho_db));
        obj.insert("method".into(), Value::from(self.method.tag()));
        obj.insert("rate_bps_hz".into(), opt(self.rate));
        obj.insert("stderr".into(), opt(self.stderr));
        obj.insert("diag_nodes".into(), opt(self.diag_nodes));
        obj.insert(
            "diag_trials".into(),
            self.diag_trials.map_or(Value::Null, Value::from),
        );
        obj.insert("seed".into(), self.seed.map_or(Value::Null, Value::from));
        obj.insert(
            "error".into(),
            self.error.clone().map_or(Value::Null, Value::from),
        );
        Value::Object(obj)
    }
}

/// Shortest decimal text that parses back to the same `f64`.
pub fn fmt_f64(v: f64) -> String {
    format!("{v}")
}

pub fn write_rows<W: Write + ?Sized>(
    out: &mut W,
    rows: &[Row],
    format: OutputFormat,
) -> io::Result<()> {
    match format {
        OutputFormat::Csv => {
            writeln!(out, "{SCHEMA_LINE}")?;
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record(COLUMNS)?;
            for row in rows {
                w.write_record(row.fields())?;
            }
            w.flush()?;
        }
        OutputFormat::Json => {
            for row in rows {
                serde_json::to_writer(&mut *out, &row.json())?;
                writeln!(out)?;
            }
        }
    }
    Ok(())
}
