//! Result tables and their CSV / JSON encodings.

use serde_json::{Map, Value};

use super::config::Format;
use super::CliError;
use crate::fieldmap::RowStatus;

pub const STATUS_COLUMN: &str = "status";

#[derive(Debug, Clone, PartialEq)]
pub struct TableRow {
    pub values: Vec<f64>,
    pub status: RowStatus,
}

/// Numeric columns followed by a `status` column.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<TableRow>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Table { columns, rows: Vec::new() }
    }

    pub fn push(&mut self, values: Vec<f64>, status: RowStatus) {
        assert_eq!(values.len(), self.columns.len(), "row width must match the header");
        self.rows.push(TableRow { values, status });
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| *c == name)?;
        Some(self.rows.iter().map(|r| r.values[i]).collect())
    }

    pub fn all_converged(&self) -> bool {
        self.rows.iter().all(|r| r.status != RowStatus::NonConverged)
    }
}

/// `precision` significant digits in scientific notation.
pub fn format_number(value: f64, precision: usize) -> String {
    format!("{:.*e}", precision.saturating_sub(1), value)
}

/// `value` rounded to what [`format_number`] writes.
pub fn round_to(value: f64, precision: usize) -> f64 {
    format_number(value, precision).parse().expect("formatted float parses")
}

pub fn to_csv(table: &Table, precision: usize) -> Result<String, CliError> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    let mut header: Vec<&str> = table.columns.clone();
    header.push(STATUS_COLUMN);
    writer.write_record(&header).map_err(|e| CliError::Io(e.to_string()))?;
    for row in &table.rows {
        let mut record: Vec<String> = row.values.iter().map(|v| format_number(*v, precision)).collect();
        record.push(row.status.as_str().to_owned());
        writer.write_record(&record).map_err(|e| CliError::Io(e.to_string()))?;
    }
    let bytes = writer.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Header, then each row's numbers and status.
pub type ParsedCsv = (Vec<String>, Vec<(Vec<f64>, String)>);

/// Parses CSV written by [`to_csv`] back into a table.
pub fn parse_csv(text: &str) -> Result<ParsedCsv, CliError> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let header: Vec<String> =
        reader.headers().map_err(|e| CliError::Io(e.to_string()))?.iter().map(str::to_owned).collect();
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| CliError::Io(e.to_string()))?;
        let n = record.len();
        let values = record
            .iter()
            .take(n - 1)
            .map(|v| v.parse::<f64>().map_err(|e| CliError::Io(format!("{v:?}: {e}"))))
            .collect::<Result<Vec<_>, _>>()?;
        rows.push((values, record[n - 1].to_owned()));
    }
    Ok((header, rows))
}

pub fn to_json(table: &Table, metadata: Value, precision: usize) -> String {
    let rows: Vec<Value> = table
        .rows
        .iter()
        .map(|row| {
            let mut obj = Map::new();
            for (name, v) in table.columns.iter().zip(&row.values) {
                obj.insert((*name).to_owned(), Value::from(round_to(*v, precision)));
            }
            obj.insert(STATUS_COLUMN.to_owned(), Value::from(row.status.as_str()));
            Value::Object(obj)
        })
        .collect();
    let mut doc = Map::new();
    doc.insert("metadata".into(), metadata);
    doc.insert("rows".into(), Value::Array(rows));
    let mut text = serde_json::to_string_pretty(&Value::Object(doc)).expect("json values serialize");
    text.push('\n');
    text
}

pub fn render(table: &Table, metadata: Value, format: Format, precision: usize) -> Result<String, CliError> {
    match format {
        Format::Csv => to_csv(table, precision),
        Format::Json => Ok(to_json(table, metadata, precision)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn csv_layout() {
        let mut t = Table::new(vec!["kz", "gamma"]);
        t.push(vec![0.0, 29.703535443718344], RowStatus::Ok);
        t.push(vec![-1.5, 1e-300], RowStatus::NonConverged);
        let text = to_csv(&t, 17).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "kz,gamma,status");
        assert_eq!(lines[1], "0.0000000000000000e0,2.9703535443718344e1,ok");
        assert_eq!(lines[2], "-1.5000000000000000e0,1.0000000000000000e-300,non_converged");
        assert!(!t.all_converged());
    }

    #[test]
    fn json_layout() {
        let mut t = Table::new(vec!["kz"]);
        t.push(vec![0.125], RowStatus::Ok);
        let v: Value = serde_json::from_str(&to_json(&t, serde_json::json!({"a": 1}), 17)).unwrap();
        assert_eq!(v["metadata"]["a"], 1);
        assert_eq!(v["rows"][0]["kz"], 0.125);
        assert_eq!(v["rows"][0]["status"], "ok");
    }

    proptest! {
        #[test]
        fn csv_round_trip(values in proptest::collection::vec(-1e6..1e6f64, 1..20), precision in 1usize..=17) {
            let mut t = Table::new(vec!["a"]);
            for v in &values {
                t.push(vec![*v], RowStatus::Ok);
            }
            let (header, rows) = parse_csv(&to_csv(&t, precision).unwrap()).unwrap();
            prop_assert_eq!(header, vec!["a".to_string(), "status".to_string()]);
            for (v, (parsed, status)) in values.iter().zip(rows) {
                prop_assert_eq!(parsed[0], round_to(*v, precision));
                prop_assert_eq!(status, "ok");
                if precision == 17 {
                    prop_assert_eq!(parsed[0], *v);
                }
            }
        }
    }
}
