//! Flat one-row-per-test view for CSV and JSON export.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::{Category, DiagnosticsReport, Verdict};

pub const TABLE_COLUMNS: [&str; 8] = [
    "test_id",
    "category",
    "spec_or_period",
    "statistic",
    "p_value",
    "alpha",
    "verdict",
    "notes",
];

const NOTE_SEPARATOR: &str = "; ";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableRecord {
    pub test_id: String,
    pub category: Category,
    pub spec_or_period: Option<String>,
    pub statistic: Option<f64>,
    pub p_value: Option<f64>,
    pub alpha: f64,
    pub verdict: Verdict,
    /// Row notes joined with `"; "`.
    pub notes: String,
}

pub fn to_table(report: &DiagnosticsReport) -> Vec<TableRecord> {
    report
        .results
        .iter()
        .map(|r| TableRecord {
            test_id: r.test_id.clone(),
            category: r.category,
            spec_or_period: r.spec_or_period.clone(),
            statistic: r.statistic,
            p_value: r.p_value,
            alpha: r.alpha,
            verdict: r.verdict,
            notes: r.notes.join(NOTE_SEPARATOR),
        })
        .collect()
}

pub fn table_to_csv(records: &[TableRecord]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    if records.is_empty() {
        w.write_record(TABLE_COLUMNS).map_err(csv_error)?;
    }
    for r in records {
        w.serialize(r).map_err(csv_error)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::TableFormat(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn table_from_csv(text: &str) -> Result<Vec<TableRecord>> {
    csv::Reader::from_reader(text.as_bytes())
        .deserialize()
        .collect::<std::result::Result<_, _>>()
        .map_err(csv_error)
}

pub fn table_to_json(records: &[TableRecord]) -> String {
    serde_json::to_string_pretty(records).expect("table records always serialize")
}

fn csv_error(e: csv::Error) -> Error {
    Error::TableFormat(e.to_string())
}
