//! CSV ingestion: header row required, one datetime and one numeric column.

use std::path::Path;

use chrono::format::{Parsed, StrftimeItems};
use chrono::{DateTime, NaiveDate, NaiveDateTime, Utc};
use tsdiag_core::{Error, TimeSeries};

use crate::error::CliError;

const NAIVE_FORMATS: [&str; 4] = [
    "%Y-%m-%dT%H:%M:%S%.f",
    "%Y-%m-%d %H:%M:%S%.f",
    "%Y-%m-%dT%H:%M",
    "%Y-%m-%d %H:%M",
];

pub fn read_series(
    path: &Path,
    datetime_column: &str,
    value_column: &str,
    datetime_format: Option<&str>,
) -> Result<TimeSeries, CliError> {
    let file = std::fs::File::open(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(file);
    let headers = reader
        .headers()
        .map_err(|e| CliError::Invalid(format!("{}: cannot read header: {e}", path.display())))?
        .clone();
    let dt_idx = resolve_column(&headers, datetime_column)?;
    let val_idx = resolve_column(&headers, value_column)?;
    if dt_idx == val_idx {
        return Err(CliError::Invalid(format!(
            "datetime and value columns must differ (both are column {dt_idx})"
        )));
    }

    let mut lines = Vec::new();
    let mut timestamps = Vec::new();
    let mut values = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| match e.position() {
            Some(p) => CliError::Invalid(format!("line {}: {e}", p.line())),
            None => CliError::Io(e.to_string()),
        })?;
        let line = record.position().map_or(0, |p| p.line());
        let field = |idx: usize, what: &str| {
            record
                .get(idx)
                .map(str::trim)
                .ok_or_else(|| CliError::Invalid(format!("line {line}: missing {what} column")))
        };
        let raw_dt = field(dt_idx, "datetime")?;
        let raw_val = field(val_idx, "value")?;
        let ts = parse_datetime(raw_dt, datetime_format)
            .ok_or_else(|| CliError::Invalid(format!("line {line}: cannot parse datetime {raw_dt:?}")))?;
        let value: f64 = raw_val
            .parse()
            .map_err(|_| CliError::Invalid(format!("line {line}: value {raw_val:?} is not a number")))?;
        lines.push(line);
        timestamps.push(ts.timestamp());
        values.push(value);
    }

    TimeSeries::from_records(timestamps, values).map_err(|e| {
        let at = match e {
            Error::NonMonotonicIndex { position } | Error::NonFiniteValue { position } => lines.get(position),
            _ => None,
        };
        match at {
            Some(line) => CliError::Invalid(format!("line {line}: {e}")),
            None => CliError::Invalid(e.to_string()),
        }
    })
}

fn resolve_column(headers: &csv::StringRecord, spec: &str) -> Result<usize, CliError> {
    if let Some(i) = headers.iter().position(|h| h.trim() == spec) {
        return Ok(i);
    }
    match spec.parse::<usize>() {
        Ok(i) if i < headers.len() => Ok(i),
        _ => Err(CliError::Invalid(format!(
            "no column {spec:?} (header: {})",
            headers.iter().collect::<Vec<_>>().join(",")
        ))),
    }
}

/// ISO-8601 / RFC 3339 by default, or `format` when given. Naive values are
/// taken as UTC.
pub fn parse_datetime(raw: &str, format: Option<&str>) -> Option<DateTime<Utc>> {
    if let Some(f) = format {
        return parse_with_format(raw, f);
    }
    if let Ok(d) = DateTime::parse_from_rfc3339(raw) {
        return Some(d.with_timezone(&Utc));
    }
    NAIVE_FORMATS
        .iter()
        .find_map(|f| NaiveDateTime::parse_from_str(raw, f).ok())
        .map(|d| d.and_utc())
        .or_else(|| NaiveDate::parse_from_str(raw, "%Y-%m-%d").ok().map(midnight))
}

/// Time fields the format leaves out default to zero, and a missing offset
/// means UTC.
fn parse_with_format(raw: &str, f: &str) -> Option<DateTime<Utc>> {
    let mut parsed = Parsed::new();
    chrono::format::parse(&mut parsed, raw, StrftimeItems::new(f)).ok()?;
    if parsed.hour_div_12().is_none() {
        parsed.set_hour(0).ok()?;
    }
    if parsed.minute().is_none() {
        parsed.set_minute(0).ok()?;
    }
    if parsed.second().is_none() {
        parsed.set_second(0).ok()?;
    }
    let offset = parsed.offset().unwrap_or(0);
    parsed.to_naive_datetime_with_offset(offset).ok().map(|d| (d - chrono::Duration::seconds(offset.into())).and_utc())
}

fn midnight(d: NaiveDate) -> DateTime<Utc> {
    d.and_hms_opt(0, 0, 0).expect("midnight exists").and_utc()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn iso_variants() {
        let expect = 1_577_836_800;
        for raw in [
            "2020-01-01T00:00:00Z",
            "2020-01-01T01:00:00+01:00",
            "2020-01-01T00:00:00",
            "2020-01-01 00:00:00.000",
            "2020-01-01 00:00",
            "2020-01-01",
        ] {
            assert_eq!(parse_datetime(raw, None).map(|d| d.timestamp()), Some(expect), "{raw}");
        }
        assert!(parse_datetime("01/02/2020", None).is_none());
    }

    #[test]
    fn explicit_format() {
        let d = parse_datetime("02/01/2020", Some("%d/%m/%Y")).unwrap();
        assert_eq!(d.timestamp(), 1_577_923_200);
        let d = parse_datetime("2020.01.01 06h", Some("%Y.%m.%d %Hh")).unwrap();
        assert_eq!(d.timestamp(), 1_577_836_800 + 6 * 3600);
        let d = parse_datetime("2020/01/01 07:30 +0130", Some("%Y/%m/%d %H:%M %z")).unwrap();
        assert_eq!(d.timestamp(), 1_577_836_800 + 6 * 3600);
        assert!(parse_datetime("2020/01/01", Some("%d.%m.%Y")).is_none());
    }
}
