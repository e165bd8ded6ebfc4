//! Validated time series, sampling-frequency inference and the mapping from
//! frequency to the seasonal periods worth testing.

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Smallest series accepted anywhere in the battery.
pub const MIN_LENGTH: usize = 20;

/// A period is only tested when the series holds this many full cycles.
pub const MIN_CYCLES: usize = 3;

const HOUR: f64 = 3_600.0;
const DAY: f64 = 86_400.0;
const WEEK: f64 = 604_800.0;
const FIXED_BAND: f64 = 0.05;

/// An immutable, validated series of `(timestamp, value)` pairs.
///
/// Timestamps are UTC seconds since the Unix epoch and strictly increasing;
/// values are finite.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    timestamps: Vec<i64>,
    values: Vec<f64>,
}

impl TimeSeries {
    pub fn from_records(timestamps: Vec<i64>, values: Vec<f64>) -> Result<Self> {
        if timestamps.len() != values.len() {
            return Err(Error::LengthMismatch {
                timestamps: timestamps.len(),
                values: values.len(),
            });
        }
        if values.len() < MIN_LENGTH {
            return Err(Error::TooShort {
                needed: MIN_LENGTH,
                got: values.len(),
            });
        }
        if let Some(i) = timestamps.windows(2).position(|w| w[1] <= w[0]) {
            return Err(Error::NonMonotonicIndex { position: i + 1 });
        }
        if let Some(position) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteValue { position });
        }
        Ok(Self { timestamps, values })
    }

    /// Builds a series from `DateTime`s instead of raw epoch seconds.
    pub fn from_datetimes(datetimes: &[DateTime<Utc>], values: Vec<f64>) -> Result<Self> {
        Self::from_records(datetimes.iter().map(|d| d.timestamp()).collect(), values)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    /// Always false for a constructed series; present for API symmetry.
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn timestamps(&self) -> &[i64] {
        &self.timestamps
    }

    pub fn start(&self) -> i64 {
        self.timestamps[0]
    }

    pub fn end(&self) -> i64 {
        self.timestamps[self.timestamps.len() - 1]
    }

    /// Same timestamps, transformed values. Used by invariance tests and the
    /// synthetic generator; the result is re-validated.
    pub fn map_values(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::from_records(
            self.timestamps.clone(),
            self.values.iter().map(|&v| f(v)).collect(),
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FrequencyKind {
    Hourly,
    Daily,
    Weekly,
    Monthly,
    Quarterly,
    Yearly,
    Unknown,
}

impl FrequencyKind {
    pub const ALL: [FrequencyKind; 7] = [
        FrequencyKind::Hourly,
        FrequencyKind::Daily,
        FrequencyKind::Weekly,
        FrequencyKind::Monthly,
        FrequencyKind::Quarterly,
        FrequencyKind::Yearly,
        FrequencyKind::Unknown,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FrequencyKind::Hourly => "hourly",
            FrequencyKind::Daily => "daily",
            FrequencyKind::Weekly => "weekly",
            FrequencyKind::Monthly => "monthly",
            FrequencyKind::Quarterly => "quarterly",
            FrequencyKind::Yearly => "yearly",
            FrequencyKind::Unknown => "unknown",
        }
    }

    /// Inclusive band of median spacings (seconds) classified as this kind.
    pub fn band(self) -> Option<(f64, f64)> {
        let fixed = |s: f64| Some((s * (1.0 - FIXED_BAND), s * (1.0 + FIXED_BAND)));
        match self {
            FrequencyKind::Hourly => fixed(HOUR),
            FrequencyKind::Daily => fixed(DAY),
            FrequencyKind::Weekly => fixed(WEEK),
            FrequencyKind::Monthly => Some((28.0 * DAY, 31.0 * DAY)),
            FrequencyKind::Quarterly => Some((89.0 * DAY, 93.0 * DAY)),
            FrequencyKind::Yearly => Some((360.0 * DAY, 370.0 * DAY)),
            FrequencyKind::Unknown => None,
        }
    }

    /// Seasonal cycles tested for this sampling frequency, ascending by period.
    pub fn period_map(self) -> &'static [(usize, &'static str)] {
        match self {
            FrequencyKind::Hourly => &[(24, "daily"), (168, "weekly")],
            FrequencyKind::Daily => &[(7, "weekly"), (30, "monthly"), (365, "yearly")],
            FrequencyKind::Weekly => &[(52, "yearly")],
            FrequencyKind::Monthly => &[(12, "yearly")],
            FrequencyKind::Quarterly => &[(4, "yearly")],
            FrequencyKind::Yearly | FrequencyKind::Unknown => &[],
        }
    }
}

impl std::fmt::Display for FrequencyKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Frequency {
    pub kind: FrequencyKind,
    /// Median spacing between consecutive timestamps, in seconds.
    pub median_spacing: f64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeasonalPeriod {
    pub period: usize,
    pub label: String,
}

impl SeasonalPeriod {
    pub fn new(period: usize, label: impl Into<String>) -> Result<Self> {
        if period < 2 {
            return Err(Error::BadPeriod(period));
        }
        Ok(Self {
            period,
            label: label.into(),
        })
    }
}

/// Classifies the median timestamp spacing into a [`FrequencyKind`].
///
/// Only timestamps are consulted. Irregular or unusual spacings map to
/// `Unknown`.
pub fn infer_frequency(ts: &TimeSeries) -> Frequency {
    let median_spacing = median_spacing(ts.timestamps());
    let kind = FrequencyKind::ALL
        .into_iter()
        .find(|k| matches!(k.band(), Some((lo, hi)) if median_spacing >= lo && median_spacing <= hi))
        .unwrap_or(FrequencyKind::Unknown);
    Frequency {
        kind,
        median_spacing,
    }
}

fn median_spacing(timestamps: &[i64]) -> f64 {
    let mut gaps: Vec<i64> = timestamps.windows(2).map(|w| w[1] - w[0]).collect();
    if gaps.is_empty() {
        return 0.0;
    }
    gaps.sort_unstable();
    let mid = gaps.len() / 2;
    if gaps.len() % 2 == 1 {
        gaps[mid] as f64
    } else {
        (gaps[mid - 1] as f64 + gaps[mid] as f64) / 2.0
    }
}

/// Seasonal periods for `freq` that fit at least [`MIN_CYCLES`] times in `n`
/// observations.
pub fn candidate_periods(freq: &Frequency, n: usize) -> Vec<SeasonalPeriod> {
    freq.kind
        .period_map()
        .iter()
        .filter(|(period, _)| n >= MIN_CYCLES * period)
        .map(|&(period, label)| SeasonalPeriod {
            period,
            label: label.to_string(),
        })
        .collect()
}
