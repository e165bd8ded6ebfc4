//! Stationarity diagnostics for univariate time series.
//!
//! A fixed battery of ten tests (four on trend, four on variance, two on
//! seasonality) runs in a single call through [`detect_all`], producing a
//! [`DiagnosticsReport`] with per-test verdicts and actionable notes that can
//! be rendered as a flat table (CSV / JSON) or a markdown document.

pub mod dist;
pub mod error;
pub mod mackinnon;
pub mod notes;
pub mod regression;
pub mod report;
pub mod seasonality;
pub mod series;
pub mod synth;
pub mod trend;
pub mod variance;

pub use error::{Error, Result};
pub use report::{detect_all, summarize, to_markdown, to_table, DetectConfig, DiagnosticsReport, TestResult};
pub use series::{candidate_periods, infer_frequency, Frequency, FrequencyKind, SeasonalPeriod, TimeSeries};
pub use synth::{generate, SynthSpec};
