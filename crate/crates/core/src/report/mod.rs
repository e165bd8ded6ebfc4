//! The single-call battery and its structured report.

mod markdown;
mod table;

pub use markdown::to_markdown;
pub use table::{table_from_csv, table_to_csv, table_to_json, to_table, TableRecord, TABLE_COLUMNS};

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::notes;
use crate::seasonality::{detect_seasonality, SeasonalityOptions, SeasonalityResult, DEFAULT_STRENGTH_THRESHOLD};
use crate::series::{candidate_periods, infer_frequency, Frequency, TimeSeries};
use crate::trend::{
    adf_test, classify_trend, kpss_test, pp_test, zivot_andrews_test, CriticalValues, TrendClass,
    TrendDiagnosis, TrendSpec, UnitRootResult, UnitRootTest,
};
use crate::variance::{
    arch_lm_test, bartlett_test, levene_test, split_segments, variance_ratio_test, VarianceResult,
    VarianceTest,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Category {
    Trend,
    Variance,
    Seasonality,
}

impl Category {
    pub const ALL: [Category; 3] = [Category::Trend, Category::Variance, Category::Seasonality];

    pub fn as_str(self) -> &'static str {
        match self {
            Category::Trend => "trend",
            Category::Variance => "variance",
            Category::Seasonality => "seasonality",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    StationaryCompatible,
    NonStationarityDetected,
    Skipped,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::StationaryCompatible => "stationary_compatible",
            Verdict::NonStationarityDetected => "non_stationarity_detected",
            Verdict::Skipped => "skipped",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

/// One row of the report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestResult {
    pub test_id: String,
    pub category: Category,
    /// Trend specification ("constant-only") or seasonal cycle ("weekly").
    pub spec_or_period: Option<String>,
    pub null_hypothesis: String,
    pub statistic: Option<f64>,
    pub p_value: Option<f64>,
    pub critical_values: Option<CriticalValues>,
    pub alpha: f64,
    pub verdict: Verdict,
    pub notes: Vec<String>,
}

impl TestResult {
    fn skipped(
        test_id: &str,
        category: Category,
        spec_or_period: Option<String>,
        null_hypothesis: &str,
        alpha: f64,
        error: &Error,
    ) -> Self {
        Self {
            test_id: test_id.to_string(),
            category,
            spec_or_period,
            null_hypothesis: null_hypothesis.to_string(),
            statistic: None,
            p_value: None,
            critical_values: None,
            alpha,
            verdict: Verdict::Skipped,
            notes: vec![notes::skipped(&error.to_string())],
        }
    }

    fn from_unit_root(r: &UnitRootResult, alpha: f64) -> Self {
        let verdict = if r.detected {
            Verdict::NonStationarityDetected
        } else if r.test == UnitRootTest::ZivotAndrews {
            // Rejecting the null here favours stationarity around a broken
            // level, which is not the same as stationarity.
            Verdict::Inconclusive
        } else {
            Verdict::StationaryCompatible
        };
        Self {
            test_id: r.test.id().to_string(),
            category: Category::Trend,
            spec_or_period: Some(r.spec.as_str().to_string()),
            null_hypothesis: r.test.null_hypothesis().to_string(),
            statistic: Some(r.statistic),
            p_value: r.p_value,
            critical_values: Some(r.critical_values),
            alpha,
            verdict,
            notes: r.notes.clone(),
        }
    }

    fn from_variance(r: &VarianceResult, alpha: f64) -> Self {
        Self {
            test_id: r.test.id().to_string(),
            category: Category::Variance,
            spec_or_period: None,
            null_hypothesis: r.test.null_hypothesis().to_string(),
            statistic: Some(r.statistic),
            p_value: Some(r.p_value),
            critical_values: None,
            alpha,
            verdict: detected_verdict(r.detected),
            notes: r.notes.clone(),
        }
    }

    fn from_seasonality(r: &SeasonalityResult, alpha: f64) -> Self {
        Self {
            test_id: r.test.id().to_string(),
            category: Category::Seasonality,
            spec_or_period: Some(r.label.clone()),
            null_hypothesis: r.test.null_hypothesis().to_string(),
            statistic: Some(r.statistic),
            p_value: r.p_value,
            critical_values: None,
            alpha,
            verdict: detected_verdict(r.detected),
            notes: r.notes.clone(),
        }
    }
}

fn detected_verdict(detected: bool) -> Verdict {
    if detected {
        Verdict::NonStationarityDetected
    } else {
        Verdict::StationaryCompatible
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DetectConfig {
    pub alpha: f64,
    pub variance_segments: usize,
    pub arch_lags: Option<usize>,
    pub seasonal_strength_threshold: f64,
    pub stl_robust: bool,
}

impl Default for DetectConfig {
    fn default() -> Self {
        Self {
            alpha: 0.05,
            variance_segments: 2,
            arch_lags: None,
            seasonal_strength_threshold: DEFAULT_STRENGTH_THRESHOLD,
            stl_robust: false,
        }
    }
}

impl DetectConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha <= 0.5) {
            return Err(Error::BadConfig(format!("alpha must be in (0, 0.5], got {}", self.alpha)));
        }
        if !(2..=6).contains(&self.variance_segments) {
            return Err(Error::BadConfig(format!(
                "variance_segments must be in 2..=6, got {}",
                self.variance_segments
            )));
        }
        if self.arch_lags == Some(0) {
            return Err(Error::BadConfig("arch_lags must be at least 1".into()));
        }
        let t = self.seasonal_strength_threshold;
        if !(t > 0.0 && t < 1.0) {
            return Err(Error::BadConfig(format!(
                "seasonal_strength_threshold must be in (0, 1), got {t}"
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CategorySummary {
    pub rows: usize,
    pub tests_run: usize,
    pub detections: usize,
    pub skipped: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsReport {
    pub n: usize,
    /// Epoch seconds, UTC.
    pub start: i64,
    pub end: i64,
    pub frequency: Frequency,
    pub alpha: f64,
    pub trend_diagnosis: TrendDiagnosis,
    /// Trend rows, then variance, then seasonality.
    pub results: Vec<TestResult>,
    pub category_summary: BTreeMap<Category, CategorySummary>,
    /// Series-level notes that belong to no single row.
    pub notes: Vec<String>,
    pub overall_note: String,
}

impl DiagnosticsReport {
    pub fn rows(&self, category: Category) -> impl Iterator<Item = &TestResult> {
        self.results.iter().filter(move |r| r.category == category)
    }

    /// Every note in the report: row notes, diagnosis notes and series notes.
    pub fn all_notes(&self) -> impl Iterator<Item = &str> {
        self.results
            .iter()
            .flat_map(|r| r.notes.iter())
            .chain(&self.trend_diagnosis.notes)
            .chain(&self.notes)
            .map(String::as_str)
    }
}

/// Runs all ten tests (seven trend executions, four variance tests and two
/// seasonality tests per viable period) and assembles the report.
///
/// Test-level failures become skipped rows; only an invalid configuration is
/// returned as an error.
pub fn detect_all(ts: &TimeSeries, config: &DetectConfig) -> Result<DiagnosticsReport> {
    config.validate()?;
    let alpha = config.alpha;
    let values = ts.values();
    let mut results = Vec::new();

    let mut trend_runs = Vec::with_capacity(7);
    for (test, spec) in [
        (UnitRootTest::Adf, TrendSpec::ConstantOnly),
        (UnitRootTest::Adf, TrendSpec::ConstantTrend),
        (UnitRootTest::Kpss, TrendSpec::ConstantOnly),
        (UnitRootTest::Kpss, TrendSpec::ConstantTrend),
        (UnitRootTest::Pp, TrendSpec::ConstantOnly),
        (UnitRootTest::Pp, TrendSpec::ConstantTrend),
        (UnitRootTest::ZivotAndrews, TrendSpec::ConstantTrend),
    ] {
        let outcome = match test {
            UnitRootTest::Adf => adf_test(ts, spec, alpha),
            UnitRootTest::Kpss => kpss_test(ts, spec, alpha),
            UnitRootTest::Pp => pp_test(ts, spec, alpha),
            UnitRootTest::ZivotAndrews => zivot_andrews_test(ts, alpha),
        };
        match outcome {
            Ok(r) => {
                results.push(TestResult::from_unit_root(&r, alpha));
                trend_runs.push(r);
            }
            Err(e) => results.push(TestResult::skipped(
                test.id(),
                Category::Trend,
                Some(spec.as_str().to_string()),
                test.null_hypothesis(),
                alpha,
                &e,
            )),
        }
    }
    let trend_diagnosis = if trend_runs.len() == 7 {
        classify_trend(&trend_runs)?
    } else {
        TrendDiagnosis {
            class: TrendClass::Inconclusive,
            explanation: format!(
                "{} of 7 trend runs could not be computed, so the trend cannot be classified.",
                7 - trend_runs.len()
            ),
            notes: Vec::new(),
        }
    };

    let segments = split_segments(values, config.variance_segments);
    let variance_runs: [(VarianceTest, Result<VarianceResult>); 4] = [
        (
            VarianceTest::Levene,
            segments.clone().and_then(|s| levene_test(&s, alpha)),
        ),
        (
            VarianceTest::Bartlett,
            segments.and_then(|s| bartlett_test(&s, alpha)),
        ),
        (VarianceTest::ArchLm, arch_lm_test(values, config.arch_lags, alpha)),
        (VarianceTest::VarianceRatio, variance_ratio_test(values, alpha)),
    ];
    for (test, outcome) in variance_runs {
        results.push(match outcome {
            Ok(r) => TestResult::from_variance(&r, alpha),
            Err(e) => TestResult::skipped(test.id(), Category::Variance, None, test.null_hypothesis(), alpha, &e),
        });
    }

    let frequency = infer_frequency(ts);
    let periods = candidate_periods(&frequency, ts.len());
    let seasonal = detect_seasonality(
        ts,
        &periods,
        &SeasonalityOptions {
            alpha,
            strength_threshold: config.seasonal_strength_threshold,
            robust: config.stl_robust,
        },
    );
    for run in &seasonal.runs {
        results.push(match &run.outcome {
            Ok(r) => TestResult::from_seasonality(r, alpha),
            Err(e) => TestResult::skipped(
                run.test.id(),
                Category::Seasonality,
                Some(run.period.label.clone()),
                run.test.null_hypothesis(),
                alpha,
                e,
            ),
        });
    }

    let mut category_summary = BTreeMap::new();
    for category in Category::ALL {
        let mut s = CategorySummary::default();
        for r in results.iter().filter(|r| r.category == category) {
            s.rows += 1;
            match r.verdict {
                Verdict::Skipped => s.skipped += 1,
                Verdict::NonStationarityDetected => {
                    s.tests_run += 1;
                    s.detections += 1;
                }
                _ => s.tests_run += 1,
            }
        }
        category_summary.insert(category, s);
    }

    Ok(DiagnosticsReport {
        n: ts.len(),
        start: ts.start(),
        end: ts.end(),
        frequency,
        alpha,
        trend_diagnosis,
        results,
        category_summary,
        notes: seasonal.notes,
        overall_note: notes::OVERALL.to_string(),
    })
}

/// One-paragraph summary: detections per category, skips and the trend
/// diagnosis.
pub fn summarize(report: &DiagnosticsReport) -> String {
    let total = |f: fn(&CategorySummary) -> usize| report.category_summary.values().map(f).sum::<usize>();
    let (run, detections, skipped) = (total(|s| s.tests_run), total(|s| s.detections), total(|s| s.skipped));
    let breakdown = report
        .category_summary
        .iter()
        .map(|(c, s)| format!("{} {}/{}", c.as_str(), s.detections, s.tests_run))
        .collect::<Vec<_>>()
        .join(", ");

    let mut out = if detections == 0 {
        format!("No non-stationarity detected across {run} tests ({breakdown}).")
    } else {
        format!("Non-stationarity flagged by {detections} of {run} tests ({breakdown}).")
    };
    if skipped > 0 {
        out.push_str(&format!(
            " {skipped} {} skipped.",
            if skipped == 1 { "test was" } else { "tests were" }
        ));
    }
    if !report.notes.is_empty() {
        out.push_str(&format!(" Seasonality: {}.", report.notes.join("; ")));
    }
    out.push_str(&format!(
        " Trend diagnosis: {}. {}",
        report.trend_diagnosis.class.as_str(),
        report.trend_diagnosis.explanation
    ));
    out
}
