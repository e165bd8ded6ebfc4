//! Unit-root and stationarity tests on the level of the series.
//!
//! ADF, KPSS and Phillips-Perron each run under a constant-only and a
//! constant-plus-trend specification; Zivot-Andrews runs once with an
//! intercept break. [`classify_trend`] folds the seven runs into a diagnosis.

mod adf;
mod classify;
mod kpss;
mod pp;
mod zivot_andrews;

pub use adf::{adf_test, adf_test_with_lags};
pub use classify::{classify_trend, TrendClass, TrendDiagnosis};
pub use kpss::{kpss_pvalue, kpss_test, KPSS_CRITICAL_C, KPSS_CRITICAL_CT};
pub use pp::{pp_bandwidth, pp_correct, pp_test};
pub use zivot_andrews::{break_candidates, zivot_andrews_test, ZA_CRITICAL};

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TrendSpec {
    ConstantOnly,
    ConstantTrend,
}

impl TrendSpec {
    pub const BOTH: [TrendSpec; 2] = [TrendSpec::ConstantOnly, TrendSpec::ConstantTrend];

    pub fn as_str(self) -> &'static str {
        match self {
            TrendSpec::ConstantOnly => "constant-only",
            TrendSpec::ConstantTrend => "constant-trend",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UnitRootTest {
    Adf,
    Kpss,
    Pp,
    ZivotAndrews,
}

impl UnitRootTest {
    pub fn id(self) -> &'static str {
        match self {
            UnitRootTest::Adf => "adf",
            UnitRootTest::Kpss => "kpss",
            UnitRootTest::Pp => "pp",
            UnitRootTest::ZivotAndrews => "zivot_andrews",
        }
    }

    pub fn null_hypothesis(self) -> &'static str {
        match self {
            UnitRootTest::Adf | UnitRootTest::Pp => "unit root",
            UnitRootTest::Kpss => "stationary",
            UnitRootTest::ZivotAndrews => "unit root without break",
        }
    }
}

/// Critical values at the 1%, 5% and 10% levels.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalValues {
    #[serde(rename = "0.01")]
    pub pct1: f64,
    #[serde(rename = "0.05")]
    pub pct5: f64,
    #[serde(rename = "0.10")]
    pub pct10: f64,
}

impl CriticalValues {
    /// Critical value at `alpha`, linear in alpha between the tabulated
    /// levels and clamped to the 1% / 10% values outside them.
    pub fn at(&self, alpha: f64) -> f64 {
        let points = [(0.01, self.pct1), (0.05, self.pct5), (0.10, self.pct10)];
        interpolate(&points, alpha)
    }
}

/// Piecewise-linear interpolation through `points` (sorted by x), flat
/// beyond both ends.
pub(crate) fn interpolate(points: &[(f64, f64)], x: f64) -> f64 {
    let (x0, y0) = points[0];
    if x <= x0 {
        return y0;
    }
    for w in points.windows(2) {
        let ((xa, ya), (xb, yb)) = (w[0], w[1]);
        if x <= xb {
            return ya + (yb - ya) * (x - xa) / (xb - xa);
        }
    }
    points[points.len() - 1].1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnitRootResult {
    pub test: UnitRootTest,
    pub spec: TrendSpec,
    pub statistic: f64,
    pub p_value: Option<f64>,
    pub critical_values: CriticalValues,
    pub lags_used: usize,
    /// Zivot-Andrews only: the last observation before the level shift.
    pub break_index: Option<usize>,
    /// Non-stationarity flagged at the requested alpha, whatever the
    /// orientation of the test's null.
    pub detected: bool,
    pub notes: Vec<String>,
}

impl UnitRootResult {
    /// Whether the test rejected its own null hypothesis.
    pub fn rejects_null(&self) -> bool {
        match self.test {
            UnitRootTest::Kpss => self.detected,
            _ => !self.detected,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn critical_value_interpolation() {
        let cv = KPSS_CRITICAL_C;
        assert_eq!(cv.at(0.05), 0.463);
        assert_eq!(cv.at(0.001), 0.739);
        assert_eq!(cv.at(0.2), 0.347);
        assert!((cv.at(0.075) - (0.463 + 0.347) / 2.0).abs() < 1e-12);
    }
}
