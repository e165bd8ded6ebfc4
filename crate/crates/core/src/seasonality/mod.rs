//! Seasonality tests run per candidate period: STL seasonal strength and a
//! Kruskal-Wallis comparison of phase groups after moving-average detrending.

mod stl;

pub use stl::{
    centered_moving_average, periodic_means_decompose, stl_decompose, stl_with, Decomposition,
    DecompositionMethod, StlParams, SEASONAL_WINDOW,
};

use serde::{Deserialize, Serialize};

use crate::dist::chi2_sf;
use crate::error::{Error, Result};
use crate::notes;
use crate::series::{SeasonalPeriod, TimeSeries};

pub const DEFAULT_STRENGTH_THRESHOLD: f64 = 0.6;
const MIN_GROUP: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeasonalityTest {
    SeasonalStrength,
    KruskalWallis,
}

impl SeasonalityTest {
    pub fn id(self) -> &'static str {
        match self {
            SeasonalityTest::SeasonalStrength => "seasonal_strength",
            SeasonalityTest::KruskalWallis => "kruskal_wallis",
        }
    }

    pub fn null_hypothesis(self) -> &'static str {
        match self {
            SeasonalityTest::SeasonalStrength => "seasonal strength below threshold",
            SeasonalityTest::KruskalWallis => "identical distribution across seasonal phases",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeasonalityResult {
    pub test: SeasonalityTest,
    pub period: usize,
    pub label: String,
    pub statistic: f64,
    pub p_value: Option<f64>,
    pub threshold: Option<f64>,
    pub detected: bool,
    pub notes: Vec<String>,
}

fn variance(x: impl Iterator<Item = f64> + Clone) -> f64 {
    let (sum, count) = x.clone().fold((0.0, 0usize), |(s, c), v| (s + v, c + 1));
    let mean = sum / count as f64;
    x.map(|v| (v - mean) * (v - mean)).sum::<f64>() / count as f64
}

/// `F_s = max(0, 1 - Var(R) / Var(S + R))`, flagged above `threshold`.
pub fn seasonal_strength(d: &Decomposition, label: &str, threshold: f64) -> Result<SeasonalityResult> {
    let detrended = d.seasonal.iter().zip(&d.remainder).map(|(s, r)| s + r);
    let total = variance(detrended);
    // Rounding noise from the decomposition of a flat series is not seasonality.
    let scale = (0..d.trend.len())
        .map(|t| (d.trend[t] + d.seasonal[t] + d.remainder[t]).abs())
        .fold(0.0, f64::max);
    if total.is_nan() || total <= (1e-10 * scale).powi(2) {
        return Err(Error::DegenerateVariance);
    }
    let resid = variance(d.remainder.iter().copied());
    let statistic = (1.0 - resid / total).max(0.0);
    let detected = statistic > threshold;
    let mut notes = vec![notes::seasonal_tested(label, d.period)];
    if detected {
        notes.push(notes::seasonal_detected(label, d.period));
    }
    Ok(SeasonalityResult {
        test: SeasonalityTest::SeasonalStrength,
        period: d.period,
        label: label.to_string(),
        statistic,
        p_value: None,
        threshold: Some(threshold),
        detected,
        notes,
    })
}

/// Average ranks (1-based) with ties sharing the mean of their positions,
/// plus the tie term `sum(t^3 - t)`.
fn rank_with_ties(values: &[f64]) -> (Vec<f64>, f64) {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut ties = 0.0;
    let mut i = 0;
    while i < order.len() {
        let mut j = i + 1;
        while j < order.len() && values[order[j]] == values[order[i]] {
            j += 1;
        }
        let avg = (i + j + 1) as f64 / 2.0;
        for &idx in &order[i..j] {
            ranks[idx] = avg;
        }
        let t = (j - i) as f64;
        ties += t * t * t - t;
        i = j;
    }
    (ranks, ties)
}

/// Kruskal-Wallis H with tie correction over `groups`.
pub fn kruskal_wallis(groups: &[Vec<f64>]) -> Result<(f64, f64)> {
    let all: Vec<f64> = groups.iter().flatten().copied().collect();
    let n = all.len() as f64;
    let (ranks, ties) = rank_with_ties(&all);
    let correction = 1.0 - ties / (n * n * n - n);
    if correction <= 0.0 {
        return Err(Error::AllTied);
    }
    let mut offset = 0;
    let mut sum = 0.0;
    for g in groups {
        let r: f64 = ranks[offset..offset + g.len()].iter().sum();
        sum += r * r / g.len() as f64;
        offset += g.len();
    }
    let h = (12.0 / (n * (n + 1.0)) * sum - 3.0 * (n + 1.0)) / correction;
    let h = h.max(0.0);
    Ok((h, chi2_sf(h, (groups.len() - 1) as f64)))
}

/// Kruskal-Wallis across phases `t mod period` of the series minus its
/// centered moving average.
///
/// Subtracting a one-period moving average makes the residuals of each cycle
/// sum to roughly zero, so the phase means are negatively correlated and H
/// is inflated by about `period / (period - 1)` under the null. The reported
/// statistic is the plain H; the p-value is taken at `H (period - 1) / period`
/// to keep the size at the nominal level.
pub fn kruskal_wallis_seasonal(
    values: &[f64],
    period: usize,
    label: &str,
    alpha: f64,
) -> Result<SeasonalityResult> {
    let n = values.len();
    if period < 2 {
        return Err(Error::BadPeriod(period));
    }
    if n < 3 * period {
        return Err(Error::TooShort {
            needed: 3 * period,
            got: n,
        });
    }
    let (half, ma) = centered_moving_average(values, period);
    let mut groups = vec![Vec::new(); period];
    for (i, m) in ma.iter().enumerate() {
        let t = i + half;
        groups[t % period].push(values[t] - m);
    }
    let smallest = groups.iter().map(Vec::len).min().unwrap_or(0);
    if smallest < MIN_GROUP {
        return Err(Error::GroupTooSmall {
            needed: MIN_GROUP,
            got: smallest,
        });
    }
    let (lo, hi) = groups
        .iter()
        .flatten()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(*v), hi.max(*v)));
    let scale = values.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    if hi - lo <= 1e-12 * (1.0 + scale) {
        return Err(Error::AllTied);
    }

    let (statistic, _) = kruskal_wallis(&groups)?;
    let df = (period - 1) as f64;
    let p_value = chi2_sf(statistic * df / period as f64, df);
    let detected = p_value < alpha;
    let mut notes = vec![notes::seasonal_tested(label, period)];
    if detected {
        notes.push(notes::seasonal_detected(label, period));
    }
    Ok(SeasonalityResult {
        test: SeasonalityTest::KruskalWallis,
        period,
        label: label.to_string(),
        statistic,
        p_value: Some(p_value),
        threshold: None,
        detected,
        notes,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeasonalityRun {
    pub test: SeasonalityTest,
    pub period: SeasonalPeriod,
    pub outcome: Result<SeasonalityResult>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeasonalityBattery {
    pub runs: Vec<SeasonalityRun>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeasonalityOptions {
    pub alpha: f64,
    pub strength_threshold: f64,
    pub robust: bool,
}

impl Default for SeasonalityOptions {
    fn default() -> Self {
        Self {
            alpha: 0.05,
            strength_threshold: DEFAULT_STRENGTH_THRESHOLD,
            robust: false,
        }
    }
}

/// Both seasonality tests for every period, ordered by period and then test
/// (seasonal strength first). Failures stay in the run as errors.
pub fn detect_seasonality(
    ts: &TimeSeries,
    periods: &[SeasonalPeriod],
    options: &SeasonalityOptions,
) -> SeasonalityBattery {
    let values = ts.values();
    let mut sorted = periods.to_vec();
    sorted.sort_by_key(|p| p.period);
    let mut runs = Vec::with_capacity(2 * sorted.len());
    for p in sorted {
        let strength = stl_decompose(values, p.period, options.robust)
            .and_then(|d| seasonal_strength(&d, &p.label, options.strength_threshold));
        runs.push(SeasonalityRun {
            test: SeasonalityTest::SeasonalStrength,
            period: p.clone(),
            outcome: strength,
        });
        runs.push(SeasonalityRun {
            test: SeasonalityTest::KruskalWallis,
            outcome: kruskal_wallis_seasonal(values, p.period, &p.label, options.alpha),
            period: p,
        });
    }
    let notes = if runs.is_empty() {
        vec![notes::FREQUENCY_UNKNOWN.to_string()]
    } else {
        Vec::new()
    };
    SeasonalityBattery { runs, notes }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn decomposition(seasonal: Vec<f64>, remainder: Vec<f64>) -> Decomposition {
        let n = seasonal.len();
        Decomposition {
            trend: vec![0.0; n],
            seasonal,
            remainder,
            period: 4,
            method: DecompositionMethod::PeriodicMeans,
        }
    }

    #[test]
    fn strength_extremes() {
        let s: Vec<f64> = (0..40).map(|t| [1.0, -1.0, 2.0, -2.0][t % 4]).collect();
        let r = seasonal_strength(&decomposition(s.clone(), vec![0.0; 40]), "x", 0.6).unwrap();
        assert_eq!(r.statistic, 1.0);
        assert!(r.detected);

        let r = seasonal_strength(&decomposition(vec![0.0; 40], s), "x", 0.6).unwrap();
        assert_eq!(r.statistic, 0.0);
        assert!(!r.detected);

        assert_eq!(
            seasonal_strength(&decomposition(vec![1.0; 40], vec![0.0; 40]), "x", 0.6),
            Err(Error::DegenerateVariance)
        );
    }

    #[test]
    fn ranks_average_ties() {
        let (r, ties) = rank_with_ties(&[3.0, 1.0, 3.0, 2.0]);
        assert_eq!(r, vec![3.5, 1.0, 3.5, 2.0]);
        assert_eq!(ties, 6.0);
    }

    #[test]
    fn kruskal_equal_rank_means_is_zero() {
        let groups = vec![vec![1.0, 4.0], vec![2.0, 3.0]];
        let (h, p) = kruskal_wallis(&groups).unwrap();
        assert!(h.abs() < 1e-12);
        assert!((p - 1.0).abs() < 1e-12);
    }

    #[test]
    fn kruskal_all_tied() {
        let y = vec![5.0; 70];
        assert_eq!(kruskal_wallis_seasonal(&y, 7, "weekly", 0.05), Err(Error::AllTied));
    }

    #[test]
    fn kruskal_needs_three_per_phase() {
        let y: Vec<f64> = (0..100).map(|t| (t as f64).sin()).collect();
        assert!(matches!(
            kruskal_wallis_seasonal(&y, 30, "monthly", 0.05),
            Err(Error::GroupTooSmall { needed: 3, .. })
        ));
    }

    #[test]
    fn kruskal_pvalue_uses_deflated_statistic() {
        let y: Vec<f64> = (0..210).map(|t| ((t * 7919) % 101) as f64).collect();
        let r = kruskal_wallis_seasonal(&y, 7, "weekly", 0.05).unwrap();
        let expected = chi2_sf(r.statistic * 6.0 / 7.0, 6.0);
        assert!((r.p_value.unwrap() - expected).abs() < 1e-15);
    }
}
