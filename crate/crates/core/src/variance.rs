//! Variance-stationarity tests: segmented Levene (Brown-Forsythe), segmented
//! Bartlett, Engle's ARCH LM and a first-third / last-third F ratio.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::dist::{chi2_sf, f_cdf, f_sf};
use crate::error::{Error, Result};
use crate::notes;
use crate::regression::ols_fit;

pub const MIN_SEGMENT_LEN: usize = 10;
const ARCH_MIN_EFFECTIVE: usize = 30;
const VARIANCE_RATIO_MIN: usize = 60;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VarianceTest {
    Levene,
    Bartlett,
    ArchLm,
    VarianceRatio,
}

impl VarianceTest {
    pub fn id(self) -> &'static str {
        match self {
            VarianceTest::Levene => "levene",
            VarianceTest::Bartlett => "bartlett",
            VarianceTest::ArchLm => "arch_lm",
            VarianceTest::VarianceRatio => "variance_ratio",
        }
    }

    pub fn null_hypothesis(self) -> &'static str {
        match self {
            VarianceTest::Levene | VarianceTest::Bartlett => "equal variance across segments",
            VarianceTest::ArchLm => "no ARCH effects",
            VarianceTest::VarianceRatio => "equal variance in first and last thirds",
        }
    }
}

/// Degrees of freedom of the reference distribution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Df {
    ChiSquare(f64),
    F(f64, f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VarianceResult {
    pub test: VarianceTest,
    pub statistic: f64,
    pub p_value: f64,
    pub df: Df,
    pub segments: Option<usize>,
    pub lags: Option<usize>,
    pub detected: bool,
    pub notes: Vec<String>,
}

/// Splits `values` into `k` contiguous slices whose lengths differ by at most
/// one, earlier slices taking the remainder.
pub fn split_segments(values: &[f64], k: usize) -> Result<Vec<&[f64]>> {
    if k < 2 {
        return Err(Error::BadK(k));
    }
    let n = values.len();
    if n < MIN_SEGMENT_LEN * k {
        return Err(Error::TooShort {
            needed: MIN_SEGMENT_LEN * k,
            got: n,
        });
    }
    let (base, extra) = (n / k, n % k);
    let mut out = Vec::with_capacity(k);
    let mut start = 0;
    for i in 0..k {
        let len = base + usize::from(i < extra);
        out.push(&values[start..start + len]);
        start += len;
    }
    Ok(out)
}

fn check_segments(segments: &[&[f64]]) -> Result<()> {
    if segments.len() < 2 {
        return Err(Error::BadK(segments.len()));
    }
    if let Some(s) = segments.iter().find(|s| s.len() < MIN_SEGMENT_LEN) {
        return Err(Error::TooShort {
            needed: MIN_SEGMENT_LEN,
            got: s.len(),
        });
    }
    Ok(())
}

fn mean(x: &[f64]) -> f64 {
    x.iter().sum::<f64>() / x.len() as f64
}

fn sample_variance(x: &[f64]) -> f64 {
    let m = mean(x);
    x.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (x.len() - 1) as f64
}

fn median(x: &[f64]) -> f64 {
    let mut s = x.to_vec();
    s.sort_by(f64::total_cmp);
    let mid = s.len() / 2;
    if s.len() % 2 == 1 {
        s[mid]
    } else {
        (s[mid - 1] + s[mid]) / 2.0
    }
}

/// Brown-Forsythe variant of Levene's test: one-way ANOVA on absolute
/// deviations from each segment's median.
pub fn levene_test(segments: &[&[f64]], alpha: f64) -> Result<VarianceResult> {
    check_segments(segments)?;
    let k = segments.len();
    let z: Vec<Vec<f64>> = segments
        .iter()
        .map(|s| {
            let med = median(s);
            s.iter().map(|v| (v - med).abs()).collect()
        })
        .collect();
    let total: usize = z.iter().map(Vec::len).sum();
    let group_means: Vec<f64> = z.iter().map(|g| mean(g)).collect();
    let grand = z.iter().flatten().sum::<f64>() / total as f64;

    let between: f64 = z
        .iter()
        .zip(&group_means)
        .map(|(g, m)| g.len() as f64 * (m - grand) * (m - grand))
        .sum();
    let within_by_group: Vec<f64> = z
        .iter()
        .zip(&group_means)
        .map(|(g, m)| g.iter().map(|v| (v - m) * (v - m)).sum())
        .collect();
    let within: f64 = within_by_group.iter().sum();
    if within == 0.0 {
        let j = within_by_group.iter().position(|w| *w == 0.0).unwrap_or(0);
        return Err(Error::DegenerateSegment(j));
    }

    let (d1, d2) = ((k - 1) as f64, (total - k) as f64);
    let statistic = (between / d1) / (within / d2);
    let p_value = f_sf(statistic, d1, d2);
    let detected = p_value < alpha;
    let notes = if detected {
        vec![notes::LEVENE_DETECTED.to_string()]
    } else {
        Vec::new()
    };
    Ok(VarianceResult {
        test: VarianceTest::Levene,
        statistic,
        p_value,
        df: Df::F(d1, d2),
        segments: Some(k),
        lags: None,
        detected,
        notes,
    })
}

/// Bartlett's test for equal variances across segments.
pub fn bartlett_test(segments: &[&[f64]], alpha: f64) -> Result<VarianceResult> {
    check_segments(segments)?;
    let k = segments.len();
    let variances: Vec<f64> = segments.iter().map(|s| sample_variance(s)).collect();
    if let Some(j) = variances.iter().position(|v| *v <= 0.0) {
        return Err(Error::ZeroVariance(j));
    }
    let total: usize = segments.iter().map(|s| s.len()).sum();
    let dof = (total - k) as f64;
    let pooled = segments
        .iter()
        .zip(&variances)
        .map(|(s, v)| (s.len() - 1) as f64 * v)
        .sum::<f64>()
        / dof;
    let numerator = dof * pooled.ln()
        - segments
            .iter()
            .zip(&variances)
            .map(|(s, v)| (s.len() - 1) as f64 * v.ln())
            .sum::<f64>();
    let correction = 1.0
        + (segments.iter().map(|s| 1.0 / (s.len() - 1) as f64).sum::<f64>() - 1.0 / dof)
            / (3.0 * (k - 1) as f64);
    let statistic = (numerator / correction).max(0.0);
    let df = (k - 1) as f64;
    let p_value = chi2_sf(statistic, df);
    let detected = p_value < alpha;
    let mut notes = vec![notes::BARTLETT_CAVEAT.to_string()];
    if detected {
        notes.push(notes::BARTLETT_DETECTED.to_string());
    }
    Ok(VarianceResult {
        test: VarianceTest::Bartlett,
        statistic,
        p_value,
        df: Df::ChiSquare(df),
        segments: Some(k),
        lags: None,
        detected,
        notes,
    })
}

/// Default ARCH LM lag count, `min(10, floor(n/20))`.
pub fn default_arch_lags(n: usize) -> usize {
    (n / 20).clamp(1, 10)
}

/// Engle's LM test: regress squared demeaned values on a constant and `q` of
/// their own lags; `LM = (n - q) R^2` is chi-square with `q` df.
pub fn arch_lm_test(values: &[f64], lags: Option<usize>, alpha: f64) -> Result<VarianceResult> {
    let n = values.len();
    let q = lags.unwrap_or_else(|| default_arch_lags(n));
    if q == 0 {
        return Err(Error::LagTooLarge { lag: q, len: n });
    }
    if n < q + ARCH_MIN_EFFECTIVE {
        return Err(Error::TooShort {
            needed: q + ARCH_MIN_EFFECTIVE,
            got: n,
        });
    }
    let m = mean(values);
    let e2: Vec<f64> = values.iter().map(|v| (v - m) * (v - m)).collect();
    let rows = n - q;
    let y = &e2[q..];
    let y_mean = mean(y);
    let sst: f64 = y.iter().map(|v| (v - y_mean) * (v - y_mean)).sum();
    if sst <= 0.0 {
        return Err(Error::DegenerateVariance);
    }
    let x = DMatrix::from_fn(rows, q + 1, |r, j| if j == 0 { 1.0 } else { e2[q + r - j] });
    let fit = ols_fit(&x, y)?;
    let r2 = 1.0 - fit.ssr() / sst;
    let statistic = (rows as f64 * r2).max(0.0);
    let p_value = chi2_sf(statistic, q as f64);
    let detected = p_value < alpha;
    let mut notes = vec![notes::ARCH_CAVEAT.to_string()];
    if detected {
        notes.push(notes::ARCH_DETECTED.to_string());
    }
    Ok(VarianceResult {
        test: VarianceTest::ArchLm,
        statistic,
        p_value,
        df: Df::ChiSquare(q as f64),
        segments: None,
        lags: Some(q),
        detected,
        notes,
    })
}

/// Two-sided F test of `var(last third) / var(first third)`.
pub fn variance_ratio_test(values: &[f64], alpha: f64) -> Result<VarianceResult> {
    let n = values.len();
    if n < VARIANCE_RATIO_MIN {
        return Err(Error::TooShort {
            needed: VARIANCE_RATIO_MIN,
            got: n,
        });
    }
    let third = n / 3;
    let early = &values[..third];
    let late = &values[n - third..];
    let (v_early, v_late) = (sample_variance(early), sample_variance(late));
    if v_early <= 0.0 {
        return Err(Error::ZeroVariance(0));
    }
    if v_late <= 0.0 {
        return Err(Error::ZeroVariance(1));
    }
    let statistic = v_late / v_early;
    let (d1, d2) = ((late.len() - 1) as f64, (early.len() - 1) as f64);
    let p_value = variance_ratio_pvalue(statistic, d1, d2);
    let detected = p_value < alpha;
    let mut notes = vec![notes::VARIANCE_RATIO_SCOPE.to_string()];
    if detected {
        notes.push(notes::VARIANCE_RATIO_DETECTED.to_string());
    }
    Ok(VarianceResult {
        test: VarianceTest::VarianceRatio,
        statistic,
        p_value,
        df: Df::F(d1, d2),
        segments: Some(2),
        lags: None,
        detected,
        notes,
    })
}

/// `2 min(P(F <= f), P(F >= f))`, capped at 1.
pub fn variance_ratio_pvalue(f: f64, d1: f64, d2: f64) -> f64 {
    (2.0 * f_cdf(f, d1, d2).min(f_sf(f, d1, d2))).min(1.0)
}
