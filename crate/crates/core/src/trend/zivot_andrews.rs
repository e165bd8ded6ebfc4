use std::ops::Range;

use crate::error::{Error, Result};
use crate::notes;
use crate::regression::{ols_fit_with_inverse, select_adf_lag, AdfDesign};
use crate::series::TimeSeries;

use super::{CriticalValues, TrendSpec, UnitRootResult, UnitRootTest};

const MIN_LENGTH: usize = 50;
const TRIM: f64 = 0.15;

/// Model A (intercept break) critical values, Zivot and Andrews (1992) Table 2.
pub const ZA_CRITICAL: CriticalValues = CriticalValues {
    pct1: -5.34,
    pct5: -4.80,
    pct10: -4.58,
};

/// Candidate break positions `floor(0.15 n) .. floor(0.85 n)`.
pub fn break_candidates(n: usize) -> Range<usize> {
    let lo = (TRIM * n as f64).floor() as usize;
    let hi = ((1.0 - TRIM) * n as f64).floor() as usize;
    lo..hi
}

/// Zivot-Andrews test allowing one shift in the intercept at an unknown date.
///
/// Null: unit root without a break. The lag order is chosen once by AIC on
/// the constant-plus-trend ADF regression of the full series and held fixed
/// across candidate breaks.
pub fn zivot_andrews_test(ts: &TimeSeries, alpha: f64) -> Result<UnitRootResult> {
    let y = ts.values();
    let n = y.len();
    if n < MIN_LENGTH {
        return Err(Error::TooShort {
            needed: MIN_LENGTH,
            got: n,
        });
    }
    let lags = select_adf_lag(y, TrendSpec::ConstantTrend)?;
    let (statistic, break_index) = min_break_tstat(y, lags)?;

    let detected = statistic > ZA_CRITICAL.at(alpha);
    let mut notes = vec![notes::ZA_CAVEAT.to_string()];
    if detected {
        notes.push(notes::ZA_UNIT_ROOT.to_string());
    } else {
        notes.push(notes::za_break(break_index));
    }

    Ok(UnitRootResult {
        test: UnitRootTest::ZivotAndrews,
        spec: TrendSpec::ConstantTrend,
        statistic,
        p_value: None,
        critical_values: ZA_CRITICAL,
        lags_used: lags,
        break_index: Some(break_index),
        detected,
        notes,
    })
}

/// Minimum over candidate breaks of the t-ratio on `y_{t-1}`.
///
/// The no-break regression is factored once; each candidate adds a single
/// step dummy, whose effect on the coefficient, its variance and the SSR
/// follows from rank-one updates using suffix sums of the design rows.
///
/// The t-ratio is unchanged by affine maps of `y`, so the series is
/// standardized first: a large level relative to the spread would otherwise
/// make the updates cancel catastrophically.
fn min_break_tstat(y: &[f64], lags: usize) -> Result<(f64, usize)> {
    let base = AdfDesign {
        lags,
        spec: TrendSpec::ConstantTrend,
        start: lags + 1,
        level_shift: None,
    };
    let (x, dy) = base.build(&standardized(y));
    let (fit, xtx_inv) = ols_fit_with_inverse(&x, &dy)?;
    let (m, k) = x.shape();
    let df = (m - k - 1) as f64;
    let ssr0 = fit.ssr();

    // suffix[r] = sum of design rows (and residuals) from row r to the end.
    let mut suffix_x = vec![vec![0.0; k]; m + 1];
    let mut suffix_e = vec![0.0; m + 1];
    for r in (0..m).rev() {
        for j in 0..k {
            suffix_x[r][j] = suffix_x[r + 1][j] + x[(r, j)];
        }
        suffix_e[r] = suffix_e[r + 1] + fit.residuals[r];
    }

    let mut best: Option<(f64, usize)> = None;
    for b in break_candidates(y.len()) {
        // DU_t = 1 for t > b, i.e. for design rows r >= b + 1 - start.
        if b < base.start {
            continue;
        }
        let s = b + 1 - base.start;
        if s >= m {
            continue;
        }
        let count = (m - s) as f64;
        let v = &suffix_x[s];
        let c: Vec<f64> = (0..k)
            .map(|i| (0..k).map(|j| xtx_inv[(i, j)] * v[j]).sum())
            .collect();
        let q = count - v.iter().zip(&c).map(|(a, b)| a * b).sum::<f64>();
        if q <= 1e-10 * count {
            continue;
        }
        let de = suffix_e[s];
        let theta = de / q;
        let gamma = fit.coefficients[0] - c[0] * theta;
        let ssr = (ssr0 - de * de / q).max(0.0);
        let var = ssr / df * (xtx_inv[(0, 0)] + c[0] * c[0] / q);
        let t = gamma / var.sqrt();
        if t.is_finite() && best.is_none_or(|(bt, _)| t < bt) {
            best = Some((t, b));
        }
    }
    best.ok_or(Error::RankDeficient {
        rank: k,
        columns: k + 1,
    })
}

fn standardized(y: &[f64]) -> Vec<f64> {
    let n = y.len() as f64;
    let mean = y.iter().sum::<f64>() / n;
    let sd = (y.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n).sqrt();
    let scale = if sd > 0.0 { sd } else { 1.0 };
    y.iter().map(|v| (v - mean) / scale).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::regression::ols_fit;

    #[test]
    fn trimmed_range() {
        let r = break_candidates(100);
        assert_eq!((r.start, r.end, r.len()), (15, 85, 70));
    }

    fn wiggle(n: usize) -> Vec<f64> {
        let mut y = vec![0.0; n];
        let mut state = 12345u64;
        for t in 1..n {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let u = (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5;
            y[t] = 0.6 * y[t - 1] + u + if t > n / 2 { 0.8 } else { 0.0 };
        }
        y
    }

    #[test]
    fn rank_one_update_matches_direct_fit() {
        let y = wiggle(120);
        for lags in [0usize, 2] {
            let (stat, at) = min_break_tstat(&y, lags).unwrap();
            let mut direct_best = (f64::INFINITY, 0);
            for b in break_candidates(y.len()) {
                let design = AdfDesign {
                    lags,
                    spec: TrendSpec::ConstantTrend,
                    start: lags + 1,
                    level_shift: Some(b),
                };
                let (x, dy) = design.build(&y);
                let t = ols_fit(&x, &dy).unwrap().t_value(0);
                if t < direct_best.0 {
                    direct_best = (t, b);
                }
            }
            assert!((stat - direct_best.0).abs() < 1e-9 * stat.abs(), "{stat} vs {}", direct_best.0);
            assert_eq!(at, direct_best.1);
        }
    }

    #[test]
    fn large_offset_does_not_cost_precision() {
        let y = wiggle(121);
        let moved: Vec<f64> = y.iter().map(|v| 0.01 * v - 923.486).collect();
        let (a, at) = min_break_tstat(&y, 3).unwrap();
        let (b, bt) = min_break_tstat(&moved, 3).unwrap();
        assert!((a - b).abs() < 1e-10 * a.abs(), "{a} vs {b}");
        assert_eq!(at, bt);
    }

    #[test]
    fn needs_fifty_points() {
        let ts = TimeSeries::from_records((0..49).collect(), wiggle(49)).unwrap();
        assert!(matches!(
            zivot_andrews_test(&ts, 0.05),
            Err(Error::TooShort { needed: 50, got: 49 })
        ));
    }
}
