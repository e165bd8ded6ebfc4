use nalgebra::DMatrix;

use crate::error::Result;
use crate::notes;
use crate::regression::{newey_west_lrv, ols_fit, schwert_maxlag};
use crate::series::TimeSeries;

use super::{interpolate, CriticalValues, TrendSpec, UnitRootResult, UnitRootTest};

/// Level-stationarity critical values (Kwiatkowski et al. 1992, Table 1).
pub const KPSS_CRITICAL_C: CriticalValues = CriticalValues {
    pct1: 0.739,
    pct5: 0.463,
    pct10: 0.347,
};

/// Trend-stationarity critical values (Kwiatkowski et al. 1992, Table 1).
pub const KPSS_CRITICAL_CT: CriticalValues = CriticalValues {
    pct1: 0.216,
    pct5: 0.146,
    pct10: 0.119,
};

fn critical_values(spec: TrendSpec) -> CriticalValues {
    match spec {
        TrendSpec::ConstantOnly => KPSS_CRITICAL_C,
        TrendSpec::ConstantTrend => KPSS_CRITICAL_CT,
    }
}

/// Interpolated p-value, bounded to `[0.01, 0.10]`.
pub fn kpss_pvalue(statistic: f64, spec: TrendSpec) -> f64 {
    let cv = critical_values(spec);
    interpolate(
        &[(cv.pct10, 0.10), (cv.pct5, 0.05), (cv.pct1, 0.01)],
        statistic,
    )
}

/// KPSS test. Null: stationarity around a constant or a linear trend.
///
/// The truncation lag of the long-run variance is `floor(12 (n/100)^(1/4))`.
pub fn kpss_test(ts: &TimeSeries, spec: TrendSpec, alpha: f64) -> Result<UnitRootResult> {
    let y = ts.values();
    let n = y.len();
    let k = match spec {
        TrendSpec::ConstantOnly => 1,
        TrendSpec::ConstantTrend => 2,
    };
    let x = DMatrix::from_fn(n, k, |t, j| if j == 0 { 1.0 } else { t as f64 });
    let fit = ols_fit(&x, y)?;

    let lags = schwert_maxlag(n);
    let lrv = newey_west_lrv(&fit.residuals, lags)?;
    let mut partial = 0.0;
    let mut sum_sq = 0.0;
    for e in &fit.residuals {
        partial += e;
        sum_sq += partial * partial;
    }
    let nf = n as f64;
    // An exact fit leaves only rounding noise, whose ratio is meaningless.
    let mean = y.iter().sum::<f64>() / nf;
    let spread = y.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>();
    let exact = fit.ssr() <= 1e-20 * spread.max(f64::MIN_POSITIVE);
    let statistic = if lrv > 0.0 && !exact { sum_sq / (nf * nf) / lrv } else { 0.0 };

    let cv = critical_values(spec);
    let detected = statistic > cv.at(alpha);
    let mut notes = vec![notes::KPSS_INTERPOLATED.to_string()];
    if detected {
        notes.push(
            match spec {
                TrendSpec::ConstantOnly => notes::KPSS_LEVEL_REJECTED,
                TrendSpec::ConstantTrend => notes::KPSS_TREND_REJECTED,
            }
            .to_string(),
        );
    }

    Ok(UnitRootResult {
        test: UnitRootTest::Kpss,
        spec,
        statistic,
        p_value: Some(kpss_pvalue(statistic, spec)),
        critical_values: cv,
        lags_used: lags,
        break_index: None,
        detected,
        notes,
    })
}
