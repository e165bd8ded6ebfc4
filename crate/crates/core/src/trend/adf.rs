use crate::error::{Error, Result};
use crate::mackinnon::{mackinnon_critical_values, mackinnon_pvalue};
use crate::notes;
use crate::regression::{ols_fit, select_adf_lag, AdfDesign};
use crate::series::TimeSeries;

use super::{TrendSpec, UnitRootResult, UnitRootTest};

const MIN_EFFECTIVE_OBS: usize = 10;

/// Augmented Dickey-Fuller test with the lag order chosen by AIC.
///
/// Null: unit root. `detected` is true when the null survives at `alpha`.
pub fn adf_test(ts: &TimeSeries, spec: TrendSpec, alpha: f64) -> Result<UnitRootResult> {
    let lags = select_adf_lag(ts.values(), spec)?;
    adf_test_with_lags(ts, spec, lags, alpha)
}

/// ADF with a fixed number of lagged differences, fitted on every usable
/// observation.
pub fn adf_test_with_lags(
    ts: &TimeSeries,
    spec: TrendSpec,
    lags: usize,
    alpha: f64,
) -> Result<UnitRootResult> {
    let n = ts.len();
    if n < lags + 3 + MIN_EFFECTIVE_OBS {
        return Err(Error::TooShort {
            needed: lags + 3 + MIN_EFFECTIVE_OBS,
            got: n,
        });
    }
    let design = AdfDesign {
        lags,
        spec,
        start: lags + 1,
        level_shift: None,
    };
    let (x, dy) = design.build(ts.values());
    let fit = ols_fit(&x, &dy)?;
    let tau = fit.t_value(0);
    let p_value = mackinnon_pvalue(tau, spec);
    let detected = p_value >= alpha;

    let mut notes = Vec::new();
    if detected {
        notes.push(notes::UNIT_ROOT.to_string());
        if spec == TrendSpec::ConstantOnly {
            notes.push(notes::ADF_CONSTANT_HINT.to_string());
        }
    }

    Ok(UnitRootResult {
        test: UnitRootTest::Adf,
        spec,
        statistic: tau,
        p_value: Some(p_value),
        critical_values: mackinnon_critical_values(spec, fit.nobs),
        lags_used: lags,
        break_index: None,
        detected,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series(values: Vec<f64>) -> TimeSeries {
        let t = (0..values.len() as i64).map(|i| i * 86_400).collect();
        TimeSeries::from_records(t, values).unwrap()
    }

    #[test]
    fn constant_series_is_rank_deficient() {
        let ts = series(vec![3.0; 40]);
        assert!(matches!(
            adf_test(&ts, TrendSpec::ConstantOnly, 0.05),
            Err(Error::RankDeficient { .. })
        ));
    }

    #[test]
    fn too_few_effective_observations() {
        let ts = series((0..20).map(|i| (i as f64).sin()).collect());
        assert!(matches!(
            adf_test_with_lags(&ts, TrendSpec::ConstantOnly, 8, 0.05),
            Err(Error::TooShort { .. })
        ));
    }

    #[test]
    fn alternating_series_rejects() {
        let ts = series((0..60).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 } + 0.01 * ((i * 7) % 5) as f64).collect());
        let r = adf_test_with_lags(&ts, TrendSpec::ConstantOnly, 0, 0.05).unwrap();
        assert!(!r.detected);
        assert!(r.notes.is_empty());
        assert!(r.p_value.unwrap() < 0.01);
    }
}
