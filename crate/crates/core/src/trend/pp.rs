use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::mackinnon::{mackinnon_critical_values, mackinnon_pvalue};
use crate::notes;
use crate::regression::{newey_west_lrv, ols_fit};
use crate::series::TimeSeries;

use super::{TrendSpec, UnitRootResult, UnitRootTest};

const MIN_LENGTH: usize = 25;

/// Bartlett bandwidth `floor(4 (n/100)^(2/9))`.
pub fn pp_bandwidth(n: usize) -> usize {
    (4.0 * (n as f64 / 100.0).powf(2.0 / 9.0)).floor() as usize
}

/// Phillips-Perron `Z_tau` from the uncorrected Dickey-Fuller pieces.
///
/// `tau` and `se` are the t-ratio and standard error of the autoregressive
/// coefficient, `sigma` the regression standard error, `gamma0` the mean
/// squared residual and `lambda2` the long-run residual variance.
pub fn pp_correct(tau: f64, se: f64, sigma: f64, gamma0: f64, lambda2: f64, nobs: usize) -> f64 {
    let lambda = lambda2.sqrt();
    (gamma0 / lambda2).sqrt() * tau - 0.5 * (lambda2 - gamma0) / lambda * (nobs as f64 * se / sigma)
}

/// Phillips-Perron `Z_tau` test. Null: unit root.
pub fn pp_test(ts: &TimeSeries, spec: TrendSpec, alpha: f64) -> Result<UnitRootResult> {
    let y = ts.values();
    let n = y.len();
    if n < MIN_LENGTH {
        return Err(Error::TooShort {
            needed: MIN_LENGTH,
            got: n,
        });
    }
    let nobs = n - 1;
    let k = match spec {
        TrendSpec::ConstantOnly => 2,
        TrendSpec::ConstantTrend => 3,
    };
    let x = DMatrix::from_fn(nobs, k, |row, j| match j {
        0 => y[row],
        1 => 1.0,
        _ => (row + 1) as f64,
    });
    let fit = ols_fit(&x, &y[1..])?;

    let se = fit.stderr[0];
    let tau = (fit.coefficients[0] - 1.0) / se;
    let gamma0 = fit.ssr() / nobs as f64;
    let bandwidth = pp_bandwidth(n);
    let lambda2 = newey_west_lrv(&fit.residuals, bandwidth)?;
    if lambda2 <= 0.0 || gamma0 <= 0.0 {
        return Err(Error::DegenerateVariance);
    }
    let statistic = pp_correct(tau, se, fit.sigma2.sqrt(), gamma0, lambda2, nobs);

    let p_value = mackinnon_pvalue(statistic, spec);
    let detected = p_value >= alpha;
    let notes = if detected {
        vec![notes::UNIT_ROOT.to_string()]
    } else {
        Vec::new()
    };

    Ok(UnitRootResult {
        test: UnitRootTest::Pp,
        spec,
        statistic,
        p_value: Some(p_value),
        critical_values: mackinnon_critical_values(spec, nobs),
        lags_used: bandwidth,
        break_index: None,
        detected,
        notes,
    })
}
