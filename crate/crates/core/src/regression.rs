//! Least-squares kernel shared by the regression-based tests.
//!
//! `ols_fit` solves through a Householder QR factorization, never the normal
//! equations; unit-root design matrices with a trend and many lagged
//! differences are badly conditioned.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::trend::TrendSpec;

/// Diagonal entries of R below this fraction of the largest one count as zero.
const RANK_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct LinearFit {
    pub coefficients: Vec<f64>,
    pub residuals: Vec<f64>,
    pub stderr: Vec<f64>,
    /// SSR / (n - k).
    pub sigma2: f64,
    /// Gaussian log-likelihood with the MLE variance SSR / n.
    pub loglik: f64,
    pub aic: f64,
    pub nobs: usize,
    pub rank: usize,
}

impl LinearFit {
    pub fn ssr(&self) -> f64 {
        self.residuals.iter().map(|r| r * r).sum()
    }

    /// t-ratio of coefficient `i`.
    pub fn t_value(&self, i: usize) -> f64 {
        self.coefficients[i] / self.stderr[i]
    }
}

/// Ordinary least squares of `y` on the columns of `x`.
pub fn ols_fit(x: &DMatrix<f64>, y: &[f64]) -> Result<LinearFit> {
    ols_fit_with_inverse(x, y).map(|(fit, _)| fit)
}

/// [`ols_fit`] that also returns `(X'X)^-1`, built from the triangular factor.
pub(crate) fn ols_fit_with_inverse(x: &DMatrix<f64>, y: &[f64]) -> Result<(LinearFit, DMatrix<f64>)> {
    let (n, k) = x.shape();
    if y.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "design has {n} rows but response has {} entries",
            y.len()
        )));
    }
    if k == 0 || n <= k {
        return Err(Error::DimensionMismatch(format!(
            "need n > k >= 1, got n={n}, k={k}"
        )));
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::DimensionMismatch("design matrix has non-finite entries".into()));
    }

    let qr = x.clone().qr();
    let r = qr.r();
    let max_diag = r.diagonal().iter().fold(0.0_f64, |m, d| m.max(d.abs()));
    let rank = r
        .diagonal()
        .iter()
        .filter(|d| d.abs() > RANK_TOLERANCE * max_diag)
        .count();
    if max_diag == 0.0 || rank < k {
        return Err(Error::RankDeficient { rank, columns: k });
    }

    let mut qty = DVector::from_column_slice(y);
    qr.q_tr_mul(&mut qty);
    let rhs = qty.rows(0, k).into_owned();
    let beta = r
        .solve_upper_triangular(&rhs)
        .ok_or(Error::RankDeficient { rank, columns: k })?;

    let fitted = x * &beta;
    let residuals: Vec<f64> = y.iter().zip(fitted.iter()).map(|(a, b)| a - b).collect();
    let ssr: f64 = residuals.iter().map(|e| e * e).sum();
    let sigma2 = ssr / (n - k) as f64;

    // diag((X'X)^-1) = squared row norms of R^-1.
    let r_inv = r
        .solve_upper_triangular(&DMatrix::identity(k, k))
        .ok_or(Error::RankDeficient { rank, columns: k })?;
    let stderr = (0..k)
        .map(|i| (sigma2 * r_inv.row(i).norm_squared()).sqrt())
        .collect();

    let nf = n as f64;
    let loglik = -0.5 * nf * ((2.0 * std::f64::consts::PI).ln() + (ssr / nf).ln() + 1.0);
    let aic = 2.0 * k as f64 - 2.0 * loglik;

    let fit = LinearFit {
        coefficients: beta.iter().copied().collect(),
        residuals,
        stderr,
        sigma2,
        loglik,
        aic,
        nobs: n,
        rank,
    };
    let xtx_inv = &r_inv * r_inv.transpose();
    Ok((fit, xtx_inv))
}

/// Bartlett-kernel long-run variance
/// `g0 + 2 * sum_{j=1..lag} (1 - j/(lag+1)) * g_j` with `g_j = (1/n) sum u_t u_{t-j}`.
///
/// The input is used as given; callers demean where their test requires it.
pub fn newey_west_lrv(u: &[f64], lag: usize) -> Result<f64> {
    let n = u.len();
    if n <= lag {
        return Err(Error::LagTooLarge { lag, len: n });
    }
    let nf = n as f64;
    let autocov = |j: usize| -> f64 { u[j..].iter().zip(u).map(|(a, b)| a * b).sum::<f64>() / nf };
    let mut s2 = autocov(0);
    for j in 1..=lag {
        let w = 1.0 - j as f64 / (lag as f64 + 1.0);
        s2 += 2.0 * w * autocov(j);
    }
    Ok(s2)
}

/// `floor(12 * (n/100)^(1/4))`, the Schwert rule. Also the KPSS truncation lag.
pub fn schwert_maxlag(n: usize) -> usize {
    (12.0 * (n as f64 / 100.0).powf(0.25)).floor() as usize
}

/// Design of the augmented Dickey-Fuller regression
///
/// `dy_t = c [+ b*t] [+ theta*DU_t] + gamma*y_{t-1} + sum_{i=1..lags} d_i*dy_{t-i}`
///
/// evaluated for `t` in `start..n`. Column 0 is always `y_{t-1}`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct AdfDesign {
    pub lags: usize,
    pub spec: TrendSpec,
    pub start: usize,
    /// Adds an intercept-shift dummy equal to 1 for `t > break_at`.
    pub level_shift: Option<usize>,
}

impl AdfDesign {
    pub fn columns(&self) -> usize {
        1 + self.lags + 1 + usize::from(self.spec == TrendSpec::ConstantTrend) + usize::from(self.level_shift.is_some())
    }

    pub fn build(&self, y: &[f64]) -> (DMatrix<f64>, Vec<f64>) {
        debug_assert!(self.start > self.lags);
        let rows = y.len() - self.start;
        let k = self.columns();
        let mut x = DMatrix::zeros(rows, k);
        let mut dy = Vec::with_capacity(rows);
        for (row, t) in (self.start..y.len()).enumerate() {
            dy.push(y[t] - y[t - 1]);
            x[(row, 0)] = y[t - 1];
            for i in 1..=self.lags {
                x[(row, i)] = y[t - i] - y[t - i - 1];
            }
            let mut c = 1 + self.lags;
            x[(row, c)] = 1.0;
            c += 1;
            if self.spec == TrendSpec::ConstantTrend {
                x[(row, c)] = t as f64;
                c += 1;
            }
            if let Some(b) = self.level_shift {
                x[(row, c)] = if t > b { 1.0 } else { 0.0 };
            }
        }
        (x, dy)
    }
}

/// Chooses the ADF lag order in `0..=schwert_maxlag(n)` by minimum AIC.
///
/// Every candidate is fitted on the same sample, starting at `maxlag + 1`, so
/// the AICs are comparable. Ties go to the smaller lag.
pub fn select_adf_lag(values: &[f64], spec: TrendSpec) -> Result<usize> {
    let n = values.len();
    let maxlag = schwert_maxlag(n);
    let largest = AdfDesign {
        lags: maxlag,
        spec,
        start: maxlag + 1,
        level_shift: None,
    };
    if n < maxlag + 2 || n - maxlag - 2 <= largest.columns() {
        return Err(Error::TooShort {
            needed: maxlag + 3 + largest.columns(),
            got: n,
        });
    }

    let mut best: Option<(usize, f64)> = None;
    for lags in 0..=maxlag {
        let design = AdfDesign { lags, ..largest };
        let (x, dy) = design.build(values);
        let fit = ols_fit(&x, &dy)?;
        if best.is_none_or(|(_, aic)| fit.aic < aic) {
            best = Some((lags, fit.aic));
        }
    }
    Ok(best.map(|(l, _)| l).unwrap_or(0))
}
