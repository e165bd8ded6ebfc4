//! MacKinnon response surfaces for the Dickey-Fuller tau distribution with a
//! single integrated variable.
//!
//! p-values use the MacKinnon (1994) normal-CDF polynomials; critical values
//! use the MacKinnon (2010) finite-sample surfaces `b0 + b1/T + b2/T^2 + b3/T^3`.
//! Coefficients are the N = 1 rows of the published tables (as also shipped in
//! statsmodels' `adfvalues`).

use crate::dist::normal_cdf;
use crate::trend::{CriticalValues, TrendSpec};

struct PValueSurface {
    tau_max: f64,
    tau_min: f64,
    tau_star: f64,
    small_p: [f64; 3],
    large_p: [f64; 4],
}

const PVALUE_C: PValueSurface = PValueSurface {
    tau_max: 2.74,
    tau_min: -18.83,
    tau_star: -1.61,
    small_p: [2.1659, 1.4412, 3.8269e-2],
    large_p: [1.7339, 9.3202e-1, -1.2745e-1, -1.0368e-2],
};

const PVALUE_CT: PValueSurface = PValueSurface {
    tau_max: 0.7,
    tau_min: -16.18,
    tau_star: -2.89,
    small_p: [3.2512, 1.6047, 4.9588e-2],
    large_p: [2.5261, 6.1654e-1, -3.7956e-1, -6.0285e-2],
};

/// Rows: 1%, 5%, 10%.
const CRIT_C: [[f64; 4]; 3] = [
    [-3.43035, -6.5393, -16.786, -79.433],
    [-2.86154, -2.8903, -4.234, -40.040],
    [-2.56677, -1.5384, -2.809, 0.0],
];

const CRIT_CT: [[f64; 4]; 3] = [
    [-3.95877, -9.0531, -28.428, -134.155],
    [-3.41049, -4.3904, -9.036, -45.374],
    [-3.12705, -2.5856, -3.925, -22.380],
];

/// Evaluates `c[0] + c[1] x + c[2] x^2 + ...`.
fn poly(coefs: &[f64], x: f64) -> f64 {
    coefs.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

/// Approximate p-value of a Dickey-Fuller tau statistic.
pub fn mackinnon_pvalue(tau: f64, spec: TrendSpec) -> f64 {
    let s = match spec {
        TrendSpec::ConstantOnly => &PVALUE_C,
        TrendSpec::ConstantTrend => &PVALUE_CT,
    };
    if tau.is_nan() {
        return f64::NAN;
    }
    if tau > s.tau_max {
        return 1.0;
    }
    if tau < s.tau_min {
        return 0.0;
    }
    if tau <= s.tau_star {
        normal_cdf(poly(&s.small_p, tau))
    } else {
        normal_cdf(poly(&s.large_p, tau))
    }
}

/// Finite-sample critical values for a regression with `nobs` observations.
pub fn mackinnon_critical_values(spec: TrendSpec, nobs: usize) -> CriticalValues {
    let table = match spec {
        TrendSpec::ConstantOnly => &CRIT_C,
        TrendSpec::ConstantTrend => &CRIT_CT,
    };
    let inv = 1.0 / nobs as f64;
    CriticalValues {
        pct1: poly(&table[0], inv),
        pct5: poly(&table[1], inv),
        pct10: poly(&table[2], inv),
    }
}
