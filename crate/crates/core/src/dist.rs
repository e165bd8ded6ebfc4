//! Tail probabilities of the reference distributions, clamped to `[0, 1]`.

use statrs::distribution::{ChiSquared, ContinuousCDF, FisherSnedecor, Normal};

fn clamp_prob(p: f64) -> f64 {
    if p.is_nan() {
        p
    } else {
        p.clamp(0.0, 1.0)
    }
}

pub fn normal_cdf(x: f64) -> f64 {
    let normal = Normal::new(0.0, 1.0).expect("standard normal");
    clamp_prob(normal.cdf(x))
}

/// Upper tail `P(X >= x)` of a chi-square with `df` degrees of freedom.
pub fn chi2_sf(x: f64, df: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    let chi2 = ChiSquared::new(df).expect("positive degrees of freedom");
    clamp_prob(chi2.sf(x))
}

/// Lower tail `P(F <= x)` with `(d1, d2)` degrees of freedom.
pub fn f_cdf(x: f64, d1: f64, d2: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    let f = FisherSnedecor::new(d1, d2).expect("positive degrees of freedom");
    clamp_prob(f.cdf(x))
}

/// Upper tail `P(F >= x)` with `(d1, d2)` degrees of freedom.
pub fn f_sf(x: f64, d1: f64, d2: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    let f = FisherSnedecor::new(d1, d2).expect("positive degrees of freedom");
    clamp_prob(f.sf(x))
}
