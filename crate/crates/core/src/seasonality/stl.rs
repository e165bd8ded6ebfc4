//! STL: seasonal-trend decomposition by loess (Cleveland et al., 1990).
//!
//! A direct port of the reference inner/outer loop with every loess
//! evaluated exactly (no interpolation jumps). Positions are 1-based inside
//! the loess kernels, as in the reference.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecompositionMethod {
    Stl,
    PeriodicMeans,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Decomposition {
    pub trend: Vec<f64>,
    pub seasonal: Vec<f64>,
    pub remainder: Vec<f64>,
    pub period: usize,
    pub method: DecompositionMethod,
}

/// Window lengths and iteration counts of an STL run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StlParams {
    pub period: usize,
    pub seasonal_window: usize,
    pub trend_window: usize,
    pub low_pass_window: usize,
    pub seasonal_degree: usize,
    pub trend_degree: usize,
    pub low_pass_degree: usize,
    pub inner_iterations: usize,
    pub outer_iterations: usize,
}

pub const SEASONAL_WINDOW: usize = 7;

fn odd_at_least(x: f64) -> usize {
    let v = x.ceil() as usize;
    if v.is_multiple_of(2) {
        v + 1
    } else {
        v
    }
}

impl StlParams {
    pub fn new(period: usize, robust: bool) -> Self {
        let ns = SEASONAL_WINDOW as f64;
        Self {
            period,
            seasonal_window: SEASONAL_WINDOW,
            trend_window: odd_at_least(1.5 * period as f64 / (1.0 - 1.5 / ns)),
            low_pass_window: odd_at_least(period as f64),
            seasonal_degree: 0,
            trend_degree: 1,
            low_pass_degree: 1,
            inner_iterations: 2,
            outer_iterations: if robust { 10 } else { 0 },
        }
    }
}

/// Additive STL decomposition with the default windows for `period`.
pub fn stl_decompose(values: &[f64], period: usize, robust: bool) -> Result<Decomposition> {
    stl_with(values, &StlParams::new(period, robust))
}

pub fn stl_with(y: &[f64], p: &StlParams) -> Result<Decomposition> {
    let n = y.len();
    if p.period < 2 {
        return Err(Error::BadPeriod(p.period));
    }
    if n < 3 * p.period {
        return Err(Error::TooShort {
            needed: 3 * p.period,
            got: n,
        });
    }

    let mut trend = vec![0.0; n];
    let mut seasonal = vec![0.0; n];
    let mut weights: Option<Vec<f64>> = None;
    for outer in 0..=p.outer_iterations {
        inner_loop(y, p, weights.as_deref(), &mut seasonal, &mut trend);
        if outer < p.outer_iterations {
            let fit: Vec<f64> = trend.iter().zip(&seasonal).map(|(t, s)| t + s).collect();
            weights = Some(robustness_weights(y, &fit));
        }
    }

    let remainder = (0..n).map(|i| y[i] - trend[i] - seasonal[i]).collect();
    Ok(Decomposition {
        trend,
        seasonal,
        remainder,
        period: p.period,
        method: DecompositionMethod::Stl,
    })
}

fn inner_loop(y: &[f64], p: &StlParams, rw: Option<&[f64]>, seasonal: &mut [f64], trend: &mut [f64]) {
    let n = y.len();
    let np = p.period;
    for _ in 0..p.inner_iterations {
        let detrended: Vec<f64> = y.iter().zip(trend.iter()).map(|(a, b)| a - b).collect();
        let cycle = cycle_subseries(&detrended, np, p.seasonal_window, p.seasonal_degree, rw);
        let filtered = moving_average(&moving_average(&moving_average(&cycle, np), np), 3);
        let mut low_pass = vec![0.0; n];
        ess(&filtered, p.low_pass_window, p.low_pass_degree, None, &mut low_pass);
        for i in 0..n {
            seasonal[i] = cycle[np + i] - low_pass[i];
        }
        let deseasonalized: Vec<f64> = y.iter().zip(seasonal.iter()).map(|(a, b)| a - b).collect();
        ess(&deseasonalized, p.trend_window, p.trend_degree, rw, trend);
    }
}

/// Smooths each cycle-subseries and extends it by one period at both ends;
/// the output has length `n + 2 * period`.
fn cycle_subseries(y: &[f64], np: usize, window: usize, degree: usize, rw: Option<&[f64]>) -> Vec<f64> {
    let n = y.len();
    let mut out = vec![0.0; n + 2 * np];
    let mut scratch = Vec::new();
    for j in 0..np {
        let sub: Vec<f64> = y[j..].iter().step_by(np).copied().collect();
        let sub_w: Option<Vec<f64>> = rw.map(|w| w[j..].iter().step_by(np).copied().collect());
        let k = sub.len();
        let mut smooth = vec![0.0; k + 2];
        ess(&sub, window, degree, sub_w.as_deref(), &mut smooth[1..k + 1]);

        scratch.resize(k, 0.0);
        let nright = window.min(k);
        smooth[0] = est(&sub, window, degree, 0.0, 1, nright, sub_w.as_deref(), &mut scratch)
            .unwrap_or(smooth[1]);
        let nleft = if k >= window { k - window + 1 } else { 1 };
        smooth[k + 1] = est(&sub, window, degree, (k + 1) as f64, nleft, k, sub_w.as_deref(), &mut scratch)
            .unwrap_or(smooth[k]);

        for (m, v) in smooth.into_iter().enumerate() {
            out[m * np + j] = v;
        }
    }
    out
}

fn moving_average(x: &[f64], len: usize) -> Vec<f64> {
    let out_len = x.len() + 1 - len;
    let lenf = len as f64;
    let mut out = Vec::with_capacity(out_len);
    let mut sum: f64 = x[..len].iter().sum();
    out.push(sum / lenf);
    for i in 1..out_len {
        sum += x[i + len - 1] - x[i - 1];
        out.push(sum / lenf);
    }
    out
}

/// Loess smooth of `y` evaluated at every position.
fn ess(y: &[f64], len: usize, degree: usize, rw: Option<&[f64]>, out: &mut [f64]) {
    let n = y.len();
    if n < 2 {
        out[0] = y[0];
        return;
    }
    let mut w = vec![0.0; n];
    let (mut nleft, mut nright) = if n < len { (1, n) } else { (1, len) };
    let nsh = len.div_ceil(2);
    for i in 1..=n {
        if n >= len && i > nsh && nright != n {
            nleft += 1;
            nright += 1;
        }
        out[i - 1] = est(y, len, degree, i as f64, nleft, nright, rw, &mut w).unwrap_or(y[i - 1]);
    }
}

/// Local fit of degree 0 or 1 at `xs` using points `nleft..=nright` (1-based)
/// with tricube weights over a window of `len` points.
#[allow(clippy::too_many_arguments)]
fn est(
    y: &[f64],
    len: usize,
    degree: usize,
    xs: f64,
    nleft: usize,
    nright: usize,
    rw: Option<&[f64]>,
    w: &mut [f64],
) -> Option<f64> {
    let n = y.len();
    let range = n as f64 - 1.0;
    let mut h = (xs - nleft as f64).max(nright as f64 - xs);
    if len > n {
        h += ((len - n) / 2) as f64;
    }
    let h9 = 0.999 * h;
    let h1 = 0.001 * h;

    let mut a = 0.0;
    for j in nleft..=nright {
        let r = (j as f64 - xs).abs();
        let mut wj = 0.0;
        if r <= h9 {
            wj = if r <= h1 {
                1.0
            } else {
                let q = r / h;
                let t = 1.0 - q * q * q;
                t * t * t
            };
            if let Some(rw) = rw {
                wj *= rw[j - 1];
            }
            a += wj;
        }
        w[j - 1] = wj;
    }
    if a <= 0.0 {
        return None;
    }
    for wj in &mut w[nleft - 1..nright] {
        *wj /= a;
    }
    if h > 0.0 && degree > 0 {
        let center: f64 = (nleft..=nright).map(|j| w[j - 1] * j as f64).sum();
        let spread: f64 = (nleft..=nright)
            .map(|j| {
                let d = j as f64 - center;
                w[j - 1] * d * d
            })
            .sum();
        if spread.sqrt() > 0.001 * range {
            let slope = (xs - center) / spread;
            for j in nleft..=nright {
                w[j - 1] *= slope * (j as f64 - center) + 1.0;
            }
        }
    }
    Some((nleft..=nright).map(|j| w[j - 1] * y[j - 1]).sum())
}

/// Bisquare weights on residuals scaled by six median absolute residuals.
fn robustness_weights(y: &[f64], fit: &[f64]) -> Vec<f64> {
    let r: Vec<f64> = y.iter().zip(fit).map(|(a, b)| (a - b).abs()).collect();
    let mut sorted = r.clone();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    let m1 = n / 2;
    let m2 = n - m1 - 1;
    let cmad = 3.0 * (sorted[m1] + sorted[m2]);
    let (c9, c1) = (0.999 * cmad, 0.001 * cmad);
    r.into_iter()
        .map(|ri| {
            if ri <= c1 {
                1.0
            } else if ri <= c9 {
                let u = ri / cmad;
                (1.0 - u * u) * (1.0 - u * u)
            } else {
                0.0
            }
        })
        .collect()
}

/// Centered moving average of window `period` (a 2 x period average for even
/// periods). Entry `t` is defined for `half <= t < n - half`.
pub fn centered_moving_average(y: &[f64], period: usize) -> (usize, Vec<f64>) {
    let half = period / 2;
    let n = y.len();
    if n <= 2 * half {
        return (half, Vec::new());
    }
    let p = period as f64;
    let out = (half..n - half)
        .map(|t| {
            if period % 2 == 1 {
                y[t - half..=t + half].iter().sum::<f64>() / p
            } else {
                (0.5 * y[t - half] + y[t - half + 1..t + half].iter().sum::<f64>() + 0.5 * y[t + half]) / p
            }
        })
        .collect();
    (half, out)
}

/// Classical additive decomposition: centered moving-average trend (ends
/// held at the nearest defined value) and per-phase means of the detrended
/// series, centered to sum to zero over a cycle.
pub fn periodic_means_decompose(y: &[f64], period: usize) -> Result<Decomposition> {
    let n = y.len();
    if period < 2 {
        return Err(Error::BadPeriod(period));
    }
    if n < 3 * period {
        return Err(Error::TooShort {
            needed: 3 * period,
            got: n,
        });
    }
    let (half, ma) = centered_moving_average(y, period);
    let trend: Vec<f64> = (0..n)
        .map(|t| ma[t.clamp(half, n - half - 1) - half])
        .collect();
    let mut sums = vec![0.0; period];
    let mut counts = vec![0usize; period];
    for t in half..n - half {
        sums[t % period] += y[t] - trend[t];
        counts[t % period] += 1;
    }
    let mut phase: Vec<f64> = sums.iter().zip(&counts).map(|(s, c)| s / *c as f64).collect();
    let offset = phase.iter().sum::<f64>() / period as f64;
    phase.iter_mut().for_each(|v| *v -= offset);

    let seasonal: Vec<f64> = (0..n).map(|t| phase[t % period]).collect();
    let remainder = (0..n).map(|t| y[t] - trend[t] - seasonal[t]).collect();
    Ok(Decomposition {
        trend,
        seasonal,
        remainder,
        period,
        method: DecompositionMethod::PeriodicMeans,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn norm2(x: &[f64]) -> f64 {
        x.iter().map(|v| v * v).sum()
    }

    #[test]
    fn default_windows() {
        let p = StlParams::new(7, false);
        assert_eq!((p.trend_window, p.low_pass_window), (15, 7));
        let p = StlParams::new(12, true);
        assert_eq!((p.trend_window, p.low_pass_window, p.outer_iterations), (23, 13, 10));
        let p = StlParams::new(365, false);
        assert_eq!((p.trend_window, p.low_pass_window), (697, 365));
    }

    #[test]
    fn recovers_pure_sinusoid() {
        let y: Vec<f64> = (0..210)
            .map(|t| (2.0 * std::f64::consts::PI * t as f64 / 7.0).sin())
            .collect();
        let d = stl_decompose(&y, 7, false).unwrap();
        assert!(norm2(&d.remainder) / norm2(&y) < 0.02);
    }

    #[test]
    fn constant_goes_to_trend() {
        let y = vec![4.25; 60];
        for robust in [false, true] {
            let d = stl_decompose(&y, 12, robust).unwrap();
            assert!(d.seasonal.iter().all(|s| s.abs() < 1e-10));
            assert!(d.remainder.iter().all(|r| r.abs() < 1e-10));
            assert!(d.trend.iter().all(|t| (t - 4.25).abs() < 1e-10));
        }
    }

    #[test]
    fn additive_reconstruction() {
        let mut state = 7u64;
        let y: Vec<f64> = (0..150)
            .map(|t| {
                state ^= state << 13;
                state ^= state >> 7;
                state ^= state << 17;
                (state % 1000) as f64 / 100.0 + 0.05 * t as f64
            })
            .collect();
        let scale = norm2(&y).sqrt();
        for d in [
            stl_decompose(&y, 10, false).unwrap(),
            stl_decompose(&y, 10, true).unwrap(),
            periodic_means_decompose(&y, 10).unwrap(),
        ] {
            for (i, &yi) in y.iter().enumerate() {
                let back = d.trend[i] + d.seasonal[i] + d.remainder[i];
                assert!((back - yi).abs() <= 1e-8 * scale);
            }
        }
    }

    #[test]
    fn periodic_means_cycle_sums_to_zero() {
        let y: Vec<f64> = (0..48).map(|t| [3.0, -1.0, 0.5, 2.0][t % 4] + t as f64).collect();
        let d = periodic_means_decompose(&y, 4).unwrap();
        for cycle in d.seasonal.chunks_exact(4) {
            assert!(cycle.iter().sum::<f64>().abs() < 1e-6);
        }
    }

    #[test]
    fn bad_inputs() {
        assert_eq!(stl_decompose(&[1.0; 20], 1, false), Err(Error::BadPeriod(1)));
        assert_eq!(
            stl_decompose(&[1.0; 20], 7, false),
            Err(Error::TooShort { needed: 21, got: 20 })
        );
    }

    #[test]
    fn centered_average_even_and_odd() {
        let y: Vec<f64> = (0..10).map(f64::from).collect();
        let (h, ma) = centered_moving_average(&y, 3);
        assert_eq!(h, 1);
        assert_eq!(ma, (1..9).map(f64::from).collect::<Vec<_>>());
        let (h, ma) = centered_moving_average(&y, 4);
        assert_eq!(h, 2);
        assert_eq!(ma, (2..8).map(f64::from).collect::<Vec<_>>());
    }
}
