//! Seeded synthetic series with known stationarity properties.
//!
//! Randomness comes from xoshiro256++ seeded through SplitMix64
//! (`seed_from_u64`), uniforms take the top 53 bits of each draw, and normals
//! use the Marsaglia polar method with `libm` transcendental functions, so a
//! given spec produces the same bits on every platform.

use chrono::{DateTime, Months, TimeZone, Utc};
use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::{FrequencyKind, TimeSeries, MIN_LENGTH};

const ARCH_BURN_IN: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VarianceBreak {
    /// Position as a fraction of `n`, in (0, 1).
    pub at: f64,
    pub multiplier: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LevelBreak {
    pub at: f64,
    pub shift: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArchParams {
    pub omega: f64,
    pub alpha1: f64,
}

/// Recipe for `y_t = baseline + slope t + amplitude sin(2 pi t / period) + e_t`.
///
/// `e_t` is iid `N(0, sigma^2)` by default, its running sum with
/// `unit_root`, an AR(1) with `ar_coefficient`, or an ARCH(1) recursion with
/// `arch` (which ignores `noise_sigma`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SynthSpec {
    pub n: usize,
    pub freq_kind: FrequencyKind,
    pub baseline: f64,
    pub trend_slope: f64,
    pub seasonal_amplitude: f64,
    pub seasonal_period: usize,
    pub noise_sigma: f64,
    pub unit_root: bool,
    pub ar_coefficient: Option<f64>,
    pub variance_break: Option<VarianceBreak>,
    pub level_break: Option<LevelBreak>,
    pub arch: Option<ArchParams>,
    pub seed: u64,
}

impl Default for SynthSpec {
    fn default() -> Self {
        Self {
            n: 1000,
            freq_kind: FrequencyKind::Daily,
            baseline: 0.0,
            trend_slope: 0.0,
            seasonal_amplitude: 0.0,
            seasonal_period: 7,
            noise_sigma: 1.0,
            unit_root: false,
            ar_coefficient: None,
            variance_break: None,
            level_break: None,
            arch: None,
            seed: 42,
        }
    }
}

impl SynthSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::BadSpec(m.to_string()));
        if self.n < MIN_LENGTH {
            return bad(&format!("n must be at least {MIN_LENGTH}, got {}", self.n));
        }
        let reals = [self.baseline, self.trend_slope, self.seasonal_amplitude, self.noise_sigma];
        if reals.iter().any(|v| !v.is_finite()) {
            return bad("parameters must be finite");
        }
        if self.noise_sigma < 0.0 {
            return bad("noise_sigma must be non-negative");
        }
        if self.seasonal_amplitude != 0.0 && self.seasonal_period < 2 {
            return bad("seasonal_period must be at least 2");
        }
        let processes = usize::from(self.unit_root)
            + usize::from(self.arch.is_some())
            + usize::from(self.ar_coefficient.is_some());
        if processes > 1 {
            return bad("at most one of unit_root, ar_coefficient and arch may be set");
        }
        if let Some(phi) = self.ar_coefficient {
            if phi.is_nan() || phi.abs() >= 1.0 {
                return bad("ar_coefficient must lie in (-1, 1)");
            }
        }
        if let Some(a) = self.arch {
            if !(a.omega > 0.0 && a.omega.is_finite() && (0.0..1.0).contains(&a.alpha1)) {
                return bad("arch needs omega > 0 and 0 <= alpha1 < 1");
            }
        }
        if let Some(b) = self.variance_break {
            if !(b.at > 0.0 && b.at < 1.0) || !(b.multiplier >= 0.0 && b.multiplier.is_finite()) {
                return bad("variance_break needs 0 < at < 1 and a non-negative multiplier");
            }
        }
        if let Some(b) = self.level_break {
            if !(b.at > 0.0 && b.at < 1.0) || !b.shift.is_finite() {
                return bad("level_break needs 0 < at < 1 and a finite shift");
            }
        }
        Ok(())
    }
}

/// Portable standard-normal stream.
pub struct NormalStream {
    rng: Xoshiro256PlusPlus,
    spare: Option<f64>,
}

impl NormalStream {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: Xoshiro256PlusPlus::seed_from_u64(seed),
            spare: None,
        }
    }

    /// Uniform on [0, 1) with 53 random bits.
    pub fn uniform(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn next_normal(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        loop {
            let u = 2.0 * self.uniform() - 1.0;
            let v = 2.0 * self.uniform() - 1.0;
            let s = u * u + v * v;
            if s > 0.0 && s < 1.0 {
                let f = libm::sqrt(-2.0 * libm::log(s) / s);
                self.spare = Some(v * f);
                return u * f;
            }
        }
    }
}

pub fn synthetic_start() -> DateTime<Utc> {
    Utc.with_ymd_and_hms(2020, 1, 1, 0, 0, 0).unwrap()
}

/// Timestamps (epoch seconds) for `n` observations of `kind` from 2020-01-01.
/// `Unknown` cycles through 1, 2 and 3 day gaps.
pub fn synthetic_timestamps(kind: FrequencyKind, n: usize) -> Vec<i64> {
    let start = synthetic_start();
    let fixed = |step: i64| (0..n as i64).map(|i| start.timestamp() + i * step).collect();
    let months = |step: u32| {
        (0..n as u32)
            .map(|i| (start + Months::new(i * step)).timestamp())
            .collect()
    };
    match kind {
        FrequencyKind::Hourly => fixed(3_600),
        FrequencyKind::Daily => fixed(86_400),
        FrequencyKind::Weekly => fixed(604_800),
        FrequencyKind::Monthly => months(1),
        FrequencyKind::Quarterly => months(3),
        FrequencyKind::Yearly => months(12),
        FrequencyKind::Unknown => {
            let mut t = start.timestamp();
            (0..n)
                .map(|i| {
                    let now = t;
                    t += 86_400 * (1 + (i % 3) as i64);
                    now
                })
                .collect()
        }
    }
}

/// Generates the series described by `spec`.
pub fn generate(spec: &SynthSpec) -> Result<TimeSeries> {
    spec.validate()?;
    let n = spec.n;
    let mut normals = NormalStream::new(spec.seed);
    let variance_from = spec.variance_break.map(|b| ((b.at * n as f64).floor() as usize, b.multiplier));
    let level_from = spec.level_break.map(|b| ((b.at * n as f64).floor() as usize, b.shift));

    let sigma_at = |t: usize| match variance_from {
        Some((at, m)) if t >= at => spec.noise_sigma * m,
        _ => spec.noise_sigma,
    };

    let mut noise = Vec::with_capacity(n);
    if let Some(arch) = spec.arch {
        let mut prev = 0.0_f64;
        for t in 0..n + ARCH_BURN_IN {
            let e = normals.next_normal() * libm::sqrt(arch.omega + arch.alpha1 * prev * prev);
            if t >= ARCH_BURN_IN {
                let scale = match variance_from {
                    Some((at, m)) if t - ARCH_BURN_IN >= at => m,
                    _ => 1.0,
                };
                noise.push(e * scale);
            }
            prev = e;
        }
    } else {
        let mut state = 0.0_f64;
        for t in 0..n {
            let shock = sigma_at(t) * normals.next_normal();
            state = if spec.unit_root {
                state + shock
            } else if let Some(phi) = spec.ar_coefficient {
                if t == 0 {
                    shock / libm::sqrt(1.0 - phi * phi)
                } else {
                    phi * state + shock
                }
            } else {
                shock
            };
            noise.push(state);
        }
    }

    let omega = 2.0 * std::f64::consts::PI / spec.seasonal_period.max(1) as f64;
    let values = (0..n)
        .map(|t| {
            let tf = t as f64;
            let shift = match level_from {
                Some((at, s)) if t >= at => s,
                _ => 0.0,
            };
            spec.baseline
                + spec.trend_slope * tf
                + spec.seasonal_amplitude * libm::sin(omega * tf)
                + shift
                + noise[t]
        })
        .collect();

    TimeSeries::from_records(synthetic_timestamps(spec.freq_kind, n), values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::infer_frequency;

    fn quiet() -> SynthSpec {
        SynthSpec {
            noise_sigma: 0.0,
            n: 100,
            ..SynthSpec::default()
        }
    }

    #[test]
    fn all_randomness_off() {
        let ts = generate(&SynthSpec {
            baseline: 5.0,
            ..quiet()
        })
        .unwrap();
        assert!(ts.values().iter().all(|v| *v == 5.0));
    }

    #[test]
    fn deterministic_trend() {
        let ts = generate(&SynthSpec {
            trend_slope: 0.1,
            ..quiet()
        })
        .unwrap();
        assert_eq!(ts.values()[99] - ts.values()[0], 9.9);
    }

    #[test]
    fn same_seed_same_bits() {
        let spec = SynthSpec {
            ar_coefficient: Some(0.5),
            seasonal_amplitude: 1.0,
            level_break: Some(LevelBreak { at: 0.5, shift: 2.0 }),
            ..SynthSpec::default()
        };
        let a = generate(&spec).unwrap();
        let b = generate(&spec).unwrap();
        let bits = |t: &TimeSeries| t.values().iter().map(|v| v.to_bits()).collect::<Vec<_>>();
        assert_eq!(bits(&a), bits(&b));
        let c = generate(&SynthSpec { seed: 43, ..spec }).unwrap();
        assert_ne!(bits(&a), bits(&c));
    }

    #[test]
    fn normal_moments() {
        let mut s = NormalStream::new(1);
        let draws: Vec<f64> = (0..100_000).map(|_| s.next_normal()).collect();
        let mean = draws.iter().sum::<f64>() / draws.len() as f64;
        let var = draws.iter().map(|z| (z - mean) * (z - mean)).sum::<f64>() / draws.len() as f64;
        assert!(mean.abs() < 0.02, "{mean}");
        assert!((var - 1.0).abs() < 0.02, "{var}");
    }

    #[test]
    fn timestamps_follow_frequency() {
        for kind in FrequencyKind::ALL {
            let ts = generate(&SynthSpec {
                freq_kind: kind,
                n: 40,
                ..SynthSpec::default()
            })
            .unwrap();
            assert_eq!(infer_frequency(&ts).kind, kind);
        }
    }

    #[test]
    fn invalid_specs() {
        for spec in [
            SynthSpec { n: 0, ..SynthSpec::default() },
            SynthSpec { noise_sigma: -1.0, ..SynthSpec::default() },
            SynthSpec { unit_root: true, arch: Some(ArchParams { omega: 0.2, alpha1: 0.7 }), ..SynthSpec::default() },
            SynthSpec { arch: Some(ArchParams { omega: 0.2, alpha1: 1.0 }), ..SynthSpec::default() },
            SynthSpec { level_break: Some(LevelBreak { at: 1.0, shift: 1.0 }), ..SynthSpec::default() },
            SynthSpec { ar_coefficient: Some(1.0), ..SynthSpec::default() },
        ] {
            assert!(matches!(generate(&spec), Err(Error::BadSpec(_))), "{spec:?}");
        }
    }
}
