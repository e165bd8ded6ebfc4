//! Browser bindings for the diagnostics toolkit.
//!
//! Each export takes and returns JSON strings. The plain functions below
//! do the work and are tested natively; the `#[wasm_bindgen]` wrappers only
//! turn their errors into JavaScript exceptions.

use serde::Serialize;
use tsdiag_core::seasonality::{seasonal_strength, stl_decompose, Decomposition};
use tsdiag_core::{
    detect_all, generate, infer_frequency, summarize, to_markdown, DetectConfig, DiagnosticsReport, Frequency,
    SynthSpec, TimeSeries,
};
use wasm_bindgen::prelude::*;

#[derive(Serialize)]
struct Series {
    /// Unix seconds.
    timestamps: Vec<i64>,
    values: Vec<f64>,
    frequency: Frequency,
}

#[derive(Serialize)]
struct Analysis {
    summary: String,
    markdown: String,
    report: DiagnosticsReport,
}

#[derive(Serialize)]
struct Decomposed {
    #[serde(flatten)]
    parts: Decomposition,
    strength: Option<f64>,
}

fn to_json(value: &impl Serialize) -> Result<String, String> {
    serde_json::to_string(value).map_err(|e| e.to_string())
}

/// Generates a synthetic series. Missing spec fields take their defaults.
pub fn synth_json(spec: &str) -> Result<String, String> {
    let spec: SynthSpec = serde_json::from_str(spec).map_err(|e| format!("bad spec: {e}"))?;
    let ts = generate(&spec).map_err(|e| e.to_string())?;
    to_json(&Series {
        timestamps: ts.timestamps().to_vec(),
        values: ts.values().to_vec(),
        frequency: infer_frequency(&ts),
    })
}

/// Runs the full battery. Timestamps are Unix seconds and must be whole.
pub fn analyze_json(timestamps: &[f64], values: &[f64], config: &str) -> Result<String, String> {
    let config: DetectConfig = if config.trim().is_empty() {
        DetectConfig::default()
    } else {
        serde_json::from_str(config).map_err(|e| format!("bad config: {e}"))?
    };
    let stamps = timestamps
        .iter()
        .enumerate()
        .map(|(i, &t)| {
            if t.is_finite() && t.fract() == 0.0 && t.abs() < 1e15 {
                Ok(t as i64)
            } else {
                Err(format!("timestamp {i} is not a whole number of seconds: {t}"))
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    let ts = TimeSeries::from_records(stamps, values.to_vec()).map_err(|e| e.to_string())?;
    let report = detect_all(&ts, &config).map_err(|e| e.to_string())?;
    to_json(&Analysis {
        summary: summarize(&report),
        markdown: to_markdown(&report, None).map_err(|e| e.to_string())?,
        report,
    })
}

/// STL decomposition at `period` together with its seasonal strength.
pub fn decompose_json(values: &[f64], period: usize, robust: bool) -> Result<String, String> {
    let parts = stl_decompose(values, period, robust).map_err(|e| e.to_string())?;
    let strength = seasonal_strength(&parts, "custom", 0.6).ok().map(|r| r.statistic);
    to_json(&Decomposed { parts, strength })
}

#[wasm_bindgen]
pub fn synthesize(spec: &str) -> Result<String, JsError> {
    synth_json(spec).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn analyze(timestamps: &[f64], values: &[f64], config: &str) -> Result<String, JsError> {
    analyze_json(timestamps, values, config).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn decompose(values: &[f64], period: usize, robust: bool) -> Result<String, JsError> {
    decompose_json(values, period, robust).map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::Value;

    fn parse(s: &str) -> Value {
        serde_json::from_str(s).unwrap()
    }

    fn series(spec: &str) -> (Vec<f64>, Vec<f64>) {
        let v = parse(&synth_json(spec).unwrap());
        let nums = |k: &str| v[k].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
        (nums("timestamps"), nums("values"))
    }

    #[test]
    fn synth_fills_defaults() {
        let v = parse(&synth_json(r#"{"n": 50, "freq_kind": "weekly"}"#).unwrap());
        assert_eq!(v["values"].as_array().unwrap().len(), 50);
        assert_eq!(v["frequency"]["kind"], "weekly");
        assert!(synth_json(r#"{"n": 0}"#).unwrap_err().contains("n must be"));
        assert!(synth_json("not json").unwrap_err().starts_with("bad spec"));
    }

    #[test]
    fn analyze_matches_the_native_battery() {
        let spec = r#"{"n": 400, "seasonal_amplitude": 2}"#;
        let (t, y) = series(spec);
        let v = parse(&analyze_json(&t, &y, "").unwrap());
        let native = detect_all(
            &generate(&serde_json::from_str(spec).unwrap()).unwrap(),
            &DetectConfig::default(),
        )
        .unwrap();
        assert_eq!(v["summary"], summarize(&native));
        assert_eq!(v["report"]["results"].as_array().unwrap().len(), native.results.len());
        assert!(v["markdown"].as_str().unwrap().starts_with("# Stationarity diagnostics"));

        let strict = parse(&analyze_json(&t, &y, r#"{"alpha": 0.01}"#).unwrap());
        assert_eq!(strict["report"]["alpha"], 0.01);
        assert!(analyze_json(&t, &y, r#"{"alpha": 2}"#).is_err());
    }

    #[test]
    fn analyze_rejects_fractional_or_unordered_time() {
        let (mut t, y) = series(r#"{"n": 40}"#);
        t[3] += 0.5;
        assert!(analyze_json(&t, &y, "").unwrap_err().contains("timestamp 3"));
        t[3] = t[2];
        assert!(analyze_json(&t, &y, "").is_err());
    }

    #[test]
    fn decomposition_adds_back_up() {
        let (_, y) = series(r#"{"n": 210, "seasonal_amplitude": 3, "noise_sigma": 0.2}"#);
        let v = parse(&decompose_json(&y, 7, false).unwrap());
        let col = |k: &str| v[k].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect::<Vec<_>>();
        let (tr, se, re) = (col("trend"), col("seasonal"), col("remainder"));
        for i in 0..y.len() {
            assert!((tr[i] + se[i] + re[i] - y[i]).abs() < 1e-9);
        }
        assert!(v["strength"].as_f64().unwrap() > 0.9);
        assert!(decompose_json(&y[..10], 7, false).is_err());
    }
}
