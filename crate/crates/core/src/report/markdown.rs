use std::fmt::Write as _;
use std::path::Path;

use chrono::{DateTime, SecondsFormat};

use crate::error::{Error, Result};

use super::{summarize, Category, DiagnosticsReport, TestResult, Verdict};

/// Renders the report as Markdown and, when `path` is given, writes exactly
/// the returned text there.
pub fn to_markdown(report: &DiagnosticsReport, path: Option<&Path>) -> Result<String> {
    let text = render(report);
    if let Some(path) = path {
        std::fs::write(path, text.as_bytes()).map_err(|e| Error::FileWriteError {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
    }
    Ok(text)
}

fn render(report: &DiagnosticsReport) -> String {
    let mut md = String::new();
    let w = &mut md;
    let _ = writeln!(w, "# Stationarity diagnostics\n");
    let _ = writeln!(w, "- Observations: {}", report.n);
    let _ = writeln!(w, "- Start: {}", iso(report.start));
    let _ = writeln!(w, "- End: {}", iso(report.end));
    let _ = writeln!(
        w,
        "- Frequency: {} (median spacing {} s)",
        report.frequency.kind,
        report.frequency.median_spacing
    );
    let _ = writeln!(w, "- Significance level: {}\n", report.alpha);

    let _ = writeln!(w, "## Summary\n\n{}\n\n{}\n", summarize(report), report.overall_note);

    let d = &report.trend_diagnosis;
    let _ = writeln!(w, "## Trend\n\n**Diagnosis: {}.** {}\n", d.class.as_str(), d.explanation);
    let _ = writeln!(w, "| Test | Specification | Statistic | p-value | Critical value | Verdict |");
    let _ = writeln!(w, "|---|---|---:|---:|---:|---|");
    for r in report.rows(Category::Trend) {
        let cv = r.critical_values.map(|c| num(c.at(r.alpha))).unwrap_or_else(|| "n/a".into());
        let _ = writeln!(
            w,
            "| {} | {} | {} | {} | {} | {} |",
            r.test_id,
            r.spec_or_period.as_deref().unwrap_or(""),
            opt_num(r.statistic),
            p_value(r.p_value),
            cv,
            verdict(r.verdict)
        );
    }

    let _ = writeln!(w, "\n## Variance\n");
    let _ = writeln!(w, "| Test | Statistic | p-value | Verdict |");
    let _ = writeln!(w, "|---|---:|---:|---|");
    for r in report.rows(Category::Variance) {
        let _ = writeln!(
            w,
            "| {} | {} | {} | {} |",
            r.test_id,
            opt_num(r.statistic),
            p_value(r.p_value),
            verdict(r.verdict)
        );
    }

    let _ = writeln!(w, "\n## Seasonality\n");
    let seasonal: Vec<&TestResult> = report.rows(Category::Seasonality).collect();
    if seasonal.is_empty() {
        let _ = writeln!(w, "No seasonal periods were tested.");
    } else {
        let _ = writeln!(w, "| Test | Cycle | Statistic | p-value | Verdict |");
        let _ = writeln!(w, "|---|---|---:|---:|---|");
        for r in seasonal {
            let _ = writeln!(
                w,
                "| {} | {} | {} | {} | {} |",
                r.test_id,
                r.spec_or_period.as_deref().unwrap_or(""),
                opt_num(r.statistic),
                p_value(r.p_value),
                verdict(r.verdict)
            );
        }
    }

    let _ = writeln!(w, "\n## Notes\n");
    for note in report.trend_diagnosis.notes.iter().chain(&report.notes) {
        let _ = writeln!(w, "- {note}");
    }
    for r in &report.results {
        let label = match &r.spec_or_period {
            Some(s) => format!("{} ({s})", r.test_id),
            None => r.test_id.clone(),
        };
        for note in &r.notes {
            let _ = writeln!(w, "- **{label}:** {note}");
        }
    }
    md
}

fn iso(epoch: i64) -> String {
    DateTime::from_timestamp(epoch, 0)
        .map(|d| d.to_rfc3339_opts(SecondsFormat::Secs, true))
        .unwrap_or_else(|| epoch.to_string())
}

fn num(x: f64) -> String {
    let s = format!("{x:.4}");
    if s == "-0.0000" {
        "0.0000".into()
    } else {
        s
    }
}

fn opt_num(x: Option<f64>) -> String {
    x.map(num).unwrap_or_else(|| "n/a".into())
}

fn p_value(p: Option<f64>) -> String {
    match p {
        Some(p) if p < 1e-4 => "<0.0001".into(),
        other => opt_num(other),
    }
}

fn verdict(v: Verdict) -> &'static str {
    match v {
        Verdict::StationaryCompatible => "stationary compatible",
        Verdict::NonStationarityDetected => "non-stationarity detected",
        Verdict::Skipped => "skipped",
        Verdict::Inconclusive => "inconclusive",
    }
}
