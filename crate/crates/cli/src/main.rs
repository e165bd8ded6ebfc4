mod cli;
mod error;
mod ingest;

use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use chrono::SecondsFormat;
use clap::Parser;
use tsdiag_core::report::{table_to_csv, table_to_json, Verdict};
use tsdiag_core::synth::{ArchParams, LevelBreak, VarianceBreak};
use tsdiag_core::{detect_all, summarize, to_markdown, to_table, DetectConfig, FrequencyKind, SynthSpec};

use crate::cli::{AnalyzeArgs, Cli, Command, Freq, SynthArgs, TableFormat};
use crate::error::CliError;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Analyze(args) => analyze(&args),
        Command::Synth(args) => synth(&args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if !matches!(e, CliError::Detected) {
                eprintln!("error: {e}");
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn analyze(args: &AnalyzeArgs) -> Result<(), CliError> {
    let started = Instant::now();
    let config = DetectConfig {
        alpha: args.alpha,
        variance_segments: args.variance_segments,
        arch_lags: args.arch_lags,
        seasonal_strength_threshold: args.seasonal_threshold,
        stl_robust: args.robust_stl,
    };
    config.validate()?;
    let ts = ingest::read_series(
        &args.input,
        &args.datetime_column,
        &args.value_column,
        args.datetime_format.as_deref(),
    )?;
    let report = detect_all(&ts, &config)?;

    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{}\n", summarize(&report));
    for r in &report.results {
        let _ = writeln!(
            out,
            "{:<18} {:<16} {:>12} {:>8}  {}",
            r.test_id,
            r.spec_or_period.as_deref().unwrap_or("-"),
            r.statistic.map_or("-".into(), |s| format!("{s:.4}")),
            r.p_value.map_or("-".into(), |p| format!("{p:.4}")),
            r.verdict.as_str()
        );
    }

    if let Some(path) = &args.markdown {
        to_markdown(&report, Some(path))?;
    }
    if let Some(path) = &args.table {
        let table = to_table(&report);
        let text = match args.table_format {
            TableFormat::Csv => table_to_csv(&table)?,
            TableFormat::Json => table_to_json(&table),
        };
        std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    }
    if args.verbose {
        eprintln!(
            "input {} | {} rows | frequency {} | {:.1} ms",
            args.input.display(),
            report.n,
            report.frequency.kind,
            started.elapsed().as_secs_f64() * 1e3
        );
    }
    if args.fail_on_detection && report.results.iter().any(|r| r.verdict == Verdict::NonStationarityDetected) {
        return Err(CliError::Detected);
    }
    Ok(())
}

fn pair(flag: &str, raw: &Option<String>) -> Result<Option<(f64, f64)>, CliError> {
    let Some(raw) = raw else { return Ok(None) };
    let parsed = raw
        .split_once(':')
        .and_then(|(a, b)| Some((a.trim().parse().ok()?, b.trim().parse().ok()?)));
    parsed
        .map(Some)
        .ok_or_else(|| CliError::Invalid(format!("--{flag} expects A:B, got {raw:?}")))
}

fn freq_kind(f: Freq) -> FrequencyKind {
    match f {
        Freq::Hourly => FrequencyKind::Hourly,
        Freq::Daily => FrequencyKind::Daily,
        Freq::Weekly => FrequencyKind::Weekly,
        Freq::Monthly => FrequencyKind::Monthly,
        Freq::Quarterly => FrequencyKind::Quarterly,
        Freq::Yearly => FrequencyKind::Yearly,
        Freq::Unknown => FrequencyKind::Unknown,
    }
}

fn synth(args: &SynthArgs) -> Result<(), CliError> {
    let spec = SynthSpec {
        n: args.n,
        freq_kind: freq_kind(args.freq),
        baseline: args.baseline,
        trend_slope: args.trend_slope,
        seasonal_amplitude: args.seasonal_amplitude,
        seasonal_period: args.seasonal_period,
        noise_sigma: args.noise_sigma,
        unit_root: args.unit_root,
        ar_coefficient: args.ar,
        variance_break: pair("variance-break", &args.variance_break)?
            .map(|(at, multiplier)| VarianceBreak { at, multiplier }),
        level_break: pair("level-break", &args.level_break)?.map(|(at, shift)| LevelBreak { at, shift }),
        arch: pair("arch", &args.arch)?.map(|(omega, alpha1)| ArchParams { omega, alpha1 }),
        seed: args.seed,
    };
    let ts = tsdiag_core::generate(&spec)?;

    let sink: Box<dyn Write> = match &args.output {
        Some(path) => Box::new(
            std::fs::File::create(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?,
        ),
        None => Box::new(std::io::stdout().lock()),
    };
    let io = |e: csv::Error| CliError::Io(e.to_string());
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(["datetime", "value"]).map_err(io)?;
    for (t, v) in ts.timestamps().iter().zip(ts.values()) {
        let dt = chrono::DateTime::from_timestamp(*t, 0).expect("synthetic timestamps are in range");
        w.write_record([dt.to_rfc3339_opts(SecondsFormat::Secs, true), v.to_string()])
            .map_err(io)?;
    }
    w.flush().map_err(|e| CliError::Io(e.to_string()))
}
