//! Every human-readable note the battery can emit, in one place so reports
//! stay stable under golden tests.

pub const UNIT_ROOT: &str = "Unit root detected - consider differencing";
pub const DETERMINISTIC_TREND: &str = "Deterministic trend detected - stationary after detrending";

pub const ADF_PP_DISAGREE: &str =
    "ADF and Phillips-Perron disagree on the unit root - ADF verdict used for the diagnosis";
pub const ADF_CONSTANT_HINT: &str =
    "If the constant-plus-trend run rejects, the trend is deterministic rather than stochastic";

pub const KPSS_INTERPOLATED: &str = "p-value is an interpolated bound";
pub const KPSS_LEVEL_REJECTED: &str =
    "Level stationarity rejected - the mean drifts; check the trend specification or difference";
pub const KPSS_TREND_REJECTED: &str =
    "Trend stationarity rejected - detrending is not enough, consider differencing";

pub const ZA_CAVEAT: &str = "Caveat: Zivot-Andrews may flag a break in smooth trends";
pub const ZA_UNIT_ROOT: &str =
    "Unit root not rejected even allowing for one level break - consider differencing";

pub fn za_break(index: usize) -> String {
    format!("Possible structural break at index {index} - consider a level-shift dummy or splitting the series")
}

pub const LEVENE_DETECTED: &str =
    "Variance differs across segments - consider a log or Box-Cox transform";
pub const BARTLETT_CAVEAT: &str =
    "Caveat: Bartlett is sensitive to non-normality; prefer Levene on heavy-tailed data";
pub const BARTLETT_DETECTED: &str =
    "Segment variances differ - consider a log or Box-Cox transform";
pub const ARCH_CAVEAT: &str =
    "Caveat: ARCH LM may trigger on autocorrelated levels, not only conditional heteroskedasticity";
pub const ARCH_DETECTED: &str =
    "Volatility clustering detected - consider a GARCH-type model or variance stabilization";
pub const VARIANCE_RATIO_SCOPE: &str =
    "Compares the first and last thirds; targets monotone variance drift";
pub const VARIANCE_RATIO_DETECTED: &str =
    "Variance drifts over time - consider a log or Box-Cox transform";

pub const FREQUENCY_UNKNOWN: &str = "frequency unknown - seasonality tests skipped";

pub fn seasonal_detected(label: &str, period: usize) -> String {
    format!("{label} seasonality detected (period {period}) - consider seasonal differencing")
}

pub fn seasonal_tested(label: &str, period: usize) -> String {
    format!("tested {label} cycle (period {period})")
}

pub fn skipped(reason: &str) -> String {
    format!("Test skipped: {reason}")
}

pub const OVERALL: &str = "Categories are reported separately rather than as one stationary/non-stationary verdict; each calls for a different remedy (differencing, detrending, variance stabilization, seasonal differencing).";
