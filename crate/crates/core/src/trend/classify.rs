use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::notes;

use super::{TrendSpec, UnitRootResult, UnitRootTest};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrendClass {
    Stationary,
    UnitRoot,
    DeterministicTrend,
    StructuralBreak,
    Inconclusive,
}

impl TrendClass {
    pub fn as_str(self) -> &'static str {
        match self {
            TrendClass::Stationary => "stationary",
            TrendClass::UnitRoot => "unit root",
            TrendClass::DeterministicTrend => "deterministic trend",
            TrendClass::StructuralBreak => "structural break",
            TrendClass::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrendDiagnosis {
    pub class: TrendClass,
    pub explanation: String,
    pub notes: Vec<String>,
}

struct TrendRuns<'a> {
    adf_c: &'a UnitRootResult,
    adf_ct: &'a UnitRootResult,
    kpss_c: &'a UnitRootResult,
    kpss_ct: &'a UnitRootResult,
    pp_c: &'a UnitRootResult,
    pp_ct: &'a UnitRootResult,
    za: &'a UnitRootResult,
}

fn pick(results: &[UnitRootResult]) -> Result<TrendRuns<'_>> {
    if results.len() != 7 {
        return Err(Error::WrongResultSet(format!("expected 7 results, got {}", results.len())));
    }
    let find = |test: UnitRootTest, spec: Option<TrendSpec>| -> Result<&UnitRootResult> {
        let mut hits = results
            .iter()
            .filter(|r| r.test == test && spec.is_none_or(|s| r.spec == s));
        match (hits.next(), hits.next()) {
            (Some(r), None) => Ok(r),
            (None, _) => Err(Error::WrongResultSet(format!("missing {}", test.id()))),
            (Some(_), Some(_)) => Err(Error::WrongResultSet(format!("duplicate {}", test.id()))),
        }
    };
    Ok(TrendRuns {
        adf_c: find(UnitRootTest::Adf, Some(TrendSpec::ConstantOnly))?,
        adf_ct: find(UnitRootTest::Adf, Some(TrendSpec::ConstantTrend))?,
        kpss_c: find(UnitRootTest::Kpss, Some(TrendSpec::ConstantOnly))?,
        kpss_ct: find(UnitRootTest::Kpss, Some(TrendSpec::ConstantTrend))?,
        pp_c: find(UnitRootTest::Pp, Some(TrendSpec::ConstantOnly))?,
        pp_ct: find(UnitRootTest::Pp, Some(TrendSpec::ConstantTrend))?,
        za: find(UnitRootTest::ZivotAndrews, None)?,
    })
}

/// Joint reading of the seven trend runs.
///
/// 1. ADF(c) rejects and KPSS(c) does not: stationary.
/// 2. ADF(c) does not reject, ADF(ct) rejects and KPSS(ct) does not: deterministic trend.
/// 3. Neither ADF run rejects and both KPSS runs reject: unit root, or a
///    structural break when Zivot-Andrews rejects with a located break.
/// 4. Anything else: inconclusive.
///
/// Phillips-Perron does not vote separately; disagreement with ADF adds a note.
pub fn classify_trend(results: &[UnitRootResult]) -> Result<TrendDiagnosis> {
    let r = pick(results)?;
    let adf_c_rejects = r.adf_c.rejects_null();
    let adf_ct_rejects = r.adf_ct.rejects_null();
    let kpss_c_rejects = r.kpss_c.rejects_null();
    let kpss_ct_rejects = r.kpss_ct.rejects_null();

    let mut notes = Vec::new();
    let (class, explanation) = if adf_c_rejects && !kpss_c_rejects {
        (
            TrendClass::Stationary,
            "ADF rejects a unit root and KPSS does not reject level stationarity.".to_string(),
        )
    } else if !adf_c_rejects && adf_ct_rejects && !kpss_ct_rejects {
        notes.push(notes::DETERMINISTIC_TREND.to_string());
        (
            TrendClass::DeterministicTrend,
            "A unit root is rejected only once a linear trend is allowed, and KPSS accepts trend stationarity.".to_string(),
        )
    } else if !adf_c_rejects && !adf_ct_rejects && kpss_c_rejects && kpss_ct_rejects {
        match r.za.break_index {
            Some(index) if r.za.rejects_null() => {
                notes.push(notes::za_break(index));
                (
                    TrendClass::StructuralBreak,
                    format!("ADF and KPSS both point to a unit root, but Zivot-Andrews rejects it once a level shift near index {index} is allowed."),
                )
            }
            _ => {
                notes.push(notes::UNIT_ROOT.to_string());
                (
                    TrendClass::UnitRoot,
                    "ADF cannot reject a unit root under either specification and KPSS rejects stationarity under both.".to_string(),
                )
            }
        }
    } else {
        (
            TrendClass::Inconclusive,
            format!(
                "Trend tests disagree (ADF rejects: constant-only {}, constant-trend {}; KPSS rejects: constant-only {}, constant-trend {}).",
                yes_no(adf_c_rejects),
                yes_no(adf_ct_rejects),
                yes_no(kpss_c_rejects),
                yes_no(kpss_ct_rejects)
            ),
        )
    };

    if r.pp_c.detected != r.adf_c.detected || r.pp_ct.detected != r.adf_ct.detected {
        notes.push(notes::ADF_PP_DISAGREE.to_string());
    }

    Ok(TrendDiagnosis {
        class,
        explanation,
        notes,
    })
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}
