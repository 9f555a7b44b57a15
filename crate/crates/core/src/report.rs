//! Report records and their JSON/CSV encodings.
//!
//! Every emitted document re-parses into the originating record type with
//! integer fields intact; arbitrary-precision counts travel as decimal
//! strings. Floats are fixed at six decimals so identical invocations
//! produce byte-identical reports.

use num::BigInt;
use serde::{Deserialize, Serialize};

use crate::congruence::UnitGroupCount;
use crate::lps::{GirthReport, GirthSurveyRow, LpsGraph};
use crate::quaternion::{Place, QuaternionAlgebra};
use crate::systole::{Survey, SurveyRow, SystoleBracket};
use crate::ternary::RepOutcome;

/// Round to the six decimals the reports carry.
pub fn round6(x: f64) -> f64 {
    (x * 1e6).round() / 1e6
}

fn fmt6(x: f64) -> String {
    format!("{x:.6}")
}

fn opt6(x: Option<f64>) -> String {
    x.map(fmt6).unwrap_or_default()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraReport {
    pub a: i64,
    pub b: i64,
    pub division: bool,
    pub ramified: Vec<u64>,
    pub ramified_at_infinity: bool,
    pub fuchsian: bool,
}

impl AlgebraReport {
    pub fn new(alg: &QuaternionAlgebra) -> Self {
        let places = alg.ramified_places();
        AlgebraReport {
            a: alg.a,
            b: alg.b,
            division: alg.is_division(),
            ramified: places
                .iter()
                .filter_map(|p| match p {
                    Place::Prime(p) => Some(*p),
                    Place::Infinity => None,
                })
                .collect(),
            ramified_at_infinity: places.contains(&Place::Infinity),
            fuchsian: alg.is_fuchsian_input(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexReport {
    pub a: i64,
    pub b: i64,
    pub q: u64,
    /// decimal string; counts outgrow fixed-width integers
    pub index: String,
    pub method: String,
}

impl IndexReport {
    pub fn new(alg: &QuaternionAlgebra, count: &UnitGroupCount) -> Self {
        IndexReport {
            a: alg.a,
            b: alg.b,
            q: count.q,
            index: count.count.to_string(),
            method: count.method.as_str().to_string(),
        }
    }

    pub fn index_value(&self) -> BigInt {
        self.index.parse().expect("index field is a decimal integer")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TernaryReport {
    pub form: [i64; 3],
    pub n: i64,
    pub outcome: String,
    pub witness: Option<[i64; 3]>,
    pub place: Option<String>,
    pub nodes_examined: Option<u64>,
}

impl TernaryReport {
    pub fn new(form: [i64; 3], n: i64, outcome: &RepOutcome) -> Self {
        let (outcome_str, witness, place, nodes) = match outcome {
            RepOutcome::Found(y1, y2, y3) => ("found", Some([*y1, *y2, *y3]), None, None),
            RepOutcome::LocallyImpossible(p) => {
                ("locally_impossible", None, Some(p.to_string()), None)
            }
            RepOutcome::Unknown { nodes_examined } => {
                ("unknown", None, None, Some(*nodes_examined))
            }
        };
        TernaryReport {
            form,
            n,
            outcome: outcome_str.to_string(),
            witness,
            place,
            nodes_examined: nodes,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystoleReport {
    pub a: i64,
    pub b: i64,
    pub q: u64,
    pub index: String,
    pub trace_lower: u64,
    pub trace_upper: Option<u64>,
    pub witness: Option<[i64; 4]>,
    pub sys_lower: f64,
    pub sys_upper: Option<f64>,
    /// the weaker 2 log |Tr| ceiling, reported alongside the exact length
    pub sys_upper_trace_log: Option<f64>,
    pub exhaustive: bool,
    /// candidate n values the search could not decide
    pub unresolved: Vec<i64>,
    pub genus_estimate: f64,
}

impl SystoleReport {
    pub fn new(
        alg: &QuaternionAlgebra,
        bracket: &SystoleBracket,
        index: &BigInt,
        genus: f64,
    ) -> Self {
        use num::ToPrimitive;
        SystoleReport {
            a: alg.a,
            b: alg.b,
            q: bracket.q,
            index: index.to_string(),
            trace_lower: bracket.trace_lower,
            trace_upper: bracket.trace_upper,
            witness: bracket.witness.as_ref().map(|w| {
                [
                    w.coords[0].to_i64().expect("witness coordinate fits i64"),
                    w.coords[1].to_i64().expect("witness coordinate fits i64"),
                    w.coords[2].to_i64().expect("witness coordinate fits i64"),
                    w.coords[3].to_i64().expect("witness coordinate fits i64"),
                ]
            }),
            sys_lower: round6(bracket.sys_lower()),
            sys_upper: bracket.sys_upper().map(round6),
            sys_upper_trace_log: bracket.sys_upper_trace_log().map(round6),
            exhaustive: bracket.exhaustive,
            unresolved: bracket.unresolved.iter().map(|c| c.n).collect(),
            genus_estimate: round6(genus),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurveyRowReport {
    pub q: u64,
    pub index: String,
    pub log_index: f64,
    pub sys_lower: f64,
    pub sys_upper: Option<f64>,
    pub defect: Option<f64>,
    pub exhaustive: bool,
}

impl SurveyRowReport {
    pub fn new(row: &SurveyRow) -> Self {
        SurveyRowReport {
            q: row.q,
            index: row.index.to_string(),
            log_index: round6(row.log_index),
            sys_lower: round6(row.sys_lower),
            sys_upper: row.sys_upper.map(round6),
            defect: row.defect.map(round6),
            exhaustive: row.exhaustive,
        }
    }
}

pub const SURVEY_CSV_HEADER: &str = "q,index,log_index,sys_lower,sys_upper,defect,exhaustive";

pub fn survey_to_csv(survey: &Survey) -> String {
    let mut out = String::from(SURVEY_CSV_HEADER);
    out.push('\n');
    for row in &survey.rows {
        let r = SurveyRowReport::new(row);
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.q,
            r.index,
            fmt6(r.log_index),
            fmt6(r.sys_lower),
            opt6(r.sys_upper),
            opt6(r.defect),
            r.exhaustive
        ));
    }
    out
}

pub fn parse_survey_csv(text: &str) -> Result<Vec<SurveyRowReport>, String> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h == SURVEY_CSV_HEADER => {}
        other => return Err(format!("bad survey header: {other:?}")),
    }
    let mut rows = Vec::new();
    for line in lines {
        if line.is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 7 {
            return Err(format!("bad survey row: {line}"));
        }
        let opt = |s: &str| -> Result<Option<f64>, String> {
            if s.is_empty() {
                Ok(None)
            } else {
                s.parse().map(Some).map_err(|e| format!("{e}: {s}"))
            }
        };
        rows.push(SurveyRowReport {
            q: f[0].parse().map_err(|e| format!("{e}: {line}"))?,
            index: f[1].to_string(),
            log_index: f[2].parse().map_err(|e| format!("{e}: {line}"))?,
            sys_lower: f[3].parse().map_err(|e| format!("{e}: {line}"))?,
            sys_upper: opt(f[4])?,
            defect: opt(f[5])?,
            exhaustive: f[6].parse().map_err(|e| format!("{e}: {line}"))?,
        });
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LpsReport {
    pub p: u64,
    pub q: u64,
    pub group: String,
    pub vertices: u64,
    pub bipartite: bool,
    pub girth: u32,
    pub ratio: f64,
    pub ceiling: f64,
}

impl LpsReport {
    pub fn new(graph: &LpsGraph, report: &GirthReport) -> Self {
        LpsReport {
            p: graph.p,
            q: graph.q,
            group: graph.group.as_str().to_string(),
            vertices: graph.vertex_count() as u64,
            bipartite: graph.bipartite,
            girth: report.girth,
            ratio: round6(report.ratio),
            ceiling: round6(report.ceiling),
        }
    }
}

pub const LPS_CSV_HEADER: &str = "q,vertices,group,girth,ratio,ceiling";

/// Computed rows become CSV lines; skipped rows are reported separately.
pub fn lps_survey_to_csv(rows: &[GirthSurveyRow]) -> (String, Vec<String>) {
    let mut out = String::from(LPS_CSV_HEADER);
    out.push('\n');
    let mut skipped = Vec::new();
    for row in rows {
        match row {
            GirthSurveyRow::Computed {
                q,
                vertices,
                group,
                girth,
                ratio,
                ceiling,
            } => {
                out.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    q,
                    vertices,
                    group.as_str(),
                    girth,
                    fmt6(round6(*ratio)),
                    fmt6(round6(*ceiling))
                ));
            }
            GirthSurveyRow::Skipped { q, reason } => {
                skipped.push(format!("q = {q} skipped: {reason}"));
            }
        }
    }
    (out, skipped)
}

pub fn to_json_pretty<T: Serialize>(record: &T) -> String {
    let mut s = serde_json::to_string_pretty(record).expect("report serialization");
    s.push('\n');
    s
}
