//! Report documents and their JSON/CSV encodings.
//!
//! Every floating-point value is rounded to 15 significant digits when the
//! document is built, so both encodings carry identical numbers and a JSON
//! round trip reproduces them bit for bit. Missing values are JSON `null`
//! and empty CSV fields.

use mmlab_core::classical::{CorrespondenceReport, QuantizationResult};
use mmlab_core::conditions::ConditionReport;
use mmlab_core::spectral::PhysicalConstants;
use mmlab_core::verify::CheckOutcome;
use serde::{Deserialize, Serialize};

use crate::config::Format;

/// Rounds to 15 significant digits; non-finite values pass through.
pub fn round15(x: f64) -> f64 {
    if !x.is_finite() {
        return x;
    }
    format!("{x:.14e}").parse().expect("formatted float parses")
}

fn opt15(x: Option<f64>) -> Option<f64> {
    x.map(round15)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstantsDoc {
    pub m: f64,
    pub omega: f64,
    pub hbar: f64,
}

impl From<PhysicalConstants> for ConstantsDoc {
    fn from(c: PhysicalConstants) -> Self {
        Self {
            m: c.mass,
            omega: c.omega,
            hbar: c.hbar,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemDoc {
    pub kind: String,
    pub constants: ConstantsDoc,
    pub size: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coeffs: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionRowDoc {
    pub n: usize,
    pub eq4_hermitian: f64,
    pub eq4_constrained: Option<f64>,
    pub eq14: f64,
    pub eq25: f64,
    pub bj_alternative: Option<f64>,
    pub comm_diag_re: f64,
    pub comm_diag_im: f64,
    pub residual_eq4_hermitian: f64,
    pub residual_eq4_constrained: Option<f64>,
    pub residual_eq14: f64,
    pub residual_eq25: f64,
    pub residual_bj_alternative: Option<f64>,
    pub residual_comm_re: f64,
    pub residual_comm_im: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionDoc {
    pub system: SystemDoc,
    pub window: [usize; 2],
    pub rows: Vec<ConditionRowDoc>,
    pub offdiag_max: f64,
    pub trace_re: f64,
    pub trace_im: f64,
    pub edge_diag_im: f64,
}

impl ConditionDoc {
    pub fn new(report: &ConditionReport, kind: &str, coeffs: Option<Vec<f64>>) -> Self {
        let hbar = report.hbar();
        let rows = report
            .rows
            .iter()
            .map(|r| {
                let comm = r.residual_commutator(hbar);
                ConditionRowDoc {
                    n: r.n,
                    eq4_hermitian: round15(r.heisenberg_hermitian),
                    eq4_constrained: opt15(r.heisenberg_constrained),
                    eq14: round15(r.born_jordan),
                    eq25: round15(r.modified),
                    bj_alternative: opt15(r.nearest_neighbor),
                    comm_diag_re: round15(r.commutator_diag.re),
                    comm_diag_im: round15(r.commutator_diag.im),
                    residual_eq4_hermitian: round15(r.residual_heisenberg_hermitian(hbar)),
                    residual_eq4_constrained: opt15(r.residual_heisenberg_constrained(hbar)),
                    residual_eq14: round15(r.residual_born_jordan(hbar)),
                    residual_eq25: round15(r.residual_modified(hbar)),
                    residual_bj_alternative: opt15(r.residual_nearest_neighbor(hbar)),
                    residual_comm_re: round15(comm.re),
                    residual_comm_im: round15(comm.im),
                }
            })
            .collect();
        Self {
            system: SystemDoc {
                kind: kind.to_string(),
                constants: report.system.constants.into(),
                size: report.system.size,
                coeffs,
            },
            window: [report.window.0, report.window.1],
            rows,
            offdiag_max: round15(report.offdiag_max),
            trace_re: round15(report.trace_commutator.re),
            trace_im: round15(report.trace_commutator.im),
            edge_diag_im: round15(report.edge_diag.im),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelDoc {
    pub n: u32,
    pub energy: f64,
    pub action: f64,
    /// `None` at the bottom of the well, where no orbit exists.
    pub period: Option<f64>,
    pub frequency: Option<f64>,
    pub converged: bool,
    pub iterations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassicalDoc {
    pub system: SystemDoc,
    pub j0: f64,
    pub rows: Vec<LevelDoc>,
}

impl LevelDoc {
    pub fn new(level: &QuantizationResult, period: Option<f64>) -> Self {
        Self {
            n: level.n,
            energy: round15(level.energy),
            action: round15(level.action),
            period: opt15(period),
            frequency: opt15(period.map(|t| 2.0 * std::f64::consts::PI / t)),
            converged: level.converged,
            iterations: level.iterations,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrespondenceRowDoc {
    pub n: usize,
    pub alpha: usize,
    pub energy: f64,
    pub quantum_amplitude: f64,
    pub classical_amplitude: f64,
    pub amplitude_deviation: f64,
    pub relative_deviation: Option<f64>,
    pub quantum_frequency: f64,
    pub classical_frequency: f64,
    pub frequency_deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrespondenceDoc {
    pub system: SystemDoc,
    pub energy_rule: String,
    pub window: [usize; 2],
    pub rows: Vec<CorrespondenceRowDoc>,
}

impl CorrespondenceRowDoc {
    pub fn rows(report: &CorrespondenceReport) -> impl Iterator<Item = Self> + '_ {
        report.rows.iter().map(move |r| Self {
            n: report.n,
            alpha: r.alpha,
            energy: round15(r.energy),
            quantum_amplitude: round15(r.quantum_amplitude),
            classical_amplitude: round15(r.classical_amplitude),
            amplitude_deviation: round15(r.amplitude_deviation),
            relative_deviation: opt15(r.relative_deviation),
            quantum_frequency: round15(r.quantum_frequency),
            classical_frequency: round15(r.classical_frequency),
            frequency_deviation: round15(r.frequency_deviation),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckDoc {
    pub id: u8,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyDoc {
    pub passed: bool,
    pub checks: Vec<CheckDoc>,
}

impl VerifyDoc {
    pub fn new(outcomes: &[CheckOutcome]) -> Self {
        Self {
            passed: outcomes.iter().all(|o| o.passed),
            checks: outcomes
                .iter()
                .map(|o| CheckDoc {
                    id: o.id,
                    name: o.name.to_string(),
                    passed: o.passed,
                    detail: o.detail.clone(),
                })
                .collect(),
        }
    }
}

enum Field<'a> {
    Int(i64),
    Num(Option<f64>),
    Bool(bool),
    Text(&'a str),
}

trait CsvRow {
    const HEADER: &'static [&'static str];
    fn fields(&self) -> Vec<Field<'_>>;
}

impl CsvRow for ConditionRowDoc {
    const HEADER: &'static [&'static str] = &[
        "n",
        "eq4_hermitian",
        "eq4_constrained",
        "eq14",
        "eq25",
        "bj_alternative",
        "comm_diag_re",
        "comm_diag_im",
        "residual_eq4_hermitian",
        "residual_eq4_constrained",
        "residual_eq14",
        "residual_eq25",
        "residual_bj_alternative",
        "residual_comm_re",
        "residual_comm_im",
    ];

    fn fields(&self) -> Vec<Field<'_>> {
        use Field::*;
        vec![
            Int(self.n as i64),
            Num(Some(self.eq4_hermitian)),
            Num(self.eq4_constrained),
            Num(Some(self.eq14)),
            Num(Some(self.eq25)),
            Num(self.bj_alternative),
            Num(Some(self.comm_diag_re)),
            Num(Some(self.comm_diag_im)),
            Num(Some(self.residual_eq4_hermitian)),
            Num(self.residual_eq4_constrained),
            Num(Some(self.residual_eq14)),
            Num(Some(self.residual_eq25)),
            Num(self.residual_bj_alternative),
            Num(Some(self.residual_comm_re)),
            Num(Some(self.residual_comm_im)),
        ]
    }
}

impl CsvRow for LevelDoc {
    const HEADER: &'static [&'static str] = &["n", "energy", "action", "period", "frequency", "converged", "iterations"];

    fn fields(&self) -> Vec<Field<'_>> {
        use Field::*;
        vec![
            Int(self.n as i64),
            Num(Some(self.energy)),
            Num(Some(self.action)),
            Num(self.period),
            Num(self.frequency),
            Bool(self.converged),
            Int(self.iterations as i64),
        ]
    }
}

impl CsvRow for CorrespondenceRowDoc {
    const HEADER: &'static [&'static str] = &[
        "n",
        "alpha",
        "energy",
        "quantum_amplitude",
        "classical_amplitude",
        "amplitude_deviation",
        "relative_deviation",
        "quantum_frequency",
        "classical_frequency",
        "frequency_deviation",
    ];

    fn fields(&self) -> Vec<Field<'_>> {
        use Field::*;
        vec![
            Int(self.n as i64),
            Int(self.alpha as i64),
            Num(Some(self.energy)),
            Num(Some(self.quantum_amplitude)),
            Num(Some(self.classical_amplitude)),
            Num(Some(self.amplitude_deviation)),
            Num(self.relative_deviation),
            Num(Some(self.quantum_frequency)),
            Num(Some(self.classical_frequency)),
            Num(Some(self.frequency_deviation)),
        ]
    }
}

impl CsvRow for CheckDoc {
    const HEADER: &'static [&'static str] = &["id", "name", "passed", "detail"];

    fn fields(&self) -> Vec<Field<'_>> {
        use Field::*;
        vec![Int(self.id as i64), Text(&self.name), Bool(self.passed), Text(&self.detail)]
    }
}

/// Shortest decimal that reads back to the same `f64`; exponent notation
/// outside `[1e-4, 1e15)`.
pub fn format_number(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || (1e-4..1e15).contains(&a) || !x.is_finite() {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

fn csv_text(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn to_csv<R: CsvRow>(rows: &[R]) -> Vec<u8> {
    let mut out = R::HEADER.join(",");
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row
            .fields()
            .into_iter()
            .map(|f| match f {
                Field::Int(v) => v.to_string(),
                Field::Num(Some(v)) if v.is_finite() => format_number(v),
                Field::Num(_) => String::new(),
                Field::Bool(b) => b.to_string(),
                Field::Text(s) => csv_text(s),
            })
            .collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out.into_bytes()
}

fn to_json<T: Serialize>(doc: &T) -> Vec<u8> {
    let mut bytes = serde_json::to_vec_pretty(doc).expect("report documents serialize");
    bytes.push(b'\n');
    bytes
}

#[derive(Debug, Clone, PartialEq)]
pub enum Report {
    Conditions(ConditionDoc),
    Classical(ClassicalDoc),
    Correspondence(CorrespondenceDoc),
    Verify(VerifyDoc),
}

impl Report {
    pub fn serialize(&self, format: Format) -> Vec<u8> {
        match (self, format) {
            (Report::Conditions(d), Format::Json) => to_json(d),
            (Report::Conditions(d), Format::Csv) => to_csv(&d.rows),
            (Report::Classical(d), Format::Json) => to_json(d),
            (Report::Classical(d), Format::Csv) => to_csv(&d.rows),
            (Report::Correspondence(d), Format::Json) => to_json(d),
            (Report::Correspondence(d), Format::Csv) => to_csv(&d.rows),
            (Report::Verify(d), Format::Json) => to_json(d),
            (Report::Verify(d), Format::Csv) => to_csv(&d.checks),
        }
    }
}
