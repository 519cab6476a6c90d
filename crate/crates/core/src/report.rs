//! Machine- and human-readable results of a driver run.

use std::fmt::Write as _;

use serde::Serialize;

use crate::model::InitialityReport;
use crate::surface::Span;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Diagnostic {
    pub severity: Severity,
    pub file: String,
    pub start_line: usize,
    pub start_col: usize,
    pub end_line: usize,
    pub end_col: usize,
    pub kind: String,
    pub message: String,
}

impl Diagnostic {
    pub fn new(
        severity: Severity,
        file: &str,
        span: Option<&Span>,
        kind: &str,
        message: impl Into<String>,
    ) -> Self {
        let (sl, sc, el, ec) = match span {
            Some(s) => (s.start_line, s.start_col, s.end_line, s.end_col),
            None => (0, 0, 0, 0),
        };
        Diagnostic {
            severity,
            file: file.to_string(),
            start_line: sl,
            start_col: sc,
            end_line: el,
            end_col: ec,
            kind: kind.to_string(),
            message: message.into(),
        }
    }

    pub fn error(file: &str, span: Option<&Span>, kind: &str, message: impl Into<String>) -> Self {
        Self::new(Severity::Error, file, span, kind, message)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EvalStatus {
    Converged,
    FuelExhausted,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Evaluation {
    pub name: String,
    pub status: EvalStatus,
    pub classes: usize,
    pub fuel_used: usize,
    pub initiality: Option<InitialityReport>,
    /// One rendered representative per class, shown only in human output.
    #[serde(skip)]
    pub representatives: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Failed,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub diagnostics: Vec<Diagnostic>,
    pub evaluations: Vec<Evaluation>,
}

#[derive(Serialize)]
struct Wire<'a> {
    status: Status,
    diagnostics: &'a [Diagnostic],
    evaluations: &'a [Evaluation],
}

impl Report {
    pub fn status(&self) -> Status {
        if self
            .diagnostics
            .iter()
            .any(|d| d.severity == Severity::Error)
        {
            Status::Failed
        } else {
            Status::Ok
        }
    }

    pub fn merge(&mut self, other: Report) {
        self.diagnostics.extend(other.diagnostics);
        self.evaluations.extend(other.evaluations);
    }

    pub fn to_json(&self) -> String {
        let wire = Wire {
            status: self.status(),
            diagnostics: &self.diagnostics,
            evaluations: &self.evaluations,
        };
        serde_json::to_string_pretty(&wire).expect("reports serialize")
    }

    pub fn to_human(&self) -> String {
        let mut out = String::new();
        for d in &self.diagnostics {
            let sev = match d.severity {
                Severity::Error => "error",
                Severity::Warning => "warning",
            };
            let _ = writeln!(
                out,
                "{}:{}:{}: {sev}[{}]: {}",
                d.file, d.start_line, d.start_col, d.kind, d.message
            );
        }
        for e in &self.evaluations {
            let status = match e.status {
                EvalStatus::Converged => "converged",
                EvalStatus::FuelExhausted => "fuel exhausted",
            };
            let plural = if e.classes == 1 { "" } else { "es" };
            let _ = writeln!(
                out,
                "{}: {status}, {} class{plural}, fuel used {}",
                e.name, e.classes, e.fuel_used
            );
            for (i, r) in e.representatives.iter().enumerate() {
                let _ = writeln!(out, "  [{i}] {r}");
            }
            if let Some(init) = &e.initiality {
                let verdict = if init.unique {
                    "initial"
                } else {
                    "NOT initial"
                };
                let _ = writeln!(
                    out,
                    "  {verdict} among {} algebras of size at most {}",
                    init.algebras, init.bound
                );
            }
        }
        let _ = writeln!(
            out,
            "{}",
            match self.status() {
                Status::Ok => "ok",
                Status::Failed => "failed",
            }
        );
        out
    }
}
