//! The command-line entry points: `check`, `eval` and `lint`.

use std::path::{Path, PathBuf};

use crate::model::{env_from_literals, Model, Status as CarrierStatus, DEFAULT_ROUNDS};
use crate::report::{Diagnostic, EvalStatus, Evaluation, Report, Severity};
use crate::schema::{validate_schema, SchemaError, PRELUDE};
use crate::surface::{parse_module_in, Module, ParseEnv, ParseError};
use crate::typeck::{Checker, Def, Signature};

pub const EXIT_OK: i32 = 0;
pub const EXIT_SEMANTIC: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Check,
    Eval,
    Lint,
}

#[derive(Clone, Debug, Default)]
pub struct Options {
    /// Schema library loaded before each file; the builtin one when absent.
    pub prelude: Option<PathBuf>,
    /// Overrides the fuel of every evaluated request.
    pub fuel: Option<usize>,
    /// Bound on algebra size for the initiality check, if requested.
    pub check_initiality: Option<usize>,
    /// Restricts `eval` to the request with this name.
    pub request: Option<String>,
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub exit: i32,
    pub report: Report,
}

/// Runs `cmd` on every file, in parallel, merging reports in path order.
pub fn run(cmd: Command, paths: &[PathBuf], opts: &Options) -> Outcome {
    let prelude = match load_prelude(opts) {
        Ok(p) => p,
        Err(d) => {
            return Outcome {
                exit: EXIT_USAGE,
                report: Report {
                    diagnostics: vec![d],
                    evaluations: vec![],
                },
            }
        }
    };
    let mut sorted: Vec<&PathBuf> = paths.iter().collect();
    sorted.sort();
    let results: Vec<Outcome> = std::thread::scope(|s| {
        let handles: Vec<_> = sorted
            .iter()
            .map(|p| {
                let prelude = &prelude;
                s.spawn(move || run_file(cmd, p, prelude, opts))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("worker threads do not panic"))
            .collect()
    });
    let mut report = Report::default();
    let mut exit = EXIT_OK;
    for o in results {
        exit = exit.max(o.exit);
        report.merge(o.report);
    }
    if let Some(name) = &opts.request {
        if cmd == Command::Eval && exit == EXIT_OK && report.evaluations.is_empty() {
            report.diagnostics.push(Diagnostic::error(
                "",
                None,
                "UnknownRequest",
                format!("no eval request named {name}"),
            ));
            exit = EXIT_USAGE;
        }
    }
    Outcome { exit, report }
}

/// Runs `cmd` on source text already in memory.
pub fn run_source(cmd: Command, file: &str, text: &str, opts: &Options) -> Outcome {
    match load_prelude(opts) {
        Ok(p) => run_text(cmd, file, text, &p, opts),
        Err(d) => Outcome {
            exit: EXIT_USAGE,
            report: Report {
                diagnostics: vec![d],
                evaluations: vec![],
            },
        },
    }
}

fn load_prelude(opts: &Options) -> Result<ParseEnv, Diagnostic> {
    let (file, text) = match &opts.prelude {
        None => ("<prelude>".to_string(), PRELUDE.to_string()),
        Some(p) => {
            let file = p.display().to_string();
            match std::fs::read_to_string(p) {
                Ok(t) => (file, t),
                Err(e) => return Err(Diagnostic::error(&file, None, "IoError", e.to_string())),
            }
        }
    };
    let m = parse_module_in(&file, &text, &ParseEnv::empty()).map_err(|e| parse_diag(&file, &e))?;
    Ok(ParseEnv {
        schemas: m.schemas().cloned().collect(),
        defs: vec![],
    })
}

fn run_file(cmd: Command, path: &Path, prelude: &ParseEnv, opts: &Options) -> Outcome {
    let file = path.display().to_string();
    match std::fs::read_to_string(path) {
        Ok(text) => run_text(cmd, &file, &text, prelude, opts),
        Err(e) => Outcome {
            exit: EXIT_USAGE,
            report: Report {
                diagnostics: vec![Diagnostic::error(&file, None, "IoError", e.to_string())],
                evaluations: vec![],
            },
        },
    }
}

fn parse_diag(file: &str, e: &ParseError) -> Diagnostic {
    Diagnostic::error(file, Some(&e.span), e.kind.name(), e.message.clone())
}

fn schema_diag(file: &str, e: &SchemaError) -> Diagnostic {
    Diagnostic::error(
        file,
        e.span.as_ref(),
        e.kind.name(),
        format!("in schema {}: {}", e.schema, e.message),
    )
}

fn run_text(cmd: Command, file: &str, text: &str, prelude: &ParseEnv, opts: &Options) -> Outcome {
    let mut report = Report::default();
    let module = match parse_module_in(file, text, prelude) {
        Ok(m) => m,
        Err(e) => {
            report.diagnostics.push(parse_diag(file, &e));
            return Outcome {
                exit: EXIT_USAGE,
                report,
            };
        }
    };
    let mut sig = Signature::new();
    for s in &prelude.schemas {
        sig.add_schema(s.clone());
    }
    elaborate(file, &module, &mut sig, cmd != Command::Lint, &mut report);
    if cmd == Command::Eval && report.status() == crate::report::Status::Ok {
        evaluate(file, &module, &sig, opts, &mut report);
    }
    let exit = match report.status() {
        crate::report::Status::Ok => EXIT_OK,
        crate::report::Status::Failed => EXIT_SEMANTIC,
    };
    Outcome { exit, report }
}

/// Validates schemas and, when `defs` is set, checks definitions, in order.
fn elaborate(file: &str, m: &Module, sig: &mut Signature, defs: bool, report: &mut Report) {
    for item in &m.items {
        match item {
            crate::surface::Item::Schema(s) => {
                if let Err(errs) = validate_schema(sig, s) {
                    report
                        .diagnostics
                        .extend(errs.iter().map(|e| schema_diag(file, e)));
                }
                sig.add_schema(s.clone());
            }
            crate::surface::Item::Def(d) if defs => {
                let ch = Checker::new(sig);
                let ctx = crate::syntax::Context::new();
                let res = ch
                    .check_type(&ctx, &d.ty)
                    .and_then(|_| ch.check(&ctx, &d.body, &d.ty));
                if let Err(e) = res {
                    let span = e.span.clone().unwrap_or_else(|| d.span.clone());
                    report.diagnostics.push(Diagnostic::error(
                        file,
                        Some(&span),
                        e.kind.name(),
                        format!("in definition {}: {}", d.name, e.message),
                    ));
                }
                sig.add_def(Def {
                    name: d.name.clone(),
                    ty: d.ty.clone(),
                    body: d.body.clone(),
                });
            }
            _ => {}
        }
    }
}

fn evaluate(file: &str, m: &Module, sig: &Signature, opts: &Options, report: &mut Report) {
    let model = Model::new(sig);
    for req in m.evals() {
        if opts.request.as_ref().is_some_and(|n| n != &req.name) {
            continue;
        }
        let fail = |kind: &str, msg: String| {
            Diagnostic::error(
                file,
                Some(&req.span),
                kind,
                format!("in eval {}: {msg}", req.name),
            )
        };
        let Some(schema) = sig.schema(&req.schema) else {
            report.diagnostics.push(fail(
                "UnboundSchema",
                format!("unknown schema {}", req.schema),
            ));
            continue;
        };
        let fuel = opts.fuel.or(req.fuel).unwrap_or(DEFAULT_ROUNDS);
        let carrier = match env_from_literals(&model, schema, &req.params)
            .and_then(|env| model.saturate(schema, env, fuel))
        {
            Ok(c) => c,
            Err(e) => {
                report.diagnostics.push(fail(e.kind.name(), e.message));
                continue;
            }
        };
        let status = match carrier.status {
            CarrierStatus::Converged => EvalStatus::Converged,
            CarrierStatus::FuelExhausted => EvalStatus::FuelExhausted,
        };
        let mut initiality = None;
        if let Some(bound) = opts.check_initiality {
            if carrier.status == CarrierStatus::Converged {
                match model
                    .check_universal_property(&carrier, bound)
                    .and_then(|r| r.into_result())
                {
                    Ok(r) => initiality = Some(r),
                    Err(e) => report.diagnostics.push(fail(e.kind.name(), e.message)),
                }
            } else {
                report.diagnostics.push(Diagnostic::new(
                    Severity::Warning,
                    file,
                    Some(&req.span),
                    "InitialityNotChecked",
                    format!(
                        "in eval {}: the carrier did not converge, so initiality was not checked",
                        req.name
                    ),
                ));
            }
        }
        report.evaluations.push(Evaluation {
            name: req.name.clone(),
            status,
            classes: carrier.class_count(),
            fuel_used: carrier.fuel_used,
            initiality,
            representatives: carrier
                .class_reps()
                .into_iter()
                .map(|r| carrier.render(r))
                .collect(),
        });
    }
}
