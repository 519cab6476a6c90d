use std::collections::HashSet;

use super::rules::elim_premises;
use super::{
    is_carrier, recursion_of, Boundary, ParamKind, ParamScheme, Recursion, Schema, SchemaError,
    SchemaErrorKind,
};
use crate::syntax::{Context, Term};
use crate::typeck::cells::path_endpoints;
use crate::typeck::{Checker, Globals, Signature, TypeError};

pub fn validate_param_scheme(
    sig: &Signature,
    schema: &str,
    p: &ParamScheme,
) -> Result<(), SchemaError> {
    let err = |i: usize, msg: String, cause: Option<TypeError>| SchemaError {
        kind: SchemaErrorKind::ParamScheme,
        schema: schema.to_string(),
        cell: None,
        entry: Some(i),
        message: msg,
        cause,
        span: None,
    };
    for (i, e) in p.entries.iter().enumerate() {
        let mut later = |j: usize| j >= i;
        let mut terms: Vec<&Term> = e.ext.iter().map(|(_, t)| t).collect();
        if let ParamKind::Term(ty) = &e.kind {
            terms.push(ty);
        }
        if terms.iter().any(|t| t.mentions_param(&mut later)) {
            return Err(err(
                i,
                format!("parameter {} refers to itself or a later parameter", e.name),
                None,
            ));
        }
        for (k, (_, t)) in e.ext.iter().enumerate() {
            if t.scope_depth() > k {
                return Err(err(
                    i,
                    format!("parameter {} has an unbound variable", e.name),
                    None,
                ));
            }
        }
        let ch = Checker::new(sig).with_params(&p.entries[..i]);
        let mut ctx = Context::new();
        for (_, t) in &e.ext {
            ch.check_type(&ctx, t).map_err(|te| {
                err(
                    i,
                    format!("in parameter {}: {}", e.name, te.message),
                    Some(te.clone()),
                )
            })?;
            ctx.push(t.clone());
        }
        if let ParamKind::Term(ty) = &e.kind {
            ch.check_type(&ctx, ty).map_err(|te| {
                err(
                    i,
                    format!("in parameter {}: {}", e.name, te.message),
                    Some(te.clone()),
                )
            })?;
        }
    }
    Ok(())
}

/// Whether a term mentions the schema being defined anywhere.
pub fn mentions_carrier(schema: &str, t: &Term) -> bool {
    t.any(&mut |s| match s {
        Term::Schema { name, .. }
        | Term::SchemaCtor { schema: name, .. }
        | Term::SchemaElim { schema: name, .. }
        | Term::SchemaPathComp { schema: name, .. } => name == schema,
        _ => false,
    })
}

/// Looks for an operation that needs fibrancy of the carrier, unfolding definitions.
pub fn find_fibrant(g: Globals<'_>, t: &Term, seen: &mut HashSet<String>) -> Option<&'static str> {
    let mut found = None;
    let mut consts = Vec::new();
    t.any(&mut |s| {
        let hit = match s {
            Term::J { .. } => Some("J"),
            Term::JOver { .. } => Some("J'"),
            Term::Ap { .. } => Some("ap"),
            Term::NatElim { .. } => Some("natrec"),
            Term::SchemaElim { .. } => Some("a schema eliminator"),
            Term::SchemaPathComp { .. } => Some("a computation witness"),
            Term::Const(n) => {
                consts.push(n.clone());
                None
            }
            _ => None,
        };
        if hit.is_some() {
            found = hit;
        }
        hit.is_some()
    });
    if found.is_some() {
        return found;
    }
    for c in consts {
        if seen.insert(c.clone()) {
            if let Some(d) = g.def(&c) {
                if let Some(h) = find_fibrant(g, &d.body, seen) {
                    return Some(h);
                }
            }
        }
    }
    None
}

fn boundary_terms(b: &Boundary) -> Vec<&Term> {
    match b {
        Boundary::None => vec![],
        Boundary::Path { source, target } => vec![source, target],
        Boundary::Globe { lhs, rhs } => vec![lhs, rhs],
        Boundary::Square {
            top,
            bottom,
            left,
            right,
        } => vec![top, bottom, left, right],
    }
}

/// Checks positivity, the fibrant-structure ban and the typing of every
/// boundary. All problems found are reported, one per offending cell.
pub fn validate_cells(sig: &Signature, s: &Schema) -> Result<(), Vec<SchemaError>> {
    let mut errors = Vec::new();
    let mut names = HashSet::new();
    for c in &s.cells {
        if !names.insert(c.name.clone()) {
            let mut e = SchemaError::new(
                SchemaErrorKind::DuplicateCell,
                &s.name,
                format!("cell {} is declared twice", c.name),
            );
            e.cell = Some(c.name.clone());
            e.span = c.span.clone();
            errors.push(e);
        }
    }
    for k in 0..s.cells.len() {
        if let Err(e) = validate_cell(sig, s, k) {
            errors.push(e);
        }
    }
    if errors.is_empty() {
        if let Err(e) = check_methods(sig, s) {
            errors.push(e);
        }
    }
    if errors.is_empty() {
        Ok(())
    } else {
        Err(errors)
    }
}

pub fn validate_schema(sig: &Signature, s: &Schema) -> Result<(), Vec<SchemaError>> {
    validate_param_scheme(sig, &s.name, &s.params).map_err(|mut e| {
        e.span = s.span.clone();
        vec![e]
    })?;
    validate_cells(sig, s)
}

fn validate_cell(sig: &Signature, s: &Schema, k: usize) -> Result<(), SchemaError> {
    let c = &s.cells[k];
    let err = |kind: SchemaErrorKind, msg: String, cause: Option<TypeError>| SchemaError {
        kind,
        schema: s.name.clone(),
        cell: Some(c.name.clone()),
        entry: None,
        message: msg,
        cause,
        span: c.span.clone(),
    };
    let mut prov = s.clone();
    prov.cells.truncate(k);
    let g = Globals {
        sig,
        local: Some(&prov),
    };

    for t in boundary_terms(&c.boundary) {
        if let Some(node) = find_fibrant(g, t, &mut HashSet::new()) {
            return Err(err(
                SchemaErrorKind::FibrantStructure,
                format!(
                    "constructor {} of {} uses {node} in its boundary; boundary terms may not use eliminators or path operations, which only exist in fibrant types",
                    c.name, s.name
                ),
                None,
            ));
        }
    }

    let mut recursive = Vec::new();
    for (i, a) in c.args.iter().enumerate() {
        match recursion_of(&s.name, &a.ty) {
            Some(Recursion::Direct) => recursive.push(i),
            Some(Recursion::Func(dom)) => {
                if mentions_carrier(&s.name, &dom) {
                    return Err(err(
                        SchemaErrorKind::Positivity,
                        format!(
                            "argument {} of {}: {} occurs in the domain of a function argument",
                            a.name, c.name, s.name
                        ),
                        None,
                    ));
                }
                recursive.push(i);
            }
            None => {
                if mentions_carrier(&s.name, &a.ty) {
                    return Err(err(
                        SchemaErrorKind::Positivity,
                        format!(
                            "argument {} of {}: {} occurs in a position that is not strictly positive",
                            a.name, c.name, s.name
                        ),
                        None,
                    ));
                }
                if let Some(j) = recursive.iter().find(|&&j| a.ty.has_free_var(i - 1 - j)) {
                    return Err(err(
                        SchemaErrorKind::Positivity,
                        format!(
                            "argument {} of {} depends on the recursive argument {}",
                            a.name, c.name, c.args[*j].name
                        ),
                        None,
                    ));
                }
            }
        }
    }

    let ch = Checker::new(sig)
        .with_params(&s.params.entries)
        .with_local(&prov);
    let mut ctx = Context::new();
    for a in &c.args {
        ch.check_type(&ctx, &a.ty).map_err(|te| {
            err(
                SchemaErrorKind::BoundaryMismatch,
                format!("argument {} of {}: {}", a.name, c.name, te.message),
                Some(te.clone()),
            )
        })?;
        ctx.push(a.ty.clone());
    }

    for t in boundary_terms(&c.boundary) {
        let mut later = false;
        t.any(&mut |u| {
            if let Term::SchemaCtor { schema, cell, .. } = u {
                if *schema == s.name && *cell >= k {
                    later = true;
                }
            }
            false
        });
        if later {
            return Err(err(
                SchemaErrorKind::BoundaryMismatch,
                format!(
                    "boundary of {} refers to a constructor declared after it",
                    c.name
                ),
                None,
            ));
        }
    }

    let carrier = s.carrier();
    let typing = |te: TypeError| {
        err(
            SchemaErrorKind::BoundaryMismatch,
            format!("boundary of {}: {}", c.name, te.message),
            Some(te),
        )
    };
    match &c.boundary {
        Boundary::None => {}
        Boundary::Path { source, target } => {
            ch.check(&ctx, source, &carrier).map_err(typing)?;
            ch.check(&ctx, target, &carrier).map_err(typing)?;
        }
        Boundary::Globe { lhs, rhs } => {
            let ty = ch.infer(&ctx, lhs).map_err(typing)?;
            let ty = ch.whnf(&ty).map_err(typing)?;
            match &ty {
                Term::Id(base, _, _) if is_carrier(&s.name, base) => {}
                Term::Id(base, _, _) if matches!(**base, Term::Id(..)) => {
                    return Err(err(
                        SchemaErrorKind::UnsupportedDimension,
                        format!(
                            "unsupported dimension: {} relates 2-dimensional cells; only globes between paths are supported",
                            c.name
                        ),
                        None,
                    ))
                }
                _ => {
                    return Err(err(
                        SchemaErrorKind::BoundaryMismatch,
                        format!("boundary of {} must relate two paths in {}", c.name, s.name),
                        None,
                    ))
                }
            }
            ch.check(&ctx, rhs, &ty).map_err(typing)?;
            for t in [lhs, rhs] {
                if path_endpoints(&prov, t).is_none() {
                    return Err(err(
                        SchemaErrorKind::BoundaryMismatch,
                        format!(
                            "boundary of {} must be built from refl and earlier path constructors",
                            c.name
                        ),
                        None,
                    ));
                }
            }
        }
        Boundary::Square {
            top,
            bottom,
            left,
            right,
        } => {
            let mut ends = Vec::new();
            for side in [top, bottom, left, right] {
                let ty = ch.infer(&ctx, side).map_err(typing)?;
                match ch.whnf(&ty).map_err(typing)? {
                    Term::Id(base, x, y) if is_carrier(&s.name, &base) => ends.push((*x, *y)),
                    _ => {
                        return Err(err(
                            SchemaErrorKind::BoundaryMismatch,
                            format!("sides of the square {} must be paths in {}", c.name, s.name),
                            None,
                        ))
                    }
                }
            }
            let corners = [
                (&ends[0].0, &ends[2].0),
                (&ends[0].1, &ends[3].0),
                (&ends[1].0, &ends[2].1),
                (&ends[1].1, &ends[3].1),
            ];
            for (x, y) in corners {
                if !ch.def_equal(x, y).map_err(typing)? {
                    return Err(err(
                        SchemaErrorKind::BoundaryMismatch,
                        format!("the sides of the square {} do not close up", c.name),
                        None,
                    ));
                }
            }
        }
    }
    Ok(())
}

/// Builds every method type with abstract motive and methods and checks that
/// it is a well-formed type; this is where boundaries get interpreted.
fn check_methods(sig: &Signature, s: &Schema) -> Result<(), SchemaError> {
    let premises = elim_premises(sig, s).map_err(|(k, msg)| {
        let c = &s.cells[k];
        SchemaError {
            kind: SchemaErrorKind::BoundaryMismatch,
            schema: s.name.clone(),
            cell: Some(c.name.clone()),
            entry: None,
            message: format!("boundary of {}: {msg}", c.name),
            cause: None,
            span: c.span.clone(),
        }
    })?;
    let np = s.params.len();
    for (k, c) in s.cells.iter().enumerate() {
        let entry = &premises[np + 1 + k];
        let ch = Checker::new(sig)
            .with_params(&premises[..np + 1 + k])
            .with_local(s);
        let mut ctx = Context::new();
        let res = (|| {
            for (_, t) in &entry.ext {
                ch.check_type(&ctx, t)?;
                ctx.push(t.clone());
            }
            if let ParamKind::Term(ty) = &entry.kind {
                ch.check_type(&ctx, ty)?;
            }
            Ok::<(), TypeError>(())
        })();
        res.map_err(|te| SchemaError {
            kind: SchemaErrorKind::BoundaryMismatch,
            schema: s.name.clone(),
            cell: Some(c.name.clone()),
            entry: None,
            message: format!(
                "eliminator method for {} is ill-formed: {}",
                c.name, te.message
            ),
            cause: Some(te),
            span: c.span.clone(),
        })?;
    }
    Ok(())
}
