//! Inference rules generated from a schema.
//!
//! Each rule is a clause over a premise list (parameters written as
//! `Param(i, ..)`) and a context of ordinary variables.

use super::{Boundary, ParamEntry, Schema};
use crate::syntax::{bx, Abs, Term};
use crate::typeck::cells::{beta, ctor_type, ElimData};
use crate::typeck::{Globals, Signature};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Clause {
    pub name: String,
    pub premises: Vec<ParamEntry>,
    /// Types of the context variables, outermost first.
    pub context: Vec<Term>,
    pub subject: Term,
    /// `None` when the subject is itself a type.
    pub ty: Option<Term>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BetaRule {
    pub name: String,
    pub premises: Vec<ParamEntry>,
    pub context: Vec<Term>,
    pub lhs: Term,
    pub rhs: Term,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleSet {
    pub formation: Clause,
    pub intros: Vec<Clause>,
    pub elim: Clause,
    pub betas: Vec<BetaRule>,
    pub path_comps: Vec<Clause>,
}

impl RuleSet {
    pub fn clauses(&self) -> impl Iterator<Item = &Clause> {
        std::iter::once(&self.formation)
            .chain(self.intros.iter())
            .chain(std::iter::once(&self.elim))
            .chain(self.path_comps.iter())
    }
}

fn method_arity(s: &Schema, k: usize) -> usize {
    let c = &s.cells[k];
    c.args.len() + c.recursive_args(&s.name).len()
}

/// Motive and methods as abstract premises following the parameters.
pub fn abstract_elim(s: &Schema) -> (Term, Vec<Abs>) {
    let np = s.params.len();
    let motive = Term::Param(np, vec![Term::Var(0)]);
    let methods = (0..s.cells.len())
        .map(|k| {
            let n = method_arity(s, k);
            Abs::new(
                n,
                Term::Param(np + 1 + k, (0..n).rev().map(Term::Var).collect()),
            )
        })
        .collect();
    (motive, methods)
}

/// Premises of the eliminator: the parameters, the motive and one method per
/// cell. On failure, reports the index of the cell whose method could not be
/// built.
pub fn elim_premises(sig: &Signature, s: &Schema) -> Result<Vec<ParamEntry>, (usize, String)> {
    let params = s.params.identity_args();
    let (motive, methods) = abstract_elim(s);
    let data = ElimData {
        schema: s,
        params: &params,
        motive: &motive,
        methods: &methods,
    };
    let g = Globals {
        sig,
        local: Some(s),
    };
    let mut premises = s.params.entries.clone();
    premises.push(ParamEntry::ty("C", vec![("u".into(), s.carrier())]));
    for (k, c) in s.cells.iter().enumerate() {
        let (tele, result) = data.method_signature(g, k).map_err(|m| (k, m))?;
        let mut names: Vec<String> = c.args.iter().map(|a| a.name.clone()).collect();
        for (a, _) in c.recursive_args(&s.name) {
            names.push(format!("ih_{}", c.args[a].name));
        }
        premises.push(ParamEntry::term(
            &format!("m_{}", c.name),
            names.into_iter().zip(tele).collect(),
            result,
        ));
    }
    Ok(premises)
}

pub fn generate_rules(sig: &Signature, s: &Schema) -> Result<RuleSet, String> {
    let params = s.params.identity_args();
    let premises =
        elim_premises(sig, s).map_err(|(k, m)| format!("cell {}: {m}", s.cells[k].name))?;
    let (motive, methods) = abstract_elim(s);
    let formation = Clause {
        name: format!("{}-form", s.name),
        premises: s.params.entries.clone(),
        context: vec![],
        subject: s.carrier(),
        ty: None,
    };
    let mut intros = Vec::new();
    let mut betas = Vec::new();
    let mut path_comps = Vec::new();
    for (k, c) in s.cells.iter().enumerate() {
        let n = c.args.len();
        let context: Vec<Term> = c.args.iter().map(|a| a.ty.clone()).collect();
        let args: Vec<Term> = (0..n).map(|a| Term::Var(n - 1 - a)).collect();
        let ctor = Term::SchemaCtor {
            schema: s.name.clone(),
            params: params.clone(),
            cell: k,
            args: args.clone(),
        };
        intros.push(Clause {
            name: format!("{}-intro-{}", s.name, c.name),
            premises: s.params.entries.clone(),
            context: context.clone(),
            subject: ctor.clone(),
            ty: Some(ctor_type(s, &params, k, &args)),
        });
        match &c.boundary {
            Boundary::None => betas.push(BetaRule {
                name: format!("{}-beta-{}", s.name, c.name),
                premises: premises.clone(),
                context,
                lhs: Term::SchemaElim {
                    schema: s.name.clone(),
                    params: params.clone(),
                    motive: bx(motive.clone()),
                    methods: methods.clone(),
                    scrut: bx(ctor),
                },
                rhs: beta(s, &params, &motive, &methods, k, &args),
            }),
            Boundary::Path { .. } => {
                let data = ElimData {
                    schema: s,
                    params: &params,
                    motive: &motive,
                    methods: &methods,
                };
                path_comps.push(Clause {
                    name: format!("{}-comp-{}", s.name, c.name),
                    premises: premises.clone(),
                    context,
                    subject: Term::SchemaPathComp {
                        schema: s.name.clone(),
                        params: params.clone(),
                        cell: k,
                        motive: bx(motive.clone()),
                        methods: methods.clone(),
                        args: args.clone(),
                    },
                    ty: Some(data.path_comp_type(k, &args)),
                });
            }
            _ => {}
        }
    }
    let elim = Clause {
        name: format!("{}-elim", s.name),
        premises,
        context: vec![s.carrier()],
        subject: Term::SchemaElim {
            schema: s.name.clone(),
            params,
            motive: bx(motive.clone()),
            methods,
            scrut: bx(Term::Var(0)),
        },
        ty: Some(motive),
    };
    Ok(RuleSet {
        formation,
        intros,
        elim,
        betas,
        path_comps,
    })
}
