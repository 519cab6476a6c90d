use std::collections::HashSet;

use super::lexer::{lex, Tok, Token};
use super::{
    Definition, EvalRequest, Item, Literal, Module, ParseEnv, ParseError, ParseErrorKind, Span,
};
use crate::schema::{Boundary, CellArg, CellSpec, ParamEntry, ParamKind, ParamScheme, Schema};
use crate::syntax::{bx, Abs, Term};

const KEYWORDS: &[&str] = &[
    "def", "schema", "eval", "fuel", "point", "path", "cell", "fun", "square", "Type", "finset",
    "finmap", "family",
];

type PResult<T> = Result<T, ParseError>;

/// The schema whose body is being parsed.
struct Inside {
    name: String,
    params: Vec<ParamEntry>,
    cells: Vec<CellSpec>,
}

impl Inside {
    fn identity_params(&self) -> Vec<Abs> {
        self.params
            .iter()
            .enumerate()
            .map(|(i, e)| e.identity(i))
            .collect()
    }
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    schemas: Vec<Schema>,
    defs: HashSet<String>,
    scope: Vec<String>,
    inside: Option<Inside>,
}

pub fn parse_module_in(file: &str, text: &str, env: &ParseEnv) -> PResult<Module> {
    let mut p = Parser::new(file, text, env)?;
    p.module()
}

/// Parses one expression with the given variables in scope (outermost first).
pub fn parse_term(text: &str, vars: &[String], env: &ParseEnv) -> PResult<Term> {
    let mut p = Parser::new("<term>", text, env)?;
    p.scope = vars.to_vec();
    let t = p.expr()?;
    p.expect_eof()?;
    Ok(t)
}

/// Parses a term in which the given parameter names are in scope, as they
/// are inside a schema body.
pub fn parse_term_with_params(
    text: &str,
    vars: &[String],
    params: &[ParamEntry],
    env: &ParseEnv,
) -> PResult<Term> {
    let mut p = Parser::new("<term>", text, env)?;
    p.scope = vars.to_vec();
    p.inside = Some(Inside {
        name: String::new(),
        params: params.to_vec(),
        cells: vec![],
    });
    let t = p.expr()?;
    p.expect_eof()?;
    Ok(t)
}

impl Parser {
    fn new(file: &str, text: &str, env: &ParseEnv) -> PResult<Self> {
        Ok(Parser {
            toks: lex(file, text)?,
            pos: 0,
            schemas: env.schemas.clone(),
            defs: env.defs.iter().cloned().collect(),
            scope: vec![],
            inside: None,
        })
    }

    // ---- token helpers ----

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        let i = (self.pos + k).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    fn tok_at(&self, k: usize) -> &Token {
        let i = (self.pos + k).min(self.toks.len() - 1);
        &self.toks[i]
    }

    fn span(&self) -> Span {
        self.toks[self.pos].span.clone()
    }

    fn prev_span(&self) -> Span {
        self.toks[self.pos.saturating_sub(1)].span.clone()
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, msg: impl Into<String>) -> PResult<T> {
        Err(ParseError::new(ParseErrorKind::Syntax, self.span(), msg))
    }

    fn describe(&self) -> String {
        match self.peek() {
            Tok::Ident(s) => format!("'{s}'"),
            Tok::Num(n) => format!("'{n}'"),
            Tok::Sym(s) => format!("'{s}'"),
            Tok::Eof => "end of input".to_string(),
        }
    }

    fn is_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Tok::Sym(x) if *x == s)
    }

    fn is_kw(&self, s: &str) -> bool {
        matches!(self.peek(), Tok::Ident(x) if x == s)
    }

    fn eat_sym(&mut self, s: &str) -> bool {
        if self.is_sym(s) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect_sym(&mut self, s: &str) -> PResult<()> {
        if self.eat_sym(s) {
            Ok(())
        } else {
            self.err(format!("expected '{s}', found {}", self.describe()))
        }
    }

    fn expect_eof(&self) -> PResult<()> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            self.err(format!("unexpected {}", self.describe()))
        }
    }

    fn ident(&mut self) -> PResult<String> {
        match self.peek().clone() {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                self.bump();
                Ok(s)
            }
            _ => self.err(format!("expected a name, found {}", self.describe())),
        }
    }

    fn schema_by_name(&self, name: &str) -> Option<&Schema> {
        self.schemas.iter().rev().find(|s| s.name == name)
    }

    // ---- module level ----

    fn module(&mut self) -> PResult<Module> {
        let mut items = Vec::new();
        let mut names: HashSet<String> = HashSet::new();
        let mut evals: HashSet<String> = HashSet::new();
        loop {
            let start = self.span();
            let check_dup = |set: &mut HashSet<String>, n: &str, span: &Span| {
                if set.insert(n.to_string()) {
                    Ok(())
                } else {
                    Err(ParseError::new(
                        ParseErrorKind::Duplicate,
                        span.clone(),
                        format!("{n} is declared twice"),
                    ))
                }
            };
            match self.peek().clone() {
                Tok::Eof => break,
                Tok::Ident(k) if k == "def" => {
                    self.bump();
                    let nspan = self.span();
                    let name = self.ident()?;
                    check_dup(&mut names, &name, &nspan)?;
                    self.expect_sym(":")?;
                    let ty = self.expr()?;
                    self.expect_sym(":=")?;
                    let body = self.expr()?;
                    self.defs.insert(name.clone());
                    items.push(Item::Def(Definition {
                        name,
                        ty,
                        body,
                        span: start.to(&self.prev_span()),
                    }));
                }
                Tok::Ident(k) if k == "schema" => {
                    self.bump();
                    let nspan = self.span();
                    let name = self.ident()?;
                    check_dup(&mut names, &name, &nspan)?;
                    let mut s = self.schema_decl(name)?;
                    s.span = Some(start.to(&self.prev_span()));
                    self.schemas.push(s.clone());
                    items.push(Item::Schema(s));
                }
                Tok::Ident(k) if k == "eval" => {
                    self.bump();
                    let nspan = self.span();
                    let name = self.ident()?;
                    check_dup(&mut evals, &name, &nspan)?;
                    let tspan = self.span();
                    let schema = self.ident()?;
                    let Some(sch) = self.schema_by_name(&schema) else {
                        return Err(ParseError::new(
                            ParseErrorKind::Scope,
                            tspan,
                            format!("unknown schema {schema}"),
                        ));
                    };
                    let nparams = sch.params.len();
                    let mut params = Vec::new();
                    if self.eat_sym("[") {
                        if !self.is_sym("]") {
                            loop {
                                params.push(self.literal()?);
                                if !self.eat_sym(",") {
                                    break;
                                }
                            }
                        }
                        self.expect_sym("]")?;
                    }
                    if params.len() != nparams {
                        return Err(ParseError::new(
                            ParseErrorKind::Syntax,
                            tspan.to(&self.prev_span()),
                            format!(
                                "{schema} expects {nparams} parameters, got {}",
                                params.len()
                            ),
                        ));
                    }
                    let mut fuel = None;
                    if self.is_kw("fuel") {
                        self.bump();
                        match self.peek().clone() {
                            Tok::Num(n) => {
                                self.bump();
                                fuel = Some(n as usize);
                            }
                            _ => return self.err("expected a number after 'fuel'"),
                        }
                    }
                    items.push(Item::Eval(EvalRequest {
                        name,
                        schema,
                        params,
                        fuel,
                        span: start.to(&self.prev_span()),
                    }));
                }
                _ => {
                    return self.err(format!(
                        "expected 'def', 'schema' or 'eval', found {}",
                        self.describe()
                    ))
                }
            }
        }
        Ok(Module { items })
    }

    fn literal(&mut self) -> PResult<Literal> {
        match self.peek().clone() {
            Tok::Num(n) => {
                self.bump();
                Ok(Literal::Atom(n.to_string()))
            }
            Tok::Ident(k) if k == "finset" => {
                self.bump();
                self.expect_sym("{")?;
                let mut els = Vec::new();
                if !self.is_sym("}") {
                    loop {
                        els.push(self.literal()?);
                        if !self.eat_sym(",") {
                            break;
                        }
                    }
                }
                self.expect_sym("}")?;
                Ok(Literal::Set(els))
            }
            Tok::Ident(k) if k == "finmap" || k == "family" => {
                self.bump();
                self.expect_sym("{")?;
                let mut entries = Vec::new();
                if !self.is_sym("}") {
                    loop {
                        let key = self.literal()?;
                        self.expect_sym("|->")?;
                        let val = self.literal()?;
                        entries.push((key, val));
                        if !self.eat_sym(",") {
                            break;
                        }
                    }
                }
                self.expect_sym("}")?;
                Ok(if k == "finmap" {
                    Literal::Map(entries)
                } else {
                    Literal::Family(entries)
                })
            }
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                self.bump();
                Ok(Literal::Atom(s))
            }
            Tok::Sym("(") => {
                self.bump();
                let mut els = vec![self.literal()?];
                while self.eat_sym(",") {
                    els.push(self.literal()?);
                }
                self.expect_sym(")")?;
                Ok(if els.len() == 1 {
                    els.pop().unwrap()
                } else {
                    Literal::Tuple(els)
                })
            }
            _ => self.err(format!(
                "expected a finite-set literal, found {}",
                self.describe()
            )),
        }
    }

    /// `(x y : A)` groups; returns names with their types, binding as it goes.
    /// The caller must pop `result.len()` names from the scope.
    fn paren_telescope(&mut self) -> PResult<Vec<(String, Term)>> {
        let mut out = Vec::new();
        while self.is_sym("(") {
            self.bump();
            let mut names = vec![self.ident()?];
            while !self.is_sym(":") {
                names.push(self.ident()?);
            }
            self.expect_sym(":")?;
            let ty = self.expr()?;
            self.expect_sym(")")?;
            for (k, n) in names.into_iter().enumerate() {
                out.push((n.clone(), ty.shifted(0, k)));
                self.scope.push(n);
            }
        }
        Ok(out)
    }

    /// `[x : A, y : B]` inside parameter declarations; binds as it goes.
    fn bracket_telescope(&mut self) -> PResult<Vec<(String, Term)>> {
        let mut out = Vec::new();
        self.expect_sym("[")?;
        if !self.is_sym("]") {
            loop {
                let mut names = vec![self.ident()?];
                while !self.is_sym(":") {
                    names.push(self.ident()?);
                }
                self.expect_sym(":")?;
                let ty = self.expr()?;
                for (k, n) in names.into_iter().enumerate() {
                    out.push((n.clone(), ty.shifted(0, k)));
                    self.scope.push(n);
                }
                if !self.eat_sym(",") {
                    break;
                }
            }
        }
        self.expect_sym("]")?;
        Ok(out)
    }

    fn pop_scope(&mut self, n: usize) {
        let len = self.scope.len();
        self.scope.truncate(len - n);
    }

    fn schema_decl(&mut self, name: String) -> PResult<Schema> {
        self.inside = Some(Inside {
            name: name.clone(),
            params: vec![],
            cells: vec![],
        });
        let r = self.schema_body(&name);
        self.inside = None;
        self.scope.clear();
        r
    }

    fn schema_body(&mut self, name: &str) -> PResult<Schema> {
        let mut seen = HashSet::new();
        while self.is_sym("(") {
            self.bump();
            let nspan = self.span();
            let mut names = vec![self.ident()?];
            while !self.is_sym(":") {
                names.push(self.ident()?);
            }
            self.expect_sym(":")?;
            let ext = if self.is_sym("[") {
                self.bracket_telescope()?
            } else {
                vec![]
            };
            let kind = if self.is_kw("Type") {
                self.bump();
                ParamKind::Type
            } else {
                ParamKind::Term(self.expr()?)
            };
            self.pop_scope(ext.len());
            self.expect_sym(")")?;
            for n in names {
                if !seen.insert(n.clone()) {
                    return Err(ParseError::new(
                        ParseErrorKind::Duplicate,
                        nspan,
                        format!("parameter {n} is declared twice"),
                    ));
                }
                let inside = self.inside.as_mut().unwrap();
                // Later names of a group see earlier ones as parameters, but the
                // declared type was written before any of them existed.
                inside.params.push(ParamEntry {
                    name: n,
                    ext: ext.clone(),
                    kind: kind.clone(),
                });
            }
        }
        self.expect_sym("{")?;
        let mut cell_names = HashSet::new();
        while !self.is_sym("}") {
            let start = self.span();
            let kw = match self.peek() {
                Tok::Ident(k) if k == "point" || k == "path" || k == "cell" => k.clone(),
                _ => {
                    return self.err(format!(
                        "expected 'point', 'path', 'cell' or '}}', found {}",
                        self.describe()
                    ))
                }
            };
            self.bump();
            let nspan = self.span();
            let cname = self.ident()?;
            if !cell_names.insert(cname.clone()) {
                return Err(ParseError::new(
                    ParseErrorKind::Duplicate,
                    nspan,
                    format!("cell {cname} is declared twice"),
                ));
            }
            let tele = self.paren_telescope()?;
            let boundary = match kw.as_str() {
                "point" => Boundary::None,
                "path" => {
                    self.expect_sym(":")?;
                    let source = self.expr()?;
                    self.expect_sym("=")?;
                    let target = self.expr()?;
                    Boundary::Path { source, target }
                }
                _ => {
                    self.expect_sym(":")?;
                    if self.is_kw("square") {
                        self.bump();
                        let top = self.atom()?;
                        let bottom = self.atom()?;
                        let left = self.atom()?;
                        let right = self.atom()?;
                        Boundary::Square {
                            top,
                            bottom,
                            left,
                            right,
                        }
                    } else {
                        let lhs = self.expr()?;
                        self.expect_sym("=")?;
                        let rhs = self.expr()?;
                        Boundary::Globe { lhs, rhs }
                    }
                }
            };
            self.pop_scope(tele.len());
            let cell = CellSpec {
                name: cname,
                args: tele
                    .into_iter()
                    .map(|(name, ty)| CellArg { name, ty })
                    .collect(),
                boundary,
                span: Some(start.to(&self.prev_span())),
            };
            self.inside.as_mut().unwrap().cells.push(cell);
        }
        self.expect_sym("}")?;
        let inside = self.inside.take().unwrap();
        Ok(Schema {
            name: name.to_string(),
            params: ParamScheme::new(inside.params),
            cells: inside.cells,
            span: None,
        })
    }

    // ---- expressions ----

    pub fn expr(&mut self) -> PResult<Term> {
        if self.is_kw("fun") {
            self.bump();
            let mut names = vec![self.ident()?];
            while !self.is_sym("=>") {
                names.push(self.ident()?);
            }
            self.expect_sym("=>")?;
            let n = names.len();
            self.scope.extend(names);
            let body = self.expr();
            self.pop_scope(n);
            let mut t = body?;
            for _ in 0..n {
                t = Term::lam(t);
            }
            return Ok(t);
        }
        if self.binder_group_ahead() {
            let tele = self.paren_telescope()?;
            let n = tele.len();
            let pi = if self.eat_sym("->") {
                true
            } else if self.eat_sym("*") {
                false
            } else {
                self.pop_scope(n);
                return self.err(format!("expected '->' or '*', found {}", self.describe()));
            };
            let body = self.expr();
            self.pop_scope(n);
            let mut t = body?;
            for (_, ty) in tele.into_iter().rev() {
                t = if pi {
                    Term::pi(ty, t)
                } else {
                    Term::sigma(ty, t)
                };
            }
            return Ok(t);
        }
        let lhs = self.sum()?;
        if self.eat_sym("->") {
            self.scope.push(String::new());
            let rhs = self.expr();
            self.pop_scope(1);
            return Ok(Term::pi(lhs, rhs?));
        }
        Ok(lhs)
    }

    fn binder_group_ahead(&self) -> bool {
        if !self.is_sym("(") {
            return false;
        }
        let mut k = 1;
        while let Tok::Ident(s) = self.peek_at(k) {
            if KEYWORDS.contains(&s.as_str()) {
                return false;
            }
            k += 1;
        }
        k > 1 && matches!(self.peek_at(k), Tok::Sym(":"))
    }

    fn sum(&mut self) -> PResult<Term> {
        let lhs = self.prod()?;
        if self.eat_sym("+") {
            let rhs = self.sum()?;
            return Ok(Term::sum(lhs, rhs));
        }
        Ok(lhs)
    }

    fn prod(&mut self) -> PResult<Term> {
        let lhs = self.app()?;
        if self.eat_sym("*") {
            self.scope.push(String::new());
            let rhs = self.prod();
            self.pop_scope(1);
            return Ok(Term::sigma(lhs, rhs?));
        }
        Ok(lhs)
    }

    fn starts_atom(&self) -> bool {
        match self.peek() {
            Tok::Ident(s) => !KEYWORDS.contains(&s.as_str()),
            Tok::Num(_) => true,
            Tok::Sym(s) => *s == "(",
            Tok::Eof => false,
        }
    }

    fn app(&mut self) -> PResult<Term> {
        let mut t = self.head(true)?;
        while self.starts_atom() {
            let a = self.atom()?;
            t = Term::app(t, a);
        }
        Ok(t)
    }

    fn atom(&mut self) -> PResult<Term> {
        self.head(false)
    }

    fn atoms(&mut self, n: usize) -> PResult<Vec<Term>> {
        (0..n).map(|_| self.atom()).collect()
    }

    fn needs_parens<T>(&self, what: &str, span: Span) -> PResult<T> {
        Err(ParseError::new(
            ParseErrorKind::Syntax,
            span,
            format!("{what} takes arguments and must be parenthesized here"),
        ))
    }

    /// Parses `names .` and pushes the names; returns how many were bound.
    fn binders_dot(&mut self, expected: usize) -> PResult<usize> {
        let span = self.span();
        let mut names = Vec::new();
        if let Some(k) = self.binder_prefix_len() {
            for _ in 0..k {
                names.push(self.ident()?);
            }
            self.expect_sym(".")?;
        }
        if names.len() != expected {
            return Err(ParseError::new(
                ParseErrorKind::Syntax,
                span,
                format!("expected {expected} bound names, found {}", names.len()),
            ));
        }
        self.scope.extend(names);
        Ok(expected)
    }

    /// Length of an `x y z .` prefix, if one starts here.
    fn binder_prefix_len(&self) -> Option<usize> {
        let mut k = 0;
        while let Tok::Ident(s) = self.peek_at(k) {
            if KEYWORDS.contains(&s.as_str()) {
                return None;
            }
            k += 1;
        }
        if k == 0 || !matches!(self.peek_at(k), Tok::Sym(".")) {
            return None;
        }
        if self.is_qualifier(k - 1) {
            return None;
        }
        Some(k)
    }

    /// Whether the identifier at offset `k` starts a qualified `H.c` name.
    fn is_qualifier(&self, k: usize) -> bool {
        let Tok::Ident(s) = self.peek_at(k) else {
            return false;
        };
        matches!(self.peek_at(k + 1), Tok::Sym("."))
            && self.tok_at(k + 1).glued
            && matches!(self.peek_at(k + 2), Tok::Ident(_))
            && self.tok_at(k + 2).glued
            && !self.scope.iter().any(|n| n == s)
            && self.schema_by_name(s).is_some()
    }

    fn bound_expr(&mut self, binders: usize) -> PResult<Term> {
        self.binders_dot(binders)?;
        let t = self.expr();
        self.pop_scope(binders);
        t
    }

    fn comma(&mut self) -> PResult<()> {
        self.expect_sym(",")
    }

    fn head(&mut self, allow_args: bool) -> PResult<Term> {
        let span = self.span();
        match self.peek().clone() {
            Tok::Num(n) => {
                self.bump();
                Ok(Term::numeral(n))
            }
            Tok::Sym("(") => {
                self.bump();
                let t = self.expr()?;
                if self.eat_sym(",") {
                    let u = self.expr()?;
                    self.expect_sym(")")?;
                    return Ok(Term::pair(t, u));
                }
                self.expect_sym(")")?;
                Ok(t)
            }
            Tok::Ident(name) if !KEYWORDS.contains(&name.as_str()) => {
                if self.is_qualifier(0) {
                    return self.qualified(allow_args);
                }
                self.bump();
                self.name(&name, span, allow_args)
            }
            _ => self.err(format!("expected an expression, found {}", self.describe())),
        }
    }

    fn name(&mut self, name: &str, span: Span, allow_args: bool) -> PResult<Term> {
        if let Some(pos) = self.scope.iter().rposition(|n| n == name) {
            return Ok(Term::Var(self.scope.len() - 1 - pos));
        }
        if let Some(inside) = &self.inside {
            if let Some(i) = inside.params.iter().position(|p| p.name == name) {
                let arity = inside.params[i].ext.len();
                if arity > 0 && !allow_args {
                    return self.needs_parens(name, span);
                }
                let args = self.atoms(arity)?;
                return Ok(Term::Param(i, args));
            }
            if let Some(k) = inside.cells.iter().position(|c| c.name == name) {
                let arity = inside.cells[k].args.len();
                if arity > 0 && !allow_args {
                    return self.needs_parens(name, span);
                }
                let sname = inside.name.clone();
                let params = inside.identity_params();
                let args = self.atoms(arity)?;
                return Ok(Term::SchemaCtor {
                    schema: sname,
                    params,
                    cell: k,
                    args,
                });
            }
            if inside.name == name {
                return Ok(Term::Schema {
                    name: name.to_string(),
                    params: inside.identity_params(),
                });
            }
        }
        let unary = |s: &str| -> Option<fn(Box<Term>) -> Term> {
            Some(match s {
                "succ" => Term::Succ,
                "refl" => Term::Refl,
                "refl'" => Term::ReflOver,
                "inl" => Term::Inl,
                "inr" => Term::Inr,
                "fst" => Term::Fst,
                "snd" => Term::Snd,
                _ => return None,
            })
        };
        match name {
            "star" => return Ok(Term::Star),
            "zero" => return Ok(Term::Zero),
            "Unit" => return Ok(Term::Unit),
            "Nat" => return Ok(Term::Nat),
            _ => {}
        }
        if let Some(f) = unary(name) {
            if !allow_args {
                return self.needs_parens(name, span);
            }
            let a = self.atom()?;
            return Ok(f(bx(a)));
        }
        match name {
            "Id" | "Square" => {
                if !allow_args {
                    return self.needs_parens(name, span);
                }
                self.expect_sym("[")?;
                let ty = self.expr()?;
                self.expect_sym("]")?;
                if name == "Id" {
                    let xs = self.atoms(2)?;
                    let [a, b]: [Term; 2] = xs.try_into().unwrap();
                    return Ok(Term::id(ty, a, b));
                }
                let xs = self.atoms(4)?;
                let [top, bottom, left, right]: [Term; 4] = xs.try_into().unwrap();
                return Ok(Term::Square {
                    ty: bx(ty),
                    top: bx(top),
                    bottom: bx(bottom),
                    left: bx(left),
                    right: bx(right),
                });
            }
            "IdOver" | "SquareOver" => {
                if !allow_args {
                    return self.needs_parens(name, span);
                }
                self.expect_sym("[")?;
                let family = self.bound_expr(1)?;
                self.expect_sym("]")?;
                if name == "IdOver" {
                    let xs = self.atoms(3)?;
                    let [p, u, v]: [Term; 3] = xs.try_into().unwrap();
                    return Ok(Term::id_over(family, p, u, v));
                }
                let xs = self.atoms(5)?;
                let [square, top, bottom, left, right]: [Term; 5] = xs.try_into().unwrap();
                return Ok(Term::SquareOver {
                    family: bx(family),
                    square: bx(square),
                    top: bx(top),
                    bottom: bx(bottom),
                    left: bx(left),
                    right: bx(right),
                });
            }
            "J" if self.is_sym("(") => {
                self.bump();
                let motive = self.bound_expr(3)?;
                self.comma()?;
                let base = self.bound_expr(1)?;
                let mut rest = Vec::new();
                for _ in 0..3 {
                    self.comma()?;
                    rest.push(self.expr()?);
                }
                self.expect_sym(")")?;
                let [lhs, rhs, path]: [Term; 3] = rest.try_into().unwrap();
                return Ok(Term::j(motive, base, lhs, rhs, path));
            }
            "J'" if self.is_sym("(") => {
                self.bump();
                let motive = self.bound_expr(6)?;
                self.comma()?;
                let base = self.bound_expr(2)?;
                let mut args = Vec::new();
                for _ in 0..6 {
                    self.comma()?;
                    args.push(self.expr()?);
                }
                self.expect_sym(")")?;
                return Ok(Term::JOver {
                    motive: bx(motive),
                    base: bx(base),
                    args,
                });
            }
            "ap" if self.is_sym("(") => {
                self.bump();
                let body = self.bound_expr(1)?;
                let mut rest = Vec::new();
                for _ in 0..3 {
                    self.comma()?;
                    rest.push(self.expr()?);
                }
                self.expect_sym(")")?;
                let [lhs, rhs, path]: [Term; 3] = rest.try_into().unwrap();
                return Ok(Term::ap(body, lhs, rhs, path));
            }
            "natrec" if self.is_sym("(") => {
                self.bump();
                let motive = self.bound_expr(1)?;
                self.comma()?;
                let zero = self.expr()?;
                self.comma()?;
                let succ = self.bound_expr(2)?;
                self.comma()?;
                let scrut = self.expr()?;
                self.expect_sym(")")?;
                return Ok(Term::nat_elim(motive, zero, succ, scrut));
            }
            "case" if self.is_sym("(") => {
                self.bump();
                let motive = self.bound_expr(1)?;
                self.comma()?;
                let left = self.bound_expr(1)?;
                self.comma()?;
                let right = self.bound_expr(1)?;
                self.comma()?;
                let scrut = self.expr()?;
                self.expect_sym(")")?;
                return Ok(Term::SumElim {
                    motive: bx(motive),
                    left: bx(left),
                    right: bx(right),
                    scrut: bx(scrut),
                });
            }
            _ => {}
        }
        if self.defs.contains(name) {
            return Ok(Term::Const(name.to_string()));
        }
        if let Some(s) = self.schema_by_name(name).cloned() {
            let params = self.param_args(&s)?;
            return Ok(Term::Schema {
                name: s.name.clone(),
                params,
            });
        }
        Err(ParseError::new(
            ParseErrorKind::Scope,
            span,
            format!("unbound name {name}"),
        ))
    }

    /// `[p1, x. p2, ...]`, optional when the schema has no parameters.
    fn param_args(&mut self, s: &Schema) -> PResult<Vec<Abs>> {
        if !self.is_sym("[") {
            if s.params.is_empty() {
                return Ok(vec![]);
            }
            return self.err(format!("{} expects parameters in brackets", s.name));
        }
        self.bump();
        let mut out = Vec::new();
        for (i, e) in s.params.entries.iter().enumerate() {
            if i > 0 {
                self.comma()?;
            }
            let n = e.ext.len();
            let body = self.bound_expr(n)?;
            out.push(Abs::new(n, body));
        }
        self.expect_sym("]")?;
        Ok(out)
    }

    fn qualified(&mut self, allow_args: bool) -> PResult<Term> {
        let span = self.span();
        let sname = self.ident()?;
        let s = self
            .schema_by_name(&sname)
            .cloned()
            .expect("checked by is_qualifier");
        self.expect_sym(".")?;
        let cspan = self.span();
        let what = self.ident()?;
        if what == "elim" && s.cell_index("elim").is_none() {
            let params = self.param_args(&s)?;
            self.expect_sym("(")?;
            let motive = self.bound_expr(1)?;
            let methods = self.methods(&s)?;
            self.comma()?;
            let scrut = self.expr()?;
            self.expect_sym(")")?;
            return Ok(Term::SchemaElim {
                schema: sname,
                params,
                motive: bx(motive),
                methods,
                scrut: bx(scrut),
            });
        }
        let Some(cell) = s.cell_index(&what) else {
            return Err(ParseError::new(
                ParseErrorKind::Scope,
                cspan,
                format!("{sname} has no constructor {what}"),
            ));
        };
        let arity = s.cells[cell].args.len();
        if self.is_sym(".") && self.toks[self.pos].glued {
            self.bump();
            let kw = self.ident()?;
            if kw != "comp" {
                return Err(ParseError::new(
                    ParseErrorKind::Syntax,
                    self.prev_span(),
                    format!("expected 'comp', found '{kw}'"),
                ));
            }
            let params = self.param_args(&s)?;
            self.expect_sym("(")?;
            let motive = self.bound_expr(1)?;
            let methods = self.methods(&s)?;
            let mut args = Vec::new();
            for _ in 0..arity {
                self.comma()?;
                args.push(self.expr()?);
            }
            self.expect_sym(")")?;
            return Ok(Term::SchemaPathComp {
                schema: sname,
                params,
                cell,
                motive: bx(motive),
                methods,
                args,
            });
        }
        let params = self.param_args(&s)?;
        if arity > 0 && !allow_args {
            return self.needs_parens(&format!("{sname}.{what}"), span);
        }
        let args = self.atoms(arity)?;
        Ok(Term::SchemaCtor {
            schema: sname,
            params,
            cell,
            args,
        })
    }

    fn methods(&mut self, s: &Schema) -> PResult<Vec<Abs>> {
        let mut out = Vec::new();
        for c in &s.cells {
            self.comma()?;
            let n = c.args.len() + c.recursive_args(&s.name).len();
            let body = self.bound_expr(n)?;
            out.push(Abs::new(n, body));
        }
        Ok(out)
    }
}
