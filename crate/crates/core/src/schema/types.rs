use crate::surface::Span;
use crate::syntax::{Abs, Term};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParamKind {
    Type,
    /// A term parameter of the given type, scoped over the context extension.
    Term(Term),
}

/// One premise of a formation rule. The extension is a telescope over the
/// earlier parameters; `Param(j, ..)` references inside it point backwards.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamEntry {
    pub name: String,
    pub ext: Vec<(String, Term)>,
    pub kind: ParamKind,
}

impl ParamEntry {
    pub fn ty(name: &str, ext: Vec<(String, Term)>) -> Self {
        ParamEntry {
            name: name.to_string(),
            ext,
            kind: ParamKind::Type,
        }
    }

    pub fn term(name: &str, ext: Vec<(String, Term)>, ty: Term) -> Self {
        ParamEntry {
            name: name.to_string(),
            ext,
            kind: ParamKind::Term(ty),
        }
    }

    pub fn arity(&self) -> usize {
        self.ext.len()
    }

    /// The parameter applied to its own extension variables.
    pub fn identity(&self, index: usize) -> Abs {
        let n = self.ext.len();
        Abs::new(n, Term::Param(index, (0..n).rev().map(Term::Var).collect()))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ParamScheme {
    pub entries: Vec<ParamEntry>,
}

impl ParamScheme {
    pub fn new(entries: Vec<ParamEntry>) -> Self {
        ParamScheme { entries }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn identity_args(&self) -> Vec<Abs> {
        self.entries
            .iter()
            .enumerate()
            .map(|(i, e)| e.identity(i))
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CellDim {
    Point,
    Path,
    SquareBoundary,
    Globe(u8),
}

/// Attaching data of a cell. All terms live in the context of the cell's
/// argument telescope.
#[derive(Clone, Debug, PartialEq, Eq)]
#[allow(clippy::large_enum_variant)]
pub enum Boundary {
    None,
    Path {
        source: Term,
        target: Term,
    },
    Square {
        top: Term,
        bottom: Term,
        left: Term,
        right: Term,
    },
    Globe {
        lhs: Term,
        rhs: Term,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellArg {
    pub name: String,
    pub ty: Term,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellSpec {
    pub name: String,
    pub args: Vec<CellArg>,
    pub boundary: Boundary,
    pub span: Option<Span>,
}

/// How a constructor argument refers back to the type being defined.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Recursion {
    /// The argument is an element of the carrier.
    Direct,
    /// The argument is a family `(s : S) -> X`; holds `S`.
    Func(Term),
}

impl CellSpec {
    pub fn point(name: &str, args: Vec<CellArg>) -> Self {
        CellSpec {
            name: name.to_string(),
            args,
            boundary: Boundary::None,
            span: None,
        }
    }

    pub fn dim(&self) -> CellDim {
        match self.boundary {
            Boundary::None => CellDim::Point,
            Boundary::Path { .. } => CellDim::Path,
            Boundary::Square { .. } => CellDim::SquareBoundary,
            Boundary::Globe { .. } => CellDim::Globe(2),
        }
    }

    pub fn arity(&self) -> usize {
        self.args.len()
    }

    /// Recursion pattern of argument `i`, judged by the head of its type.
    pub fn recursion(&self, schema: &str, i: usize) -> Option<Recursion> {
        recursion_of(schema, &self.args[i].ty)
    }

    pub fn recursive_args(&self, schema: &str) -> Vec<(usize, Recursion)> {
        (0..self.args.len())
            .filter_map(|i| self.recursion(schema, i).map(|r| (i, r)))
            .collect()
    }
}

pub fn is_carrier(schema: &str, t: &Term) -> bool {
    matches!(t, Term::Schema { name, .. } if name == schema)
}

pub fn recursion_of(schema: &str, ty: &Term) -> Option<Recursion> {
    if is_carrier(schema, ty) {
        return Some(Recursion::Direct);
    }
    if let Term::Pi(dom, cod) = ty {
        if is_carrier(schema, cod) {
            return Some(Recursion::Func((**dom).clone()));
        }
    }
    None
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Schema {
    pub name: String,
    pub params: ParamScheme,
    pub cells: Vec<CellSpec>,
    pub span: Option<Span>,
}

impl Schema {
    pub fn new(name: &str, params: ParamScheme, cells: Vec<CellSpec>) -> Self {
        Schema {
            name: name.to_string(),
            params,
            cells,
            span: None,
        }
    }

    /// The carrier `X` as seen from inside the schema's own declarations.
    pub fn carrier(&self) -> Term {
        Term::Schema {
            name: self.name.clone(),
            params: self.params.identity_args(),
        }
    }

    pub fn cell_index(&self, name: &str) -> Option<usize> {
        self.cells.iter().position(|c| c.name == name)
    }

    pub fn shape(&self, cell: usize) -> PolyShape {
        let c = &self.cells[cell];
        let mut index = Vec::new();
        let mut arities = Vec::new();
        for (i, a) in c.args.iter().enumerate() {
            match recursion_of(&self.name, &a.ty) {
                Some(Recursion::Direct) => arities.push(Term::Unit),
                Some(Recursion::Func(s)) => arities.push(s),
                None => index.push((i, a.ty.clone())),
            }
        }
        PolyShape {
            dim: c.dim(),
            index,
            arities,
        }
    }
}

/// The polynomial reading of a cell: the non-recursive arguments form the
/// index telescope and every recursive argument contributes one arity.
/// A direct argument has arity `Unit`; `(s : S) -> X` has arity `S`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyShape {
    pub dim: CellDim,
    pub index: Vec<(usize, Term)>,
    pub arities: Vec<Term>,
}
