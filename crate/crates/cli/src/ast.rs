//! Program syntax. `Display` is the pretty-printer; its output parses back
//! to an equal program.

use std::fmt;

use drazin_core::{Complex64, ComplexValue, GaussRat, Polynomial};

use crate::lexer::Pos;

/// A node with its source position. Positions do not take part in
/// equality.
#[derive(Clone, Debug)]
pub struct Spanned<T> {
    pub node: T,
    pub pos: Pos,
}

impl<T> Spanned<T> {
    pub fn new(node: T, pos: Pos) -> Self {
        Spanned { node, pos }
    }

    /// At the default position.
    pub fn bare(node: T) -> Self {
        Spanned { node, pos: Pos::default() }
    }
}

impl<T: PartialEq> PartialEq for Spanned<T> {
    fn eq(&self, o: &Self) -> bool {
        self.node == o.node
    }
}

impl<T: fmt::Display> fmt::Display for Spanned<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.node.fmt(f)
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Program {
    pub statements: Vec<Spanned<Stmt>>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Stmt {
    Let(Spanned<String>, Spanned<Expr>),
    Assert(Prop),
    Print(Query),
}

/// A scalar literal; decimals are kept as floating point.
#[derive(Clone, Debug, PartialEq)]
pub enum Num {
    Exact(GaussRat),
    Approx(Complex64),
}

impl Num {
    pub fn to_value(&self) -> ComplexValue {
        match self {
            Num::Exact(g) => ComplexValue::Exact(g.clone()),
            Num::Approx(c) => ComplexValue::Approx(*c),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Kind {
    Geometric(GaussRat, GaussRat),
    Harmonic(GaussRat, u32),
    List(Vec<GaussRat>),
}

#[derive(Clone, Debug, PartialEq)]
pub enum PointSpec {
    /// `None` is infinite multiplicity.
    Point(GaussRat, Option<u64>),
    Seq(Kind, GaussRat),
    Dense(GaussRat, GaussRat),
}

pub type Sub = Box<Spanned<Expr>>;

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Var(String),
    Matrix(Vec<Vec<Num>>),
    Jordan {
        eigen: Vec<(GaussRat, Vec<usize>)>,
        sim: Option<Vec<Vec<GaussRat>>>,
    },
    Diag(Vec<PointSpec>),
    Shift {
        weights: Kind,
        nilpotent: Option<u32>,
    },
    Dsum(Vec<Spanned<Expr>>),
    Mul(Sub, Sub),
    Add(Sub, Sub),
    ShiftBy(Sub, GaussRat),
    Adj(Sub),
    Poly(Sub, Polynomial<GaussRat>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QueryFn {
    Spectrum,
    DrazinSpectrum,
    Poles,
    Ies,
    AscSpectrum,
    DscSpectrum,
    LdSpectrum,
    RdSpectrum,
    Algebraic,
    Meromorphic,
    DrazinInverse,
    Profile,
}

impl QueryFn {
    pub const ALL: [QueryFn; 12] = [
        QueryFn::Spectrum,
        QueryFn::DrazinSpectrum,
        QueryFn::Poles,
        QueryFn::Ies,
        QueryFn::AscSpectrum,
        QueryFn::DscSpectrum,
        QueryFn::LdSpectrum,
        QueryFn::RdSpectrum,
        QueryFn::Algebraic,
        QueryFn::Meromorphic,
        QueryFn::DrazinInverse,
        QueryFn::Profile,
    ];

    pub fn name(self) -> &'static str {
        match self {
            QueryFn::Spectrum => "spectrum",
            QueryFn::DrazinSpectrum => "drazin_spectrum",
            QueryFn::Poles => "poles",
            QueryFn::Ies => "ies",
            QueryFn::AscSpectrum => "asc_spectrum",
            QueryFn::DscSpectrum => "dsc_spectrum",
            QueryFn::LdSpectrum => "ld_spectrum",
            QueryFn::RdSpectrum => "rd_spectrum",
            QueryFn::Algebraic => "algebraic",
            QueryFn::Meromorphic => "meromorphic",
            QueryFn::DrazinInverse => "drazin_inverse",
            QueryFn::Profile => "profile",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|q| q.name() == s)
    }

    pub fn is_set(self) -> bool {
        !matches!(self, QueryFn::Algebraic | QueryFn::Meromorphic | QueryFn::DrazinInverse | QueryFn::Profile)
    }

    pub fn is_flag(self) -> bool {
        matches!(self, QueryFn::Algebraic | QueryFn::Meromorphic)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Query {
    pub func: QueryFn,
    pub arg: Spanned<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rel {
    Eq,
    Subset,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Rhs {
    Query(Query),
    Set(Vec<Num>),
    Flag(bool),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Prop {
    pub left: Query,
    pub rel: Rel,
    pub right: Spanned<Rhs>,
}

// ---------------------------------------------------------------- printing

fn join<T>(items: &[T], show: impl Fn(&T) -> String) -> String {
    items.iter().map(show).collect::<Vec<_>>().join(", ")
}

impl fmt::Display for Num {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Num::Exact(g) => write!(f, "{g}"),
            Num::Approx(c) => write!(f, "{}", ComplexValue::Approx(*c)),
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kind::Geometric(c, q) => write!(f, "geometric({c}, {q})"),
            Kind::Harmonic(c, p) => write!(f, "harmonic({c}, {p})"),
            Kind::List(v) => write!(f, "list({})", join(v, ToString::to_string)),
        }
    }
}

impl fmt::Display for PointSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PointSpec::Point(v, Some(m)) => write!(f, "{v}: {m}"),
            PointSpec::Point(v, None) => write!(f, "{v}: inf"),
            PointSpec::Seq(k, l) => write!(f, "seq {k} -> {l}"),
            PointSpec::Dense(lo, hi) => write!(f, "dense [{lo}, {hi}]"),
        }
    }
}

fn rows<T: fmt::Display>(m: &[Vec<T>]) -> String {
    format!("[{}]", join(m, |r| format!("[{}]", join(r, ToString::to_string))))
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Var(v) => f.write_str(v),
            Expr::Matrix(m) => write!(f, "matrix {}", rows(m)),
            Expr::Jordan { eigen, sim } => {
                let e = join(eigen, |(l, s)| format!("{l}: [{}]", join(s, ToString::to_string)));
                write!(f, "jordan {{ {e} }}")?;
                match sim {
                    Some(s) => write!(f, " sim matrix {}", rows(s)),
                    None => Ok(()),
                }
            }
            Expr::Diag(parts) => write!(f, "diag {{ {} }}", join(parts, ToString::to_string)),
            Expr::Shift { weights, nilpotent } => {
                let nil = nilpotent.map_or("none".to_string(), |m| m.to_string());
                write!(f, "shift {{ weights: {weights}, nilpotent: {nil} }}")
            }
            Expr::Dsum(parts) => write!(f, "dsum({})", join(parts, ToString::to_string)),
            Expr::Mul(a, b) => write!(f, "mul({a}, {b})"),
            Expr::Add(a, b) => write!(f, "add({a}, {b})"),
            Expr::ShiftBy(a, l) => write!(f, "shiftby({a}, {l})"),
            Expr::Adj(a) => write!(f, "adj({a})"),
            Expr::Poly(a, p) => write!(f, "poly({a}, {p})"),
        }
    }
}

impl fmt::Display for Query {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.func.name(), self.arg)
    }
}

impl fmt::Display for Rhs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rhs::Query(q) => write!(f, "{q}"),
            Rhs::Set(v) => write!(f, "{{{}}}", join(v, ToString::to_string)),
            Rhs::Flag(b) => write!(f, "{b}"),
        }
    }
}

impl fmt::Display for Prop {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rel = match self.rel {
            Rel::Eq => "==",
            Rel::Subset => "<=",
        };
        write!(f, "{} {rel} {}", self.left, self.right)
    }
}

impl fmt::Display for Stmt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Stmt::Let(name, e) => write!(f, "let {name} = {e};"),
            Stmt::Assert(p) => write!(f, "assert {p};"),
            Stmt::Print(q) => write!(f, "print {q};"),
        }
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.statements {
            writeln!(f, "{s}")?;
        }
        Ok(())
    }
}
