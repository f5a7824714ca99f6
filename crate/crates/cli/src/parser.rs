//! Recursive descent over the token stream. Errors carry the position and
//! the set of tokens that would have been accepted there.

use std::fmt;

use drazin_core::{Complex64, ComplexValue, GaussRat, Polynomial};
use num_traits::Zero;

use crate::ast::*;
use crate::lexer::{tokenize, Pos, Tok, Token};

#[derive(Clone, Debug, PartialEq)]
pub struct ParseError {
    pub pos: Pos,
    /// Empty for lexical errors.
    pub expected: Vec<String>,
    pub found: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.expected.as_slice() {
            [] => write!(f, "{}: unexpected character {}", self.pos, self.found),
            [one] => write!(f, "{}: expected {one}, found {}", self.pos, self.found),
            many => write!(f, "{}: expected one of {}, found {}", self.pos, many.join(", "), self.found),
        }
    }
}

impl std::error::Error for ParseError {}

type PResult<T> = Result<T, ParseError>;

/// Words that cannot name an operator.
pub const RESERVED: [&str; 24] = [
    "let", "assert", "print", "matrix", "jordan", "sim", "diag", "seq", "dense", "inf", "shift", "weights",
    "nilpotent", "none", "dsum", "mul", "add", "shiftby", "adj", "poly", "true", "false", "i", "x",
];

const EXPR_START: [&str; 11] = [
    "`matrix`", "`jordan`", "`diag`", "`shift`", "`dsum`", "`mul`", "`add`", "`shiftby`", "`adj`", "`poly`",
    "identifier",
];

enum Mag {
    Exact(GaussRat),
    Approx(f64),
}

impl Mag {
    fn to_f64(&self) -> f64 {
        match self {
            Mag::Exact(g) => ComplexValue::Exact(g.clone()).to_complex64().re,
            Mag::Approx(x) => *x,
        }
    }
}

struct Parser {
    toks: Vec<Token>,
    i: usize,
}

impl Parser {
    fn new(src: &str) -> PResult<Self> {
        let toks = tokenize(src).map_err(|e| ParseError {
            pos: e.pos,
            expected: Vec::new(),
            found: format!("`{}`", e.found),
        })?;
        Ok(Parser { toks, i: 0 })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.i].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.i + k).min(self.toks.len() - 1)].tok
    }

    fn pos(&self) -> Pos {
        self.toks[self.i].pos
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.i].clone();
        if self.i + 1 < self.toks.len() {
            self.i += 1;
        }
        t
    }

    fn err<T>(&self, expected: &[&str]) -> PResult<T> {
        Err(ParseError {
            pos: self.pos(),
            expected: expected.iter().map(ToString::to_string).collect(),
            found: self.peek().to_string(),
        })
    }

    fn is_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Tok::Sym(t) if *t == s)
    }

    fn is_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(t) if t == kw)
    }

    fn eat_sym(&mut self, s: &str) -> bool {
        let hit = self.is_sym(s);
        if hit {
            self.bump();
        }
        hit
    }

    fn expect_sym(&mut self, s: &str) -> PResult<()> {
        if self.eat_sym(s) {
            Ok(())
        } else {
            self.err(&[&format!("`{s}`")])
        }
    }

    fn expect_kw(&mut self, kw: &str) -> PResult<()> {
        if self.is_kw(kw) {
            self.bump();
            Ok(())
        } else {
            self.err(&[&format!("`{kw}`")])
        }
    }

    fn ident(&mut self) -> PResult<Spanned<String>> {
        match self.peek() {
            Tok::Ident(s) if !RESERVED.contains(&s.as_str()) && QueryFn::from_name(s).is_none() => {
                let s = s.clone();
                let pos = self.bump().pos;
                Ok(Spanned::new(s, pos))
            }
            _ => self.err(&["identifier"]),
        }
    }

    fn nat<T: std::str::FromStr>(&mut self) -> PResult<T> {
        if let Tok::Int(s) = self.peek() {
            if let Ok(v) = s.parse() {
                self.bump();
                return Ok(v);
            }
        }
        self.err(&["natural number"])
    }

    // ------------------------------------------------------------ numbers

    fn mag(&mut self) -> PResult<Mag> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                let mut text = n;
                if self.eat_sym("/") {
                    match self.peek().clone() {
                        Tok::Int(d) if d.bytes().any(|b| b != b'0') => {
                            self.bump();
                            text = format!("{text}/{d}");
                        }
                        _ => return self.err(&["nonzero denominator"]),
                    }
                }
                Ok(Mag::Exact(text.parse().expect("digits form a rational")))
            }
            Tok::Decimal(d) => {
                self.bump();
                match d.parse::<f64>() {
                    Ok(x) if x.is_finite() => Ok(Mag::Approx(x)),
                    _ => self.err(&["finite number"]),
                }
            }
            _ => self.err(&["number"]),
        }
    }

    fn unit_i(&mut self) -> bool {
        let hit = self.is_kw("i");
        if hit {
            self.bump();
        }
        hit
    }

    /// `("+"|"-") [mag] "i"` ahead, so `1 -2` stays two numbers.
    fn imaginary_follows(&self) -> bool {
        if !matches!(self.peek(), Tok::Sym("+" | "-")) {
            return false;
        }
        let is_i = |t: &Tok| matches!(t, Tok::Ident(s) if s == "i");
        match self.peek_at(1) {
            t if is_i(t) => true,
            Tok::Decimal(_) => is_i(self.peek_at(2)),
            Tok::Int(_) if *self.peek_at(2) == Tok::Sym("/") => is_i(self.peek_at(4)),
            Tok::Int(_) => is_i(self.peek_at(2)),
            _ => false,
        }
    }

    /// `[-] mag [("+"|"-") mag "i"]`, `[-] mag "i"` or `[-] "i"`.
    fn num(&mut self) -> PResult<Num> {
        let neg = self.eat_sym("-");
        let sign = |m: Mag, neg: bool| match m {
            Mag::Exact(g) if neg => Mag::Exact(-g),
            Mag::Approx(x) if neg => Mag::Approx(-x),
            m => m,
        };
        let zero = Mag::Exact(GaussRat::zero());
        let one = || Mag::Exact(GaussRat::int(1));
        let (re, im) = if self.unit_i() {
            (zero, sign(one(), neg))
        } else {
            let first = sign(self.mag()?, neg);
            if self.unit_i() {
                (zero, first)
            } else if self.imaginary_follows() {
                let neg_im = self.eat_sym("-");
                if !neg_im {
                    self.bump();
                }
                let im = if self.unit_i() {
                    one()
                } else {
                    let m = self.mag()?;
                    if !self.unit_i() {
                        return self.err(&["`i`"]);
                    }
                    m
                };
                (first, sign(im, neg_im))
            } else {
                (first, zero)
            }
        };
        Ok(match (re, im) {
            (Mag::Exact(r), Mag::Exact(i)) => Num::Exact(&r + &(&i * &GaussRat::i())),
            (r, i) => Num::Approx(Complex64::new(r.to_f64(), i.to_f64())),
        })
    }

    fn exact(&mut self) -> PResult<GaussRat> {
        let pos = self.pos();
        let found = self.peek().to_string();
        match self.num()? {
            Num::Exact(g) => Ok(g),
            Num::Approx(_) => Err(ParseError {
                pos,
                expected: vec!["exact rational".into()],
                found,
            }),
        }
    }

    fn real(&mut self) -> PResult<GaussRat> {
        let pos = self.pos();
        let found = self.peek().to_string();
        let g = self.exact()?;
        if g.is_real() {
            Ok(g)
        } else {
            Err(ParseError {
                pos,
                expected: vec!["real rational".into()],
                found,
            })
        }
    }

    fn list<T>(&mut self, open: &str, close: &str, mut item: impl FnMut(&mut Self) -> PResult<T>) -> PResult<Vec<T>> {
        self.expect_sym(open)?;
        let mut out = Vec::new();
        if self.eat_sym(close) {
            return Ok(out);
        }
        loop {
            out.push(item(self)?);
            if self.eat_sym(close) {
                return Ok(out);
            }
            if !self.eat_sym(",") {
                return self.err(&["`,`", &format!("`{close}`")]);
            }
        }
    }

    fn rows<T>(&mut self, item: impl Fn(&mut Self) -> PResult<T> + Copy) -> PResult<Vec<Vec<T>>> {
        self.list("[", "]", |p| p.list("[", "]", item))
    }

    // ------------------------------------------------------------ polynomials

    /// `[-] term (("+"|"-") term)*` in the variable `x`.
    fn polynomial(&mut self) -> PResult<Polynomial<GaussRat>> {
        let mut coeffs: Vec<GaussRat> = Vec::new();
        let mut neg = self.eat_sym("-");
        loop {
            let (c, k) = self.term()?;
            if coeffs.len() <= k {
                coeffs.resize(k + 1, GaussRat::zero());
            }
            coeffs[k] = if neg { &coeffs[k] - &c } else { &coeffs[k] + &c };
            if self.eat_sym("+") {
                neg = false;
            } else if self.eat_sym("-") {
                neg = true;
            } else {
                return Ok(Polynomial::new(coeffs));
            }
        }
    }

    fn term(&mut self) -> PResult<(GaussRat, usize)> {
        let coef = match self.peek() {
            Tok::Int(_) => {
                let pos = self.pos();
                let found = self.peek().to_string();
                match self.mag()? {
                    Mag::Exact(g) => Some(g),
                    Mag::Approx(_) => {
                        return Err(ParseError {
                            pos,
                            expected: vec!["exact rational".into()],
                            found,
                        })
                    }
                }
            }
            Tok::Sym("(") => {
                self.bump();
                let g = self.exact()?;
                self.expect_sym(")")?;
                Some(g)
            }
            Tok::Ident(x) if x == "x" => None,
            _ => return self.err(&["number", "`(`", "`x`"]),
        };
        if !self.is_kw("x") {
            return Ok((coef.expect("a coefficient or x"), 0));
        }
        self.bump();
        let k = if self.eat_sym("^") { self.nat()? } else { 1 };
        Ok((coef.unwrap_or_else(|| GaussRat::int(1)), k))
    }

    // ------------------------------------------------------------ operators

    fn kind(&mut self) -> PResult<Kind> {
        let k = match self.peek() {
            Tok::Ident(s) if s == "geometric" => {
                self.bump();
                self.expect_sym("(")?;
                let c = self.exact()?;
                self.expect_sym(",")?;
                let q = self.exact()?;
                Kind::Geometric(c, q)
            }
            Tok::Ident(s) if s == "harmonic" => {
                self.bump();
                self.expect_sym("(")?;
                let c = self.exact()?;
                self.expect_sym(",")?;
                Kind::Harmonic(c, self.nat()?)
            }
            Tok::Ident(s) if s == "list" => {
                self.bump();
                return Ok(Kind::List(self.list("(", ")", Self::exact)?));
            }
            _ => return self.err(&["`geometric`", "`harmonic`", "`list`"]),
        };
        self.expect_sym(")")?;
        Ok(k)
    }

    fn point_spec(&mut self) -> PResult<PointSpec> {
        if self.is_kw("seq") {
            self.bump();
            let k = self.kind()?;
            self.expect_sym("->")?;
            return Ok(PointSpec::Seq(k, self.exact()?));
        }
        if self.is_kw("dense") {
            self.bump();
            self.expect_sym("[")?;
            let lo = self.real()?;
            self.expect_sym(",")?;
            let hi = self.real()?;
            self.expect_sym("]")?;
            return Ok(PointSpec::Dense(lo, hi));
        }
        if !matches!(self.peek(), Tok::Int(_) | Tok::Decimal(_) | Tok::Sym("-")) && !self.is_kw("i") {
            return self.err(&["number", "`seq`", "`dense`"]);
        }
        let v = self.exact()?;
        self.expect_sym(":")?;
        if self.is_kw("inf") {
            self.bump();
            return Ok(PointSpec::Point(v, None));
        }
        if !matches!(self.peek(), Tok::Int(_)) {
            return self.err(&["natural number", "`inf`"]);
        }
        Ok(PointSpec::Point(v, Some(self.nat()?)))
    }

    fn jordan(&mut self) -> PResult<Expr> {
        self.expect_sym("{")?;
        let mut eigen = Vec::new();
        while !self.eat_sym("}") {
            let l = self.exact()?;
            self.expect_sym(":")?;
            let sizes = self.list("[", "]", Self::nat)?;
            eigen.push((l, sizes));
            if !self.eat_sym(",") && !self.is_sym("}") {
                return self.err(&["`,`", "`}`"]);
            }
        }
        let sim = if self.is_kw("sim") {
            self.bump();
            self.expect_kw("matrix")?;
            Some(self.rows(Self::exact)?)
        } else {
            None
        };
        Ok(Expr::Jordan { eigen, sim })
    }

    fn shift(&mut self) -> PResult<Expr> {
        self.expect_sym("{")?;
        self.expect_kw("weights")?;
        self.expect_sym(":")?;
        let weights = self.kind()?;
        self.expect_sym(",")?;
        self.expect_kw("nilpotent")?;
        self.expect_sym(":")?;
        let nilpotent = if self.is_kw("none") {
            self.bump();
            None
        } else if matches!(self.peek(), Tok::Int(_)) {
            Some(self.nat()?)
        } else {
            return self.err(&["`none`", "natural number"]);
        };
        self.expect_sym("}")?;
        Ok(Expr::Shift { weights, nilpotent })
    }

    fn sub(&mut self) -> PResult<Sub> {
        Ok(Box::new(self.expr()?))
    }

    fn expr(&mut self) -> PResult<Spanned<Expr>> {
        let pos = self.pos();
        let Tok::Ident(word) = self.peek().clone() else {
            return self.err(&EXPR_START);
        };
        let call = ["dsum", "mul", "add", "shiftby", "adj", "poly"].contains(&word.as_str());
        let block = ["matrix", "jordan", "diag", "shift"].contains(&word.as_str());
        if !call && !block {
            let name = self.ident().or_else(|_| self.err(&EXPR_START))?;
            return Ok(Spanned::new(Expr::Var(name.node), pos));
        }
        self.bump();
        let e = match word.as_str() {
            "matrix" => Expr::Matrix(self.rows(Self::num)?),
            "jordan" => self.jordan()?,
            "diag" => {
                let parts = self.list("{", "}", Self::point_spec)?;
                if parts.is_empty() {
                    return Err(ParseError {
                        pos: self.toks[self.i - 1].pos,
                        expected: vec!["number".into(), "`seq`".into(), "`dense`".into()],
                        found: "`}`".into(),
                    });
                }
                Expr::Diag(parts)
            }
            "shift" => self.shift()?,
            "dsum" => {
                let parts = self.list("(", ")", Self::expr)?;
                if parts.is_empty() {
                    return Err(ParseError {
                        pos: self.toks[self.i - 1].pos,
                        expected: EXPR_START.iter().map(ToString::to_string).collect(),
                        found: "`)`".into(),
                    });
                }
                Expr::Dsum(parts)
            }
            _ => {
                self.expect_sym("(")?;
                let a = self.sub()?;
                let e = match word.as_str() {
                    "adj" => Expr::Adj(a),
                    w => {
                        self.expect_sym(",")?;
                        match w {
                            "mul" => Expr::Mul(a, self.sub()?),
                            "add" => Expr::Add(a, self.sub()?),
                            "shiftby" => Expr::ShiftBy(a, self.exact()?),
                            _ => Expr::Poly(a, self.polynomial()?),
                        }
                    }
                };
                self.expect_sym(")")?;
                e
            }
        };
        Ok(Spanned::new(e, pos))
    }

    // ------------------------------------------------------------ statements

    fn query(&mut self) -> PResult<Query> {
        let func = match self.peek() {
            Tok::Ident(s) => QueryFn::from_name(s),
            _ => None,
        };
        let Some(func) = func else {
            let names: Vec<String> = QueryFn::ALL.iter().map(|q| format!("`{}`", q.name())).collect();
            let names: Vec<&str> = names.iter().map(String::as_str).collect();
            return self.err(&names);
        };
        self.bump();
        self.expect_sym("(")?;
        let arg = self.ident()?;
        self.expect_sym(")")?;
        Ok(Query { func, arg })
    }

    fn prop(&mut self) -> PResult<Prop> {
        let left = self.query()?;
        let rel = if self.eat_sym("==") {
            Rel::Eq
        } else if self.eat_sym("<=") {
            Rel::Subset
        } else {
            return self.err(&["`==`", "`<=`"]);
        };
        let pos = self.pos();
        let right = match self.peek() {
            Tok::Sym("{") => Rhs::Set(self.list("{", "}", Self::num)?),
            Tok::Ident(s) if s == "true" || s == "false" => {
                let b = s == "true";
                self.bump();
                Rhs::Flag(b)
            }
            Tok::Ident(s) if QueryFn::from_name(s).is_some() => Rhs::Query(self.query()?),
            _ => return self.err(&["query", "set literal", "`true`", "`false`"]),
        };
        Ok(Prop {
            left,
            rel,
            right: Spanned::new(right, pos),
        })
    }

    fn stmt(&mut self) -> PResult<Stmt> {
        let s = match self.peek() {
            Tok::Ident(s) if s == "let" => {
                self.bump();
                let name = self.ident()?;
                self.expect_sym("=")?;
                Stmt::Let(name, self.expr()?)
            }
            Tok::Ident(s) if s == "assert" => {
                self.bump();
                Stmt::Assert(self.prop()?)
            }
            Tok::Ident(s) if s == "print" => {
                self.bump();
                Stmt::Print(self.query()?)
            }
            _ => return self.err(&["`let`", "`assert`", "`print`"]),
        };
        self.expect_sym(";")?;
        Ok(s)
    }

    fn program(&mut self) -> PResult<Program> {
        let mut statements = Vec::new();
        while *self.peek() != Tok::Eof {
            let pos = self.pos();
            statements.push(Spanned::new(self.stmt()?, pos));
        }
        Ok(Program { statements })
    }
}

pub fn parse(src: &str) -> PResult<Program> {
    Parser::new(src)?.program()
}

/// A matrix file: `[[..], ..]` with an optional leading `matrix`, or one
/// row per line with entries separated by commas or whitespace.
pub fn parse_matrix(src: &str) -> PResult<Vec<Vec<Num>>> {
    let mut p = Parser::new(src)?;
    if p.is_kw("matrix") || p.is_sym("[") {
        if p.is_kw("matrix") {
            p.bump();
        }
        let m = p.rows(Parser::num)?;
        if *p.peek() != Tok::Eof {
            return p.err(&["end of input"]);
        }
        return Ok(m);
    }
    let mut rows: Vec<Vec<Num>> = Vec::new();
    let mut line = 0;
    while *p.peek() != Tok::Eof {
        if p.pos().line != line {
            line = p.pos().line;
            rows.push(Vec::new());
        }
        let v = p.num()?;
        rows.last_mut().expect("a row").push(v);
        if p.is_sym(",") && p.toks[p.i + 1].pos.line == line {
            p.bump();
        }
    }
    if rows.is_empty() {
        return p.err(&["number", "`[`"]);
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> GaussRat {
        s.parse().unwrap()
    }

    #[test]
    fn a_binding_and_a_query() {
        let p = parse("let T = diag { 0: 1, 1: inf }; print poles(T);").unwrap();
        assert_eq!(p.statements.len(), 2);
        let Stmt::Let(name, e) = &p.statements[0].node else { panic!() };
        assert_eq!(name.node, "T");
        assert_eq!(e.node, Expr::Diag(vec![PointSpec::Point(g("0"), Some(1)), PointSpec::Point(g("1"), None)]));
        let Stmt::Print(q) = &p.statements[1].node else { panic!() };
        assert_eq!(q.func, QueryFn::Poles);
        assert_eq!(p.statements[1].pos, Pos { line: 1, col: 32 });
    }

    #[test]
    fn complex_literals() {
        let nums = |s: &str| {
            let p = parse(&format!("let A = matrix [[{s}]];")).unwrap();
            let Stmt::Let(_, e) = &p.statements[0].node else { panic!() };
            let Expr::Matrix(m) = &e.node else { panic!() };
            m[0][0].clone()
        };
        assert_eq!(nums("1/2-3/4i"), Num::Exact(g("1/2-3/4i")));
        assert_eq!(nums("-2i"), Num::Exact(g("-2i")));
        assert_eq!(nums("-i"), Num::Exact(g("-1i")));
        assert_eq!(nums("1+i"), Num::Exact(g("1+1i")));
        assert_eq!(nums("0.5-1e-1i"), Num::Approx(Complex64::new(0.5, -0.1)));
        assert_eq!(nums("1/4+0.5i"), Num::Approx(Complex64::new(0.25, 0.5)));
    }

    #[test]
    fn polynomials() {
        let poly = |s: &str| {
            let p = parse(&format!("let B = poly(A, {s});")).unwrap();
            let Stmt::Let(_, e) = &p.statements[0].node else { panic!() };
            let Expr::Poly(_, q) = &e.node else { panic!() };
            q.clone()
        };
        assert_eq!(poly("x^2 - x").to_string(), "x^2 - x");
        assert_eq!(poly("-1/2x^3 + (1+2i)x + 3").to_string(), "-1/2x^3 + (1+2i)x + 3");
        assert_eq!(poly("x + x"), Polynomial::new(vec![g("0"), g("2")]));
    }

    #[test]
    fn all_expression_forms() {
        let src = "let A = jordan { 0: [2, 1], 1/2: [1] } sim matrix [[1, 0, 0], [0, 1, 0], [1, 0, 1]];
let S = shift { weights: geometric(1, 1/2), nilpotent: none };
let D = diag { seq harmonic(1, 1) -> 0, seq list(1, 2, 3) -> 3, dense [0, 1], 2+1i: 3 };
let E = dsum(A, mul(S, S), add(D, D), shiftby(adj(S), 1-1i), poly(D, x^2));
assert drazin_spectrum(D) <= spectrum(D);
assert poles(A) == {0, 1/2};
assert meromorphic(S) == true;
";
        let p = parse(src).unwrap();
        assert_eq!(p.statements.len(), 7);
        assert_eq!(p.to_string(), src);
    }

    #[test]
    fn errors_name_position_and_expected_tokens() {
        let e = parse("let A = matrix [[1, 2]\nlet").unwrap_err();
        assert_eq!(e.pos, Pos { line: 2, col: 1 });
        assert_eq!(e.expected, vec!["`,`", "`]`"]);
        assert_eq!(e.found, "`let`");
        assert_eq!(e.to_string(), "line 2, column 1: expected one of `,`, `]`, found `let`");

        let e = parse("print poles(T)").unwrap_err();
        assert_eq!(e.expected, vec!["`;`"]);
        assert_eq!(e.found, "end of input");

        let e = parse("let diag = diag { 0: 1 };").unwrap_err();
        assert_eq!(e.expected, vec!["identifier"]);
        let e = parse("let A = frob(B);").unwrap_err();
        assert_eq!(e.pos, Pos { line: 1, col: 13 });
        assert_eq!(e.expected, vec!["`;`"]);
        let e = parse("let A = diag { 0.5: 1 };").unwrap_err();
        assert_eq!(e.expected, vec!["exact rational"]);
        let e = parse("let A = matrix [[1/0]];").unwrap_err();
        assert_eq!(e.expected, vec!["nonzero denominator"]);
        let e = parse("let A = @;").unwrap_err();
        assert!(e.expected.is_empty());
        assert_eq!(e.to_string(), "line 1, column 9: unexpected character `@`");
    }

    #[test]
    fn empty_program() {
        assert_eq!(parse("  # nothing\n").unwrap(), Program::default());
    }

    #[test]
    fn matrix_files() {
        let a = parse_matrix("[[1, 2], [3, 4]]").unwrap();
        let b = parse_matrix("matrix [[1, 2], [3, 4]]").unwrap();
        let c = parse_matrix("1 2\n3, 4\n").unwrap();
        assert_eq!(parse_matrix("1 -2\n-3 4").unwrap()[0][1], Num::Exact(g("-2")));
        assert_eq!(a, b);
        assert_eq!(a, c);
        assert_eq!(parse_matrix("0.5 1-2i\n").unwrap()[0][1], Num::Exact(g("1-2i")));
        assert!(parse_matrix("").is_err());
    }
}
