//! Binding, evaluation and reporting.
//!
//! A program is checked in full (bindings, query types, combinator
//! compatibility) before anything is evaluated, so a bad program produces
//! no partial report. Profiles are computed once per operator.

use std::collections::HashMap;
use std::fmt::{self, Write as _};

use drazin_core::mult::MAX_EXACT_DIM;
use drazin_core::operator::{from_blocks, matrix_dsl, Block, Component, ComponentKind, DiagonalBlock, PoleSet, ShiftBlock, Weights};
use drazin_core::sequence::Sequence;
use drazin_core::spectra::Multiplicity;
use drazin_core::{
    duality_report, spectral_profile, Complex64, DualityReport, Error, GaussRat, JordanPresentation, Matrix,
    MatrixBlock, OperatorDesc, SpectralProfile, SpectralSet, ToleranceFrame, Truth,
};
use num_traits::Zero;
use serde::{Serialize, Serializer};

use crate::ast::*;
use crate::lexer::Pos;
use crate::parser::{parse, parse_matrix, ParseError};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug)]
pub enum AnalyzeError {
    Parse(ParseError),
    /// Binding and typing errors.
    Static { pos: Pos, message: String },
    /// Errors from the operator layer: compatibility, ambiguity.
    Eval { pos: Pos, error: Error },
}

impl AnalyzeError {
    /// 3 for numeric ambiguity (including spectra that leave the Gaussian
    /// rationals), 2 for everything else.
    pub fn exit_code(&self) -> u8 {
        match self {
            AnalyzeError::Eval { error, .. } if is_numeric(error) => 3,
            _ => 2,
        }
    }
}

pub fn is_numeric(e: &Error) -> bool {
    e.is_ambiguity() || matches!(e, Error::IrrationalSpectrum { .. })
}

impl fmt::Display for AnalyzeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AnalyzeError::Parse(e) => write!(f, "parse error: {e}"),
            AnalyzeError::Static { pos, message } => write!(f, "{pos}: {message}"),
            AnalyzeError::Eval { pos, error } => write!(f, "{pos}: {error}"),
        }
    }
}

impl std::error::Error for AnalyzeError {}

impl From<ParseError> for AnalyzeError {
    fn from(e: ParseError) -> Self {
        AnalyzeError::Parse(e)
    }
}

type AResult<T> = Result<T, AnalyzeError>;

fn stat<T>(pos: Pos, message: impl Into<String>) -> AResult<T> {
    Err(AnalyzeError::Static {
        pos,
        message: message.into(),
    })
}

fn at(pos: Pos) -> impl Fn(Error) -> AnalyzeError {
    move |error| AnalyzeError::Eval { pos, error }
}

// ---------------------------------------------------------------- building

fn exact_rows(pos: Pos, rows: &[Vec<GaussRat>]) -> AResult<Matrix<GaussRat>> {
    if rows.is_empty() || rows.iter().any(|r| r.len() != rows[0].len()) {
        return stat(pos, "matrix rows must be nonempty and of equal length");
    }
    Ok(Matrix::from_rows(rows.to_vec()))
}

/// A square matrix block, exact unless some entry is a decimal.
pub fn matrix_block(pos: Pos, rows: &[Vec<Num>]) -> AResult<MatrixBlock> {
    if rows.is_empty() || rows.iter().any(|r| r.len() != rows.len()) {
        return stat(pos, format!("matrix must be square and nonempty, got {} row(s)", rows.len()));
    }
    let exact: Option<Vec<Vec<GaussRat>>> = rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|v| match v {
                    Num::Exact(g) => Some(g.clone()),
                    Num::Approx(_) => None,
                })
                .collect()
        })
        .collect();
    Ok(match exact {
        Some(e) => MatrixBlock::Exact(Matrix::from_rows(e)),
        None => MatrixBlock::Approx(Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|v| v.to_value().to_complex64()).collect::<Vec<Complex64>>())
                .collect(),
        )),
    })
}

fn component(pos: Pos, spec: &PointSpec) -> AResult<Component> {
    let e = at(pos);
    match spec {
        PointSpec::Point(v, m) => {
            let m = m.map_or(Multiplicity::Infinite, Multiplicity::Finite);
            Component::constant(v.clone(), m).map_err(e)
        }
        PointSpec::Seq(kind, limit) => {
            let (c, tends_to) = match kind {
                Kind::Geometric(c, q) => {
                    let s = Sequence::geometric(c.clone(), q.clone()).map_err(&e)?;
                    let l = s.limit();
                    (Component::family(s), l)
                }
                Kind::Harmonic(c, p) => {
                    let s = Sequence::harmonic(c.clone(), *p).map_err(&e)?;
                    let l = s.limit();
                    (Component::family(s), l)
                }
                Kind::List(v) => (Component::list(v.clone()).map_err(&e)?, v.last().cloned().unwrap_or_else(GaussRat::zero)),
            };
            if tends_to != *limit {
                return stat(pos, format!("`{kind}` tends to {tends_to}, not the declared {limit}"));
            }
            Ok(c)
        }
        PointSpec::Dense(lo, hi) => Component::dense(lo.re(), hi.re()).map_err(e),
    }
}

fn weights(kind: &Kind) -> Weights {
    match kind {
        Kind::Geometric(c, q) => Weights::Geometric(c.clone(), q.clone()),
        Kind::Harmonic(c, p) => Weights::Harmonic(c.clone(), *p),
        Kind::List(v) => Weights::List(v.clone()),
    }
}

struct Bound {
    desc: OperatorDesc,
    source: String,
    line: usize,
}

fn build(e: &Spanned<Expr>, env: &HashMap<String, Bound>) -> AResult<OperatorDesc> {
    let pos = e.pos;
    let sub = |x: &Spanned<Expr>| build(x, env);
    let desc = match &e.node {
        Expr::Var(v) => match env.get(v) {
            Some(b) => b.desc.clone(),
            None => return stat(pos, format!("`{v}` is not bound")),
        },
        Expr::Matrix(rows) => matrix_block(pos, rows)?.into(),
        Expr::Jordan { eigen, sim } => {
            let sim = sim.as_ref().map(|s| exact_rows(pos, s)).transpose()?;
            JordanPresentation::new(eigen.clone(), sim).map_err(at(pos))?.into()
        }
        Expr::Diag(parts) => {
            let comps = parts.iter().map(|p| component(pos, p)).collect::<AResult<Vec<_>>>()?;
            DiagonalBlock::new(comps).map_err(at(pos))?.into()
        }
        Expr::Shift { weights: w, nilpotent } => ShiftBlock::new(weights(w), *nilpotent).map_err(at(pos))?.into(),
        Expr::Dsum(parts) => OperatorDesc::dsum(parts.iter().map(sub).collect::<AResult<_>>()?),
        Expr::Mul(a, b) => OperatorDesc::mul(sub(a)?, sub(b)?),
        Expr::Add(a, b) => OperatorDesc::add(sub(a)?, sub(b)?),
        Expr::ShiftBy(a, l) => OperatorDesc::shift_by(sub(a)?, l.clone()),
        Expr::Adj(a) => OperatorDesc::adjoint(sub(a)?),
        Expr::Poly(a, p) => OperatorDesc::poly(sub(a)?, p.clone()),
    };
    // surfaces compatibility errors at the combinator that caused them
    desc.blocks().map_err(at(pos))?;
    Ok(desc)
}

fn check_arg(q: &Query, env: &HashMap<String, Bound>) -> AResult<()> {
    if env.contains_key(&q.arg.node) {
        Ok(())
    } else {
        stat(q.arg.pos, format!("`{}` is not bound", q.arg.node))
    }
}

fn check_prop(p: &Prop, env: &HashMap<String, Bound>) -> AResult<()> {
    check_arg(&p.left, env)?;
    let lf = p.left.func;
    if !lf.is_set() && !lf.is_flag() {
        return stat(p.left.arg.pos, format!("`{}` cannot be compared", lf.name()));
    }
    let rpos = p.right.pos;
    match &p.right.node {
        Rhs::Query(q) => {
            check_arg(q, env)?;
            let rf = q.func;
            if !(lf.is_set() && rf.is_set()) && !(lf.is_flag() && rf.is_flag()) {
                return stat(rpos, format!("cannot compare `{}` with `{}`", lf.name(), rf.name()));
            }
        }
        Rhs::Set(_) if !lf.is_set() => return stat(rpos, format!("`{}` is a flag, not a set", lf.name())),
        Rhs::Flag(_) if !lf.is_flag() => return stat(rpos, format!("`{}` is a set, not a flag", lf.name())),
        _ => {}
    }
    if lf.is_flag() && p.rel == Rel::Subset {
        return stat(rpos, "flags compare with `==` only");
    }
    Ok(())
}

fn bind(program: &Program) -> AResult<HashMap<String, Bound>> {
    let mut env: HashMap<String, Bound> = HashMap::new();
    for s in &program.statements {
        match &s.node {
            Stmt::Let(name, e) => {
                if let Some(prev) = env.get(&name.node) {
                    return stat(name.pos, format!("`{}` is already bound on line {}", name.node, prev.line));
                }
                let desc = build(e, &env)?;
                env.insert(
                    name.node.clone(),
                    Bound {
                        desc,
                        source: e.node.to_string(),
                        line: name.pos.line,
                    },
                );
            }
            Stmt::Assert(p) => check_prop(p, &env)?,
            Stmt::Print(q) => check_arg(q, &env)?,
        }
    }
    Ok(env)
}

// ---------------------------------------------------------------- values

/// The profile with the matrix duality data for single matrix blocks.
#[derive(Clone, Debug, Serialize)]
pub struct FullProfile {
    #[serde(flatten)]
    pub profile: SpectralProfile,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mult_duality: Option<DualityReport>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DrazinOut {
    pub exists: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub index: Option<u32>,
    /// `None` when the inverse leaves the operator class.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub inverse: Option<String>,
}

#[derive(Clone, Debug)]
pub enum Value {
    Set(SpectralSet),
    Poles(PoleSet),
    Flag(bool),
    Algebraic(drazin_core::operator::profile::Algebraic),
    Drazin(DrazinOut),
    Profile(Box<FullProfile>),
}

impl Serialize for Value {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Value::Set(x) => x.serialize(s),
            Value::Poles(x) => x.serialize(s),
            Value::Flag(x) => x.serialize(s),
            Value::Algebraic(x) => x.serialize(s),
            Value::Drazin(x) => x.serialize(s),
            Value::Profile(x) => x.serialize(s),
        }
    }
}

fn poles_text(p: &PoleSet) -> String {
    let mut parts: Vec<String> = p.orders().iter().map(|(z, k)| format!("{z} (order {k})")).collect();
    let fams = SpectralSet::from_parts(Vec::new(), p.set().families().to_vec(), Vec::new()).to_string();
    let fams = &fams[1..fams.len() - 1];
    if !fams.is_empty() {
        parts.push(format!("{fams} (order 1)"));
    }
    format!("{{{}}}", parts.join(", "))
}

fn algebraic_text(a: &drazin_core::operator::profile::Algebraic) -> String {
    match &a.min_poly {
        Some(p) if a.flag => format!("true, minimal polynomial {p}"),
        _ => a.flag.to_string(),
    }
}

fn profile_text(p: &FullProfile, indent: &str) -> String {
    let q = &p.profile;
    let mut s = String::new();
    let sets = [
        ("sigma", &q.sigma),
        ("iso", &q.iso),
        ("acc", &q.acc),
    ];
    for (k, v) in sets {
        let _ = writeln!(s, "{indent}{k}: {v}");
    }
    let _ = writeln!(s, "{indent}poles: {}", poles_text(&q.poles));
    let sets = [
        ("drazin_spectrum", &q.drazin_spectrum),
        ("ies", &q.ies),
        ("asc_spectrum", &q.asc_spectrum),
        ("dsc_spectrum", &q.dsc_spectrum),
        ("ld_spectrum", &q.ld_spectrum),
        ("rd_spectrum", &q.rd_spectrum),
    ];
    for (k, v) in sets {
        let _ = writeln!(s, "{indent}{k}: {v}");
    }
    let _ = writeln!(s, "{indent}countable: {}", q.countable);
    let _ = writeln!(s, "{indent}algebraic: {}", algebraic_text(&q.algebraic));
    let _ = writeln!(s, "{indent}meromorphic: {}", q.meromorphic);
    match q.drazin_index_at_0 {
        Some(k) => {
            let _ = writeln!(s, "{indent}drazin_index_at_0: {k}");
        }
        None => {
            let _ = writeln!(s, "{indent}drazin_index_at_0: none (0 is in the Drazin spectrum)");
        }
    }
    if let Some(d) = &p.mult_duality {
        let _ = writeln!(s, "{indent}mult_duality: {}", serde_json::to_string(d).expect("serializable"));
    }
    s
}

impl Value {
    fn text(&self) -> String {
        match self {
            Value::Set(x) => x.to_string(),
            Value::Poles(p) => poles_text(p),
            Value::Flag(b) => b.to_string(),
            Value::Algebraic(a) => algebraic_text(a),
            Value::Drazin(d) => match (d.exists, &d.inverse) {
                (false, _) => "none (0 is in the Drazin spectrum)".into(),
                (true, Some(m)) => format!("{m} (index {})", d.index.unwrap_or(0)),
                (true, None) => format!("exists with index {}, not representable as a finite description", d.index.unwrap_or(0)),
            },
            Value::Profile(p) => format!("\n{}", profile_text(p, "  ").trim_end()),
        }
    }
}

// ---------------------------------------------------------------- evaluation

struct Evaluator<'a> {
    env: &'a HashMap<String, Bound>,
    tf: ToleranceFrame,
    profiles: HashMap<String, FullProfile>,
}

fn duality(desc: &OperatorDesc, tf: &ToleranceFrame) -> drazin_core::Result<Option<DualityReport>> {
    let blocks = desc.blocks()?;
    match blocks.as_slice() {
        [Block::Matrix(m)] if !m.is_exact() || m.dim() <= MAX_EXACT_DIM => Ok(Some(duality_report(m, tf)?)),
        _ => Ok(None),
    }
}

fn drazin_block(b: &Block, tf: &ToleranceFrame) -> drazin_core::Result<Option<Block>> {
    Ok(match b {
        Block::Matrix(m) => Some(Block::Matrix(m.drazin_inverse(tf)?.inverse)),
        Block::Shift(s) => match s.to_matrix() {
            Some(m) => Some(Block::Matrix(MatrixBlock::Exact(m).drazin_inverse(tf)?.inverse)),
            None => None,
        },
        Block::Diagonal(d) => {
            let mut comps = Vec::new();
            for c in d.components() {
                match c.kind() {
                    ComponentKind::Const(v, m) if c.overrides().is_empty() => {
                        let inv = if v.is_zero() { GaussRat::zero() } else { v.recip() };
                        comps.push(Component::constant(inv, *m)?);
                    }
                    _ => return Ok(None),
                }
            }
            Some(Block::Diagonal(DiagonalBlock::new(comps)?))
        }
    })
}

impl Evaluator<'_> {
    fn profile(&mut self, q: &Query) -> AResult<&FullProfile> {
        let name = &q.arg.node;
        if !self.profiles.contains_key(name) {
            let desc = &self.env[name].desc;
            let e = at(q.arg.pos);
            let profile = spectral_profile(desc, &self.tf).map_err(&e)?;
            let mult_duality = duality(desc, &self.tf).map_err(&e)?;
            self.profiles.insert(name.clone(), FullProfile { profile, mult_duality });
        }
        Ok(&self.profiles[name])
    }

    fn query(&mut self, q: &Query) -> AResult<Value> {
        let tf = self.tf;
        let full = self.profile(q)?.clone();
        let p = &full.profile;
        Ok(match q.func {
            QueryFn::Spectrum => Value::Set(p.sigma.clone()),
            QueryFn::DrazinSpectrum => Value::Set(p.drazin_spectrum.clone()),
            QueryFn::Poles => Value::Poles(p.poles.clone()),
            QueryFn::Ies => Value::Set(p.ies.clone()),
            QueryFn::AscSpectrum => Value::Set(p.asc_spectrum.clone()),
            QueryFn::DscSpectrum => Value::Set(p.dsc_spectrum.clone()),
            QueryFn::LdSpectrum => Value::Set(p.ld_spectrum.clone()),
            QueryFn::RdSpectrum => Value::Set(p.rd_spectrum.clone()),
            QueryFn::Algebraic => Value::Algebraic(p.algebraic.clone()),
            QueryFn::Meromorphic => Value::Flag(p.meromorphic),
            QueryFn::Profile => Value::Profile(Box::new(full.clone())),
            QueryFn::DrazinInverse => {
                let Some(index) = p.drazin_index_at_0 else {
                    return Ok(Value::Drazin(DrazinOut {
                        exists: false,
                        index: None,
                        inverse: None,
                    }));
                };
                let e = at(q.arg.pos);
                let blocks = self.env[&q.arg.node].desc.blocks().map_err(&e)?;
                let inv = blocks
                    .iter()
                    .map(|b| drazin_block(b, &tf))
                    .collect::<drazin_core::Result<Option<Vec<Block>>>>()
                    .map_err(&e)?;
                Value::Drazin(DrazinOut {
                    exists: true,
                    index: Some(index),
                    inverse: inv.map(|b| from_blocks(b).to_string()),
                })
            }
        })
    }

    fn as_set(v: &Value) -> &SpectralSet {
        match v {
            Value::Set(s) => s,
            Value::Poles(p) => p.set(),
            _ => unreachable!("checked to be a set"),
        }
    }

    fn as_flag(v: &Value) -> bool {
        match v {
            Value::Flag(b) => *b,
            Value::Algebraic(a) => a.flag,
            _ => unreachable!("checked to be a flag"),
        }
    }

    fn prop(&mut self, p: &Prop) -> AResult<(bool, Value, Value)> {
        let tf = self.tf;
        let left = self.query(&p.left)?;
        let right = match &p.right.node {
            Rhs::Query(q) => self.query(q)?,
            Rhs::Set(v) => Value::Set(SpectralSet::from_values(v.iter().map(Num::to_value)).normalize(&tf)),
            Rhs::Flag(b) => Value::Flag(*b),
        };
        if p.left.func.is_flag() {
            return Ok((Self::as_flag(&left) == Self::as_flag(&right), left, right));
        }
        let undecided = |what: String| AnalyzeError::Eval {
            pos: p.left.arg.pos,
            error: Error::Undecided(what),
        };
        let holds = match (p.rel, &left, &right) {
            // poles against poles also compare orders
            (Rel::Eq, Value::Poles(a), Value::Poles(b)) => a.matches(b, &tf).map_err(at(p.left.arg.pos))?,
            (rel, l, r) => {
                let (a, b) = (Self::as_set(l), Self::as_set(r));
                let t = match rel {
                    Rel::Eq => a.equals(b, &tf),
                    Rel::Subset => a.subset_of(b, &tf),
                };
                match t {
                    Truth::Yes => true,
                    Truth::No => false,
                    Truth::Unknown => return Err(undecided(format!("{} against {}", a, b))),
                }
            }
        };
        Ok((holds, left, right))
    }
}

/// For finite point sets, the points on one side only.
fn set_diff(l: &Value, r: &Value, tf: &ToleranceFrame) -> Option<(SpectralSet, SpectralSet)> {
    let (Value::Set(_) | Value::Poles(_), Value::Set(_) | Value::Poles(_)) = (l, r) else {
        return None;
    };
    let (a, b) = (Evaluator::as_set(l), Evaluator::as_set(r));
    if !a.families().is_empty() || !b.families().is_empty() || !a.segments().is_empty() || !b.segments().is_empty() {
        return None;
    }
    let only = |x: &SpectralSet, y: &SpectralSet| {
        SpectralSet::from_values(x.points().iter().filter(|p| y.contains(&p.value, tf) == Truth::No).map(|p| p.value.clone()))
    };
    Some((only(a, b), only(b, a)))
}

// ---------------------------------------------------------------- reports

#[derive(Serialize)]
struct OperatorEntry<'a> {
    name: &'a str,
    expr: &'a str,
    profile: &'a FullProfile,
}

#[derive(Serialize)]
struct QueryEntry {
    line: usize,
    query: String,
    value: Value,
}

#[derive(Serialize)]
struct AssertionEntry {
    line: usize,
    assertion: String,
    holds: bool,
    left: Value,
    right: Value,
}

#[derive(Serialize)]
struct JsonReport<'a> {
    operators: Vec<OperatorEntry<'a>>,
    queries: Vec<QueryEntry>,
    assertions: Vec<AssertionEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub output: String,
    pub failed: usize,
}

impl Report {
    /// 1 when an assertion failed, else 0.
    pub fn exit_code(&self) -> u8 {
        u8::from(self.failed > 0)
    }
}

pub fn analyze_program(program: &Program, tf: &ToleranceFrame, format: Format) -> AResult<Report> {
    let env = bind(program)?;
    let mut ev = Evaluator {
        env: &env,
        tf: *tf,
        profiles: HashMap::new(),
    };
    let mut text = String::new();
    let mut printed: Vec<String> = Vec::new();
    let mut queries = Vec::new();
    let mut assertions = Vec::new();
    let mut failed = 0;
    for s in &program.statements {
        let line = s.pos.line;
        match &s.node {
            Stmt::Let(..) => {}
            Stmt::Print(q) => {
                let v = ev.query(q)?;
                if !printed.contains(&q.arg.node) {
                    ev.profile(q)?;
                    printed.push(q.arg.node.clone());
                }
                let _ = writeln!(text, "{q} = {}", v.text());
                queries.push(QueryEntry {
                    line,
                    query: q.to_string(),
                    value: v,
                });
            }
            Stmt::Assert(p) => {
                let (holds, left, right) = ev.prop(p)?;
                if holds {
                    let _ = writeln!(text, "assert {p}: ok");
                } else {
                    failed += 1;
                    let _ = writeln!(text, "assert {p}: FAILED at {}", s.pos);
                    let _ = writeln!(text, "  left:  {}", left.text());
                    let _ = writeln!(text, "  right: {}", right.text());
                    if let Some((l, r)) = set_diff(&left, &right, tf) {
                        if !l.is_empty() {
                            let _ = writeln!(text, "  only left:  {l}");
                        }
                        if !r.is_empty() && p.rel == Rel::Eq {
                            let _ = writeln!(text, "  only right: {r}");
                        }
                    }
                }
                assertions.push(AssertionEntry {
                    line,
                    assertion: p.to_string(),
                    holds,
                    left,
                    right,
                });
            }
        }
    }
    let output = match format {
        Format::Text => text,
        Format::Json => {
            let operators = printed
                .iter()
                .map(|n| OperatorEntry {
                    name: n,
                    expr: &env[n].source,
                    profile: &ev.profiles[n],
                })
                .collect();
            let r = JsonReport {
                operators,
                queries,
                assertions,
            };
            let mut s = serde_json::to_string_pretty(&r).expect("serializable report");
            s.push('\n');
            s
        }
    };
    Ok(Report { output, failed })
}

pub fn analyze(src: &str, tf: &ToleranceFrame, format: Format) -> AResult<Report> {
    analyze_program(&parse(src)?, tf, format)
}

/// The Drazin inverse and index of the matrix in `src`.
pub fn drazin_matrix(src: &str, tf: &ToleranceFrame) -> AResult<String> {
    let rows = parse_matrix(src)?;
    let m = matrix_block(Pos { line: 1, col: 1 }, &rows)?;
    let r = m.drazin_inverse(tf).map_err(at(Pos { line: 1, col: 1 }))?;
    Ok(format!("index: {}\ninverse: {}\n", r.index, matrix_dsl(&r.inverse)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(src: &str) -> AResult<Report> {
        analyze(src, &ToleranceFrame::default(), Format::Text)
    }

    fn json(src: &str) -> serde_json::Value {
        let r = analyze(src, &ToleranceFrame::default(), Format::Json).unwrap();
        serde_json::from_str(&r.output).unwrap()
    }

    #[test]
    fn st_fixture_poles() {
        let v = json("let ST = diag { 0: 1, 1: inf }; print poles(ST);");
        assert_eq!(
            v["operators"][0]["profile"]["poles"],
            serde_json::json!([{"point": "0", "order": 1}, {"point": "1", "order": 1}])
        );
        assert_eq!(v["queries"][0]["value"], v["operators"][0]["profile"]["poles"]);
    }

    #[test]
    fn profile_keys_in_fixed_order() {
        let r = analyze("let A = matrix [[0, 1], [0, 0]]; print profile(A);", &ToleranceFrame::default(), Format::Json).unwrap();
        let keys = [
            "sigma", "iso", "acc", "poles", "drazin_spectrum", "ies", "asc_spectrum", "dsc_spectrum", "ld_spectrum",
            "rd_spectrum", "countable", "algebraic", "meromorphic", "drazin_index_at_0", "mult_duality",
        ];
        let profile_at = r.output.find("\"profile\"").unwrap();
        let mut last = profile_at;
        for k in keys {
            let at = r.output[last..].find(&format!("\"{k}\"")).map(|i| i + last);
            assert!(at.is_some(), "{k} missing or out of order");
            last = at.unwrap();
        }
    }

    #[test]
    fn passing_and_failing_assertions() {
        let ok = run("let A = matrix [[0, 1], [0, 0]]; assert drazin_spectrum(A) == {};").unwrap();
        assert_eq!(ok.exit_code(), 0);
        let ok = run("let D = diag { seq harmonic(1, 1) -> 0, 0: 1 }; assert drazin_spectrum(D) == {0};").unwrap();
        assert_eq!(ok.exit_code(), 0, "{}", ok.output);

        let bad = run("let D = diag { seq harmonic(1, 1) -> 0 };\nassert drazin_spectrum(D) == {1};").unwrap();
        assert_eq!(bad.exit_code(), 1);
        assert!(bad.output.contains("left:  {0}"), "{}", bad.output);
        assert!(bad.output.contains("right: {1}"), "{}", bad.output);
        assert!(bad.output.contains("FAILED at line 2, column 1"), "{}", bad.output);
    }

    #[test]
    fn flags_and_query_comparisons() {
        let r = run("let S = shift { weights: geometric(1, 1/2), nilpotent: none };
assert meromorphic(S) == true;
assert algebraic(S) == false;
assert ies(S) == {0};
assert asc_spectrum(S) <= drazin_spectrum(S);
assert poles(S) == poles(S);")
        .unwrap();
        assert_eq!(r.failed, 0, "{}", r.output);
    }

    #[test]
    fn empty_program_gives_an_empty_report() {
        let r = analyze("", &ToleranceFrame::default(), Format::Json).unwrap();
        assert_eq!(r.exit_code(), 0);
        assert_eq!(json(""), serde_json::json!({"operators": [], "queries": [], "assertions": []}));
        assert_eq!(run("").unwrap().output, "");
    }

    #[test]
    fn static_errors_exit_2_with_location() {
        let codes = [
            ("print poles(T);", "line 1, column 13: `T` is not bound"),
            ("let A = matrix [[1]];\nlet A = matrix [[2]];", "line 2, column 5: `A` is already bound on line 1"),
            ("let A = matrix [[1]]; assert profile(A) == {};", "`profile` cannot be compared"),
            ("let A = matrix [[1]]; assert meromorphic(A) == {1};", "is a flag, not a set"),
            ("let A = matrix [[1]]; assert meromorphic(A) <= meromorphic(A);", "flags compare with `==` only"),
            ("let A = matrix [[1, 2]];", "must be square"),
            ("let D = diag { seq harmonic(1, 1) -> 1 };", "tends to 0, not the declared 1"),
        ];
        for (src, msg) in codes {
            let e = run(src).unwrap_err();
            assert_eq!(e.exit_code(), 2, "{src}");
            assert!(e.to_string().contains(msg), "{e}");
        }
        let e = run("let A = matrix [[1, 0], [0, 1]];\nlet B = add(A, diag { seq harmonic(1, 1) -> 0 });").unwrap_err();
        assert_eq!(e.exit_code(), 2);
        assert!(e.to_string().starts_with("line 2, column 9: incompatible operands"), "{e}");
        assert_eq!(run("let A = ").unwrap_err().exit_code(), 2);
    }

    #[test]
    fn irrational_spectrum_exits_3() {
        let e = run("let A = matrix [[0, 2], [1, 0]]; print spectrum(A);").unwrap_err();
        assert_eq!(e.exit_code(), 3, "{e}");
    }

    #[test]
    fn drazin_inverses() {
        let r = run("let A = matrix [[1, 1], [0, 0]];
let N = matrix [[0, 1], [0, 0]];
let D = diag { 2: inf, 0: 3 };
let H = diag { seq harmonic(1, 1) -> 0 };
print drazin_inverse(A);
print drazin_inverse(N);
print drazin_inverse(D);
print drazin_inverse(H);")
        .unwrap();
        let lines: Vec<&str> = r.output.lines().collect();
        assert_eq!(lines[0], "drazin_inverse(A) = matrix [[1, 1], [0, 0]] (index 1)");
        assert_eq!(lines[1], "drazin_inverse(N) = matrix [[0, 0], [0, 0]] (index 2)");
        assert_eq!(lines[2], "drazin_inverse(D) = diag { 1/2: inf, 0: 3 } (index 1)");
        assert_eq!(lines[3], "drazin_inverse(H) = none (0 is in the Drazin spectrum)");
    }

    #[test]
    fn matrix_files() {
        let tf = ToleranceFrame::default();
        assert_eq!(drazin_matrix("2 0\n0 0\n", &tf).unwrap(), "index: 1\ninverse: matrix [[1/2, 0], [0, 0]]\n");
        let approx = drazin_matrix("[[0.5, 0], [0, 0]]", &tf).unwrap();
        assert!(approx.starts_with("index: 1\ninverse: matrix [[2.0000000000000000e0"), "{approx}");
        assert_eq!(drazin_matrix("1 2\n3\n", &tf).unwrap_err().exit_code(), 2);
    }

    #[test]
    fn output_is_deterministic() {
        let src = "let A = dsum(matrix [[1, 1], [0, 1]], diag { seq geometric(1, 1/2) -> 0, 3: 2 });
print profile(A);
print poles(A);";
        let a = analyze(src, &ToleranceFrame::default(), Format::Json).unwrap();
        let b = analyze(src, &ToleranceFrame::default(), Format::Json).unwrap();
        assert_eq!(a, b);
    }
}
