//! The text format for models, model maps and homotopies.
//!
//! ```text
//! model S4 { gen x : 4 ; gen y : 7 ; d y = x^2 ; cat0 1 ; top 4 }
//! modelmap hopf from S4 to S3xS4 { x -> 0 ; y -> e*x }
//! homotopy h from S4 to S3xS4 { x -> 0 ; y -> e*x - e*x*t }
//! ```
//!
//! `#` starts a comment. A model without `bound` is complete. In a map
//! block the left-hand names are generators of the source model; generators
//! left out map to zero. `map f : S -> T { .. }` is accepted as another
//! spelling of `modelmap f from S to T { .. }`. Inside homotopies `t` and
//! `dt` are the cylinder variables.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::Error;
use crate::grading::{GradedAlgebra, Generator, Polynomial};
use crate::homotopy::{CylElem, Homotopy, HomotopyCheck};
use crate::maps::{DgReport, ModelMap};
use crate::model::{DSquaredReport, Model};
use crate::Q;

const MAX_EXPONENT: u32 = 64;
const MAX_DEPTH: usize = 64;
const MAX_TERMS: usize = 20_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax,
    UnknownName,
    UnknownGenerator,
    Degree,
    Duplicate,
    Invalid,
    DSquared,
    NotDg,
    TooLarge,
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ParseErrorKind::Syntax => "syntax error",
            ParseErrorKind::UnknownName => "unknown name",
            ParseErrorKind::UnknownGenerator => "unknown generator",
            ParseErrorKind::Degree => "degree mismatch",
            ParseErrorKind::Duplicate => "duplicate definition",
            ParseErrorKind::Invalid => "invalid declaration",
            ParseErrorKind::DSquared => "d^2 is not zero",
            ParseErrorKind::NotDg => "not compatible with differentials",
            ParseErrorKind::TooLarge => "expression too large",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{line}:{column}: {kind}: {message}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    fn new(kind: ParseErrorKind, pos: Pos, message: impl Into<String>) -> Self {
        ParseError {
            kind,
            line: pos.line,
            column: pos.column,
            message: message.into(),
        }
    }
}

/// Names that cannot be used for generators.
pub fn is_reserved(name: &str) -> bool {
    matches!(name, "t" | "dt" | "d")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub column: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    Punct(&'static str),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Int(n) => write!(f, "`{n}`"),
            Tok::Punct(p) => write!(f, "`{p}`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

const PUNCT: [&str; 14] = [
    "->", "{", "}", ";", ":", "=", "+", "-", "*", "/", "^", "(", ")", ",",
];

fn lex(src: &str) -> Result<Vec<(Tok, Pos)>, ParseError> {
    let mut out = Vec::new();
    let mut line = 1;
    let mut col = 1;
    let chars: Vec<char> = src.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, column: col };
        if c == '\n' {
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            col += 1;
            i += 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len()
                && (chars[i].is_ascii_alphanumeric() || chars[i] == '_' || chars[i] == '\'')
            {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            col += i - start;
            out.push((Tok::Ident(word), pos));
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            if i - start > 200 {
                return Err(ParseError::new(ParseErrorKind::TooLarge, pos, "numeral too long"));
            }
            let digits: String = chars[start..i].iter().collect();
            col += i - start;
            out.push((Tok::Int(digits.parse().expect("ascii digits")), pos));
            continue;
        }
        let rest: String = chars[i..(i + 2).min(chars.len())].iter().collect();
        match PUNCT.iter().find(|p| rest.starts_with(**p)) {
            Some(p) => {
                i += p.len();
                col += p.len();
                out.push((Tok::Punct(p), pos));
            }
            None => {
                return Err(ParseError::new(
                    ParseErrorKind::Syntax,
                    pos,
                    format!("unexpected character `{c}`"),
                ))
            }
        }
    }
    out.push((Tok::Eof, Pos { line, column: col }));
    Ok(out)
}

/// Parsed arithmetic expression.
#[derive(Debug, Clone)]
enum Expr {
    Num(Q),
    Var(String, Pos),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Mul(Box<Expr>, Box<Expr>, Pos),
    Pow(Box<Expr>, u32, Pos),
}

/// Something expressions can be evaluated into.
pub(crate) trait ExprTarget {
    type Value: Clone;
    fn constant(&self, c: Q) -> Self::Value;
    fn variable(&self, name: &str, at: Pos) -> Result<Self::Value, ParseError>;
    fn add(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    fn mul(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    fn scale(&self, a: &Self::Value, c: &Q) -> Self::Value;
    fn size(&self, a: &Self::Value) -> usize;
}

fn eval<T: ExprTarget>(target: &T, e: &Expr) -> Result<T::Value, ParseError> {
    let guard = |v: T::Value, at: Pos| {
        if target.size(&v) > MAX_TERMS {
            Err(ParseError::new(ParseErrorKind::TooLarge, at, "too many terms"))
        } else {
            Ok(v)
        }
    };
    Ok(match e {
        Expr::Num(c) => target.constant(c.clone()),
        Expr::Var(name, at) => target.variable(name, *at)?,
        Expr::Add(a, b) => target.add(&eval(target, a)?, &eval(target, b)?),
        Expr::Sub(a, b) => {
            let b = target.scale(&eval(target, b)?, &-Q::one());
            target.add(&eval(target, a)?, &b)
        }
        Expr::Neg(a) => target.scale(&eval(target, a)?, &-Q::one()),
        Expr::Mul(a, b, at) => guard(target.mul(&eval(target, a)?, &eval(target, b)?), *at)?,
        Expr::Pow(a, n, at) => {
            let base = eval(target, a)?;
            let mut acc = target.constant(Q::one());
            for _ in 0..*n {
                acc = guard(target.mul(&acc, &base), *at)?;
            }
            acc
        }
    })
}

struct AlgebraTarget<'a>(&'a GradedAlgebra);

impl ExprTarget for AlgebraTarget<'_> {
    type Value = Polynomial;

    fn constant(&self, c: Q) -> Polynomial {
        Polynomial::constant(c)
    }

    fn variable(&self, name: &str, at: Pos) -> Result<Polynomial, ParseError> {
        self.0.gen(name).map_err(|_| {
            ParseError::new(
                ParseErrorKind::UnknownGenerator,
                at,
                format!("unknown generator `{name}`"),
            )
        })
    }

    fn add(&self, a: &Polynomial, b: &Polynomial) -> Polynomial {
        a + b
    }

    fn mul(&self, a: &Polynomial, b: &Polynomial) -> Polynomial {
        self.0.mul(a, b)
    }

    fn scale(&self, a: &Polynomial, c: &Q) -> Polynomial {
        a.scale(c)
    }

    fn size(&self, a: &Polynomial) -> usize {
        a.len()
    }
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
    depth: usize,
}

impl Parser {
    fn new(src: &str) -> Result<Self, ParseError> {
        Ok(Parser {
            toks: lex(src)?,
            at: 0,
            depth: 0,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> (Tok, Pos) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn is_punct(&self, p: &str) -> bool {
        matches!(self.peek(), Tok::Punct(q) if *q == p)
    }

    fn is_word(&self, w: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == w)
    }

    fn unexpected(&self, wanted: &str) -> ParseError {
        ParseError::new(
            ParseErrorKind::Syntax,
            self.pos(),
            format!("expected {wanted}, found {}", self.peek()),
        )
    }

    fn expect_punct(&mut self, p: &str) -> Result<Pos, ParseError> {
        if self.is_punct(p) {
            Ok(self.bump().1)
        } else {
            Err(self.unexpected(&format!("`{p}`")))
        }
    }

    fn expect_ident(&mut self) -> Result<(String, Pos), ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                let pos = self.bump().1;
                Ok((s, pos))
            }
            _ => Err(self.unexpected("a name")),
        }
    }

    fn expect_word(&mut self, w: &str) -> Result<Pos, ParseError> {
        if self.is_word(w) {
            Ok(self.bump().1)
        } else {
            Err(self.unexpected(&format!("`{w}`")))
        }
    }

    fn expect_u32(&mut self) -> Result<(u32, Pos), ParseError> {
        match self.peek().clone() {
            Tok::Int(n) => {
                let pos = self.pos();
                let v = u32::try_from(&n).map_err(|_| {
                    ParseError::new(ParseErrorKind::TooLarge, pos, format!("{n} is too large"))
                })?;
                self.bump();
                Ok((v, pos))
            }
            _ => Err(self.unexpected("a number")),
        }
    }

    fn expect_eof(&self) -> Result<(), ParseError> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            Err(self.unexpected("end of input"))
        }
    }

    fn enter(&mut self) -> Result<(), ParseError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            Err(ParseError::new(ParseErrorKind::TooLarge, self.pos(), "nesting too deep"))
        } else {
            Ok(())
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        self.enter()?;
        let mut acc = if self.is_punct("-") {
            self.bump();
            Expr::Neg(Box::new(self.term()?))
        } else {
            if self.is_punct("+") {
                self.bump();
            }
            self.term()?
        };
        loop {
            if self.is_punct("+") {
                self.bump();
                acc = Expr::Add(Box::new(acc), Box::new(self.term()?));
            } else if self.is_punct("-") {
                self.bump();
                acc = Expr::Sub(Box::new(acc), Box::new(self.term()?));
            } else {
                break;
            }
        }
        self.depth -= 1;
        Ok(acc)
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.power()?;
        while self.is_punct("*") {
            let pos = self.bump().1;
            acc = Expr::Mul(Box::new(acc), Box::new(self.power()?), pos);
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if self.is_punct("^") {
            let pos = self.bump().1;
            let (n, npos) = self.expect_u32()?;
            if n > MAX_EXPONENT {
                return Err(ParseError::new(
                    ParseErrorKind::TooLarge,
                    npos,
                    format!("exponent {n} exceeds {MAX_EXPONENT}"),
                ));
            }
            return Ok(Expr::Pow(Box::new(base), n, pos));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                if self.is_punct("/") {
                    self.bump();
                    let pos = self.pos();
                    match self.bump().0 {
                        Tok::Int(den) if !den.is_zero() => Ok(Expr::Num(Q::new(n, den))),
                        Tok::Int(_) => Err(ParseError::new(
                            ParseErrorKind::Syntax,
                            pos,
                            "zero denominator",
                        )),
                        _ => Err(ParseError::new(ParseErrorKind::Syntax, pos, "expected a denominator")),
                    }
                } else {
                    Ok(Expr::Num(Q::from_integer(n)))
                }
            }
            Tok::Ident(s) => {
                let pos = self.bump().1;
                Ok(Expr::Var(s, pos))
            }
            Tok::Punct("(") => {
                self.bump();
                let e = self.expr()?;
                self.expect_punct(")")?;
                Ok(e)
            }
            _ => Err(self.unexpected("a term")),
        }
    }
}

/// Parses a polynomial in the generators of `alg`.
pub fn parse_polynomial(alg: &GradedAlgebra, text: &str) -> crate::Result<Polynomial> {
    let mut p = Parser::new(text)?;
    let e = p.expr()?;
    p.expect_eof()?;
    Ok(eval(&AlgebraTarget(alg), &e)?)
}

/// Parses a cylinder element over `alg`.
pub fn parse_cylinder(alg: &GradedAlgebra, text: &str) -> crate::Result<CylElem> {
    let mut p = Parser::new(text)?;
    let e = p.expr()?;
    p.expect_eof()?;
    Ok(eval(&crate::homotopy::CylTarget(alg), &e)?)
}

/// A non-fatal note attached to a parsed object.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: warning: {}", self.line, self.column, self.message)
    }
}

#[derive(Debug, Clone)]
enum Object {
    Model(Arc<Model>),
    Map(ModelMap),
    Homotopy(Homotopy),
}

/// Named models, maps and homotopies, all validated.
#[derive(Debug, Clone, Default)]
pub struct Workspace {
    order: Vec<String>,
    objects: HashMap<String, Object>,
    locations: HashMap<String, Pos>,
    pub warnings: Vec<Diagnostic>,
}

impl PartialEq for Workspace {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order
            && self.order.iter().all(|n| match (&self.objects[n], &other.objects[n]) {
                (Object::Model(a), Object::Model(b)) => a == b,
                (Object::Map(a), Object::Map(b)) => a == b,
                (Object::Homotopy(a), Object::Homotopy(b)) => a == b,
                _ => false,
            })
    }
}

impl Workspace {
    pub fn new() -> Self {
        Workspace::default()
    }

    pub fn parse(src: &str) -> Result<Workspace, ParseError> {
        let mut ws = Workspace::new();
        ws.load(src)?;
        Ok(ws)
    }

    /// Adds the objects declared in `src`; they may refer to objects already
    /// present. On error the workspace is left unchanged.
    pub fn load(&mut self, src: &str) -> Result<(), ParseError> {
        let mut staged = self.clone();
        let mut p = Parser::new(src)?;
        while *p.peek() != Tok::Eof {
            match p.peek().clone() {
                Tok::Ident(w) if w == "model" => staged.model_block(&mut p)?,
                Tok::Ident(w) if w == "modelmap" || w == "map" => staged.map_block(&mut p)?,
                Tok::Ident(w) if w == "homotopy" => staged.homotopy_block(&mut p)?,
                _ => return Err(p.unexpected("`model`, `modelmap`, `map` or `homotopy`")),
            }
        }
        *self = staged;
        Ok(())
    }

    pub fn names(&self) -> &[String] {
        &self.order
    }

    pub fn location(&self, name: &str) -> Option<Pos> {
        self.locations.get(name).copied()
    }

    pub fn model(&self, name: &str) -> Option<&Arc<Model>> {
        match self.objects.get(name) {
            Some(Object::Model(m)) => Some(m),
            _ => None,
        }
    }

    pub fn map(&self, name: &str) -> Option<&ModelMap> {
        match self.objects.get(name) {
            Some(Object::Map(m)) => Some(m),
            _ => None,
        }
    }

    pub fn homotopy(&self, name: &str) -> Option<&Homotopy> {
        match self.objects.get(name) {
            Some(Object::Homotopy(h)) => Some(h),
            _ => None,
        }
    }

    pub fn models(&self) -> impl Iterator<Item = &Arc<Model>> {
        self.order.iter().filter_map(|n| self.model(n))
    }

    pub fn maps(&self) -> impl Iterator<Item = &ModelMap> {
        self.order.iter().filter_map(|n| self.map(n))
    }

    pub fn homotopies(&self) -> impl Iterator<Item = &Homotopy> {
        self.order.iter().filter_map(|n| self.homotopy(n))
    }

    pub fn add_model(&mut self, m: Model) -> crate::Result<Arc<Model>> {
        let m = Arc::new(m);
        self.insert(m.name().to_string(), Object::Model(m.clone()), None)?;
        Ok(m)
    }

    pub fn add_map(&mut self, f: ModelMap) -> crate::Result<()> {
        self.insert(f.name().to_string(), Object::Map(f), None)
    }

    pub fn add_homotopy(&mut self, h: Homotopy) -> crate::Result<()> {
        self.insert(h.name().to_string(), Object::Homotopy(h), None)
    }

    fn insert(&mut self, name: String, obj: Object, pos: Option<Pos>) -> crate::Result<()> {
        if self.objects.contains_key(&name) {
            return Err(Error::Precondition(format!("`{name}` is already defined")));
        }
        if let Some(p) = pos {
            self.locations.insert(name.clone(), p);
        }
        self.order.push(name.clone());
        self.objects.insert(name, obj);
        Ok(())
    }

    fn declare(&mut self, name: String, obj: Object, pos: Pos) -> Result<(), ParseError> {
        self.insert(name.clone(), obj, Some(pos)).map_err(|_| {
            ParseError::new(
                ParseErrorKind::Duplicate,
                pos,
                format!("`{name}` is already defined"),
            )
        })
    }

    fn model_ref(&self, name: &str, pos: Pos) -> Result<Arc<Model>, ParseError> {
        self.model(name).cloned().ok_or_else(|| {
            ParseError::new(ParseErrorKind::UnknownName, pos, format!("unknown model `{name}`"))
        })
    }

    fn model_block(&mut self, p: &mut Parser) -> Result<(), ParseError> {
        p.expect_word("model")?;
        let (name, at) = p.expect_ident()?;
        p.expect_punct("{")?;
        let mut gens: Vec<(Generator, Pos)> = Vec::new();
        let mut diffs: Vec<(String, Pos, Expr)> = Vec::new();
        let mut bound = None;
        let mut cat0 = None;
        let mut top = None;
        while !p.is_punct("}") {
            let (word, wpos) = p.expect_ident()?;
            match word.as_str() {
                "gen" => {
                    let (g, gpos) = p.expect_ident()?;
                    p.expect_punct(":")?;
                    let (deg, _) = p.expect_u32()?;
                    gens.push((Generator::new(g, deg), gpos));
                }
                "d" => {
                    let (g, gpos) = p.expect_ident()?;
                    p.expect_punct("=")?;
                    diffs.push((g, gpos, p.expr()?));
                }
                "bound" | "cat0" | "top" => {
                    let (n, _) = p.expect_u32()?;
                    let slot = match word.as_str() {
                        "bound" => &mut bound,
                        "cat0" => &mut cat0,
                        _ => &mut top,
                    };
                    if slot.replace(n).is_some() {
                        return Err(ParseError::new(
                            ParseErrorKind::Duplicate,
                            wpos,
                            format!("`{word}` given twice"),
                        ));
                    }
                }
                _ => {
                    return Err(ParseError::new(
                        ParseErrorKind::Syntax,
                        wpos,
                        format!("expected `gen`, `d`, `bound`, `cat0` or `top`, found `{word}`"),
                    ))
                }
            }
            if !p.is_punct("}") {
                p.expect_punct(";")?;
            }
        }
        p.expect_punct("}")?;

        for (g, gpos) in &gens {
            if g.degree < 2 {
                return Err(ParseError::new(
                    ParseErrorKind::Invalid,
                    *gpos,
                    format!("generator `{}` has degree {}; degrees must be at least 2", g.name, g.degree),
                ));
            }
            if is_reserved(&g.name) {
                return Err(ParseError::new(
                    ParseErrorKind::Invalid,
                    *gpos,
                    format!("`{}` is reserved", g.name),
                ));
            }
        }
        let positions: HashMap<String, Pos> =
            gens.iter().map(|(g, pos)| (g.name.clone(), *pos)).collect();
        let (algebra, _) = GradedAlgebra::new(gens.iter().map(|(g, _)| g.clone()).collect(), bound)
            .map_err(|e| match e {
                Error::DuplicateGenerator(n) => ParseError::new(
                    ParseErrorKind::Duplicate,
                    positions.get(&n).copied().unwrap_or(at),
                    format!("generator `{n}` declared twice"),
                ),
                other => ParseError::new(ParseErrorKind::Invalid, at, other.to_string()),
            })?;
        let mut differential = vec![Polynomial::zero(); algebra.len()];
        let mut assigned = vec![false; algebra.len()];
        for (g, gpos, e) in &diffs {
            let id = algebra.lookup(g).map_err(|_| {
                ParseError::new(
                    ParseErrorKind::UnknownGenerator,
                    *gpos,
                    format!("unknown generator `{g}`"),
                )
            })?;
            if std::mem::replace(&mut assigned[id], true) {
                return Err(ParseError::new(
                    ParseErrorKind::Duplicate,
                    *gpos,
                    format!("differential of `{g}` given twice"),
                ));
            }
            let value = eval(&AlgebraTarget(&algebra), e)?;
            let want = algebra.generator(id).degree + 1;
            if let Err(err) = algebra.check_homogeneous(&value, want, &format!("d({g})")) {
                return Err(ParseError::new(ParseErrorKind::Degree, *gpos, err.to_string()));
            }
            differential[id] = value;
        }
        let model = Model::from_parts(name.clone(), algebra, differential, cat0, top)
            .map_err(|e| ParseError::new(ParseErrorKind::Invalid, at, e.to_string()))?;
        if let DSquaredReport::Fail { generator, residue } = model.check_d_squared() {
            return Err(ParseError::new(
                ParseErrorKind::DSquared,
                positions[&generator],
                format!("d(d({generator})) = {residue}"),
            ));
        }
        let loose = model.non_minimal_generators();
        if !loose.is_empty() {
            self.warnings.push(Diagnostic {
                line: at.line,
                column: at.column,
                message: format!(
                    "model `{name}` is not minimal: linear differential on {}",
                    loose.join(", ")
                ),
            });
        }
        self.declare(name, Object::Model(Arc::new(model)), at)
    }

    /// `modelmap f from S to T { .. }` or `map f : S -> T { .. }`.
    fn map_header(&mut self, p: &mut Parser) -> Result<(String, Pos, Arc<Model>, Arc<Model>), ParseError> {
        let alias = p.is_word("map");
        p.bump();
        let (name, at) = p.expect_ident()?;
        let (source, target);
        if alias {
            p.expect_punct(":")?;
            let (s, spos) = p.expect_ident()?;
            p.expect_punct("->")?;
            let (t, tpos) = p.expect_ident()?;
            source = self.model_ref(&s, spos)?;
            target = self.model_ref(&t, tpos)?;
        } else {
            p.expect_word("from")?;
            let (s, spos) = p.expect_ident()?;
            p.expect_word("to")?;
            let (t, tpos) = p.expect_ident()?;
            source = self.model_ref(&s, spos)?;
            target = self.model_ref(&t, tpos)?;
        }
        Ok((name, at, source, target))
    }

    /// Generator assignments `g -> expr ; ..`, evaluated by `eval_one`.
    fn assignments<V: Clone>(
        p: &mut Parser,
        source: &Model,
        zero: V,
        mut eval_one: impl FnMut(&Expr) -> Result<V, ParseError>,
    ) -> Result<Vec<(V, Pos)>, ParseError> {
        p.expect_punct("{")?;
        let mut images: Vec<Option<(V, Pos)>> = vec![None; source.algebra().len()];
        while !p.is_punct("}") {
            let (g, gpos) = p.expect_ident()?;
            let id = source.lookup(&g).map_err(|_| {
                ParseError::new(
                    ParseErrorKind::UnknownGenerator,
                    gpos,
                    format!("`{g}` is not a generator of `{}`", source.name()),
                )
            })?;
            p.expect_punct("->")?;
            let e = p.expr()?;
            if images[id].is_some() {
                return Err(ParseError::new(
                    ParseErrorKind::Duplicate,
                    gpos,
                    format!("image of `{g}` given twice"),
                ));
            }
            images[id] = Some((eval_one(&e)?, gpos));
            if !p.is_punct("}") {
                p.expect_punct(";")?;
            }
        }
        let end = p.expect_punct("}")?;
        Ok(images
            .into_iter()
            .map(|x| x.unwrap_or_else(|| (zero.clone(), end)))
            .collect())
    }

    fn map_block(&mut self, p: &mut Parser) -> Result<(), ParseError> {
        let (name, at, source, target) = self.map_header(p)?;
        let images = Self::assignments(p, &source, Polynomial::zero(), |e| {
            eval(&AlgebraTarget(target.algebra()), e)
        })?;
        for (g, (img, pos)) in images.iter().enumerate() {
            let want = source.algebra().generator(g).degree;
            if let Err(err) = target.algebra().check_homogeneous(img, want, &source.generators()[g].name) {
                return Err(ParseError::new(ParseErrorKind::Degree, *pos, err.to_string()));
            }
        }
        let positions: Vec<Pos> = images.iter().map(|(_, p)| *p).collect();
        let f = ModelMap::new(
            name.clone(),
            source.clone(),
            target,
            images.into_iter().map(|(i, _)| i).collect(),
        )
        .map_err(|e| ParseError::new(ParseErrorKind::Degree, at, e.to_string()))?;
        match f.check_dg() {
            DgReport::Pass => {}
            DgReport::DegreeMismatch { generator, .. } | DgReport::NotDg { generator, .. } => {
                let id = source.lookup(&generator).expect("source generator");
                return Err(ParseError::new(
                    ParseErrorKind::NotDg,
                    positions[id],
                    f.check_dg().to_string(),
                ));
            }
        }
        self.declare(name, Object::Map(f), at)
    }

    fn homotopy_block(&mut self, p: &mut Parser) -> Result<(), ParseError> {
        p.expect_word("homotopy")?;
        let (name, at) = p.expect_ident()?;
        p.expect_word("from")?;
        let (s, spos) = p.expect_ident()?;
        p.expect_word("to")?;
        let (t, tpos) = p.expect_ident()?;
        let source = self.model_ref(&s, spos)?;
        let target = self.model_ref(&t, tpos)?;
        let images = Self::assignments(p, &source, CylElem::zero(), |e| {
            eval(&crate::homotopy::CylTarget(target.algebra()), e)
        })?;
        for (g, (img, pos)) in images.iter().enumerate() {
            let want = source.algebra().generator(g).degree;
            if let Err(err) = img.check_degree(target.algebra(), want, &source.generators()[g].name) {
                return Err(ParseError::new(ParseErrorKind::Degree, *pos, err.to_string()));
            }
        }
        let positions: Vec<Pos> = images.iter().map(|(_, p)| *p).collect();
        let h = Homotopy::new(
            name.clone(),
            source.clone(),
            target,
            images.into_iter().map(|(i, _)| i).collect(),
        )
        .map_err(|e| ParseError::new(ParseErrorKind::Degree, at, e.to_string()))?;
        if let HomotopyCheck::NotDg { generator, residual } = h.check_dg() {
            let id = source.lookup(&generator).expect("source generator");
            return Err(ParseError::new(
                ParseErrorKind::NotDg,
                positions[id],
                format!("d(h({generator})) - h(d({generator})) = {residual}"),
            ));
        }
        self.declare(name, Object::Homotopy(h), at)
    }

    /// Canonical text; parsing it gives back an equal workspace.
    pub fn print(&self) -> String {
        let mut out = String::new();
        for n in &self.order {
            match &self.objects[n] {
                Object::Model(m) => out.push_str(&print_model(m)),
                Object::Map(f) => out.push_str(&print_map(f)),
                Object::Homotopy(h) => out.push_str(&print_homotopy(h)),
            }
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for Workspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.print())
    }
}

pub fn print_model(m: &Model) -> String {
    let mut out = format!("model {} {{\n", m.name());
    for g in m.generators() {
        out.push_str(&format!("  gen {} : {} ;\n", g.name, g.degree));
    }
    for (i, g) in m.generators().iter().enumerate() {
        let dg = m.differential_of(i);
        if !dg.is_zero() {
            out.push_str(&format!("  d {} = {} ;\n", g.name, m.format(dg)));
        }
    }
    if let Some(b) = m.bound() {
        out.push_str(&format!("  bound {b} ;\n"));
    }
    if let Some(c) = m.cat0_bound() {
        out.push_str(&format!("  cat0 {c} ;\n"));
    }
    if let Some(t) = m.declared_top() {
        out.push_str(&format!("  top {t} ;\n"));
    }
    out.push_str("}\n");
    out
}

pub fn print_map(f: &ModelMap) -> String {
    let mut out = format!(
        "modelmap {} from {} to {} {{\n",
        f.name(),
        f.source().name(),
        f.target().name()
    );
    for (i, g) in f.source().generators().iter().enumerate() {
        out.push_str(&format!("  {} -> {} ;\n", g.name, f.target().format(f.image(i))));
    }
    out.push_str("}\n");
    out
}

pub fn print_homotopy(h: &Homotopy) -> String {
    let mut out = format!(
        "homotopy {} from {} to {} {{\n",
        h.name(),
        h.source().name(),
        h.target().name()
    );
    for (i, g) in h.source().generators().iter().enumerate() {
        out.push_str(&format!(
            "  {} -> {} ;\n",
            g.name,
            h.image(i).format(h.target().algebra())
        ));
    }
    out.push_str("}\n");
    out
}
