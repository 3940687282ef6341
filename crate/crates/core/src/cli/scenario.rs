//! The scenario language. One statement per line, `#` starts a comment.
//! Declarations are evaluated while parsing, so every diagnostic carries the
//! line and column where it arose.

use std::collections::BTreeMap;
use std::fmt;

use crate::coeff::Domain;
use crate::complex::BoundedComplex;
use crate::functors::Object;
use crate::koszul::{koszul_complex, KoszulSpec};
use crate::module::FpModule;
use crate::poly::SVec;
use crate::ring::{Ideal, Ring, RingMap};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DiagnosticKind {
    Syntax,
    UnknownIdentifier,
    TypeMismatch,
    UnknownTask,
    Duplicate,
    Invalid,
}

impl fmt::Display for DiagnosticKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DiagnosticKind::Syntax => "syntax error",
            DiagnosticKind::UnknownIdentifier => "unknown identifier",
            DiagnosticKind::TypeMismatch => "type mismatch",
            DiagnosticKind::UnknownTask => "unknown task",
            DiagnosticKind::Duplicate => "duplicate name",
            DiagnosticKind::Invalid => "invalid declaration",
        })
    }
}

/// A parse failure with a 1-based position.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, column {col}: {kind}: {message}")]
pub struct Diagnostic {
    pub line: usize,
    pub col: usize,
    pub kind: DiagnosticKind,
    pub message: String,
}

/// A declared value.
#[derive(Clone, Debug)]
pub enum Value {
    Ring(Ring),
    Ideal(Ideal),
    Module(FpModule),
    Complex(BoundedComplex),
    Map(RingMap),
}

impl Value {
    fn kind(&self) -> &'static str {
        match self {
            Value::Ring(_) => "ring",
            Value::Ideal(_) => "ideal",
            Value::Module(_) => "module",
            Value::Complex(_) => "complex",
            Value::Map(_) => "map",
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Value::Ring(r) => r.label(),
            Value::Ideal(i) => format!("{} in {}", i.fmt(), i.ring().label()),
            Value::Module(m) => m.describe(),
            Value::Complex(c) => Object::Complex(c.clone()).describe(),
            Value::Map(t) => format!("{} → {}", t.source().label(), t.target().label()),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Declaration {
    pub name: String,
    pub line: usize,
    pub value: Value,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum ArgKind {
    Module,
    Object,
    Ideal,
    Map,
}

impl ArgKind {
    fn label(self) -> &'static str {
        match self {
            ArgKind::Module => "module",
            ArgKind::Object => "module or complex",
            ArgKind::Ideal => "ideal",
            ArgKind::Map => "map",
        }
    }
}

macro_rules! tasks {
    ($($variant:ident $name:literal [$($arg:ident),*] [$($param:literal),*];)*) => {
        /// The available tasks.
        #[derive(Clone, Copy, Debug, PartialEq, Eq)]
        pub enum TaskKind { $($variant),* }

        impl TaskKind {
            pub const ALL: &'static [TaskKind] = &[$(TaskKind::$variant),*];

            pub fn name(self) -> &'static str {
                match self { $(TaskKind::$variant => $name),* }
            }

            fn signature(self) -> &'static [ArgKind] {
                match self { $(TaskKind::$variant => &[$(ArgKind::$arg),*]),* }
            }

            fn params(self) -> &'static [&'static str] {
                match self { $(TaskKind::$variant => &["depth" $(, $param)*]),* }
            }
        }
    };
}

tasks! {
    AdicTower "adic_tower" [Module, Ideal] [];
    Completeness "completeness" [Module, Ideal] [];
    GmComparison "gm_comparison" [Module, Ideal] [];
    LFunctor "l_functor" [Module, Ideal] ["n"];
    DerivedCompletion "derived_completion" [Object, Ideal] [];
    DerivedTorsion "derived_torsion" [Object, Ideal] [];
    CompletedTensor "completed_tensor" [Module, Module, Ideal] [];
    SixConditions "six_conditions" [Object, Ideal] [];
    Factorization "factorization" [Module, Ideal] [];
    SpectralEdge "spectral_edge" [Object, Ideal] [];
    BaseChange "base_change" [Map, Ideal, Ideal] [];
    RadicalInvariance "radical_invariance" [Object, Ideal] ["exponents"];
    KoszulDuality "koszul_duality" [Ideal] [];
    KoszulHomology "koszul_homology" [Ideal] [];
    Wpr "wpr" [Ideal] [];
    FiniteOracle "finite_oracle" [Module, Module] ["degree"];
}

impl TaskKind {
    pub fn from_name(s: &str) -> Option<TaskKind> {
        TaskKind::ALL.iter().copied().find(|t| t.name() == s)
    }
}

/// A resolved task argument.
#[derive(Clone, Debug)]
pub enum Arg {
    Module(FpModule),
    Object(Object),
    Ideal(Ideal),
    Map(RingMap),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Param {
    Int(i64),
    List(Vec<i64>),
}

#[derive(Clone, Debug)]
pub struct Task {
    pub kind: TaskKind,
    pub line: usize,
    pub arg_names: Vec<String>,
    pub args: Vec<Arg>,
    pub params: BTreeMap<String, Param>,
}

impl Task {
    pub fn depth(&self) -> Option<usize> {
        match self.params.get("depth") {
            Some(Param::Int(d)) => Some(*d as usize),
            _ => None,
        }
    }

    pub fn int_param(&self, key: &str) -> Option<i64> {
        match self.params.get(key) {
            Some(Param::Int(v)) => Some(*v),
            _ => None,
        }
    }

    pub fn list_param(&self, key: &str) -> Option<&[i64]> {
        match self.params.get(key) {
            Some(Param::List(v)) => Some(v),
            _ => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Scenario {
    pub source: String,
    pub declarations: Vec<Declaration>,
    pub tasks: Vec<Task>,
}

impl Scenario {
    pub fn get(&self, name: &str) -> Option<&Value> {
        self.declarations.iter().find(|d| d.name == name).map(|d| &d.value)
    }
}

#[derive(Clone, Debug, PartialEq)]
enum TokKind {
    Ident(String),
    Int(i64),
    Sym(&'static str),
}

#[derive(Clone, Debug)]
struct Tok {
    kind: TokKind,
    col: usize,
    start: usize,
    end: usize,
}

const SYMBOLS: &[&str] = &["->", "++", "(", ")", "[", "]", ",", "=", "/", "^", "+", "-", "*", ":"];

fn lex(line: &str, line_no: usize) -> Result<Vec<Tok>, Diagnostic> {
    let mut toks = Vec::new();
    let mut iter = line.char_indices().peekable();
    let col_of = |byte: usize| line[..byte].chars().count() + 1;
    while let Some(&(i, c)) = iter.peek() {
        if c == '#' {
            break;
        }
        if c.is_whitespace() {
            iter.next();
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let mut end = i;
            while let Some(&(j, d)) = iter.peek() {
                if d.is_ascii_alphanumeric() || d == '_' || d == '\'' {
                    end = j + d.len_utf8();
                    iter.next();
                } else {
                    break;
                }
            }
            toks.push(Tok {
                kind: TokKind::Ident(line[i..end].to_string()),
                col: col_of(i),
                start: i,
                end,
            });
            continue;
        }
        if c.is_ascii_digit() {
            let mut end = i;
            while let Some(&(j, d)) = iter.peek() {
                if d.is_ascii_digit() {
                    end = j + 1;
                    iter.next();
                } else {
                    break;
                }
            }
            let v = line[i..end].parse::<i64>().map_err(|_| Diagnostic {
                line: line_no,
                col: col_of(i),
                kind: DiagnosticKind::Syntax,
                message: format!("integer `{}` is too large", &line[i..end]),
            })?;
            toks.push(Tok {
                kind: TokKind::Int(v),
                col: col_of(i),
                start: i,
                end,
            });
            continue;
        }
        let rest = &line[i..];
        match SYMBOLS.iter().find(|s| rest.starts_with(**s)) {
            Some(s) => {
                for _ in 0..s.len() {
                    iter.next();
                }
                toks.push(Tok {
                    kind: TokKind::Sym(s),
                    col: col_of(i),
                    start: i,
                    end: i + s.len(),
                });
            }
            None => {
                return Err(Diagnostic {
                    line: line_no,
                    col: col_of(i),
                    kind: DiagnosticKind::Syntax,
                    message: format!("unexpected character `{c}`"),
                })
            }
        }
    }
    Ok(toks)
}

struct LineParser<'a> {
    text: &'a str,
    line: usize,
    toks: Vec<Tok>,
    pos: usize,
    values: &'a BTreeMap<String, Value>,
    default_ring: Option<&'a Ring>,
    in_ring: Option<Ring>,
}

type PResult<T> = Result<T, Diagnostic>;

impl<'a> LineParser<'a> {
    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.text.chars().count() + 1, |t| t.col)
    }

    fn err<T>(&self, kind: DiagnosticKind, message: impl Into<String>) -> PResult<T> {
        Err(self.diag(kind, message))
    }

    fn diag(&self, kind: DiagnosticKind, message: impl Into<String>) -> Diagnostic {
        Diagnostic {
            line: self.line,
            col: self.col(),
            kind,
            message: message.into(),
        }
    }

    fn describe_next(&self) -> String {
        match self.toks.get(self.pos) {
            None => "end of line".into(),
            Some(t) => format!("`{}`", &self.text[t.start..t.end]),
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn peek_sym(&self, s: &str) -> bool {
        matches!(self.toks.get(self.pos), Some(Tok { kind: TokKind::Sym(t), .. }) if *t == s)
    }

    fn peek_ident(&self) -> Option<&str> {
        match self.toks.get(self.pos) {
            Some(Tok {
                kind: TokKind::Ident(s),
                ..
            }) => Some(s),
            _ => None,
        }
    }

    fn eat_sym(&mut self, s: &str) -> bool {
        if self.peek_sym(s) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_sym(&mut self, s: &str) -> PResult<()> {
        if self.eat_sym(s) {
            Ok(())
        } else {
            self.err(
                DiagnosticKind::Syntax,
                format!("expected `{s}`, found {}", self.describe_next()),
            )
        }
    }

    fn ident(&mut self) -> PResult<String> {
        match self.peek_ident() {
            Some(s) => {
                let s = s.to_string();
                self.pos += 1;
                Ok(s)
            }
            None => self.err(
                DiagnosticKind::Syntax,
                format!("expected a name, found {}", self.describe_next()),
            ),
        }
    }

    fn int(&mut self) -> PResult<i64> {
        let neg = self.eat_sym("-");
        match self.toks.get(self.pos) {
            Some(Tok {
                kind: TokKind::Int(v), ..
            }) => {
                let v = *v;
                self.pos += 1;
                Ok(if neg { -v } else { v })
            }
            _ => self.err(
                DiagnosticKind::Syntax,
                format!("expected an integer, found {}", self.describe_next()),
            ),
        }
    }

    fn finish(&self) -> PResult<()> {
        if self.at_end() {
            Ok(())
        } else {
            self.err(DiagnosticKind::Syntax, format!("unexpected {}", self.describe_next()))
        }
    }

    fn lookup(&self, name: &str, col: usize) -> PResult<&'a Value> {
        self.values.get(name).ok_or_else(|| Diagnostic {
            line: self.line,
            col,
            kind: DiagnosticKind::UnknownIdentifier,
            message: format!("`{name}` is not declared"),
        })
    }

    fn mismatch<T>(&self, name: &str, found: &str, expected: &str, col: usize) -> PResult<T> {
        Err(Diagnostic {
            line: self.line,
            col,
            kind: DiagnosticKind::TypeMismatch,
            message: format!("`{name}` is a {found}, expected a {expected}"),
        })
    }

    fn invalid(&self, col: usize, e: crate::Error) -> Diagnostic {
        Diagnostic {
            line: self.line,
            col,
            kind: DiagnosticKind::Invalid,
            message: e.to_string(),
        }
    }

    fn ring_for_literal(&self) -> PResult<Ring> {
        if let Some(r) = &self.in_ring {
            return Ok(r.clone());
        }
        match self.default_ring {
            Some(r) => Ok(r.clone()),
            None => self.err(DiagnosticKind::Invalid, "no ring declared yet; add `in <ring>`"),
        }
    }

    /// A polynomial runs to the next `,` or closer at nesting depth zero.
    fn poly(&mut self, ring: &Ring) -> PResult<SVec> {
        let start = self.pos;
        let mut depth = 0i32;
        while let Some(t) = self.toks.get(self.pos) {
            match t.kind {
                TokKind::Sym("(") | TokKind::Sym("[") => depth += 1,
                TokKind::Sym(")") | TokKind::Sym("]") if depth == 0 => break,
                TokKind::Sym(")") | TokKind::Sym("]") => depth -= 1,
                TokKind::Sym(",") if depth == 0 => break,
                _ => {}
            }
            self.pos += 1;
        }
        if self.pos == start {
            return self.err(
                DiagnosticKind::Syntax,
                format!("expected a polynomial, found {}", self.describe_next()),
            );
        }
        let (a, b) = (self.toks[start].start, self.toks[self.pos - 1].end);
        let col = self.toks[start].col;
        ring.parse(&self.text[a..b]).map_err(|e| self.invalid(col, e))
    }

    fn polys(&mut self, ring: &Ring, close: &str) -> PResult<Vec<SVec>> {
        let mut out = Vec::new();
        if self.eat_sym(close) {
            return Ok(out);
        }
        loop {
            out.push(self.poly(ring)?);
            if self.eat_sym(close) {
                return Ok(out);
            }
            self.expect_sym(",")?;
        }
    }

    /// `[[a, b], [c, d]]`, one inner list per row.
    fn matrix(&mut self, ring: &Ring) -> PResult<Vec<Vec<SVec>>> {
        self.expect_sym("[")?;
        let mut rows = Vec::new();
        if self.eat_sym("]") {
            return Ok(rows);
        }
        loop {
            self.expect_sym("[")?;
            rows.push(self.polys(ring, "]")?);
            if self.eat_sym("]") {
                return Ok(rows);
            }
            self.expect_sym(",")?;
        }
    }

    fn rows_to_vectors(&self, ring: &Ring, rows: Vec<Vec<SVec>>, width: usize, col: usize) -> PResult<Vec<SVec>> {
        rows.into_iter()
            .map(|r| {
                if r.len() != width {
                    return Err(Diagnostic {
                        line: self.line,
                        col,
                        kind: DiagnosticKind::Invalid,
                        message: format!("row of length {} in a matrix with {width} columns", r.len()),
                    });
                }
                Ok(ring.ctx().from_entries(&r))
            })
            .collect()
    }

    fn base_domain(&mut self) -> PResult<(Domain, Option<i64>)> {
        let col = self.col();
        let name = self.ident()?;
        match name.as_str() {
            "ZZ" => {
                if self.eat_sym("/") {
                    let m = self.int()?;
                    if m < 1 {
                        return Err(Diagnostic {
                            line: self.line,
                            col,
                            kind: DiagnosticKind::Invalid,
                            message: "the modulus must be positive".into(),
                        });
                    }
                    Ok((Domain::Integers, Some(m)))
                } else {
                    Ok((Domain::Integers, None))
                }
            }
            "QQ" => Ok((Domain::Rationals, None)),
            "GF" => {
                self.expect_sym("(")?;
                let p = self.int()?;
                self.expect_sym(")")?;
                if p < 2 || !crate::coeff::is_probable_prime(p as u64) {
                    return Err(Diagnostic {
                        line: self.line,
                        col,
                        kind: DiagnosticKind::Invalid,
                        message: format!("GF({p}) needs a prime"),
                    });
                }
                Ok((Domain::Prime(p as u64), None))
            }
            _ => Err(Diagnostic {
                line: self.line,
                col,
                kind: DiagnosticKind::Syntax,
                message: format!("expected ZZ, QQ or GF(p), found `{name}`"),
            }),
        }
    }

    fn build_ring(&self, domain: Domain, vars: &[&str], modulus: Option<i64>, col: usize) -> PResult<Ring> {
        let r = Ring::polynomial(domain, vars).map_err(|e| self.invalid(col, e))?;
        Ok(match modulus {
            Some(m) => r.quotient(&[r.constant(m)]),
            None => r,
        })
    }

    fn ring_expr(&mut self) -> PResult<Ring> {
        let col = self.col();
        let base = match self.peek_ident() {
            Some("ZZ" | "QQ" | "GF") => {
                let (d, m) = self.base_domain()?;
                self.build_ring(d, &[], m, col)?
            }
            Some("poly") => {
                self.pos += 1;
                self.expect_sym("(")?;
                let (d, m) = self.base_domain()?;
                self.expect_sym(",")?;
                self.expect_sym("[")?;
                let mut vars = Vec::new();
                if !self.eat_sym("]") {
                    loop {
                        vars.push(self.ident()?);
                        if self.eat_sym("]") {
                            break;
                        }
                        self.expect_sym(",")?;
                    }
                }
                self.expect_sym(")")?;
                let refs: Vec<&str> = vars.iter().map(|s| s.as_str()).collect();
                self.build_ring(d, &refs, m, col)?
            }
            Some(_) => {
                let name = self.ident()?;
                match self.lookup(&name, col)? {
                    Value::Ring(r) => r.clone(),
                    v => return self.mismatch(&name, v.kind(), "ring", col),
                }
            }
            None => {
                return self.err(
                    DiagnosticKind::Syntax,
                    format!("expected a ring, found {}", self.describe_next()),
                )
            }
        };
        if self.eat_sym("/") {
            self.expect_sym("(")?;
            let rels = self.polys(&base, ")")?;
            return Ok(base.quotient(&rels));
        }
        Ok(base)
    }

    fn module_atom(&mut self) -> PResult<FpModule> {
        let col = self.col();
        let name = self.ident()?;
        match name.as_str() {
            "coker" => {
                let ring = self.ring_for_literal()?;
                self.expect_sym("(")?;
                let rows = self.matrix(&ring)?;
                self.expect_sym(")")?;
                let Some(width) = rows.first().map(|r| r.len()) else {
                    return Err(Diagnostic {
                        line: self.line,
                        col,
                        kind: DiagnosticKind::Invalid,
                        message: "coker needs at least one row; use free(n) for a free module".into(),
                    });
                };
                let rows = self.rows_to_vectors(&ring, rows, width, col)?;
                FpModule::coker(&ring, width, rows).map_err(|e| self.invalid(col, e))
            }
            "free" => {
                let ring = self.ring_for_literal()?;
                self.expect_sym("(")?;
                let n = self.int()?;
                self.expect_sym(")")?;
                if n < 0 {
                    return self.err(DiagnosticKind::Invalid, "rank must be non-negative");
                }
                Ok(FpModule::free(&ring, n as usize))
            }
            "zero" => Ok(FpModule::zero(&self.ring_for_literal()?)),
            "quotient" => {
                self.expect_sym("(")?;
                let icol = self.col();
                let iname = self.ident()?;
                self.expect_sym(")")?;
                match self.lookup(&iname, icol)? {
                    Value::Ideal(i) => Ok(FpModule::cyclic(i.ring(), i.gens())),
                    v => self.mismatch(&iname, v.kind(), "ideal", icol),
                }
            }
            _ => match self.lookup(&name, col)? {
                Value::Module(m) => Ok(m.clone()),
                Value::Ring(r) => Ok(FpModule::free(r, 1)),
                v => self.mismatch(&name, v.kind(), "module", col),
            },
        }
    }

    fn module_expr(&mut self) -> PResult<FpModule> {
        let col = self.col();
        let mut m = self.module_atom()?;
        while self.eat_sym("++") {
            let n = self.module_atom()?;
            m = m.direct_sum(&n).map_err(|e| self.invalid(col, e))?;
        }
        Ok(m)
    }

    fn complex_atom(&mut self) -> PResult<BoundedComplex> {
        let col = self.col();
        let name = self.ident()?;
        match name.as_str() {
            "koszul" => {
                self.expect_sym("(")?;
                let icol = self.col();
                let iname = self.ident()?;
                self.expect_sym(")")?;
                let ideal = match self.lookup(&iname, icol)? {
                    Value::Ideal(i) => i.clone(),
                    v => return self.mismatch(&iname, v.kind(), "ideal", icol),
                };
                let spec = KoszulSpec::new(ideal.ring(), ideal.gens(), 1).map_err(|e| self.invalid(icol, e))?;
                Ok(koszul_complex(&spec).map_err(|e| self.invalid(icol, e))?.complex)
            }
            "shift" => {
                self.expect_sym("(")?;
                let c = self.complex_expr()?;
                self.expect_sym(",")?;
                let k = self.int()?;
                self.expect_sym(")")?;
                Ok(c.shift(k as i32))
            }
            "module" => {
                self.expect_sym("(")?;
                let m = self.module_atom()?;
                let deg = if self.eat_sym(",") { self.int()? } else { 0 };
                self.expect_sym(")")?;
                Ok(BoundedComplex::concentrated(&m, deg as i32))
            }
            "zero" => Ok(BoundedComplex::zero(&self.ring_for_literal()?)),
            "chain" => {
                self.expect_sym("(")?;
                let lo = self.int()?;
                self.expect_sym(",")?;
                self.expect_sym("[")?;
                let mut terms = Vec::new();
                loop {
                    terms.push(self.module_atom()?);
                    if self.eat_sym("]") {
                        break;
                    }
                    self.expect_sym(",")?;
                }
                self.expect_sym(",")?;
                let ring = terms[0].ring().clone();
                if let Some(t) = terms.iter().find(|t| t.ring() != &ring) {
                    return Err(self.invalid(col, crate::Error::RingMismatch(format!("{} vs {}", ring, t.ring()))));
                }
                self.expect_sym("[")?;
                let mut diffs = Vec::new();
                if !self.eat_sym("]") {
                    loop {
                        let mcol = self.col();
                        let k = diffs.len();
                        let rows = self.matrix(&ring)?;
                        // d_{lo+k+1}: one row per generator of the source term
                        let width = terms.get(k).map_or(0, |t| t.ngens());
                        diffs.push(self.rows_to_vectors(&ring, rows, width, mcol)?);
                        if self.eat_sym("]") {
                            break;
                        }
                        self.expect_sym(",")?;
                    }
                }
                self.expect_sym(")")?;
                BoundedComplex::new(&ring, lo as i32, terms, diffs).map_err(|e| self.invalid(col, e))
            }
            _ => match self.lookup(&name, col)? {
                Value::Complex(c) => Ok(c.clone()),
                Value::Module(m) => Ok(BoundedComplex::concentrated(m, 0)),
                Value::Ring(r) => Ok(BoundedComplex::concentrated(&FpModule::free(r, 1), 0)),
                v => self.mismatch(&name, v.kind(), "complex", col),
            },
        }
    }

    fn complex_expr(&mut self) -> PResult<BoundedComplex> {
        let col = self.col();
        let mut c = self.complex_atom()?;
        while self.eat_sym("++") {
            let d = self.complex_atom()?;
            c = c.direct_sum(&d).map_err(|e| self.invalid(col, e))?;
        }
        Ok(c)
    }

    fn ring_named(&mut self) -> PResult<Ring> {
        let col = self.col();
        let name = self.ident()?;
        match self.lookup(&name, col)? {
            Value::Ring(r) => Ok(r.clone()),
            v => self.mismatch(&name, v.kind(), "ring", col),
        }
    }

    fn map_expr(&mut self) -> PResult<RingMap> {
        let col = self.col();
        let kw = self.ident()?;
        if kw != "ringmap" {
            return Err(Diagnostic {
                line: self.line,
                col,
                kind: DiagnosticKind::Syntax,
                message: format!("expected `ringmap`, found `{kw}`"),
            });
        }
        self.expect_sym("(")?;
        let source = self.ring_named()?;
        self.expect_sym("->")?;
        let target = self.ring_named()?;
        let mut images: Vec<Option<SVec>> = vec![None; source.nvars()];
        while self.eat_sym(",") {
            let vcol = self.col();
            let v = self.ident()?;
            let Some(i) = source.var_index(&v) else {
                return Err(Diagnostic {
                    line: self.line,
                    col: vcol,
                    kind: DiagnosticKind::UnknownIdentifier,
                    message: format!("`{v}` is not a variable of {}", source.label()),
                });
            };
            self.expect_sym("->")?;
            images[i] = Some(self.poly(&target)?);
        }
        self.expect_sym(")")?;
        let mut out = Vec::new();
        for (i, img) in images.into_iter().enumerate() {
            let name = &source.ctx().vars[i];
            match img.or_else(|| target.var_index(name).map(|j| target.var(j))) {
                Some(p) => out.push(p),
                None => {
                    return Err(Diagnostic {
                        line: self.line,
                        col,
                        kind: DiagnosticKind::Invalid,
                        message: format!("no image given for `{name}`"),
                    })
                }
            }
        }
        RingMap::new(&source, &target, out).map_err(|e| self.invalid(col, e))
    }

    fn param_value(&mut self) -> PResult<Param> {
        if self.eat_sym("[") {
            let mut v = Vec::new();
            if !self.eat_sym("]") {
                loop {
                    v.push(self.int()?);
                    if self.eat_sym("]") {
                        break;
                    }
                    self.expect_sym(",")?;
                }
            }
            Ok(Param::List(v))
        } else {
            Ok(Param::Int(self.int()?))
        }
    }

    fn task(&mut self) -> PResult<Task> {
        let col = self.col();
        let name = self.ident()?;
        let Some(kind) = TaskKind::from_name(&name) else {
            return Err(Diagnostic {
                line: self.line,
                col,
                kind: DiagnosticKind::UnknownTask,
                message: format!("`{name}` is not a task"),
            });
        };
        let mut arg_names = Vec::new();
        let mut args = Vec::new();
        let mut params = BTreeMap::new();
        let sig = kind.signature();
        while !self.at_end() {
            let acol = self.col();
            let word = self.ident()?;
            if self.eat_sym("=") {
                if !kind.params().contains(&word.as_str()) {
                    return Err(Diagnostic {
                        line: self.line,
                        col: acol,
                        kind: DiagnosticKind::Syntax,
                        message: format!("`{name}` takes no parameter `{word}`"),
                    });
                }
                let v = self.param_value()?;
                let ok = match (word.as_str(), &v) {
                    ("exponents", Param::List(l)) => l.iter().all(|&e| e >= 1),
                    ("exponents", _) => false,
                    ("depth", Param::Int(d)) => (1..=64).contains(d),
                    (_, Param::Int(d)) => (0..=64).contains(d),
                    _ => false,
                };
                if !ok {
                    return Err(Diagnostic {
                        line: self.line,
                        col: acol,
                        kind: DiagnosticKind::Invalid,
                        message: format!("bad value for `{word}`"),
                    });
                }
                params.insert(word, v);
                continue;
            }
            if !params.is_empty() {
                return Err(Diagnostic {
                    line: self.line,
                    col: acol,
                    kind: DiagnosticKind::Syntax,
                    message: "arguments must come before parameters".into(),
                });
            }
            let Some(&want) = sig.get(args.len()) else {
                return Err(Diagnostic {
                    line: self.line,
                    col: acol,
                    kind: DiagnosticKind::Syntax,
                    message: format!("`{name}` takes {} arguments", sig.len()),
                });
            };
            let v = self.lookup(&word, acol)?;
            let arg = match (want, v) {
                (ArgKind::Module, Value::Module(m)) => Arg::Module(m.clone()),
                (ArgKind::Module, Value::Ring(r)) => Arg::Module(FpModule::free(r, 1)),
                (ArgKind::Object, Value::Module(m)) => Arg::Object(m.clone().into()),
                (ArgKind::Object, Value::Ring(r)) => Arg::Object(FpModule::free(r, 1).into()),
                (ArgKind::Object, Value::Complex(c)) => Arg::Object(c.clone().into()),
                (ArgKind::Ideal, Value::Ideal(i)) => Arg::Ideal(i.clone()),
                (ArgKind::Map, Value::Map(t)) => Arg::Map(t.clone()),
                (want, v) => return self.mismatch(&word, v.kind(), want.label(), acol),
            };
            arg_names.push(word);
            args.push(arg);
        }
        if args.len() != sig.len() {
            return self.err(
                DiagnosticKind::Syntax,
                format!("`{name}` takes {} arguments, got {}", sig.len(), args.len()),
            );
        }
        Ok(Task {
            kind,
            line: self.line,
            arg_names,
            args,
            params,
        })
    }
}

const KEYWORDS: &[&str] = &[
    "ring", "ideal", "module", "complex", "map", "task", "in", "ZZ", "QQ", "GF", "poly", "coker", "free", "zero",
    "quotient", "koszul", "shift", "chain", "ringmap",
];

/// Parses and evaluates a scenario.
pub fn parse_scenario(text: &str) -> Result<Scenario, Diagnostic> {
    let mut values: BTreeMap<String, Value> = BTreeMap::new();
    let mut declarations: Vec<Declaration> = Vec::new();
    let mut tasks = Vec::new();
    let mut default_ring: Option<Ring> = None;
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let mut toks = lex(line, line_no)?;
        if toks.is_empty() {
            continue;
        }
        // a trailing `in R` fixes the ring for literals
        let mut in_ring = None;
        let n = toks.len();
        if n >= 3 && toks[n - 2].kind == TokKind::Ident("in".into()) {
            if let TokKind::Ident(name) = &toks[n - 1].kind {
                let col = toks[n - 1].col;
                match values.get(name) {
                    Some(Value::Ring(r)) => in_ring = Some(r.clone()),
                    Some(v) => {
                        return Err(Diagnostic {
                            line: line_no,
                            col,
                            kind: DiagnosticKind::TypeMismatch,
                            message: format!("`{name}` is a {}, expected a ring", v.kind()),
                        })
                    }
                    None => {
                        return Err(Diagnostic {
                            line: line_no,
                            col,
                            kind: DiagnosticKind::UnknownIdentifier,
                            message: format!("`{name}` is not declared"),
                        })
                    }
                }
                toks.truncate(n - 2);
            }
        }
        let mut p = LineParser {
            text: line,
            line: line_no,
            toks,
            pos: 0,
            values: &values,
            default_ring: default_ring.as_ref(),
            in_ring,
        };
        let kw_col = p.col();
        let kw = p.ident()?;
        if kw == "task" {
            tasks.push(p.task()?);
            p.finish()?;
            continue;
        }
        if !["ring", "ideal", "module", "complex", "map"].contains(&kw.as_str()) {
            return Err(Diagnostic {
                line: line_no,
                col: kw_col,
                kind: DiagnosticKind::Syntax,
                message: format!("expected a declaration or `task`, found `{kw}`"),
            });
        }
        let name_col = p.col();
        let name = p.ident()?;
        if KEYWORDS.contains(&name.as_str()) {
            return p
                .err(DiagnosticKind::Syntax, format!("`{name}` is reserved"))
                .map_err(|mut d| {
                    d.col = name_col;
                    d
                });
        }
        if values.contains_key(&name) {
            return Err(Diagnostic {
                line: line_no,
                col: name_col,
                kind: DiagnosticKind::Duplicate,
                message: format!("`{name}` is already declared"),
            });
        }
        p.expect_sym("=")?;
        let value = match kw.as_str() {
            "ring" => Value::Ring(p.ring_expr()?),
            "ideal" => {
                let ring = p.ring_for_literal()?;
                p.expect_sym("(")?;
                let gens = p.polys(&ring, ")")?;
                Value::Ideal(Ideal::new(&ring, &gens))
            }
            "module" => Value::Module(p.module_expr()?),
            "complex" => Value::Complex(p.complex_expr()?),
            _ => Value::Map(p.map_expr()?),
        };
        p.finish()?;
        if let Value::Ring(r) = &value {
            default_ring = Some(r.clone());
        }
        values.insert(name.clone(), value.clone());
        declarations.push(Declaration {
            name,
            line: line_no,
            value,
        });
    }
    Ok(Scenario {
        source: text.to_string(),
        declarations,
        tasks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal() {
        let s = parse_scenario("ring R = poly(QQ, [x, y])\n").unwrap();
        assert_eq!(s.declarations.len(), 1);
        assert!(s.tasks.is_empty());
    }

    #[test]
    fn full_line_set() {
        let text = "\
ring R = poly(QQ, [x, y])   # a comment
ideal I = (x, y)
module M = coker([[x, y]])
ring S = poly(QQ, [t])
map theta = ringmap(R -> S, x -> t, y -> t^2)
module N = zero in S
complex C = chain(-1, [R, R], [[[x]]]) ++ shift(koszul(I), 2)
task six_conditions M I depth=6
task radical_invariance C I exponents=[2, 3]
";
        let s = parse_scenario(text).unwrap();
        assert_eq!(s.declarations.len(), 7);
        assert_eq!(s.tasks.len(), 2);
        assert_eq!(s.tasks[0].depth(), Some(6));
        match s.get("M").unwrap() {
            Value::Module(m) => assert_eq!(m.ngens(), 2),
            _ => panic!(),
        }
    }

    #[test]
    fn unknown_task_names_token() {
        let e = parse_scenario("ring R = ZZ\nmodule M = free(1)\ntask frobnicate M").unwrap_err();
        assert_eq!((e.line, e.col, e.kind), (3, 6, DiagnosticKind::UnknownTask));
        assert!(e.message.contains("frobnicate"));
    }

    #[test]
    fn type_mismatch() {
        let e = parse_scenario("ring R = ZZ\nideal I = (2)\ntask completeness I I").unwrap_err();
        assert_eq!(e.kind, DiagnosticKind::TypeMismatch);
        assert_eq!((e.line, e.col), (3, 19));
    }

    #[test]
    fn positions() {
        let e = parse_scenario("ring R = poly(QQ, [x])\nideal I = (x, y^)").unwrap_err();
        assert_eq!((e.line, e.col), (2, 15));
        let e = parse_scenario("ring R = ZZ\nmodule M = coker([[2]]) ++ Q").unwrap_err();
        assert_eq!((e.line, e.col, e.kind), (2, 28, DiagnosticKind::UnknownIdentifier));
        let e = parse_scenario("ring R = ZZ\nring R = QQ").unwrap_err();
        assert_eq!(e.kind, DiagnosticKind::Duplicate);
        let e = parse_scenario("ring R = ZZ $").unwrap_err();
        assert_eq!((e.col, e.kind), (13, DiagnosticKind::Syntax));
    }
}
