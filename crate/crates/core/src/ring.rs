//! Base rings, ring elements, ideals and ring maps.
//!
//! Every supported ring is presented as `K[x_1..x_n] / Q` with `K` one of
//! `Z`, `Q`, `F_p` and `Q` stored as a reduced Gröbner basis. `Z/m` is the
//! case with no variables and `Q = (m)`.

use std::fmt;
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::coeff::{big, mod_inverse, Coeff, Domain};
use crate::error::{Error, Result};
use crate::groebner::{self, TrackedBasis};
use crate::poly::{MonomialOrder, PolyCtx, SVec, Term};

#[derive(Debug, PartialEq, Eq, Hash)]
pub struct RingData {
    pub ctx: PolyCtx,
    pub defining: Vec<SVec>,
}

/// A commutative Noetherian base ring. Cheap to clone.
#[derive(Clone, Debug)]
pub struct Ring(Arc<RingData>);

impl PartialEq for Ring {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || *self.0 == *other.0
    }
}

impl Eq for Ring {}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RingKind {
    Integers,
    IntegersMod(BigInt),
    Field(Domain),
    Polynomial,
    Quotient,
}

impl Ring {
    fn build(ctx: PolyCtx, rels: &[SVec]) -> Ring {
        let defining = groebner::groebner(&ctx, rels);
        Ring(Arc::new(RingData { ctx, defining }))
    }

    pub fn integers() -> Ring {
        Ring::polynomial(Domain::Integers, &[]).expect("no variables")
    }

    pub fn rationals() -> Ring {
        Ring::polynomial(Domain::Rationals, &[]).expect("no variables")
    }

    pub fn integers_mod(m: i64) -> Ring {
        let z = Ring::integers();
        let m = z.ctx().constant(crate::coeff::int(m), 0);
        z.quotient(&[m])
    }

    pub fn polynomial(domain: Domain, vars: &[&str]) -> Result<Ring> {
        if let Domain::Prime(p) = domain {
            if !crate::coeff::is_probable_prime(p) {
                return Err(Error::Unsupported(format!("GF({p}) needs a prime modulus")));
            }
        }
        let mut seen = std::collections::BTreeSet::new();
        for v in vars {
            if !seen.insert(*v) {
                return Err(Error::Unsupported(format!("duplicate variable `{v}`")));
            }
        }
        Ok(Ring::build(
            PolyCtx {
                domain,
                vars: vars.iter().map(|s| s.to_string()).collect(),
                order: MonomialOrder::Grevlex,
            },
            &[],
        ))
    }

    /// Same ring presented with a different monomial order.
    pub fn with_order(&self, order: MonomialOrder) -> Ring {
        let mut ctx = self.ctx().clone();
        ctx.order = order;
        let rels: Vec<SVec> = self
            .0
            .defining
            .iter()
            .map(|p| ctx.from_terms(p.terms.clone()))
            .collect();
        Ring::build(ctx, &rels)
    }

    /// `self / (rels)`.
    pub fn quotient(&self, rels: &[SVec]) -> Ring {
        let mut all = self.0.defining.clone();
        all.extend(rels.iter().cloned());
        Ring::build(self.ctx().clone(), &all)
    }

    /// The polynomial ring with one extra variable appended.
    pub fn adjoin(&self, name: &str) -> Ring {
        let mut ctx = self.ctx().clone();
        ctx.vars.push(name.to_string());
        let rels: Vec<SVec> = self
            .0
            .defining
            .iter()
            .map(|p| {
                ctx.from_terms(
                    p.terms
                        .iter()
                        .map(|t| {
                            let mut e = t.exps.clone();
                            e.push(0);
                            Term {
                                comp: t.comp,
                                exps: e,
                                coeff: t.coeff.clone(),
                            }
                        })
                        .collect(),
                )
            })
            .collect();
        Ring::build(ctx, &rels)
    }

    pub fn ctx(&self) -> &PolyCtx {
        &self.0.ctx
    }

    pub fn domain(&self) -> &Domain {
        &self.0.ctx.domain
    }

    pub fn nvars(&self) -> usize {
        self.0.ctx.nvars()
    }

    pub fn defining(&self) -> &[SVec] {
        &self.0.defining
    }

    /// Rings without variables: `Z`, `Z/m`, `Q`, `F_p`.
    pub fn is_euclidean_base(&self) -> bool {
        self.nvars() == 0
    }

    pub fn kind(&self) -> RingKind {
        let ctx = self.ctx();
        if ctx.nvars() == 0 {
            match (&ctx.domain, self.defining()) {
                (Domain::Integers, []) => RingKind::Integers,
                (Domain::Integers, [m]) => RingKind::IntegersMod(m.terms[0].coeff.numer().clone()),
                (d, []) => RingKind::Field(d.clone()),
                // the zero ring
                _ => RingKind::Quotient,
            }
        } else if self.defining().is_empty() {
            RingKind::Polynomial
        } else {
            RingKind::Quotient
        }
    }

    /// The modulus of `Z/m`, if this ring is one.
    pub fn integer_modulus(&self) -> Option<BigInt> {
        match self.kind() {
            RingKind::IntegersMod(m) => Some(m),
            _ => None,
        }
    }

    pub fn zero(&self) -> SVec {
        SVec::zero()
    }

    pub fn one(&self) -> SVec {
        self.nf(&self.ctx().one())
    }

    pub fn constant(&self, c: i64) -> SVec {
        self.nf(&self.ctx().constant(crate::coeff::int(c), 0))
    }

    pub fn var(&self, i: usize) -> SVec {
        self.nf(&self.ctx().var(i))
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.ctx().vars.iter().position(|v| v == name)
    }

    /// Normal form of a polynomial modulo the defining ideal.
    pub fn nf(&self, p: &SVec) -> SVec {
        if self.0.defining.is_empty() {
            return p.clone();
        }
        groebner::reduce(self.ctx(), p, &self.0.defining)
    }

    /// Entrywise normal form of a vector.
    pub fn nf_vec(&self, v: &SVec) -> SVec {
        if self.0.defining.is_empty() || v.is_zero() {
            return v.clone();
        }
        let n = v.max_comp().unwrap() + 1;
        let ctx = self.ctx();
        let entries: Vec<SVec> = ctx.entries(v, n).iter().map(|p| self.nf(p)).collect();
        ctx.from_entries(&entries)
    }

    pub fn add(&self, a: &SVec, b: &SVec) -> SVec {
        self.nf_vec(&self.ctx().add(a, b))
    }

    pub fn sub(&self, a: &SVec, b: &SVec) -> SVec {
        self.nf_vec(&self.ctx().sub(a, b))
    }

    pub fn neg(&self, a: &SVec) -> SVec {
        self.ctx().neg(a)
    }

    pub fn mul(&self, a: &SVec, b: &SVec) -> SVec {
        self.nf_vec(&self.ctx().mul_poly(a, b))
    }

    pub fn pow(&self, a: &SVec, n: u32) -> SVec {
        let mut acc = self.one();
        for _ in 0..n {
            acc = self.mul(&acc, a);
        }
        acc
    }

    pub fn is_zero(&self, p: &SVec) -> bool {
        self.nf_vec(p).is_zero()
    }

    /// Inverse of `p` when `p` is recognisably a unit: a unit constant of the
    /// coefficient domain, or a residue prime to the modulus in `Z/m`.
    pub fn unit_inverse(&self, p: &SVec) -> Option<SVec> {
        let p = self.nf(p);
        let c = self.ctx().is_constant(&p)?;
        if c.is_zero() {
            return None;
        }
        if let Some(inv) = self.domain().inverse(&c) {
            return Some(self.nf(&self.ctx().constant(inv, 0)));
        }
        if let Some(m) = self.integer_modulus() {
            let inv = mod_inverse(&c.numer().mod_floor(&m), &m)?;
            return Some(self.nf(&self.ctx().constant(big(inv), 0)));
        }
        None
    }

    /// `q * e_j` for every defining relation `q` and every `j < rank`.
    pub fn defining_module(&self, rank: usize) -> Vec<SVec> {
        let ctx = self.ctx();
        let mut out = Vec::new();
        for j in 0..rank {
            for q in &self.0.defining {
                out.push(ctx.at_comp(q, j));
            }
        }
        out
    }

    pub fn fmt(&self, p: &SVec) -> String {
        self.ctx().fmt_poly(p)
    }

    pub fn fmt_vec(&self, v: &SVec, n: usize) -> Vec<String> {
        self.ctx().fmt_vector(v, n)
    }

    /// Parses a polynomial expression over this ring's variables.
    pub fn parse(&self, input: &str) -> Result<SVec> {
        let mut p = ExprParser {
            ring: self,
            toks: tokenize(input).map_err(|reason| Error::Polynomial {
                input: input.to_string(),
                reason,
            })?,
            pos: 0,
        };
        let v = p.expr().map_err(|reason| Error::Polynomial {
            input: input.to_string(),
            reason,
        })?;
        if p.pos != p.toks.len() {
            return Err(Error::Polynomial {
                input: input.to_string(),
                reason: format!("unexpected token `{}`", p.toks[p.pos]),
            });
        }
        Ok(self.nf(&v))
    }

    pub fn label(&self) -> String {
        let ctx = self.ctx();
        let base = if ctx.vars.is_empty() {
            ctx.domain.label()
        } else {
            format!("{}[{}]", ctx.domain.label(), ctx.vars.join(","))
        };
        if self.0.defining.is_empty() {
            base
        } else {
            let rels: Vec<String> = self.0.defining.iter().map(|q| self.fmt(q)).collect();
            format!("{}/({})", base, rels.join(", "))
        }
    }

    pub fn same_as(&self, other: &Ring) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::RingMismatch(format!("{} vs {}", self.label(), other.label())))
        }
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Sym(char),
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Num(n) => write!(f, "{n}"),
            Tok::Ident(s) => write!(f, "{s}"),
            Tok::Sym(c) => write!(f, "{c}"),
        }
    }
}

fn tokenize(s: &str) -> std::result::Result<Vec<Tok>, String> {
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    let mut out = Vec::new();
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            out.push(Tok::Num(text.parse().map_err(|_| "bad number".to_string())?));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(chars[start..i].iter().collect()));
        } else if "+-*^()/".contains(c) {
            out.push(Tok::Sym(c));
            i += 1;
        } else {
            return Err(format!("unexpected character `{c}`"));
        }
    }
    Ok(out)
}

struct ExprParser<'a> {
    ring: &'a Ring,
    toks: Vec<Tok>,
    pos: usize,
}

type PResult = std::result::Result<SVec, String>;

impl ExprParser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn expr(&mut self) -> PResult {
        let ctx = self.ring.ctx();
        let mut acc = match self.peek() {
            Some(Tok::Sym('-')) => {
                self.pos += 1;
                ctx.neg(&self.term()?)
            }
            Some(Tok::Sym('+')) => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(Tok::Sym('+')) => {
                    self.pos += 1;
                    acc = ctx.add(&acc, &self.term()?);
                }
                Some(Tok::Sym('-')) => {
                    self.pos += 1;
                    acc = ctx.sub(&acc, &self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> PResult {
        let ctx = self.ring.ctx();
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(Tok::Sym('*')) => {
                    self.pos += 1;
                    acc = ctx.mul(&acc, &self.power()?);
                }
                Some(Tok::Sym('/')) => {
                    self.pos += 1;
                    let d = self.power()?;
                    let c = ctx
                        .is_constant(&d)
                        .ok_or_else(|| "division by a non-constant".to_string())?;
                    let inv = ctx
                        .domain
                        .inverse(&c)
                        .ok_or_else(|| format!("{c} is not invertible in {}", ctx.domain.label()))?;
                    acc = ctx.scale(&acc, &inv);
                }
                // implicit product, e.g. `3t` or `x(y+1)`
                Some(Tok::Ident(_)) | Some(Tok::Num(_)) | Some(Tok::Sym('(')) => {
                    acc = ctx.mul(&acc, &self.power()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> PResult {
        let base = self.atom()?;
        if let Some(Tok::Sym('^')) = self.peek() {
            self.pos += 1;
            match self.peek().cloned() {
                Some(Tok::Num(n)) => {
                    self.pos += 1;
                    let e: u32 = n.try_into().map_err(|_| "exponent too large".to_string())?;
                    return Ok(self.ring.ctx().pow(&base, e));
                }
                _ => return Err("expected a nonnegative integer exponent".into()),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> PResult {
        let ctx = self.ring.ctx();
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(ctx.constant(big(n), 0))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                match self.ring.var_index(&name) {
                    Some(i) => Ok(ctx.var(i)),
                    None => Err(format!("unknown variable `{name}`")),
                }
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let v = self.expr()?;
                match self.peek() {
                    Some(Tok::Sym(')')) => {
                        self.pos += 1;
                        Ok(v)
                    }
                    _ => Err("missing `)`".into()),
                }
            }
            Some(Tok::Sym('-')) => {
                self.pos += 1;
                Ok(ctx.neg(&self.power()?))
            }
            Some(t) => Err(format!("unexpected token `{t}`")),
            None => Err("unexpected end of input".into()),
        }
    }
}

/// An element of a ring, kept in normal form.
#[derive(Clone, Debug, PartialEq)]
pub struct RingElement {
    pub ring: Ring,
    pub value: SVec,
}

impl RingElement {
    pub fn new(ring: &Ring, value: &SVec) -> Self {
        RingElement {
            ring: ring.clone(),
            value: ring.nf(value),
        }
    }

    pub fn parse(ring: &Ring, s: &str) -> Result<Self> {
        Ok(RingElement {
            ring: ring.clone(),
            value: ring.parse(s)?,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.ring.fmt(&self.value))
    }
}

/// A submodule of `R^rank` spanned by `gens`, with lazily computed Gröbner
/// data. The defining ideal of `R` is folded in automatically.
#[derive(Debug)]
pub struct Span {
    ring: Ring,
    rank: usize,
    gens: Vec<SVec>,
    gb: OnceLock<Vec<SVec>>,
    tracked: OnceLock<TrackedBasis>,
}

impl Clone for Span {
    fn clone(&self) -> Self {
        Span {
            ring: self.ring.clone(),
            rank: self.rank,
            gens: self.gens.clone(),
            gb: self.gb.clone(),
            tracked: self.tracked.clone(),
        }
    }
}

impl Span {
    pub fn new(ring: &Ring, rank: usize, gens: Vec<SVec>) -> Span {
        debug_assert!(gens.iter().all(|g| g.max_comp().is_none_or(|c| c < rank)));
        Span {
            ring: ring.clone(),
            rank,
            gens,
            gb: OnceLock::new(),
            tracked: OnceLock::new(),
        }
    }

    pub fn gens(&self) -> &[SVec] {
        &self.gens
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Reduced Gröbner basis of the span plus the defining ideal times `R^rank`.
    pub fn gb(&self) -> &[SVec] {
        self.gb.get_or_init(|| {
            let mut all = self.gens.clone();
            all.extend(self.ring.defining_module(self.rank));
            groebner::groebner(self.ring.ctx(), &all)
        })
    }

    fn tracked(&self) -> &TrackedBasis {
        self.tracked.get_or_init(|| {
            groebner::tracked_basis(
                self.ring.ctx(),
                &self.gens,
                self.rank,
                &self.ring.defining_module(self.rank),
                self.ring.defining(),
            )
        })
    }

    pub fn reduce(&self, v: &SVec) -> SVec {
        groebner::reduce(self.ring.ctx(), v, self.gb())
    }

    pub fn contains(&self, v: &SVec) -> bool {
        self.reduce(v).is_zero()
    }

    /// Coefficients expressing `v` through the generators, if `v` lies in the span.
    pub fn lift(&self, v: &SVec) -> Option<SVec> {
        if !self.contains(v) {
            return None;
        }
        let c = self.tracked().lift(self.ring.ctx(), v)?;
        Some(self.ring.nf_vec(&c))
    }

    /// Generators of the relations among the generators.
    pub fn syzygies(&self) -> Vec<SVec> {
        self.tracked()
            .syzygies(self.ring.ctx())
            .into_iter()
            .map(|s| self.ring.nf_vec(&s))
            .filter(|s| !s.is_zero())
            .collect()
    }

    /// Gröbner elements that are nonzero in `R^rank`.
    pub fn essential_gb(&self) -> Vec<SVec> {
        self.gb()
            .iter()
            .map(|g| self.ring.nf_vec(g))
            .filter(|g| !g.is_zero())
            .collect()
    }
}

/// A finitely generated ideal.
#[derive(Clone, Debug)]
pub struct Ideal {
    ring: Ring,
    gens: Vec<SVec>,
    span: Span,
}

impl Ideal {
    pub fn new(ring: &Ring, gens: &[SVec]) -> Ideal {
        let gens: Vec<SVec> = gens.iter().map(|g| ring.nf(g)).filter(|g| !g.is_zero()).collect();
        Ideal {
            ring: ring.clone(),
            span: Span::new(ring, 1, gens.clone()),
            gens,
        }
    }

    pub fn parse(ring: &Ring, gens: &[&str]) -> Result<Ideal> {
        let g: Result<Vec<SVec>> = gens.iter().map(|s| ring.parse(s)).collect();
        Ok(Ideal::new(ring, &g?))
    }

    pub fn unit(ring: &Ring) -> Ideal {
        Ideal::new(ring, &[ring.one()])
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn gens(&self) -> &[SVec] {
        &self.gens
    }

    pub fn span(&self) -> &Span {
        &self.span
    }

    /// Reduced Gröbner basis (elements nonzero in the ring).
    pub fn groebner_basis(&self) -> Result<Vec<SVec>> {
        Ok(self.span.essential_gb())
    }

    pub fn normal_form(&self, f: &SVec) -> SVec {
        self.span.reduce(f)
    }

    pub fn contains_element(&self, f: &SVec) -> bool {
        self.span.contains(f)
    }

    /// Is `other` contained in `self`?
    pub fn contains(&self, other: &Ideal) -> Result<bool> {
        self.ring.same_as(&other.ring)?;
        Ok(other.gens.iter().all(|g| self.contains_element(g)))
    }

    pub fn is_unit(&self) -> bool {
        self.contains_element(&self.ring.one())
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn product(&self, other: &Ideal) -> Result<Ideal> {
        self.ring.same_as(&other.ring)?;
        let mut gens = Vec::new();
        for a in &self.gens {
            for b in &other.gens {
                gens.push(self.ring.mul(a, b));
            }
        }
        Ok(Ideal::new(&self.ring, &dedup(gens)))
    }

    pub fn power(&self, n: u32) -> Ideal {
        let mut acc = Ideal::unit(&self.ring);
        for _ in 0..n {
            acc = acc.product(self).expect("same ring");
        }
        acc
    }

    /// Ideal generated by the `n`-th powers of the generators.
    pub fn generator_powers(&self, n: u32) -> Ideal {
        let g: Vec<SVec> = self.gens.iter().map(|x| self.ring.pow(x, n)).collect();
        Ideal::new(&self.ring, &g)
    }

    /// Is `f` in the radical? Decided by the Rabinowitsch trick:
    /// `1 ∈ (I, 1 - t f)` in `R[t]`.
    pub fn radical_member(&self, f: &SVec) -> bool {
        let ext = self.ring.adjoin("__rabinowitsch_t");
        let ctx = ext.ctx();
        let lift = |p: &SVec| -> SVec {
            ctx.from_terms(
                p.terms
                    .iter()
                    .map(|t| {
                        let mut e = t.exps.clone();
                        e.push(0);
                        Term {
                            comp: 0,
                            exps: e,
                            coeff: t.coeff.clone(),
                        }
                    })
                    .collect(),
            )
        };
        let t = ctx.var(ext.nvars() - 1);
        let mut gens: Vec<SVec> = self.gens.iter().map(lift).collect();
        gens.push(ctx.sub(&ctx.one(), &ctx.mul(&t, &lift(f))));
        Ideal::new(&ext, &gens).is_unit()
    }

    pub fn fmt(&self) -> String {
        let g: Vec<String> = self.gens.iter().map(|g| self.ring.fmt(g)).collect();
        format!("({})", g.join(", "))
    }
}

fn dedup(v: Vec<SVec>) -> Vec<SVec> {
    let mut out: Vec<SVec> = Vec::new();
    for x in v {
        if !out.contains(&x) {
            out.push(x);
        }
    }
    out
}

/// A ring homomorphism given by the images of the source variables.
#[derive(Clone, Debug)]
pub struct RingMap {
    source: Ring,
    target: Ring,
    images: Vec<SVec>,
}

impl RingMap {
    pub fn new(source: &Ring, target: &Ring, images: Vec<SVec>) -> Result<RingMap> {
        if images.len() != source.nvars() {
            return Err(Error::Dimension(format!(
                "{} variable images given for {} variables",
                images.len(),
                source.nvars()
            )));
        }
        let compatible =
            matches!((source.domain(), target.domain()), (Domain::Integers, _)) || source.domain() == target.domain();
        if !compatible {
            return Err(Error::RingMismatch(format!(
                "no coefficient map {} -> {}",
                source.domain().label(),
                target.domain().label()
            )));
        }
        if let (Domain::Integers, Domain::Prime(_)) | (Domain::Integers, Domain::Rationals) =
            (source.domain(), target.domain())
        {
            // fine: Z maps to every coefficient domain
        }
        let map = RingMap {
            source: source.clone(),
            target: target.clone(),
            images: images.iter().map(|p| target.nf(p)).collect(),
        };
        for q in source.defining() {
            if !map.apply(q).is_zero() {
                return Err(Error::IllDefined(format!(
                    "relation {} of {} does not map to zero in {}",
                    source.fmt(q),
                    source.label(),
                    target.label()
                )));
            }
        }
        Ok(map)
    }

    pub fn identity(ring: &Ring) -> RingMap {
        let images = (0..ring.nvars()).map(|i| ring.var(i)).collect();
        RingMap {
            source: ring.clone(),
            target: ring.clone(),
            images,
        }
    }

    pub fn source(&self) -> &Ring {
        &self.source
    }

    pub fn target(&self) -> &Ring {
        &self.target
    }

    pub fn images(&self) -> &[SVec] {
        &self.images
    }

    /// Image of a polynomial (component 0).
    pub fn apply(&self, p: &SVec) -> SVec {
        let t = &self.target;
        let tctx = t.ctx();
        let mut acc = SVec::zero();
        for term in &p.terms {
            let c: Coeff = tctx.domain.normalize(term.coeff.clone());
            let mut m = tctx.constant(c, 0);
            for (i, &e) in term.exps.iter().enumerate() {
                if e > 0 {
                    m = t.mul(&m, &t.pow(&self.images[i], e));
                }
            }
            acc = tctx.add(&acc, &m);
        }
        t.nf(&acc)
    }

    /// Entrywise image of a vector.
    pub fn apply_vec(&self, v: &SVec) -> SVec {
        if v.is_zero() {
            return SVec::zero();
        }
        let n = v.max_comp().unwrap() + 1;
        let sctx = self.source.ctx();
        let entries: Vec<SVec> = sctx.entries(v, n).iter().map(|p| self.apply(p)).collect();
        self.target.ctx().from_entries(&entries)
    }

    pub fn apply_ideal(&self, i: &Ideal) -> Result<Ideal> {
        self.source.same_as(i.ring())?;
        let g: Vec<SVec> = i.gens().iter().map(|p| self.apply(p)).collect();
        Ok(Ideal::new(&self.target, &g))
    }
}

/// Whether `c` is a unit of the coefficient domain (used when pruning).
pub fn is_unit_coeff(d: &Domain, c: &Coeff) -> bool {
    d.is_unit(c) && !c.is_zero() && (d.is_field() || c.abs().is_one())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qxy() -> Ring {
        Ring::polynomial(Domain::Rationals, &["x", "y"]).unwrap()
    }

    #[test]
    fn normal_form_one_step_division() {
        let r = qxy();
        let i = Ideal::parse(&r, &["x^2 - y"]).unwrap();
        let f = r.parse("x^2*y").unwrap();
        assert_eq!(r.fmt(&i.normal_form(&f)), "y^2");
        assert!(i.normal_form(&SVec::zero()).is_zero());
        let j = Ideal::parse(&r, &["x", "y"]).unwrap();
        assert!(j.normal_form(&r.var(0)).is_zero());
    }

    #[test]
    fn parser_handles_implicit_products() {
        let r = Ring::polynomial(Domain::Integers, &["t"]).unwrap();
        assert_eq!(r.fmt(&r.parse("3t - 1").unwrap()), "3*t - 1");
        assert_eq!(r.fmt(&r.parse("-(t+1)^2").unwrap()), "-t^2 - 2*t - 1");
        assert!(r.parse("t/2").is_err());
        assert!(r.parse("s").is_err());
    }

    #[test]
    fn radical_membership() {
        let r = qxy();
        let i = Ideal::parse(&r, &["x^3*y"]).unwrap();
        assert!(!i.radical_member(&r.var(0)));
        assert!(i.radical_member(&r.parse("x*y").unwrap()));
    }

    #[test]
    fn ideal_powers_and_containment() {
        let r = qxy();
        let i = Ideal::parse(&r, &["x", "y"]).unwrap();
        let sq = i.power(2);
        let shown: Vec<String> = sq.gens().iter().map(|g| r.fmt(g)).collect();
        assert_eq!(shown, vec!["x^2", "x*y", "y^2"]);
        assert!(i.contains(&sq).unwrap());
        assert!(!sq.contains(&i).unwrap());
        assert!(i.power(0).is_unit());
    }

    #[test]
    fn ring_map_checks_relations() {
        let z = Ring::integers();
        let zt = Ring::polynomial(Domain::Integers, &["t"]).unwrap();
        let s = zt.quotient(&[zt.parse("3t - 1").unwrap()]);
        let theta = RingMap::new(&z, &s, vec![]).unwrap();
        assert_eq!(theta.apply(&z.constant(2)), s.constant(2));
        let q = Ring::polynomial(Domain::Rationals, &["x"]).unwrap();
        let q3 = q.quotient(&[q.parse("x^3").unwrap()]);
        // x -> x is fine, but Q[x]/(x^3) -> Q[x] sending x to x is not
        assert!(RingMap::new(&q, &q3, vec![q3.var(0)]).is_ok());
        assert!(RingMap::new(&q3, &q, vec![q.var(0)]).is_err());
    }
}
