//! Sparse polynomials and free-module vectors.
//!
//! A single type, [`SVec`], stores both: every term carries a component index,
//! and ring elements simply live in component 0. Terms are kept sorted in
//! descending order for the position-over-term order (lower component first,
//! then the monomial order of the ring) and never carry zero coefficients.

use std::cmp::Ordering;
use std::fmt::Write as _;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::coeff::{Coeff, Domain};

pub type Exps = Vec<u32>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MonomialOrder {
    /// Degree reverse lexicographic.
    Grevlex,
    Lex,
    /// Elimination order: grevlex on the first `k` variables, ties broken by
    /// grevlex on the rest.
    Elim(usize),
}

fn grevlex(a: &[u32], b: &[u32]) -> Ordering {
    let da: u64 = a.iter().map(|&e| e as u64).sum();
    let db: u64 = b.iter().map(|&e| e as u64).sum();
    match da.cmp(&db) {
        Ordering::Equal => {}
        o => return o,
    }
    for i in (0..a.len()).rev() {
        match a[i].cmp(&b[i]) {
            Ordering::Equal => continue,
            o => return o.reverse(),
        }
    }
    Ordering::Equal
}

impl MonomialOrder {
    pub fn cmp(&self, a: &[u32], b: &[u32]) -> Ordering {
        match self {
            MonomialOrder::Grevlex => grevlex(a, b),
            MonomialOrder::Lex => a.cmp(b),
            MonomialOrder::Elim(k) => {
                let k = (*k).min(a.len());
                match grevlex(&a[..k], &b[..k]) {
                    Ordering::Equal => grevlex(&a[k..], &b[k..]),
                    o => o,
                }
            }
        }
    }
}

/// The ambient polynomial ring: coefficient domain, variables and order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PolyCtx {
    pub domain: Domain,
    pub vars: Vec<String>,
    pub order: MonomialOrder,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Term {
    pub comp: usize,
    pub exps: Exps,
    pub coeff: Coeff,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct SVec {
    pub terms: Vec<Term>,
}

pub fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

pub fn lcm_exps(a: &[u32], b: &[u32]) -> Exps {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

pub fn sub_exps(a: &[u32], b: &[u32]) -> Exps {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn add_exps(a: &[u32], b: &[u32]) -> Exps {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

impl PolyCtx {
    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn one_exps(&self) -> Exps {
        vec![0; self.nvars()]
    }

    /// Position-over-term comparison: lower component is larger.
    pub fn cmp_key(&self, ca: usize, a: &[u32], cb: usize, b: &[u32]) -> Ordering {
        match cb.cmp(&ca) {
            Ordering::Equal => self.order.cmp(a, b),
            o => o,
        }
    }

    pub fn constant(&self, c: Coeff, comp: usize) -> SVec {
        let c = self.domain.normalize(c);
        if c.is_zero() {
            return SVec::zero();
        }
        SVec {
            terms: vec![Term {
                comp,
                exps: self.one_exps(),
                coeff: c,
            }],
        }
    }

    pub fn one(&self) -> SVec {
        self.constant(Coeff::one(), 0)
    }

    pub fn unit_vector(&self, comp: usize) -> SVec {
        self.constant(Coeff::one(), comp)
    }

    pub fn var(&self, i: usize) -> SVec {
        let mut exps = self.one_exps();
        exps[i] = 1;
        SVec {
            terms: vec![Term {
                comp: 0,
                exps,
                coeff: Coeff::one(),
            }],
        }
    }

    pub fn monomial(&self, coeff: Coeff, exps: Exps, comp: usize) -> SVec {
        let coeff = self.domain.normalize(coeff);
        if coeff.is_zero() {
            return SVec::zero();
        }
        SVec {
            terms: vec![Term { comp, exps, coeff }],
        }
    }

    pub fn add(&self, a: &SVec, b: &SVec) -> SVec {
        self.axpy(a, &Coeff::one(), None, b)
    }

    pub fn sub(&self, a: &SVec, b: &SVec) -> SVec {
        self.axpy(a, &-Coeff::one(), None, b)
    }

    pub fn neg(&self, a: &SVec) -> SVec {
        self.scale(a, &-Coeff::one())
    }

    /// `a + c * x^shift * b` computed by a single merge.
    pub fn axpy(&self, a: &SVec, c: &Coeff, shift: Option<&[u32]>, b: &SVec) -> SVec {
        let c = self.domain.normalize(c.clone());
        if c.is_zero() || b.is_zero() {
            return a.clone();
        }
        let shifted: Vec<(usize, Exps, Coeff)> = b
            .terms
            .iter()
            .map(|t| {
                let e = match shift {
                    Some(s) => add_exps(&t.exps, s),
                    None => t.exps.clone(),
                };
                (t.comp, e, self.domain.mul(&t.coeff, &c))
            })
            .collect();
        let mut out = Vec::with_capacity(a.terms.len() + shifted.len());
        let (mut i, mut j) = (0, 0);
        while i < a.terms.len() && j < shifted.len() {
            let ta = &a.terms[i];
            let (cb, eb, kb) = &shifted[j];
            match self.cmp_key(ta.comp, &ta.exps, *cb, eb) {
                Ordering::Greater => {
                    out.push(ta.clone());
                    i += 1;
                }
                Ordering::Less => {
                    if !kb.is_zero() {
                        out.push(Term {
                            comp: *cb,
                            exps: eb.clone(),
                            coeff: kb.clone(),
                        });
                    }
                    j += 1;
                }
                Ordering::Equal => {
                    let s = self.domain.add(&ta.coeff, kb);
                    if !s.is_zero() {
                        out.push(Term {
                            comp: ta.comp,
                            exps: ta.exps.clone(),
                            coeff: s,
                        });
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a.terms[i..].iter().cloned());
        for (cb, eb, kb) in &shifted[j..] {
            if !kb.is_zero() {
                out.push(Term {
                    comp: *cb,
                    exps: eb.clone(),
                    coeff: kb.clone(),
                });
            }
        }
        SVec { terms: out }
    }

    pub fn scale(&self, a: &SVec, c: &Coeff) -> SVec {
        let c = self.domain.normalize(c.clone());
        if c.is_zero() {
            return SVec::zero();
        }
        SVec {
            terms: a
                .terms
                .iter()
                .filter_map(|t| {
                    let k = self.domain.mul(&t.coeff, &c);
                    (!k.is_zero()).then(|| Term {
                        comp: t.comp,
                        exps: t.exps.clone(),
                        coeff: k,
                    })
                })
                .collect(),
        }
    }

    /// Multiplies a vector by a polynomial (the components of `p` are ignored).
    pub fn mul_poly(&self, p: &SVec, v: &SVec) -> SVec {
        let mut acc = SVec::zero();
        for t in &p.terms {
            acc = self.axpy(&acc, &t.coeff, Some(&t.exps), v);
        }
        acc
    }

    /// Product of two polynomials living in component 0.
    pub fn mul(&self, a: &SVec, b: &SVec) -> SVec {
        self.mul_poly(a, b)
    }

    pub fn pow(&self, a: &SVec, n: u32) -> SVec {
        let mut acc = self.one();
        for _ in 0..n {
            acc = self.mul(&acc, a);
        }
        acc
    }

    /// `v * M`, where the rows of `M` are vectors and `v` selects rows by component.
    pub fn apply(&self, v: &SVec, rows: &[SVec]) -> SVec {
        let mut acc = SVec::zero();
        for t in &v.terms {
            acc = self.axpy(&acc, &t.coeff, Some(&t.exps), &rows[t.comp]);
        }
        acc
    }

    /// Re-sorts the terms of an arbitrary list, combining duplicates.
    pub fn from_terms(&self, terms: Vec<Term>) -> SVec {
        let mut terms: Vec<Term> = terms
            .into_iter()
            .map(|mut t| {
                t.coeff = self.domain.normalize(t.coeff);
                t
            })
            .filter(|t| !t.coeff.is_zero())
            .collect();
        terms.sort_by(|a, b| self.cmp_key(b.comp, &b.exps, a.comp, &a.exps));
        let mut out: Vec<Term> = Vec::with_capacity(terms.len());
        for t in terms {
            if let Some(last) = out.last_mut() {
                if last.comp == t.comp && last.exps == t.exps {
                    last.coeff = self.domain.add(&last.coeff, &t.coeff);
                    if last.coeff.is_zero() {
                        out.pop();
                    }
                    continue;
                }
            }
            out.push(t);
        }
        SVec { terms: out }
    }

    /// Renumbers components through `f`; terms mapped to `None` are dropped.
    pub fn remap(&self, v: &SVec, f: impl Fn(usize) -> Option<usize>) -> SVec {
        self.from_terms(
            v.terms
                .iter()
                .filter_map(|t| {
                    f(t.comp).map(|c| Term {
                        comp: c,
                        exps: t.exps.clone(),
                        coeff: t.coeff.clone(),
                    })
                })
                .collect(),
        )
    }

    /// Shifts every component by `offset`.
    pub fn shift_comps(&self, v: &SVec, offset: usize) -> SVec {
        SVec {
            terms: v
                .terms
                .iter()
                .map(|t| Term {
                    comp: t.comp + offset,
                    exps: t.exps.clone(),
                    coeff: t.coeff.clone(),
                })
                .collect(),
        }
    }

    /// Embeds a polynomial (component 0) as the `comp` entry of a vector.
    pub fn at_comp(&self, p: &SVec, comp: usize) -> SVec {
        self.shift_comps(&self.entry(p, 0), comp)
    }

    /// The polynomial in component `comp` of `v`.
    pub fn entry(&self, v: &SVec, comp: usize) -> SVec {
        SVec {
            terms: v
                .terms
                .iter()
                .filter(|t| t.comp == comp)
                .map(|t| Term {
                    comp: 0,
                    exps: t.exps.clone(),
                    coeff: t.coeff.clone(),
                })
                .collect(),
        }
    }

    /// Splits `v` into per-component polynomials for components `0..n`.
    pub fn entries(&self, v: &SVec, n: usize) -> Vec<SVec> {
        let mut out = vec![SVec::zero(); n];
        for t in &v.terms {
            if t.comp < n {
                out[t.comp].terms.push(Term {
                    comp: 0,
                    exps: t.exps.clone(),
                    coeff: t.coeff.clone(),
                });
            }
        }
        out
    }

    /// Builds a vector from per-component polynomials.
    pub fn from_entries(&self, entries: &[SVec]) -> SVec {
        let mut terms = Vec::new();
        for (c, p) in entries.iter().enumerate() {
            for t in &p.terms {
                terms.push(Term {
                    comp: c,
                    exps: t.exps.clone(),
                    coeff: t.coeff.clone(),
                });
            }
        }
        SVec { terms }
    }

    pub fn is_constant(&self, p: &SVec) -> Option<Coeff> {
        match p.terms.as_slice() {
            [] => Some(Coeff::zero()),
            [t] if t.exps.iter().all(|&e| e == 0) => Some(t.coeff.clone()),
            _ => None,
        }
    }

    /// Canonical string form of a polynomial (component 0 only).
    pub fn fmt_poly(&self, p: &SVec) -> String {
        if p.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (i, t) in p.terms.iter().enumerate() {
            let neg = t.coeff.is_negative();
            let abs = t.coeff.abs();
            if i == 0 {
                if neg {
                    s.push('-');
                }
            } else if neg {
                s.push_str(" - ");
            } else {
                s.push_str(" + ");
            }
            let mono: Vec<String> = t
                .exps
                .iter()
                .enumerate()
                .filter(|(_, e)| **e > 0)
                .map(|(v, e)| {
                    if *e == 1 {
                        self.vars[v].clone()
                    } else {
                        format!("{}^{}", self.vars[v], e)
                    }
                })
                .collect();
            if mono.is_empty() {
                let _ = write!(s, "{}", abs);
            } else {
                if !abs.is_one() {
                    let _ = write!(s, "{}*", abs);
                }
                s.push_str(&mono.join("*"));
            }
        }
        s
    }

    pub fn fmt_vector(&self, v: &SVec, n: usize) -> Vec<String> {
        self.entries(v, n).iter().map(|p| self.fmt_poly(p)).collect()
    }

    pub fn total_degree(&self, p: &SVec) -> Option<u32> {
        p.terms.iter().map(|t| t.exps.iter().sum()).max()
    }

    /// Is `p` homogeneous for the standard grading?
    pub fn is_homogeneous(&self, p: &SVec) -> bool {
        let mut degs = p.terms.iter().map(|t| t.exps.iter().sum::<u32>());
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }
}

impl SVec {
    pub fn zero() -> Self {
        SVec { terms: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lead(&self) -> Option<&Term> {
        self.terms.first()
    }

    pub fn max_comp(&self) -> Option<usize> {
        self.terms.iter().map(|t| t.comp).max()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::int;

    fn ctx() -> PolyCtx {
        PolyCtx {
            domain: Domain::Rationals,
            vars: vec!["x".into(), "y".into()],
            order: MonomialOrder::Grevlex,
        }
    }

    #[test]
    fn grevlex_breaks_ties_on_last_variable() {
        let o = MonomialOrder::Grevlex;
        // x*y > y^2 and x^2 > x*y
        assert_eq!(o.cmp(&[1, 1], &[0, 2]), Ordering::Greater);
        assert_eq!(o.cmp(&[2, 0], &[1, 1]), Ordering::Greater);
        assert_eq!(o.cmp(&[0, 3], &[2, 0]), Ordering::Greater);
    }

    #[test]
    fn arithmetic_cancels() {
        let c = ctx();
        let x = c.var(0);
        let y = c.var(1);
        let s = c.add(&x, &y);
        let d = c.sub(&s, &y);
        assert_eq!(d, x);
        let sq = c.mul(&s, &s);
        assert_eq!(c.fmt_poly(&sq), "x^2 + 2*x*y + y^2");
        let z = c.sub(&sq, &sq);
        assert!(z.is_zero());
        assert_eq!(c.fmt_poly(&c.constant(int(-3), 0)), "-3");
    }
}
