//! Buchberger completion for submodules of free modules over `K[x_1..x_n]`.
//!
//! Over a field this is the classical algorithm. Over `Z` it computes strong
//! Gröbner bases: every pair contributes its S-vector and, when neither leading
//! coefficient divides the other, its gcd vector, and reduction uses Euclidean
//! remainders so that normal forms are canonical.
//!
//! Module orders are position-over-term, which makes elimination of leading
//! components free: this is how syzygies and cofactor lifts are computed.

use std::cmp::Ordering;

use num_traits::{One, Zero};

use crate::coeff::{Coeff, Domain};
use crate::hermite;
use crate::poly::{divides, lcm_exps, sub_exps, PolyCtx, SVec, Term};

#[derive(Clone, Debug)]
struct Pair {
    i: usize,
    j: usize,
    comp: usize,
    lcm: Vec<u32>,
}

fn lead(v: &SVec) -> &Term {
    v.lead().expect("nonzero vector")
}

/// Finds a basis element able to reduce the term, returning it with the
/// multiplier to subtract.
fn find_reducer<'a>(ctx: &PolyCtx, t: &Term, basis: &'a [SVec], skip: Option<usize>) -> Option<(&'a SVec, Coeff)> {
    for (k, g) in basis.iter().enumerate() {
        if Some(k) == skip {
            continue;
        }
        let lg = lead(g);
        if lg.comp != t.comp || !divides(&lg.exps, &t.exps) {
            continue;
        }
        let (q, _) = ctx.domain.quo_rem(&t.coeff, &lg.coeff);
        if !q.is_zero() {
            return Some((g, q));
        }
    }
    None
}

/// Full normal form of `v` modulo `basis` (head and tail).
pub fn reduce(ctx: &PolyCtx, v: &SVec, basis: &[SVec]) -> SVec {
    reduce_skip(ctx, v, basis, None)
}

fn reduce_skip(ctx: &PolyCtx, v: &SVec, basis: &[SVec], skip: Option<usize>) -> SVec {
    let mut f = v.clone();
    let mut done: Vec<Term> = Vec::new();
    while let Some(t) = f.lead().cloned() {
        match find_reducer(ctx, &t, basis, skip) {
            Some((g, q)) => {
                let shift = sub_exps(&t.exps, &lead(g).exps);
                f = ctx.axpy(&f, &-q, Some(&shift), g);
            }
            None => {
                done.push(t);
                f.terms.remove(0);
            }
        }
    }
    SVec { terms: done }
}

/// Reduces only until the leading term is irreducible.
fn reduce_top(ctx: &PolyCtx, v: &SVec, basis: &[SVec]) -> SVec {
    let mut f = v.clone();
    while let Some(t) = f.lead().cloned() {
        match find_reducer(ctx, &t, basis, None) {
            Some((g, q)) => {
                let shift = sub_exps(&t.exps, &lead(g).exps);
                f = ctx.axpy(&f, &-q, Some(&shift), g);
            }
            None => break,
        }
    }
    f
}

fn normalize_lead(ctx: &PolyCtx, v: SVec) -> SVec {
    match v.lead() {
        None => v,
        Some(t) => {
            let u = ctx.domain.normalizing_unit(&t.coeff);
            if u.is_one() {
                v
            } else {
                ctx.scale(&v, &u)
            }
        }
    }
}

fn pair_vectors(ctx: &PolyCtx, f: &SVec, g: &SVec, lcm: &[u32]) -> Vec<SVec> {
    let lf = lead(f);
    let lg = lead(g);
    let sf = sub_exps(lcm, &lf.exps);
    let sg = sub_exps(lcm, &lg.exps);
    let d = &ctx.domain;
    let mut out = Vec::new();
    match d {
        Domain::Integers => {
            let c = d.lcm(&lf.coeff, &lg.coeff);
            let a = d.exact_div(&c, &lf.coeff);
            let b = d.exact_div(&c, &lg.coeff);
            let s = ctx.axpy(&ctx.axpy(&SVec::zero(), &a, Some(&sf), f), &-b, Some(&sg), g);
            out.push(s);
            if !d.divides(&lf.coeff, &lg.coeff) && !d.divides(&lg.coeff, &lf.coeff) {
                let (_, s1, t1) = d.gcdext(&lf.coeff, &lg.coeff);
                let gv = ctx.axpy(&ctx.axpy(&SVec::zero(), &s1, Some(&sf), f), &t1, Some(&sg), g);
                out.push(gv);
            }
        }
        _ => {
            let a = d.inverse(&lf.coeff).expect("field");
            let b = d.inverse(&lg.coeff).expect("field");
            let s = ctx.axpy(&ctx.axpy(&SVec::zero(), &a, Some(&sf), f), &-b, Some(&sg), g);
            out.push(s);
        }
    }
    out
}

fn is_polynomial(v: &SVec) -> bool {
    v.terms.iter().all(|t| t.comp == v.terms[0].comp)
}

/// Reduced Gröbner basis (strong over `Z`) of the submodule spanned by `gens`.
/// The output is sorted by decreasing leading term and is deterministic.
pub fn groebner(ctx: &PolyCtx, gens: &[SVec]) -> Vec<SVec> {
    if ctx.nvars() == 0 && ctx.domain == Domain::Integers {
        return hermite::hermite_basis(ctx, gens);
    }
    buchberger(ctx, gens)
}

/// The generic completion, also used to cross-check the Hermite fast path.
pub fn buchberger(ctx: &PolyCtx, gens: &[SVec]) -> Vec<SVec> {
    let mut basis: Vec<SVec> = Vec::new();
    let mut pairs: Vec<Pair> = Vec::new();
    let mut gens: Vec<SVec> = gens.iter().filter(|g| !g.is_zero()).cloned().collect();
    // smallest leading terms first keeps intermediate growth down
    gens.sort_by(|a, b| {
        let (la, lb) = (lead(a), lead(b));
        ctx.cmp_key(la.comp, &la.exps, lb.comp, &lb.exps)
    });

    let insert = |basis: &mut Vec<SVec>, pairs: &mut Vec<Pair>, r: SVec| {
        let r = normalize_lead(ctx, r);
        let lr = lead(&r).clone();
        let idx = basis.len();
        for (k, b) in basis.iter().enumerate() {
            let lb = lead(b);
            if lb.comp != lr.comp {
                continue;
            }
            let lcm = lcm_exps(&lb.exps, &lr.exps);
            // product criterion, valid for polynomials over a field
            if ctx.domain.is_field()
                && is_polynomial(b)
                && is_polynomial(&r)
                && lb.exps.iter().zip(&lr.exps).all(|(a, c)| *a == 0 || *c == 0)
            {
                continue;
            }
            pairs.push(Pair {
                i: k,
                j: idx,
                comp: lr.comp,
                lcm,
            });
        }
        basis.push(r);
    };

    for g in gens {
        let r = reduce_top(ctx, &g, &basis);
        if !r.is_zero() {
            insert(&mut basis, &mut pairs, r);
        }
    }

    while !pairs.is_empty() {
        // normal selection strategy: smallest lcm first
        let mut best = 0;
        for k in 1..pairs.len() {
            let (a, b) = (&pairs[k], &pairs[best]);
            if ctx.cmp_key(a.comp, &a.lcm, b.comp, &b.lcm) == Ordering::Less {
                best = k;
            }
        }
        let p = pairs.swap_remove(best);
        let vs = pair_vectors(ctx, &basis[p.i], &basis[p.j], &p.lcm);
        for v in vs {
            let r = reduce_top(ctx, &v, &basis);
            if !r.is_zero() {
                insert(&mut basis, &mut pairs, r);
            }
        }
    }
    interreduce(ctx, basis)
}

fn interreduce(ctx: &PolyCtx, basis: Vec<SVec>) -> Vec<SVec> {
    let d = &ctx.domain;
    let n = basis.len();
    let mut keep = vec![true; n];
    for i in 0..n {
        let li = lead(&basis[i]);
        for j in 0..n {
            if i == j || !keep[j] {
                continue;
            }
            let lj = lead(&basis[j]);
            if lj.comp == li.comp && divides(&lj.exps, &li.exps) && d.divides(&lj.coeff, &li.coeff) {
                // identical leading terms: keep the earlier one
                if lj.exps == li.exps && lj.coeff == li.coeff && j > i {
                    continue;
                }
                keep[i] = false;
                break;
            }
        }
    }
    let minimal: Vec<SVec> = basis
        .into_iter()
        .zip(keep)
        .filter_map(|(b, k)| k.then_some(b))
        .collect();
    let mut out: Vec<SVec> = Vec::with_capacity(minimal.len());
    for (i, g) in minimal.iter().enumerate() {
        let lt = lead(g).clone();
        let tail = SVec {
            terms: g.terms[1..].to_vec(),
        };
        let tail = reduce_skip(ctx, &tail, &minimal, Some(i));
        let mut terms = vec![lt];
        terms.extend(tail.terms);
        out.push(normalize_lead(ctx, SVec { terms }));
    }
    out.sort_by(|a, b| {
        let (la, lb) = (lead(a), lead(b));
        ctx.cmp_key(lb.comp, &lb.exps, la.comp, &la.exps)
            .then_with(|| lb.coeff.cmp(&la.coeff))
    });
    out
}

/// A Gröbner basis of `rows[i] + e_{head+i}` together with untracked head
/// generators. Elements whose leading component is at least `head` carry the
/// syzygies; reducing `(v | 0)` yields cofactors in the tail.
#[derive(Clone, Debug)]
pub struct TrackedBasis {
    pub head: usize,
    pub count: usize,
    pub basis: Vec<SVec>,
}

/// `untracked` are extra head generators (relations of the ambient quotient);
/// `tail_modulo` are polynomials by which tail components are reduced.
pub fn tracked_basis(
    ctx: &PolyCtx,
    rows: &[SVec],
    head: usize,
    untracked: &[SVec],
    tail_modulo: &[SVec],
) -> TrackedBasis {
    let mut gens = Vec::new();
    for (i, r) in rows.iter().enumerate() {
        gens.push(ctx.add(r, &ctx.unit_vector(head + i)));
    }
    gens.extend(untracked.iter().cloned());
    for q in tail_modulo {
        for i in 0..rows.len() {
            gens.push(ctx.at_comp(q, head + i));
        }
    }
    TrackedBasis {
        head,
        count: rows.len(),
        basis: groebner(ctx, &gens),
    }
}

impl TrackedBasis {
    /// Generators of the syzygy module, in coordinates `0..count`.
    pub fn syzygies(&self, ctx: &PolyCtx) -> Vec<SVec> {
        self.basis
            .iter()
            .filter(|g| lead(g).comp >= self.head)
            .map(|g| ctx.remap(g, |c| c.checked_sub(self.head)))
            .filter(|g| !g.is_zero())
            .collect()
    }

    /// Coefficients `c` with `v = sum c_i rows_i` modulo the untracked part, or
    /// `None` when `v` is not in the span.
    pub fn lift(&self, ctx: &PolyCtx, v: &SVec) -> Option<SVec> {
        let r = reduce(ctx, v, &self.basis);
        if r.terms.iter().any(|t| t.comp < self.head) {
            return None;
        }
        let tail = ctx.remap(&r, |c| c.checked_sub(self.head));
        Some(ctx.neg(&tail))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::int;
    use crate::poly::MonomialOrder;

    fn qxy(order: MonomialOrder, vars: &[&str]) -> PolyCtx {
        PolyCtx {
            domain: Domain::Rationals,
            vars: vars.iter().map(|s| s.to_string()).collect(),
            order,
        }
    }

    #[test]
    fn univariate_gcd() {
        let c = qxy(MonomialOrder::Grevlex, &["x"]);
        let x = c.var(0);
        let one = c.one();
        let a = c.sub(&c.mul(&x, &x), &one);
        let b = c.sub(&x, &one);
        let gb = groebner(&c, &[a, b.clone()]);
        assert_eq!(gb, vec![b]);
    }

    #[test]
    fn lex_elimination_example() {
        // y > x under lex with variable order [y, x]
        let c = qxy(MonomialOrder::Lex, &["y", "x"]);
        let y = c.var(0);
        let x = c.var(1);
        let one = c.one();
        let f1 = c.sub(&y, &c.mul(&x, &x));
        let f2 = c.sub(&c.mul(&x, &y), &one);
        let gb = groebner(&c, &[f1, f2]);
        let shown: Vec<String> = gb.iter().map(|g| c.fmt_poly(g)).collect();
        assert_eq!(shown, vec!["y - x^2", "x^3 - 1"]);
    }

    #[test]
    fn integer_constants_reduce_to_gcd() {
        let c = PolyCtx {
            domain: Domain::Integers,
            vars: vec!["t".into()],
            order: MonomialOrder::Grevlex,
        };
        let gb = groebner(&c, &[c.constant(int(6), 0), c.constant(int(4), 0)]);
        assert_eq!(gb, vec![c.constant(int(2), 0)]);
    }

    #[test]
    fn strong_basis_over_z() {
        // (6, 3t - 1) in Z[t]: 2 = 6 - ... and t - ... so the ideal is (2, t + 1)
        let c = PolyCtx {
            domain: Domain::Integers,
            vars: vec!["t".into()],
            order: MonomialOrder::Grevlex,
        };
        let t = c.var(0);
        let f = c.sub(&c.scale(&t, &int(3)), &c.one());
        let gb = groebner(&c, &[c.constant(int(6), 0), f]);
        let shown: Vec<String> = gb.iter().map(|g| c.fmt_poly(g)).collect();
        assert_eq!(shown, vec!["t + 1", "2"]);
        // normal form of t is -1 = 1 mod 2
        assert_eq!(c.fmt_poly(&reduce(&c, &t, &gb)), "1");
    }

    #[test]
    fn koszul_syzygy_of_x_y() {
        let c = qxy(MonomialOrder::Grevlex, &["x", "y"]);
        let rows = vec![c.var(0), c.var(1)];
        let tb = tracked_basis(&c, &rows, 1, &[], &[]);
        let syz = tb.syzygies(&c);
        assert_eq!(syz.len(), 1);
        assert_eq!(c.fmt_vector(&syz[0], 2), vec!["y", "-x"]);
        let lifted = tb.lift(&c, &c.mul(&c.var(0), &c.var(1))).unwrap();
        let back = c.apply(&lifted, &rows);
        assert_eq!(back, c.mul(&c.var(0), &c.var(1)));
        assert!(tb.lift(&c, &c.one()).is_none());
    }
}
