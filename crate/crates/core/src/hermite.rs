//! Hermite and Smith normal forms over `Z`.
//!
//! Over a ring with no variables and integer coefficients the reduced strong
//! Gröbner basis of a submodule of `Z^g` is exactly its row Hermite normal
//! form, so the Gröbner engine dispatches here for those rings.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::coeff::big;
use crate::poly::{PolyCtx, SVec, Term};

pub type IntMatrix = Vec<Vec<BigInt>>;

pub fn to_dense(rows: &[SVec], ncols: usize) -> IntMatrix {
    rows.iter()
        .map(|r| {
            let mut row = vec![BigInt::zero(); ncols];
            for t in &r.terms {
                row[t.comp] = t.coeff.numer().clone();
            }
            row
        })
        .collect()
}

/// Row Hermite normal form: pivots positive and strictly increasing in column,
/// entries above each pivot reduced into `[0, pivot)`. Zero rows are dropped.
pub fn hermite(mut m: IntMatrix, ncols: usize) -> IntMatrix {
    let mut out: IntMatrix = Vec::new();
    for col in 0..ncols {
        // fold every row with a nonzero entry in `col` into a single pivot row
        let mut pivot: Option<Vec<BigInt>> = None;
        let mut rest: IntMatrix = Vec::new();
        for row in m.drain(..) {
            if row[col].is_zero() {
                rest.push(row);
                continue;
            }
            match pivot.take() {
                None => pivot = Some(row),
                Some(p) => {
                    let (a, b) = (&p[col], &row[col]);
                    let e = a.extended_gcd(b);
                    let g = e.gcd.clone();
                    let (ua, ub) = (a / &g, b / &g);
                    // [x y; -b/g a/g] is unimodular
                    let new_p: Vec<BigInt> = p.iter().zip(&row).map(|(u, v)| &e.x * u + &e.y * v).collect();
                    let killed: Vec<BigInt> = p.iter().zip(&row).map(|(u, v)| &ua * v - &ub * u).collect();
                    debug_assert!(killed[col].is_zero());
                    rest.push(killed);
                    pivot = Some(new_p);
                }
            }
        }
        m = rest;
        if let Some(mut p) = pivot {
            if p[col].is_negative() {
                p.iter_mut().for_each(|x| *x = -x.clone());
            }
            for prev in out.iter_mut() {
                let (q, _) = prev[col].div_mod_floor(&p[col]);
                if !q.is_zero() {
                    for (x, y) in prev.iter_mut().zip(&p) {
                        *x -= &q * y;
                    }
                }
            }
            out.push(p);
        }
    }
    out
}

pub fn hermite_basis(ctx: &PolyCtx, gens: &[SVec]) -> Vec<SVec> {
    let ncols = gens.iter().filter_map(|g| g.max_comp()).max().map_or(0, |c| c + 1);
    let h = hermite(to_dense(gens, ncols), ncols);
    h.into_iter()
        .map(|row| SVec {
            terms: row
                .into_iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .map(|(c, x)| Term {
                    comp: c,
                    exps: ctx.one_exps(),
                    coeff: big(x),
                })
                .collect(),
        })
        .collect()
}

/// Invariant factors of the Smith normal form (nonzero diagonal entries, each
/// dividing the next). The rank deficiency `ncols - len` counts free summands.
pub fn smith_invariants(m: &IntMatrix, ncols: usize) -> Vec<BigInt> {
    let mut a: IntMatrix = m.iter().filter(|r| r.iter().any(|x| !x.is_zero())).cloned().collect();
    let mut diag = Vec::new();
    let mut cols: Vec<usize> = (0..ncols).collect();
    loop {
        if a.is_empty() || cols.is_empty() {
            break;
        }
        // choose the smallest nonzero entry as pivot
        let mut best: Option<(usize, usize)> = None;
        for (i, row) in a.iter().enumerate() {
            for &j in &cols {
                if !row[j].is_zero() && best.is_none_or(|(bi, bj)| row[j].abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        let p = a[pi][pj].clone();
        let mut clean = true;
        // clear the pivot column
        for i in 0..a.len() {
            if i == pi || a[i][pj].is_zero() {
                continue;
            }
            let q = a[i][pj].div_floor(&p);
            let prow = a[pi].clone();
            for (x, y) in a[i].iter_mut().zip(&prow) {
                *x -= &q * y;
            }
            if !a[i][pj].is_zero() {
                clean = false;
            }
        }
        // clear the pivot row
        for &j in &cols {
            if j == pj || a[pi][j].is_zero() {
                continue;
            }
            let q = a[pi][j].div_floor(&p);
            for row in a.iter_mut() {
                let y = row[pj].clone();
                row[j] -= &q * y;
            }
            if !a[pi][j].is_zero() {
                clean = false;
            }
        }
        if !clean {
            continue;
        }
        // pivot must divide the remaining block; otherwise fold a row in
        let mut fixed = false;
        'outer: for i in 0..a.len() {
            if i == pi {
                continue;
            }
            for &j in &cols {
                if j != pj && !(&a[i][j] % &p).is_zero() {
                    let row = a[i].clone();
                    for (x, y) in a[pi].iter_mut().zip(&row) {
                        *x += y;
                    }
                    fixed = true;
                    break 'outer;
                }
            }
        }
        if fixed {
            continue;
        }
        diag.push(p.abs());
        a.remove(pi);
        cols.retain(|&j| j != pj);
        a.retain(|r| cols.iter().any(|&j| !r[j].is_zero()));
    }
    diag.sort();
    diag
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        rows.iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    }

    #[test]
    fn hermite_of_two_by_two() {
        let h = hermite(m(&[&[2, 4], &[4, 2]]), 2);
        assert_eq!(h, m(&[&[2, 4], &[0, 6]]));
    }

    #[test]
    fn smith_of_diagonalizable() {
        let d = smith_invariants(&m(&[&[2, 4], &[4, 2]]), 2);
        assert_eq!(d, vec![BigInt::from(2), BigInt::from(6)]);
        let d = smith_invariants(&m(&[&[4, 0], &[0, 6]]), 2);
        assert_eq!(d, vec![BigInt::from(2), BigInt::from(12)]);
    }
}
