//! Brute-force enumeration over finite rings. Modules are handled as sets of
//! vectors, so nothing here goes through Gröbner bases or Smith forms; only
//! ring addition and multiplication are borrowed from the library.

use std::collections::hash_map::Entry;
use std::collections::{HashMap, HashSet, VecDeque};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::complex::{derived_hom, derived_tensor, BoundedComplex};
use crate::error::{Error, Result};
use crate::module::FpModule;
use crate::poly::SVec;
use crate::ring::Ring;

type Vector = Vec<usize>;

/// Addition and multiplication tables of a finite ring.
pub struct FiniteRing {
    elems: Vec<SVec>,
    add: Vec<Vec<usize>>,
    mul: Vec<Vec<usize>>,
    index: HashMap<String, usize>,
    ring: Ring,
}

impl FiniteRing {
    /// Closes `{0, 1, variables}` under `+` and `·`. Fails past `cap` elements.
    pub fn enumerate(ring: &Ring, cap: usize) -> Result<Self> {
        let mut elems: Vec<SVec> = Vec::new();
        let mut index = HashMap::new();
        let mut seeds = vec![ring.zero(), ring.one()];
        seeds.extend((0..ring.nvars()).map(|i| ring.var(i)));
        for s in seeds {
            let s = ring.nf(&s);
            let key = ring.fmt(&s);
            if let Entry::Vacant(e) = index.entry(key) {
                e.insert(elems.len());
                elems.push(s);
            }
        }
        let mut done = 0;
        // every pair (i, j) with max(i, j) >= done is new work
        while done < elems.len() {
            let n = elems.len();
            for i in 0..n {
                for j in 0..n {
                    if i.max(j) < done {
                        continue;
                    }
                    for v in [ring.add(&elems[i], &elems[j]), ring.mul(&elems[i], &elems[j])] {
                        let key = ring.fmt(&v);
                        if let Entry::Vacant(e) = index.entry(key) {
                            if elems.len() >= cap {
                                return Err(Error::Unsupported(format!(
                                    "{} has more than {cap} elements",
                                    ring.label()
                                )));
                            }
                            e.insert(elems.len());
                            elems.push(v);
                        }
                    }
                }
            }
            done = n;
        }
        let n = elems.len();
        let lookup = |v: SVec| index[&ring.fmt(&v)];
        let add = (0..n)
            .map(|i| (0..n).map(|j| lookup(ring.add(&elems[i], &elems[j]))).collect())
            .collect();
        let mul = (0..n)
            .map(|i| (0..n).map(|j| lookup(ring.mul(&elems[i], &elems[j]))).collect())
            .collect();
        Ok(FiniteRing {
            elems,
            add,
            mul,
            index,
            ring: ring.clone(),
        })
    }

    pub fn size(&self) -> usize {
        self.elems.len()
    }

    fn element(&self, p: &SVec) -> usize {
        self.index[&self.ring.fmt(&self.ring.nf(p))]
    }

    /// The coordinates of a library vector of length `n`.
    fn vector(&self, v: &SVec, n: usize) -> Vector {
        self.ring.ctx().entries(v, n).iter().map(|e| self.element(e)).collect()
    }

    fn vadd(&self, a: &[usize], b: &[usize]) -> Vector {
        a.iter().zip(b).map(|(&x, &y)| self.add[x][y]).collect()
    }

    fn vscale(&self, r: usize, a: &[usize]) -> Vector {
        a.iter().map(|&x| self.mul[r][x]).collect()
    }

    fn zero(&self, n: usize) -> Vector {
        vec![self.element(&self.ring.zero()); n]
    }

    /// All vectors of `R^n`.
    fn all(&self, n: usize) -> Vec<Vector> {
        let q = self.size();
        let total = q.pow(n as u32);
        (0..total)
            .map(|mut k| {
                (0..n)
                    .map(|_| {
                        let d = k % q;
                        k /= q;
                        d
                    })
                    .collect()
            })
            .collect()
    }

    /// The submodule of `R^n` generated by `gens`, as a set.
    fn span(&self, n: usize, gens: &[Vector]) -> HashSet<Vector> {
        let mut seen = HashSet::new();
        let mut queue = VecDeque::new();
        let z = self.zero(n);
        seen.insert(z.clone());
        queue.push_back(z);
        while let Some(v) = queue.pop_front() {
            for g in gens {
                for r in 0..self.size() {
                    let w = self.vadd(&v, &self.vscale(r, g));
                    if seen.insert(w.clone()) {
                        queue.push_back(w);
                    }
                }
            }
        }
        seen
    }

    /// A small generating subset of a submodule.
    fn generators(&self, n: usize, set: &HashSet<Vector>) -> Vec<Vector> {
        let mut all: Vec<&Vector> = set.iter().collect();
        all.sort();
        let mut gens = Vec::new();
        let mut covered = self.span(n, &gens);
        for v in all {
            if !covered.contains(v) {
                gens.push(v.clone());
                covered = self.span(n, &gens);
            }
        }
        gens
    }
}

/// `R^ngens / span(rels)` with everything enumerated.
#[derive(Clone)]
struct Finite {
    ngens: usize,
    rels: Vec<Vector>,
    sub: HashSet<Vector>,
}

impl Finite {
    fn new(fr: &FiniteRing, ngens: usize, rels: Vec<Vector>) -> Self {
        let sub = fr.span(ngens, &rels);
        Finite { ngens, rels, sub }
    }

    fn from_module(fr: &FiniteRing, m: &FpModule) -> Self {
        let rels = m.rels().iter().map(|r| fr.vector(r, m.ngens())).collect();
        Finite::new(fr, m.ngens(), rels)
    }

    fn size(&self, fr: &FiniteRing) -> BigInt {
        BigInt::from(fr.size()).pow(self.ngens as u32) / BigInt::from(self.sub.len())
    }

    /// One vector per coset.
    fn representatives(&self, fr: &FiniteRing) -> Vec<Vector> {
        let mut reps: Vec<Vector> = Vec::new();
        let mut covered: HashSet<Vector> = HashSet::new();
        for v in fr.all(self.ngens) {
            if covered.contains(&v) {
                continue;
            }
            for s in &self.sub {
                covered.insert(fr.vadd(&v, s));
            }
            reps.push(v);
        }
        reps
    }

    fn is_zero(&self, v: &Vector) -> bool {
        self.sub.contains(v)
    }

    /// The relation module `span(rels)` presented on the relations.
    fn syzygy(&self, fr: &FiniteRing) -> Finite {
        let s = self.rels.len();
        let syz: HashSet<Vector> = fr
            .all(s)
            .into_iter()
            .filter(|c| {
                let mut acc = fr.zero(self.ngens);
                for (ci, r) in c.iter().zip(&self.rels) {
                    acc = fr.vadd(&acc, &fr.vscale(*ci, r));
                }
                acc == fr.zero(self.ngens)
            })
            .collect();
        let gens = fr.generators(s, &syz);
        Finite::new(fr, s, gens)
    }
}

fn hom_size(fr: &FiniteRing, m: &Finite, n: &Finite) -> BigInt {
    let reps = n.representatives(fr);
    let mut count = 0u64;
    let g = m.ngens;
    let total = reps.len().pow(g as u32);
    for mut k in 0..total {
        let images: Vec<&Vector> = (0..g)
            .map(|_| {
                let r = &reps[k % reps.len()];
                k /= reps.len();
                r
            })
            .collect();
        let ok = m.rels.iter().all(|rel| {
            let mut acc = fr.zero(n.ngens);
            for (c, img) in rel.iter().zip(&images) {
                acc = fr.vadd(&acc, &fr.vscale(*c, img));
            }
            n.is_zero(&acc)
        });
        if ok {
            count += 1;
        }
    }
    BigInt::from(count)
}

fn tensor_size(fr: &FiniteRing, m: &Finite, n: &Finite) -> BigInt {
    let (g, h) = (m.ngens, n.ngens);
    let mut rels = Vec::new();
    for r in &m.rels {
        for k in 0..h {
            let mut v = fr.zero(g * h);
            for j in 0..g {
                v[j * h + k] = r[j];
            }
            rels.push(v);
        }
    }
    for r in &n.rels {
        for j in 0..g {
            let mut v = fr.zero(g * h);
            v[j * h..(j + 1) * h].copy_from_slice(r);
            rels.push(v);
        }
    }
    Finite::new(fr, g * h, rels).size(fr)
}

fn power(fr: &FiniteRing, n: &Finite, g: usize) -> BigInt {
    n.size(fr).pow(g as u32)
}

/// `|Ext^i(M, N)|` by dimension shifting along `0 -> K -> R^g -> M -> 0`.
fn ext_size(fr: &FiniteRing, m: &Finite, n: &Finite, i: usize) -> BigInt {
    match i {
        0 => hom_size(fr, m, n),
        1 => {
            let k = m.syzygy(fr);
            hom_size(fr, &k, n) * hom_size(fr, m, n) / power(fr, n, m.ngens)
        }
        _ => ext_size(fr, &m.syzygy(fr), n, i - 1),
    }
}

fn tor_size(fr: &FiniteRing, m: &Finite, n: &Finite, i: usize) -> BigInt {
    match i {
        0 => tensor_size(fr, m, n),
        1 => {
            let k = m.syzygy(fr);
            tensor_size(fr, &k, n) * tensor_size(fr, m, n) / power(fr, n, m.ngens)
        }
        _ => tor_size(fr, &m.syzygy(fr), n, i - 1),
    }
}

/// One compared invariant.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleRow {
    pub invariant: String,
    pub library: String,
    pub oracle: String,
    pub agree: bool,
}

/// Cardinalities of `Hom`, `⊗`, `Ext^i` and `Tor_i` for `i ≤ max_degree`,
/// from the library and from enumeration.
pub fn compare(m: &FpModule, n: &FpModule, max_degree: usize) -> Result<Vec<OracleRow>> {
    m.ring().same_as(n.ring())?;
    let ring = m.ring();
    let fr = FiniteRing::enumerate(ring, 64)?;
    let (fm, fnn) = (Finite::from_module(&fr, m), Finite::from_module(&fr, n));
    let card = |x: &FpModule| {
        x.cardinality()
            .ok_or_else(|| Error::Unsupported(format!("{} is not finite", x.describe())))
    };
    let fallback = max_degree + 2;
    let cm = BoundedComplex::concentrated(m, 0);
    let cn = BoundedComplex::concentrated(n, 0);
    let rhom = derived_hom(&cm, &cn, fallback)?;
    let tor = derived_tensor(&cm, &cn, fallback)?;
    let mut rows = Vec::new();
    let mut push = |name: String, lib: BigInt, orc: BigInt| {
        rows.push(OracleRow {
            invariant: name,
            agree: lib == orc,
            library: lib.to_string(),
            oracle: orc.to_string(),
        })
    };
    push("|Hom(M, N)|".into(), card(&m.hom(n)?.module)?, hom_size(&fr, &fm, &fnn));
    push("|M ⊗ N|".into(), card(&m.tensor(n)?)?, tensor_size(&fr, &fm, &fnn));
    for i in 0..=max_degree {
        let d = -(i as i32);
        if !rhom.is_exact_in(d) {
            return Err(Error::Precondition(format!("Ext^{i} is outside the exact range")));
        }
        push(
            format!("|Ext^{i}(M, N)|"),
            card(rhom.complex.homology(d).module())?,
            ext_size(&fr, &fm, &fnn, i),
        );
    }
    for i in 0..=max_degree {
        let d = i as i32;
        if !tor.is_exact_in(d) {
            return Err(Error::Precondition(format!("Tor_{i} is outside the exact range")));
        }
        push(
            format!("|Tor_{i}(M, N)|"),
            card(tor.complex.homology(d).module())?,
            tor_size(&fr, &fm, &fnn, i),
        );
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::Domain;

    #[test]
    fn ring_sizes() {
        assert_eq!(FiniteRing::enumerate(&Ring::integers_mod(8), 64).unwrap().size(), 8);
        let f2 = Ring::polynomial(Domain::Prime(2), &["x"]).unwrap();
        let r = f2.quotient(&[f2.parse("x^3").unwrap()]);
        assert_eq!(FiniteRing::enumerate(&r, 64).unwrap().size(), 8);
        assert!(FiniteRing::enumerate(&Ring::integers(), 64).is_err());
    }

    #[test]
    fn z8_cyclic() {
        let r = Ring::integers_mod(8);
        let m = FpModule::cyclic(&r, &[r.constant(2)]);
        let n = FpModule::cyclic(&r, &[r.constant(4)]);
        let rows = compare(&m, &n, 2).unwrap();
        assert!(rows.iter().all(|r| r.agree), "{rows:#?}");
        // Hom(Z/2, Z/4) = Z/2; Ext^1(Z/2, Z/4) over Z/8 is Z/2
        assert_eq!(rows[0].oracle, "2");
    }
}
