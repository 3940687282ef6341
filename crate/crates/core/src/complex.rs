//! Bounded chain complexes with differentials `d_n: C_n -> C_{n-1}`.
//!
//! Koszul-type complexes live in nonpositive degrees: `K(x)` is `R -> R` in
//! degrees 0 and -1.

use crate::error::{Error, Result};
use crate::module::{FpModule, ModuleMap, Subquotient};
use crate::poly::SVec;
use crate::ring::Ring;

#[derive(Clone, Debug)]
pub struct BoundedComplex {
    ring: Ring,
    lo: i32,
    terms: Vec<FpModule>,
    /// `diffs[k]` is `d_{lo+k+1}: C_{lo+k+1} -> C_{lo+k}`.
    diffs: Vec<ModuleMap>,
}

impl BoundedComplex {
    /// Builds a complex from terms `C_lo, ..., C_hi` and differentials
    /// `d_{lo+1}, ..., d_hi` given as matrices (one row per source generator).
    pub fn new(ring: &Ring, lo: i32, terms: Vec<FpModule>, diffs: Vec<Vec<SVec>>) -> Result<Self> {
        if !terms.is_empty() && diffs.len() + 1 != terms.len() {
            return Err(Error::Dimension(format!(
                "{} terms need {} differentials, got {}",
                terms.len(),
                terms.len() - 1,
                diffs.len()
            )));
        }
        let mut maps = Vec::with_capacity(diffs.len());
        for (k, rows) in diffs.into_iter().enumerate() {
            maps.push(ModuleMap::new(&terms[k + 1], &terms[k], rows)?);
        }
        let c = BoundedComplex {
            ring: ring.clone(),
            lo,
            terms,
            diffs: maps,
        };
        c.check_square_zero()?;
        Ok(c)
    }

    pub(crate) fn from_maps(ring: &Ring, lo: i32, terms: Vec<FpModule>, diffs: Vec<ModuleMap>) -> Self {
        BoundedComplex {
            ring: ring.clone(),
            lo,
            terms,
            diffs,
        }
    }

    /// Free complex from ranks and matrices.
    pub fn free(ring: &Ring, lo: i32, ranks: &[usize], diffs: Vec<Vec<SVec>>) -> Result<Self> {
        let terms = ranks.iter().map(|&r| FpModule::free(ring, r)).collect();
        BoundedComplex::new(ring, lo, terms, diffs)
    }

    pub fn zero(ring: &Ring) -> Self {
        BoundedComplex::from_maps(ring, 0, vec![], vec![])
    }

    /// A module placed in a single degree.
    pub fn concentrated(m: &FpModule, degree: i32) -> Self {
        BoundedComplex::from_maps(m.ring(), degree, vec![m.clone()], vec![])
    }

    fn check_square_zero(&self) -> Result<()> {
        for k in 1..self.diffs.len() {
            let dd = self.diffs[k].then(&self.diffs[k - 1])?;
            if !dd.is_zero() {
                return Err(Error::IllDefined(format!(
                    "d∘d is nonzero on degree {}",
                    self.lo + k as i32 + 1
                )));
            }
        }
        Ok(())
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn lo(&self) -> i32 {
        self.lo
    }

    pub fn hi(&self) -> i32 {
        self.lo + self.terms.len() as i32 - 1
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Degrees with a (possibly zero) stored term.
    pub fn degrees(&self) -> std::ops::RangeInclusive<i32> {
        self.lo..=self.hi()
    }

    pub fn term(&self, n: i32) -> FpModule {
        if self.is_empty() || n < self.lo || n > self.hi() {
            FpModule::zero(&self.ring)
        } else {
            self.terms[(n - self.lo) as usize].clone()
        }
    }

    pub fn rank(&self, n: i32) -> usize {
        self.term(n).ngens()
    }

    /// `d_n: C_n -> C_{n-1}`.
    pub fn d(&self, n: i32) -> ModuleMap {
        if !self.is_empty() && n > self.lo && n <= self.hi() {
            self.diffs[(n - self.lo - 1) as usize].clone()
        } else {
            ModuleMap::zero(&self.term(n), &self.term(n - 1))
        }
    }

    pub fn is_termwise_free(&self) -> bool {
        self.terms.iter().all(|t| t.is_free())
    }

    pub fn homology(&self, n: i32) -> Homology {
        let cn = self.term(n);
        let z = self.d(n).kernel_generators_or_all();
        let b = self.d(n + 1).rows().to_vec();
        Homology {
            degree: n,
            sq: Subquotient::new(&cn, z, b),
        }
    }

    pub fn is_acyclic(&self) -> bool {
        self.degrees().all(|n| self.homology(n).module().is_zero())
    }

    /// `Σ^k C`: `(Σ^k C)_n = C_{n-k}`, differential multiplied by `(-1)^k`.
    pub fn shift(&self, k: i32) -> Self {
        let diffs = if k % 2 == 0 {
            self.diffs.clone()
        } else {
            self.diffs.iter().map(|d| d.neg()).collect()
        };
        BoundedComplex::from_maps(&self.ring, self.lo + k, self.terms.clone(), diffs)
    }

    pub fn direct_sum(&self, other: &BoundedComplex) -> Result<Self> {
        self.ring.same_as(&other.ring)?;
        if self.is_empty() {
            return Ok(other.clone());
        }
        if other.is_empty() {
            return Ok(self.clone());
        }
        let lo = self.lo.min(other.lo);
        let hi = self.hi().max(other.hi());
        let mut terms = Vec::new();
        let mut diffs = Vec::new();
        for n in lo..=hi {
            terms.push(self.term(n).direct_sum(&other.term(n))?);
            if n > lo {
                let d = self.d(n).direct_sum(&other.d(n))?;
                diffs.push(rebase(&d, terms.last().unwrap(), &terms[terms.len() - 2]));
            }
        }
        Ok(BoundedComplex::from_maps(&self.ring, lo, terms, diffs))
    }

    /// Offsets of the blocks `C_p ⊗ D_{n-p}` inside `(C ⊗ D)_n`, for `p`
    /// ascending over the range of `C`.
    fn tensor_blocks(&self, other: &BoundedComplex, n: i32) -> Vec<(i32, usize)> {
        let mut out = Vec::new();
        let mut off = 0;
        for p in self.degrees() {
            let q = n - p;
            out.push((p, off));
            off += self.rank(p) * other.rank(q);
        }
        out.push((i32::MAX, off));
        out
    }

    /// Total tensor complex with sign `(-1)^p` on the second factor.
    pub fn tensor(&self, other: &BoundedComplex) -> Result<Self> {
        self.ring.same_as(&other.ring)?;
        if !self.is_termwise_free() && !other.is_termwise_free() {
            return Err(Error::NotFree(
                "tensor of complexes needs one termwise free factor".into(),
            ));
        }
        if self.is_empty() || other.is_empty() {
            return Ok(BoundedComplex::zero(&self.ring));
        }
        let ctx = self.ring.ctx();
        let lo = self.lo + other.lo;
        let hi = self.hi() + other.hi();
        let mut terms = Vec::new();
        for n in lo..=hi {
            let parts: Vec<FpModule> = self
                .degrees()
                .map(|p| self.term(p).tensor(&other.term(n - p)))
                .collect::<Result<_>>()?;
            terms.push(FpModule::direct_sum_all(&self.ring, &parts)?);
        }
        let mut diffs = Vec::new();
        for n in lo + 1..=hi {
            let src_blocks = self.tensor_blocks(other, n);
            let tgt_blocks = self.tensor_blocks(other, n - 1);
            let offset = |blocks: &[(i32, usize)], p: i32| -> usize {
                blocks.iter().find(|(q, _)| *q == p).map(|b| b.1).unwrap_or(0)
            };
            let mut rows = Vec::new();
            for p in self.degrees() {
                let q = n - p;
                let (gp, hq) = (self.rank(p), other.rank(q));
                let dc = self.d(p);
                let dd = other.d(q);
                let sign_neg = p.rem_euclid(2) == 1;
                for i in 0..gp {
                    for j in 0..hq {
                        let mut row = SVec::zero();
                        if p > self.lo {
                            let off = offset(&tgt_blocks, p - 1);
                            let r = &dc.rows()[i];
                            row = ctx.add(&row, &ctx.remap(r, |a| Some(off + a * hq + j)));
                        }
                        if q > other.lo && q <= other.hi() {
                            let off = offset(&tgt_blocks, p);
                            let h1 = other.rank(q - 1);
                            let r = &dd.rows()[j];
                            let mut part = ctx.remap(r, |b| Some(off + i * h1 + b));
                            if sign_neg {
                                part = ctx.neg(&part);
                            }
                            row = ctx.add(&row, &part);
                        }
                        rows.push(row);
                    }
                }
            }
            debug_assert_eq!(rows.len(), src_blocks.last().unwrap().1);
            let k = (n - lo) as usize;
            diffs.push(ModuleMap::unchecked(&terms[k], &terms[k - 1], rows));
        }
        let c = BoundedComplex::from_maps(&self.ring, lo, terms, diffs);
        debug_assert!(c.check_square_zero().is_ok());
        Ok(c)
    }

    /// `Hom(self, target)` for a termwise free `self`. In degree `n` the
    /// generator for block `m`, basis vector `b` of `C_m` and generator `x`
    /// of `X_{m+n}` is the map sending `e_b` to `x`.
    pub fn hom_to(&self, target: &BoundedComplex) -> Result<Self> {
        self.ring.same_as(&target.ring)?;
        if !self.is_termwise_free() {
            return Err(Error::NotFree("hom complex needs a termwise free source".into()));
        }
        if self.is_empty() || target.is_empty() {
            return Ok(BoundedComplex::zero(&self.ring));
        }
        let ctx = self.ring.ctx();
        let lo = target.lo - self.hi();
        let hi = target.hi() - self.lo;
        let mut terms = Vec::new();
        for n in lo..=hi {
            let mut parts = Vec::new();
            for m in self.degrees() {
                for _ in 0..self.rank(m) {
                    parts.push(target.term(m + n));
                }
            }
            terms.push(FpModule::direct_sum_all(&self.ring, &parts)?);
        }
        let mut diffs = Vec::new();
        for n in lo + 1..=hi {
            let src = hom_offsets(self, target, n);
            let tgt = hom_offsets(self, target, n - 1);
            // (df) = d_X ∘ f - (-1)^n f ∘ d_C
            let sign = if n.rem_euclid(2) == 0 { -1 } else { 1 };
            let mut rows = Vec::new();
            for m in self.degrees() {
                let h = target.rank(m + n);
                let dx = target.d(m + n);
                let dcm1 = self.d(m + 1);
                let h1 = target.rank(m + n - 1);
                for b in 0..self.rank(m) {
                    for x in 0..h {
                        let mut row = SVec::zero();
                        if h1 > 0 {
                            let off = tgt.get(m) + b * h1;
                            row = ctx.add(&row, &ctx.remap(&dx.rows()[x], |c| Some(off + c)));
                        }
                        // f ∘ d_C lands in block m + 1 of degree n - 1
                        if m < self.hi() {
                            let off = tgt.get(m + 1);
                            let hh = target.rank(m + n);
                            for (b2, drow) in dcm1.rows().iter().enumerate() {
                                let coeff = ctx.entry(drow, b);
                                if coeff.is_zero() {
                                    continue;
                                }
                                let mut part = ctx.at_comp(&coeff, off + b2 * hh + x);
                                if sign < 0 {
                                    part = ctx.neg(&part);
                                }
                                row = ctx.add(&row, &part);
                            }
                        }
                        rows.push(row);
                    }
                }
            }
            debug_assert_eq!(rows.len(), src.total);
            let k = (n - lo) as usize;
            diffs.push(ModuleMap::unchecked(&terms[k], &terms[k - 1], rows));
        }
        let c = BoundedComplex::from_maps(&self.ring, lo, terms, diffs);
        debug_assert!(c.check_square_zero().is_ok());
        Ok(c)
    }

    pub fn ranks(&self) -> Vec<(i32, usize)> {
        self.degrees().map(|n| (n, self.rank(n))).collect()
    }

    /// Matrix of `d_n` as strings.
    pub fn differential_strings(&self, n: i32) -> Vec<Vec<String>> {
        self.d(n).matrix_strings()
    }
}

/// Re-targets a map onto structurally identical modules.
fn rebase(f: &ModuleMap, source: &FpModule, target: &FpModule) -> ModuleMap {
    ModuleMap::unchecked(source, target, f.rows().to_vec())
}

/// Block offsets of `Hom(C, X)_n`, indexed by the degree `m` of `C`.
pub struct HomOffsets {
    lo: i32,
    offsets: Vec<usize>,
    pub total: usize,
}

impl HomOffsets {
    pub fn get(&self, m: i32) -> usize {
        let k = (m - self.lo).clamp(0, self.offsets.len() as i32) as usize;
        if k < self.offsets.len() {
            self.offsets[k]
        } else {
            self.total
        }
    }
}

pub fn hom_offsets(c: &BoundedComplex, x: &BoundedComplex, n: i32) -> HomOffsets {
    let mut offsets = Vec::new();
    let mut off = 0;
    for m in c.degrees() {
        offsets.push(off);
        off += c.rank(m) * x.rank(m + n);
    }
    HomOffsets {
        lo: c.lo(),
        offsets,
        total: off,
    }
}

impl ModuleMap {
    /// Kernel generators; for a map into the zero module every generator.
    pub fn kernel_generators_or_all(&self) -> Vec<SVec> {
        if self.target().ngens() == 0 {
            return (0..self.source().ngens())
                .map(|i| self.source().gen(i))
                .filter(|g| !self.source().elem_is_zero(g))
                .collect();
        }
        self.kernel_generators()
    }
}

/// `H_n` of a complex with its cycle representatives.
#[derive(Clone, Debug)]
pub struct Homology {
    pub degree: i32,
    sq: Subquotient,
}

impl Homology {
    pub fn module(&self) -> &FpModule {
        &self.sq.module
    }

    /// Cycles representing the generators of the homology module.
    pub fn representatives(&self) -> &[SVec] {
        &self.sq.reps
    }

    /// Class of a cycle.
    pub fn class_of(&self, z: &SVec) -> Option<SVec> {
        self.sq.class_of(z)
    }
}

#[derive(Clone, Debug)]
pub struct ChainMap {
    source: BoundedComplex,
    target: BoundedComplex,
    /// One map per degree of the source.
    maps: Vec<ModuleMap>,
}

impl ChainMap {
    /// `maps` are matrices for the degrees of the source, in order.
    pub fn new(source: &BoundedComplex, target: &BoundedComplex, maps: Vec<Vec<SVec>>) -> Result<Self> {
        if maps.len() != source.terms.len() {
            return Err(Error::Dimension("one matrix per source degree expected".into()));
        }
        let mut ms = Vec::new();
        for (k, rows) in maps.into_iter().enumerate() {
            let n = source.lo + k as i32;
            ms.push(ModuleMap::new(&source.term(n), &target.term(n), rows)?);
        }
        let f = ChainMap {
            source: source.clone(),
            target: target.clone(),
            maps: ms,
        };
        f.check_commutes()?;
        Ok(f)
    }

    pub(crate) fn from_maps(source: &BoundedComplex, target: &BoundedComplex, maps: Vec<ModuleMap>) -> Self {
        ChainMap {
            source: source.clone(),
            target: target.clone(),
            maps,
        }
    }

    pub fn identity(c: &BoundedComplex) -> Self {
        let maps = c.terms.iter().map(ModuleMap::identity).collect();
        ChainMap::from_maps(c, c, maps)
    }

    pub fn zero(source: &BoundedComplex, target: &BoundedComplex) -> Self {
        let maps = source
            .degrees()
            .map(|n| ModuleMap::zero(&source.term(n), &target.term(n)))
            .collect();
        ChainMap::from_maps(source, target, maps)
    }

    /// Multiplication by a ring element.
    pub fn scalar(c: &BoundedComplex, r: &SVec) -> Self {
        let maps = c.terms.iter().map(|t| ModuleMap::scalar(t, r)).collect();
        ChainMap::from_maps(c, c, maps)
    }

    pub fn source(&self) -> &BoundedComplex {
        &self.source
    }

    pub fn target(&self) -> &BoundedComplex {
        &self.target
    }

    pub fn at(&self, n: i32) -> ModuleMap {
        if self.source.is_empty() || n < self.source.lo || n > self.source.hi() {
            ModuleMap::zero(&self.source.term(n), &self.target.term(n))
        } else {
            self.maps[(n - self.source.lo) as usize].clone()
        }
    }

    pub fn check_commutes(&self) -> Result<()> {
        for n in self.source.degrees() {
            let left = self.at(n).then(&self.target.d(n))?;
            let right = self.source.d(n).then(&self.at(n - 1))?;
            if !left.equals(&right) {
                return Err(Error::IllDefined(format!(
                    "chain map does not commute with d in degree {n}"
                )));
            }
        }
        Ok(())
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &ChainMap) -> Result<ChainMap> {
        let maps = self
            .source
            .degrees()
            .map(|n| self.at(n).then(&other.at(n)))
            .collect::<Result<_>>()?;
        Ok(ChainMap::from_maps(&self.source, &other.target, maps))
    }

    /// Equality in every degree.
    pub fn equals(&self, other: &ChainMap) -> bool {
        self.source.degrees().all(|n| self.at(n).equals(&other.at(n)))
    }

    pub fn on_homology(&self, n: i32) -> Result<ModuleMap> {
        let hs = self.source.homology(n);
        let ht = self.target.homology(n);
        self.on_homology_with(&hs, &ht)
    }

    /// Induced map between precomputed homology modules.
    pub fn on_homology_with(&self, hs: &Homology, ht: &Homology) -> Result<ModuleMap> {
        let f = self.at(hs.degree);
        let rows = hs
            .representatives()
            .iter()
            .map(|z| {
                ht.class_of(&f.apply(z))
                    .ok_or_else(|| Error::IllDefined("image of a cycle is not a cycle".into()))
            })
            .collect::<Result<_>>()?;
        ModuleMap::new(hs.module(), ht.module(), rows)
    }

    /// Mapping cone: `cone_n = C_{n-1} ⊕ D_n`, `d(c, e) = (-dc, f(c) + de)`.
    pub fn cone(&self) -> Result<BoundedComplex> {
        let (c, d) = (&self.source, &self.target);
        let ring = c.ring();
        let ctx = ring.ctx();
        if c.is_empty() {
            return Ok(d.clone());
        }
        let lo = if d.is_empty() { c.lo + 1 } else { (c.lo + 1).min(d.lo) };
        let hi = if d.is_empty() {
            c.hi() + 1
        } else {
            (c.hi() + 1).max(d.hi())
        };
        let mut terms = Vec::new();
        for n in lo..=hi {
            terms.push(c.term(n - 1).direct_sum(&d.term(n))?);
        }
        let mut diffs = Vec::new();
        for n in lo + 1..=hi {
            let off = c.rank(n - 2);
            let mut rows = Vec::new();
            let dc = c.d(n - 1);
            let f = self.at(n - 1);
            for i in 0..c.rank(n - 1) {
                let a = ctx.neg(&dc.rows()[i]);
                let b = ctx.shift_comps(&f.rows()[i], off);
                rows.push(ctx.add(&a, &b));
            }
            let dd = d.d(n);
            for j in 0..d.rank(n) {
                rows.push(ctx.shift_comps(&dd.rows()[j], off));
            }
            let k = (n - lo) as usize;
            diffs.push(ModuleMap::unchecked(&terms[k], &terms[k - 1], rows));
        }
        let cone = BoundedComplex::from_maps(ring, lo, terms, diffs);
        cone.check_square_zero()?;
        Ok(cone)
    }

    pub fn is_quasi_iso(&self) -> Result<bool> {
        Ok(self.cone()?.is_acyclic())
    }

    /// `f ⊗ g` between tensor complexes.
    pub fn tensor(&self, other: &ChainMap) -> Result<ChainMap> {
        let src = self.source.tensor(&other.source)?;
        let tgt = self.target.tensor(&other.target)?;
        let ctx = src.ring().ctx().clone();
        let mut maps = Vec::new();
        for n in src.degrees() {
            let sb = self.source.tensor_blocks(&other.source, n);
            let tb = self.target.tensor_blocks(&other.target, n);
            let mut rows = Vec::new();
            for p in self.source.degrees() {
                let q = n - p;
                if self.source.rank(p) * other.source.rank(q) == 0 {
                    continue;
                }
                let block = self.at(p).tensor(&other.at(q))?;
                let off = tb.iter().find(|b| b.0 == p).map(|b| b.1).unwrap_or(0);
                for r in block.rows() {
                    rows.push(ctx.shift_comps(r, off));
                }
            }
            debug_assert_eq!(rows.len(), sb.last().unwrap().1);
            maps.push(ModuleMap::unchecked(&src.term(n), &tgt.term(n), rows));
        }
        Ok(ChainMap::from_maps(&src, &tgt, maps))
    }

    /// `Hom(self, X)`: precomposition, from `Hom(target, X)` to `Hom(source, X)`.
    /// Both complexes must be termwise free.
    pub fn hom_into(&self, x: &BoundedComplex) -> Result<ChainMap> {
        let (c1, c) = (&self.source, &self.target);
        let hs = c.hom_to(x)?;
        let ht = c1.hom_to(x)?;
        let ctx = x.ring().ctx().clone();
        let mut maps = Vec::new();
        for n in hs.degrees() {
            let so = hom_offsets(c, x, n);
            let to = hom_offsets(c1, x, n);
            let mut rows = Vec::new();
            for m in c.degrees() {
                let h = x.rank(m + n);
                let phi = self.at(m);
                for b in 0..c.rank(m) {
                    for xi in 0..h {
                        let mut row = SVec::zero();
                        for (b2, prow) in phi.rows().iter().enumerate() {
                            let coeff = ctx.entry(prow, b);
                            if !coeff.is_zero() {
                                let comp = to.get(m) + b2 * h + xi;
                                row = ctx.add(&row, &ctx.at_comp(&coeff, comp));
                            }
                        }
                        rows.push(row);
                    }
                }
            }
            debug_assert_eq!(rows.len(), so.total);
            maps.push(ModuleMap::unchecked(&hs.term(n), &ht.term(n), rows));
        }
        Ok(ChainMap::from_maps(&hs, &ht, maps))
    }

    pub fn direct_sum(&self, other: &ChainMap) -> Result<ChainMap> {
        let src = self.source.direct_sum(&other.source)?;
        let tgt = self.target.direct_sum(&other.target)?;
        let maps = src
            .degrees()
            .map(|n| {
                let f = self.at(n).direct_sum(&other.at(n))?;
                Ok(ModuleMap::unchecked(&src.term(n), &tgt.term(n), f.rows().to_vec()))
            })
            .collect::<Result<_>>()?;
        Ok(ChainMap::from_maps(&src, &tgt, maps))
    }
}

/// A termwise free complex with a quasi-isomorphism onto the input.
#[derive(Clone, Debug)]
pub struct FreeReplacement {
    pub complex: BoundedComplex,
    pub augmentation: ChainMap,
    /// True when the construction stopped because nothing was left to kill;
    /// otherwise the replacement is exact only below `complex.hi()`.
    pub terminated: bool,
}

/// Drops generators lying in the span of the remaining ones.
fn trim_generators(ring: &Ring, rank: usize, gens: Vec<SVec>) -> Vec<SVec> {
    let mut keep = gens;
    let mut i = keep.len();
    while i > 0 {
        i -= 1;
        let others: Vec<SVec> = keep
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != i)
            .map(|(_, v)| v.clone())
            .collect();
        if crate::ring::Span::new(ring, rank, others).contains(&keep[i]) {
            keep.remove(i);
        }
    }
    keep
}

/// Free resolution of a module in degrees `0..=length`, augmented onto `M`.
pub fn free_resolution(m: &FpModule, length: usize) -> FreeReplacement {
    let ring = m.ring();
    let pruned = m.prune();
    let p = &pruned.module;
    let mut ranks = vec![p.ngens()];
    let mut mats: Vec<Vec<SVec>> = Vec::new();
    let mut current = trim_generators(ring, p.ngens(), p.rels().to_vec());
    let mut terminated = false;
    for k in 1..=length {
        if current.is_empty() {
            terminated = true;
            break;
        }
        let rank_below = ranks[k - 1];
        ranks.push(current.len());
        let next = crate::ring::Span::new(ring, rank_below, current.clone()).syzygies();
        mats.push(current.clone());
        current = trim_generators(ring, ranks[k], next);
    }
    if !terminated && current.is_empty() {
        terminated = true;
    }
    let complex = BoundedComplex::free(ring, 0, &ranks, mats).expect("resolution is a complex");
    let target = BoundedComplex::concentrated(m, 0);
    let mut maps = vec![ModuleMap::unchecked(
        &complex.term(0),
        m,
        pruned.from_new.rows().to_vec(),
    )];
    for n in 1..=complex.hi() {
        maps.push(ModuleMap::zero(&complex.term(n), &FpModule::zero(ring)));
    }
    let augmentation = ChainMap::from_maps(&complex, &target, maps);
    FreeReplacement {
        complex,
        augmentation,
        terminated,
    }
}

/// Termwise free replacement of a bounded complex, built degree by degree:
/// `P_n` is free on generators of `{(p, c) : dp = 0, φ(p) = dc}` inside
/// `P_{n-1} ⊕ C_n`. Continues `extra` degrees past the top of `C`.
pub fn free_replacement(c: &BoundedComplex, extra: usize) -> FreeReplacement {
    let ring = c.ring();
    if c.is_termwise_free() {
        return FreeReplacement {
            complex: c.clone(),
            augmentation: ChainMap::identity(c),
            terminated: true,
        };
    }
    if c.lo() == c.hi() {
        let r = free_resolution(&c.term(c.lo()), extra);
        let complex = r.complex.shift(c.lo());
        let maps = complex
            .degrees()
            .map(|n| {
                let f = r.augmentation.at(n - c.lo());
                ModuleMap::unchecked(&complex.term(n), &c.term(n), f.rows().to_vec())
            })
            .collect();
        return FreeReplacement {
            augmentation: ChainMap::from_maps(&complex, c, maps),
            complex,
            terminated: r.terminated,
        };
    }
    let ctx = ring.ctx();
    let top = c.hi() + extra as i32;
    let mut ranks: Vec<usize> = Vec::new();
    let mut dmats: Vec<Vec<SVec>> = Vec::new();
    let mut phis: Vec<Vec<SVec>> = Vec::new();
    let mut terminated = false;
    let lo = c.lo();
    for n in lo..=top {
        let (pr, cr) = (if n > lo { ranks[(n - lo - 1) as usize] } else { 0 }, c.rank(n));
        // (p, c) ↦ (dp, φ(p) - dc) in P_{n-2} ⊕ C_{n-1}
        let pr2 = if n - 2 >= lo { ranks[(n - lo - 2) as usize] } else { 0 };
        let amb_t = FpModule::free(ring, pr2).direct_sum(&c.term(n - 1)).unwrap();
        let amb_s = FpModule::free(ring, pr).direct_sum(&c.term(n)).unwrap();
        let mut rows = Vec::new();
        for i in 0..pr {
            let dp = if n - 1 > lo {
                dmats[(n - lo - 2) as usize][i].clone()
            } else {
                SVec::zero()
            };
            let ph = ctx.shift_comps(&phis[(n - lo - 1) as usize][i], pr2);
            rows.push(ctx.add(&dp, &ph));
        }
        let dc = c.d(n);
        for j in 0..cr {
            rows.push(ctx.neg(&ctx.shift_comps(&dc.rows()[j], pr2)));
        }
        let map = ModuleMap::unchecked(&amb_s, &amb_t, rows);
        let mut gens = map.kernel_generators_or_all();
        gens = trim_generators(ring, amb_s.ngens(), gens)
            .into_iter()
            .filter(|g| !amb_s.elem_is_zero(g))
            .collect();
        if n > c.hi() && gens.is_empty() {
            terminated = true;
            break;
        }
        ranks.push(gens.len());
        if n > lo {
            dmats.push(gens.iter().map(|g| ctx.remap(g, |k| (k < pr).then_some(k))).collect());
        }
        phis.push(
            gens.iter()
                .map(|g| ctx.remap(g, |k| (k >= pr).then(|| k - pr)))
                .collect(),
        );
    }
    let complex = BoundedComplex::free(ring, lo, &ranks, dmats).expect("replacement is a complex");
    let maps = complex
        .degrees()
        .map(|n| ModuleMap::unchecked(&complex.term(n), &c.term(n), phis[(n - lo) as usize].clone()))
        .collect();
    FreeReplacement {
        augmentation: ChainMap::from_maps(&complex, c, maps),
        complex,
        terminated,
    }
}

/// A derived functor value: a complex whose homology is exact in a known
/// range of degrees.
#[derive(Clone, Debug)]
pub struct Derived {
    pub complex: BoundedComplex,
    /// Homology is exact for degrees in `[lower, upper]` (inclusive, `None`
    /// meaning unbounded).
    pub exact_lower: Option<i32>,
    pub exact_upper: Option<i32>,
}

impl Derived {
    pub fn is_exact_in(&self, n: i32) -> bool {
        self.exact_lower.is_none_or(|l| n >= l) && self.exact_upper.is_none_or(|u| n <= u)
    }

    pub fn is_fully_exact(&self) -> bool {
        self.exact_lower.is_none() && self.exact_upper.is_none()
    }
}

/// Global dimension when known: 1 for `Z`, 0 for fields, the number of
/// variables for polynomial rings over a field (one more over `Z`).
pub fn global_dimension(ring: &Ring) -> Option<usize> {
    if !ring.defining().is_empty() {
        return None;
    }
    let n = ring.nvars();
    Some(if ring.domain().is_field() { n } else { n + 1 })
}

fn resolution_length(ring: &Ring, fallback: usize) -> usize {
    global_dimension(ring).map_or(fallback, |d| d + 1)
}

/// `first ⊗^L second`.
pub fn derived_tensor(first: &BoundedComplex, second: &BoundedComplex, fallback: usize) -> Result<Derived> {
    let len = resolution_length(first.ring(), fallback);
    let p = free_replacement(first, len);
    let complex = p.complex.tensor(second)?;
    let exact_upper = if p.terminated || global_dimension(first.ring()).is_some() {
        None
    } else {
        Some(p.complex.hi() + second.lo() - 1)
    };
    Ok(Derived {
        complex,
        exact_lower: None,
        exact_upper,
    })
}

/// `RHom(first, second)`; `Ext^i` appears as `H_{-i}`.
pub fn derived_hom(first: &BoundedComplex, second: &BoundedComplex, fallback: usize) -> Result<Derived> {
    let len = resolution_length(first.ring(), fallback);
    let p = free_replacement(first, len);
    let complex = p.complex.hom_to(second)?;
    let exact_lower = if p.terminated || global_dimension(first.ring()).is_some() {
        None
    } else {
        Some(second.hi() - p.complex.hi() + 1)
    };
    Ok(Derived {
        complex,
        exact_lower,
        exact_upper: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::Domain;

    fn k_of(ring: &Ring, x: &SVec) -> BoundedComplex {
        BoundedComplex::free(ring, -1, &[1, 1], vec![vec![x.clone()]]).unwrap()
    }

    #[test]
    fn koszul_two_over_z() {
        let z = Ring::integers();
        let k = k_of(&z, &z.constant(2));
        assert_eq!(k.homology(-1).module().describe(), "Z/2");
        assert!(k.homology(0).module().is_zero());
        assert_eq!(k.shift(1).homology(0).module().describe(), "Z/2");
        assert!(ChainMap::identity(&k).cone().unwrap().is_acyclic());
    }

    #[test]
    fn tensor_of_two_koszul_complexes() {
        let r = Ring::polynomial(Domain::Rationals, &["x", "y"]).unwrap();
        let kx = k_of(&r, &r.var(0));
        let ky = k_of(&r, &r.var(1));
        let k = kx.tensor(&ky).unwrap();
        assert_eq!(k.ranks(), vec![(-2, 1), (-1, 2), (0, 1)]);
        assert!(k.homology(0).module().is_zero());
        assert!(k.homology(-1).module().is_zero());
        let h = k.homology(-2);
        assert_eq!(h.module().field_dimension(), Some(1));
    }

    #[test]
    fn hom_complex_of_k2_into_z4() {
        let z = Ring::integers();
        let k = k_of(&z, &z.constant(2));
        let m = FpModule::cyclic(&z, &[z.constant(4)]);
        let h = k.hom_to(&BoundedComplex::concentrated(&m, 0)).unwrap();
        assert_eq!(h.homology(0).module().describe(), "Z/2");
        assert_eq!(h.homology(1).module().describe(), "Z/2");
    }

    #[test]
    fn derived_functors_over_z() {
        let z = Ring::integers();
        let z2 = BoundedComplex::concentrated(&FpModule::cyclic(&z, &[z.constant(2)]), 0);
        let t = derived_tensor(&z2, &z2, 4).unwrap();
        assert_eq!(t.complex.homology(0).module().describe(), "Z/2");
        assert_eq!(t.complex.homology(1).module().describe(), "Z/2");
        let zz = BoundedComplex::concentrated(&FpModule::free(&z, 1), 0);
        let e = derived_hom(&z2, &zz, 4).unwrap();
        assert_eq!(e.complex.homology(-1).module().describe(), "Z/2");
        assert!(e.complex.homology(0).module().is_zero());
    }

    #[test]
    fn quasi_isomorphism_detection() {
        let z = Ring::integers();
        let zero = BoundedComplex::concentrated(&FpModule::zero(&z), 0);
        let z2 = BoundedComplex::concentrated(&FpModule::cyclic(&z, &[z.constant(2)]), 0);
        assert!(!ChainMap::zero(&zero, &z2).is_quasi_iso().unwrap());
        let r = free_resolution(&z2.term(0), 3);
        assert!(r.terminated);
        assert!(r.augmentation.is_quasi_iso().unwrap());
    }

    #[test]
    fn replacement_of_a_two_term_complex() {
        let z = Ring::integers();
        let a = FpModule::cyclic(&z, &[z.constant(4)]);
        let b = FpModule::cyclic(&z, &[z.constant(2)]);
        let c = BoundedComplex::new(&z, 0, vec![b, a], vec![vec![z.constant(2)]]).unwrap();
        let p = free_replacement(&c, 2);
        assert!(p.complex.is_termwise_free());
        assert!(p.augmentation.check_commutes().is_ok());
        assert!(p.augmentation.is_quasi_iso().unwrap());
    }
}
