//! Finitely presented modules and the maps between them.
//!
//! A module `M = R^g / span(rels)` is stored by its number of generators and
//! relation rows. Elements are row vectors in `R^g`. A map `M -> N` is a
//! matrix with one row per generator of `M`, holding its image in `R^h`;
//! applying a map is `v * F`.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::coeff::Domain;
use crate::error::{Error, Result};
use crate::hermite;
use crate::poly::{divides, SVec};
use crate::ring::{Ideal, Ring, RingKind, RingMap, Span};

#[derive(Debug)]
struct ModuleData {
    ring: Ring,
    ngens: usize,
    rels: Vec<SVec>,
    span: Span,
}

#[derive(Clone, Debug)]
pub struct FpModule(Arc<ModuleData>);

impl FpModule {
    pub fn new(ring: &Ring, ngens: usize, rels: Vec<SVec>) -> Result<FpModule> {
        for r in &rels {
            if r.max_comp().is_some_and(|c| c >= ngens) {
                return Err(Error::Dimension(format!(
                    "relation has an entry beyond the {ngens} generators"
                )));
            }
        }
        let rels: Vec<SVec> = rels.iter().map(|r| ring.nf_vec(r)).filter(|r| !r.is_zero()).collect();
        Ok(FpModule(Arc::new(ModuleData {
            ring: ring.clone(),
            ngens,
            span: Span::new(ring, ngens, rels.clone()),
            rels,
        })))
    }

    pub fn free(ring: &Ring, rank: usize) -> FpModule {
        FpModule::new(ring, rank, vec![]).expect("no relations")
    }

    pub fn zero(ring: &Ring) -> FpModule {
        FpModule::free(ring, 0)
    }

    /// `R / I` for the ideal generated by `gens`.
    pub fn cyclic(ring: &Ring, gens: &[SVec]) -> FpModule {
        FpModule::new(ring, 1, gens.to_vec()).expect("rank one")
    }

    /// Cokernel of a matrix given as relation rows.
    pub fn coker(ring: &Ring, ngens: usize, rows: Vec<SVec>) -> Result<FpModule> {
        FpModule::new(ring, ngens, rows)
    }

    pub fn ring(&self) -> &Ring {
        &self.0.ring
    }

    pub fn ngens(&self) -> usize {
        self.0.ngens
    }

    pub fn rels(&self) -> &[SVec] {
        &self.0.rels
    }

    pub fn span(&self) -> &Span {
        &self.0.span
    }

    pub fn is_free(&self) -> bool {
        self.0.rels.is_empty()
    }

    pub fn gen(&self, i: usize) -> SVec {
        self.ring().ctx().unit_vector(i)
    }

    /// Canonical representative of an element.
    pub fn reduce(&self, v: &SVec) -> SVec {
        self.ring().nf_vec(&self.0.span.reduce(v))
    }

    pub fn elem_is_zero(&self, v: &SVec) -> bool {
        self.0.span.contains(v)
    }

    pub fn elem_eq(&self, a: &SVec, b: &SVec) -> bool {
        self.elem_is_zero(&self.ring().ctx().sub(a, b))
    }

    pub fn is_zero(&self) -> bool {
        (0..self.ngens()).all(|i| self.elem_is_zero(&self.gen(i)))
    }

    /// `r * v` inside the module.
    pub fn scale(&self, r: &SVec, v: &SVec) -> SVec {
        self.reduce(&self.ring().ctx().mul_poly(r, v))
    }

    /// Submodule `I M` generated by `f_i e_j`.
    pub fn ideal_times(&self, ideal_gens: &[SVec]) -> Vec<SVec> {
        let ctx = self.ring().ctx();
        let mut out = Vec::new();
        for f in ideal_gens {
            for j in 0..self.ngens() {
                let v = self.ring().nf_vec(&ctx.mul_poly(f, &self.gen(j)));
                if !v.is_zero() {
                    out.push(v);
                }
            }
        }
        out
    }

    /// `M / (rows)`: add relations.
    pub fn quotient_by(&self, rows: &[SVec]) -> FpModule {
        let mut rels = self.0.rels.clone();
        rels.extend(rows.iter().cloned());
        FpModule::new(self.ring(), self.ngens(), rels).expect("same rank")
    }

    /// `M / I M`.
    pub fn mod_ideal(&self, ideal_gens: &[SVec]) -> FpModule {
        self.quotient_by(&self.ideal_times(ideal_gens))
    }

    /// Does every element of the submodule spanned by `rows` vanish in `M`?
    pub fn rows_vanish(&self, rows: &[SVec]) -> bool {
        rows.iter().all(|r| self.elem_is_zero(r))
    }

    pub fn direct_sum(&self, other: &FpModule) -> Result<FpModule> {
        self.ring().same_as(other.ring())?;
        let ctx = self.ring().ctx();
        let mut rels = self.0.rels.clone();
        rels.extend(other.0.rels.iter().map(|r| ctx.shift_comps(r, self.ngens())));
        FpModule::new(self.ring(), self.ngens() + other.ngens(), rels)
    }

    pub fn direct_sum_all(ring: &Ring, parts: &[FpModule]) -> Result<FpModule> {
        let mut acc = FpModule::zero(ring);
        for p in parts {
            acc = acc.direct_sum(p)?;
        }
        Ok(acc)
    }

    /// Tensor product; generator `e_i ⊗ f_j` has index `i * h + j`.
    pub fn tensor(&self, other: &FpModule) -> Result<FpModule> {
        self.ring().same_as(other.ring())?;
        let ctx = self.ring().ctx();
        let (g, h) = (self.ngens(), other.ngens());
        let mut rels = Vec::new();
        for a in self.rels() {
            for j in 0..h {
                rels.push(ctx.remap(a, |i| Some(i * h + j)));
            }
        }
        for i in 0..g {
            for b in other.rels() {
                rels.push(ctx.remap(b, |j| Some(i * h + j)));
            }
        }
        FpModule::new(self.ring(), g * h, rels)
    }

    /// `Hom(self, other)` together with the embedding into `other^g`; each
    /// generator of the result is the list of images of the generators of
    /// `self`, coordinates `i * h + j`.
    pub fn hom(&self, other: &FpModule) -> Result<Hom> {
        self.ring().same_as(other.ring())?;
        let ring = self.ring();
        let ctx = ring.ctx();
        let (g, h) = (self.ngens(), other.ngens());
        let parts: Vec<FpModule> = (0..g).map(|_| other.clone()).collect();
        let ng = FpModule::direct_sum_all(ring, &parts)?;
        let nrel = self.rels().len();
        let parts: Vec<FpModule> = (0..nrel).map(|_| other.clone()).collect();
        let target = FpModule::direct_sum_all(ring, &parts)?;
        // (i, j) maps to sum_r a_{r,i} e_{(r, j)}
        let mut rows = Vec::with_capacity(g * h);
        for i in 0..g {
            for j in 0..h {
                let mut row = SVec::zero();
                for (r, a) in self.rels().iter().enumerate() {
                    let ai = ctx.entry(a, i);
                    if !ai.is_zero() {
                        row = ctx.add(&row, &ctx.at_comp(&ai, r * h + j));
                    }
                }
                rows.push(row);
            }
        }
        let psi = ModuleMap::new(&ng, &target, rows)?;
        let k = psi.kernel();
        Ok(Hom {
            source: self.clone(),
            target: other.clone(),
            module: k.module.clone(),
            embedding: k.inclusion,
        })
    }

    /// Eliminates generators killed by unit relations and cleans up the
    /// relations. Returns the new module with mutually inverse isomorphisms.
    pub fn prune(&self) -> Pruned {
        let ring = self.ring().clone();
        let ctx = ring.ctx().clone();
        let mut g = self.ngens();
        let mut rels: Vec<SVec> = self.0.span.essential_gb();
        // to_new[i]: old generator i in current coordinates
        let mut to_new: Vec<SVec> = (0..g).map(|i| ctx.unit_vector(i)).collect();
        // from_new[k]: current generator k in old coordinates
        let mut from_new: Vec<SVec> = (0..g).map(|i| ctx.unit_vector(i)).collect();
        loop {
            let mut found = None;
            'search: for (ri, r) in rels.iter().enumerate() {
                for j in (0..g).rev() {
                    let e = ctx.entry(r, j);
                    if e.is_zero() {
                        continue;
                    }
                    if let Some(inv) = ring.unit_inverse(&e) {
                        found = Some((ri, j, inv));
                        break 'search;
                    }
                }
            }
            let Some((ri, j, inv)) = found else { break };
            let r = rels.remove(ri);
            // e_j = -inv * (r - r_j e_j)
            let rj = ctx.entry(&r, j);
            let rest = ctx.sub(&r, &ctx.at_comp(&rj, j));
            let ej = ring.nf_vec(&ctx.neg(&ctx.mul_poly(&inv, &rest)));
            let drop = |v: &SVec| -> SVec {
                let vj = ctx.entry(v, j);
                let base = ctx.sub(v, &ctx.at_comp(&vj, j));
                let w = ctx.add(&base, &ctx.mul_poly(&vj, &ej));
                ring.nf_vec(&ctx.remap(&w, |c| match c.cmp(&j) {
                    std::cmp::Ordering::Less => Some(c),
                    std::cmp::Ordering::Equal => None,
                    std::cmp::Ordering::Greater => Some(c - 1),
                }))
            };
            rels = rels.iter().map(drop).filter(|v| !v.is_zero()).collect();
            to_new = to_new.iter().map(drop).collect();
            from_new.remove(j);
            g -= 1;
            rels = Span::new(&ring, g, rels).essential_gb();
        }
        let module = FpModule::new(&ring, g, rels).expect("consistent rank");
        let to_new = ModuleMap::unchecked(self, &module, to_new);
        let from_new = ModuleMap::unchecked(&module, self, from_new);
        Pruned {
            module,
            to_new,
            from_new,
        }
    }

    /// The module with its presentation pruned.
    pub fn minimized(&self) -> FpModule {
        self.prune().module
    }

    /// Extension of scalars along a ring map.
    pub fn base_change(&self, theta: &RingMap) -> Result<FpModule> {
        self.ring().same_as(theta.source())?;
        let rels = self.rels().iter().map(|r| theta.apply_vec(r)).collect();
        FpModule::new(theta.target(), self.ngens(), rels)
    }

    /// Invariant factors (non-unit) and free rank over `Z` or `Z/m`.
    pub fn integer_structure(&self) -> Option<(Vec<BigInt>, usize)> {
        let ring = self.ring();
        if !(ring.nvars() == 0 && *ring.domain() == Domain::Integers) {
            return None;
        }
        let g = self.ngens();
        let mut rows = hermite::to_dense(self.rels(), g);
        if let RingKind::IntegersMod(m) = ring.kind() {
            for i in 0..g {
                let mut row = vec![BigInt::zero(); g];
                row[i] = m.clone();
                rows.push(row);
            }
        }
        let inv = hermite::smith_invariants(&rows, g);
        let free = g - inv.len();
        Some((inv.into_iter().filter(|d| !d.is_one()).collect(), free))
    }

    /// The zeroth Fitting ideal, generated by the maximal minors of a
    /// minimal presentation. `None` when there are too many minors to list.
    pub fn fitting_ideal(&self) -> Option<Ideal> {
        let ring = self.ring();
        let p = self.minimized();
        let g = p.ngens();
        let r = p.rels().len();
        if g == 0 {
            return Some(Ideal::unit(ring));
        }
        if r < g {
            return Some(Ideal::new(ring, &[]));
        }
        if binomial(r, g) > 2000 || g > 6 {
            return None;
        }
        let ctx = ring.ctx();
        let matrix: Vec<Vec<SVec>> = p.rels().iter().map(|row| ctx.entries(row, g)).collect();
        let mut minors = Vec::new();
        for rows in combinations(r, g) {
            let sub: Vec<Vec<SVec>> = rows.iter().map(|&i| matrix[i].clone()).collect();
            let d = determinant(ring, &sub);
            if !ring.is_zero(&d) {
                minors.push(d);
            }
        }
        Some(Ideal::new(ring, &minors))
    }

    /// Is the module killed by a power of the ideal? Decided by
    /// `I ⊆ √Fitt_0(M)`, since `Fitt_0` and the annihilator have the same
    /// radical.
    pub fn is_power_torsion(&self, ideal: &Ideal) -> Option<bool> {
        let fitt = self.fitting_ideal()?;
        Some(ideal.gens().iter().all(|x| fitt.radical_member(x)))
    }

    /// Vector space dimension when the module is finite-dimensional over a
    /// coefficient field.
    pub fn field_dimension(&self) -> Option<usize> {
        let ring = self.ring();
        if !ring.domain().is_field() {
            return None;
        }
        let gb = self.0.span.gb();
        let n = ring.nvars();
        let mut total = 0usize;
        for comp in 0..self.ngens() {
            let leads: Vec<&[u32]> = gb
                .iter()
                .filter_map(|v| v.lead())
                .filter(|t| t.comp == comp)
                .map(|t| t.exps.as_slice())
                .collect();
            // finite iff every variable has a pure power among the leads
            let mut bounds = vec![0u32; n];
            for (i, b) in bounds.iter_mut().enumerate() {
                let pure = leads
                    .iter()
                    .filter(|e| e.iter().enumerate().all(|(k, &x)| k == i || x == 0))
                    .map(|e| e[i])
                    .min()?;
                *b = pure;
            }
            total += count_standard(&leads, &bounds)?;
        }
        Some(total)
    }

    /// Number of elements, when finite and computable.
    pub fn cardinality(&self) -> Option<BigInt> {
        if let Some((inv, free)) = self.integer_structure() {
            if free > 0 {
                return None;
            }
            return Some(inv.iter().fold(BigInt::one(), |a, b| a * b));
        }
        match self.ring().domain() {
            Domain::Prime(p) => {
                let d = self.field_dimension()?;
                Some(num_traits::pow(BigInt::from(*p), d))
            }
            Domain::Rationals if self.is_zero() => Some(BigInt::one()),
            _ => None,
        }
    }

    /// Human-readable isomorphism type where the structure theory allows it.
    pub fn describe(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        if let Some((inv, free)) = self.integer_structure() {
            let mut parts: Vec<String> = inv.iter().map(|d| format!("Z/{d}")).collect();
            match free {
                0 => {}
                1 => parts.push("Z".into()),
                r => parts.push(format!("Z^{r}")),
            }
            return parts.join(" ⊕ ");
        }
        let ring = self.ring();
        let label = ring.domain().label();
        if ring.nvars() == 0 {
            if let Some(d) = self.field_dimension() {
                return if d == 1 { label } else { format!("{label}^{d}") };
            }
        }
        let p = self.minimized();
        if p.is_free() {
            return if p.ngens() == 1 {
                ring.label()
            } else {
                format!("{}^{}", ring.label(), p.ngens())
            };
        }
        let body = p.presentation_string();
        match p.field_dimension() {
            Some(d) => format!("{body} (dim_{label} = {d})"),
            None => body,
        }
    }

    pub fn presentation_string(&self) -> String {
        let rows: Vec<String> = self
            .rels()
            .iter()
            .map(|r| format!("[{}]", self.ring().fmt_vec(r, self.ngens()).join(", ")))
            .collect();
        format!("coker({}, [{}])", self.ngens(), rows.join(", "))
    }

    pub fn presentation_matrix(&self) -> Vec<Vec<String>> {
        self.rels()
            .iter()
            .map(|r| self.ring().fmt_vec(r, self.ngens()))
            .collect()
    }

    pub fn fmt_elem(&self, v: &SVec) -> String {
        format!("({})", self.ring().fmt_vec(v, self.ngens()).join(", "))
    }
}

impl fmt::Display for FpModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.describe())
    }
}

fn count_standard(leads: &[&[u32]], bounds: &[u32]) -> Option<usize> {
    const LIMIT: usize = 1 << 20;
    let cells: usize = bounds.iter().try_fold(1usize, |acc, &b| acc.checked_mul(b as usize))?;
    if cells > LIMIT {
        return None;
    }
    let n = bounds.len();
    let mut count = 0;
    let mut e = vec![0u32; n];
    loop {
        if !leads.iter().any(|l| divides(l, &e)) {
            count += 1;
        }
        let mut i = 0;
        loop {
            if i == n {
                return Some(count);
            }
            e[i] += 1;
            if e[i] < bounds[i] {
                break;
            }
            e[i] = 0;
            i += 1;
        }
    }
}

/// Result of [`FpModule::prune`].
#[derive(Clone, Debug)]
pub struct Pruned {
    pub module: FpModule,
    pub to_new: ModuleMap,
    pub from_new: ModuleMap,
}

/// `Hom(M, N)` with its embedding into `N^g`.
#[derive(Clone, Debug)]
pub struct Hom {
    pub source: FpModule,
    pub target: FpModule,
    pub module: FpModule,
    pub embedding: ModuleMap,
}

impl Hom {
    /// The homomorphism represented by an element of the Hom module.
    pub fn to_map(&self, v: &SVec) -> ModuleMap {
        let ctx = self.source.ring().ctx();
        let h = self.target.ngens();
        let flat = self.embedding.apply(v);
        let rows = (0..self.source.ngens())
            .map(|i| ctx.remap(&flat, |c| (c / h == i).then_some(c % h)))
            .collect();
        ModuleMap::unchecked(&self.source, &self.target, rows)
    }
}

#[derive(Clone, Debug)]
pub struct ModuleMap {
    source: FpModule,
    target: FpModule,
    rows: Vec<SVec>,
}

/// Kernel or image with its inclusion into the ambient module.
#[derive(Clone, Debug)]
pub struct SubModule {
    pub module: FpModule,
    pub inclusion: ModuleMap,
}

impl ModuleMap {
    pub fn new(source: &FpModule, target: &FpModule, rows: Vec<SVec>) -> Result<ModuleMap> {
        source.ring().same_as(target.ring())?;
        if rows.len() != source.ngens() {
            return Err(Error::Dimension(format!(
                "{} generator images for {} generators",
                rows.len(),
                source.ngens()
            )));
        }
        if rows.iter().any(|r| r.max_comp().is_some_and(|c| c >= target.ngens())) {
            return Err(Error::Dimension("image outside the target".into()));
        }
        let f = ModuleMap::unchecked(source, target, rows);
        for (k, r) in source.rels().iter().enumerate() {
            if !target.elem_is_zero(&f.apply_raw(r)) {
                return Err(Error::IllDefined(format!(
                    "relation {} of the source is not sent to zero",
                    k + 1
                )));
            }
        }
        Ok(f)
    }

    pub(crate) fn unchecked(source: &FpModule, target: &FpModule, rows: Vec<SVec>) -> ModuleMap {
        let ring = source.ring();
        ModuleMap {
            source: source.clone(),
            target: target.clone(),
            rows: rows.iter().map(|r| ring.nf_vec(r)).collect(),
        }
    }

    pub fn identity(m: &FpModule) -> ModuleMap {
        let rows = (0..m.ngens()).map(|i| m.gen(i)).collect();
        ModuleMap::unchecked(m, m, rows)
    }

    pub fn zero(source: &FpModule, target: &FpModule) -> ModuleMap {
        ModuleMap::unchecked(source, target, vec![SVec::zero(); source.ngens()])
    }

    /// Multiplication by a ring element.
    pub fn scalar(m: &FpModule, r: &SVec) -> ModuleMap {
        let ctx = m.ring().ctx();
        let rows = (0..m.ngens()).map(|i| ctx.mul_poly(r, &m.gen(i))).collect();
        ModuleMap::unchecked(m, m, rows)
    }

    /// The map induced by the identity on generators, `M -> M / extra`.
    pub fn projection(m: &FpModule, quotient: &FpModule) -> Result<ModuleMap> {
        let rows = (0..m.ngens()).map(|i| m.gen(i)).collect();
        ModuleMap::new(m, quotient, rows)
    }

    pub fn source(&self) -> &FpModule {
        &self.source
    }

    pub fn target(&self) -> &FpModule {
        &self.target
    }

    pub fn rows(&self) -> &[SVec] {
        &self.rows
    }

    pub fn ring(&self) -> &Ring {
        self.source.ring()
    }

    fn apply_raw(&self, v: &SVec) -> SVec {
        self.ring().ctx().apply(v, &self.rows)
    }

    /// Image of an element, reduced in the target.
    pub fn apply(&self, v: &SVec) -> SVec {
        self.target.reduce(&self.apply_raw(v))
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &ModuleMap) -> Result<ModuleMap> {
        self.ring().same_as(other.ring())?;
        if self.target.ngens() != other.source.ngens() {
            return Err(Error::Dimension("composition of incompatible maps".into()));
        }
        let rows = self.rows.iter().map(|r| other.apply_raw(r)).collect();
        Ok(ModuleMap::unchecked(&self.source, &other.target, rows))
    }

    pub fn add(&self, other: &ModuleMap) -> ModuleMap {
        let ctx = self.ring().ctx();
        let rows = self.rows.iter().zip(&other.rows).map(|(a, b)| ctx.add(a, b)).collect();
        ModuleMap::unchecked(&self.source, &self.target, rows)
    }

    pub fn neg(&self) -> ModuleMap {
        let ctx = self.ring().ctx();
        let rows = self.rows.iter().map(|a| ctx.neg(a)).collect();
        ModuleMap::unchecked(&self.source, &self.target, rows)
    }

    pub fn scaled(&self, r: &SVec) -> ModuleMap {
        let ctx = self.ring().ctx();
        let rows = self.rows.iter().map(|a| ctx.mul_poly(r, a)).collect();
        ModuleMap::unchecked(&self.source, &self.target, rows)
    }

    /// Equality as maps (images agree modulo the target relations).
    pub fn equals(&self, other: &ModuleMap) -> bool {
        let ctx = self.ring().ctx();
        self.rows.len() == other.rows.len()
            && self
                .rows
                .iter()
                .zip(&other.rows)
                .all(|(a, b)| self.target.elem_is_zero(&ctx.sub(a, b)))
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|r| self.target.elem_is_zero(r))
    }

    /// Span of the image rows together with the target relations.
    fn image_span(&self) -> Span {
        let mut all = self.rows.clone();
        all.extend(self.target.rels().iter().cloned());
        Span::new(self.ring(), self.target.ngens(), all)
    }

    /// Some preimage of `y`, if `y` lies in the image.
    pub fn preimage(&self, y: &SVec) -> Option<SVec> {
        let c = self.image_span().lift(y)?;
        let g = self.source.ngens();
        Some(self.ring().ctx().remap(&c, |i| (i < g).then_some(i)))
    }

    /// Generators (in source coordinates) of the kernel.
    pub fn kernel_generators(&self) -> Vec<SVec> {
        let g = self.source.ngens();
        let ctx = self.ring().ctx();
        let mut out: Vec<SVec> = Vec::new();
        for s in self.image_span().syzygies() {
            let a = ctx.remap(&s, |i| (i < g).then_some(i));
            let a = self.source.reduce(&a);
            if !a.is_zero() && !out.contains(&a) {
                out.push(a);
            }
        }
        out
    }

    pub fn kernel(&self) -> SubModule {
        let gens = self.kernel_generators();
        submodule(&self.source, gens)
    }

    pub fn image(&self) -> SubModule {
        submodule(&self.target, self.rows.clone())
    }

    /// Cokernel with its projection from the target.
    pub fn cokernel(&self) -> (FpModule, ModuleMap) {
        let q = self.target.quotient_by(&self.rows);
        let p = ModuleMap::projection(&self.target, &q).expect("quotient map");
        (q, p)
    }

    pub fn is_surjective(&self) -> bool {
        let span = self.image_span();
        (0..self.target.ngens()).all(|j| span.contains(&self.target.gen(j)))
    }

    pub fn is_injective(&self) -> bool {
        self.kernel_generators().is_empty()
    }

    pub fn is_isomorphism(&self) -> bool {
        self.is_surjective() && self.is_injective()
    }

    /// Inverse of an isomorphism.
    pub fn inverse(&self) -> Option<ModuleMap> {
        if !self.is_isomorphism() {
            return None;
        }
        let rows: Option<Vec<SVec>> = (0..self.target.ngens())
            .map(|j| self.preimage(&self.target.gen(j)))
            .collect();
        Some(ModuleMap::unchecked(&self.target, &self.source, rows?))
    }

    /// Given a monomorphism `self: K -> N` and `f: M -> N` landing in its
    /// image, the unique `g: M -> K` with `self ∘ g = f`.
    pub fn factor_through(&self, f: &ModuleMap) -> Option<ModuleMap> {
        let rows: Option<Vec<SVec>> = f.rows.iter().map(|r| self.preimage(r)).collect();
        Some(ModuleMap::unchecked(&f.source, &self.source, rows?))
    }

    /// `f ⊕ g`.
    pub fn direct_sum(&self, other: &ModuleMap) -> Result<ModuleMap> {
        let ctx = self.ring().ctx();
        let src = self.source.direct_sum(&other.source)?;
        let tgt = self.target.direct_sum(&other.target)?;
        let mut rows = self.rows.clone();
        let off = self.target.ngens();
        rows.extend(other.rows.iter().map(|r| ctx.shift_comps(r, off)));
        Ok(ModuleMap::unchecked(&src, &tgt, rows))
    }

    /// `f ⊗ g` with the generator indexing of [`FpModule::tensor`].
    pub fn tensor(&self, other: &ModuleMap) -> Result<ModuleMap> {
        let ring = self.ring();
        let ctx = ring.ctx();
        let src = self.source.tensor(&other.source)?;
        let tgt = self.target.tensor(&other.target)?;
        let h2 = other.target.ngens();
        let mut rows = Vec::new();
        for a in &self.rows {
            for b in &other.rows {
                let mut acc = SVec::zero();
                for ta in &a.terms {
                    let ca = ctx.monomial(ta.coeff.clone(), ta.exps.clone(), 0);
                    let shifted = ctx.remap(b, |j| Some(ta.comp * h2 + j));
                    acc = ctx.add(&acc, &ctx.mul_poly(&ca, &shifted));
                }
                rows.push(acc);
            }
        }
        Ok(ModuleMap::unchecked(&src, &tgt, rows))
    }

    pub fn base_change(&self, theta: &RingMap) -> Result<ModuleMap> {
        let src = self.source.base_change(theta)?;
        let tgt = self.target.base_change(theta)?;
        let rows = self.rows.iter().map(|r| theta.apply_vec(r)).collect();
        ModuleMap::new(&src, &tgt, rows)
    }

    pub fn matrix_strings(&self) -> Vec<Vec<String>> {
        let n = self.target.ngens();
        self.rows.iter().map(|r| self.ring().fmt_vec(r, n)).collect()
    }
}

/// Submodule of `ambient` spanned by `gens`, presented on those generators.
pub fn submodule(ambient: &FpModule, gens: Vec<SVec>) -> SubModule {
    let sq = Subquotient::new(ambient, gens, vec![]);
    SubModule {
        module: sq.module.clone(),
        inclusion: sq.inclusion_raw(),
    }
}

/// `(span(K) + span(D)) / span(D)` inside an ambient module, presented and
/// pruned, with a way to compute classes of ambient elements.
#[derive(Clone, Debug)]
pub struct Subquotient {
    pub ambient: FpModule,
    pub module: FpModule,
    /// Representative in the ambient module of each generator of `module`.
    pub reps: Vec<SVec>,
    numer: usize,
    lifter: Span,
    to_pruned: ModuleMap,
}

impl Subquotient {
    pub fn new(ambient: &FpModule, numer: Vec<SVec>, denom: Vec<SVec>) -> Subquotient {
        let ring = ambient.ring();
        let ctx = ring.ctx();
        let s = numer.len();
        let mut all = numer.clone();
        all.extend(ambient.rels().iter().cloned());
        all.extend(denom.iter().cloned());
        let lifter = Span::new(ring, ambient.ngens(), all);
        let mut rels: Vec<SVec> = Vec::new();
        for z in lifter.syzygies() {
            let c = ring.nf_vec(&ctx.remap(&z, |i| (i < s).then_some(i)));
            if !c.is_zero() && !rels.contains(&c) {
                rels.push(c);
            }
        }
        let raw = FpModule::new(ring, s, rels).expect("rank s");
        let pruned = raw.prune();
        let reps = pruned
            .from_new
            .rows()
            .iter()
            .map(|c| ambient.reduce(&ctx.apply(c, &numer)))
            .collect();
        Subquotient {
            ambient: ambient.clone(),
            module: pruned.module,
            reps,
            numer: s,
            lifter,
            to_pruned: pruned.to_new,
        }
    }

    /// Class of an ambient element in the subquotient, if it lies in the numerator.
    pub fn class_of(&self, v: &SVec) -> Option<SVec> {
        let c = self.lifter.lift(v)?;
        let s = self.numer;
        let c = self.ambient.ring().ctx().remap(&c, |i| (i < s).then_some(i));
        Some(self.to_pruned.apply(&c))
    }

    fn inclusion_raw(&self) -> ModuleMap {
        ModuleMap::unchecked(&self.module, &self.ambient, self.reps.clone())
    }
}

/// Smallest integer `N` such that every element of `M` is killed by `c^N`,
/// over `Z`-type rings; used for nilpotence summaries.
fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1usize, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    go(0, n, k, &mut cur, &mut out);
    out
}

/// Laplace expansion along the first row.
fn determinant(ring: &Ring, m: &[Vec<SVec>]) -> SVec {
    match m.len() {
        0 => ring.one(),
        1 => m[0][0].clone(),
        n => {
            let mut acc = ring.zero();
            for j in 0..n {
                if ring.is_zero(&m[0][j]) {
                    continue;
                }
                let minor: Vec<Vec<SVec>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|&(c, _)| c != j)
                            .map(|(_, e)| e.clone())
                            .collect()
                    })
                    .collect();
                let term = ring.mul(&m[0][j], &determinant(ring, &minor));
                acc = if j % 2 == 0 {
                    ring.add(&acc, &term)
                } else {
                    ring.sub(&acc, &term)
                };
            }
            acc
        }
    }
}

pub fn integer_exponent(m: &FpModule) -> Option<BigInt> {
    let (inv, free) = m.integer_structure()?;
    if free > 0 {
        return None;
    }
    Some(inv.last().cloned().unwrap_or_else(BigInt::one))
}

/// `|d|` as u64 when small, for display.
pub fn small(d: &BigInt) -> Option<u64> {
    d.abs().to_u64()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::Domain;

    fn z() -> Ring {
        Ring::integers()
    }

    fn zmod(n: i64) -> FpModule {
        let r = z();
        FpModule::cyclic(&r, &[r.constant(n)])
    }

    #[test]
    fn kernel_of_two_on_z8() {
        let r = Ring::integers_mod(8);
        let m = FpModule::free(&r, 1);
        let f = ModuleMap::scalar(&m, &r.constant(2));
        let k = f.kernel();
        assert_eq!(k.module.describe(), "Z/2");
        assert_eq!(k.inclusion.rows(), &[r.constant(4)]);
    }

    #[test]
    fn cokernel_and_image_basics() {
        let r = z();
        let m = FpModule::free(&r, 1);
        let (c, _) = ModuleMap::scalar(&m, &r.constant(2)).cokernel();
        assert_eq!(c.describe(), "Z/2");
        let zero = ModuleMap::zero(&m, &m);
        assert!(zero.image().module.is_zero());
    }

    #[test]
    fn syzygies_of_two_four() {
        let r = z();
        let s = Span::new(&r, 1, vec![r.constant(2), r.constant(4)]);
        let syz = s.syzygies();
        assert_eq!(syz.len(), 1);
        let shown = r.fmt_vec(&syz[0], 2);
        assert!(shown == vec!["2", "-1"] || shown == vec!["-2", "1"], "{shown:?}");
    }

    #[test]
    fn tensor_and_hom_of_cyclic_groups() {
        let a = zmod(4);
        let b = zmod(6);
        assert_eq!(a.tensor(&b).unwrap().describe(), "Z/2");
        assert_eq!(a.hom(&b).unwrap().module.describe(), "Z/2");
    }

    #[test]
    fn predicates() {
        let m = zmod(6);
        assert!(ModuleMap::identity(&m).is_isomorphism());
        let r = z();
        let zz = FpModule::free(&r, 1);
        assert!(!ModuleMap::scalar(&zz, &r.constant(2)).is_isomorphism());
        assert!(zmod(1).is_zero());
    }

    #[test]
    fn base_change_to_third_of_z() {
        let zt = Ring::polynomial(Domain::Integers, &["t"]).unwrap();
        let s = zt.quotient(&[zt.parse("3t - 1").unwrap()]);
        let theta = RingMap::new(&z(), &s, vec![]).unwrap();
        let m = zmod(6).base_change(&theta).unwrap();
        assert_eq!(m.cardinality(), None);
        assert!(m.elem_is_zero(&s.ctx().mul_poly(&s.constant(2), &m.gen(0))));
        assert!(!m.is_zero());
    }

    #[test]
    fn mixed_integer_structure() {
        let r = z();
        let m = FpModule::new(&r, 2, vec![r.ctx().from_entries(&[r.constant(2), r.constant(4)])]).unwrap();
        assert_eq!(m.describe(), "Z/2 ⊕ Z");
    }

    #[test]
    fn field_dimension_of_truncated_polynomials() {
        let f2 = Ring::polynomial(Domain::Prime(2), &["x"]).unwrap();
        let r = f2.quotient(&[f2.parse("x^3").unwrap()]);
        let m = FpModule::free(&r, 2);
        assert_eq!(m.field_dimension(), Some(6));
        assert_eq!(m.cardinality(), Some(BigInt::from(64)));
    }
}
