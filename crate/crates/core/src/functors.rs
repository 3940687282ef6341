//! Completion functors: adic towers, completed tensor products, the derived
//! completion tower `Λ`, the derived torsion system `Γ`, `L_n` and the
//! completeness predicates.
//!
//! `Λ` at stage `n` is `Hom(K(x^n), X)`. Since Koszul complexes are bounded
//! and free this already computes `RHom`, so `X` needs no replacement.

use std::ops::RangeInclusive;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::complex::{hom_offsets, BoundedComplex, ChainMap, Homology};
use crate::error::{Error, Result};
use crate::koszul::{koszul_tower, Koszul};
use crate::module::{submodule, FpModule, ModuleMap};
use crate::poly::SVec;
use crate::ring::{Ideal, Ring, RingKind, Span};
use crate::tower::{self, ComplexSystem, Direction, Limit, ModuleSystem, System, SystemMap, Tower, Verdict, Witness};

/// A module or a bounded complex.
#[derive(Clone, Debug)]
pub enum Object {
    Module(FpModule),
    Complex(BoundedComplex),
}

impl Object {
    pub fn ring(&self) -> &Ring {
        match self {
            Object::Module(m) => m.ring(),
            Object::Complex(c) => c.ring(),
        }
    }

    /// Modules sit in degree 0.
    pub fn to_complex(&self) -> BoundedComplex {
        match self {
            Object::Module(m) => BoundedComplex::concentrated(m, 0),
            Object::Complex(c) => c.clone(),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Object::Module(m) => m.describe(),
            Object::Complex(c) => {
                let parts: Vec<String> = c.degrees().map(|n| format!("{n}: {}", c.term(n).describe())).collect();
                format!("complex [{}]", parts.join(", "))
            }
        }
    }
}

impl From<FpModule> for Object {
    fn from(m: FpModule) -> Self {
        Object::Module(m)
    }
}

impl From<BoundedComplex> for Object {
    fn from(c: BoundedComplex) -> Self {
        Object::Complex(c)
    }
}

fn identity_rows(m: &FpModule) -> Vec<SVec> {
    (0..m.ngens()).map(|i| m.gen(i)).collect()
}

/// `M / I^n M` with the canonical surjections.
pub fn adic_tower(m: &FpModule, ideal: &Ideal) -> Result<Tower> {
    m.ring().same_as(ideal.ring())?;
    let (m, ideal) = (m.clone(), ideal.clone());
    Ok(System::new(
        Direction::Inverse,
        move |n| Ok(m.mod_ideal(ideal.power(n as u32).gens())),
        |_, a: &FpModule, b: &FpModule| ModuleMap::new(b, a, identity_rows(b)),
    ))
}

pub fn adic_system(m: &FpModule, ideal: &Ideal, depth: usize) -> Result<ModuleSystem> {
    ModuleSystem::from_tower(&adic_tower(m, ideal)?, depth)
}

/// `X / I^n X` taken levelwise.
pub fn adic_complex_tower(c: &BoundedComplex, ideal: &Ideal) -> Result<ComplexSystem> {
    c.ring().same_as(ideal.ring())?;
    let (c, ideal) = (c.clone(), ideal.clone());
    Ok(System::new(
        Direction::Inverse,
        move |n| {
            if c.is_empty() {
                return Ok(BoundedComplex::zero(c.ring()));
            }
            let p = ideal.power(n as u32);
            let terms = c.degrees().map(|d| c.term(d).mod_ideal(p.gens())).collect();
            let diffs = c.degrees().skip(1).map(|d| c.d(d).rows().to_vec()).collect();
            BoundedComplex::new(c.ring(), c.lo(), terms, diffs)
        },
        |_, a: &BoundedComplex, b: &BoundedComplex| {
            let maps = b.degrees().map(|d| identity_rows(&b.term(d))).collect();
            ChainMap::new(b, a, maps)
        },
    ))
}

/// The tower `(M ⊗ N) / I^n` and its comparison with `M/I^n ⊗ N/I^n`.
#[derive(Clone, Debug)]
pub struct CompletedTensor {
    pub tower: ModuleSystem,
    pub comparison: Verdict,
}

pub fn completed_tensor_tower(m: &FpModule, n: &FpModule, ideal: &Ideal, depth: usize) -> Result<CompletedTensor> {
    let t = m.tensor(n)?;
    let tower = adic_system(&t, ideal, depth)?;
    let mut witnesses = Vec::new();
    let mut evidence = Vec::new();
    for k in 1..=depth {
        let p = ideal.power(k as u32);
        let f = m.mod_ideal(p.gens()).tensor(&n.mod_ideal(p.gens()))?;
        let stage = tower.stage(k);
        let map = ModuleMap::new(stage, &f, identity_rows(stage))?;
        if map.is_isomorphism() {
            witnesses.push(Witness::Levelwise {
                stage: k,
                fact: format!("comparison is an isomorphism onto {}", f.describe()),
            });
        } else {
            evidence.push(format!("stage {k}: comparison is not an isomorphism"));
        }
    }
    let comparison = if evidence.is_empty() {
        Verdict::holds(depth, witnesses)
    } else {
        Verdict::fails(depth, evidence)
    };
    Ok(CompletedTensor { tower, comparison })
}

fn nonzero_generators(ideal: &Ideal) -> Result<Vec<SVec>> {
    if ideal.gens().is_empty() {
        return Err(Error::Precondition(
            "the ideal needs at least one nonzero generator".into(),
        ));
    }
    Ok(ideal.gens().to_vec())
}

/// The derived completion tower `Λ_n = Hom(K(x^n), X)`.
pub struct DerivedCompletion {
    x: BoundedComplex,
    ideal: Ideal,
    koszul: Arc<System<Koszul, ChainMap>>,
    tower: ComplexSystem,
}

pub fn derived_completion(x: &BoundedComplex, ideal: &Ideal) -> Result<DerivedCompletion> {
    x.ring().same_as(ideal.ring())?;
    let gens = nonzero_generators(ideal)?;
    let koszul = Arc::new(koszul_tower(x.ring(), &gens, Direction::Directed)?);
    let (k1, k2) = (koszul.clone(), koszul.clone());
    let (x1, x2) = (x.clone(), x.clone());
    let tower = System::new(
        Direction::Inverse,
        move |n| k1.stage(n)?.complex.hom_to(&x1),
        move |n, _: &BoundedComplex, _: &BoundedComplex| k2.transition(n)?.hom_into(&x2),
    );
    Ok(DerivedCompletion {
        x: x.clone(),
        ideal: ideal.clone(),
        koszul,
        tower,
    })
}

fn homology_tower(
    direction: Direction,
    stages: &[BoundedComplex],
    maps: &[ChainMap],
    degree: i32,
) -> Result<(ModuleSystem, Vec<Homology>)> {
    let hs: Vec<Homology> = stages.iter().map(|c| c.homology(degree)).collect();
    let mut out = Vec::new();
    for (n, f) in maps.iter().enumerate() {
        let (a, b) = match direction {
            Direction::Inverse => (&hs[n + 1], &hs[n]),
            Direction::Directed => (&hs[n], &hs[n + 1]),
        };
        out.push(f.on_homology_with(a, b)?);
    }
    let sys = ModuleSystem::new(direction, hs.iter().map(|h| h.module().clone()).collect(), out)?;
    Ok((sys, hs))
}

impl DerivedCompletion {
    pub fn input(&self) -> &BoundedComplex {
        &self.x
    }

    pub fn ideal(&self) -> &Ideal {
        &self.ideal
    }

    pub fn k(&self) -> usize {
        self.ideal.gens().len()
    }

    /// Degrees where stages can have nonzero terms.
    pub fn degrees(&self) -> RangeInclusive<i32> {
        if self.x.is_empty() {
            #[allow(clippy::reversed_empty_ranges)]
            return 1..=0;
        }
        self.x.lo()..=self.x.hi() + self.k() as i32
    }

    pub fn stage(&self, n: usize) -> Result<BoundedComplex> {
        self.tower.stage(n)
    }

    pub fn prefix(&self, depth: usize) -> Result<(Vec<BoundedComplex>, Vec<ChainMap>)> {
        self.tower.prefix(depth)
    }

    /// The inverse system `H_degree(Λ_n)` with the homology of each stage.
    pub fn homology(&self, degree: i32, depth: usize) -> Result<(ModuleSystem, Vec<Homology>)> {
        let (stages, maps) = self.prefix(depth)?;
        homology_tower(Direction::Inverse, &stages, &maps, degree)
    }

    fn lambda_rows(&self, kz: &Koszul, d: i32, v: &SVec) -> SVec {
        let off = hom_offsets(&kz.complex, &self.x, d).get(0);
        self.x.ring().ctx().shift_comps(v, off)
    }

    /// `λ_n: X -> Λ_n`, dual to the augmentation `K(x^n) -> R`.
    pub fn lambda(&self, n: usize) -> Result<ChainMap> {
        let stage = self.stage(n)?;
        let kz = self.koszul.stage(n)?;
        let ctx = self.x.ring().ctx();
        let maps = self
            .x
            .degrees()
            .map(|d| {
                (0..self.x.rank(d))
                    .map(|i| self.lambda_rows(&kz, d, &ctx.unit_vector(i)))
                    .collect()
            })
            .collect();
        ChainMap::new(&self.x, &stage, maps)
    }

    /// `λ_*` from the constant system `H_degree(X)` to the homology tower.
    pub fn lambda_on_homology(&self, degree: i32, depth: usize) -> Result<SystemMap> {
        let hx = self.x.homology(degree);
        let (target, hs) = self.homology(degree, depth)?;
        let maps = (1..=depth)
            .map(|n| self.lambda(n)?.on_homology_with(&hx, &hs[n - 1]))
            .collect::<Result<Vec<_>>>()?;
        let source = ModuleSystem::constant(hx.module(), Direction::Inverse, depth);
        SystemMap::new(source, target, maps)
    }

    /// `λ_*: H/(x^n)H -> H_degree(Λ_n)` for `H = H_degree(X)`.
    pub fn edge_map(&self, degree: i32, depth: usize) -> Result<SystemMap> {
        let hx = self.x.homology(degree);
        let (target, hs) = self.homology(degree, depth)?;
        let gens = nonzero_generators(&self.ideal)?;
        let ideal = Ideal::new(self.x.ring(), &gens);
        let mut stages = Vec::new();
        let mut maps = Vec::new();
        for n in 1..=depth {
            let q = hx.module().mod_ideal(ideal.generator_powers(n as u32).gens());
            let l = self.lambda(n)?.on_homology_with(&hx, &hs[n - 1])?;
            maps.push(ModuleMap::new(&q, &hs[n - 1].module().clone(), l.rows().to_vec())?);
            stages.push(q);
        }
        let transitions = (1..depth)
            .map(|n| ModuleMap::new(&stages[n], &stages[n - 1], identity_rows(&stages[n])))
            .collect::<Result<Vec<_>>>()?;
        let source = ModuleSystem::new(Direction::Inverse, stages, transitions)?;
        SystemMap::new(source, target, maps)
    }

    fn module_input(&self) -> Result<FpModule> {
        if self.x.is_empty() {
            return Ok(FpModule::zero(self.x.ring()));
        }
        if self.x.lo() != 0 || self.x.hi() != 0 {
            return Err(Error::Precondition("expected a module placed in degree 0".into()));
        }
        Ok(self.x.term(0))
    }

    /// `ε_n: H_0(Λ_n) -> M/I^n M` for a module input, reading a cycle of
    /// `Hom(K, M)_0` as the element of `M` it assigns to `e_∅`.
    pub fn epsilon(&self, depth: usize) -> Result<SystemMap> {
        let m = self.module_input()?;
        let adic = adic_system(&m, &self.ideal, depth)?;
        let (h0, hs) = self.homology(0, depth)?;
        let ctx = m.ring().ctx();
        let h = m.ngens();
        let mut maps = Vec::new();
        for n in 1..=depth {
            let kz = self.koszul.stage(n)?;
            let off = hom_offsets(&kz.complex, &self.x, 0).get(0);
            let rows = hs[n - 1]
                .representatives()
                .iter()
                .map(|z| ctx.remap(z, |c| (c >= off && c < off + h).then(|| c - off)))
                .collect();
            maps.push(ModuleMap::new(hs[n - 1].module(), adic.stage(n), rows)?);
        }
        SystemMap::new(h0, adic, maps)
    }

    /// `λ_*: M/(x^n)M -> H_0(Λ_n)` is an isomorphism at every stage.
    pub fn quotient_iso(&self, depth: usize) -> Result<Verdict> {
        let f = self.edge_map(0, depth)?;
        let mut witnesses = Vec::new();
        let mut evidence = Vec::new();
        for (n, map) in f.maps.iter().enumerate() {
            if map.is_isomorphism() {
                witnesses.push(Witness::Levelwise {
                    stage: n + 1,
                    fact: format!("M/(x^{})M ≅ H_0 = {}", n + 1, map.target().describe()),
                });
            } else {
                evidence.push(format!("stage {}: λ_* is not an isomorphism", n + 1));
            }
        }
        Ok(if evidence.is_empty() {
            Verdict::holds(depth, witnesses)
        } else {
            Verdict::fails(depth, evidence)
        })
    }
}

/// The derived torsion system `Γ_n = K(x^n) ⊗ X`.
pub struct DerivedTorsion {
    x: BoundedComplex,
    k: usize,
    system: ComplexSystem,
}

pub fn derived_torsion(x: &BoundedComplex, ideal: &Ideal) -> Result<DerivedTorsion> {
    x.ring().same_as(ideal.ring())?;
    let gens = nonzero_generators(ideal)?;
    let koszul = Arc::new(koszul_tower(x.ring(), &gens, Direction::Directed)?);
    let (k1, k2) = (koszul.clone(), koszul);
    let (x1, x2) = (x.clone(), x.clone());
    let system = System::new(
        Direction::Directed,
        move |n| k1.stage(n)?.complex.tensor(&x1),
        move |n, _: &BoundedComplex, _: &BoundedComplex| k2.transition(n)?.tensor(&ChainMap::identity(&x2)),
    );
    Ok(DerivedTorsion {
        x: x.clone(),
        k: gens.len(),
        system,
    })
}

impl DerivedTorsion {
    pub fn degrees(&self) -> RangeInclusive<i32> {
        if self.x.is_empty() {
            #[allow(clippy::reversed_empty_ranges)]
            return 1..=0;
        }
        self.x.lo() - self.k as i32..=self.x.hi()
    }

    pub fn stage(&self, n: usize) -> Result<BoundedComplex> {
        self.system.stage(n)
    }

    pub fn homology(&self, degree: i32, depth: usize) -> Result<ModuleSystem> {
        let (stages, maps) = self.system.prefix(depth)?;
        Ok(homology_tower(Direction::Directed, &stages, &maps, degree)?.0)
    }
}

/// Certifies `(x^n) ⊆ I^n` and `I^(k(n-1)+1) ⊆ (x^n)` for `n ≤ depth`.
/// Together these make the `(x^n)`-adic and `I`-adic towers of any module
/// pro-isomorphic.
pub fn interleaving(ideal: &Ideal, depth: usize) -> Verdict {
    let k = ideal.gens().len();
    if k <= 1 {
        return Verdict::holds(
            depth,
            vec![Witness::Exact {
                fact: "(x^n) = I^n for a principal ideal".into(),
            }],
        );
    }
    let mut witnesses = Vec::new();
    for n in 1..=depth {
        let xn = ideal.generator_powers(n as u32);
        let upper = ideal.power(n as u32).contains(&xn).unwrap_or(false);
        let e = k * (n - 1) + 1;
        let lower = xn.contains(&ideal.power(e as u32)).unwrap_or(false);
        if !(upper && lower) {
            return Verdict::fails(depth, vec![format!("containment fails at n = {n}")]);
        }
        witnesses.push(Witness::Containment {
            smaller: format!("I^{e}"),
            larger: format!("(x^{n})"),
        });
    }
    Verdict::holds(depth, witnesses)
}

/// The comparison of `H_*(Λ)` with the adic tower for a module.
#[derive(Clone, Debug)]
pub struct GmComparison {
    pub depth: usize,
    /// `H_0` tower against the adic tower.
    pub h0: Verdict,
    /// `M/(x^n)M ≅ H_0(Λ_n)` at each stage.
    pub quotient_iso: Verdict,
    pub interleaving: Verdict,
    /// Pro-vanishing of `H_i` for `i ≥ 1`.
    pub higher: Vec<(i32, Verdict)>,
    pub h0_stages: Vec<String>,
    pub adic_stages: Vec<String>,
}

impl GmComparison {
    pub fn verdict(&self) -> Verdict {
        let mut parts = vec![self.h0.clone()];
        parts.extend(self.higher.iter().map(|(_, v)| v.clone()));
        Verdict::all(self.depth, &parts)
    }
}

pub fn gm_comparison(m: &FpModule, ideal: &Ideal, depth: usize) -> Result<GmComparison> {
    let x = BoundedComplex::concentrated(m, 0);
    let dc = derived_completion(&x, ideal)?;
    let eps = dc.epsilon(depth)?;
    let direct = tower::pro_iso(&eps);
    let quotient_iso = dc.quotient_iso(depth)?;
    let inter = interleaving(ideal, depth);
    let h0 = if direct.is_holds() {
        direct
    } else if quotient_iso.is_holds() && inter.is_holds() {
        Verdict::holds(depth, inter.witnesses.clone())
            .with_note("H_0 stages are M/(x^n)M and the ideals (x^n), I^n interleave, so the towers are pro-isomorphic")
    } else {
        direct
    };
    let mut higher = Vec::new();
    for i in dc.degrees().filter(|&i| i != 0) {
        let (sys, _) = dc.homology(i, depth)?;
        higher.push((i, tower::pro_zero(&sys)));
    }
    Ok(GmComparison {
        depth,
        h0,
        quotient_iso,
        interleaving: inter,
        higher,
        h0_stages: eps.source.describe_stages(),
        adic_stages: eps.target.describe_stages(),
    })
}

/// `L_n^I M` evaluated through `H_n` of the `Λ` tower.
#[derive(Clone, Debug)]
pub struct LReport {
    pub n: usize,
    pub depth: usize,
    pub verdict: Verdict,
    pub stages: Vec<String>,
    /// The exact value when the tower is eventually constant.
    pub value: Option<FpModule>,
}

pub fn l_functor(m: &FpModule, ideal: &Ideal, n: usize, depth: usize) -> Result<LReport> {
    let x = BoundedComplex::concentrated(m, 0);
    let dc = derived_completion(&x, ideal)?;
    let (sys, _) = dc.homology(n as i32, depth)?;
    let stages = sys.describe_stages();
    if n == 0 {
        let gm = gm_comparison(m, ideal, depth)?;
        let value = match tower::eventual_limit(&sys) {
            Limit::Module { module, .. } => Some(module),
            Limit::ProObject(_) => None,
        };
        return Ok(LReport {
            n,
            depth,
            verdict: gm.h0,
            stages,
            value,
        });
    }
    let verdict = tower::pro_zero(&sys);
    let value = verdict.is_holds().then(|| FpModule::zero(m.ring()));
    Ok(LReport {
        n,
        depth,
        verdict,
        stages,
        value,
    })
}

/// How the chain `I^n M` behaves within the window.
#[derive(Clone, Debug, PartialEq, Eq)]
enum ChainEnd {
    Zero(usize),
    /// `I^n M = I^(n+1) M ≠ 0`.
    Stable(usize),
    Decreasing,
}

fn power_submodule(m: &FpModule, ideal: &Ideal, n: usize) -> Vec<SVec> {
    m.ideal_times(ideal.power(n as u32).gens())
        .into_iter()
        .filter(|v| !m.elem_is_zero(v))
        .collect()
}

fn chain_end(m: &FpModule, ideal: &Ideal, depth: usize) -> (ChainEnd, FpModule) {
    let mut prev = identity_rows(m)
        .into_iter()
        .filter(|v| !m.elem_is_zero(v))
        .collect::<Vec<_>>();
    if prev.is_empty() {
        return (ChainEnd::Zero(0), FpModule::zero(m.ring()));
    }
    for n in 1..=depth {
        let cur = power_submodule(m, ideal, n);
        if cur.is_empty() {
            return (ChainEnd::Zero(n), FpModule::zero(m.ring()));
        }
        let mut rows = cur.clone();
        rows.extend(m.rels().iter().cloned());
        let span = Span::new(m.ring(), m.ngens(), rows);
        if prev.iter().all(|v| span.contains(v)) {
            let stable = submodule(m, prev).module;
            return (ChainEnd::Stable(n - 1), stable);
        }
        prev = cur;
    }
    (ChainEnd::Decreasing, FpModule::zero(m.ring()))
}

fn integer_of(ring: &Ring, p: &SVec) -> Option<BigInt> {
    let c = ring.ctx().is_constant(p)?;
    c.is_integer().then(|| c.to_integer())
}

/// Separatedness and completeness over `Z` or `Z/m` from the structure
/// theorem: with `I = (a)`, a summand `Z/d` meets `∩ a^n M` in the part of
/// `d` prime to `a`, and a free summand is separated but not complete.
fn euclidean_decision(m: &FpModule, ideal: &Ideal) -> Option<(Verdict, Verdict, String)> {
    let ring = m.ring();
    if !matches!(ring.kind(), RingKind::Integers | RingKind::IntegersMod(_)) {
        return None;
    }
    let (inv, free) = m.integer_structure()?;
    let mut a = BigInt::zero();
    for g in ideal.gens() {
        a = a.gcd(&integer_of(ring, g)?);
    }
    if let Some(md) = ring.integer_modulus() {
        a = a.gcd(&md);
    }
    let structure = m.describe();
    let mut divisible = Vec::new();
    for d in &inv {
        let mut rest = d.abs();
        loop {
            let g = rest.gcd(&a);
            if g.is_one() || g.is_zero() {
                break;
            }
            rest /= g;
        }
        if !rest.is_one() {
            divisible.push(rest);
        }
    }
    let unit = a.abs().is_one();
    let sep_fail: Vec<String> = divisible
        .iter()
        .map(|d| format!("Z/{d} is a-divisible inside M ≅ {structure} with a = {a}"))
        .chain((unit && free > 0).then(|| "I is the unit ideal and M has a free summand".to_string()))
        .collect();
    let separated = if sep_fail.is_empty() {
        Verdict::holds(
            0,
            vec![Witness::Exact {
                fact: format!("M ≅ {structure}: every torsion summand is a-primary for a = {a}"),
            }],
        )
    } else {
        Verdict::fails(0, sep_fail.clone())
    };
    let complete = if !sep_fail.is_empty() {
        Verdict::fails(0, sep_fail)
    } else if free > 0 && !a.is_zero() {
        Verdict::fails(
            0,
            vec![format!(
                "M ≅ {structure} has a free summand, whose completion is strictly larger"
            )],
        )
    } else {
        Verdict::holds(
            0,
            vec![Witness::Exact {
                fact: format!("M ≅ {structure} is killed by a power of {a}"),
            }],
        )
    };
    Some((separated, complete, structure))
}

/// Homogeneous defining ideal, generators of `I` of positive degree and
/// homogeneous relations with all module generators in degree 0.
fn is_positively_graded(m: &FpModule, ideal: &Ideal) -> bool {
    let ring = m.ring();
    let ctx = ring.ctx();
    ring.nvars() > 0
        && ring.defining().iter().all(|p| ctx.is_homogeneous(p))
        && ideal
            .gens()
            .iter()
            .all(|g| ctx.is_homogeneous(g) && ctx.total_degree(g).is_some_and(|d| d > 0))
        && m.rels().iter().all(|r| ctx.is_homogeneous(r))
}

#[derive(Clone, Debug)]
pub struct GeneratorEvidence {
    pub generator: String,
    pub verdict: Verdict,
}

#[derive(Clone, Debug)]
pub struct CompletionProfile {
    pub depth: usize,
    pub separated: Verdict,
    pub adically_complete: Verdict,
    pub l0_complete: Verdict,
    pub derived_complete: Verdict,
    pub per_generator: Vec<GeneratorEvidence>,
}

impl CompletionProfile {
    /// complete ⟹ separated ∧ l0, and l0 ⟹ derived, checked when all four
    /// verdicts are certified.
    pub fn implications_hold(&self) -> bool {
        let all = [
            &self.separated,
            &self.adically_complete,
            &self.l0_complete,
            &self.derived_complete,
        ];
        if !all.iter().all(|v| v.is_certified()) {
            return true;
        }
        let c = self.adically_complete.is_holds();
        let s = self.separated.is_holds();
        let l = self.l0_complete.is_holds();
        let d = self.derived_complete.is_holds();
        (!c || (s && l)) && (!l || d)
    }
}

fn set_depth(mut v: Verdict, depth: usize) -> Verdict {
    v.depth = depth;
    v
}

pub fn completeness_profile(m: &FpModule, ideal: &Ideal, depth: usize) -> Result<CompletionProfile> {
    m.ring().same_as(ideal.ring())?;
    let ring = m.ring();
    let (end, stable) = chain_end(m, ideal, depth);
    let torsion = m.is_power_torsion(ideal);
    let euclid = euclidean_decision(m, ideal);

    let separated = match &end {
        ChainEnd::Zero(n) => Verdict::holds(depth, vec![Witness::Nilpotent { power: *n }]),
        ChainEnd::Stable(n) => Verdict::fails(
            depth,
            vec![format!(
                "I^{n}M = I^{}M, so the nonzero stable submodule {} lies in every I^kM",
                n + 1,
                stable.describe()
            )],
        ),
        ChainEnd::Decreasing => {
            if let Some((s, _, _)) = &euclid {
                set_depth(s.clone(), depth)
            } else if torsion == Some(true) {
                Verdict::holds(
                    depth,
                    vec![Witness::Exact {
                        fact: "I ⊆ √Fitt_0(M), so a power of I kills M".into(),
                    }],
                )
            } else if is_positively_graded(m, ideal) {
                Verdict::holds(
                    depth,
                    vec![Witness::Exact {
                        fact: "graded module with I in positive degrees: I^nM lives in degrees ≥ n".into(),
                    }],
                )
            } else {
                Verdict::undetermined(
                    depth,
                    "no separatedness certificate outside Euclidean and positively graded inputs",
                )
            }
        }
    };

    let complete = match (&end, torsion) {
        (ChainEnd::Zero(n), _) => Verdict::holds(depth, vec![Witness::Nilpotent { power: *n }]),
        (ChainEnd::Stable(_), _) => {
            let mut v = Verdict::fails(depth, separated.evidence.clone());
            v.note = Some("not separated".into());
            v
        }
        (ChainEnd::Decreasing, _) if euclid.is_some() => set_depth(euclid.as_ref().unwrap().1.clone(), depth),
        (ChainEnd::Decreasing, Some(true)) => Verdict::holds(
            depth,
            vec![Witness::Exact {
                fact: "I ⊆ √Fitt_0(M), so a power of I kills M".into(),
            }],
        ),
        (ChainEnd::Decreasing, Some(false)) => {
            Verdict::fails(depth, vec!["I ⊄ √Fitt_0(M): M is not killed by any power of I".into()])
                .with_note("finitely generated complete modules over the supported rings are I-power torsion")
        }
        (ChainEnd::Decreasing, None) => Verdict::undetermined(depth, "Fitting ideal too large to list"),
    };

    let mut per_generator = Vec::new();
    for x in ideal.gens() {
        let xi = Ideal::new(ring, std::slice::from_ref(x));
        let (e, st) = chain_end(m, &xi, depth);
        let verdict = match e {
            ChainEnd::Zero(n) => Verdict::holds(depth, vec![Witness::Nilpotent { power: n }]),
            ChainEnd::Stable(n) => Verdict::fails(
                depth,
                vec![format!(
                    "x^{n}M = x^{}M ≅ {} ≠ 0 is x-divisible, so Hom(R[1/x], M) ≠ 0",
                    n + 1,
                    st.describe()
                )],
            ),
            ChainEnd::Decreasing => match m.is_power_torsion(&xi) {
                Some(true) => Verdict::holds(
                    depth,
                    vec![Witness::Exact {
                        fact: "x ∈ √Fitt_0(M), so x acts nilpotently".into(),
                    }],
                ),
                Some(false) => {
                    let t = ModuleSystem::new(
                        Direction::Inverse,
                        vec![m.clone(); depth],
                        vec![ModuleMap::scalar(m, x); depth.saturating_sub(1)],
                    )?;
                    let ml = tower::ml_lim(&t).ml;
                    let mut ev = vec![format!(
                        "x is not nilpotent on M, and the chain x^kM is strictly decreasing up to {depth}"
                    )];
                    ev.extend(
                        ml.evidence
                            .iter()
                            .map(|e| format!("Mittag-Leffler fails on {{M ←x M}}: {e}")),
                    );
                    Verdict::fails(depth, ev)
                        .with_note("a countable tower failing Mittag-Leffler has lim¹ = Ext¹(R[1/x], M) ≠ 0")
                }
                None => Verdict::undetermined(depth, "Fitting ideal too large to list"),
            },
        };
        per_generator.push(GeneratorEvidence {
            generator: ring.fmt(x),
            verdict,
        });
    }
    let l0_parts: Vec<Verdict> = per_generator.iter().map(|g| g.verdict.clone()).collect();
    let l0_complete = Verdict::all(depth, &l0_parts);

    let derived_complete = derived_complete_verdict(m, ideal, depth, torsion)?;
    Ok(CompletionProfile {
        depth,
        separated,
        adically_complete: complete,
        l0_complete,
        derived_complete,
        per_generator,
    })
}

/// `λ: M -> Λ` as a pro-isomorphism on every homology tower. A module killed
/// by a power of `I` is derived complete whatever the window shows.
fn derived_complete_verdict(m: &FpModule, ideal: &Ideal, depth: usize, torsion: Option<bool>) -> Result<Verdict> {
    if ideal.gens().is_empty() {
        return Ok(Verdict::holds(
            depth,
            vec![Witness::Exact {
                fact: "zero ideal: Λ is the identity".into(),
            }],
        ));
    }
    let x = BoundedComplex::concentrated(m, 0);
    let dc = derived_completion(&x, ideal)?;
    let mut parts = Vec::new();
    for i in dc.degrees() {
        let v = if i == 0 {
            tower::pro_iso(&dc.lambda_on_homology(0, depth)?)
        } else {
            tower::pro_zero(&dc.homology(i, depth)?.0)
        };
        parts.push(v);
    }
    let v = Verdict::all(depth, &parts);
    if !v.is_holds() && torsion == Some(true) {
        return Ok(Verdict::holds(
            depth,
            vec![Witness::Exact {
                fact: "I ⊆ √Fitt_0(M): bounded I-power torsion modules are derived complete".into(),
            }],
        ));
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::Domain;

    fn z() -> Ring {
        Ring::integers()
    }

    fn zmod(d: i64) -> FpModule {
        let r = z();
        FpModule::cyclic(&r, &[r.constant(d)])
    }

    fn two() -> Ideal {
        Ideal::new(&z(), &[z().constant(2)])
    }

    #[test]
    fn adic_tower_of_z() {
        let r = z();
        let sys = adic_system(&FpModule::free(&r, 1), &two(), 4).unwrap();
        assert_eq!(sys.describe_stages(), ["Z/2", "Z/4", "Z/8", "Z/16"]);
        let sys = adic_system(&zmod(6), &two(), 3).unwrap();
        assert_eq!(sys.describe_stages(), ["Z/2", "Z/2", "Z/2"]);
        let sys = adic_system(&zmod(6), &Ideal::unit(&r), 2).unwrap();
        assert!(sys.stages.iter().all(|s| s.is_zero()));
    }

    #[test]
    fn completed_tensor_comparison() {
        let r = z();
        let ct = completed_tensor_tower(&zmod(6), &FpModule::free(&r, 1), &two(), 3).unwrap();
        assert!(ct.comparison.is_holds());
        assert_eq!(ct.tower.describe_stages(), ["Z/2", "Z/2", "Z/2"]);
    }

    #[test]
    fn lambda_of_z() {
        let r = z();
        let x = BoundedComplex::concentrated(&FpModule::free(&r, 1), 0);
        let dc = derived_completion(&x, &two()).unwrap();
        let (h0, _) = dc.homology(0, 4).unwrap();
        assert_eq!(h0.describe_stages(), ["Z/2", "Z/4", "Z/8", "Z/16"]);
        let (h1, _) = dc.homology(1, 4).unwrap();
        assert!(h1.stages.iter().all(|s| s.is_zero()));
        assert!(tower::pro_iso(&dc.epsilon(4).unwrap()).is_holds());
    }

    #[test]
    fn lambda_of_z8_is_pro_iso() {
        let x = BoundedComplex::concentrated(&zmod(8), 0);
        let dc = derived_completion(&x, &two()).unwrap();
        let (h0, _) = dc.homology(0, 5).unwrap();
        assert_eq!(h0.describe_stages(), ["Z/2", "Z/4", "Z/8", "Z/8", "Z/8"]);
        assert!(tower::pro_iso(&dc.lambda_on_homology(0, 5).unwrap()).is_holds());
        assert!(tower::pro_zero(&dc.homology(1, 5).unwrap().0).is_holds());
    }

    #[test]
    fn lambda_of_z3_vanishes() {
        let x = BoundedComplex::concentrated(&zmod(3), 0);
        let dc = derived_completion(&x, &two()).unwrap();
        for i in dc.degrees() {
            assert!(tower::pro_zero(&dc.homology(i, 4).unwrap().0).is_holds());
        }
    }

    #[test]
    fn torsion_of_z() {
        let r = z();
        let x = BoundedComplex::concentrated(&FpModule::free(&r, 1), 0);
        let g = derived_torsion(&x, &two()).unwrap();
        let h = g.homology(-1, 4).unwrap();
        assert_eq!(h.describe_stages(), ["Z/2", "Z/4", "Z/8", "Z/16"]);
        assert!(h.maps.iter().all(|f| f.is_injective()));
        assert!(g.homology(0, 4).unwrap().stages.iter().all(|s| s.is_zero()));
        let x = BoundedComplex::concentrated(&zmod(8), 0);
        let g = derived_torsion(&x, &two()).unwrap();
        assert_eq!(g.homology(0, 5).unwrap().describe_stages()[2..], ["Z/8", "Z/8", "Z/8"]);
    }

    #[test]
    fn torsion_vanishes_where_x_is_a_unit() {
        let r = Ring::polynomial(Domain::Rationals, &["x", "y"]).unwrap();
        let m = FpModule::cyclic(&r, &[r.parse("x - 1").unwrap()]);
        let i = Ideal::parse(&r, &["x", "y"]).unwrap();
        let g = derived_torsion(&BoundedComplex::concentrated(&m, 0), &i).unwrap();
        for d in g.degrees() {
            assert!(tower::ind_zero(&g.homology(d, 3).unwrap()).is_holds());
        }
    }

    #[test]
    fn l_functor_values() {
        let r = z();
        let l = l_functor(&zmod(8), &two(), 0, 5).unwrap();
        assert!(l.verdict.is_holds());
        assert_eq!(l.value.unwrap().describe(), "Z/8");
        assert!(l_functor(&FpModule::free(&r, 1), &two(), 1, 5)
            .unwrap()
            .verdict
            .is_holds());
        let l = l_functor(&zmod(3), &two(), 0, 5).unwrap();
        assert!(l.value.unwrap().is_zero());
    }

    #[test]
    fn gm_comparison_for_two_generators() {
        let r = Ring::polynomial(Domain::Rationals, &["x", "y"]).unwrap();
        let i = Ideal::parse(&r, &["x", "y"]).unwrap();
        let gm = gm_comparison(&FpModule::free(&r, 1), &i, 4).unwrap();
        assert!(gm.quotient_iso.is_holds());
        assert!(gm.interleaving.is_holds());
        assert!(gm.verdict().is_holds());
    }

    #[test]
    fn profiles() {
        let r = z();
        let p = completeness_profile(&zmod(8), &two(), 5).unwrap();
        for v in [&p.separated, &p.adically_complete, &p.l0_complete, &p.derived_complete] {
            assert!(v.is_holds(), "{v:?}");
        }
        let p = completeness_profile(&FpModule::free(&r, 1), &two(), 6).unwrap();
        assert!(p.separated.is_holds());
        assert!(p.adically_complete.is_fails());
        assert!(p.l0_complete.is_fails());
        assert!(p.derived_complete.is_fails());
        let p = completeness_profile(&zmod(3), &two(), 5).unwrap();
        assert!(p.separated.is_fails());
        assert!(p.l0_complete.is_fails());
        assert!(p.derived_complete.is_fails());
        assert!(p.implications_hold());
        let p = completeness_profile(&zmod(1024), &two(), 3).unwrap();
        assert!(p.adically_complete.is_holds() && p.derived_complete.is_holds());
        assert!(p.implications_hold());
    }
}
