//! Inverse and directed systems, and certified verdicts about them.
//!
//! Stages are indexed from 1. In an inverse system the transition at `n`
//! goes from stage `n + 1` to stage `n`; in a directed system from `n` to
//! `n + 1`. Every verdict records the depth it looked at.

use std::fmt;
use std::sync::{Arc, RwLock};

use serde::{Deserialize, Serialize};

use crate::complex::{BoundedComplex, ChainMap};
use crate::error::{Error, Result};
use crate::module::{FpModule, ModuleMap};
use crate::ring::Span;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Inverse,
    Directed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Holds,
    FailsUpToDepth,
    Undetermined,
}

impl Status {
    pub fn glyph(self) -> &'static str {
        match self {
            Status::Holds => "✓",
            Status::FailsUpToDepth => "✗",
            Status::Undetermined => "?",
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Status::Holds => "holds",
            Status::FailsUpToDepth => "fails",
            Status::Undetermined => "undetermined",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// The composite between stages `from` and `to` is the zero map.
    ZeroComposite { from: usize, to: usize },
    /// A pro- or ind-isomorphism certified with the given index shift.
    ProIso { shift: usize },
    /// Images of composites into `stage` agree from stage `from` on.
    Stable { stage: usize, from: usize },
    /// All transitions from stage `from` to the depth are isomorphisms.
    Constant { from: usize },
    /// A stage or map checked directly.
    Levelwise { stage: usize, fact: String },
    /// Containments `a ⊆ b` of ideals used to re-index.
    Containment { smaller: String, larger: String },
    /// Nilpotence: the ideal power `power` kills the module.
    Nilpotent { power: usize },
    /// Stages and transitions repeat from stage `from` on, and the repeated
    /// transition composed `order` times is zero.
    Stationary { from: usize, order: usize },
    /// Exactly decided fact.
    Exact { fact: String },
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::ZeroComposite { from, to } => write!(f, "zero {from}→{to}"),
            Witness::ProIso { shift } => write!(f, "shift {shift}"),
            Witness::Stable { stage, from } => write!(f, "stage {stage} stable from {from}"),
            Witness::Constant { from } => write!(f, "constant from {from}"),
            Witness::Levelwise { stage, fact } => write!(f, "stage {stage}: {fact}"),
            Witness::Containment { smaller, larger } => write!(f, "{smaller} ⊆ {larger}"),
            Witness::Nilpotent { power } => write!(f, "I^{power} kills M"),
            Witness::Stationary { from, order } => {
                write!(f, "stationary from {from}, transition nilpotent of order {order}")
            }
            Witness::Exact { fact } => write!(f, "{fact}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub status: Status,
    pub depth: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<Witness>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub evidence: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Verdict {
    pub fn holds(depth: usize, witnesses: Vec<Witness>) -> Verdict {
        Verdict {
            status: Status::Holds,
            depth,
            witnesses,
            evidence: vec![],
            note: None,
        }
    }

    pub fn fails(depth: usize, evidence: Vec<String>) -> Verdict {
        Verdict {
            status: Status::FailsUpToDepth,
            depth,
            witnesses: vec![],
            evidence,
            note: None,
        }
    }

    pub fn undetermined(depth: usize, note: impl Into<String>) -> Verdict {
        Verdict {
            status: Status::Undetermined,
            depth,
            witnesses: vec![],
            evidence: vec![],
            note: Some(note.into()),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Verdict {
        self.note = Some(note.into());
        self
    }

    pub fn with_evidence(mut self, e: impl Into<String>) -> Verdict {
        self.evidence.push(e.into());
        self
    }

    pub fn is_holds(&self) -> bool {
        self.status == Status::Holds
    }

    pub fn is_fails(&self) -> bool {
        self.status == Status::FailsUpToDepth
    }

    pub fn is_certified(&self) -> bool {
        self.status != Status::Undetermined
    }

    /// Conjunction: holds if all hold, fails if any fails.
    pub fn all(depth: usize, parts: &[Verdict]) -> Verdict {
        if let Some(f) = parts.iter().find(|v| v.is_fails()) {
            let mut v = Verdict::fails(depth, f.evidence.clone());
            v.note = f.note.clone();
            return v;
        }
        if parts.iter().all(|v| v.is_holds()) {
            let w = parts.iter().flat_map(|v| v.witnesses.clone()).collect();
            return Verdict::holds(depth, w);
        }
        Verdict::undetermined(depth, "some part is undetermined")
    }
}

type StageFn<S> = dyn Fn(usize) -> Result<S> + Send + Sync;
type MapFn<S, M> = dyn Fn(usize, &S, &S) -> Result<M> + Send + Sync;

/// A lazily extended system. The map builder receives `n`, stage `n` and
/// stage `n + 1` and returns the transition in the system's direction.
pub struct System<S, M> {
    pub direction: Direction,
    stage_fn: Arc<StageFn<S>>,
    map_fn: Arc<MapFn<S, M>>,
    cache: RwLock<(Vec<S>, Vec<M>)>,
}

impl<S: Clone, M: Clone> System<S, M> {
    pub fn new(
        direction: Direction,
        stage_fn: impl Fn(usize) -> Result<S> + Send + Sync + 'static,
        map_fn: impl Fn(usize, &S, &S) -> Result<M> + Send + Sync + 'static,
    ) -> Self {
        System {
            direction,
            stage_fn: Arc::new(stage_fn),
            map_fn: Arc::new(map_fn),
            cache: RwLock::new((Vec::new(), Vec::new())),
        }
    }

    /// Materializes stages `1..=depth` and the transitions between them.
    pub fn extend_to(&self, depth: usize) -> Result<()> {
        if self.cache.read().expect("lock").0.len() >= depth {
            return Ok(());
        }
        let mut guard = self.cache.write().expect("lock");
        let (stages, maps) = &mut *guard;
        while stages.len() < depth {
            let n = stages.len() + 1;
            stages.push((self.stage_fn)(n)?);
        }
        while maps.len() + 1 < depth {
            let n = maps.len() + 1;
            let m = (self.map_fn)(n, &stages[n - 1], &stages[n])?;
            maps.push(m);
        }
        Ok(())
    }

    pub fn prefix(&self, depth: usize) -> Result<(Vec<S>, Vec<M>)> {
        self.extend_to(depth)?;
        let g = self.cache.read().expect("lock");
        Ok((g.0[..depth].to_vec(), g.1[..depth.saturating_sub(1)].to_vec()))
    }

    pub fn stage(&self, n: usize) -> Result<S> {
        self.extend_to(n)?;
        Ok(self.cache.read().expect("lock").0[n - 1].clone())
    }

    /// Transition between stages `n` and `n + 1`.
    pub fn transition(&self, n: usize) -> Result<M> {
        self.extend_to(n + 1)?;
        Ok(self.cache.read().expect("lock").1[n - 1].clone())
    }
}

pub type Tower = System<FpModule, ModuleMap>;
pub type ComplexSystem = System<BoundedComplex, ChainMap>;

/// A materialized system of modules.
#[derive(Clone, Debug)]
pub struct ModuleSystem {
    pub direction: Direction,
    pub stages: Vec<FpModule>,
    pub maps: Vec<ModuleMap>,
}

impl ModuleSystem {
    pub fn new(direction: Direction, stages: Vec<FpModule>, maps: Vec<ModuleMap>) -> Result<Self> {
        if !stages.is_empty() && maps.len() + 1 != stages.len() {
            return Err(Error::Dimension(
                "a system needs one map between consecutive stages".into(),
            ));
        }
        Ok(ModuleSystem {
            direction,
            stages,
            maps,
        })
    }

    pub fn from_tower(t: &Tower, depth: usize) -> Result<Self> {
        let (s, m) = t.prefix(depth)?;
        ModuleSystem::new(t.direction, s, m)
    }

    /// A constant system with identity transitions.
    pub fn constant(m: &FpModule, direction: Direction, depth: usize) -> Self {
        ModuleSystem {
            direction,
            stages: vec![m.clone(); depth],
            maps: vec![ModuleMap::identity(m); depth.saturating_sub(1)],
        }
    }

    pub fn depth(&self) -> usize {
        self.stages.len()
    }

    pub fn stage(&self, n: usize) -> &FpModule {
        &self.stages[n - 1]
    }

    /// Transition between stages `n` and `n + 1` in the system's direction.
    pub fn transition(&self, n: usize) -> &ModuleMap {
        &self.maps[n - 1]
    }

    /// Composite between stage `n` and stage `m >= n`: from `m` to `n` in an
    /// inverse system, from `n` to `m` in a directed one.
    pub fn composite(&self, n: usize, m: usize) -> ModuleMap {
        let mut acc = ModuleMap::identity(self.stage(n));
        for k in n..m {
            acc = match self.direction {
                Direction::Inverse => self.transition(k).then(&acc),
                Direction::Directed => acc.then(self.transition(k)),
            }
            .expect("consecutive transitions compose");
        }
        acc
    }

    pub fn describe_stages(&self) -> Vec<String> {
        self.stages.iter().map(|s| s.describe()).collect()
    }
}

fn zero_search(sys: &ModuleSystem) -> (Vec<Witness>, Vec<String>) {
    let depth = sys.depth();
    let mut witnesses = Vec::new();
    let mut evidence = Vec::new();
    for n in 1..depth {
        let mut acc = ModuleMap::identity(sys.stage(n));
        let mut found = None;
        for m in n..=depth {
            if m > n {
                acc = match sys.direction {
                    Direction::Inverse => sys.transition(m - 1).then(&acc),
                    Direction::Directed => acc.then(sys.transition(m - 1)),
                }
                .expect("consecutive transitions compose");
            }
            if acc.is_zero() {
                found = Some(m);
                break;
            }
        }
        match found {
            Some(m) => witnesses.push(match sys.direction {
                Direction::Inverse => Witness::ZeroComposite { from: m, to: n },
                Direction::Directed => Witness::ZeroComposite { from: n, to: m },
            }),
            None => {
                let (src, tgt) = (acc.source().clone(), acc.target().clone());
                let surv = (0..src.ngens())
                    .find(|&i| !tgt.elem_is_zero(&acc.apply(&src.gen(i))))
                    .expect("nonzero composite has a surviving generator");
                let (a, b) = match sys.direction {
                    Direction::Inverse => (depth, n),
                    Direction::Directed => (n, depth),
                };
                evidence.push(format!(
                    "generator {} of stage {a} ({}) survives to stage {b} as {}",
                    src.fmt_elem(&src.gen(surv)),
                    src.describe(),
                    tgt.fmt_elem(&acc.apply(&src.gen(surv)))
                ));
                break;
            }
        }
    }
    (witnesses, evidence)
}

/// Is the inverse system pro-zero within the window?
pub fn pro_zero(sys: &ModuleSystem) -> Verdict {
    assert_eq!(sys.direction, Direction::Inverse, "pro_zero needs an inverse system");
    zero_verdict(sys)
}

/// Is the directed system ind-zero within the window?
pub fn ind_zero(sys: &ModuleSystem) -> Verdict {
    assert_eq!(sys.direction, Direction::Directed, "ind_zero needs a directed system");
    zero_verdict(sys)
}

fn zero_verdict(sys: &ModuleSystem) -> Verdict {
    let depth = sys.depth();
    if depth < 2 {
        return Verdict::undetermined(depth, "window too short");
    }
    let (mut w, e) = zero_search(sys);
    if e.is_empty() {
        return Verdict::holds(depth, w);
    }
    if let Some((from, order)) = stationary_nilpotent(sys) {
        w.push(Witness::Stationary { from, order });
        return Verdict::holds(depth, w).with_note(format!(
            "stages repeat from {from} with a transition nilpotent of order {order}; \
             later stages are vanished by the same composite"
        ));
    }
    Verdict::fails(depth, e)
}

fn same_module(a: &FpModule, b: &FpModule) -> bool {
    a.ngens() == b.ngens() && a.rels() == b.rels()
}

/// Smallest `n0` from which stages and transitions repeat (at least two equal
/// transitions observed), together with the nilpotency order of the repeated
/// transition.
fn stationary_nilpotent(sys: &ModuleSystem) -> Option<(usize, usize)> {
    let depth = sys.depth();
    if depth < 3 {
        return None;
    }
    let mut n0 = depth - 1;
    while n0 > 1
        && same_module(sys.stage(n0 - 1), sys.stage(n0))
        && sys.transition(n0 - 1).rows() == sys.transition(n0).rows()
    {
        n0 -= 1;
    }
    if !(same_module(sys.stage(n0), sys.stage(depth)) && depth - n0 >= 2) {
        return None;
    }
    if sys.transition(n0).rows() != sys.transition(depth - 1).rows() {
        return None;
    }
    let phi = sys.transition(n0);
    let s = sys.stage(n0);
    let phi = ModuleMap::unchecked(s, s, phi.rows().to_vec());
    let mut acc = phi.clone();
    for order in 1..=depth {
        if acc.is_zero() {
            return Some((n0, order));
        }
        acc = acc.then(&phi).ok()?;
    }
    None
}

/// Recomputes every zero-composite witness of a verdict.
pub fn revalidate(sys: &ModuleSystem, v: &Verdict) -> bool {
    v.witnesses.iter().all(|w| match *w {
        Witness::ZeroComposite { from, to } => {
            let (n, m) = match sys.direction {
                Direction::Inverse => (to, from),
                Direction::Directed => (from, to),
            };
            m <= sys.depth() && sys.composite(n, m).is_zero()
        }
        Witness::Stationary { from, order } => stationary_nilpotent(sys).is_some_and(|(f, o)| f <= from && o <= order),
        _ => true,
    })
}

/// Levelwise maps `f_n: A_n -> B_n` between two systems of the same direction.
#[derive(Clone, Debug)]
pub struct SystemMap {
    pub source: ModuleSystem,
    pub target: ModuleSystem,
    pub maps: Vec<ModuleMap>,
}

impl SystemMap {
    pub fn new(source: ModuleSystem, target: ModuleSystem, maps: Vec<ModuleMap>) -> Result<Self> {
        if source.direction != target.direction {
            return Err(Error::IllDefined("systems point in different directions".into()));
        }
        let depth = source.depth().min(target.depth()).min(maps.len());
        let f = SystemMap { source, target, maps };
        for n in 1..depth {
            let (left, right) = match f.source.direction {
                Direction::Inverse => (
                    f.source.transition(n).then(&f.maps[n - 1])?,
                    f.maps[n].then(f.target.transition(n))?,
                ),
                Direction::Directed => (
                    f.source.transition(n).then(&f.maps[n])?,
                    f.maps[n - 1].then(f.target.transition(n))?,
                ),
            };
            if !left.equals(&right) {
                return Err(Error::IllDefined(format!(
                    "levelwise maps do not commute with the transitions at stage {n}"
                )));
            }
        }
        Ok(f)
    }

    pub fn depth(&self) -> usize {
        self.source.depth().min(self.target.depth()).min(self.maps.len())
    }

    pub fn identity(sys: &ModuleSystem) -> Self {
        let maps = sys.stages.iter().map(ModuleMap::identity).collect();
        SystemMap {
            source: sys.clone(),
            target: sys.clone(),
            maps,
        }
    }

    pub fn kernel_system(&self) -> ModuleSystem {
        let depth = self.depth();
        let kers: Vec<_> = self.maps[..depth].iter().map(|f| f.kernel()).collect();
        let mut maps = Vec::new();
        for n in 1..depth {
            let t = self.source.transition(n);
            let (from, to) = match self.source.direction {
                Direction::Inverse => (&kers[n], &kers[n - 1]),
                Direction::Directed => (&kers[n - 1], &kers[n]),
            };
            let composite = from.inclusion.then(t).expect("composable");
            let g = to
                .inclusion
                .factor_through(&composite)
                .expect("transitions preserve kernels");
            maps.push(g);
        }
        ModuleSystem {
            direction: self.source.direction,
            stages: kers.into_iter().map(|k| k.module).collect(),
            maps,
        }
    }

    pub fn cokernel_system(&self) -> ModuleSystem {
        let depth = self.depth();
        let cos: Vec<FpModule> = self.maps[..depth].iter().map(|f| f.cokernel().0).collect();
        let mut maps = Vec::new();
        for n in 1..depth {
            let t = self.target.transition(n);
            let (from, to) = match self.target.direction {
                Direction::Inverse => (&cos[n], &cos[n - 1]),
                Direction::Directed => (&cos[n - 1], &cos[n]),
            };
            maps.push(ModuleMap::new(from, to, t.rows().to_vec()).expect("transitions preserve images"));
        }
        ModuleSystem {
            direction: self.target.direction,
            stages: cos,
            maps,
        }
    }
}

/// Pro- (or ind-) isomorphism: kernel and cokernel systems vanish.
pub fn pro_iso(f: &SystemMap) -> Verdict {
    let depth = f.depth();
    if depth < 2 {
        return Verdict::undetermined(depth, "window too short");
    }
    let k = zero_verdict(&f.kernel_system());
    let c = zero_verdict(&f.cokernel_system());
    if k.is_holds() && c.is_holds() {
        let shift = k
            .witnesses
            .iter()
            .chain(&c.witnesses)
            .map(|w| match *w {
                Witness::ZeroComposite { from, to } => from.abs_diff(to),
                _ => 0,
            })
            .max()
            .unwrap_or(0);
        let mut w = vec![Witness::ProIso { shift }];
        w.extend(k.witnesses);
        w.extend(c.witnesses);
        return Verdict::holds(depth, w);
    }
    let mut ev = Vec::new();
    for e in k.evidence {
        ev.push(format!("kernel: {e}"));
    }
    for e in c.evidence {
        ev.push(format!("cokernel: {e}"));
    }
    Verdict::fails(depth, ev)
}

/// The limit (or colimit) when the system is eventually constant, otherwise
/// the truncated system itself.
#[derive(Clone, Debug)]
pub enum Limit {
    Module { module: FpModule, from: usize },
    ProObject(Vec<String>),
}

#[derive(Clone, Debug)]
pub struct MlReport {
    pub ml: Verdict,
    pub lim1_zero: Verdict,
    pub lim: Limit,
}

/// Mittag-Leffler and limit diagnostics for an inverse system.
pub fn ml_lim(sys: &ModuleSystem) -> MlReport {
    assert_eq!(sys.direction, Direction::Inverse);
    let depth = sys.depth();
    let mut witnesses = Vec::new();
    let mut evidence = Vec::new();
    for n in 1..depth.saturating_sub(1) {
        let last = sys.composite(n, depth);
        let mut span_rows = last.rows().to_vec();
        span_rows.extend(sys.stage(n).rels().iter().cloned());
        let span = Span::new(sys.stage(n).ring(), sys.stage(n).ngens(), span_rows);
        let stable_from = (n..depth).find(|&m| sys.composite(n, m).rows().iter().all(|r| span.contains(r)));
        match stable_from {
            Some(m) => witnesses.push(Witness::Stable { stage: n, from: m }),
            None => {
                evidence.push(format!("images into stage {n} shrink at every step up to {depth}"));
                break;
            }
        }
    }
    let ml = if depth < 3 {
        Verdict::undetermined(depth, "window too short")
    } else if evidence.is_empty() {
        Verdict::holds(depth, witnesses)
    } else {
        Verdict::fails(depth, evidence)
    };
    let lim1_zero = if ml.is_holds() {
        Verdict::holds(
            depth,
            vec![Witness::Exact {
                fact: "Mittag-Leffler".into(),
            }],
        )
    } else {
        Verdict::undetermined(
            depth,
            "Mittag-Leffler fails in the window; for countable towers of finitely generated modules this forces lim¹ ≠ 0, which is not certified here",
        )
    };
    MlReport {
        ml,
        lim1_zero,
        lim: eventual_limit(sys),
    }
}

/// Smallest `m0 < depth` with all transitions from `m0` on isomorphisms.
pub fn constant_from(sys: &ModuleSystem) -> Option<usize> {
    let depth = sys.depth();
    if depth < 2 {
        return None;
    }
    let mut m0 = depth;
    while m0 > 1 && sys.transition(m0 - 1).is_isomorphism() {
        m0 -= 1;
    }
    (m0 < depth).then_some(m0)
}

pub fn eventual_limit(sys: &ModuleSystem) -> Limit {
    match constant_from(sys) {
        Some(m0) => Limit::Module {
            module: sys.stage(m0).minimized(),
            from: m0,
        },
        None => Limit::ProObject(sys.describe_stages()),
    }
}

/// Homology system in degree `i` of a system of complexes.
pub fn homology_system(
    direction: Direction,
    stages: &[BoundedComplex],
    maps: &[ChainMap],
    degree: i32,
) -> Result<ModuleSystem> {
    let hs: Vec<_> = stages.iter().map(|c| c.homology(degree)).collect();
    let mut out = Vec::new();
    for (n, f) in maps.iter().enumerate() {
        let (a, b) = match direction {
            Direction::Inverse => (&hs[n + 1], &hs[n]),
            Direction::Directed => (&hs[n], &hs[n + 1]),
        };
        out.push(f.on_homology_with(a, b)?);
    }
    ModuleSystem::new(direction, hs.iter().map(|h| h.module().clone()).collect(), out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Ring;

    fn z() -> Ring {
        Ring::integers()
    }

    fn z2() -> FpModule {
        let r = z();
        FpModule::cyclic(&r, &[r.constant(2)])
    }

    #[test]
    fn constant_z2_with_zero_maps_is_pro_zero() {
        let m = z2();
        let sys = ModuleSystem::new(Direction::Inverse, vec![m.clone(); 4], vec![ModuleMap::zero(&m, &m); 3]).unwrap();
        let v = pro_zero(&sys);
        assert!(v.is_holds());
        assert!(v.witnesses.contains(&Witness::ZeroComposite { from: 2, to: 1 }));
        assert!(revalidate(&sys, &v));
    }

    #[test]
    fn constant_z2_with_identity_fails() {
        let sys = ModuleSystem::constant(&z2(), Direction::Inverse, 4);
        assert!(pro_zero(&sys).is_fails());
    }

    #[test]
    fn power_tower_of_z() {
        let r = z();
        let stages: Vec<FpModule> = (1..=5).map(|n| FpModule::cyclic(&r, &[r.constant(1 << n)])).collect();
        let maps = (0..4)
            .map(|k| ModuleMap::new(&stages[k + 1], &stages[k], vec![r.one()]).unwrap())
            .collect();
        let sys = ModuleSystem::new(Direction::Inverse, stages, maps).unwrap();
        let rep = ml_lim(&sys);
        assert!(rep.ml.is_holds());
        assert!(rep.lim1_zero.is_holds());
        assert!(matches!(rep.lim, Limit::ProObject(_)));
        // constant Z -> {Z/2^n} is not a pro-isomorphism
        let zz = FpModule::free(&r, 1);
        let c = ModuleSystem::constant(&zz, Direction::Inverse, 5);
        let maps = sys
            .stages
            .iter()
            .map(|s| ModuleMap::new(&zz, s, vec![r.one()]).unwrap())
            .collect();
        let f = SystemMap::new(c, sys.clone(), maps).unwrap();
        assert!(pro_iso(&f).is_fails());
        assert!(pro_iso(&SystemMap::identity(&sys)).is_holds());
    }

    #[test]
    fn stationary_nilpotent_tail() {
        let r = z();
        let z8 = FpModule::cyclic(&r, &[r.constant(8)]);
        let stages = vec![z2(), z8.clone(), z8.clone(), z8.clone(), z8.clone()];
        let mut maps = vec![ModuleMap::new(&z8, &stages[0], vec![r.one()]).unwrap()];
        maps.extend((0..3).map(|_| ModuleMap::scalar(&z8, &r.constant(2))));
        let sys = ModuleSystem::new(Direction::Inverse, stages, maps).unwrap();
        let v = pro_zero(&sys);
        assert!(v.is_holds());
        assert!(v.witnesses.contains(&Witness::Stationary { from: 2, order: 3 }));
        assert!(revalidate(&sys, &v));
        // a stationary tail that is not nilpotent still fails
        let zz = FpModule::free(&r, 1);
        let sys = ModuleSystem::new(
            Direction::Inverse,
            vec![zz.clone(); 5],
            vec![ModuleMap::scalar(&zz, &r.constant(2)); 4],
        )
        .unwrap();
        assert!(pro_zero(&sys).is_fails());
    }

    #[test]
    fn multiplication_by_two_on_z_fails_ml() {
        let r = z();
        let zz = FpModule::free(&r, 1);
        let sys = ModuleSystem::new(
            Direction::Inverse,
            vec![zz.clone(); 5],
            vec![ModuleMap::scalar(&zz, &r.constant(2)); 4],
        )
        .unwrap();
        let rep = ml_lim(&sys);
        assert!(rep.ml.is_fails());
        assert_eq!(rep.lim1_zero.status, Status::Undetermined);
    }

    #[test]
    fn ind_systems() {
        let r = z();
        let stages: Vec<FpModule> = (1..=4).map(|n| FpModule::cyclic(&r, &[r.constant(1 << n)])).collect();
        let maps = (0..3)
            .map(|k| ModuleMap::new(&stages[k], &stages[k + 1], vec![r.constant(2)]).unwrap())
            .collect();
        let sys = ModuleSystem::new(Direction::Directed, stages, maps).unwrap();
        assert!(ind_zero(&sys).is_fails());
        let zero = FpModule::zero(&r);
        let sys = ModuleSystem::constant(&zero, Direction::Directed, 4);
        assert!(ind_zero(&sys).is_holds());
    }

    #[test]
    fn lazy_system_extends_without_rebuilding() {
        let r = z();
        let t: Tower = System::new(
            Direction::Inverse,
            move |n| Ok(FpModule::cyclic(&r, &[r.constant(1 << n)])),
            |_, a, b| ModuleMap::new(b, a, vec![a.gen(0)]),
        );
        let (s, m) = t.prefix(3).unwrap();
        assert_eq!((s.len(), m.len()), (3, 2));
        let s1 = t.stage(1).unwrap();
        t.extend_to(6).unwrap();
        assert_eq!(t.stage(1).unwrap().describe(), s1.describe());
        assert_eq!(t.stage(6).unwrap().describe(), "Z/64");
    }
}
