//! Scenario-driven front end shared by the binary and the C interface.

pub mod gallery;
pub mod report;
pub mod scenario;

use std::io::Write;
use std::path::Path;
use std::time::Instant;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::functors::{
    adic_system, completed_tensor_tower, completeness_profile, derived_completion, derived_torsion, gm_comparison,
    l_functor, Object,
};
use crate::oracle;
use crate::theorems;
use crate::tower::{self, Limit, Verdict, Witness};

use report::{Entry, Outcome, RunReport, TaskResult};
use scenario::{Arg, Scenario, Task, TaskKind};

pub use scenario::{parse_scenario, Diagnostic};

pub const DEFAULT_DEPTH: usize = 5;

#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    /// Replaces every task's depth.
    pub depth: Option<usize>,
    /// Stop at the first task error.
    pub strict: bool,
    /// Record wall-clock time per task.
    pub timings: bool,
    pub gallery: Option<String>,
}

pub fn scenario_hash(text: &str) -> String {
    Sha256::digest(text.as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

pub fn run(scenario: &Scenario, opts: &RunOptions) -> RunReport {
    let mut report = RunReport::empty(scenario_hash(&scenario.source));
    report.gallery = opts.gallery.clone();
    for (i, task) in scenario.tasks.iter().enumerate() {
        let depth = opts.depth.or(task.depth()).unwrap_or(DEFAULT_DEPTH);
        let start = Instant::now();
        let result = execute(task, depth);
        let elapsed = start.elapsed().as_secs_f64() * 1e3;
        let (outcome, error) = match result {
            Ok(o) => (Some(o), None),
            Err(e) => (None, Some(e.to_string())),
        };
        let failed = error.is_some();
        report.tasks.push(TaskResult {
            index: i + 1,
            task: task.kind.name().into(),
            args: task.arg_names.clone(),
            line: task.line,
            depth,
            outcome,
            error,
            elapsed_ms: opts.timings.then_some(elapsed),
        });
        if failed && opts.strict {
            break;
        }
    }
    report.discrepancy = report
        .tasks
        .iter()
        .any(|t| t.outcome.as_ref().is_some_and(|o| o.discrepancy()));
    report
}

/// Process exit code for a finished run.
pub fn exit_code(report: &RunReport, strict: bool) -> i32 {
    if report.has_errors() {
        1
    } else if strict && report.any_fails() {
        2
    } else {
        0
    }
}

/// Writes through a sibling temporary file and a rename.
pub fn write_atomic(path: &Path, contents: &str) -> std::io::Result<()> {
    let dir = path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    let name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    let tmp = dir.join(format!(".{name}.{}.tmp", std::process::id()));
    {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(contents.as_bytes())?;
        f.sync_all()?;
    }
    std::fs::rename(&tmp, path).inspect_err(|_| {
        let _ = std::fs::remove_file(&tmp);
    })
}

fn module(a: &Arg) -> &crate::module::FpModule {
    match a {
        Arg::Module(m) => m,
        _ => unreachable!("checked by the parser"),
    }
}

fn object(a: &Arg) -> &Object {
    match a {
        Arg::Object(o) => o,
        _ => unreachable!("checked by the parser"),
    }
}

fn ideal(a: &Arg) -> &crate::ring::Ideal {
    match a {
        Arg::Ideal(i) => i,
        _ => unreachable!("checked by the parser"),
    }
}

fn entry(label: impl Into<String>, verdict: Verdict, stages: Vec<String>) -> Entry {
    Entry {
        label: label.into(),
        verdict,
        stages,
        value: None,
    }
}

fn limit_entry(label: &str, sys: &tower::ModuleSystem) -> Entry {
    let depth = sys.depth();
    match tower::eventual_limit(sys) {
        Limit::Module { module, from } => Entry {
            label: label.into(),
            verdict: Verdict::holds(depth, vec![Witness::Constant { from }]),
            stages: vec![],
            value: Some(module.describe()),
        },
        Limit::ProObject(_) => entry(label, Verdict::undetermined(depth, "not eventually constant"), vec![]),
    }
}

fn execute(task: &Task, depth: usize) -> Result<Outcome> {
    let a = &task.args;
    let subject = task.arg_names.join(" ");
    let entries = |entries: Vec<Entry>| {
        Ok(Outcome::Entries {
            subject: subject.clone(),
            entries,
        })
    };
    match task.kind {
        TaskKind::AdicTower => {
            let sys = adic_system(module(&a[0]), ideal(&a[1]), depth)?;
            let ml = tower::ml_lim(&sys);
            entries(vec![
                entry("Mittag-Leffler", ml.ml, sys.describe_stages()),
                entry("lim^1 = 0", ml.lim1_zero, vec![]),
                limit_entry("limit", &sys),
            ])
        }
        TaskKind::Completeness => {
            let p = completeness_profile(module(&a[0]), ideal(&a[1]), depth)?;
            let mut e = vec![
                entry("separated", p.separated.clone(), vec![]),
                entry("adically complete", p.adically_complete.clone(), vec![]),
                entry("L_0-complete", p.l0_complete.clone(), vec![]),
                entry("derived complete", p.derived_complete.clone(), vec![]),
            ];
            e.extend(
                p.per_generator
                    .iter()
                    .map(|g| entry(format!("contramodule for {}", g.generator), g.verdict.clone(), vec![])),
            );
            if !p.implications_hold() {
                return Err(Error::IllDefined(
                    "profile violates complete ⟹ L_0-complete ⟹ derived complete".into(),
                ));
            }
            entries(e)
        }
        TaskKind::GmComparison => {
            let g = gm_comparison(module(&a[0]), ideal(&a[1]), depth)?;
            let mut e = vec![
                entry("H_0(Λ) ≅ adic tower", g.h0.clone(), g.h0_stages.clone()),
                entry("M/(x^n)M ≅ H_0(Λ_n)", g.quotient_iso.clone(), vec![]),
                entry("(x^n) ~ I^n", g.interleaving.clone(), vec![]),
            ];
            e.extend(
                g.higher
                    .iter()
                    .map(|(i, v)| entry(format!("H_{i}(Λ) pro-zero"), v.clone(), vec![])),
            );
            entries(e)
        }
        TaskKind::LFunctor => {
            let n = task.int_param("n").unwrap_or(0) as usize;
            let l = l_functor(module(&a[0]), ideal(&a[1]), n, depth)?;
            entries(vec![Entry {
                label: format!("L_{n}"),
                verdict: l.verdict,
                stages: l.stages,
                value: l.value.map(|m| m.describe()),
            }])
        }
        TaskKind::DerivedCompletion => {
            let dc = derived_completion(&object(&a[0]).to_complex(), ideal(&a[1]))?;
            let mut e = Vec::new();
            for d in dc.degrees() {
                let (sys, _) = dc.homology(d, depth)?;
                let mut en = entry(
                    format!("H_{d}(Λ) pro-zero"),
                    tower::pro_zero(&sys),
                    sys.describe_stages(),
                );
                if let Limit::Module { module, .. } = tower::eventual_limit(&sys) {
                    en.value = Some(module.describe());
                }
                e.push(en);
            }
            entries(e)
        }
        TaskKind::DerivedTorsion => {
            let dt = derived_torsion(&object(&a[0]).to_complex(), ideal(&a[1]))?;
            let mut e = Vec::new();
            for d in dt.degrees() {
                let sys = dt.homology(d, depth)?;
                e.push(entry(
                    format!("H_{d}(Γ) ind-zero"),
                    tower::ind_zero(&sys),
                    sys.describe_stages(),
                ));
            }
            entries(e)
        }
        TaskKind::CompletedTensor => {
            let ct = completed_tensor_tower(module(&a[0]), module(&a[1]), ideal(&a[2]), depth)?;
            entries(vec![entry(
                "(M ⊗ N)/I^n ≅ M/I^n ⊗ N/I^n",
                ct.comparison,
                ct.tower.describe_stages(),
            )])
        }
        TaskKind::SixConditions => Ok(Outcome::Theorem(theorems::six_conditions(
            object(&a[0]),
            ideal(&a[1]),
            depth,
        )?)),
        TaskKind::Factorization => Ok(Outcome::Theorem(theorems::factorization_check(
            module(&a[0]),
            ideal(&a[1]),
            depth,
        )?)),
        TaskKind::SpectralEdge => Ok(Outcome::Theorem(theorems::spectral_edge(
            &object(&a[0]).to_complex(),
            ideal(&a[1]),
            depth,
        )?)),
        TaskKind::BaseChange => {
            let Arg::Map(theta) = &a[0] else {
                unreachable!("checked by the parser")
            };
            Ok(Outcome::Theorem(theorems::base_change_suite(
                theta,
                ideal(&a[1]),
                ideal(&a[2]),
                depth,
            )?))
        }
        TaskKind::RadicalInvariance => {
            let i = ideal(&a[1]);
            let exps: Vec<u32> = match task.list_param("exponents") {
                Some(l) => l.iter().map(|&e| e as u32).collect(),
                None => vec![2; i.gens().len()],
            };
            Ok(Outcome::Theorem(theorems::radical_invariance_check(
                object(&a[0]),
                i,
                &exps,
                depth,
            )?))
        }
        TaskKind::KoszulDuality => {
            let i = ideal(&a[0]);
            Ok(Outcome::Theorem(theorems::koszul_self_duality(i.ring(), i)?))
        }
        TaskKind::KoszulHomology => {
            let i = ideal(&a[0]);
            Ok(Outcome::Theorem(theorems::koszul_homology(i.ring(), i)?))
        }
        TaskKind::Wpr => {
            let i = ideal(&a[0]);
            Ok(Outcome::Theorem(theorems::weak_pro_regularity(i.ring(), i, depth)?))
        }
        TaskKind::FiniteOracle => {
            let degree = task.int_param("degree").unwrap_or(2) as usize;
            let rows = oracle::compare(module(&a[0]), module(&a[1]), degree)?;
            let bad: Vec<String> = rows
                .iter()
                .filter(|r| !r.agree)
                .map(|r| format!("{}: library {} vs oracle {}", r.invariant, r.library, r.oracle))
                .collect();
            let verdict = if bad.is_empty() {
                Verdict::holds(
                    depth,
                    vec![Witness::Exact {
                        fact: format!("{} invariants agree with enumeration", rows.len()),
                    }],
                )
            } else {
                Verdict::fails(depth, bad)
            };
            Ok(Outcome::Oracle { subject, verdict, rows })
        }
    }
}

/// Parses and runs a gallery scenario by name.
pub fn run_gallery(name: &str, opts: &RunOptions) -> Option<std::result::Result<RunReport, Diagnostic>> {
    let text = gallery::get(name)?;
    let opts = RunOptions {
        gallery: Some(name.into()),
        ..opts.clone()
    };
    Some(parse_scenario(text).map(|s| run(&s, &opts)))
}
