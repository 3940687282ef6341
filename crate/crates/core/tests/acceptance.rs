//! The twelve acceptance criteria, one line each. Runs without the libtest
//! harness so the lines always reach the output.

use std::time::Instant;

use adicomp::cli::report::{Outcome, RunReport};
use adicomp::cli::{self, gallery, RunOptions};
use adicomp::coeff::Domain;
use adicomp::complex::BoundedComplex;
use adicomp::functors::derived_completion;
use adicomp::koszul::{dual_koszul, KoszulSpec};
use adicomp::module::FpModule;
use adicomp::oracle;
use adicomp::ring::{Ideal, Ring};
use adicomp::theorems::{self, TheoremReport};
use adicomp::tower::{self, Status, Witness};

type Check = Result<(), String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl Into<String>) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn gallery_run(name: &str) -> RunReport {
    let report = cli::run_gallery(name, &RunOptions::default())
        .expect("gallery exists")
        .expect("gallery parses");
    assert!(
        !report.has_errors(),
        "{name}: {:?}",
        report.tasks.iter().filter_map(|t| t.error.clone()).collect::<Vec<_>>()
    );
    report
}

fn theorem(report: &RunReport, index: usize) -> &TheoremReport {
    match report.tasks[index].outcome.as_ref() {
        Some(Outcome::Theorem(t)) => t,
        o => panic!("task {index} is not a theorem: {o:?}"),
    }
}

fn koszul_self_duality() -> Check {
    let z = Ring::integers();
    let qx = Ring::polynomial(Domain::Rationals, &["x"]).unwrap();
    let qxy = Ring::polynomial(Domain::Rationals, &["x", "y"]).unwrap();
    for (ring, gens) in [
        (&z, vec![z.constant(2)]),
        (&qx, vec![qx.var(0)]),
        (&qxy, vec![qxy.var(0), qxy.var(1)]),
    ] {
        let spec = KoszulSpec::new(ring, &gens, 1).map_err(|e| e.to_string())?;
        let dk = dual_koszul(&spec).map_err(|e| e.to_string())?;
        ensure(dk.verify(), format!("dual Koszul witness fails over {ring}"))?;
        let rep = theorems::koszul_self_duality(ring, &Ideal::new(ring, &gens)).map_err(|e| e.to_string())?;
        ensure(rep.all_hold(), format!("degreewise check fails over {ring}"))?;
    }
    let g = gallery_run("koszul-duality");
    ensure((0..3).all(|i| theorem(&g, i).all_hold()), "gallery koszul-duality")
}

fn regular_sequence() -> Check {
    let r = Ring::polynomial(Domain::Rationals, &["x", "y"]).unwrap();
    let i = Ideal::parse(&r, &["x", "y"]).unwrap();
    let rep = theorems::koszul_homology(&r, &i).map_err(|e| e.to_string())?;
    ensure(rep.all_hold(), "Koszul homology of (x, y)")?;
    ensure(rep.conditions.len() == 3, "degrees -2..0")?;
    ensure(
        theorem(&gallery_run("regular-sequence"), 0).all_hold(),
        "gallery regular-sequence",
    )
}

fn six_condition_coherence() -> Check {
    let g = gallery_run("six-conditions");
    ensure(g.tasks.len() >= 6, "suite has at least six inputs")?;
    let expected = [true, false, true, false, true, false, false];
    for (i, want) in expected.iter().enumerate() {
        let t = theorem(&g, i);
        ensure(g.tasks[i].depth == 6, "depth 6")?;
        ensure(!t.discrepancy, format!("task {} disagrees", i + 1))?;
        let certified: Vec<bool> = t
            .conditions
            .iter()
            .filter(|c| c.verdict.is_certified())
            .map(|c| c.verdict.is_holds())
            .collect();
        ensure(
            certified.len() == 6,
            format!("task {}: only {} certified", i + 1, certified.len()),
        )?;
        ensure(
            certified.iter().all(|h| h == want),
            format!("task {}: expected vanishing = {want}", i + 1),
        )?;
    }
    Ok(())
}

fn gm_comparison() -> Check {
    let g = gallery_run("gm-comparison");
    let mut seen = 0;
    for t in &g.tasks {
        if t.task != "gm_comparison" {
            continue;
        }
        seen += 1;
        ensure(t.depth == 6, "depth 6")?;
        let Some(Outcome::Entries { entries, .. }) = &t.outcome else {
            return Err("unexpected outcome".into());
        };
        for e in entries {
            if e.label.starts_with("H_0(Λ)") || (e.label.starts_with("H_") && e.label.ends_with("pro-zero")) {
                ensure(
                    e.verdict.is_holds(),
                    format!("{} {}: {}", t.args.join(" "), e.label, e.verdict.status.label()),
                )?;
            }
        }
    }
    ensure(seen >= 6, "suite covers at least six modules")
}

fn completion_profiles() -> Check {
    let g = gallery_run("Z-at-2");
    let profile = |i: usize| -> Vec<(String, Status, bool)> {
        match g.tasks[i].outcome.as_ref() {
            Some(Outcome::Entries { entries, .. }) => entries
                .iter()
                .take(4)
                .map(|e| {
                    let certified = match e.verdict.status {
                        Status::Holds => !e.verdict.witnesses.is_empty(),
                        Status::FailsUpToDepth => !e.verdict.evidence.is_empty(),
                        Status::Undetermined => false,
                    };
                    (e.label.clone(), e.verdict.status, certified)
                })
                .collect(),
            _ => vec![],
        }
    };
    use Status::{FailsUpToDepth as F, Holds as H};
    for (task, want, name) in [
        (1, [H, F, F, F], "Z"),
        (2, [H, H, H, H], "Z/8"),
        (3, [F, F, F, F], "Z/3"),
    ] {
        let p = profile(task);
        ensure(p.len() == 4, format!("{name}: profile missing"))?;
        for ((label, got, certified), w) in p.iter().zip(want) {
            ensure(*got == w, format!("{name} {label}: got {}", got.label()))?;
            ensure(*certified, format!("{name} {label}: no certificate"))?;
        }
    }
    Ok(())
}

fn factorization() -> Check {
    let g = gallery_run("gm-comparison");
    let mut seen = 0;
    for (i, t) in g.tasks.iter().enumerate() {
        if t.task != "factorization" {
            continue;
        }
        seen += 1;
        let rep = theorem(&g, i);
        ensure(
            rep.condition("surjective").unwrap().verdict.is_holds(),
            format!("ε not onto for {}", t.args[0]),
        )?;
        ensure(rep.all_hold(), format!("factorization for {}", t.args[0]))?;
    }
    ensure(seen >= 6, "suite covers at least six modules")
}

fn spectral_edge() -> Check {
    let z = Ring::integers();
    let k2 = BoundedComplex::free(&z, -1, &[1, 1], vec![vec![z.constant(2)]]).unwrap();
    let k3 = BoundedComplex::free(&z, -1, &[1, 1], vec![vec![z.constant(3)]]).unwrap();
    let c = k2.direct_sum(&k3.shift(2)).unwrap();
    let i = Ideal::new(&z, &[z.constant(2)]);
    let dc = derived_completion(&c, &i).map_err(|e| e.to_string())?;
    let depth = 6;
    let (low, _) = dc.homology(-1, depth).map_err(|e| e.to_string())?;
    let constant = tower::ModuleSystem::constant(
        &FpModule::cyclic(&z, &[z.constant(2)]),
        tower::Direction::Inverse,
        depth,
    );
    let f = dc.edge_map(-1, depth).map_err(|e| e.to_string())?;
    ensure(tower::pro_iso(&f).is_holds(), "degree -1 edge map")?;
    ensure(
        f.target.describe_stages() == constant.describe_stages(),
        "degree -1 tower is constant Z/2",
    )?;
    ensure(low.describe_stages().iter().all(|s| s == "Z/2"), "degree -1 stages")?;
    let (high, _) = dc.homology(1, depth).map_err(|e| e.to_string())?;
    ensure(tower::pro_zero(&high).is_holds(), "degree 1 tower pro-zero")?;
    let g = gallery_run("spectral-edge");
    ensure(theorem(&g, 0).all_hold(), "gallery spectral-edge")
}

fn base_change_positive() -> Check {
    let g = gallery_run("basechange-pos");
    let t = theorem(&g, 0);
    for id in ["b", "c", "d"] {
        ensure(
            t.condition(id).unwrap().verdict.is_holds(),
            format!("({id}) not certified"),
        )?;
    }
    ensure(
        t.notes.iter().any(|n| n == "interleaving exponents p = 1, q = 1"),
        "p = q = 1",
    )?;
    ensure(!t.discrepancy && !g.discrepancy, "no discrepancy")
}

fn base_change_gap() -> Check {
    let g = gallery_run("basechange-gap");
    let t = theorem(&g, 0);
    ensure(t.condition("d").unwrap().verdict.is_holds(), "(d) holds")?;
    ensure(t.condition("b").unwrap().verdict.is_fails(), "(b) fails")?;
    ensure(t.condition("c").unwrap().verdict.is_fails(), "(c) fails")?;
    ensure(t.discrepancy && g.discrepancy, "discrepancy flag")?;
    let json = g.to_json();
    ensure(json.contains("\"discrepancy\": true"), "flag in JSON")?;
    ensure(g.to_text().contains("DISCREPANCY"), "flag in text")
}

fn weak_pro_regularity() -> Check {
    let g = gallery_run("wpr");
    for (i, gap) in [(0, 0), (1, 1)] {
        let t = theorem(&g, i);
        ensure(g.tasks[i].depth == 4, "depth 4")?;
        ensure(t.all_hold(), format!("task {} does not hold", i + 1))?;
        let ok = t.conditions.iter().all(|c| {
            c.verdict
                .witnesses
                .iter()
                .any(|w| matches!(w, Witness::ZeroComposite { from, to } if *from == *to + gap))
        });
        ensure(ok, format!("task {}: no witness with m = n + {gap}", i + 1))?;
    }
    Ok(())
}

fn seed_modules(ring: &Ring, seeds: &[&str]) -> Vec<FpModule> {
    let ctx = ring.ctx();
    let p = |s: &str| ring.parse(s).unwrap();
    let mut out = vec![FpModule::free(ring, 1), FpModule::free(ring, 2)];
    for a in seeds {
        out.push(FpModule::cyclic(ring, &[p(a)]));
    }
    for (a, b) in [(0, 1), (1, 2), (0, 2)] {
        if b >= seeds.len() {
            continue;
        }
        out.push(FpModule::cyclic(ring, &[p(seeds[a]), p(seeds[b])]));
        out.push(FpModule::new(ring, 2, vec![ctx.from_entries(&[p(seeds[a]), p(seeds[b])])]).unwrap());
        out.push(
            FpModule::new(
                ring,
                2,
                vec![
                    ctx.from_entries(&[p(seeds[a]), p(seeds[b])]),
                    ctx.from_entries(&[ring.zero(), p(seeds[a])]),
                ],
            )
            .unwrap(),
        );
    }
    out
}

fn finite_oracle() -> Check {
    let z8 = Ring::integers_mod(8);
    let f2 = Ring::polynomial(Domain::Prime(2), &["x"]).unwrap();
    let t = f2.quotient(&[f2.parse("x^3").unwrap()]);
    let mut pairs = 0;
    for (ring, seeds) in [(&z8, ["2", "4", "6"]), (&t, ["x", "x^2", "x + x^2"])] {
        let mods = seed_modules(ring, &seeds);
        for m in &mods {
            for n in &mods {
                let rows = oracle::compare(m, n, 2).map_err(|e| e.to_string())?;
                if let Some(r) = rows.iter().find(|r| !r.agree) {
                    return Err(format!(
                        "{} vs {} over {ring}: {} library {} oracle {}",
                        m.describe(),
                        n.describe(),
                        r.invariant,
                        r.library,
                        r.oracle
                    ));
                }
                pairs += 1;
            }
        }
    }
    let g = gallery_run("finite-oracle");
    ensure(
        g.tasks.iter().all(|t| {
            t.outcome
                .as_ref()
                .is_some_and(|o| o.verdicts().iter().all(|v| v.is_holds()))
        }),
        "gallery finite-oracle",
    )?;
    ensure(pairs >= 200, format!("only {pairs} pairs"))
}

fn determinism() -> Check {
    for name in gallery::names() {
        let a = gallery_run(name);
        let b = gallery_run(name);
        let (ja, jb) = (a.to_json(), b.to_json());
        ensure(ja == jb, format!("{name}: JSON differs between runs"))?;
        let back = RunReport::from_json(&ja).map_err(|e| format!("{name}: {e}"))?;
        ensure(back == a, format!("{name}: round trip changed the report"))?;
        ensure(back.to_json() == ja, format!("{name}: re-emitted JSON differs"))?;
    }
    Ok(())
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("Koszul self-duality", koszul_self_duality),
        ("regular-sequence concentration", regular_sequence),
        ("six-condition coherence", six_condition_coherence),
        ("GM comparison", gm_comparison),
        ("completion profiles", completion_profiles),
        ("factorization", factorization),
        ("spectral edge", spectral_edge),
        ("base change, positive", base_change_positive),
        ("base change, gap detection", base_change_gap),
        ("weak pro-regularity probe", weak_pro_regularity),
        ("finite-ring oracle", finite_oracle),
        ("determinism and round trip", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(()) => println!("criterion {:>2} PASS  {name} ({secs:.2}s)", i + 1),
            Err(e) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {e}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} of {} criteria pass",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
