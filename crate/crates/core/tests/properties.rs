use adicomp::cli::{parse_scenario, run, RunOptions};
use adicomp::functors::{adic_system, completeness_profile, Object};
use adicomp::module::FpModule;
use adicomp::ring::{Ideal, Ring};
use adicomp::theorems;
use adicomp::tower::{Status, Verdict, Witness};
use num_bigint::BigInt;
use num_integer::Integer;
use proptest::prelude::*;

fn cyclic(z: &Ring, a: i64) -> FpModule {
    FpModule::cyclic(z, &[z.constant(a)])
}

/// Every prime factor of `a` divides `p`; `p` is prime here.
fn power_of(a: i64, p: i64) -> bool {
    let mut a = a;
    while a % p == 0 {
        a /= p;
    }
    a == 1
}

fn prime() -> impl Strategy<Value = i64> {
    prop::sample::select(vec![2i64, 3, 5, 7])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn parser_never_panics(text in "[a-zA-Z0-9 =()\\[\\],+*^/#>\n-]{0,120}") {
        let _ = parse_scenario(&text);
    }

    #[test]
    fn parser_reports_positions_inside_input(text in "(ring|ideal|module|task) [a-z]{1,3} = [a-z(\\[]{0,8}") {
        if let Err(d) = parse_scenario(&text) {
            prop_assert!(d.line >= 1 && d.col >= 1);
            prop_assert!(d.line <= text.lines().count().max(1));
        }
    }

    #[test]
    fn hom_of_cyclic_groups(a in 1i64..40, b in 1i64..40) {
        let z = Ring::integers();
        let hom = cyclic(&z, a).hom(&cyclic(&z, b)).unwrap();
        prop_assert_eq!(hom.module.cardinality(), Some(BigInt::from(a.gcd(&b))));
    }

    #[test]
    fn adic_stages_of_cyclic_groups(a in 1i64..200, p in prime()) {
        let z = Ring::integers();
        let sys = adic_system(&cyclic(&z, a), &Ideal::new(&z, &[z.constant(p)]), 4).unwrap();
        for n in 1..=4u32 {
            let expect = a.gcd(&p.pow(n));
            prop_assert_eq!(sys.stage(n as usize).cardinality(), Some(BigInt::from(expect)));
        }
    }

    #[test]
    fn six_conditions_on_cyclic_groups(a in 1i64..60, p in prime()) {
        let z = Ring::integers();
        let i = Ideal::new(&z, &[z.constant(p)]);
        let rep = theorems::six_conditions(&Object::Module(cyclic(&z, a)), &i, 4).unwrap();
        prop_assert!(!rep.discrepancy);
        let want = a.gcd(&p) == 1;
        for c in &rep.conditions {
            prop_assert!(c.verdict.is_certified(), "({}) undetermined", c.id);
            prop_assert_eq!(c.verdict.is_holds(), want, "({})", c.id);
        }
    }

    #[test]
    fn completeness_of_cyclic_groups(a in 1i64..100, p in prime()) {
        let z = Ring::integers();
        let prof = completeness_profile(&cyclic(&z, a), &Ideal::new(&z, &[z.constant(p)]), 5).unwrap();
        let want = power_of(a, p);
        for v in [&prof.separated, &prof.adically_complete, &prof.l0_complete, &prof.derived_complete] {
            prop_assert!(v.is_certified());
            prop_assert_eq!(v.is_holds(), want);
        }
        prop_assert!(prof.implications_hold());
    }

    #[test]
    fn koszul_self_duality_over_integers(gens in prop::collection::vec(prop_oneof![-12i64..=-1, 1i64..=12], 1..=2)) {
        let z = Ring::integers();
        let gens: Vec<_> = gens.iter().map(|&g| z.constant(g)).collect();
        let rep = theorems::koszul_self_duality(&z, &Ideal::new(&z, &gens)).unwrap();
        prop_assert!(rep.all_hold());
    }

    #[test]
    fn verdicts_round_trip(
        status in prop::sample::select(vec![Status::Holds, Status::FailsUpToDepth, Status::Undetermined]),
        depth in 0usize..64,
        from in 0usize..10,
        words in prop::collection::vec("[a-z ]{0,12}", 0..3),
    ) {
        let mut v = match status {
            Status::Holds => Verdict::holds(depth, vec![Witness::ZeroComposite { from: from + 1, to: from }, Witness::Exact { fact: words.join(",") }]),
            Status::FailsUpToDepth => Verdict::fails(depth, words.clone()),
            Status::Undetermined => Verdict::undetermined(depth, words.join(" ")),
        };
        if from % 2 == 0 {
            v.note = Some(format!("note {from}"));
        }
        let json = serde_json::to_string(&v).unwrap();
        prop_assert_eq!(serde_json::from_str::<Verdict>(&json).unwrap(), v);
    }
}

#[test]
fn reports_round_trip() {
    let text = "ring Z = ZZ\nideal I = (2)\nmodule M = coker([[12]])\ntask completeness M I\ntask six_conditions M I depth=3\n";
    let report = run(&parse_scenario(text).unwrap(), &RunOptions::default());
    let json = report.to_json();
    let back = adicomp::cli::report::RunReport::from_json(&json).unwrap();
    assert_eq!(back, report);
    assert_eq!(back.to_json(), json);
}
