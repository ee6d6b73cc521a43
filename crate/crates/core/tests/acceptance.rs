//! Acceptance criteria 1 to 10, one PASS/FAIL line each with its time bound.
//! Run with `--nocapture` to see the lines.

mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use common::{props, random_frame, rng};
use deontic_core::fixtures;
use deontic_core::formula::{is_tautology, parse};
use deontic_core::frames::{
    check_property, is_genuine, rule_valid_on_frame, schema_valid_on_frame, FrameProperty,
    PropertyCheck,
};
use deontic_core::inclusions::{inclusion_report, InclusionFact};
use deontic_core::inventory::{AxiomName, RuleName};
use deontic_core::model::{eval, truth_set, validate_model, ModelDescription, NeighbourhoodModel};
use deontic_core::proof::{run_scenario, verify_table1, Checker, ProofScript, EXCLUDED_DERIVABLES};
use deontic_core::search::{
    compute_remainder, find_countermodel, verify_found, Outcome, SearchBounds, Target, Theory,
};

type Check = Result<String, String>;

struct Criterion {
    id: usize,
    name: &'static str,
    bound: Duration,
    run: fn() -> Check,
}

struct Outcome10 {
    passed: bool,
    line: String,
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn model(name: &str) -> Result<(ModelDescription, NeighbourhoodModel), String> {
    let text = fixtures::model(name).ok_or(format!("missing fixture {name}"))?;
    let d: ModelDescription = serde_json::from_str(text).map_err(|e| e.to_string())?;
    let m = NeighbourhoodModel::from_json(text).map_err(|e| e.to_string())?;
    Ok((d, m))
}

fn at(m: &NeighbourhoodModel, w: &str, f: &str) -> Result<bool, String> {
    eval(m, w, &parse(f).map_err(|e| e.to_string())?).map_err(|e| e.to_string())
}

fn derivation_replay() -> Check {
    let checker = Checker::default();
    let expected = [
        ("explosion", "EXPLOSION_DEMO", 4),
        ("controlled_explosion", "FCP_2", 4),
        ("fcp3_ifcp_o", "FCP_3", 8),
        ("fcp3_ifcp_p", "FCP_3", 12),
    ];
    for (name, system, lines) in expected {
        let script =
            ProofScript::parse(fixtures::proof(name).unwrap()).map_err(|e| e.to_string())?;
        ensure(
            script.system == system,
            format!("{name} is in {}", script.system),
        )?;
        ensure(
            script.lines.len() == lines,
            format!("{name} has {} lines", script.lines.len()),
        )?;
        let report = checker.check(&script).map_err(|e| e.to_string())?;
        ensure(
            report.verdict.is_valid(),
            format!("{name}: {}", report.verdict),
        )?;
    }
    Ok("4 derivations valid".into())
}

fn tautology() -> Check {
    let f = parse("(Ps(p | q) & Ps p & Ps q) -> (Ps p & Ps q)").map_err(|e| e.to_string())?;
    ensure(is_tautology(&f), "not recognised as a tautology")?;
    ensure(
        !is_tautology(&parse("Ps(p | q) -> Ps p & Ps q").unwrap()),
        "unrestricted FCP accepted",
    )?;
    Ok("is_tautology = true".into())
}

fn model_one() -> Check {
    let (d, m) = model("corollary3_model1")?;
    validate_model(&d).map_err(|v| format!("{v:?}"))?;
    let ts = truth_set(&m, &parse("~a | c").unwrap());
    ensure(
        m.frame.names(ts) == ["w1", "w2", "w3"],
        format!("⟦~a | c⟧ = {}", m.frame.show(ts)),
    )?;
    ensure(at(&m, "w1", "Ps(~a | c)")?, "Ps(~a | c) false at w1")?;
    ensure(!at(&m, "w1", "Ps c")?, "Ps c true at w1")?;
    let afcpo = check_property(&m.frame, FrameProperty::AFCPO).map_err(|e| e.to_string())?;
    ensure(afcpo.is_satisfied(), "AFCPO violated")?;
    match check_property(&m.frame, FrameProperty::IFCPO).map_err(|e| e.to_string())? {
        PropertyCheck::Violated(w) => ensure(
            is_genuine(&m.frame, FrameProperty::IFCPO, &w),
            "IFCPO witness not genuine",
        )?,
        PropertyCheck::Satisfied => return Err("IFCPO satisfied".into()),
    }
    ensure(at(&m, "w1", "O(a & b)")?, "O(a & b) false at w1")?;
    ensure(!at(&m, "w1", "O(a & c)")?, "O(a & c) true at w1")?;
    Ok("AFCPO satisfied, IFCPO violated (witness re-verified); O(a & b) true, O(a & c) false at w1".into())
}

fn modified_model_one() -> Check {
    let (d, m) = model("corollary3_model1_modified")?;
    validate_model(&d).map_err(|v| format!("{v:?}"))?;
    let osup = check_property(&m.frame, FrameProperty::OSupplemented).map_err(|e| e.to_string())?;
    ensure(!osup.is_satisfied(), "O-supplemented")?;
    let mo = schema_valid_on_frame(&m.frame, &AxiomName::MO.schema()).map_err(|e| e.to_string())?;
    ensure(!mo.is_valid(), "M_O valid")?;
    Ok(format!(
        "OSupplemented violated; M_O {}",
        mo.describe(&m.frame)
    ))
}

fn model_two() -> Check {
    let (d, m) = model("corollary3_model2")?;
    validate_model(&d).map_err(|v| format!("{v:?}"))?;
    // Worked out by hand from the fixture.
    let facts = [
        ("Ps(a | c)", true),
        ("Pw(a & b)", true),
        ("O(a & b)", true),
        ("Ps a", true),
        ("Ps c", false),
    ];
    for (f, want) in facts {
        ensure(at(&m, "w1", f)? == want, format!("{f} at w1 is not {want}"))?;
    }
    for p in [FrameProperty::IFCP2P, FrameProperty::AFCP2P] {
        let c = check_property(&m.frame, p).map_err(|e| e.to_string())?;
        ensure(!c.is_satisfied(), format!("{p} satisfied"))?;
    }
    Ok("Ps a true at w1; IFCP2P and AFCP2P both violated".into())
}

fn lemma_one() -> Check {
    let correspondences = [
        (FrameProperty::PsCoherent, Some(AxiomName::Ds), None),
        (FrameProperty::PwCoherent, Some(AxiomName::Dw), None),
        (FrameProperty::AFCPO, Some(AxiomName::AfcpO), None),
        (FrameProperty::AFCPP, Some(AxiomName::AfcpP), None),
        (FrameProperty::AFCP2P, Some(AxiomName::Afcp2P), None),
        (FrameProperty::IFCPO, None, Some(RuleName::IfcpO)),
        (FrameProperty::IFCPP, None, Some(RuleName::IfcpP)),
        (FrameProperty::IFCP2P, None, Some(RuleName::Ifcp2P)),
    ];
    for (i, (prop, axiom, rule)) in correspondences.into_iter().enumerate() {
        let mut rng = rng(1000 + i as u64);
        let required = props(&[prop]);
        for _ in 0..500 {
            let f = random_frame(&mut rng, 4, &required);
            let check = match (axiom, rule) {
                (Some(a), _) => schema_valid_on_frame(&f, &a.schema()),
                (_, Some(r)) => rule_valid_on_frame(&f, &r.schema().unwrap()),
                _ => unreachable!(),
            }
            .map_err(|e| e.to_string())?;
            ensure(
                check.is_valid(),
                format!("{prop}: {} on {f:?}", check.describe(&f)),
            )?;
        }
    }
    Ok("8 correspondences x 500 frames, 0 violations".into())
}

fn table_one() -> Check {
    let checker = Checker::default();
    let mut n = 0;
    for system in ["Min", "FCP_1", "FCP_3", "FCP_4", "FCP_5", "FCP_6"] {
        for r in verify_table1(&checker, system).map_err(|e| e.to_string())? {
            ensure(
                r.verdict.is_valid(),
                format!("{system} {}: {}", r.principle, r.verdict),
            )?;
            n += 1;
        }
    }
    let excluded: Vec<String> = EXCLUDED_DERIVABLES
        .iter()
        .map(|(s, p)| format!("{s} {p}"))
        .collect();
    Ok(format!(
        "{n} derivable entries valid; excluded: {}",
        excluded.join(", ")
    ))
}

fn scenarios() -> Check {
    let get = |name: &str| {
        run_scenario(name)
            .map_err(|e| e.to_string())?
            .ok_or(format!("no scenario {name}"))
    };
    let r = get("online-return")?;
    ensure(
        r.all_valid() && r.derives("O original"),
        "online-return does not derive O original",
    )?;
    let r = get("etiquette")?;
    ensure(
        r.all_valid() && r.derives("Ps e"),
        "etiquette does not derive Ps e",
    )?;
    let r = get("five-disjuncts")?;
    ensure(
        r.all_valid() && r.derives("Ps(s | t)") && r.derives("Ps t"),
        "five-disjuncts",
    )?;
    let ds: Vec<_> = ["p", "q", "r", "s", "t"]
        .iter()
        .map(|a| parse(a).unwrap())
        .collect();
    let theory = Theory::parse("O ~p\nO ~q\nO ~r").map_err(|e| e.to_string())?;
    let rem = compute_remainder(&ds, &theory, false).map_err(|e| e.to_string())?;
    ensure(
        rem.remainder == "Ps(s | t)" && rem.detached.is_empty(),
        format!("remainder {}", rem.remainder),
    )?;
    let theory = Theory::parse("O ~p\nO ~q\nO ~r\nO ~s").map_err(|e| e.to_string())?;
    let rem = compute_remainder(&ds, &theory, false).map_err(|e| e.to_string())?;
    ensure(
        rem.detached == ["Ps t"],
        format!("detached {:?}", rem.detached),
    )?;
    Ok("O original; Ps e; Ps(s | t), then Ps t".into())
}

fn search() -> Check {
    let bounds = SearchBounds::new(5, 2, ["a", "b", "c"]);
    let required = props(&[FrameProperty::AFCPO]);
    let rule = RuleName::IfcpO.schema().unwrap();
    let r = find_countermodel(&Target::Rule(rule), &required, &bounds, None)
        .map_err(|e| e.to_string())?;
    ensure(
        verify_found(&r, &required),
        "IFCP_O separator not found or does not re-verify",
    )?;
    let Outcome::Found { model: sep, .. } = &r.outcome else {
        unreachable!()
    };
    let none = BTreeSet::new();
    let r2 = find_countermodel(
        &Target::Schema(AxiomName::MO.schema()),
        &none,
        &bounds,
        None,
    )
    .map_err(|e| e.to_string())?;
    ensure(
        verify_found(&r2, &none),
        "M_O countermodel not found or does not re-verify",
    )?;
    let Outcome::Found { model: m, .. } = &r2.outcome else {
        unreachable!()
    };
    let osup = check_property(&m.frame, FrameProperty::OSupplemented).map_err(|e| e.to_string())?;
    ensure(!osup.is_satisfied(), "M_O countermodel is O-supplemented")?;
    Ok(format!(
        "IFCP_O separator: {} world(s), {} models examined; M_O countermodel: {} world(s), {} models examined",
        sep.frame.size(),
        r.stats.models_examined,
        m.frame.size(),
        r2.stats.models_examined
    ))
}

fn pair(f: &InclusionFact) -> String {
    format!("{}⊂{}", f.smaller, f.larger)
}

fn lattice() -> (Check, Vec<InclusionFact>) {
    let report = inclusion_report();
    let failing: Vec<&InclusionFact> = report.iter().filter(|f| !f.verified()).collect();
    let check = if failing.is_empty() {
        Ok("7 strict inclusions verified, all antitone".into())
    } else {
        let parts: Vec<String> = failing
            .iter()
            .map(|f| {
                let why = if f.collapses() {
                    "systems are equal (converse derived)"
                } else {
                    "unverified"
                };
                format!("{}: {why}", pair(f))
            })
            .collect();
        Err(format!(
            "{} of 7 not strict: {}",
            failing.len(),
            parts.join("; ")
        ))
    };
    (check, report)
}

fn lattice_check() -> Check {
    lattice().0
}

const CRITERIA: [Criterion; 10] = [
    Criterion {
        id: 1,
        name: "derivation replay",
        bound: Duration::from_secs(1),
        run: derivation_replay,
    },
    Criterion {
        id: 2,
        name: "tautology check",
        bound: Duration::from_secs(1),
        run: tautology,
    },
    Criterion {
        id: 3,
        name: "fixture model 1",
        bound: Duration::from_secs(1),
        run: model_one,
    },
    Criterion {
        id: 4,
        name: "modified model 1",
        bound: Duration::from_secs(1),
        run: modified_model_one,
    },
    Criterion {
        id: 5,
        name: "fixture model 2",
        bound: Duration::from_secs(1),
        run: model_two,
    },
    Criterion {
        id: 6,
        name: "correspondence suite",
        bound: Duration::from_secs(60),
        run: lemma_one,
    },
    Criterion {
        id: 7,
        name: "derivability table",
        bound: Duration::from_secs(5),
        run: table_one,
    },
    Criterion {
        id: 8,
        name: "scenario detachment",
        bound: Duration::from_secs(1),
        run: scenarios,
    },
    Criterion {
        id: 9,
        name: "countermodel search",
        bound: Duration::from_secs(60),
        run: search,
    },
    Criterion {
        id: 10,
        name: "strength lattice",
        bound: Duration::from_secs(10),
        run: lattice_check,
    },
];

fn run(c: &Criterion) -> Outcome10 {
    let start = Instant::now();
    let result = (c.run)();
    let elapsed = start.elapsed();
    let in_time = elapsed <= c.bound;
    let passed = result.is_ok() && in_time;
    let detail = match &result {
        Ok(d) => d.clone(),
        Err(e) => e.clone(),
    };
    let timing = format!("{:.3}s / {}s", elapsed.as_secs_f64(), c.bound.as_secs());
    let late = if in_time { "" } else { " OVER TIME BOUND" };
    Outcome10 {
        passed,
        line: format!(
            "criterion {:>2} {} {:<22} [{timing}{late}] {detail}",
            c.id,
            if passed { "PASS" } else { "FAIL" },
            c.name
        ),
    }
}

/// Criteria 1 to 9 pass. Criterion 10 fails: three claimed strict
/// inclusions are equalities, shown by derivations checked in the weaker
/// system. This test pins that outcome exactly.
#[test]
fn acceptance() {
    let results: Vec<Outcome10> = CRITERIA.iter().map(run).collect();
    for r in &results {
        println!("{}", r.line);
    }
    for (c, r) in CRITERIA.iter().zip(&results).take(9) {
        assert!(r.passed, "criterion {} failed: {}", c.id, r.line);
    }
    let (_, report) = lattice();
    let strict: Vec<String> = report.iter().filter(|f| f.verified()).map(pair).collect();
    let equal: Vec<String> = report.iter().filter(|f| f.collapses()).map(pair).collect();
    assert_eq!(
        strict,
        ["FCP_2⊂FCP_1", "FCP_1⊂FCP_3", "FCP_4⊂FCP_5", "FCP_5⊂FCP_6"]
    );
    assert_eq!(equal, ["FCP_3⊂FCP_6", "FCP_2⊂FCP_4", "FCP_1⊂FCP_5"]);
    assert!(report.iter().all(|f| f.included() && f.antitone));
    assert!(!results[9].passed);
}

/// Criterion 10 as stated. Fails; see the `acceptance` test.
#[test]
#[ignore = "three claimed strict inclusions are equalities"]
fn criterion_10_as_stated() {
    let r = run(&CRITERIA[9]);
    assert!(r.passed, "{}", r.line);
}
