//! The claimed strict inclusions between the FCP systems. Each is checked
//! for derivation evidence, a separating frame and a frame-class comparison.
//! Where no separator exists the converse derivations are checked instead.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::fixtures;
use crate::formula::{parse, Schema};
use crate::frames::{check_property, classify_frame, schema_valid_on_frame, FrameProperty};
use crate::inventory::{AxiomName, Principle, RuleName};
use crate::model::{eval, NeighbourhoodModel};
use crate::proof::{table1_entries, verify_entry, Checker, Table1Entry};
use crate::systems::class_contained;

/// Claimed strict inclusions as `(smaller, larger)` pairs, weaker system first.
pub const INCLUSIONS: [(&str, &str); 7] = [
    ("FCP_2", "FCP_1"),
    ("FCP_1", "FCP_3"),
    ("FCP_3", "FCP_6"),
    ("FCP_2", "FCP_4"),
    ("FCP_4", "FCP_5"),
    ("FCP_5", "FCP_6"),
    ("FCP_1", "FCP_5"),
];

/// A theorem of the larger system refuted on a frame of the smaller system's
/// class. Rule separators use the rule's instance with a tautological side
/// condition.
pub fn separator_schema(smaller: &str, larger: &str) -> Option<(&'static str, Schema)> {
    let (label, text) = match (smaller, larger) {
        ("FCP_2", "FCP_1") | ("FCP_4", "FCP_5") => (
            "IFCP_O with side r & ~p -> ~p",
            "Ps(p | q) & O(r & ~p) -> Ps q",
        ),
        ("FCP_1", "FCP_3") | ("FCP_5", "FCP_6") => ("M_O", "O(p & q) -> O p & O q"),
        _ => return None,
    };
    Some((
        label,
        Schema::parse(label, text).expect("separator schemas parse"),
    ))
}

/// Scripts deriving a principle of the larger system in the smaller one,
/// for the pairs that turn out equal: `(system, principle, script)`.
pub const CONVERSE_SCRIPTS: [(&str, Principle, &str); 3] = [
    ("FCP_2", Principle::Axiom(AxiomName::Afcp2P), "fcp2_afcp2_p"),
    ("FCP_3", Principle::Axiom(AxiomName::Afcp2P), "fcp2_afcp2_p"),
    ("FCP_1", Principle::Rule(RuleName::Ifcp2P), "fcp1_ifcp2_p"),
];

/// Name of the bundled separating frame for an inclusion.
pub fn separator_fixture(smaller: &str, larger: &str) -> String {
    format!("{}_in_{}", smaller.to_lowercase(), larger.to_lowercase())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Evidence {
    pub principle: Principle,
    /// `primitive`, or the supporting script.
    pub source: String,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Separator {
    pub fixture: String,
    pub refuted: String,
    /// The frame lies in the smaller system's class.
    pub in_class: bool,
    /// The refuted theorem fails on the frame.
    pub refutes: bool,
    pub witness: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Claim {
    pub statement: String,
    pub holds: bool,
}

/// Claims made for a bundled example model, with what the
/// engine finds.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExampleClaims {
    pub fixture: String,
    pub claims: Vec<Claim>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InclusionFact {
    pub smaller: String,
    pub larger: String,
    pub evidence: Vec<Evidence>,
    pub separator: Option<Separator>,
    /// The larger system's primitives, derived in the smaller system.
    pub converse: Vec<Evidence>,
    pub example: Option<ExampleClaims>,
    /// The larger system's frame class is contained in the smaller's.
    pub antitone: bool,
}

impl InclusionFact {
    /// Every primitive of the smaller system is a theorem of the larger.
    pub fn included(&self) -> bool {
        !self.evidence.is_empty() && self.evidence.iter().all(|e| e.ok)
    }

    /// A checked separating frame exists.
    pub fn separated(&self) -> bool {
        self.separator
            .as_ref()
            .is_some_and(|s| s.in_class && s.refutes)
    }

    /// The converse inclusion holds as well, so the systems coincide.
    pub fn collapses(&self) -> bool {
        !self.converse.is_empty() && self.converse.iter().all(|e| e.ok)
    }

    /// The inclusion holds and is strict.
    pub fn verified(&self) -> bool {
        self.included() && self.separated() && self.antitone
    }
}

/// Derivations in `larger` of each primitive of `smaller`.
fn evidence(checker: &Checker, smaller: &str, larger: &str) -> Vec<Evidence> {
    let reg = checker.registry();
    let (Ok(small), Ok(large)) = (reg.get(smaller), reg.get(larger)) else {
        return vec![];
    };
    let mut entries = table1_entries();
    entries.extend(
        CONVERSE_SCRIPTS
            .iter()
            .map(|&(system, principle, script)| Table1Entry {
                system,
                principle,
                script,
            }),
    );
    small
        .primitives()
        .into_iter()
        .map(|p| {
            if large.primitives().contains(&p) {
                return Evidence {
                    principle: p,
                    source: "primitive".into(),
                    ok: true,
                };
            }
            let Some(entry) = entries
                .iter()
                .find(|e| e.system == large.name && e.principle == p)
            else {
                return Evidence {
                    principle: p,
                    source: "none".into(),
                    ok: false,
                };
            };
            let ok = if large.provides(p) {
                checker.lemma(&large.name, p).is_ok()
            } else {
                verify_entry(checker, entry).is_ok_and(|r| r.verdict.is_valid())
            };
            Evidence {
                principle: p,
                source: entry.script.to_string(),
                ok,
            }
        })
        .collect()
}

fn separator(checker: &Checker, smaller: &str, larger: &str) -> Option<Separator> {
    let (label, schema) = separator_schema(smaller, larger)?;
    let fixture = separator_fixture(smaller, larger);
    let model = NeighbourhoodModel::from_json(fixtures::separator(&fixture)?).ok()?;
    let class = checker.registry().frame_class(smaller).ok()?;
    let props = classify_frame(&model.frame).ok()?;
    let check = schema_valid_on_frame(&model.frame, &schema).ok()?;
    Some(Separator {
        fixture,
        refuted: format!("{label}: {}", schema.body),
        in_class: props.is_superset(class),
        refutes: !check.is_valid(),
        witness: check.describe(&model.frame),
    })
}

fn claim(statement: &str, holds: bool) -> Claim {
    Claim {
        statement: statement.to_string(),
        holds,
    }
}

fn has(m: &NeighbourhoodModel, p: FrameProperty) -> bool {
    matches!(check_property(&m.frame, p), Ok(c) if c.is_satisfied())
}

fn example(smaller: &str, larger: &str) -> Option<ExampleClaims> {
    let name = match (smaller, larger) {
        ("FCP_2", "FCP_1") => "corollary3_model1",
        ("FCP_1", "FCP_3") => "corollary3_model1_modified",
        ("FCP_4", "FCP_5") => "corollary3_model2",
        _ => return None,
    };
    let m = NeighbourhoodModel::from_json(fixtures::model(name)?).ok()?;
    let truth =
        |w: &str, f: &str| eval(&m, w, &parse(f).expect("claim formulas parse")).unwrap_or(false);
    let claims = match name {
        "corollary3_model1" => vec![
            claim("AFCPO-permitted", has(&m, FrameProperty::AFCPO)),
            claim("not IFCPO-permitted", !has(&m, FrameProperty::IFCPO)),
            claim("Ps(~a | c) & O(a & b) at w1, Ps c false", {
                truth("w1", "Ps(~a | c) & O(a & b)") && !truth("w1", "Ps c")
            }),
        ],
        "corollary3_model1_modified" => vec![
            claim("IFCPO-permitted", has(&m, FrameProperty::IFCPO)),
            claim("not O-supplemented", !has(&m, FrameProperty::OSupplemented)),
            claim(
                "falsifies M_O",
                schema_valid_on_frame(&m.frame, &crate::inventory::AxiomName::MO.schema())
                    .is_ok_and(|c| !c.is_valid()),
            ),
        ],
        _ => vec![
            claim("IFCP2P-permitted", has(&m, FrameProperty::IFCP2P)),
            claim("not AFCP2P-permitted", !has(&m, FrameProperty::AFCP2P)),
            claim(
                "Ps(a | c) & Pw(a & b) at w1",
                truth("w1", "Ps(a | c) & Pw(a & b)"),
            ),
            claim("Ps a false at w1", !truth("w1", "Ps a")),
        ],
    };
    Some(ExampleClaims {
        fixture: name.to_string(),
        claims,
    })
}

/// The seven claimed inclusions with their supporting checks.
pub fn inclusion_report() -> Vec<InclusionFact> {
    let checker = Checker::default();
    let reg = checker.registry();
    INCLUSIONS
        .iter()
        .map(|&(smaller, larger)| {
            let antitone = match (reg.frame_class(smaller), reg.frame_class(larger)) {
                (Ok(s), Ok(l)) => class_contained(l, s),
                _ => false,
            };
            InclusionFact {
                smaller: smaller.to_string(),
                larger: larger.to_string(),
                evidence: evidence(&checker, smaller, larger),
                separator: separator(&checker, smaller, larger),
                converse: evidence(&checker, larger, smaller),
                example: example(smaller, larger),
                antitone,
            }
        })
        .collect()
}

/// Properties shared by every frame of the class, for display.
pub fn class_names(props: &BTreeSet<FrameProperty>) -> String {
    props
        .iter()
        .map(|p| p.name())
        .collect::<Vec<_>>()
        .join(", ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::search::{find_countermodel, verify_found, SearchBounds, Target};

    const COLLAPSED: [(&str, &str); 3] =
        [("FCP_3", "FCP_6"), ("FCP_2", "FCP_4"), ("FCP_1", "FCP_5")];

    #[test]
    fn inclusions_hold_and_separate_or_collapse() {
        for fact in inclusion_report() {
            assert!(fact.included() && fact.antitone, "{fact:#?}");
            let pair = (fact.smaller.as_str(), fact.larger.as_str());
            if COLLAPSED.contains(&pair) {
                assert!(fact.collapses() && !fact.verified(), "{fact:#?}");
            } else {
                assert!(fact.verified() && !fact.collapses(), "{fact:#?}");
            }
        }
    }

    /// The modified first model is not IFCPO-permitted and the second model
    /// is not IFCP2P-permitted, with Ps a true at w1. Every other claim checks.
    #[test]
    fn example_model_claims() {
        let mut failing = vec![];
        for fact in inclusion_report() {
            for c in fact.example.iter().flat_map(|p| &p.claims) {
                if !c.holds {
                    failing.push((
                        fact.example.as_ref().unwrap().fixture.clone(),
                        c.statement.clone(),
                    ));
                }
            }
        }
        let expected = [
            ("corollary3_model1_modified", "IFCPO-permitted"),
            ("corollary3_model2", "IFCP2P-permitted"),
            ("corollary3_model2", "Ps a false at w1"),
        ];
        let expected: Vec<(String, String)> = expected
            .iter()
            .map(|(a, b)| (a.to_string(), b.to_string()))
            .collect();
        assert_eq!(failing, expected);
    }

    /// The bundled separators are what the search finds.
    #[test]
    fn separators_are_reproducible() {
        let reg = fixtures::registry();
        for (smaller, larger) in INCLUSIONS {
            let Some((_, schema)) = separator_schema(smaller, larger) else {
                continue;
            };
            let class = reg.frame_class(smaller).unwrap().clone();
            let r = find_countermodel(
                &Target::Schema(schema),
                &class,
                &SearchBounds::new(4, 2, ["p", "q", "r"]),
                None,
            )
            .unwrap();
            assert!(verify_found(&r, &class), "{smaller} {larger}");
            let crate::search::Outcome::Found { model, .. } = r.outcome else {
                panic!()
            };
            let bundled = NeighbourhoodModel::from_json(
                fixtures::separator(&separator_fixture(smaller, larger)).unwrap(),
            )
            .unwrap();
            assert_eq!(model.frame, bundled.frame, "{smaller} {larger}");
        }
    }
}
