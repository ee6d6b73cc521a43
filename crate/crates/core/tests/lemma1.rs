//! Frame correspondence on random frames.

mod common;

use common::{props, random_frame, rng};
use deontic_core::frames::{
    check_property, rule_valid_on_frame, schema_valid_on_frame, FrameProperty,
};
use deontic_core::inventory::{AxiomName, RuleName};
use deontic_core::model::Frame;
use deontic_core::systems::PROPERTY_IMPLICATIONS;

const FRAMES: usize = 500;

enum Principle {
    Axiom(AxiomName),
    Rule(RuleName),
}

const CORRESPONDENCES: [(FrameProperty, Principle); 8] = [
    (FrameProperty::PsCoherent, Principle::Axiom(AxiomName::Ds)),
    (FrameProperty::PwCoherent, Principle::Axiom(AxiomName::Dw)),
    (FrameProperty::AFCPO, Principle::Axiom(AxiomName::AfcpO)),
    (FrameProperty::AFCPP, Principle::Axiom(AxiomName::AfcpP)),
    (FrameProperty::AFCP2P, Principle::Axiom(AxiomName::Afcp2P)),
    (FrameProperty::IFCPO, Principle::Rule(RuleName::IfcpO)),
    (FrameProperty::IFCPP, Principle::Rule(RuleName::IfcpP)),
    (FrameProperty::IFCP2P, Principle::Rule(RuleName::Ifcp2P)),
];

fn valid(frame: &Frame, p: &Principle) -> bool {
    match p {
        Principle::Axiom(a) => schema_valid_on_frame(frame, &a.schema())
            .unwrap()
            .is_valid(),
        Principle::Rule(r) => rule_valid_on_frame(frame, &r.schema().unwrap())
            .unwrap()
            .is_valid(),
    }
}

#[test]
fn property_frames_validate_their_principle() {
    for (i, (prop, principle)) in CORRESPONDENCES.iter().enumerate() {
        let mut rng = rng(100 + i as u64);
        let required = props(&[*prop]);
        let mut populated = 0;
        for _ in 0..FRAMES {
            let f = random_frame(&mut rng, 4, &required);
            assert!(valid(&f, principle), "{prop}: {f:?}");
            populated += usize::from(
                f.n_o.iter().any(|n| !n.is_empty()) && f.n_p.iter().any(|n| !n.is_empty()),
            );
        }
        assert!(
            populated > FRAMES / 2,
            "{prop}: only {populated} frames with both neighbourhoods used"
        );
    }
}

/// Without the property, the principle fails somewhere on the frame.
#[test]
fn principle_fails_without_the_property() {
    let mut rng = rng(3);
    let none = props(&[]);
    let mut violated = [0usize; 8];
    for _ in 0..400 {
        let f = random_frame(&mut rng, 3, &none);
        for (i, (prop, principle)) in CORRESPONDENCES.iter().enumerate() {
            let holds = check_property(&f, *prop).unwrap().is_satisfied();
            assert_eq!(holds, valid(&f, principle), "{prop}: {f:?}");
            violated[i] += usize::from(!holds);
        }
    }
    assert!(violated.iter().all(|&v| v > 0), "{violated:?}");
}

#[test]
fn property_implications_hold() {
    for (i, (premises, conclusion)) in PROPERTY_IMPLICATIONS.iter().enumerate() {
        let mut rng = rng(200 + i as u64);
        let required = props(premises);
        for _ in 0..200 {
            let f = random_frame(&mut rng, 4, &required);
            assert!(
                check_property(&f, *conclusion).unwrap().is_satisfied(),
                "{premises:?} => {conclusion}: {f:?}"
            );
        }
    }
}
