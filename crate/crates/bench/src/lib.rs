//! Shared inputs for the benchmarks.

use deontic_core::fixtures;
use deontic_core::formula::{parse, Formula};
use deontic_core::model::NeighbourhoodModel;
use deontic_core::proof::ProofScript;

/// Formulas of growing size: an n-way disjunctive permission with all but
/// the last disjunct forbidden, implying the detached permission.
pub fn detachment_formula(n: usize) -> Formula {
    let atoms: Vec<String> = (0..n).map(|i| format!("p{i}")).collect();
    let forbidden: Vec<String> = atoms[..n - 1].iter().map(|a| format!("O ~{a}")).collect();
    let text = format!(
        "Ps({}) & {} -> Ps({})",
        atoms.join(" | "),
        forbidden.join(" & "),
        atoms[n - 1]
    );
    parse(&text).expect("generated formula parses")
}

pub fn example_model(name: &str) -> NeighbourhoodModel {
    NeighbourhoodModel::from_json(fixtures::model(name).expect("bundled model"))
        .expect("bundled model is valid")
}

pub fn bundled_script(name: &str) -> ProofScript {
    ProofScript::parse(fixtures::proof(name).expect("bundled script"))
        .expect("bundled script parses")
}
