//! Bundled fixture files: example models, proof scripts, scenarios,
//! separating frames and system definitions.

use crate::systems::Registry;

macro_rules! bundle {
    ($dir:literal, $ext:literal, [$($name:literal),* $(,)?]) => {
        &[$(($name, include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/../../fixtures/", $dir, $name, $ext)))),*]
    };
}

const MODELS: &[(&str, &str)] = bundle!(
    "",
    ".json",
    [
        "corollary3_model1",
        "corollary3_model1_modified",
        "corollary3_model2"
    ]
);

const PROOFS: &[(&str, &str)] = bundle!(
    "proofs/",
    ".proof",
    [
        "explosion",
        "controlled_explosion",
        "fcp3_ifcp_o",
        "fcp3_ifcp_p",
        "pspw",
        "fcp1_afcp_o",
        "fcp1_afcp_p",
        "fcp4_afcp_p",
        "fcp5_afcp2_p",
        "fcp5_ifcp_p",
        "fcp6_ifcp2_p",
        "fcp6_afcp_o",
        "fcp6_afcp2_p",
        "fcp2_afcp2_p",
        "fcp1_ifcp2_p",
    ]
);

const SCENARIOS: &[(&str, &str)] = bundle!(
    "scenarios/",
    ".proof",
    [
        "etiquette",
        "online-return",
        "five-disjuncts",
        "five-disjuncts-extended"
    ]
);

const SEPARATORS: &[(&str, &str)] = bundle!(
    "separators/",
    ".json",
    [
        "fcp_2_in_fcp_1",
        "fcp_1_in_fcp_3",
        "fcp_4_in_fcp_5",
        "fcp_5_in_fcp_6"
    ]
);

const SYSTEMS: &[(&str, &str)] = bundle!("systems/", ".toml", ["explosion_demo"]);

fn lookup(table: &[(&'static str, &'static str)], name: &str) -> Option<&'static str> {
    table
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, text)| *text)
}

fn names(table: &[(&'static str, &'static str)]) -> Vec<&'static str> {
    table.iter().map(|(n, _)| *n).collect()
}

/// A model description (JSON) by file stem.
pub fn model(name: &str) -> Option<&'static str> {
    lookup(MODELS, name)
}

pub fn model_names() -> Vec<&'static str> {
    names(MODELS)
}

/// A proof script by file stem.
pub fn proof(name: &str) -> Option<&'static str> {
    lookup(PROOFS, name)
}

pub fn proof_names() -> Vec<&'static str> {
    names(PROOFS)
}

/// A scenario script by file stem.
pub fn scenario(name: &str) -> Option<&'static str> {
    lookup(SCENARIOS, name)
}

/// A separating frame (model JSON) by file stem.
pub fn separator(name: &str) -> Option<&'static str> {
    lookup(SEPARATORS, name)
}

/// A system definition (TOML) by file stem.
pub fn system(name: &str) -> Option<&'static str> {
    lookup(SYSTEMS, name)
}

/// The built-in systems plus the bundled user systems.
pub fn registry() -> Registry {
    let mut r = Registry::new();
    for (_, text) in SYSTEMS {
        r.define_from_toml(text)
            .expect("bundled system definitions are valid");
    }
    r
}
