//! Named deontic systems: their axioms, rules, adequate frame classes and
//! derivable principles.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::formula::Modality;
use crate::frames::FrameProperty;
use crate::inventory::{AxiomName, Principle, RuleName};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SystemDef {
    pub name: String,
    pub axioms: BTreeSet<AxiomName>,
    pub rules: BTreeSet<RuleName>,
    /// Frame properties of the adequate class; `None` for user systems.
    pub frame_class: Option<BTreeSet<FrameProperty>>,
    /// Principles the system derives without having them as primitives.
    pub derivable: Vec<Principle>,
}

/// Rules every system has.
pub const BASE_RULES: [RuleName; 4] = [RuleName::MP, RuleName::Taut, RuleName::REO, RuleName::REPs];

impl SystemDef {
    /// A system over the base rules with the given extra components.
    pub fn new<A, R>(name: impl Into<String>, axioms: A, rules: R) -> SystemDef
    where
        A: IntoIterator<Item = AxiomName>,
        R: IntoIterator<Item = RuleName>,
    {
        let mut all_rules: BTreeSet<RuleName> = BASE_RULES.into_iter().collect();
        all_rules.extend(rules);
        SystemDef {
            name: name.into(),
            axioms: axioms.into_iter().collect(),
            rules: all_rules,
            frame_class: None,
            derivable: Vec::new(),
        }
    }

    pub fn has_axiom(&self, a: AxiomName) -> bool {
        self.axioms.contains(&a)
    }

    pub fn has_rule(&self, r: RuleName) -> bool {
        self.rules.contains(&r)
    }

    /// Whether ⊢ A→B yields ⊢ □A→□B for `m`. Monotonicity follows from M for
    /// the same operator; for `Pw` it follows from monotonicity of `O` by
    /// contraposition.
    pub fn admits_rm(&self, m: Modality) -> bool {
        match m {
            Modality::Obl | Modality::PermW => {
                self.has_rule(RuleName::RMO) || self.has_axiom(AxiomName::MO)
            }
            Modality::PermS => self.has_rule(RuleName::RMPs) || self.has_axiom(AxiomName::MPs),
        }
    }

    /// Primitive axioms and non-structural rules.
    pub fn primitives(&self) -> BTreeSet<Principle> {
        self.axioms
            .iter()
            .map(|a| Principle::Axiom(*a))
            .chain(
                self.rules
                    .iter()
                    .filter(|r| !BASE_RULES.contains(r))
                    .map(|r| Principle::Rule(*r)),
            )
            .collect()
    }

    /// Whether `p` is primitive or listed as derivable. RM for an operator
    /// also counts as present when its M axiom is.
    pub fn provides(&self, p: Principle) -> bool {
        let primitive = match p {
            Principle::Axiom(a) => self.has_axiom(a),
            Principle::Rule(r @ (RuleName::RMO | RuleName::RMPs)) => {
                self.admits_rm(r.modality().expect("RM rules have a modality"))
            }
            Principle::Rule(r) => self.has_rule(r),
        };
        primitive || self.derivable.contains(&p)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SystemError {
    #[error("unknown system `{0}`")]
    UnknownSystem(String),
    #[error("system `{0}` is already defined")]
    Duplicate(String),
    #[error("unknown axiom or rule `{0}`")]
    UnknownComponent(String),
    #[error("system `{0}` has no adequate frame class on record")]
    NoFrameClass(String),
    #[error("malformed system file: {0}")]
    Format(String),
}

/// On-disk form of a user system (TOML).
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemFile {
    pub name: String,
    /// Built-in system whose components are inherited.
    #[serde(default)]
    pub extends: Option<String>,
    #[serde(default)]
    pub axioms: Vec<String>,
    #[serde(default)]
    pub rules: Vec<String>,
}

fn p(props: &[FrameProperty]) -> BTreeSet<FrameProperty> {
    props.iter().copied().collect()
}

fn builtins() -> Vec<SystemDef> {
    use AxiomName as A;
    use FrameProperty as F;
    use Principle::{Axiom as Ax, Rule as Ru};
    use RuleName as R;

    let min = [A::Ds, A::Dw];
    let min_props = [F::PsCoherent, F::PwCoherent];
    let with = |extra: &[F]| {
        let mut s = p(&min_props);
        s.extend(extra.iter().copied());
        Some(s)
    };
    let sys = |name: &str, axioms: Vec<A>, rules: Vec<R>, fc, derivable| SystemDef {
        frame_class: fc,
        derivable,
        ..SystemDef::new(name, axioms, rules)
    };
    let cat = |a: &[A], b: &[A]| a.iter().chain(b).copied().collect::<Vec<_>>();

    vec![
        sys("E", vec![], vec![], Some(BTreeSet::new()), vec![]),
        sys(
            "Min",
            min.to_vec(),
            vec![],
            Some(p(&min_props)),
            vec![Ax(A::PsPw)],
        ),
        sys(
            "FCP_1",
            min.to_vec(),
            vec![R::IfcpO, R::IfcpP],
            with(&[F::IFCPO, F::IFCPP]),
            vec![Ax(A::PsPw), Ax(A::AfcpO), Ax(A::AfcpP)],
        ),
        sys(
            "FCP_2",
            cat(&min, &[A::AfcpO, A::AfcpP]),
            vec![],
            with(&[F::AFCPO, F::AFCPP]),
            vec![Ax(A::PsPw)],
        ),
        sys(
            "FCP_3",
            cat(&min, &[A::AfcpO, A::AfcpP, A::MO, A::MPs]),
            vec![],
            with(&[F::AFCPO, F::AFCPP, F::OSupplemented, F::PSupplemented]),
            vec![Ax(A::PsPw), Ru(R::IfcpO), Ru(R::IfcpP)],
        ),
        sys(
            "FCP_4",
            cat(&min, &[A::AfcpO, A::Afcp2P]),
            vec![],
            with(&[F::AFCPO, F::AFCP2P]),
            vec![Ax(A::PsPw), Ax(A::AfcpP)],
        ),
        sys(
            "FCP_5",
            min.to_vec(),
            vec![R::IfcpO, R::Ifcp2P],
            with(&[F::IFCPO, F::IFCP2P]),
            vec![
                Ax(A::PsPw),
                Ru(R::IfcpP),
                Ax(A::AfcpO),
                Ax(A::AfcpP),
                Ax(A::Afcp2P),
            ],
        ),
        sys(
            "FCP_6",
            cat(&min, &[A::AfcpO, A::Afcp2P, A::MO, A::MPs]),
            vec![],
            with(&[F::IFCPO, F::IFCP2P, F::OSupplemented, F::PSupplemented]),
            vec![
                Ax(A::PsPw),
                Ru(R::IfcpP),
                Ax(A::AfcpO),
                Ax(A::AfcpP),
                Ax(A::Afcp2P),
                Ru(R::Ifcp2P),
                Ru(R::IfcpO),
            ],
        ),
    ]
}

/// Names of the built-in systems, weakest first.
pub const BUILTIN_NAMES: [&str; 8] = [
    "E", "Min", "FCP_1", "FCP_2", "FCP_3", "FCP_4", "FCP_5", "FCP_6",
];

/// Accepts `FCP2`, `fcp_2`, `MIN` and the like.
pub fn canonical_name(name: &str) -> String {
    let upper = name.trim().to_ascii_uppercase();
    if upper == "MIN" {
        return "Min".into();
    }
    if let Some(rest) = upper.strip_prefix("FCP") {
        let digits = rest.trim_start_matches('_');
        if !digits.is_empty() && digits.chars().all(|c| c.is_ascii_digit()) {
            return format!("FCP_{digits}");
        }
    }
    name.trim().to_string()
}

/// Built-in systems plus user definitions.
#[derive(Clone, Debug)]
pub struct Registry {
    systems: BTreeMap<String, SystemDef>,
}

impl Default for Registry {
    fn default() -> Self {
        Registry::new()
    }
}

impl Registry {
    pub fn new() -> Registry {
        Registry {
            systems: builtins()
                .into_iter()
                .map(|s| (s.name.clone(), s))
                .collect(),
        }
    }

    pub fn get(&self, name: &str) -> Result<&SystemDef, SystemError> {
        self.systems
            .get(&canonical_name(name))
            .ok_or_else(|| SystemError::UnknownSystem(name.to_string()))
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.systems.keys().map(String::as_str)
    }

    /// Registers a user system. The base rules are added if missing.
    pub fn define(&mut self, mut def: SystemDef) -> Result<String, SystemError> {
        let name = canonical_name(&def.name);
        if self.systems.contains_key(&name) {
            return Err(SystemError::Duplicate(name));
        }
        def.name = name.clone();
        def.rules.extend(BASE_RULES);
        self.systems.insert(name.clone(), def);
        Ok(name)
    }

    /// Resolves a system file's component names and registers it.
    pub fn define_from_file(&mut self, file: &SystemFile) -> Result<String, SystemError> {
        let def = self.resolve_file(file)?;
        self.define(def)
    }

    pub fn resolve_file(&self, file: &SystemFile) -> Result<SystemDef, SystemError> {
        let mut def = match &file.extends {
            Some(base) => {
                let b = self.get(base)?;
                SystemDef::new(&file.name, b.axioms.clone(), b.rules.clone())
            }
            None => SystemDef::new(&file.name, [], []),
        };
        for a in &file.axioms {
            match a.as_str() {
                "M" => def.axioms.extend([AxiomName::MO, AxiomName::MPs]),
                other => {
                    def.axioms.insert(
                        other
                            .parse()
                            .map_err(|_| SystemError::UnknownComponent(other.into()))?,
                    );
                }
            }
        }
        for r in &file.rules {
            match r.as_str() {
                "RE" => def.rules.extend([RuleName::REO, RuleName::REPs]),
                "RM" => def.rules.extend([RuleName::RMO, RuleName::RMPs]),
                other => {
                    def.rules.insert(
                        other
                            .parse()
                            .map_err(|_| SystemError::UnknownComponent(other.into()))?,
                    );
                }
            }
        }
        Ok(def)
    }

    pub fn define_from_toml(&mut self, text: &str) -> Result<String, SystemError> {
        let file: SystemFile =
            toml::from_str(text).map_err(|e| SystemError::Format(e.to_string()))?;
        self.define_from_file(&file)
    }

    pub fn frame_class(&self, name: &str) -> Result<&BTreeSet<FrameProperty>, SystemError> {
        let s = self.get(name)?;
        s.frame_class
            .as_ref()
            .ok_or_else(|| SystemError::NoFrameClass(s.name.clone()))
    }
}

/// Implications between frame properties, each a consequence of the
/// definitions (checked on random frames in the test suite).
pub const PROPERTY_IMPLICATIONS: [(&[FrameProperty], FrameProperty); 10] = [
    (&[FrameProperty::IFCPO], FrameProperty::AFCPO),
    (&[FrameProperty::IFCPP], FrameProperty::AFCPP),
    (&[FrameProperty::IFCP2P], FrameProperty::AFCP2P),
    (&[FrameProperty::IFCP2P], FrameProperty::IFCPP),
    (&[FrameProperty::AFCP2P], FrameProperty::AFCPP),
    (
        &[FrameProperty::AFCPO, FrameProperty::AFCPP],
        FrameProperty::AFCP2P,
    ),
    (
        &[FrameProperty::IFCPO, FrameProperty::IFCPP],
        FrameProperty::IFCP2P,
    ),
    (
        &[FrameProperty::OSupplemented, FrameProperty::AFCPO],
        FrameProperty::IFCPO,
    ),
    (
        &[FrameProperty::OSupplemented, FrameProperty::AFCPP],
        FrameProperty::IFCPP,
    ),
    (
        &[FrameProperty::OSupplemented, FrameProperty::AFCP2P],
        FrameProperty::IFCP2P,
    ),
];

/// Closes a property set under [`PROPERTY_IMPLICATIONS`].
pub fn property_closure(props: &BTreeSet<FrameProperty>) -> BTreeSet<FrameProperty> {
    let mut out = props.clone();
    loop {
        let before = out.len();
        for (premises, conclusion) in PROPERTY_IMPLICATIONS {
            if premises.iter().all(|p| out.contains(p)) {
                out.insert(conclusion);
            }
        }
        if out.len() == before {
            return out;
        }
    }
}

/// Whether every frame with all of `stronger` also has all of `weaker`.
pub fn class_contained(
    stronger: &BTreeSet<FrameProperty>,
    weaker: &BTreeSet<FrameProperty>,
) -> bool {
    property_closure(stronger).is_superset(weaker)
}
