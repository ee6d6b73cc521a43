//! The named axiom schemata and inference rules of the deontic systems.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::formula::{parse, Formula, Modality, Schema};
use crate::frames::FrameProperty;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum AxiomName {
    MO,
    MPs,
    AfcpO,
    AfcpP,
    Afcp2P,
    Ds,
    Dw,
    PsPw,
    Fcp,
}

impl AxiomName {
    pub const ALL: [AxiomName; 9] = [
        AxiomName::MO,
        AxiomName::MPs,
        AxiomName::AfcpO,
        AxiomName::AfcpP,
        AxiomName::Afcp2P,
        AxiomName::Ds,
        AxiomName::Dw,
        AxiomName::PsPw,
        AxiomName::Fcp,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AxiomName::MO => "M_O",
            AxiomName::MPs => "M_Ps",
            AxiomName::AfcpO => "AFCP_O",
            AxiomName::AfcpP => "AFCP_P",
            AxiomName::Afcp2P => "AFCP2_P",
            AxiomName::Ds => "D_s",
            AxiomName::Dw => "D_w",
            AxiomName::PsPw => "P_sP_w",
            AxiomName::Fcp => "FCP",
        }
    }

    pub fn body_text(self) -> &'static str {
        match self {
            AxiomName::MO => "O(p & q) -> O p & O q",
            AxiomName::MPs => "Ps(p & q) -> Ps p & Ps q",
            AxiomName::AfcpO => "Ps(p | q) & O ~p -> Ps q",
            AxiomName::AfcpP => "Ps(p | q) & Pw p & Pw q -> Ps p & Ps q",
            AxiomName::Afcp2P => "Ps(p | q) & Pw p -> Ps p",
            AxiomName::Ds => "O p & Ps ~p -> F",
            AxiomName::Dw => "O p & O ~p -> F",
            AxiomName::PsPw => "Ps p -> Pw p",
            AxiomName::Fcp => "Ps(p | q) -> Ps p & Ps q",
        }
    }

    pub fn schema(self) -> Schema {
        Schema::new(
            self.name(),
            parse(self.body_text()).expect("built-in schema parses"),
        )
    }

    /// The frame condition under which the schema is valid, if it has one of
    /// its own.
    pub fn frame_property(self) -> Option<FrameProperty> {
        match self {
            AxiomName::MO => Some(FrameProperty::OSupplemented),
            AxiomName::MPs => Some(FrameProperty::PSupplemented),
            AxiomName::AfcpO => Some(FrameProperty::AFCPO),
            AxiomName::AfcpP => Some(FrameProperty::AFCPP),
            AxiomName::Afcp2P => Some(FrameProperty::AFCP2P),
            AxiomName::Ds | AxiomName::PsPw => Some(FrameProperty::PsCoherent),
            AxiomName::Dw => Some(FrameProperty::PwCoherent),
            AxiomName::Fcp => None,
        }
    }
}

impl fmt::Display for AxiomName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AxiomName {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        AxiomName::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| format!("unknown axiom `{s}`"))
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum RuleName {
    MP,
    Taut,
    REO,
    REPs,
    RMO,
    RMPs,
    IfcpO,
    IfcpP,
    Ifcp2P,
}

impl RuleName {
    pub const ALL: [RuleName; 9] = [
        RuleName::MP,
        RuleName::Taut,
        RuleName::REO,
        RuleName::REPs,
        RuleName::RMO,
        RuleName::RMPs,
        RuleName::IfcpO,
        RuleName::IfcpP,
        RuleName::Ifcp2P,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RuleName::MP => "MP",
            RuleName::Taut => "Taut",
            RuleName::REO => "RE_O",
            RuleName::REPs => "RE_Ps",
            RuleName::RMO => "RM_O",
            RuleName::RMPs => "RM_Ps",
            RuleName::IfcpO => "IFCP_O",
            RuleName::IfcpP => "IFCP_P",
            RuleName::Ifcp2P => "IFCP2_P",
        }
    }

    /// The rule as premise/side-condition/conclusion schemata. `MP` and
    /// `Taut` are structural and have none.
    pub fn schema(self) -> Option<RuleSchema> {
        let (main, sides, conclusion): (Option<&str>, &[&str], &str) = match self {
            RuleName::MP | RuleName::Taut => return None,
            RuleName::REO => (None, &["p <-> q"], "O p <-> O q"),
            RuleName::REPs => (None, &["p <-> q"], "Ps p <-> Ps q"),
            RuleName::RMO => (None, &["p -> q"], "O p -> O q"),
            RuleName::RMPs => (None, &["p -> q"], "Ps p -> Ps q"),
            RuleName::IfcpO => (Some("Ps(p | q) & O r"), &["r -> ~p"], "Ps q"),
            RuleName::IfcpP => (
                Some("Ps(p | q) & (Pw r & Pw s)"),
                &["r -> p", "s -> q"],
                "Ps p & Ps q",
            ),
            RuleName::Ifcp2P => (Some("Ps(p | q) & Pw r"), &["r -> p"], "Ps p"),
        };
        let f = |t: &str| parse(t).expect("built-in rule parses");
        Some(RuleSchema {
            name: self.name().to_string(),
            main: main.map(f),
            sides: sides.iter().map(|s| f(s)).collect(),
            conclusion: f(conclusion),
        })
    }

    pub fn frame_property(self) -> Option<FrameProperty> {
        match self {
            RuleName::RMO => Some(FrameProperty::OSupplemented),
            RuleName::RMPs => Some(FrameProperty::PSupplemented),
            RuleName::IfcpO => Some(FrameProperty::IFCPO),
            RuleName::IfcpP => Some(FrameProperty::IFCPP),
            RuleName::Ifcp2P => Some(FrameProperty::IFCP2P),
            _ => None,
        }
    }

    /// The modality governed by a replacement or monotonicity rule.
    pub fn modality(self) -> Option<Modality> {
        match self {
            RuleName::REO | RuleName::RMO => Some(Modality::Obl),
            RuleName::REPs | RuleName::RMPs => Some(Modality::PermS),
            _ => None,
        }
    }
}

impl fmt::Display for RuleName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RuleName {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        RuleName::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| format!("unknown rule `{s}`"))
    }
}

/// An inference rule: from the main premise (at any tier) and theorem-tier
/// side conditions, infer the conclusion. Rules without a main premise are
/// purely theorem-to-theorem.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleSchema {
    pub name: String,
    pub main: Option<Formula>,
    pub sides: Vec<Formula>,
    pub conclusion: Formula,
}

impl RuleSchema {
    /// All metavariables occurring anywhere in the rule, sorted.
    pub fn metavariables(&self) -> Vec<String> {
        let mut all = self.conclusion.atoms();
        for s in &self.sides {
            all.extend(s.atoms());
        }
        if let Some(m) = &self.main {
            all.extend(m.atoms());
        }
        all.into_iter().collect()
    }

    /// The rule read as a single local implication: main premise implies
    /// conclusion.
    pub fn local_implication(&self) -> Formula {
        match &self.main {
            Some(m) => Formula::implies(m.clone(), self.conclusion.clone()),
            None => self.conclusion.clone(),
        }
    }
}

/// Either a schema or a rule, by name.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Principle {
    Axiom(AxiomName),
    Rule(RuleName),
}

impl Principle {
    pub fn name(self) -> &'static str {
        match self {
            Principle::Axiom(a) => a.name(),
            Principle::Rule(r) => r.name(),
        }
    }

    pub fn frame_property(self) -> Option<FrameProperty> {
        match self {
            Principle::Axiom(a) => a.frame_property(),
            Principle::Rule(r) => r.frame_property(),
        }
    }
}

impl fmt::Display for Principle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Principle {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.parse::<AxiomName>()
            .map(Principle::Axiom)
            .or_else(|_| s.parse::<RuleName>().map(Principle::Rule))
            .map_err(|_| format!("unknown axiom or rule `{s}`"))
    }
}
