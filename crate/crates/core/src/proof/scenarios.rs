//! Bundled worked examples replayed through the checker.

use serde::Serialize;

use super::{Checker, Justification, ProofError, ProofScript, Tier, Verdict};
use crate::fixtures;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Scenario {
    pub name: &'static str,
    pub description: &'static str,
    /// Fixture scripts, replayed in order.
    pub scripts: &'static [&'static str],
}

pub const SCENARIO_NAMES: [&str; 5] = [
    "etiquette",
    "online-return",
    "five-disjuncts",
    "explosion",
    "controlled-explosion",
];

const SCENARIOS: [Scenario; 5] = [
    Scenario {
        name: "etiquette",
        description:
            "eating or talking is permitted, talking while eating is not; given e, derive Ps e",
        scripts: &["scenarios/etiquette"],
    },
    Scenario {
        name: "online-return",
        description: "a misfitting online purchase may be exchanged or refunded; derive O original",
        scripts: &["scenarios/online-return"],
    },
    Scenario {
        name: "five-disjuncts",
        description:
            "three of five permitted disjuncts are forbidden; derive the remainder, then add O ~s",
        scripts: &[
            "scenarios/five-disjuncts",
            "scenarios/five-disjuncts-extended",
        ],
    },
    Scenario {
        name: "explosion",
        description: "unrestricted FCP with monotonicity for Ps derives Ps p -> Ps q",
        scripts: &["proofs/explosion"],
    },
    Scenario {
        name: "controlled-explosion",
        description: "a strongly permitted tautology turns the weak permission Pw q into Ps q",
        scripts: &["proofs/controlled_explosion"],
    },
];

pub fn scenario(name: &str) -> Option<Scenario> {
    SCENARIOS.into_iter().find(|s| s.name == name)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScenarioRun {
    pub script: String,
    pub system: String,
    pub verdict: Verdict,
    /// Modal formulas established by non-hypothesis lines, in order.
    pub derived: Vec<String>,
    pub transcript: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScenarioReport {
    pub name: String,
    pub description: String,
    pub runs: Vec<ScenarioRun>,
}

impl ScenarioReport {
    pub fn all_valid(&self) -> bool {
        self.runs.iter().all(|r| r.verdict.is_valid())
    }

    /// Whether some run derived exactly `formula` (as rendered).
    pub fn derives(&self, formula: &str) -> bool {
        let want = crate::formula::parse(formula).map(|f| f.to_string());
        want.is_ok_and(|w| self.runs.iter().any(|r| r.derived.contains(&w)))
    }

    pub fn transcript(&self) -> String {
        let mut out = format!("scenario {}: {}\n", self.name, self.description);
        for r in &self.runs {
            out.push_str(&r.transcript);
        }
        out
    }
}

fn load(path: &str) -> Option<&'static str> {
    let (dir, name) = path.split_once('/')?;
    match dir {
        "scenarios" => fixtures::scenario(name),
        "proofs" => fixtures::proof(name),
        _ => None,
    }
}

fn transcript(
    name: &str,
    script: &ProofScript,
    verdict: &Verdict,
    tiers: &[Tier],
    derived: &[String],
) -> String {
    let mut out = format!("\n[{name}] system {}\n", script.system);
    let width = script
        .lines
        .iter()
        .map(|l| l.formula.to_string().len())
        .max()
        .unwrap_or(0);
    for (i, l) in script.lines.iter().enumerate() {
        let tier = tiers
            .get(i)
            .map(|t| t.to_string())
            .unwrap_or_else(|| "-".into());
        out.push_str(&format!(
            "{:>3}. {:<width$}  {:<10} {}\n",
            l.number,
            l.formula.to_string(),
            format!("[{tier}]"),
            l.source
        ));
    }
    out.push_str(&format!("verdict: {verdict}\n"));
    if !derived.is_empty() {
        out.push_str(&format!("derived: {}\n", derived.join(", ")));
    }
    out
}

/// Replays a bundled scenario. `Ok(None)` for an unknown name.
pub fn run_scenario(name: &str) -> Result<Option<ScenarioReport>, ProofError> {
    let Some(sc) = scenario(name) else {
        return Ok(None);
    };
    let checker = Checker::default();
    let mut runs = Vec::new();
    for path in sc.scripts {
        let text = load(path).expect("scenario scripts are bundled");
        let script = ProofScript::parse(text)?;
        let report = checker.check(&script)?;
        let derived: Vec<String> = script
            .lines
            .iter()
            .take(report.tiers.len())
            .filter(|l| !matches!(l.justification, Justification::Hyp | Justification::Premise))
            .filter(|l| l.formula.is_modal())
            .map(|l| l.formula.to_string())
            .collect();
        let t = transcript(path, &script, &report.verdict, &report.tiers, &derived);
        runs.push(ScenarioRun {
            script: path.to_string(),
            system: report.system,
            verdict: report.verdict,
            derived,
            transcript: t,
        });
    }
    Ok(Some(ScenarioReport {
        name: sc.name.to_string(),
        description: sc.description.to_string(),
        runs,
    }))
}
