//! Supporting scripts for the derivable principles of each built-in system.

use serde::Serialize;

use super::{Checker, Failure, FailureKind, ProofScript, Verdict};
use crate::formula::{expand_pw, is_tautology, tautological_consequence, Formula};
use crate::inventory::{AxiomName, Principle, RuleName};
use crate::systems::SystemError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Table1Entry {
    pub system: &'static str,
    pub principle: Principle,
    /// Name of the bundled proof script.
    pub script: &'static str,
}

/// Derivable entries with no definition to check against: `(system, name)`.
pub const EXCLUDED_DERIVABLES: [(&str, &str); 1] = [("FCP_6", "IFCP2_O")];

pub fn table1_entries() -> Vec<Table1Entry> {
    use AxiomName as A;
    use Principle::{Axiom as Ax, Rule as Ru};
    use RuleName as R;
    let rows: [(&str, Principle, &str); 22] = [
        ("Min", Ax(A::PsPw), "pspw"),
        ("FCP_1", Ax(A::PsPw), "pspw"),
        ("FCP_1", Ax(A::AfcpO), "fcp1_afcp_o"),
        ("FCP_1", Ax(A::AfcpP), "fcp1_afcp_p"),
        ("FCP_2", Ax(A::PsPw), "pspw"),
        ("FCP_3", Ax(A::PsPw), "pspw"),
        ("FCP_3", Ru(R::IfcpO), "fcp3_ifcp_o"),
        ("FCP_3", Ru(R::IfcpP), "fcp3_ifcp_p"),
        ("FCP_4", Ax(A::PsPw), "pspw"),
        ("FCP_4", Ax(A::AfcpP), "fcp4_afcp_p"),
        ("FCP_5", Ax(A::PsPw), "pspw"),
        ("FCP_5", Ru(R::IfcpP), "fcp5_ifcp_p"),
        ("FCP_5", Ax(A::AfcpO), "fcp1_afcp_o"),
        ("FCP_5", Ax(A::AfcpP), "fcp4_afcp_p"),
        ("FCP_5", Ax(A::Afcp2P), "fcp5_afcp2_p"),
        ("FCP_6", Ax(A::PsPw), "pspw"),
        ("FCP_6", Ru(R::IfcpP), "fcp3_ifcp_p"),
        ("FCP_6", Ax(A::AfcpO), "fcp6_afcp_o"),
        ("FCP_6", Ax(A::AfcpP), "fcp4_afcp_p"),
        ("FCP_6", Ax(A::Afcp2P), "fcp6_afcp2_p"),
        ("FCP_6", Ru(R::Ifcp2P), "fcp6_ifcp2_p"),
        ("FCP_6", Ru(R::IfcpO), "fcp3_ifcp_o"),
    ];
    rows.into_iter()
        .map(|(system, principle, script)| Table1Entry {
            system,
            principle,
            script,
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EntryReport {
    pub system: String,
    pub principle: Principle,
    pub script: String,
    pub verdict: Verdict,
}

fn shape_failure(message: String) -> Verdict {
    Verdict::Invalid {
        line: 0,
        failure: Failure {
            kind: FailureKind::GoalMismatch,
            message,
        },
    }
}

fn conj(fs: &[Formula]) -> Formula {
    Formula::conjunction(fs.iter().cloned())
}

/// Whether a valid script's assumptions and goal amount to the principle.
fn establishes(script: &ProofScript, p: Principle) -> Result<(), String> {
    let n = |f: &Formula| expand_pw(f);
    match p {
        Principle::Axiom(a) => {
            if !script.premises.is_empty() {
                return Err("an axiom script may not assume premises".into());
            }
            let shown = if script.hypotheses.is_empty() {
                script.goal.clone()
            } else {
                Formula::implies(conj(&script.hypotheses), script.goal.clone())
            };
            if tautological_consequence(&[n(&shown)], &n(&a.schema().body)) {
                Ok(())
            } else {
                Err(format!("`{shown}` does not give {a}"))
            }
        }
        Principle::Rule(r) => {
            let rs = r.schema().ok_or_else(|| format!("{r} has no schema"))?;
            match &rs.main {
                Some(m) => {
                    if script.hypotheses.is_empty()
                        || !is_tautology(&n(&Formula::iff(conj(&script.hypotheses), m.clone())))
                    {
                        return Err(format!("hypotheses do not amount to `{m}`"));
                    }
                }
                None if !script.hypotheses.is_empty() => {
                    return Err(format!("{r} takes no local premise"))
                }
                None => {}
            }
            let mut have: Vec<Formula> = script.premises.iter().map(n).collect();
            let mut want: Vec<Formula> = rs.sides.iter().map(n).collect();
            have.sort_by_key(|f| f.to_string());
            want.sort_by_key(|f| f.to_string());
            if have != want {
                return Err(format!("premises do not match the side conditions of {r}"));
            }
            if n(&script.goal) != n(&rs.conclusion) {
                return Err(format!("goal is not `{}`", rs.conclusion));
            }
            Ok(())
        }
    }
}

/// Checks one entry's script in the entry's system and that it establishes
/// the principle.
pub fn verify_entry(checker: &Checker, entry: &Table1Entry) -> Result<EntryReport, String> {
    let text = crate::fixtures::proof(entry.script)
        .ok_or_else(|| format!("missing script {}", entry.script))?;
    let script = ProofScript::parse(text).map_err(|e| format!("{}: {e}", entry.script))?;
    let report = checker
        .check_in(&script, entry.system)
        .map_err(|e| e.to_string())?;
    let verdict = match report.verdict {
        Verdict::Valid => match establishes(&script, entry.principle) {
            Ok(()) => Verdict::Valid,
            Err(msg) => shape_failure(msg),
        },
        v => v,
    };
    Ok(EntryReport {
        system: entry.system.to_string(),
        principle: entry.principle,
        script: entry.script.to_string(),
        verdict,
    })
}

/// Verifies every derivable principle listed for `system`.
pub fn verify_table1(checker: &Checker, system: &str) -> Result<Vec<EntryReport>, SystemError> {
    let sys = checker.registry().get(system)?;
    let entries = table1_entries();
    let mut out = Vec::new();
    for &p in &sys.derivable {
        let report = match entries
            .iter()
            .find(|e| e.system == sys.name && e.principle == p)
        {
            Some(e) => verify_entry(checker, e).unwrap_or_else(|msg| EntryReport {
                system: sys.name.clone(),
                principle: p,
                script: e.script.to_string(),
                verdict: shape_failure(msg),
            }),
            None => EntryReport {
                system: sys.name.clone(),
                principle: p,
                script: String::new(),
                verdict: shape_failure(format!("no bundled script for {p}")),
            },
        };
        out.push(report);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::systems::BUILTIN_NAMES;

    #[test]
    fn every_listed_derivable_verifies() {
        let checker = Checker::default();
        for name in BUILTIN_NAMES {
            for r in verify_table1(&checker, name).unwrap() {
                assert_eq!(r.verdict, Verdict::Valid, "{name} {}", r.principle);
            }
        }
    }

    #[test]
    fn entries_cover_the_derivable_column() {
        let checker = Checker::default();
        let entries = table1_entries();
        for name in BUILTIN_NAMES {
            let sys = checker.registry().get(name).unwrap();
            for p in &sys.derivable {
                assert!(
                    entries
                        .iter()
                        .any(|e| e.system == name && e.principle == *p),
                    "{name} {p}"
                );
            }
        }
    }

    #[test]
    fn wrong_principle_is_rejected() {
        let checker = Checker::default();
        let entry = Table1Entry {
            system: "FCP_4",
            principle: Principle::Axiom(AxiomName::AfcpO),
            script: "fcp4_afcp_p",
        };
        assert!(!verify_entry(&checker, &entry).unwrap().verdict.is_valid());
        let entry = Table1Entry {
            system: "FCP_5",
            principle: Principle::Rule(RuleName::Ifcp2P),
            script: "fcp5_ifcp_p",
        };
        assert!(!verify_entry(&checker, &entry).unwrap().verdict.is_valid());
    }
}
