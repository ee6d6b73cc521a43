//! Two-tier Hilbert-style proof checking.
//!
//! Theorem-tier lines are provable outright; local-tier lines depend on the
//! script's hypotheses. RE and RM only fire on theorem-tier premises, and the
//! side conditions of the IFCP rules must be theorems. Formulas are compared
//! after `Pw` expansion, so `Pw x` and `~O~x` are interchangeable.

mod scenarios;
mod script;
mod table1;

use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::formula::{
    expand_pw, instantiate, is_tautology, match_schema, tautological_consequence, Formula,
    Modality, Schema,
};
use crate::inventory::{AxiomName, Principle, RuleName};
use crate::systems::{Registry, SystemDef, SystemError};

pub use scenarios::{
    run_scenario, scenario, Scenario, ScenarioReport, ScenarioRun, SCENARIO_NAMES,
};
pub use script::{AxiomRef, Justification, ProofScript, ScriptLine, ScriptParseError, SideRef};
pub use table1::{
    table1_entries, verify_entry, verify_table1, EntryReport, Table1Entry, EXCLUDED_DERIVABLES,
};

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Tier {
    Theorem,
    Local,
}

impl fmt::Display for Tier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Tier::Theorem => "theorem",
            Tier::Local => "local",
        })
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
pub enum FailureKind {
    /// Citation of a missing or later line.
    BadCitation,
    /// A rule that needs a theorem was given a local line.
    TierViolation,
    /// The system lacks the axiom or rule.
    Unavailable,
    /// The cited inputs do not yield the line.
    NotLicensed,
    /// The last line is not the goal.
    GoalMismatch,
    /// A derived principle's supporting script failed.
    Lemma,
}

impl fmt::Display for FailureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FailureKind::BadCitation => "bad citation",
            FailureKind::TierViolation => "tier violation",
            FailureKind::Unavailable => "not available in the system",
            FailureKind::NotLicensed => "not licensed",
            FailureKind::GoalMismatch => "goal mismatch",
            FailureKind::Lemma => "derived principle failed",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub kind: FailureKind,
    pub message: String,
}

impl Failure {
    fn new(kind: FailureKind, message: impl Into<String>) -> Failure {
        Failure {
            kind,
            message: message.into(),
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.kind, self.message)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum Verdict {
    Valid,
    /// `line` is 1-based; 0 means the script as a whole (e.g. it is empty).
    Invalid {
        line: usize,
        failure: Failure,
    },
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::Valid)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Valid => f.write_str("valid"),
            Verdict::Invalid { line, failure } => write!(f, "invalid at line {line}: {failure}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProofReport {
    pub system: String,
    pub verdict: Verdict,
    /// Tiers of the lines checked before the first failure.
    pub tiers: Vec<Tier>,
}

impl ProofReport {
    /// Tier of the conclusion, when the script is valid.
    pub fn conclusion_tier(&self) -> Option<Tier> {
        if self.verdict.is_valid() {
            self.tiers.last().copied()
        } else {
            None
        }
    }
}

#[derive(Debug, Error)]
pub enum ProofError {
    #[error(transparent)]
    Parse(#[from] ScriptParseError),
    #[error(transparent)]
    System(#[from] SystemError),
}

fn norm(f: &Formula) -> Formula {
    expand_pw(f)
}

fn same(a: &Formula, b: &Formula) -> bool {
    norm(a) == norm(b)
}

/// `¬O¬x` after expansion.
fn weak_arg(f: &Formula) -> Option<&Formula> {
    match f {
        Formula::Not(inner) => match inner.as_ref() {
            Formula::Obl(x) => match x.as_ref() {
                Formula::Not(y) => Some(y),
                _ => None,
            },
            _ => None,
        },
        _ => None,
    }
}

/// Splits an expanded formula into an optional negation and a box argument.
fn signed_box(f: &Formula) -> Option<(bool, Modality, &Formula)> {
    match f {
        Formula::Not(inner) => inner.as_modal().map(|(m, x)| (true, m, x)),
        _ => f.as_modal().map(|(m, x)| (false, m, x)),
    }
}

fn flat_conjuncts(f: &Formula, out: &mut Vec<Formula>) {
    match f {
        Formula::And(l, r) => {
            flat_conjuncts(l, out);
            flat_conjuncts(r, out);
        }
        other => out.push(other.clone()),
    }
}

type LineResult = Result<Tier, Failure>;

/// Checks scripts against a registry of systems. Derived principles are
/// accepted when their supporting script (from the derivability library) checks
/// in the same system; those results are cached.
pub struct Checker {
    registry: Registry,
    memo: RefCell<BTreeMap<(String, Principle), Result<(), String>>>,
    active: RefCell<BTreeSet<(String, Principle)>>,
}

impl Default for Checker {
    fn default() -> Self {
        Checker::new(crate::fixtures::registry())
    }
}

impl Checker {
    pub fn new(registry: Registry) -> Checker {
        Checker {
            registry,
            memo: RefCell::new(BTreeMap::new()),
            active: RefCell::new(BTreeSet::new()),
        }
    }

    pub fn registry(&self) -> &Registry {
        &self.registry
    }

    pub fn check(&self, script: &ProofScript) -> Result<ProofReport, ProofError> {
        self.check_in(script, &script.system)
    }

    /// Checks `script` as if its header named `system`.
    pub fn check_in(&self, script: &ProofScript, system: &str) -> Result<ProofReport, ProofError> {
        let sys = self.registry.get(system)?;
        let mut tiers: Vec<Tier> = Vec::new();
        for (idx, line) in script.lines.iter().enumerate() {
            match self.check_line(sys, script, &tiers, idx, line) {
                Ok(t) => tiers.push(t),
                Err(failure) => {
                    return Ok(ProofReport {
                        system: sys.name.clone(),
                        verdict: Verdict::Invalid {
                            line: line.number,
                            failure,
                        },
                        tiers,
                    })
                }
            }
        }
        let verdict = match script.lines.last() {
            None => Verdict::Invalid {
                line: 0,
                failure: Failure::new(FailureKind::GoalMismatch, "the script has no lines"),
            },
            Some(last) if !same(&last.formula, &script.goal) => Verdict::Invalid {
                line: last.number,
                failure: Failure::new(
                    FailureKind::GoalMismatch,
                    format!("last line is `{}`, goal is `{}`", last.formula, script.goal),
                ),
            },
            Some(_) => Verdict::Valid,
        };
        Ok(ProofReport {
            system: sys.name.clone(),
            verdict,
            tiers,
        })
    }

    fn check_line(
        &self,
        sys: &SystemDef,
        script: &ProofScript,
        tiers: &[Tier],
        idx: usize,
        line: &ScriptLine,
    ) -> LineResult {
        for c in line.justification.citations() {
            if c == 0 || c > idx {
                return Err(Failure::new(
                    FailureKind::BadCitation,
                    format!(
                        "line {} cites line {c}, which does not precede it",
                        line.number
                    ),
                ));
            }
        }
        let f = &line.formula;
        let cited = |i: usize| (&script.lines[i - 1].formula, tiers[i - 1]);
        let not_licensed = |msg: String| Err(Failure::new(FailureKind::NotLicensed, msg));
        match &line.justification {
            Justification::Hyp => {
                if script.hypotheses.iter().any(|h| same(h, f)) {
                    Ok(Tier::Local)
                } else {
                    not_licensed(format!("`{f}` is not a hypothesis"))
                }
            }
            Justification::Premise => {
                if script.premises.iter().any(|h| same(h, f)) {
                    Ok(Tier::Theorem)
                } else {
                    not_licensed(format!("`{f}` is not a premise"))
                }
            }
            Justification::Taut => {
                if is_tautology(&norm(f)) {
                    Ok(Tier::Theorem)
                } else {
                    not_licensed(format!("`{f}` is not a tautology"))
                }
            }
            Justification::Axiom(r) => {
                let schema = self.axiom(sys, &r.name)?;
                match &r.subst {
                    Some(_) => {
                        let inst = self.instance(sys, r)?;
                        if same(&inst, f) {
                            Ok(Tier::Theorem)
                        } else {
                            not_licensed(format!(
                                "`{f}` is not the instance `{inst}` of {}",
                                r.name
                            ))
                        }
                    }
                    None => {
                        let pattern = Schema::with_metavariables(
                            schema.name.clone(),
                            norm(&schema.body),
                            schema.metavariables.iter().cloned(),
                        );
                        if match_schema(&pattern, &norm(f)).is_some() {
                            Ok(Tier::Theorem)
                        } else {
                            not_licensed(format!("`{f}` is not an instance of {}", r.name))
                        }
                    }
                }
            }
            Justification::MP(i, j) => {
                let (a, ta) = cited(*i);
                let (b, tb) = cited(*j);
                let (na, nb, nf) = (norm(a), norm(b), norm(f));
                let fits = |imp: &Formula, ante: &Formula| matches!(imp, Formula::Implies(l, r) if l.as_ref() == ante && r.as_ref() == &nf);
                if fits(&na, &nb) || fits(&nb, &na) {
                    Ok(ta.max(tb))
                } else {
                    not_licensed(format!(
                        "lines {i} and {j} do not yield `{f}` by modus ponens"
                    ))
                }
            }
            Justification::Cpl { lines, axioms } => {
                let mut premises: Vec<Formula> = lines.iter().map(|&i| norm(cited(i).0)).collect();
                for r in axioms {
                    self.axiom(sys, &r.name)?;
                    if r.subst.is_none() {
                        return not_licensed(format!(
                            "axiom {} cited in cpl needs a substitution",
                            r.name
                        ));
                    }
                    premises.push(norm(&self.instance(sys, r)?));
                }
                if tautological_consequence(&premises, &norm(f)) {
                    Ok(lines
                        .iter()
                        .map(|&i| cited(i).1)
                        .max()
                        .unwrap_or(Tier::Theorem))
                } else {
                    not_licensed(format!(
                        "`{f}` is not a tautological consequence of the cited lines"
                    ))
                }
            }
            Justification::Re { line: i, modality } => {
                self.need_re(sys, *modality)?;
                let (a, t) = cited(*i);
                theorem(*i, t, "re")?;
                let Formula::Iff(x, y) = norm(a) else {
                    return not_licensed(format!("line {i} is not a biconditional"));
                };
                let expected = Formula::iff(modality.apply(*x), modality.apply(*y));
                if same(&expected, f) {
                    Ok(Tier::Theorem)
                } else {
                    not_licensed(format!(
                        "re {modality} on line {i} gives `{expected}`, not `{f}`"
                    ))
                }
            }
            Justification::Replace { line: i, side } => {
                let (a, t) = cited(*i);
                let (na, nf) = (norm(a), norm(f));
                let (Some((neg_a, ma, x)), Some((neg_f, mf, y))) =
                    (signed_box(&na), signed_box(&nf))
                else {
                    return not_licensed(format!(
                        "line {i} and `{f}` must both be (negated) modal formulas"
                    ));
                };
                if neg_a != neg_f || ma != mf {
                    return not_licensed(format!("line {i} and `{f}` have different modal shapes"));
                }
                self.need_re(sys, ma)?;
                let eq = Formula::iff(x.clone(), y.clone());
                self.side_entails(script, tiers, *side, &eq)?;
                Ok(t)
            }
            Justification::Rm { line: i, modality } => {
                if !sys.admits_rm(*modality) {
                    return Err(Failure::new(
                        FailureKind::Unavailable,
                        format!("{} has no monotonicity for {modality}", sys.name),
                    ));
                }
                let (a, t) = cited(*i);
                theorem(*i, t, "rm")?;
                let Formula::Implies(x, y) = norm(a) else {
                    return not_licensed(format!("line {i} is not an implication"));
                };
                let expected = Formula::implies(modality.apply(*x), modality.apply(*y));
                if same(&expected, f) {
                    Ok(Tier::Theorem)
                } else {
                    not_licensed(format!(
                        "rm {modality} on line {i} gives `{expected}`, not `{f}`"
                    ))
                }
            }
            Justification::IfcpO { main, side } => {
                self.rule(sys, RuleName::IfcpO)?;
                let (conj, t, nf) = rule_premises(main, &cited, f);
                let Formula::PermS(q) = &nf else {
                    return not_licensed(format!("IFCP_O concludes Ps q, not `{f}`"));
                };
                for (p, dq) in disjunctive_permissions(&conj) {
                    if dq != q.as_ref() {
                        continue;
                    }
                    for c in &conj {
                        if let Formula::Obl(r) = c {
                            let need =
                                Formula::implies(r.as_ref().clone(), Formula::not(p.clone()));
                            if self.side_entails(script, tiers, *side, &need).is_ok() {
                                return Ok(t);
                            }
                        }
                    }
                }
                self.check_side_tiers(tiers, &[*side])?;
                not_licensed(format!(
                    "no Ps(p | q) & O r with ⊢ r -> ~p among the main premises yields `{f}`"
                ))
            }
            Justification::IfcpP { main, sides } => {
                self.rule(sys, RuleName::IfcpP)?;
                let (conj, t, nf) = rule_premises(main, &cited, f);
                let weak: Vec<&Formula> = conj.iter().filter_map(weak_arg).collect();
                for (p, q) in disjunctive_permissions(&conj) {
                    let concl =
                        Formula::and(Formula::perm_s(p.clone()), Formula::perm_s(q.clone()));
                    if concl != nf {
                        continue;
                    }
                    let first = weak.iter().any(|r| {
                        let need = Formula::implies((*r).clone(), p.clone());
                        self.side_entails(script, tiers, sides[0], &need).is_ok()
                    });
                    let second = weak.iter().any(|s| {
                        let need = Formula::implies((*s).clone(), q.clone());
                        self.side_entails(script, tiers, sides[1], &need).is_ok()
                    });
                    if first && second {
                        return Ok(t);
                    }
                }
                self.check_side_tiers(tiers, sides)?;
                not_licensed(format!(
                    "no Ps(p | q) & Pw r & Pw s with ⊢ r -> p, ⊢ s -> q among the main premises yields `{f}`"
                ))
            }
            Justification::Ifcp2P { main, side } => {
                self.rule(sys, RuleName::Ifcp2P)?;
                let (conj, t, nf) = rule_premises(main, &cited, f);
                for (p, _) in disjunctive_permissions(&conj) {
                    if Formula::perm_s(p.clone()) != nf {
                        continue;
                    }
                    for r in conj.iter().filter_map(weak_arg) {
                        let need = Formula::implies(r.clone(), p.clone());
                        if self.side_entails(script, tiers, *side, &need).is_ok() {
                            return Ok(t);
                        }
                    }
                }
                self.check_side_tiers(tiers, &[*side])?;
                not_licensed(format!(
                    "no Ps(p | q) & Pw r with ⊢ r -> p among the main premises yields `{f}`"
                ))
            }
        }
    }

    fn check_side_tiers(&self, tiers: &[Tier], sides: &[SideRef]) -> Result<(), Failure> {
        for s in sides {
            if let SideRef::Line(j) = s {
                theorem(*j, tiers[j - 1], "a side condition")?;
            }
        }
        Ok(())
    }

    /// The side reference must be a theorem that tautologically gives `need`.
    fn side_entails(
        &self,
        script: &ProofScript,
        tiers: &[Tier],
        side: SideRef,
        need: &Formula,
    ) -> Result<(), Failure> {
        let ok = match side {
            SideRef::Taut => is_tautology(&norm(need)),
            SideRef::Line(j) => {
                theorem(j, tiers[j - 1], "a side condition")?;
                tautological_consequence(&[norm(&script.lines[j - 1].formula)], &norm(need))
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Failure::new(
                FailureKind::NotLicensed,
                format!("side condition {side} does not give `{need}`"),
            ))
        }
    }

    fn need_re(&self, sys: &SystemDef, m: Modality) -> Result<(), Failure> {
        let rule = match m {
            Modality::Obl | Modality::PermW => RuleName::REO,
            Modality::PermS => RuleName::REPs,
        };
        if sys.has_rule(rule) {
            Ok(())
        } else {
            Err(Failure::new(
                FailureKind::Unavailable,
                format!("{} lacks {rule}", sys.name),
            ))
        }
    }

    fn axiom(&self, sys: &SystemDef, name: &str) -> Result<Schema, Failure> {
        let a: AxiomName = name.parse().map_err(|_| {
            if name.parse::<RuleName>().is_ok() {
                Failure::new(
                    FailureKind::NotLicensed,
                    format!("{name} is a rule, not an axiom"),
                )
            } else {
                Failure::new(FailureKind::Unavailable, format!("unknown axiom {name}"))
            }
        })?;
        self.available(sys, Principle::Axiom(a))?;
        Ok(a.schema())
    }

    fn rule(&self, sys: &SystemDef, r: RuleName) -> Result<(), Failure> {
        self.available(sys, Principle::Rule(r))
    }

    fn instance(&self, sys: &SystemDef, r: &AxiomRef) -> Result<Formula, Failure> {
        let schema = self.axiom(sys, &r.name)?;
        let sigma = r.subst.clone().unwrap_or_default();
        if let Some(extra) = sigma.keys().find(|k| !schema.metavariables.contains(*k)) {
            return Err(Failure::new(
                FailureKind::NotLicensed,
                format!("{} has no metavariable `{extra}`", r.name),
            ));
        }
        instantiate(&schema, &sigma)
            .map_err(|e| Failure::new(FailureKind::NotLicensed, format!("{}: {e}", r.name)))
    }

    fn available(&self, sys: &SystemDef, p: Principle) -> Result<(), Failure> {
        if !sys.provides(p) {
            return Err(Failure::new(
                FailureKind::Unavailable,
                format!("{} does not contain {p}", sys.name),
            ));
        }
        if sys.primitives().contains(&p) {
            return Ok(());
        }
        self.lemma(&sys.name, p)
            .map_err(|e| Failure::new(FailureKind::Lemma, format!("{p} in {}: {e}", sys.name)))
    }

    /// Establishes a derived principle through its library script.
    pub(crate) fn lemma(&self, system: &str, p: Principle) -> Result<(), String> {
        let key = (system.to_string(), p);
        if let Some(done) = self.memo.borrow().get(&key) {
            return done.clone();
        }
        if !self.active.borrow_mut().insert(key.clone()) {
            return Err(format!("circular dependency on {p}"));
        }
        let result = match table1_entries()
            .into_iter()
            .find(|e| e.system == system && e.principle == p)
        {
            None => Err(format!("no supporting script for {p} in {system}")),
            Some(entry) => verify_entry(self, &entry).and_then(|r| match r.verdict {
                Verdict::Valid => Ok(()),
                v => Err(format!("script {}: {v}", entry.script)),
            }),
        };
        self.active.borrow_mut().remove(&key);
        self.memo.borrow_mut().insert(key, result.clone());
        result
    }
}

fn theorem(i: usize, t: Tier, what: &str) -> Result<(), Failure> {
    if t == Tier::Theorem {
        Ok(())
    } else {
        Err(Failure::new(
            FailureKind::TierViolation,
            format!("{what} needs a theorem-tier line, line {i} is local"),
        ))
    }
}

fn main_conjuncts<'a>(
    main: &[usize],
    cited: &dyn Fn(usize) -> (&'a Formula, Tier),
) -> (Vec<Formula>, Tier) {
    let mut conj = Vec::new();
    let mut tier = Tier::Theorem;
    for &i in main {
        let (f, t) = cited(i);
        flat_conjuncts(&norm(f), &mut conj);
        tier = tier.max(t);
    }
    (conj, tier)
}

/// Main premises, tier and conclusion of an IFCP step. With no main lines
/// the step is the theorem `main -> conclusion`.
fn rule_premises<'a>(
    main: &[usize],
    cited: &dyn Fn(usize) -> (&'a Formula, Tier),
    f: &Formula,
) -> (Vec<Formula>, Tier, Formula) {
    let nf = norm(f);
    if main.is_empty() {
        if let Formula::Implies(a, c) = &nf {
            let mut conj = Vec::new();
            flat_conjuncts(a, &mut conj);
            return (conj, Tier::Theorem, c.as_ref().clone());
        }
    }
    let (conj, t) = main_conjuncts(main, cited);
    (conj, t, nf)
}

/// Pairs `(p, q)` for every conjunct `Ps(p | q)`.
fn disjunctive_permissions(conj: &[Formula]) -> Vec<(&Formula, &Formula)> {
    conj.iter()
        .filter_map(|c| match c {
            Formula::PermS(x) => match x.as_ref() {
                Formula::Or(p, q) => Some((p.as_ref(), q.as_ref())),
                _ => None,
            },
            _ => None,
        })
        .collect()
}

/// Checks a script with the bundled systems and derivation library.
pub fn check_proof(script: &ProofScript) -> Result<ProofReport, ProofError> {
    Checker::default().check(script)
}

/// Parses and checks a script.
pub fn check_text(text: &str) -> Result<ProofReport, ProofError> {
    check_proof(&ProofScript::parse(text)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn verdict(text: &str) -> Verdict {
        check_text(text).unwrap().verdict
    }

    fn failure_at(text: &str) -> (usize, FailureKind) {
        match verdict(text) {
            Verdict::Invalid { line, failure } => (line, failure.kind),
            Verdict::Valid => panic!("expected invalid:\n{text}"),
        }
    }

    #[test]
    fn bundled_derivations_check() {
        for name in [
            "explosion",
            "controlled_explosion",
            "fcp3_ifcp_o",
            "fcp3_ifcp_p",
        ] {
            let report = check_text(fixtures::proof(name).unwrap()).unwrap();
            assert_eq!(report.verdict, Verdict::Valid, "{name}");
        }
        let r = check_text(fixtures::proof("explosion").unwrap()).unwrap();
        assert_eq!(r.conclusion_tier(), Some(Tier::Theorem));
        let r = check_text(fixtures::proof("controlled_explosion").unwrap()).unwrap();
        assert_eq!(r.conclusion_tier(), Some(Tier::Local));
    }

    #[test]
    fn re_on_local_line_is_a_tier_violation() {
        let base = fixtures::proof("controlled_explosion").unwrap();
        for bad in ["re 1 2", "re 1 Ps"] {
            let text = base.replace("re 1 taut", bad);
            assert_eq!(failure_at(&text), (3, FailureKind::TierViolation), "{bad}");
        }
    }

    #[test]
    fn explosion_needs_its_system() {
        let text = fixtures::proof("explosion")
            .unwrap()
            .replace("EXPLOSION_DEMO", "FCP_2");
        assert_eq!(failure_at(&text), (2, FailureKind::Unavailable));
        let text = fixtures::proof("explosion")
            .unwrap()
            .replace("EXPLOSION_DEMO", "NOPE");
        assert!(matches!(check_text(&text), Err(ProofError::System(_))));
    }

    #[test]
    fn line_rules() {
        let head = "system: FCP_2\nhyp: Ps(p | q)\nhyp: O ~p\n";
        // Pw and ~O~ are interchangeable in axiom instances.
        assert!(verdict("system: FCP_4\ngoal: Ps(a | b) & Pw a -> Ps a\n1. Ps(a | b) & ~O~a -> Ps a ; ax AFCP2_P\n").is_valid());
        assert!(
            verdict("system: Min\ngoal: Ps a -> ~O~a\n1. Ps a -> Pw a ; ax P_sP_w\n").is_valid()
        );
        assert_eq!(
            failure_at("system: E\ngoal: O a -> O b\n1. O a -> O b ; taut\n"),
            (1, FailureKind::NotLicensed)
        );
        assert_eq!(
            failure_at("system: E\ngoal: T\n1. T ; mp 1 1\n"),
            (1, FailureKind::BadCitation)
        );
        assert_eq!(
            failure_at("system: E\ngoal: Ps(p | q) & O ~p -> Ps q\n1. Ps(p | q) & O ~p -> Ps q ; ax AFCP_O\n"),
            (1, FailureKind::Unavailable)
        );
        let ok = format!("{head}goal: Ps q\n1. Ps(p | q) ; hyp\n2. O ~p ; hyp\n3. Ps q ; cpl 1,2 + AFCP_O[p:=p, q:=q]\n");
        assert!(verdict(&ok).is_valid());
        let bad = format!("{head}goal: Ps q\n1. Ps(p | q) ; hyp\n2. O ~p ; hyp\n3. Ps q ; cpl 1 + AFCP_O[p:=p, q:=q]\n");
        assert_eq!(failure_at(&bad), (3, FailureKind::NotLicensed));
        let mismatch = format!("{head}goal: Ps p\n1. Ps(p | q) ; hyp\n");
        assert_eq!(failure_at(&mismatch), (1, FailureKind::GoalMismatch));
    }

    #[test]
    fn rm_needs_m() {
        let text = "system: FCP_2\npremise: a -> b\ngoal: O a -> O b\n1. a -> b ; premise\n2. O a -> O b ; rm 1 O\n";
        assert_eq!(failure_at(text), (2, FailureKind::Unavailable));
        assert!(verdict(&text.replace("FCP_2", "FCP_3")).is_valid());
        let local = "system: FCP_3\nhyp: a -> b\ngoal: O a -> O b\n1. a -> b ; hyp\n2. O a -> O b ; rm 1 O\n";
        assert_eq!(failure_at(local), (2, FailureKind::TierViolation));
    }

    #[test]
    fn ifcp_rules() {
        let text = "system: FCP_1\nhyp: Ps(a | b) & O(c & ~a)\ngoal: Ps b\n1. Ps(a | b) & O(c & ~a) ; hyp\n2. Ps b ; ifcp_o 1 side=taut\n";
        assert!(verdict(text).is_valid());
        // Not available without the rule or M.
        assert_eq!(
            failure_at(&text.replace("FCP_1", "FCP_2")),
            (2, FailureKind::Unavailable)
        );
        // FCP_3 gets it through the library script.
        assert!(verdict(&text.replace("FCP_1", "FCP_3")).is_valid());
        let wrong = text.replace("O(c & ~a)", "O(c & ~b)");
        assert_eq!(failure_at(&wrong), (2, FailureKind::NotLicensed));
        let local_side = "system: FCP_1\nhyp: Ps(a | b) & O c\nhyp: c -> ~a\ngoal: Ps b\n1. Ps(a | b) & O c ; hyp\n2. c -> ~a ; hyp\n3. Ps b ; ifcp_o 1 side=2\n";
        assert_eq!(failure_at(local_side), (3, FailureKind::TierViolation));
        let two = "system: FCP_5\nhyp: Ps(a | b)\nhyp: Pw(a & c)\ngoal: Ps a\n1. Ps(a | b) ; hyp\n2. Pw(a & c) ; hyp\n3. Ps a ; ifcp2_p 1,2 taut\n";
        assert!(verdict(two).is_valid());
        // Theorem form: the main premise becomes the antecedent.
        let thm = "system: FCP_1\ngoal: Ps(a | b) & O(c & ~a) -> Ps b\n1. Ps(a | b) & O(c & ~a) -> Ps b ; ifcp_o - side=taut\n";
        let r = check_text(thm).unwrap();
        assert!(r.verdict.is_valid());
        assert_eq!(r.conclusion_tier(), Some(Tier::Theorem));
        assert_eq!(
            failure_at(&thm.replace("-> Ps b ;", "-> Ps a ;")),
            (1, FailureKind::NotLicensed)
        );
    }

    #[test]
    fn deterministic() {
        let text = fixtures::proof("controlled_explosion")
            .unwrap()
            .replace("re 1 taut", "re 1 2");
        let a = check_text(&text).unwrap();
        let b = check_text(&text).unwrap();
        assert_eq!(a, b);
    }
}
