//! Detaching what remains of a disjunctive strong permission once some of
//! its disjuncts are forbidden.

use serde::Serialize;
use thiserror::Error;

use crate::formula::{expand_pw, parse, tautological_consequence, Formula, ParseError};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Theory {
    /// Formulas of the form `O x`.
    pub obligations: Vec<Formula>,
    /// Weak permissions `Pw x` (or `~O~x`) known to hold.
    pub weak: Vec<Formula>,
    /// Theorems used for IFCP-style elimination, e.g. `r -> ~d`.
    pub theorems: Vec<Formula>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RemainderError {
    #[error("no disjuncts given")]
    Empty,
    #[error("every disjunct is forbidden, which contradicts the disjunctive permission under D_s")]
    FullElimination,
    #[error("theory line {line}: {source}")]
    Parse { line: usize, source: ParseError },
}

impl Theory {
    /// One formula per line; `#` starts a comment. `O x` lines are
    /// obligations, `Pw x` and `~O~x` lines weak permissions, anything else
    /// a theorem.
    pub fn parse(text: &str) -> Result<Theory, RemainderError> {
        let mut t = Theory::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let f = parse(line).map_err(|source| RemainderError::Parse {
                line: i + 1,
                source,
            })?;
            t.add(f);
        }
        Ok(t)
    }

    pub fn add(&mut self, f: Formula) {
        if matches!(f, Formula::Obl(_)) {
            self.obligations.push(f);
        } else if weak_arg(&expand_pw(&f)).is_some() {
            self.weak.push(f);
        } else {
            self.theorems.push(f);
        }
    }

    fn weakly_permits(&self, d: &Formula) -> bool {
        let want = expand_pw(&Formula::perm_w(d.clone()));
        self.weak.iter().any(|w| expand_pw(w) == want)
    }
}

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

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Elimination {
    pub disjunct: String,
    pub by: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RemainderResult {
    /// Surviving disjuncts in their original order.
    pub surviving: Vec<String>,
    pub eliminated: Vec<Elimination>,
    /// `Ps` of the surviving sub-disjunction.
    pub remainder: String,
    /// Individually detached strong permissions.
    pub detached: Vec<String>,
}

/// Whether obligation `o` rules out disjunct `d`: `o` is `O ~d`, or with
/// `ifcp` it is `O r` where the theory's theorems give `r -> ~d`.
fn eliminates(o: &Formula, d: &Formula, theory: &Theory, ifcp: bool) -> bool {
    let Formula::Obl(r) = expand_pw(o) else {
        return false;
    };
    let not_d = expand_pw(&Formula::not(d.clone()));
    if *r == not_d {
        return true;
    }
    ifcp && {
        let theorems: Vec<Formula> = theory.theorems.iter().map(expand_pw).collect();
        tautological_consequence(&theorems, &Formula::implies(*r, not_d))
    }
}

/// Removes every disjunct that some obligation forbids. A single survivor is
/// detached; two survivors that are both weakly permitted are detached
/// together.
pub fn compute_remainder(
    disjuncts: &[Formula],
    theory: &Theory,
    ifcp: bool,
) -> Result<RemainderResult, RemainderError> {
    if disjuncts.is_empty() {
        return Err(RemainderError::Empty);
    }
    let mut surviving = Vec::new();
    let mut eliminated = Vec::new();
    for d in disjuncts {
        match theory
            .obligations
            .iter()
            .find(|o| eliminates(o, d, theory, ifcp))
        {
            Some(o) => eliminated.push(Elimination {
                disjunct: d.to_string(),
                by: o.to_string(),
            }),
            None => surviving.push(d.clone()),
        }
    }
    if surviving.is_empty() {
        return Err(RemainderError::FullElimination);
    }
    let remainder = Formula::perm_s(Formula::disjunction(surviving.iter().cloned()));
    let detached: Vec<String> = match surviving.as_slice() {
        [d] => vec![Formula::perm_s(d.clone()).to_string()],
        [a, b] if theory.weakly_permits(a) && theory.weakly_permits(b) => {
            vec![
                Formula::perm_s(a.clone()).to_string(),
                Formula::perm_s(b.clone()).to_string(),
            ]
        }
        _ => vec![],
    };
    Ok(RemainderResult {
        surviving: surviving.iter().map(|d| d.to_string()).collect(),
        eliminated,
        remainder: remainder.to_string(),
        detached,
    })
}
