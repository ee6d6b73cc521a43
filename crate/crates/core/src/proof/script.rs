//! Text format for proof scripts.
//!
//! ```text
//! system: FCP_3
//! hyp: Ps(p | q) & O r
//! premise: r -> ~p
//! goal: Ps q
//! 1. Ps(p | q) & O r ; hyp
//! 2. r -> ~p ; premise
//! ...
//! ```
//!
//! `#` starts a comment. Lines must be numbered 1, 2, 3, ... in order.

use std::fmt;

use thiserror::Error;

use crate::formula::{parse, Formula, Modality, Substitution};

/// Reference to a side-condition theorem: an earlier line or an inline
/// tautology check.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum SideRef {
    Line(usize),
    Taut,
}

impl fmt::Display for SideRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SideRef::Line(i) => write!(f, "{i}"),
            SideRef::Taut => f.write_str("taut"),
        }
    }
}

/// A named axiom with an optional explicit substitution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomRef {
    pub name: String,
    pub subst: Option<Substitution>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Justification {
    Hyp,
    Premise,
    Taut,
    Axiom(AxiomRef),
    MP(usize, usize),
    /// Tautological consequence of the cited lines and axiom instances.
    Cpl {
        lines: Vec<usize>,
        axioms: Vec<AxiomRef>,
    },
    /// From ⊢ A↔B infer ⊢ □A↔□B.
    Re {
        line: usize,
        modality: Modality,
    },
    /// From □A and ⊢ A↔B infer □B.
    Replace {
        line: usize,
        side: SideRef,
    },
    /// From ⊢ A→B infer ⊢ □A→□B.
    Rm {
        line: usize,
        modality: Modality,
    },
    IfcpO {
        main: Vec<usize>,
        side: SideRef,
    },
    IfcpP {
        main: Vec<usize>,
        sides: [SideRef; 2],
    },
    Ifcp2P {
        main: Vec<usize>,
        side: SideRef,
    },
}

impl Justification {
    /// Every line number this justification cites.
    pub fn citations(&self) -> Vec<usize> {
        let side = |s: &SideRef| match s {
            SideRef::Line(i) => Some(*i),
            SideRef::Taut => None,
        };
        match self {
            Justification::Hyp
            | Justification::Premise
            | Justification::Taut
            | Justification::Axiom(_) => vec![],
            Justification::MP(i, j) => vec![*i, *j],
            Justification::Cpl { lines, .. } => lines.clone(),
            Justification::Re { line, .. } | Justification::Rm { line, .. } => vec![*line],
            Justification::Replace { line, side: s } => {
                std::iter::once(*line).chain(side(s)).collect()
            }
            Justification::IfcpO { main, side: s } | Justification::Ifcp2P { main, side: s } => {
                main.iter().copied().chain(side(s)).collect()
            }
            Justification::IfcpP { main, sides } => main
                .iter()
                .copied()
                .chain(sides.iter().filter_map(side))
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScriptLine {
    pub number: usize,
    pub formula: Formula,
    pub justification: Justification,
    /// The justification as written.
    pub source: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofScript {
    pub system: String,
    /// Local assumptions.
    pub hypotheses: Vec<Formula>,
    /// Theorem-tier assumptions, used when a script establishes a derived rule.
    pub premises: Vec<Formula>,
    pub goal: Formula,
    pub lines: Vec<ScriptLine>,
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("script line {line}: {message}")]
pub struct ScriptParseError {
    pub line: usize,
    pub message: String,
}

fn formula(text: &str, line: usize) -> Result<Formula, ScriptParseError> {
    parse(text.trim()).map_err(|e| ScriptParseError {
        line,
        message: format!("`{}`: {e}", text.trim()),
    })
}

fn number(tok: &str, line: usize) -> Result<usize, ScriptParseError> {
    tok.trim().parse().map_err(|_| ScriptParseError {
        line,
        message: format!("expected a line number, found `{}`", tok.trim()),
    })
}

fn numbers(tok: &str, line: usize) -> Result<Vec<usize>, ScriptParseError> {
    tok.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| number(t, line))
        .collect()
}

/// Main premise lines; `-` for the theorem form `main -> conclusion`.
fn mains(tok: &str, line: usize) -> Result<Vec<usize>, ScriptParseError> {
    if tok.trim() == "-" {
        Ok(vec![])
    } else {
        let v = numbers(tok, line)?;
        if v.is_empty() {
            return Err(ScriptParseError {
                line,
                message: "expected main premise lines or `-`".into(),
            });
        }
        Ok(v)
    }
}

fn side(tok: &str, line: usize) -> Result<SideRef, ScriptParseError> {
    let tok = tok.trim().trim_start_matches("side=");
    if tok == "taut" {
        Ok(SideRef::Taut)
    } else {
        number(tok, line).map(SideRef::Line)
    }
}

fn modality(tok: &str, line: usize) -> Result<Modality, ScriptParseError> {
    tok.trim()
        .parse()
        .map_err(|message| ScriptParseError { line, message })
}

/// Parses `NAME` or `NAME[p:=A, q:=B]`.
fn axiom_ref(text: &str, line: usize) -> Result<AxiomRef, ScriptParseError> {
    let text = text.trim();
    let Some(open) = text.find('[') else {
        return Ok(AxiomRef {
            name: text.to_string(),
            subst: None,
        });
    };
    let Some(body) = text[open + 1..].strip_suffix(']') else {
        return Err(ScriptParseError {
            line,
            message: format!("unclosed substitution in `{text}`"),
        });
    };
    let mut subst = Substitution::new();
    for binding in body.split(',').filter(|b| !b.trim().is_empty()) {
        let Some((var, value)) = binding.split_once(":=") else {
            return Err(ScriptParseError {
                line,
                message: format!("expected `var:=formula`, found `{}`", binding.trim()),
            });
        };
        subst.insert(var.trim().to_string(), formula(value, line)?);
    }
    Ok(AxiomRef {
        name: text[..open].trim().to_string(),
        subst: Some(subst),
    })
}

fn justification(text: &str, line: usize) -> Result<Justification, ScriptParseError> {
    let text = text.trim();
    let (head, rest) = text.split_once(char::is_whitespace).unwrap_or((text, ""));
    let rest = rest.trim();
    let args: Vec<&str> = rest.split_whitespace().collect();
    let err = |message: String| ScriptParseError { line, message };
    let arity = |n: usize| {
        if args.len() == n {
            Ok(())
        } else {
            Err(err(format!(
                "`{head}` takes {n} argument(s), found {}",
                args.len()
            )))
        }
    };
    Ok(match head.to_ascii_lowercase().as_str() {
        "hyp" => Justification::Hyp,
        "premise" => Justification::Premise,
        "taut" => Justification::Taut,
        "ax" => {
            if rest.is_empty() {
                return Err(err("`ax` needs an axiom name".into()));
            }
            Justification::Axiom(axiom_ref(rest, line)?)
        }
        "mp" => {
            arity(2)?;
            Justification::MP(number(args[0], line)?, number(args[1], line)?)
        }
        "cpl" => {
            let mut parts = rest.split('+');
            let lines = numbers(parts.next().unwrap_or(""), line)?;
            let axioms = parts
                .map(|a| axiom_ref(a, line))
                .collect::<Result<_, _>>()?;
            Justification::Cpl { lines, axioms }
        }
        "re" => {
            arity(2)?;
            let l = number(args[0], line)?;
            match args[1] {
                "O" | "Ps" | "Pw" => Justification::Re {
                    line: l,
                    modality: modality(args[1], line)?,
                },
                other => Justification::Replace {
                    line: l,
                    side: side(other, line)?,
                },
            }
        }
        "rm" => {
            arity(2)?;
            Justification::Rm {
                line: number(args[0], line)?,
                modality: modality(args[1], line)?,
            }
        }
        "ifcp_o" => {
            arity(2)?;
            Justification::IfcpO {
                main: mains(args[0], line)?,
                side: side(args[1], line)?,
            }
        }
        "ifcp_p" => {
            arity(3)?;
            Justification::IfcpP {
                main: mains(args[0], line)?,
                sides: [side(args[1], line)?, side(args[2], line)?],
            }
        }
        "ifcp2_p" => {
            arity(2)?;
            Justification::Ifcp2P {
                main: mains(args[0], line)?,
                side: side(args[1], line)?,
            }
        }
        other => return Err(err(format!("unknown justification `{other}`"))),
    })
}

impl ProofScript {
    pub fn parse(text: &str) -> Result<ProofScript, ScriptParseError> {
        let mut system = None;
        let mut goal = None;
        let mut hypotheses = Vec::new();
        let mut premises = Vec::new();
        let mut lines = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let ln = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            if let Some((key, value)) = content.split_once(':') {
                let key = key.trim();
                if !key.is_empty() && key.chars().all(|c| c.is_ascii_alphabetic()) {
                    match key {
                        "system" => system = Some(value.trim().to_string()),
                        "hyp" => hypotheses.push(formula(value, ln)?),
                        "premise" => premises.push(formula(value, ln)?),
                        "goal" => goal = Some(formula(value, ln)?),
                        other => {
                            return Err(ScriptParseError {
                                line: ln,
                                message: format!("unknown header `{other}`"),
                            })
                        }
                    }
                    continue;
                }
            }
            let Some((num, body)) = content.split_once('.') else {
                return Err(ScriptParseError {
                    line: ln,
                    message: "expected `n. formula ; justification`".into(),
                });
            };
            let n = number(num, ln)?;
            if n != lines.len() + 1 {
                return Err(ScriptParseError {
                    line: ln,
                    message: format!("expected line {}, found {n}", lines.len() + 1),
                });
            }
            let Some((f, just)) = body.split_once(';') else {
                return Err(ScriptParseError {
                    line: ln,
                    message: "missing `;` before the justification".into(),
                });
            };
            lines.push(ScriptLine {
                number: n,
                formula: formula(f, ln)?,
                justification: justification(just, ln)?,
                source: just.trim().to_string(),
            });
        }
        let missing = |what: &str| ScriptParseError {
            line: 0,
            message: format!("missing `{what}:` header"),
        };
        Ok(ProofScript {
            system: system.ok_or_else(|| missing("system"))?,
            hypotheses,
            premises,
            goal: goal.ok_or_else(|| missing("goal"))?,
            lines,
        })
    }

    /// Renders the script back to its text form.
    pub fn to_text(&self) -> String {
        let mut out = format!("system: {}\n", self.system);
        for h in &self.hypotheses {
            out.push_str(&format!("hyp: {h}\n"));
        }
        for p in &self.premises {
            out.push_str(&format!("premise: {p}\n"));
        }
        out.push_str(&format!("goal: {}\n", self.goal));
        for l in &self.lines {
            out.push_str(&format!("{}. {} ; {}\n", l.number, l.formula, l.source));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "\
# controlled explosion
system: FCP_2
hyp: Ps(p | ~p)
hyp: Pw q
goal: Ps q
1. Ps(p | ~p) ; hyp
2. Pw q ; hyp
3. Ps(q | (p | ~p)) ; re 1 taut
4. Ps q ; cpl 1,2,3 + AFCP_P[p:=q, q:=p | ~p] + P_sP_w[p:=p | ~p]
";

    #[test]
    fn parses_sample() {
        let s = ProofScript::parse(SAMPLE).unwrap();
        assert_eq!(s.system, "FCP_2");
        assert_eq!(s.hypotheses.len(), 2);
        assert_eq!(s.lines.len(), 4);
        assert_eq!(
            s.lines[2].justification,
            Justification::Replace {
                line: 1,
                side: SideRef::Taut
            }
        );
        let Justification::Cpl { lines, axioms } = &s.lines[3].justification else {
            panic!()
        };
        assert_eq!(lines, &vec![1, 2, 3]);
        assert_eq!(axioms.len(), 2);
        assert_eq!(
            axioms[0].subst.as_ref().unwrap()["q"],
            parse("p | ~p").unwrap()
        );
        assert_eq!(ProofScript::parse(&s.to_text()).unwrap(), s);
    }

    #[test]
    fn justification_forms() {
        let j = |t: &str| justification(t, 1).unwrap();
        assert_eq!(j("mp 1 2"), Justification::MP(1, 2));
        assert_eq!(
            j("re 2 Ps"),
            Justification::Re {
                line: 2,
                modality: Modality::PermS
            }
        );
        assert_eq!(
            j("rm 3 Pw"),
            Justification::Rm {
                line: 3,
                modality: Modality::PermW
            }
        );
        assert_eq!(
            j("ifcp_o 1 side=taut"),
            Justification::IfcpO {
                main: vec![1],
                side: SideRef::Taut
            }
        );
        assert_eq!(
            j("ifcp_p 1,4 2 taut"),
            Justification::IfcpP {
                main: vec![1, 4],
                sides: [SideRef::Line(2), SideRef::Taut]
            }
        );
        assert_eq!(
            j("ifcp2_p - 3"),
            Justification::Ifcp2P {
                main: vec![],
                side: SideRef::Line(3)
            }
        );
        assert_eq!(j("ax D_s[p:=~p]").citations(), Vec::<usize>::new());
        assert!(justification("frobnicate 1", 1).is_err());
        assert!(justification("mp 1", 1).is_err());
    }

    #[test]
    fn numbering_enforced() {
        let bad = "system: E\ngoal: p -> p\n2. p -> p ; taut\n";
        assert_eq!(ProofScript::parse(bad).unwrap_err().line, 3);
        assert!(ProofScript::parse("goal: T\n1. T ; taut\n").is_err());
    }
}
