//! The bimodal deontic language: atoms, Boolean connectives, obligation `O`,
//! strong permission `Ps` and weak permission `Pw`.
//!
//! Concrete syntax (ASCII):
//!
//! ```text
//! formula := iff
//! iff     := impl ("<->" impl)*
//! impl    := disj ("->" impl)?
//! disj    := conj ("|" conj)*
//! conj    := unary ("&" unary)*
//! unary   := "~" unary | "O" unary | "Ps" unary | "Pw" unary
//!          | atom | "T" | "F" | "(" formula ")"
//! atom    := [a-z][a-z0-9_]*
//! ```

mod parse;
mod render;
mod schema;
mod taut;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

pub use parse::{parse, ParseError};
pub use render::render;
pub use schema::{instantiate, match_schema, Schema, SchemaError, Substitution};
pub use taut::{is_tautology, tautological_consequence};

/// A formula of the deontic language.
///
/// `PermW` is kept as its own node; [`expand_pw`] rewrites it to `~O~`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Atom(String),
    Top,
    Bottom,
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Obl(Box<Formula>),
    PermS(Box<Formula>),
    PermW(Box<Formula>),
}

/// The three modal operators.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Modality {
    Obl,
    PermS,
    PermW,
}

impl Modality {
    pub fn symbol(self) -> &'static str {
        match self {
            Modality::Obl => "O",
            Modality::PermS => "Ps",
            Modality::PermW => "Pw",
        }
    }

    pub fn apply(self, f: Formula) -> Formula {
        match self {
            Modality::Obl => Formula::Obl(Box::new(f)),
            Modality::PermS => Formula::PermS(Box::new(f)),
            Modality::PermW => Formula::PermW(Box::new(f)),
        }
    }
}

impl fmt::Display for Modality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

impl FromStr for Modality {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "O" => Ok(Modality::Obl),
            "Ps" => Ok(Modality::PermS),
            "Pw" => Ok(Modality::PermW),
            other => Err(format!("unknown modality `{other}` (expected O, Ps or Pw)")),
        }
    }
}

/// Returns true if `name` is a well-formed atom: `[a-z][a-z0-9_]*`.
pub fn is_atom_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some('a'..='z'))
        && chars.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_')
}

impl Formula {
    pub fn atom(name: impl Into<String>) -> Formula {
        Formula::Atom(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(l: Formula, r: Formula) -> Formula {
        Formula::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: Formula, r: Formula) -> Formula {
        Formula::Or(Box::new(l), Box::new(r))
    }

    pub fn implies(l: Formula, r: Formula) -> Formula {
        Formula::Implies(Box::new(l), Box::new(r))
    }

    pub fn iff(l: Formula, r: Formula) -> Formula {
        Formula::Iff(Box::new(l), Box::new(r))
    }

    pub fn obl(f: Formula) -> Formula {
        Formula::Obl(Box::new(f))
    }

    pub fn perm_s(f: Formula) -> Formula {
        Formula::PermS(Box::new(f))
    }

    pub fn perm_w(f: Formula) -> Formula {
        Formula::PermW(Box::new(f))
    }

    /// Left-associated conjunction of `parts`; `T` when empty.
    pub fn conjunction<I: IntoIterator<Item = Formula>>(parts: I) -> Formula {
        parts
            .into_iter()
            .reduce(Formula::and)
            .unwrap_or(Formula::Top)
    }

    /// Left-associated disjunction of `parts`; `F` when empty.
    pub fn disjunction<I: IntoIterator<Item = Formula>>(parts: I) -> Formula {
        parts
            .into_iter()
            .reduce(Formula::or)
            .unwrap_or(Formula::Bottom)
    }

    /// The top-level modality and its operand, if this is a modal formula.
    pub fn as_modal(&self) -> Option<(Modality, &Formula)> {
        match self {
            Formula::Obl(x) => Some((Modality::Obl, x)),
            Formula::PermS(x) => Some((Modality::PermS, x)),
            Formula::PermW(x) => Some((Modality::PermW, x)),
            _ => None,
        }
    }

    pub fn is_modal(&self) -> bool {
        self.as_modal().is_some()
    }

    /// Flattens nested conjunctions into their conjuncts, left to right.
    pub fn conjuncts(&self) -> Vec<&Formula> {
        let mut out = Vec::new();
        fn walk<'a>(f: &'a Formula, out: &mut Vec<&'a Formula>) {
            match f {
                Formula::And(l, r) => {
                    walk(l, out);
                    walk(r, out);
                }
                other => out.push(other),
            }
        }
        walk(self, &mut out);
        out
    }

    /// Flattens nested disjunctions into their disjuncts, left to right.
    pub fn disjuncts(&self) -> Vec<&Formula> {
        let mut out = Vec::new();
        fn walk<'a>(f: &'a Formula, out: &mut Vec<&'a Formula>) {
            match f {
                Formula::Or(l, r) => {
                    walk(l, out);
                    walk(r, out);
                }
                other => out.push(other),
            }
        }
        walk(self, &mut out);
        out
    }

    /// All atom names occurring in the formula.
    pub fn atoms(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Atom(a) => {
                out.insert(a.clone());
            }
            Formula::Top | Formula::Bottom => {}
            Formula::Not(x) | Formula::Obl(x) | Formula::PermS(x) | Formula::PermW(x) => {
                x.collect_atoms(out)
            }
            Formula::And(l, r)
            | Formula::Or(l, r)
            | Formula::Implies(l, r)
            | Formula::Iff(l, r) => {
                l.collect_atoms(out);
                r.collect_atoms(out);
            }
        }
    }

    /// Number of nested connectives along the deepest branch (atoms have depth 0).
    pub fn depth(&self) -> usize {
        match self {
            Formula::Atom(_) | Formula::Top | Formula::Bottom => 0,
            Formula::Not(x) | Formula::Obl(x) | Formula::PermS(x) | Formula::PermW(x) => {
                1 + x.depth()
            }
            Formula::And(l, r)
            | Formula::Or(l, r)
            | Formula::Implies(l, r)
            | Formula::Iff(l, r) => 1 + l.depth().max(r.depth()),
        }
    }

    /// Rebuilds the formula bottom-up, applying `f` to every node after its
    /// children have been rebuilt.
    pub fn map_bottom_up(&self, f: &mut impl FnMut(Formula) -> Formula) -> Formula {
        let rebuilt = match self {
            Formula::Atom(_) | Formula::Top | Formula::Bottom => self.clone(),
            Formula::Not(x) => Formula::not(x.map_bottom_up(f)),
            Formula::Obl(x) => Formula::obl(x.map_bottom_up(f)),
            Formula::PermS(x) => Formula::perm_s(x.map_bottom_up(f)),
            Formula::PermW(x) => Formula::perm_w(x.map_bottom_up(f)),
            Formula::And(l, r) => Formula::and(l.map_bottom_up(f), r.map_bottom_up(f)),
            Formula::Or(l, r) => Formula::or(l.map_bottom_up(f), r.map_bottom_up(f)),
            Formula::Implies(l, r) => Formula::implies(l.map_bottom_up(f), r.map_bottom_up(f)),
            Formula::Iff(l, r) => Formula::iff(l.map_bottom_up(f), r.map_bottom_up(f)),
        };
        f(rebuilt)
    }
}

/// Replaces every `Pw x` by `~O~x`, recursively.
pub fn expand_pw(f: &Formula) -> Formula {
    f.map_bottom_up(&mut |node| match node {
        Formula::PermW(x) => Formula::not(Formula::obl(Formula::not(*x))),
        other => other,
    })
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render(self))
    }
}

impl FromStr for Formula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}
