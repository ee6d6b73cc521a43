//! Frame conditions on finite neighbourhood frames, and validity of schemata
//! and rules on a single frame.
//!
//! Property checks quantify over every subset of W. Conditions with a
//! disjunctive antecedent `X ∪ Y ∈ N_P(w)` only visit the splits of sets that
//! are actually in `N_P(w)`, so a check costs `O(|W| · Σ 3^|S|)` over the
//! sets S of the permission neighbourhoods, plus `O(2^|W|)` table setup.
//! Schema validity enumerates `2^(|W|·k)` assignments for k metavariables.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::formula::Schema;
use crate::inventory::RuleSchema;
use crate::model::{subsets_of, BoxOp, Compiled, Frame, Neighbourhood, SetTables, WorldSet};

/// Largest frame on which properties are checked exhaustively.
pub const MAX_CHECK_WORLDS: usize = 10;

/// Largest number of assignment bits (`|W|` times metavariables) for
/// schema and rule validity.
pub const MAX_ASSIGNMENT_BITS: usize = 24;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum FrameProperty {
    OSupplemented,
    PSupplemented,
    PwCoherent,
    PsCoherent,
    AFCPO,
    AFCPP,
    AFCP2P,
    IFCPO,
    IFCPP,
    IFCP2P,
}

impl FrameProperty {
    pub const ALL: [FrameProperty; 10] = [
        FrameProperty::OSupplemented,
        FrameProperty::PSupplemented,
        FrameProperty::PwCoherent,
        FrameProperty::PsCoherent,
        FrameProperty::AFCPO,
        FrameProperty::AFCPP,
        FrameProperty::AFCP2P,
        FrameProperty::IFCPO,
        FrameProperty::IFCPP,
        FrameProperty::IFCP2P,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FrameProperty::OSupplemented => "OSupplemented",
            FrameProperty::PSupplemented => "PSupplemented",
            FrameProperty::PwCoherent => "PwCoherent",
            FrameProperty::PsCoherent => "PsCoherent",
            FrameProperty::AFCPO => "AFCPO",
            FrameProperty::AFCPP => "AFCPP",
            FrameProperty::AFCP2P => "AFCP2P",
            FrameProperty::IFCPO => "IFCPO",
            FrameProperty::IFCPP => "IFCPP",
            FrameProperty::IFCP2P => "IFCP2P",
        }
    }

    /// The condition in set notation.
    pub fn condition(self) -> &'static str {
        match self {
            FrameProperty::OSupplemented => "X∩Y ∈ N_O(w) ⇒ X ∈ N_O(w) & Y ∈ N_O(w)",
            FrameProperty::PSupplemented => "X∩Y ∈ N_P(w) ⇒ X ∈ N_P(w) & Y ∈ N_P(w)",
            FrameProperty::PwCoherent => "X ∈ N_O(w) ⇒ W−X ∉ N_O(w)",
            FrameProperty::PsCoherent => "X ∈ N_P(w) ⇒ W−X ∉ N_O(w)",
            FrameProperty::AFCPO => "X∪Y ∈ N_P(w) & W−Y ∈ N_O(w) ⇒ X ∈ N_P(w)",
            FrameProperty::AFCPP => "X∪Y ∈ N_P(w) & W−X ∉ N_O(w) & W−Y ∉ N_O(w) ⇒ X ∈ N_P(w) & Y ∈ N_P(w)",
            FrameProperty::AFCP2P => "X∪Y ∈ N_P(w) & W−X ∉ N_O(w) ⇒ X ∈ N_P(w)",
            FrameProperty::IFCPO => "X∪Y ∈ N_P(w) & Z ⊆ W−Y & Z ∈ N_O(w) ⇒ X ∈ N_P(w)",
            FrameProperty::IFCPP => {
                "X∪Y ∈ N_P(w) & Z ⊆ X & Q ⊆ Y & W−Z ∉ N_O(w) & W−Q ∉ N_O(w) ⇒ X ∈ N_P(w) & Y ∈ N_P(w)"
            }
            FrameProperty::IFCP2P => "X∪Y ∈ N_P(w) & Z ⊆ X & W−Z ∉ N_O(w) ⇒ X ∈ N_P(w)",
        }
    }
}

impl fmt::Display for FrameProperty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FrameProperty {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key: String = s
            .chars()
            .filter(|c| *c != '_' && *c != '-')
            .collect::<String>()
            .to_ascii_lowercase();
        let key = key.strip_suffix("permitted").unwrap_or(&key);
        let key = match key {
            "osup" => "osupplemented",
            "psup" => "psupplemented",
            k => k,
        };
        FrameProperty::ALL
            .into_iter()
            .find(|p| p.name().to_ascii_lowercase() == key)
            .ok_or_else(|| format!("unknown frame property `{s}`"))
    }
}

/// Parses a comma-separated property list; the empty string gives the empty set.
pub fn parse_properties(s: &str) -> Result<BTreeSet<FrameProperty>, String> {
    s.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(str::parse)
        .collect()
}

/// A violation of a frame property at one world.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct PropertyWitness {
    pub world: usize,
    pub x: WorldSet,
    pub y: WorldSet,
    pub z: Option<WorldSet>,
    pub q: Option<WorldSet>,
}

impl PropertyWitness {
    pub fn describe(&self, frame: &Frame) -> String {
        let mut parts = vec![
            format!("X={}", frame.show(self.x)),
            format!("Y={}", frame.show(self.y)),
        ];
        if let Some(z) = self.z {
            parts.push(format!("Z={}", frame.show(z)));
        }
        if let Some(q) = self.q {
            parts.push(format!("Q={}", frame.show(q)));
        }
        format!("at {}: {}", frame.worlds[self.world], parts.join(", "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PropertyCheck {
    Satisfied,
    Violated(PropertyWitness),
}

impl PropertyCheck {
    pub fn is_satisfied(&self) -> bool {
        matches!(self, PropertyCheck::Satisfied)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FrameError {
    #[error("frame has {worlds} worlds; exhaustive checks support at most {limit}")]
    TooManyWorlds { worlds: usize, limit: usize },
    #[error("schema `{schema}` has concrete atoms {atoms:?}; only pure schemata can be checked on a frame")]
    ConcreteAtoms { schema: String, atoms: Vec<String> },
    #[error("{bits} assignment bits exceeds the limit of {MAX_ASSIGNMENT_BITS}")]
    TooManyAssignments { bits: usize },
}

fn ensure_size(frame: &Frame) -> Result<(), FrameError> {
    if frame.size() > MAX_CHECK_WORLDS {
        return Err(FrameError::TooManyWorlds {
            worlds: frame.size(),
            limit: MAX_CHECK_WORLDS,
        });
    }
    Ok(())
}

/// Evaluates the condition of `p` at world `w` for one choice of the set
/// variables, straight from the definition. Unused variables are ignored.
pub fn condition_holds(
    frame: &Frame,
    p: FrameProperty,
    w: usize,
    x: WorldSet,
    y: WorldSet,
    z: WorldSet,
    q: WorldSet,
) -> bool {
    let n = frame.size();
    let o = |s: WorldSet| frame.n_o[w].contains(s);
    let ps = |s: WorldSet| frame.n_p[w].contains(s);
    let c = |s: WorldSet| s.complement(n);
    let implies = |a: bool, b: bool| !a || b;
    match p {
        FrameProperty::OSupplemented => implies(o(x.intersection(y)), o(x) && o(y)),
        FrameProperty::PSupplemented => implies(ps(x.intersection(y)), ps(x) && ps(y)),
        FrameProperty::PwCoherent => implies(o(x), !o(c(x))),
        FrameProperty::PsCoherent => implies(ps(x), !o(c(x))),
        FrameProperty::AFCPO => implies(ps(x.union(y)) && o(c(y)), ps(x)),
        FrameProperty::AFCPP => implies(ps(x.union(y)) && !o(c(x)) && !o(c(y)), ps(x) && ps(y)),
        FrameProperty::AFCP2P => implies(ps(x.union(y)) && !o(c(x)), ps(x)),
        FrameProperty::IFCPO => implies(ps(x.union(y)) && z.is_subset(c(y)) && o(z), ps(x)),
        FrameProperty::IFCPP => implies(
            ps(x.union(y)) && z.is_subset(x) && q.is_subset(y) && !o(c(z)) && !o(c(q)),
            ps(x) && ps(y),
        ),
        FrameProperty::IFCP2P => implies(ps(x.union(y)) && z.is_subset(x) && !o(c(z)), ps(x)),
    }
}

/// Re-checks a witness against the definition.
pub fn is_genuine(frame: &Frame, p: FrameProperty, wit: &PropertyWitness) -> bool {
    wit.world < frame.size()
        && !condition_holds(
            frame,
            p,
            wit.world,
            wit.x,
            wit.y,
            wit.z.unwrap_or_default(),
            wit.q.unwrap_or_default(),
        )
}

/// Per-world view used by the fast checks.
struct WorldView<'a> {
    n: usize,
    o: &'a Neighbourhood,
    p: &'a Neighbourhood,
}

impl WorldView<'_> {
    fn in_o(&self, s: WorldSet) -> bool {
        self.o.contains(s)
    }

    fn in_p(&self, s: WorldSet) -> bool {
        self.p.contains(s)
    }

    /// Pw-style test: `W − s ∉ N_O(w)`.
    fn weak(&self, s: WorldSet) -> bool {
        !self.o.contains(s.complement(self.n))
    }

    /// For every subset X, some Z ⊆ X with `W − Z ∉ N_O(w)`, if any.
    fn weak_subsets(&self) -> Vec<Option<WorldSet>> {
        let size = 1usize << self.n;
        let mut out: Vec<Option<WorldSet>> = vec![None; size];
        for x in 0..size {
            let set = WorldSet(x as u64);
            out[x] = set
                .iter()
                .find_map(|i| out[x & !(1 << i)])
                .or_else(|| self.weak(set).then_some(set));
        }
        out
    }

    /// Every split of every permitted set into X ∪ Y.
    fn splits(&self) -> impl Iterator<Item = (WorldSet, WorldSet)> + '_ {
        self.p.sets().iter().flat_map(|&s| {
            subsets_of(s).flat_map(move |x| {
                let rest = WorldSet(s.0 & !x.0);
                subsets_of(x).map(move |extra| (x, rest.union(extra)))
            })
        })
    }
}

fn witness(world: usize, x: WorldSet, y: WorldSet) -> PropertyWitness {
    PropertyWitness {
        world,
        x,
        y,
        z: None,
        q: None,
    }
}

fn check_world(frame: &Frame, p: FrameProperty, w: usize) -> Option<PropertyWitness> {
    let n = frame.size();
    let v = WorldView {
        n,
        o: &frame.n_o[w],
        p: &frame.n_p[w],
    };
    match p {
        FrameProperty::OSupplemented | FrameProperty::PSupplemented => {
            let nb = if p == FrameProperty::OSupplemented {
                v.o
            } else {
                v.p
            };
            for &s in nb.sets() {
                let outside = s.complement(n);
                for extra in subsets_of(outside) {
                    let x = s.union(extra);
                    if !nb.contains(x) {
                        return Some(witness(w, x, s));
                    }
                }
            }
            None
        }
        FrameProperty::PwCoherent => {
            v.o.sets()
                .iter()
                .find(|x| v.in_o(x.complement(n)))
                .map(|&x| witness(w, x, WorldSet::EMPTY))
        }
        FrameProperty::PsCoherent => {
            v.p.sets()
                .iter()
                .find(|x| v.in_o(x.complement(n)))
                .map(|&x| witness(w, x, WorldSet::EMPTY))
        }
        FrameProperty::AFCPO => v
            .splits()
            .find(|&(x, y)| v.in_o(y.complement(n)) && !v.in_p(x))
            .map(|(x, y)| witness(w, x, y)),
        FrameProperty::AFCPP => v
            .splits()
            .find(|&(x, y)| v.weak(x) && v.weak(y) && !(v.in_p(x) && v.in_p(y)))
            .map(|(x, y)| witness(w, x, y)),
        FrameProperty::AFCP2P => v
            .splits()
            .find(|&(x, _)| v.weak(x) && !v.in_p(x))
            .map(|(x, y)| witness(w, x, y)),
        FrameProperty::IFCPO => v.splits().find_map(|(x, y)| {
            if v.in_p(x) {
                return None;
            }
            let z = v.o.sets().iter().find(|z| z.intersection(y).is_empty())?;
            Some(PropertyWitness {
                z: Some(*z),
                ..witness(w, x, y)
            })
        }),
        FrameProperty::IFCPP => {
            let ws = v.weak_subsets();
            v.splits().find_map(|(x, y)| {
                if v.in_p(x) && v.in_p(y) {
                    return None;
                }
                let z = ws[x.0 as usize]?;
                let q = ws[y.0 as usize]?;
                Some(PropertyWitness {
                    z: Some(z),
                    q: Some(q),
                    ..witness(w, x, y)
                })
            })
        }
        FrameProperty::IFCP2P => {
            let ws = v.weak_subsets();
            v.splits().find_map(|(x, y)| {
                if v.in_p(x) {
                    return None;
                }
                let z = ws[x.0 as usize]?;
                Some(PropertyWitness {
                    z: Some(z),
                    ..witness(w, x, y)
                })
            })
        }
    }
}

/// Decides whether `frame` has property `p`, returning a witness if not.
pub fn check_property(frame: &Frame, p: FrameProperty) -> Result<PropertyCheck, FrameError> {
    ensure_size(frame)?;
    Ok((0..frame.size())
        .find_map(|w| check_world(frame, p, w))
        .map_or(PropertyCheck::Satisfied, PropertyCheck::Violated))
}

/// True iff world `w` satisfies `p`. All conditions are world-local, so a
/// frame has `p` iff each of its worlds does.
pub fn world_satisfies(frame: &Frame, p: FrameProperty, w: usize) -> bool {
    check_world(frame, p, w).is_none()
}

/// The set of properties the frame satisfies.
pub fn classify_frame(frame: &Frame) -> Result<BTreeSet<FrameProperty>, FrameError> {
    ensure_size(frame)?;
    Ok(FrameProperty::ALL
        .into_iter()
        .filter(|p| (0..frame.size()).all(|w| world_satisfies(frame, *p, w)))
        .collect())
}

/// Outcome of checking a schema or rule on a frame.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ValidityCheck {
    Valid,
    /// Metavariable truth sets and a world where the schema fails.
    Violated {
        world: usize,
        assignment: Vec<(String, WorldSet)>,
    },
}

impl ValidityCheck {
    pub fn is_valid(&self) -> bool {
        matches!(self, ValidityCheck::Valid)
    }

    pub fn describe(&self, frame: &Frame) -> String {
        match self {
            ValidityCheck::Valid => "valid".to_string(),
            ValidityCheck::Violated { world, assignment } => {
                let parts: Vec<String> = assignment
                    .iter()
                    .map(|(v, s)| format!("⟦{v}⟧={}", frame.show(*s)))
                    .collect();
                format!(
                    "fails at {} with {}",
                    frame.worlds[*world],
                    parts.join(", ")
                )
            }
        }
    }
}

/// Enumerates assignments of subsets to `vars`, checking `sides` once the
/// first `side_vars` variables are fixed and `body` at the leaves.
struct AssignmentSearch<'a> {
    tables: SetTables,
    full: u64,
    vars: &'a [String],
    side_vars: usize,
    sides: Vec<Compiled>,
    body: Compiled,
    assignment: Vec<u64>,
    stack: Vec<u64>,
}

impl AssignmentSearch<'_> {
    fn run(&mut self, depth: usize) -> Option<ValidityCheck> {
        if depth == self.side_vars {
            for side in &self.sides {
                if side.eval(&self.tables, &self.assignment, &mut self.stack) != self.full {
                    return None;
                }
            }
        }
        if depth == self.vars.len() {
            let truth = self
                .body
                .eval(&self.tables, &self.assignment, &mut self.stack);
            if truth == self.full {
                return None;
            }
            let world = (!truth & self.full).trailing_zeros() as usize;
            return Some(ValidityCheck::Violated {
                world,
                assignment: self
                    .vars
                    .iter()
                    .cloned()
                    .zip(self.assignment.iter().map(|b| WorldSet(*b)))
                    .collect(),
            });
        }
        for s in 0..=self.full {
            self.assignment[depth] = s;
            if let Some(v) = self.run(depth + 1) {
                return Some(v);
            }
        }
        None
    }
}

fn search_assignments(
    frame: &Frame,
    vars: &[String],
    side_vars: usize,
    sides: &[crate::formula::Formula],
    body: &crate::formula::Formula,
) -> Result<ValidityCheck, FrameError> {
    ensure_size(frame)?;
    let bits = frame.size() * vars.len();
    if bits > MAX_ASSIGNMENT_BITS {
        return Err(FrameError::TooManyAssignments { bits });
    }
    let tables = SetTables::new(frame);
    let mut search = AssignmentSearch {
        full: tables.full(),
        tables,
        vars,
        side_vars,
        sides: sides.iter().map(|s| Compiled::with_vars(s, vars)).collect(),
        body: Compiled::with_vars(body, vars),
        assignment: vec![0; vars.len()],
        stack: Vec::new(),
    };
    Ok(search.run(0).unwrap_or(ValidityCheck::Valid))
}

/// Frame validity of a pure schema: every metavariable ranges over every
/// subset of W.
pub fn schema_valid_on_frame(frame: &Frame, schema: &Schema) -> Result<ValidityCheck, FrameError> {
    let concrete = schema.concrete_atoms();
    if !concrete.is_empty() {
        return Err(FrameError::ConcreteAtoms {
            schema: schema.name.clone(),
            atoms: concrete.into_iter().collect(),
        });
    }
    let vars = schema.metavariable_list();
    search_assignments(frame, &vars, 0, &[], &schema.body)
}

/// Local validity of a rule: for every assignment under which all side
/// conditions hold everywhere, the main premise implies the conclusion at
/// every world.
pub fn rule_valid_on_frame(frame: &Frame, rule: &RuleSchema) -> Result<ValidityCheck, FrameError> {
    let mut side_atoms = BTreeSet::new();
    for s in &rule.sides {
        side_atoms.extend(s.atoms());
    }
    let mut vars: Vec<String> = side_atoms.iter().cloned().collect();
    vars.extend(
        rule.metavariables()
            .into_iter()
            .filter(|v| !side_atoms.contains(v)),
    );
    search_assignments(
        frame,
        &vars,
        side_atoms.len(),
        &rule.sides,
        &rule.local_implication(),
    )
}

/// Closes every neighbourhood of `op` under supersets.
pub fn supplementation_closure(frame: &Frame, op: BoxOp) -> Frame {
    let n = frame.size();
    let mut out = frame.clone();
    for w in 0..n {
        let mut closed = BTreeSet::new();
        for &s in frame.nbhd(op, w).sets() {
            if closed.contains(&s) {
                continue;
            }
            for extra in subsets_of(s.complement(n)) {
                closed.insert(s.union(extra));
            }
        }
        *out.nbhd_mut(op, w) = Neighbourhood::new(closed);
    }
    out
}
