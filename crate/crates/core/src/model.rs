//! Finite deontic neighbourhood frames and models, and truth evaluation.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::formula::{is_atom_name, Formula};

/// Hard limit imposed by the bitmask representation.
pub const MAX_WORLDS: usize = 64;

/// A set of worlds, stored as a bitmask over world indices.
#[derive(Copy, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WorldSet(pub u64);

impl WorldSet {
    pub const EMPTY: WorldSet = WorldSet(0);

    /// All of `0..n`.
    pub fn full(n: usize) -> WorldSet {
        if n >= 64 {
            WorldSet(u64::MAX)
        } else {
            WorldSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(i: usize) -> WorldSet {
        WorldSet(1u64 << i)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(it: I) -> WorldSet {
        WorldSet(it.into_iter().fold(0, |acc, i| acc | (1u64 << i)))
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn insert(&mut self, i: usize) {
        self.0 |= 1u64 << i;
    }

    pub fn union(self, other: WorldSet) -> WorldSet {
        WorldSet(self.0 | other.0)
    }

    pub fn intersection(self, other: WorldSet) -> WorldSet {
        WorldSet(self.0 & other.0)
    }

    /// `W - self` for a universe of `n` worlds.
    pub fn complement(self, n: usize) -> WorldSet {
        WorldSet(!self.0 & WorldSet::full(n).0)
    }

    pub fn is_subset(self, other: WorldSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..64).filter(move |i| self.contains(*i))
    }
}

impl fmt::Debug for WorldSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Iterates every subset of `0..n` in increasing bitmask order.
pub fn all_subsets(n: usize) -> impl Iterator<Item = WorldSet> {
    assert!(n < 64, "subset enumeration needs fewer than 64 worlds");
    (0..1u64 << n).map(WorldSet)
}

/// Iterates the subsets of `set`, including the empty set and `set` itself.
pub fn subsets_of(set: WorldSet) -> impl Iterator<Item = WorldSet> {
    let mut next = Some(0u64);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == set.0 {
            None
        } else {
            Some((cur.wrapping_sub(set.0)) & set.0)
        };
        Some(WorldSet(cur))
    })
}

/// The neighbourhood of one world: a duplicate-free sorted collection of sets.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Neighbourhood(Vec<WorldSet>);

impl Neighbourhood {
    pub fn new<I: IntoIterator<Item = WorldSet>>(sets: I) -> Neighbourhood {
        let mut v: Vec<WorldSet> = sets.into_iter().collect();
        v.sort();
        v.dedup();
        Neighbourhood(v)
    }

    pub fn contains(&self, s: WorldSet) -> bool {
        self.0.binary_search(&s).is_ok()
    }

    pub fn insert(&mut self, s: WorldSet) {
        if let Err(pos) = self.0.binary_search(&s) {
            self.0.insert(pos, s);
        }
    }

    pub fn sets(&self) -> &[WorldSet] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// The two neighbourhood functions.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BoxOp {
    #[serde(rename = "O")]
    Obl,
    #[serde(rename = "Ps")]
    PermS,
}

impl BoxOp {
    pub fn label(self) -> &'static str {
        match self {
            BoxOp::Obl => "N_O",
            BoxOp::PermS => "N_P",
        }
    }
}

impl fmt::Display for BoxOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoxOp::Obl => "O",
            BoxOp::PermS => "Ps",
        })
    }
}

impl std::str::FromStr for BoxOp {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "O" | "N_O" => Ok(BoxOp::Obl),
            "Ps" | "P" | "N_P" => Ok(BoxOp::PermS),
            other => Err(format!(
                "unknown neighbourhood `{other}` (expected O or Ps)"
            )),
        }
    }
}

/// A frame ⟨W, N_O, N_P⟩ with worlds identified by index.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Frame {
    pub worlds: Vec<String>,
    pub n_o: Vec<Neighbourhood>,
    pub n_p: Vec<Neighbourhood>,
}

impl Frame {
    /// A frame with the given worlds and empty neighbourhoods.
    pub fn empty(worlds: Vec<String>) -> Frame {
        assert!(!worlds.is_empty() && worlds.len() <= MAX_WORLDS);
        let n = worlds.len();
        Frame {
            worlds,
            n_o: vec![Neighbourhood::default(); n],
            n_p: vec![Neighbourhood::default(); n],
        }
    }

    /// Worlds named `w1..wn`.
    pub fn with_size(n: usize) -> Frame {
        Frame::empty((1..=n).map(|i| format!("w{i}")).collect())
    }

    pub fn size(&self) -> usize {
        self.worlds.len()
    }

    pub fn universe(&self) -> WorldSet {
        WorldSet::full(self.size())
    }

    pub fn nbhd(&self, op: BoxOp, w: usize) -> &Neighbourhood {
        match op {
            BoxOp::Obl => &self.n_o[w],
            BoxOp::PermS => &self.n_p[w],
        }
    }

    pub fn nbhd_mut(&mut self, op: BoxOp, w: usize) -> &mut Neighbourhood {
        match op {
            BoxOp::Obl => &mut self.n_o[w],
            BoxOp::PermS => &mut self.n_p[w],
        }
    }

    pub fn world_index(&self, name: &str) -> Option<usize> {
        self.worlds.iter().position(|w| w == name)
    }

    /// Renders a set as `{w1,w2}`.
    pub fn show(&self, s: WorldSet) -> String {
        let names: Vec<&str> = s.iter().map(|i| self.worlds[i].as_str()).collect();
        format!("{{{}}}", names.join(","))
    }

    pub fn names(&self, s: WorldSet) -> Vec<String> {
        s.iter().map(|i| self.worlds[i].clone()).collect()
    }

    /// Truth set of `f` when each atom's truth set is given by `val`.
    pub fn truth_set_with(&self, f: &Formula, val: &dyn Fn(&str) -> WorldSet) -> WorldSet {
        let n = self.size();
        let modal = |op: BoxOp, s: WorldSet| {
            WorldSet::from_indices((0..n).filter(|w| self.nbhd(op, *w).contains(s)))
        };
        match f {
            Formula::Atom(a) => val(a).intersection(self.universe()),
            Formula::Top => self.universe(),
            Formula::Bottom => WorldSet::EMPTY,
            Formula::Not(x) => self.truth_set_with(x, val).complement(n),
            Formula::And(l, r) => self
                .truth_set_with(l, val)
                .intersection(self.truth_set_with(r, val)),
            Formula::Or(l, r) => self
                .truth_set_with(l, val)
                .union(self.truth_set_with(r, val)),
            Formula::Implies(l, r) => self
                .truth_set_with(l, val)
                .complement(n)
                .union(self.truth_set_with(r, val)),
            Formula::Iff(l, r) => {
                let a = self.truth_set_with(l, val);
                let b = self.truth_set_with(r, val);
                WorldSet(!(a.0 ^ b.0)).intersection(self.universe())
            }
            Formula::Obl(x) => modal(BoxOp::Obl, self.truth_set_with(x, val)),
            Formula::PermS(x) => modal(BoxOp::PermS, self.truth_set_with(x, val)),
            Formula::PermW(x) => {
                modal(BoxOp::Obl, self.truth_set_with(x, val).complement(n)).complement(n)
            }
        }
    }
}

/// A neighbourhood model ⟨W, N_O, N_P, V⟩. Atoms missing from `valuation`
/// are false everywhere.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NeighbourhoodModel {
    pub frame: Frame,
    pub valuation: BTreeMap<String, WorldSet>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModelError {
    #[error("unknown world `{0}`")]
    UnknownWorld(String),
    #[error("malformed model file: {0}")]
    Format(String),
    #[error("invalid model: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
}

/// A broken structural invariant of a model description.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Violation {
    NoWorlds,
    TooManyWorlds(usize),
    DuplicateWorld(String),
    UnknownNeighbourhoodWorld {
        relation: String,
        world: String,
    },
    SetMemberOutsideW {
        relation: String,
        world: String,
        member: String,
    },
    ValuationOutsideW {
        atom: String,
        member: String,
    },
    BadAtomName(String),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoWorlds => f.write_str("W is empty"),
            Violation::TooManyWorlds(n) => {
                write!(f, "{n} worlds exceeds the limit of {MAX_WORLDS}")
            }
            Violation::DuplicateWorld(w) => write!(f, "world `{w}` declared twice"),
            Violation::UnknownNeighbourhoodWorld { relation, world } => {
                write!(f, "{relation} given for undeclared world `{world}`")
            }
            Violation::SetMemberOutsideW {
                relation,
                world,
                member,
            } => {
                write!(f, "set member outside W: `{member}` in {relation}({world})")
            }
            Violation::ValuationOutsideW { atom, member } => {
                write!(f, "valuation member outside W: `{member}` in V({atom})")
            }
            Violation::BadAtomName(a) => write!(f, "`{a}` is not a valid atom name"),
        }
    }
}

/// On-disk form of a model: world names everywhere, unchecked.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelDescription {
    pub worlds: Vec<String>,
    #[serde(default)]
    pub valuation: BTreeMap<String, Vec<String>>,
    #[serde(rename = "N_O", default)]
    pub n_o: BTreeMap<String, Vec<Vec<String>>>,
    #[serde(rename = "N_P", default)]
    pub n_p: BTreeMap<String, Vec<Vec<String>>>,
}

/// Checks the structural invariants of a model description.
pub fn validate_model(d: &ModelDescription) -> Result<(), Vec<Violation>> {
    let mut out = Vec::new();
    if d.worlds.is_empty() {
        out.push(Violation::NoWorlds);
    }
    if d.worlds.len() > MAX_WORLDS {
        out.push(Violation::TooManyWorlds(d.worlds.len()));
    }
    let mut seen = BTreeSet::new();
    for w in &d.worlds {
        if !seen.insert(w.as_str()) {
            out.push(Violation::DuplicateWorld(w.clone()));
        }
    }
    for (label, rel) in [("N_O", &d.n_o), ("N_P", &d.n_p)] {
        for (world, sets) in rel {
            if !seen.contains(world.as_str()) {
                out.push(Violation::UnknownNeighbourhoodWorld {
                    relation: label.into(),
                    world: world.clone(),
                });
            }
            for member in sets.iter().flatten() {
                if !seen.contains(member.as_str()) {
                    out.push(Violation::SetMemberOutsideW {
                        relation: label.into(),
                        world: world.clone(),
                        member: member.clone(),
                    });
                }
            }
        }
    }
    for (atom, members) in &d.valuation {
        if !is_atom_name(atom) {
            out.push(Violation::BadAtomName(atom.clone()));
        }
        for member in members {
            if !seen.contains(member.as_str()) {
                out.push(Violation::ValuationOutsideW {
                    atom: atom.clone(),
                    member: member.clone(),
                });
            }
        }
    }
    if out.is_empty() {
        Ok(())
    } else {
        Err(out)
    }
}

impl NeighbourhoodModel {
    pub fn new(frame: Frame, valuation: BTreeMap<String, WorldSet>) -> NeighbourhoodModel {
        NeighbourhoodModel { frame, valuation }
    }

    pub fn from_description(d: &ModelDescription) -> Result<NeighbourhoodModel, ModelError> {
        validate_model(d).map_err(ModelError::Invalid)?;
        let mut frame = Frame::empty(d.worlds.clone());
        let set_of = |names: &[String]| {
            WorldSet::from_indices(
                names
                    .iter()
                    .map(|m| d.worlds.iter().position(|w| w == m).unwrap()),
            )
        };
        for (op, rel) in [(BoxOp::Obl, &d.n_o), (BoxOp::PermS, &d.n_p)] {
            for (world, sets) in rel {
                let w = frame.world_index(world).unwrap();
                *frame.nbhd_mut(op, w) = Neighbourhood::new(sets.iter().map(|s| set_of(s)));
            }
        }
        let valuation = d
            .valuation
            .iter()
            .map(|(a, m)| (a.clone(), set_of(m)))
            .collect();
        Ok(NeighbourhoodModel { frame, valuation })
    }

    pub fn to_description(&self) -> ModelDescription {
        let f = &self.frame;
        let rel = |op: BoxOp| {
            (0..f.size())
                .filter(|w| !f.nbhd(op, *w).is_empty())
                .map(|w| {
                    let sets = f.nbhd(op, w).sets().iter().map(|s| f.names(*s)).collect();
                    (f.worlds[w].clone(), sets)
                })
                .collect()
        };
        ModelDescription {
            worlds: f.worlds.clone(),
            valuation: self
                .valuation
                .iter()
                .map(|(a, s)| (a.clone(), f.names(*s)))
                .collect(),
            n_o: rel(BoxOp::Obl),
            n_p: rel(BoxOp::PermS),
        }
    }

    pub fn from_json(text: &str) -> Result<NeighbourhoodModel, ModelError> {
        let d: ModelDescription =
            serde_json::from_str(text).map_err(|e| ModelError::Format(e.to_string()))?;
        NeighbourhoodModel::from_description(&d)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_description()).expect("model serializes")
    }

    pub fn atom_set(&self, atom: &str) -> WorldSet {
        self.valuation.get(atom).copied().unwrap_or_default()
    }

    pub fn world(&self, name: &str) -> Result<usize, ModelError> {
        self.frame
            .world_index(name)
            .ok_or_else(|| ModelError::UnknownWorld(name.to_string()))
    }
}

impl Serialize for NeighbourhoodModel {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_description().serialize(serializer)
    }
}

/// ⟦f⟧ in `m`.
pub fn truth_set(m: &NeighbourhoodModel, f: &Formula) -> WorldSet {
    m.frame.truth_set_with(f, &|a| m.atom_set(a))
}

/// Truth of `f` at the named world.
pub fn eval(m: &NeighbourhoodModel, world: &str, f: &Formula) -> Result<bool, ModelError> {
    let w = m.world(world)?;
    Ok(truth_set(m, f).contains(w))
}

/// Truth of `f` at every world of `m`.
pub fn model_valid(m: &NeighbourhoodModel, f: &Formula) -> bool {
    truth_set(m, f) == m.frame.universe()
}

/// Lookup tables giving, for each subset S of W, the set of worlds whose
/// neighbourhood contains S. Makes a modal step a single array access.
#[derive(Clone, Debug)]
pub struct SetTables {
    pub n: usize,
    pub obl: Vec<u64>,
    pub perm: Vec<u64>,
}

/// Largest frame for which [`SetTables`] are built.
pub const MAX_TABLE_WORLDS: usize = 16;

impl SetTables {
    pub fn new(frame: &Frame) -> SetTables {
        let n = frame.size();
        assert!(
            n <= MAX_TABLE_WORLDS,
            "set tables need at most {MAX_TABLE_WORLDS} worlds"
        );
        let mut t = SetTables {
            n,
            obl: vec![0; 1 << n],
            perm: vec![0; 1 << n],
        };
        for w in 0..n {
            for s in frame.n_o[w].sets() {
                t.obl[s.0 as usize] |= 1 << w;
            }
            for s in frame.n_p[w].sets() {
                t.perm[s.0 as usize] |= 1 << w;
            }
        }
        t
    }

    pub fn full(&self) -> u64 {
        WorldSet::full(self.n).0
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
enum Op {
    Var(usize),
    Top,
    Bottom,
    Not,
    And,
    Or,
    Implies,
    Iff,
    Obl,
    PermS,
    PermW,
}

/// A formula compiled to postfix form over numbered variables, for repeated
/// evaluation on many frames or variable assignments.
#[derive(Clone, Debug)]
pub struct Compiled {
    ops: Vec<Op>,
    vars: Vec<String>,
}

impl Compiled {
    /// Variables are the formula's atoms in sorted order.
    pub fn new(f: &Formula) -> Compiled {
        let vars: Vec<String> = f.atoms().into_iter().collect();
        Compiled::with_vars(f, &vars)
    }

    /// Compiles with an explicit variable order; every atom of `f` must be listed.
    pub fn with_vars(f: &Formula, vars: &[String]) -> Compiled {
        let mut ops = Vec::new();
        fn go(f: &Formula, vars: &[String], ops: &mut Vec<Op>) {
            match f {
                Formula::Atom(a) => ops.push(Op::Var(
                    vars.iter()
                        .position(|v| v == a)
                        .expect("atom missing from variable list"),
                )),
                Formula::Top => ops.push(Op::Top),
                Formula::Bottom => ops.push(Op::Bottom),
                Formula::Not(x) => {
                    go(x, vars, ops);
                    ops.push(Op::Not)
                }
                Formula::Obl(x) => {
                    go(x, vars, ops);
                    ops.push(Op::Obl)
                }
                Formula::PermS(x) => {
                    go(x, vars, ops);
                    ops.push(Op::PermS)
                }
                Formula::PermW(x) => {
                    go(x, vars, ops);
                    ops.push(Op::PermW)
                }
                Formula::And(l, r)
                | Formula::Or(l, r)
                | Formula::Implies(l, r)
                | Formula::Iff(l, r) => {
                    go(l, vars, ops);
                    go(r, vars, ops);
                    ops.push(match f {
                        Formula::And(..) => Op::And,
                        Formula::Or(..) => Op::Or,
                        Formula::Implies(..) => Op::Implies,
                        _ => Op::Iff,
                    })
                }
            }
        }
        go(f, vars, &mut ops);
        Compiled {
            ops,
            vars: vars.to_vec(),
        }
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    /// Truth set under the given variable truth sets, one per variable.
    pub fn eval(&self, t: &SetTables, assignment: &[u64], stack: &mut Vec<u64>) -> u64 {
        let full = t.full();
        stack.clear();
        for op in &self.ops {
            let v = match op {
                Op::Var(i) => assignment[*i] & full,
                Op::Top => full,
                Op::Bottom => 0,
                Op::Not => !stack.pop().unwrap() & full,
                Op::Obl => t.obl[stack.pop().unwrap() as usize],
                Op::PermS => t.perm[stack.pop().unwrap() as usize],
                Op::PermW => !t.obl[(!stack.pop().unwrap() & full) as usize] & full,
                Op::And | Op::Or | Op::Implies | Op::Iff => {
                    let r = stack.pop().unwrap();
                    let l = stack.pop().unwrap();
                    match op {
                        Op::And => l & r,
                        Op::Or => l | r,
                        Op::Implies => (!l | r) & full,
                        _ => !(l ^ r) & full,
                    }
                }
            };
            stack.push(v);
        }
        stack.pop().unwrap()
    }
}
