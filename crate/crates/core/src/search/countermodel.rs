//! Bounded enumeration of finite neighbourhood models.
//!
//! For each world count the search walks frames in lexicographic order of
//! their per-world `(N_O(w), N_P(w))` pairs, and for formula targets the
//! valuations of each frame. Because every frame property is world-local,
//! required properties are applied to the candidate pairs once per world
//! count, before any frame is built. Up to four worlds only one model per
//! isomorphism class (under world permutations) is examined.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::time::{Duration, Instant};

use serde::Serialize;
use thiserror::Error;

use crate::formula::{expand_pw, instantiate, is_tautology, Formula, Schema, Substitution};
use crate::frames::{
    check_property, rule_valid_on_frame, schema_valid_on_frame, world_satisfies, FrameError,
    FrameProperty, ValidityCheck,
};
use crate::inventory::RuleSchema;
use crate::model::{
    eval, model_valid, BoxOp, Compiled, Frame, Neighbourhood, NeighbourhoodModel, SetTables,
    WorldSet,
};

/// Default hard cap on `max_worlds`.
pub const MAX_SEARCH_WORLDS: usize = 5;

/// Largest world count with isomorphism pruning.
pub const CANONICAL_LIMIT: usize = 4;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchBounds {
    pub max_worlds: usize,
    pub max_sets: usize,
    pub atoms: Vec<String>,
}

impl SearchBounds {
    pub fn new<S: Into<String>>(
        max_worlds: usize,
        max_sets: usize,
        atoms: impl IntoIterator<Item = S>,
    ) -> SearchBounds {
        SearchBounds {
            max_worlds,
            max_sets,
            atoms: atoms.into_iter().map(Into::into).collect(),
        }
    }
}

/// What the search tries to falsify.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Target {
    /// A formula over the bound atoms, falsified at some world.
    Formula(Formula),
    /// A schema, falsified by some assignment of truth sets to its
    /// metavariables.
    Schema(Schema),
    /// A rule, falsified by an assignment under which the side conditions
    /// hold everywhere but main premise → conclusion fails somewhere.
    Rule(RuleSchema),
}

impl Target {
    fn metavariables(&self) -> Vec<String> {
        match self {
            Target::Formula(_) => vec![],
            Target::Schema(s) => s.metavariable_list(),
            Target::Rule(r) => r.metavariables(),
        }
    }

    /// The target with metavariables renamed to the bound atoms in order.
    fn instance(&self, atoms: &[String]) -> (Vec<Formula>, Formula) {
        let rename = |vars: Vec<String>| -> Substitution {
            vars.into_iter()
                .zip(atoms.iter())
                .map(|(v, a)| (v, Formula::atom(a.clone())))
                .collect()
        };
        match self {
            Target::Formula(f) => (vec![], f.clone()),
            Target::Schema(s) => {
                let sigma = rename(s.metavariable_list());
                (vec![], instantiate(s, &sigma).expect("renaming is total"))
            }
            Target::Rule(r) => {
                let sigma = rename(r.metavariables());
                let schema = |f: &Formula| {
                    let s = Schema::with_metavariables("rule", f.clone(), r.metavariables());
                    instantiate(&s, &sigma).expect("renaming is total")
                };
                (
                    r.sides.iter().map(schema).collect(),
                    schema(&r.local_implication()),
                )
            }
        }
    }

    /// Whether no model can falsify the target.
    fn trivially_valid(&self) -> bool {
        match self {
            Target::Formula(f) => is_tautology(&expand_pw(f)),
            Target::Schema(s) => is_tautology(&expand_pw(&s.body)),
            Target::Rule(r) => is_tautology(&expand_pw(&r.local_implication())),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SearchError {
    #[error("max_worlds must be between 1 and {cap}, got {got}")]
    WorldBound { got: usize, cap: usize },
    #[error("the target mentions atoms {0:?} that are not in the atom list")]
    MissingAtoms(Vec<String>),
    #[error("the target has {needed} metavariables but only {given} atoms were given")]
    TooFewAtoms { needed: usize, given: usize },
    #[error("duplicate atom `{0}`")]
    DuplicateAtom(String),
    #[error(transparent)]
    Frame(#[from] FrameError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    /// Models (frame plus valuation, or frame for schema targets) evaluated.
    pub models_examined: u64,
    /// Frames skipped because a world fails a required property.
    pub pruned_by_property: u128,
    /// Models skipped as isomorphic to an earlier one.
    pub pruned_isomorphic: u64,
    /// Whether the target was recognised as a tautology without searching.
    pub tautology_shortcut: bool,
    pub elapsed_ms: u128,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum Outcome {
    Found {
        model: NeighbourhoodModel,
        world: String,
        /// The falsified formula, with metavariables renamed to atoms.
        falsified: String,
        /// Side conditions valid in the model, for rule targets.
        sides: Vec<String>,
    },
    ExhaustedUpToBounds,
    TimedOut,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CountermodelReport {
    pub outcome: Outcome,
    pub stats: SearchStats,
}

impl CountermodelReport {
    pub fn is_found(&self) -> bool {
        matches!(self.outcome, Outcome::Found { .. })
    }
}

type Collection = Vec<u64>;

/// Candidate neighbourhoods: every collection of at most `k` subsets of an
/// `n`-world universe, or for supplemented operators every superset closure
/// of such a collection. Sorted lexicographically.
fn collections(n: usize, k: usize, supplemented: bool) -> Vec<Collection> {
    let subsets: Vec<u64> = (0..1u64 << n).collect();
    let mut out = BTreeSet::new();
    let mut cur = Vec::new();
    fn choose(
        subsets: &[u64],
        start: usize,
        k: usize,
        cur: &mut Vec<u64>,
        out: &mut BTreeSet<Collection>,
        n: usize,
        sup: bool,
    ) {
        let coll = if sup {
            let full = (1u64 << n) - 1;
            (0..=full)
                .filter(|&t| cur.iter().any(|&s| t | s == t))
                .collect()
        } else {
            cur.clone()
        };
        out.insert(coll);
        if cur.len() == k {
            return;
        }
        for i in start..subsets.len() {
            cur.push(subsets[i]);
            choose(subsets, i + 1, k, cur, out, n, sup);
            cur.pop();
        }
    }
    choose(&subsets, 0, k, &mut cur, &mut out, n, supplemented);
    out.into_iter().collect()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    fn heap(k: usize, p: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k <= 1 {
            out.push(p.clone());
            return;
        }
        for i in 0..k {
            heap(k - 1, p, out);
            let j = if k.is_multiple_of(2) { i } else { 0 };
            p.swap(j, k - 1);
        }
    }
    heap(n, &mut p, &mut out);
    out.sort();
    out
}

fn permute_set(perm: &[usize], s: u64) -> u64 {
    perm.iter()
        .enumerate()
        .filter(|(w, _)| s >> w & 1 == 1)
        .fold(0, |acc, (_, &to)| acc | 1 << to)
}

/// Everything the enumeration needs for one world count.
struct Level {
    n: usize,
    o_colls: Vec<Collection>,
    p_colls: Vec<Collection>,
    /// Admissible `(N_O, N_P)` index pairs, sorted.
    pairs: Vec<(usize, usize)>,
    /// Non-identity permutations with their action on sets and collections.
    perms: Vec<Permutation>,
}

struct Permutation {
    sets: Vec<u64>,
    o_img: Vec<usize>,
    p_img: Vec<usize>,
}

impl Level {
    fn new(n: usize, k: usize, required: &BTreeSet<FrameProperty>) -> Level {
        let o_colls = collections(n, k, required.contains(&FrameProperty::OSupplemented));
        let p_colls = collections(n, k, required.contains(&FrameProperty::PSupplemented));
        let mut probe = Frame::with_size(n);
        let mut pairs = Vec::new();
        for (i, o) in o_colls.iter().enumerate() {
            *probe.nbhd_mut(BoxOp::Obl, 0) = Neighbourhood::new(o.iter().map(|&s| WorldSet(s)));
            for (j, p) in p_colls.iter().enumerate() {
                *probe.nbhd_mut(BoxOp::PermS, 0) =
                    Neighbourhood::new(p.iter().map(|&s| WorldSet(s)));
                if required
                    .iter()
                    .all(|&prop| world_satisfies(&probe, prop, 0))
                {
                    pairs.push((i, j));
                }
            }
        }
        let perms = if n <= CANONICAL_LIMIT {
            let index = |colls: &[Collection]| -> HashMap<Collection, usize> {
                colls
                    .iter()
                    .cloned()
                    .enumerate()
                    .map(|(i, c)| (c, i))
                    .collect()
            };
            let (o_idx, p_idx) = (index(&o_colls), index(&p_colls));
            let image = |perm: &[usize],
                         colls: &[Collection],
                         idx: &HashMap<Collection, usize>|
             -> Vec<usize> {
                colls
                    .iter()
                    .map(|c| {
                        let mut m: Collection = c.iter().map(|&s| permute_set(perm, s)).collect();
                        m.sort_unstable();
                        idx[&m]
                    })
                    .collect()
            };
            permutations(n)
                .into_iter()
                .skip(1)
                .map(|perm| Permutation {
                    sets: (0..1u64 << n).map(|s| permute_set(&perm, s)).collect(),
                    o_img: image(&perm, &o_colls, &o_idx),
                    p_img: image(&perm, &p_colls, &p_idx),
                })
                .collect()
        } else {
            Vec::new()
        };
        Level {
            n,
            o_colls,
            p_colls,
            pairs,
            perms,
        }
    }

    fn total_pairs(&self) -> usize {
        self.o_colls.len() * self.p_colls.len()
    }

    fn frame(&self, choice: &[usize]) -> Frame {
        let mut f = Frame::with_size(self.n);
        for (w, &c) in choice.iter().enumerate() {
            let (o, p) = self.pairs[c];
            *f.nbhd_mut(BoxOp::Obl, w) =
                Neighbourhood::new(self.o_colls[o].iter().map(|&s| WorldSet(s)));
            *f.nbhd_mut(BoxOp::PermS, w) =
                Neighbourhood::new(self.p_colls[p].iter().map(|&s| WorldSet(s)));
        }
        f
    }

    /// `None` if some permutation gives a smaller frame; otherwise the
    /// permutations fixing the frame.
    fn stabilizer(&self, choice: &[usize]) -> Option<Vec<&Permutation>> {
        let mut stab = Vec::new();
        let current: Vec<(usize, usize)> = choice.iter().map(|&c| self.pairs[c]).collect();
        let mut permuted = vec![(0, 0); self.n];
        for perm in &self.perms {
            for (w, &(o, p)) in current.iter().enumerate() {
                let to = perm.sets[1 << w].trailing_zeros() as usize;
                permuted[to] = (perm.o_img[o], perm.p_img[p]);
            }
            match permuted.cmp(&current) {
                std::cmp::Ordering::Less => return None,
                std::cmp::Ordering::Equal => stab.push(perm),
                std::cmp::Ordering::Greater => {}
            }
        }
        Some(stab)
    }
}

/// Advances an odometer whose first digit is most significant.
fn advance<T>(digits: &mut [T], base: T) -> bool
where
    T: Copy + PartialOrd + std::ops::AddAssign + From<u8>,
{
    for d in digits.iter_mut().rev() {
        *d += T::from(1);
        if *d < base {
            return true;
        }
        *d = T::from(0);
    }
    false
}

fn model_of(frame: Frame, atoms: &[String], sets: &[u64]) -> NeighbourhoodModel {
    let valuation: BTreeMap<String, WorldSet> = atoms
        .iter()
        .cloned()
        .zip(sets.iter().map(|&s| WorldSet(s)))
        .collect();
    NeighbourhoodModel::new(frame, valuation)
}

/// Truth sets of a violating assignment, reordered to follow `vars`.
fn violation(v: ValidityCheck, vars: &[String]) -> Option<(usize, Vec<u64>)> {
    match v {
        ValidityCheck::Valid => None,
        ValidityCheck::Violated { world, assignment } => {
            let by_name: BTreeMap<String, u64> =
                assignment.into_iter().map(|(k, s)| (k, s.0)).collect();
            Some((
                world,
                vars.iter()
                    .map(|v| by_name.get(v).copied().unwrap_or(0))
                    .collect(),
            ))
        }
    }
}

/// Searches for a model in the class given by `required` that falsifies
/// `target`, within `bounds`. Stops early when `timeout` elapses.
pub fn find_countermodel(
    target: &Target,
    required: &BTreeSet<FrameProperty>,
    bounds: &SearchBounds,
    timeout: Option<Duration>,
) -> Result<CountermodelReport, SearchError> {
    let start = Instant::now();
    if bounds.max_worlds == 0 || bounds.max_worlds > MAX_SEARCH_WORLDS {
        return Err(SearchError::WorldBound {
            got: bounds.max_worlds,
            cap: MAX_SEARCH_WORLDS,
        });
    }
    let mut seen = BTreeSet::new();
    for a in &bounds.atoms {
        if !seen.insert(a) {
            return Err(SearchError::DuplicateAtom(a.clone()));
        }
    }
    match target {
        Target::Formula(f) => {
            let missing: Vec<String> = f
                .atoms()
                .into_iter()
                .filter(|a| !bounds.atoms.contains(a))
                .collect();
            if !missing.is_empty() {
                return Err(SearchError::MissingAtoms(missing));
            }
        }
        _ => {
            let needed = target.metavariables().len();
            if needed > bounds.atoms.len() {
                return Err(SearchError::TooFewAtoms {
                    needed,
                    given: bounds.atoms.len(),
                });
            }
        }
    }
    let mut stats = SearchStats {
        models_examined: 0,
        pruned_by_property: 0,
        pruned_isomorphic: 0,
        tautology_shortcut: false,
        elapsed_ms: 0,
    };
    if target.trivially_valid() {
        stats.tautology_shortcut = true;
        stats.elapsed_ms = start.elapsed().as_millis();
        return Ok(CountermodelReport {
            outcome: Outcome::ExhaustedUpToBounds,
            stats,
        });
    }
    let (inst_sides, inst_body) = target.instance(&bounds.atoms);
    let metavars = target.metavariables();
    let compiled = match target {
        Target::Formula(f) => Some(Compiled::with_vars(f, &bounds.atoms)),
        _ => None,
    };
    let mut stack = Vec::new();
    let mut ticks: u32 = 0;
    for n in 1..=bounds.max_worlds {
        let level = Level::new(n, bounds.max_sets, required);
        let all = (level.total_pairs() as u128).saturating_pow(n as u32);
        let admissible = (level.pairs.len() as u128).saturating_pow(n as u32);
        stats.pruned_by_property += all - admissible;
        if level.pairs.is_empty() {
            continue;
        }
        let mut choice = vec![0usize; n];
        loop {
            ticks = ticks.wrapping_add(1);
            if ticks.is_multiple_of(256) && timeout.is_some_and(|t| start.elapsed() > t) {
                stats.elapsed_ms = start.elapsed().as_millis();
                return Ok(CountermodelReport {
                    outcome: Outcome::TimedOut,
                    stats,
                });
            }
            if let Some(stab) = level.stabilizer(&choice) {
                let frame = level.frame(&choice);
                let found = match (&compiled, target) {
                    (Some(c), _) => {
                        let tables = SetTables::new(&frame);
                        let full = tables.full();
                        let mut val = vec![0u64; bounds.atoms.len()];
                        let mut hit = None;
                        loop {
                            let canonical = stab.iter().all(|perm| {
                                let moved: Vec<u64> =
                                    val.iter().map(|&s| perm.sets[s as usize]).collect();
                                moved >= val
                            });
                            if canonical {
                                stats.models_examined += 1;
                                let truth = c.eval(&tables, &val, &mut stack);
                                if truth != full {
                                    hit = Some((
                                        (!truth & full).trailing_zeros() as usize,
                                        val.clone(),
                                    ));
                                    break;
                                }
                            } else {
                                stats.pruned_isomorphic += 1;
                            }
                            if !advance(&mut val, 1u64 << n) {
                                break;
                            }
                        }
                        hit
                    }
                    (None, Target::Schema(s)) => {
                        stats.models_examined += 1;
                        violation(schema_valid_on_frame(&frame, s)?, &metavars)
                    }
                    (None, Target::Rule(r)) => {
                        stats.models_examined += 1;
                        violation(rule_valid_on_frame(&frame, r)?, &metavars)
                    }
                    (None, Target::Formula(_)) => unreachable!("formula targets are compiled"),
                };
                if let Some((world, sets)) = found {
                    let model = model_of(frame, &bounds.atoms, &sets);
                    stats.elapsed_ms = start.elapsed().as_millis();
                    return Ok(CountermodelReport {
                        outcome: Outcome::Found {
                            world: model.frame.worlds[world].clone(),
                            model,
                            falsified: inst_body.to_string(),
                            sides: inst_sides.iter().map(|s| s.to_string()).collect(),
                        },
                        stats,
                    });
                }
            } else {
                stats.pruned_isomorphic += 1;
            }
            if !advance(&mut choice, level.pairs.len()) {
                break;
            }
        }
    }
    stats.elapsed_ms = start.elapsed().as_millis();
    Ok(CountermodelReport {
        outcome: Outcome::ExhaustedUpToBounds,
        stats,
    })
}

/// Independently confirms a found countermodel: the falsified formula is
/// false at the world, rule side conditions hold everywhere, and the frame
/// has every required property.
pub fn verify_found(report: &CountermodelReport, required: &BTreeSet<FrameProperty>) -> bool {
    let Outcome::Found {
        model,
        world,
        falsified,
        sides,
    } = &report.outcome
    else {
        return false;
    };
    let parse = |t: &str| crate::formula::parse(t).ok();
    let Some(body) = parse(falsified) else {
        return false;
    };
    if eval(model, world, &body) != Ok(false) {
        return false;
    }
    for s in sides {
        match parse(s) {
            Some(f) if model_valid(model, &f) => {}
            _ => return false,
        }
    }
    required
        .iter()
        .all(|&p| matches!(check_property(&model.frame, p), Ok(c) if c.is_satisfied()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;
    use crate::inventory::{AxiomName, RuleName};

    fn props(ps: &[FrameProperty]) -> BTreeSet<FrameProperty> {
        ps.iter().copied().collect()
    }

    #[test]
    fn collections_counts() {
        // 1 + 4 + 6 collections of at most two subsets of a 2-set universe.
        assert_eq!(collections(2, 2, false).len(), 11);
        assert_eq!(collections(2, 1, false).len(), 5);
        // Upward closures: the empty family plus one per nonempty antichain.
        assert_eq!(collections(1, 2, true).len(), 3);
        assert_eq!(permutations(3).len(), 6);
    }

    #[test]
    fn tautology_is_never_falsified() {
        let r = find_countermodel(
            &Target::Formula(parse("p -> p").unwrap()),
            &BTreeSet::new(),
            &SearchBounds::new(5, 2, ["p"]),
            None,
        )
        .unwrap();
        assert_eq!(r.outcome, Outcome::ExhaustedUpToBounds);
        assert!(r.stats.tautology_shortcut);
    }

    #[test]
    fn finds_m_countermodel() {
        let r = find_countermodel(
            &Target::Schema(AxiomName::MO.schema()),
            &BTreeSet::new(),
            &SearchBounds::new(5, 2, ["a", "b"]),
            None,
        )
        .unwrap();
        assert!(r.is_found());
        assert!(verify_found(&r, &BTreeSet::new()));
        let Outcome::Found { model, .. } = &r.outcome else {
            panic!()
        };
        assert!(!check_property(&model.frame, FrameProperty::OSupplemented)
            .unwrap()
            .is_satisfied());
    }

    #[test]
    fn separates_fcp2_from_fcp1() {
        let required = props(&[FrameProperty::AFCPO]);
        let r = find_countermodel(
            &Target::Rule(RuleName::IfcpO.schema().unwrap()),
            &required,
            &SearchBounds::new(5, 2, ["a", "b", "c"]),
            None,
        )
        .unwrap();
        assert!(r.is_found());
        assert!(verify_found(&r, &required));
    }

    #[test]
    fn formula_countermodels_reverify() {
        let required = props(&[FrameProperty::PsCoherent, FrameProperty::PwCoherent]);
        for (text, atoms) in [
            ("O a -> Ps a", vec!["a"]),
            ("Ps(a | b) -> Ps a", vec!["a", "b"]),
            ("O a | ~O a & a", vec!["a"]),
        ] {
            let r = find_countermodel(
                &Target::Formula(parse(text).unwrap()),
                &required,
                &SearchBounds::new(3, 2, atoms),
                None,
            )
            .unwrap();
            assert!(r.is_found(), "{text}");
            assert!(verify_found(&r, &required), "{text}");
        }
    }

    #[test]
    fn valid_in_class_exhausts() {
        // D_s holds on Ps-coherent frames.
        let required = props(&[FrameProperty::PsCoherent]);
        let r = find_countermodel(
            &Target::Formula(parse("~(O a & Ps ~a)").unwrap()),
            &required,
            &SearchBounds::new(2, 2, ["a"]),
            None,
        )
        .unwrap();
        assert_eq!(r.outcome, Outcome::ExhaustedUpToBounds);
        assert!(r.stats.models_examined > 0);
    }

    #[test]
    fn bound_errors() {
        let t = Target::Formula(parse("O a").unwrap());
        let none = BTreeSet::new();
        assert!(matches!(
            find_countermodel(&t, &none, &SearchBounds::new(6, 1, ["a"]), None),
            Err(SearchError::WorldBound { .. })
        ));
        assert!(matches!(
            find_countermodel(
                &t,
                &none,
                &SearchBounds::new(2, 1, Vec::<String>::new()),
                None
            ),
            Err(SearchError::MissingAtoms(_))
        ));
        let s = Target::Rule(RuleName::IfcpP.schema().unwrap());
        assert!(matches!(
            find_countermodel(&s, &none, &SearchBounds::new(2, 1, ["a"]), None),
            Err(SearchError::TooFewAtoms { .. })
        ));
    }

    #[test]
    fn timeout_reports() {
        let r = find_countermodel(
            &Target::Formula(parse("O a <-> O ~~a").unwrap()),
            &BTreeSet::new(),
            &SearchBounds::new(5, 2, ["a"]),
            Some(Duration::from_millis(50)),
        )
        .unwrap();
        assert_eq!(r.outcome, Outcome::TimedOut);
    }
}
