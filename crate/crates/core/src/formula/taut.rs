//! Propositional tautology checking under modal abstraction.
//!
//! Each maximal modal subformula becomes a fresh propositional variable,
//! shared between syntactically identical occurrences. The resulting Boolean
//! formula is decided by Shannon expansion with constant folding.

use std::collections::BTreeMap;

use super::Formula;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Prop {
    Const(bool),
    Var(usize),
    Not(Box<Prop>),
    And(Box<Prop>, Box<Prop>),
    Or(Box<Prop>, Box<Prop>),
    Iff(Box<Prop>, Box<Prop>),
}

#[derive(Default)]
struct Abstraction {
    vars: BTreeMap<Formula, usize>,
}

impl Abstraction {
    fn var(&mut self, key: &Formula) -> Prop {
        let next = self.vars.len();
        Prop::Var(*self.vars.entry(key.clone()).or_insert(next))
    }

    fn lower(&mut self, f: &Formula) -> Prop {
        match f {
            Formula::Top => Prop::Const(true),
            Formula::Bottom => Prop::Const(false),
            Formula::Atom(_) | Formula::Obl(_) | Formula::PermS(_) | Formula::PermW(_) => {
                self.var(f)
            }
            Formula::Not(x) => Prop::Not(Box::new(self.lower(x))),
            Formula::And(l, r) => Prop::And(Box::new(self.lower(l)), Box::new(self.lower(r))),
            Formula::Or(l, r) => Prop::Or(Box::new(self.lower(l)), Box::new(self.lower(r))),
            Formula::Implies(l, r) => Prop::Or(
                Box::new(Prop::Not(Box::new(self.lower(l)))),
                Box::new(self.lower(r)),
            ),
            Formula::Iff(l, r) => Prop::Iff(Box::new(self.lower(l)), Box::new(self.lower(r))),
        }
    }
}

/// Fixes variable `v` to `value` and folds constants.
fn assign(p: &Prop, v: usize, value: bool) -> Prop {
    match p {
        Prop::Const(_) => p.clone(),
        Prop::Var(x) if *x == v => Prop::Const(value),
        Prop::Var(_) => p.clone(),
        Prop::Not(x) => match assign(x, v, value) {
            Prop::Const(b) => Prop::Const(!b),
            other => Prop::Not(Box::new(other)),
        },
        Prop::And(l, r) => match (assign(l, v, value), assign(r, v, value)) {
            (Prop::Const(false), _) | (_, Prop::Const(false)) => Prop::Const(false),
            (Prop::Const(true), x) | (x, Prop::Const(true)) => x,
            (a, b) => Prop::And(Box::new(a), Box::new(b)),
        },
        Prop::Or(l, r) => match (assign(l, v, value), assign(r, v, value)) {
            (Prop::Const(true), _) | (_, Prop::Const(true)) => Prop::Const(true),
            (Prop::Const(false), x) | (x, Prop::Const(false)) => x,
            (a, b) => Prop::Or(Box::new(a), Box::new(b)),
        },
        Prop::Iff(l, r) => match (assign(l, v, value), assign(r, v, value)) {
            (Prop::Const(a), Prop::Const(b)) => Prop::Const(a == b),
            (Prop::Const(true), x) | (x, Prop::Const(true)) => x,
            (Prop::Const(false), x) | (x, Prop::Const(false)) => match x {
                Prop::Not(inner) => *inner,
                other => Prop::Not(Box::new(other)),
            },
            (a, b) => Prop::Iff(Box::new(a), Box::new(b)),
        },
    }
}

fn first_var(p: &Prop) -> Option<usize> {
    match p {
        Prop::Const(_) => None,
        Prop::Var(v) => Some(*v),
        Prop::Not(x) => first_var(x),
        Prop::And(l, r) | Prop::Or(l, r) | Prop::Iff(l, r) => first_var(l).or_else(|| first_var(r)),
    }
}

fn valid(p: &Prop) -> bool {
    match p {
        Prop::Const(b) => *b,
        _ => {
            let v = first_var(p).expect("non-constant formula has a variable");
            valid(&assign(p, v, true)) && valid(&assign(p, v, false))
        }
    }
}

/// True iff `f` is a classical tautology once every maximal modal subformula
/// is read as a propositional variable.
pub fn is_tautology(f: &Formula) -> bool {
    let mut abs = Abstraction::default();
    let prop = abs.lower(f);
    // Assigning an unused variable just folds constants.
    valid(&assign(&prop, usize::MAX, false))
}

/// True iff the conjunction of `premises` tautologically implies `conclusion`.
pub fn tautological_consequence(premises: &[Formula], conclusion: &Formula) -> bool {
    let antecedent = Formula::conjunction(premises.iter().cloned());
    is_tautology(&Formula::implies(antecedent, conclusion.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;
    use crate::formula::render::tests::arb_formula;
    use proptest::prelude::*;

    fn t(s: &str) -> bool {
        is_tautology(&parse(s).unwrap())
    }

    #[test]
    fn examples() {
        assert!(t("(Ps(p|q) & (Ps p & Ps q)) -> (Ps p & Ps q)"));
        assert!(t("p | ~p"));
        assert!(!t("O p -> O q"));
        assert!(t("T"));
        assert!(!t("F"));
        assert!(t("F -> p"));
        assert!(t("O(p | q) <-> O(p | q)"));
        assert!(!t("O(p | q) <-> O(q | p)"));
        assert!(t("((p -> q) -> p) -> p"));
        assert!(!t("Pw p <-> ~O~p"));
    }

    #[test]
    fn consequence_examples() {
        let f = |s: &str| parse(s).unwrap();
        assert!(tautological_consequence(
            &[f("Ps(p|q)"), f("O ~p"), f("Ps(p|q) & O ~p -> Ps q")],
            &f("Ps q")
        ));
        assert!(tautological_consequence(&[], &f("p -> p")));
        assert!(!tautological_consequence(&[f("O p")], &f("O q")));
        assert!(tautological_consequence(&[f("F")], &f("O q")));
    }

    // Independent oracle: explicit truth table over the abstracted variables.
    fn oracle(f: &Formula) -> Option<bool> {
        let mut keys = Vec::new();
        fn collect(f: &Formula, keys: &mut Vec<Formula>) {
            match f {
                Formula::Atom(_) | Formula::Obl(_) | Formula::PermS(_) | Formula::PermW(_) => {
                    if !keys.contains(f) {
                        keys.push(f.clone())
                    }
                }
                Formula::Top | Formula::Bottom => {}
                Formula::Not(x) => collect(x, keys),
                Formula::And(l, r)
                | Formula::Or(l, r)
                | Formula::Implies(l, r)
                | Formula::Iff(l, r) => {
                    collect(l, keys);
                    collect(r, keys)
                }
            }
        }
        fn ev(f: &Formula, keys: &[Formula], bits: u32) -> bool {
            match f {
                Formula::Top => true,
                Formula::Bottom => false,
                Formula::Not(x) => !ev(x, keys, bits),
                Formula::And(l, r) => ev(l, keys, bits) && ev(r, keys, bits),
                Formula::Or(l, r) => ev(l, keys, bits) || ev(r, keys, bits),
                Formula::Implies(l, r) => !ev(l, keys, bits) || ev(r, keys, bits),
                Formula::Iff(l, r) => ev(l, keys, bits) == ev(r, keys, bits),
                leaf => bits >> keys.iter().position(|k| k == leaf).unwrap() & 1 == 1,
            }
        }
        collect(f, &mut keys);
        if keys.len() > 16 {
            return None;
        }
        Some((0..1u32 << keys.len()).all(|bits| ev(f, &keys, bits)))
    }

    fn rename_modal(f: &Formula) -> Formula {
        // Uniform renaming of modal subformulas: wrap each maximal one in an
        // extra Ps layer. Identical subformulas stay identical, distinct stay distinct.
        match f {
            Formula::Obl(_) | Formula::PermS(_) | Formula::PermW(_) => Formula::perm_s(f.clone()),
            Formula::Atom(_) | Formula::Top | Formula::Bottom => f.clone(),
            Formula::Not(x) => Formula::not(rename_modal(x)),
            Formula::And(l, r) => Formula::and(rename_modal(l), rename_modal(r)),
            Formula::Or(l, r) => Formula::or(rename_modal(l), rename_modal(r)),
            Formula::Implies(l, r) => Formula::implies(rename_modal(l), rename_modal(r)),
            Formula::Iff(l, r) => Formula::iff(rename_modal(l), rename_modal(r)),
        }
    }

    proptest! {
        #[test]
        fn agrees_with_truth_table(f in arb_formula(5)) {
            let expected = oracle(&f);
            prop_assume!(expected.is_some());
            prop_assert_eq!(Some(is_tautology(&f)), expected);
        }

        #[test]
        fn agrees_on_excluded_middle_shapes(f in arb_formula(4), g in arb_formula(4)) {
            let e = Formula::or(f.clone(), Formula::not(f.clone()));
            prop_assert!(is_tautology(&e));
            let h = Formula::implies(Formula::and(f.clone(), g.clone()), g);
            prop_assert!(is_tautology(&h));
        }

        #[test]
        fn invariant_under_modal_renaming(f in arb_formula(5)) {
            prop_assert_eq!(is_tautology(&f), is_tautology(&rename_modal(&f)));
        }
    }
}
