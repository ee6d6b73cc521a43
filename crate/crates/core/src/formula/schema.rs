use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use super::{parse, Formula, ParseError};

/// Metavariable names used by the built-in schemata.
pub const DEFAULT_METAVARIABLES: [&str; 4] = ["p", "q", "r", "s"];

/// Assignment of formulas to metavariables.
pub type Substitution = BTreeMap<String, Formula>;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SchemaError {
    #[error("no binding for metavariable `{0}`")]
    MissingBinding(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// A formula pattern whose metavariables range over arbitrary formulas.
/// Atoms of the body that are not declared metavariables are concrete.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Schema {
    pub name: String,
    pub body: Formula,
    pub metavariables: BTreeSet<String>,
}

impl Schema {
    /// Treats the atoms `p`, `q`, `r`, `s` occurring in `body` as metavariables.
    pub fn new(name: impl Into<String>, body: Formula) -> Schema {
        let metavariables = body
            .atoms()
            .into_iter()
            .filter(|a| DEFAULT_METAVARIABLES.contains(&a.as_str()))
            .collect();
        Schema {
            name: name.into(),
            body,
            metavariables,
        }
    }

    pub fn with_metavariables<I, S>(
        name: impl Into<String>,
        body: Formula,
        metavariables: I,
    ) -> Schema
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Schema {
            name: name.into(),
            body,
            metavariables: metavariables.into_iter().map(Into::into).collect(),
        }
    }

    pub fn parse(name: impl Into<String>, text: &str) -> Result<Schema, SchemaError> {
        Ok(Schema::new(name, parse(text)?))
    }

    /// Atoms of the body that are not metavariables.
    pub fn concrete_atoms(&self) -> BTreeSet<String> {
        self.body
            .atoms()
            .into_iter()
            .filter(|a| !self.metavariables.contains(a))
            .collect()
    }

    /// Metavariables in a fixed (sorted) order.
    pub fn metavariable_list(&self) -> Vec<String> {
        self.metavariables.iter().cloned().collect()
    }
}

/// Finds σ with `instantiate(schema, σ) == f`, matching purely on syntax.
pub fn match_schema(schema: &Schema, f: &Formula) -> Option<Substitution> {
    let mut sigma = Substitution::new();
    if matches(&schema.metavariables, &schema.body, f, &mut sigma) {
        Some(sigma)
    } else {
        None
    }
}

fn matches(
    vars: &BTreeSet<String>,
    pattern: &Formula,
    f: &Formula,
    sigma: &mut Substitution,
) -> bool {
    use Formula::*;
    match (pattern, f) {
        (Atom(v), _) if vars.contains(v) => match sigma.get(v) {
            Some(bound) => bound == f,
            None => {
                sigma.insert(v.clone(), f.clone());
                true
            }
        },
        (Atom(a), Atom(b)) => a == b,
        (Top, Top) | (Bottom, Bottom) => true,
        (Not(x), Not(y)) | (Obl(x), Obl(y)) | (PermS(x), PermS(y)) | (PermW(x), PermW(y)) => {
            matches(vars, x, y, sigma)
        }
        (And(a, b), And(c, d))
        | (Or(a, b), Or(c, d))
        | (Implies(a, b), Implies(c, d))
        | (Iff(a, b), Iff(c, d)) => matches(vars, a, c, sigma) && matches(vars, b, d, sigma),
        _ => false,
    }
}

/// Replaces every metavariable of the schema by its binding.
pub fn instantiate(schema: &Schema, sigma: &Substitution) -> Result<Formula, SchemaError> {
    if let Some(missing) = schema
        .metavariables
        .iter()
        .find(|v| !sigma.contains_key(*v))
    {
        return Err(SchemaError::MissingBinding(missing.clone()));
    }
    Ok(substitute(&schema.body, &schema.metavariables, sigma))
}

fn substitute(f: &Formula, vars: &BTreeSet<String>, sigma: &Substitution) -> Formula {
    match f {
        Formula::Atom(v) if vars.contains(v) => sigma[v].clone(),
        _ => match f {
            Formula::Atom(_) | Formula::Top | Formula::Bottom => f.clone(),
            Formula::Not(x) => Formula::not(substitute(x, vars, sigma)),
            Formula::Obl(x) => Formula::obl(substitute(x, vars, sigma)),
            Formula::PermS(x) => Formula::perm_s(substitute(x, vars, sigma)),
            Formula::PermW(x) => Formula::perm_w(substitute(x, vars, sigma)),
            Formula::And(l, r) => {
                Formula::and(substitute(l, vars, sigma), substitute(r, vars, sigma))
            }
            Formula::Or(l, r) => {
                Formula::or(substitute(l, vars, sigma), substitute(r, vars, sigma))
            }
            Formula::Implies(l, r) => {
                Formula::implies(substitute(l, vars, sigma), substitute(r, vars, sigma))
            }
            Formula::Iff(l, r) => {
                Formula::iff(substitute(l, vars, sigma), substitute(r, vars, sigma))
            }
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::render::tests::arb_formula;
    use proptest::prelude::*;

    fn f(s: &str) -> Formula {
        parse(s).unwrap()
    }

    fn sigma(pairs: &[(&str, &str)]) -> Substitution {
        pairs.iter().map(|(k, v)| (k.to_string(), f(v))).collect()
    }

    #[test]
    fn matches_distribution() {
        let m = Schema::parse("M_O", "O(p & q) -> O p & O q").unwrap();
        assert_eq!(
            match_schema(&m, &f("O(a & b) -> O a & O b")),
            Some(sigma(&[("p", "a"), ("q", "b")]))
        );
        assert_eq!(match_schema(&m, &f("O a -> O a")), None);
    }

    #[test]
    fn matches_guarded_detachment() {
        let afcp_o = Schema::parse("AFCP_O", "Ps(p | q) & O ~p -> Ps q").unwrap();
        assert_eq!(
            match_schema(
                &afcp_o,
                &f("(Ps(refund | exchange) & O ~refund) -> Ps exchange")
            ),
            Some(sigma(&[("p", "refund"), ("q", "exchange")]))
        );
    }

    #[test]
    fn inconsistent_binding_rejected() {
        let afcp_o = Schema::parse("AFCP_O", "Ps(p | q) & O ~p -> Ps q").unwrap();
        assert_eq!(match_schema(&afcp_o, &f("Ps(a | b) & O ~c -> Ps b")), None);
    }

    #[test]
    fn instantiation_examples() {
        let d_s = Schema::parse("D_s", "O p & Ps ~p -> F").unwrap();
        assert_eq!(
            instantiate(&d_s, &sigma(&[("p", "e")])).unwrap(),
            f("O e & Ps ~e -> F")
        );
        let closed = Schema::parse("closed", "O T -> Ps T").unwrap();
        assert!(closed.metavariables.is_empty());
        assert_eq!(
            instantiate(&closed, &Substitution::new()).unwrap(),
            closed.body
        );
        let afcp_p = Schema::parse("AFCP_P", "Ps(p | q) & Pw p & Pw q -> Ps p & Ps q").unwrap();
        assert_eq!(
            instantiate(&afcp_p, &sigma(&[("p", "a"), ("q", "c")])).unwrap(),
            f("(Ps(a|c) & Pw a & Pw c) -> Ps a & Ps c")
        );
    }

    #[test]
    fn missing_binding() {
        let m = Schema::parse("M_O", "O(p & q) -> O p & O q").unwrap();
        assert_eq!(
            instantiate(&m, &sigma(&[("p", "a")])),
            Err(SchemaError::MissingBinding("q".into()))
        );
    }

    #[test]
    fn concrete_atoms_are_literal() {
        let s = Schema::parse("mixed", "O p -> O e").unwrap();
        assert_eq!(
            s.concrete_atoms().into_iter().collect::<Vec<_>>(),
            vec!["e"]
        );
        assert!(match_schema(&s, &f("O x -> O e")).is_some());
        assert!(match_schema(&s, &f("O x -> O g")).is_none());
    }

    proptest! {
        #[test]
        fn match_then_instantiate_is_identity(
            a in arb_formula(3), b in arb_formula(3), c in arb_formula(3)
        ) {
            let schema = Schema::parse("AFCP_P", "Ps(p | q) & Pw p & Pw q -> Ps p & Ps q").unwrap();
            let target = instantiate(&schema, &[("p".to_string(), a), ("q".to_string(), b)].into_iter().collect()).unwrap();
            let found = match_schema(&schema, &target).expect("instance must match");
            prop_assert_eq!(instantiate(&schema, &found).unwrap(), target);
            if let Some(sigma) = match_schema(&schema, &c) {
                prop_assert_eq!(instantiate(&schema, &sigma).unwrap(), c);
            }
        }
    }
}
