use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::engine::{Engine, EngineError};
use crate::term::{Direction, Monomial, Term};
use crate::text::print_term;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivClass {
    /// The member with the least printed form.
    pub representative: Term,
    /// Members in order of their printed forms, without repeats.
    pub members: Vec<Term>,
}

/// Partitions `inventory` into ≡ₙ classes, ordered by representative.
pub fn classify(engine: &mut Engine, inventory: &[Term], n: u32) -> Result<Vec<EquivClass>, EngineError> {
    let mut by_theory: HashMap<_, BTreeMap<String, Term>> = HashMap::new();
    for t in inventory {
        let th = engine.theory(t, n)?;
        by_theory.entry(th).or_default().insert(print_term(t), t.clone());
    }
    let mut classes: Vec<(String, EquivClass)> = by_theory
        .into_values()
        .map(|members| {
            let (key, representative) = members
                .first_key_value()
                .map(|(k, v)| (k.clone(), v.clone()))
                .expect("nonempty class");
            (
                key,
                EquivClass {
                    representative,
                    members: members.into_values().collect(),
                },
            )
        })
        .collect();
    classes.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(classes.into_iter().map(|(_, c)| c).collect())
}

/// Every monomial with finite exponents summing to at most `max_exp_sum`,
/// starting in either direction.
pub fn monomial_inventory(max_exp_sum: u32) -> Vec<Term> {
    let mut out = Vec::new();
    for start in [Direction::Forward, Direction::Reverse] {
        for exps in compositions_up_to(max_exp_sum) {
            let m = Monomial::alternating(start, &exps).expect("positive exponents");
            out.push(m.to_term().expect("finite exponents"));
        }
    }
    out
}

/// Sequences of positive integers with sum in 1..=s.
pub fn compositions_up_to(s: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut stack = vec![Vec::new()];
    while let Some(cur) = stack.pop() {
        let used: u32 = cur.iter().sum();
        if !cur.is_empty() {
            out.push(cur.clone());
        }
        for e in 1..=s.saturating_sub(used) {
            let mut next = cur.clone();
            next.push(e);
            stack.push(next);
        }
    }
    out.sort();
    out
}
