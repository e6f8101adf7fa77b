//! Closed-form predictions of l(A, B) for ordinals, monomials and a few
//! families of sums.
//!
//! Every predictor checks its own hypotheses and answers `OutOfScope`
//! rather than guess.

mod monomials;
mod ordinals;
mod sums;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::term::{normalize, Monomial, OrdinalForm, Term};

pub use monomials::{predict_monomial, simple_form};
pub use ordinals::predict_ordinal;
pub use sums::{
    discrete_block_family, predict_special_sum, predict_two_term_sum, recognise_discrete_block_family, SpecialSum,
};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Relation {
    EquivalentElementarily,
    /// l(A, B) exactly.
    OptimalLength(u32),
    /// A ≢_b B. `None` when the orders are known to be inequivalent but no
    /// level is available.
    InequivalentAtMost(Option<u32>),
    OutOfScope(String),
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Relation::EquivalentElementarily => f.write_str("elementarily equivalent"),
            Relation::OptimalLength(n) => write!(f, "optimal length {n}"),
            Relation::InequivalentAtMost(Some(b)) => write!(f, "inequivalent at depth {b}"),
            Relation::InequivalentAtMost(None) => f.write_str("inequivalent at some finite depth"),
            Relation::OutOfScope(r) => write!(f, "out of scope: {r}"),
        }
    }
}

/// The rule a verdict comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Source {
    OrdinalClassification,
    PowerTimesOrdinal,
    OrdinalNormalFormBound,
    TwoPhaseLift,
    OppositeStartMonomials,
    EqualLengthMonomials,
    UnequalLengthMonomials,
    IdenticalMonomials,
    OmegaExponentSimpleForm,
    TwoTermSum,
    TwoTermSumException,
    SpecialOmegaSum,
    AlternatingCollapse,
    OrdinalAgainstReversedTail,
    DiscreteBlockFamily,
    None,
}

impl Source {
    pub fn id(self) -> &'static str {
        match self {
            Source::OrdinalClassification => "ordinal-classification",
            Source::PowerTimesOrdinal => "power-times-ordinal",
            Source::OrdinalNormalFormBound => "ordinal-normal-form-bound",
            Source::TwoPhaseLift => "two-phase-lift",
            Source::OppositeStartMonomials => "opposite-start-monomials",
            Source::EqualLengthMonomials => "equal-length-monomials",
            Source::UnequalLengthMonomials => "unequal-length-monomials",
            Source::IdenticalMonomials => "identical-monomials",
            Source::OmegaExponentSimpleForm => "omega-exponent-simple-form",
            Source::TwoTermSum => "two-term-sum",
            Source::TwoTermSumException => "two-term-sum-exception",
            Source::SpecialOmegaSum => "special-omega-sum",
            Source::AlternatingCollapse => "alternating-collapse",
            Source::OrdinalAgainstReversedTail => "ordinal-against-reversed-tail",
            Source::DiscreteBlockFamily => "discrete-block-family",
            Source::None => "none",
        }
    }
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Verdict {
    pub relation: Relation,
    pub source: Source,
    pub notes: String,
}

impl Verdict {
    pub fn new(relation: Relation, source: Source, notes: impl Into<String>) -> Verdict {
        Verdict {
            relation,
            source,
            notes: notes.into(),
        }
    }

    pub fn equivalent(source: Source, notes: impl Into<String>) -> Verdict {
        Verdict::new(Relation::EquivalentElementarily, source, notes)
    }

    pub fn length(n: u32, source: Source, notes: impl Into<String>) -> Verdict {
        Verdict::new(Relation::OptimalLength(n), source, notes)
    }

    pub fn at_most(b: Option<u32>, source: Source, notes: impl Into<String>) -> Verdict {
        Verdict::new(Relation::InequivalentAtMost(b), source, notes)
    }

    pub fn out_of_scope(reason: impl Into<String>) -> Verdict {
        let reason = reason.into();
        Verdict::new(Relation::OutOfScope(reason), Source::None, "")
    }

    pub fn is_out_of_scope(&self) -> bool {
        matches!(self.relation, Relation::OutOfScope(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ClosedFormError {
    #[error("the outer power must be at least 1")]
    ZeroPower,
}

/// l(ω^m·A', ω^m·B') from l(A', B') = `inner` (`None`: equivalent at every
/// depth tried) and whether A' and B' have least elements. Neither A' nor
/// B' may be a single point.
pub fn two_phase_lift(m: u32, inner: Option<u32>, least_a: bool, least_b: bool) -> Result<Verdict, ClosedFormError> {
    if m == 0 {
        return Err(ClosedFormError::ZeroPower);
    }
    if least_a != least_b {
        return Ok(Verdict::length(
            1,
            Source::TwoPhaseLift,
            "one inner order has a least element and the other does not",
        ));
    }
    Ok(match inner {
        Some(n) => Verdict::length(2 * m + n, Source::TwoPhaseLift, format!("2·{m} + {n}")),
        None => Verdict::out_of_scope(
            "the inner orders agree at every tested depth, which does not settle elementary equivalence",
        ),
    })
}

/// Tries every predictor in turn; if none applies, normalises both terms
/// and tries again.
pub fn predict(a: &Term, b: &Term) -> Verdict {
    let v = predict_raw(a, b);
    if !v.is_out_of_scope() {
        return v;
    }
    let (na, nb) = (normalize(a), normalize(b));
    if na == *a && nb == *b {
        return v;
    }
    let mut w = predict_raw(&na, &nb);
    if w.is_out_of_scope() {
        return v;
    }
    let note = format!("after normalising to {na} and {nb}");
    w.notes = if w.notes.is_empty() {
        note
    } else {
        format!("{}; {note}", w.notes)
    };
    w
}

fn predict_raw(a: &Term, b: &Term) -> Verdict {
    if a == b {
        return Verdict::equivalent(Source::None, "identical terms");
    }
    if let (Some(x), Some(y)) = (OrdinalForm::from_term(a), OrdinalForm::from_term(b)) {
        return predict_ordinal(&x, &y);
    }
    let (ra, rb) = (a.reverse(), b.reverse());
    if let (Some(x), Some(y)) = (OrdinalForm::from_term(&ra), OrdinalForm::from_term(&rb)) {
        let mut v = predict_ordinal(&x, &y);
        v.notes = format!("reversed orders: {}", v.notes);
        return v;
    }
    if let (Some(x), Some(y)) = (two_parts(a), two_parts(b)) {
        let v = predict_two_term_sum(&x.0, &x.1, &y.0, &y.1);
        if !v.is_out_of_scope() {
            return v;
        }
    }
    if let (Some(x), Some(y)) = (Monomial::from_term(a), Monomial::from_term(b)) {
        return predict_monomial(&x, &y);
    }
    predict_special_sum(a, b)
}

/// `A₁ + A₂` with both parts monomials.
fn two_parts(t: &Term) -> Option<(Monomial, Monomial)> {
    let Term::Cat(parts) = t else { return None };
    let [x, y] = parts.as_slice() else { return None };
    let x = Monomial::from_term(x)?;
    let y = Monomial::from_term(y)?;
    Some((x, y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::parse_term;

    fn pr(a: &str, b: &str) -> Relation {
        predict(&parse_term(a).unwrap(), &parse_term(b).unwrap()).relation
    }

    #[test]
    fn lift() {
        let v = two_phase_lift(1, Some(1), false, false).unwrap();
        assert_eq!(v.relation, Relation::OptimalLength(3));
        let v = two_phase_lift(2, Some(2), true, true).unwrap();
        assert_eq!(v.relation, Relation::OptimalLength(6));
        let v = two_phase_lift(3, Some(5), true, false).unwrap();
        assert_eq!(v.relation, Relation::OptimalLength(1));
        assert!(two_phase_lift(2, None, true, true).unwrap().is_out_of_scope());
        assert_eq!(two_phase_lift(0, Some(1), true, true), Err(ClosedFormError::ZeroPower));
    }

    #[test]
    fn dispatch() {
        assert_eq!(pr("w^2", "w^2.3"), Relation::OptimalLength(4));
        assert_eq!(pr("w.w*", "w^2.w*"), Relation::OptimalLength(3));
        assert_eq!(pr("w* + w.w*", "w*^2 + w.w*"), Relation::OptimalLength(3));
        assert_eq!(pr("w + w* + w^2", "w^2"), Relation::EquivalentElementarily);
        assert_eq!(pr("w + w*^2 + w^2", "w^2"), Relation::InequivalentAtMost(Some(3)));
        assert!(matches!(pr("z + w.z", "w^2 + w*^3 + 5 + z"), Relation::OutOfScope(_)));
    }

    #[test]
    fn normalising_retry() {
        // 3·ω is ω, so this is the pair (ω·ω*, ω²·ω*)
        let v = predict(&parse_term("(3.w).w*").unwrap(), &parse_term("w^2.w*").unwrap());
        assert_eq!(v.relation, Relation::OptimalLength(3));
        assert!(v.notes.contains("normalising"), "{}", v.notes);
    }

    #[test]
    fn serialises_source_ids() {
        let s = serde_json::to_string(&Source::TwoTermSumException).unwrap();
        assert_eq!(s, "\"two-term-sum-exception\"");
    }

    /// Every exact or bounded prediction is checked against the engine.
    #[test]
    fn engine_agrees() {
        let mut e = crate::Engine::default();
        let pairs = [
            ("w^2", "w^2.3"),
            ("w^2 + w", "w^2"),
            ("w", "w^2 + w"),
            ("w^w", "w^2"),
            ("w.w*", "w^2.w*"),
            ("w.w*.w", "w^2.w*.w"),
            ("w", "w.w*"),
            ("w.w*", "w.w*.w"),
            ("w.w*", "w^2.w*.w"),
            ("w^2.w*", "w.w*.w"),
            ("w.w*", "w*.w"),
            ("w*.w", "w*^2.w"),
            ("w* + w.w*", "w*^2 + w.w*"),
            ("w* + w", "w*.w + w"),
            ("w + w*", "w^2 + w*"),
            ("w + w*", "w.w* + w*"),
            ("w + w*^2 + w^2", "w^2"),
            ("w^2 + w* + w", "w"),
            ("w + w* + w", "w^2"),
            ("w^3", "w + w^2 + w*"),
            ("w^2", "w + w*^2"),
            ("w + w* + w^2", "w^2"),
        ];
        for (a, b) in pairs {
            let (ta, tb) = (parse_term(a).unwrap(), parse_term(b).unwrap());
            let v = predict(&ta, &tb);
            match v.relation {
                Relation::OptimalLength(l) => {
                    assert_eq!(
                        e.first_difference(&ta, &tb, l + 1).unwrap(),
                        Some(l + 1),
                        "{a} / {b}: {v:?}"
                    );
                }
                Relation::InequivalentAtMost(Some(k)) => {
                    assert!(!e.equiv_n(&ta, &tb, k).unwrap(), "{a} / {b}: {v:?}");
                }
                Relation::EquivalentElementarily => {
                    assert!(e.equiv_n(&ta, &tb, 5).unwrap(), "{a} / {b}");
                }
                _ => panic!("{a} / {b}: {v:?}"),
            }
        }
    }
}
