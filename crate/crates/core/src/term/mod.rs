//! The term algebra for scattered linear orders.
//!
//! A [`Term`] is a closed expression built from finite chains, ω-indexed and
//! ω*-indexed anti-lexicographic products, the atom ω^ω (and its reverse),
//! finite concatenation and eventually periodic ω / ω* sums. Every term
//! denotes a scattered order: the grammar has no way to index a product by a
//! non-well-ordered set.
//!
//! Terms should be built with the smart constructors ([`Term::cat`],
//! [`Term::prod`], [`Term::rep_sum`], ...) which keep the structural
//! invariants checked by [`Term::validate`].

mod monomial;
mod normalize;
mod rank;
mod zsum;

pub use monomial::{CnfOrdinal, Exponent, Monomial, MonomialError, OrdinalForm};
pub use normalize::normalize;
#[allow(unused_imports)]
pub(crate) use normalize::{ends_with_omega, ends_with_omega_star, starts_with_omega, starts_with_omega_star};
pub use rank::{hausdorff_rank, RankValue};
pub use zsum::{
    canonical_omega_sum, is_redundant_pair, iso_zsum_by_translation, least_rotation, primitive_root, CanonicalZSum,
    PowerBlock, ZSum, ZSumError,
};

use std::fmt;

use serde::{Deserialize, Serialize};

/// Index direction of a product or sum: ω or its reverse ω*.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Direction {
    Forward,
    Reverse,
}

impl Direction {
    pub fn flip(self) -> Direction {
        match self {
            Direction::Forward => Direction::Reverse,
            Direction::Reverse => Direction::Forward,
        }
    }
}

/// A symbolic scattered linear order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    /// The finite chain with `k` points; `Fin(0)` is the empty order.
    Fin(u64),
    /// `base · ω` (ω copies of base) or `base · ω*`.
    Prod(Box<Term>, Direction),
    /// ω^ω, or its reverse (ω^ω)* = (ω*)^ω.
    Pow(Direction),
    /// Left-to-right concatenation of at least two parts.
    Cat(Vec<Term>),
    /// Forward: `prefix` then `period` repeated ω times.
    /// Reverse: `period` repeated ω* times (leftwards), then `prefix`.
    /// Both lists are written left to right.
    RepSum {
        index: Direction,
        prefix: Vec<Term>,
        period: Vec<Term>,
    },
}

/// Endpoint summary of a term: least element, greatest element, emptiness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Endpoints {
    pub has_least: bool,
    pub has_greatest: bool,
    pub is_empty: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TermError {
    #[error("concatenation must have at least two parts")]
    ShortCat,
    #[error("concatenation contains a nested concatenation")]
    NestedCat,
    #[error("concatenation contains an empty part")]
    EmptyCatPart,
    #[error("concatenation contains adjacent finite parts")]
    AdjacentFinite,
    #[error("product base is empty")]
    EmptyProductBase,
    #[error("periodic sum has an empty period")]
    EmptyPeriod,
    #[error("periodic sum contains an empty block")]
    EmptyBlock,
    #[error("an ω^ω index needs a unit base, got {0}")]
    InfiniteIndex(String),
}

impl Term {
    pub const EMPTY: Term = Term::Fin(0);
    pub const ONE: Term = Term::Fin(1);

    pub fn fin(k: u64) -> Term {
        Term::Fin(k)
    }

    /// ω
    pub fn omega() -> Term {
        Term::Prod(Box::new(Term::ONE), Direction::Forward)
    }

    /// ω*
    pub fn omega_star() -> Term {
        Term::Prod(Box::new(Term::ONE), Direction::Reverse)
    }

    /// ζ = ω* + ω
    pub fn zeta() -> Term {
        Term::Cat(vec![Term::omega_star(), Term::omega()])
    }

    /// ω^k (dir forward) or (ω*)^k, as k nested products over a point.
    pub fn power(dir: Direction, k: u32) -> Term {
        (0..k).fold(Term::ONE, |acc, _| Term::prod(acc, dir))
    }

    pub fn pow(dir: Direction) -> Term {
        Term::Pow(dir)
    }

    pub fn prod(base: Term, dir: Direction) -> Term {
        if base.is_empty_term() {
            Term::EMPTY
        } else {
            Term::Prod(Box::new(base), dir)
        }
    }

    /// Concatenation: flattens, drops empty parts and merges adjacent finite
    /// parts.
    pub fn cat<I: IntoIterator<Item = Term>>(parts: I) -> Term {
        let mut out: Vec<Term> = Vec::new();
        let push = |t: Term, out: &mut Vec<Term>| match t {
            Term::Fin(0) => {}
            Term::Fin(k) => {
                if let Some(Term::Fin(prev)) = out.last_mut() {
                    *prev += k;
                } else {
                    out.push(Term::Fin(k));
                }
            }
            other => out.push(other),
        };
        for part in parts {
            match part {
                Term::Cat(inner) => {
                    for t in inner {
                        push(t, &mut out);
                    }
                }
                t => push(t, &mut out),
            }
        }
        match out.len() {
            0 => Term::EMPTY,
            1 => out.pop().unwrap(),
            _ => Term::Cat(out),
        }
    }

    /// Eventually periodic sum. Empty blocks are dropped; an all-empty period
    /// degenerates to the concatenation of the prefix.
    pub fn rep_sum(index: Direction, prefix: Vec<Term>, period: Vec<Term>) -> Term {
        let prefix: Vec<Term> = prefix.into_iter().filter(|t| !t.is_empty_term()).collect();
        let period: Vec<Term> = period.into_iter().filter(|t| !t.is_empty_term()).collect();
        if period.is_empty() {
            return Term::cat(prefix);
        }
        Term::RepSum { index, prefix, period }
    }

    /// `copies` concatenated copies of `self`.
    pub fn times(&self, copies: u64) -> Term {
        if let Term::Fin(k) = self {
            return Term::Fin(k.saturating_mul(copies));
        }
        Term::cat((0..copies).map(|_| self.clone()))
    }

    /// The anti-lexicographic product `self · index` ("index copies of self"),
    /// expanded structurally over the shape of `index`.
    pub fn mul(&self, index: &Term) -> Result<Term, TermError> {
        if self.is_empty_term() || index.is_empty_term() {
            return Ok(Term::EMPTY);
        }
        if *self == Term::ONE {
            return Ok(index.clone());
        }
        Ok(match index {
            Term::Fin(k) => self.times(*k),
            Term::Prod(b, d) => Term::prod(self.mul(b)?, *d),
            Term::Cat(parts) => Term::cat(parts.iter().map(|p| self.mul(p)).collect::<Result<Vec<_>, _>>()?),
            Term::RepSum {
                index: d,
                prefix,
                period,
            } => Term::rep_sum(
                *d,
                prefix.iter().map(|p| self.mul(p)).collect::<Result<Vec<_>, _>>()?,
                period.iter().map(|p| self.mul(p)).collect::<Result<Vec<_>, _>>()?,
            ),
            Term::Pow(_) => return Err(TermError::InfiniteIndex(crate::text::print_term(self))),
        })
    }

    pub fn is_empty_term(&self) -> bool {
        matches!(self, Term::Fin(0))
    }

    /// Checks the structural invariants recursively.
    pub fn validate(&self) -> Result<(), TermError> {
        match self {
            Term::Fin(_) | Term::Pow(_) => Ok(()),
            Term::Prod(b, _) => {
                if b.is_empty_term() {
                    return Err(TermError::EmptyProductBase);
                }
                b.validate()
            }
            Term::Cat(parts) => {
                if parts.len() < 2 {
                    return Err(TermError::ShortCat);
                }
                for (i, p) in parts.iter().enumerate() {
                    match p {
                        Term::Cat(_) => return Err(TermError::NestedCat),
                        Term::Fin(0) => return Err(TermError::EmptyCatPart),
                        Term::Fin(_) if i > 0 && matches!(parts[i - 1], Term::Fin(_)) => {
                            return Err(TermError::AdjacentFinite)
                        }
                        _ => {}
                    }
                    p.validate()?;
                }
                Ok(())
            }
            Term::RepSum { prefix, period, .. } => {
                if period.is_empty() {
                    return Err(TermError::EmptyPeriod);
                }
                for b in prefix.iter().chain(period) {
                    if b.is_empty_term() {
                        return Err(TermError::EmptyBlock);
                    }
                    b.validate()?;
                }
                Ok(())
            }
        }
    }

    /// The reversed order, computed structurally.
    pub fn reverse(&self) -> Term {
        match self {
            Term::Fin(k) => Term::Fin(*k),
            Term::Prod(b, d) => Term::Prod(Box::new(b.reverse()), d.flip()),
            Term::Pow(d) => Term::Pow(d.flip()),
            Term::Cat(parts) => Term::Cat(parts.iter().rev().map(Term::reverse).collect()),
            Term::RepSum { index, prefix, period } => Term::RepSum {
                index: index.flip(),
                prefix: prefix.iter().rev().map(Term::reverse).collect(),
                period: period.iter().rev().map(Term::reverse).collect(),
            },
        }
    }

    pub fn endpoints(&self) -> Endpoints {
        match self {
            Term::Fin(k) => Endpoints {
                has_least: *k > 0,
                has_greatest: *k > 0,
                is_empty: *k == 0,
            },
            Term::Prod(b, d) => {
                let inner = b.endpoints();
                match d {
                    Direction::Forward => Endpoints {
                        has_least: inner.has_least,
                        has_greatest: false,
                        is_empty: inner.is_empty,
                    },
                    Direction::Reverse => Endpoints {
                        has_least: false,
                        has_greatest: inner.has_greatest,
                        is_empty: inner.is_empty,
                    },
                }
            }
            Term::Pow(Direction::Forward) => Endpoints {
                has_least: true,
                has_greatest: false,
                is_empty: false,
            },
            Term::Pow(Direction::Reverse) => Endpoints {
                has_least: false,
                has_greatest: true,
                is_empty: false,
            },
            Term::Cat(parts) => {
                let nonempty: Vec<Endpoints> = parts.iter().map(Term::endpoints).filter(|e| !e.is_empty).collect();
                match (nonempty.first(), nonempty.last()) {
                    (Some(first), Some(last)) => Endpoints {
                        has_least: first.has_least,
                        has_greatest: last.has_greatest,
                        is_empty: false,
                    },
                    _ => Endpoints {
                        has_least: false,
                        has_greatest: false,
                        is_empty: true,
                    },
                }
            }
            Term::RepSum { index, prefix, period } => {
                let blocks = |list: &[Term]| -> Vec<Endpoints> {
                    list.iter().map(Term::endpoints).filter(|e| !e.is_empty).collect()
                };
                let pre = blocks(prefix);
                let per = blocks(period);
                if pre.is_empty() && per.is_empty() {
                    return Endpoints {
                        has_least: false,
                        has_greatest: false,
                        is_empty: true,
                    };
                }
                match index {
                    Direction::Forward => Endpoints {
                        has_least: pre.first().or(per.first()).unwrap().has_least,
                        has_greatest: per.is_empty() && pre.last().unwrap().has_greatest,
                        is_empty: false,
                    },
                    Direction::Reverse => Endpoints {
                        has_least: per.is_empty() && pre.first().unwrap().has_least,
                        has_greatest: pre.last().or(per.last()).unwrap().has_greatest,
                        is_empty: false,
                    },
                }
            }
        }
    }

    /// Number of nodes; used as part of the rewrite termination measure.
    pub fn size(&self) -> usize {
        match self {
            Term::Fin(_) | Term::Pow(_) => 1,
            Term::Prod(b, _) => 1 + b.size(),
            Term::Cat(parts) => 1 + parts.iter().map(Term::size).sum::<usize>(),
            Term::RepSum { prefix, period, .. } => 1 + prefix.iter().chain(period).map(Term::size).sum::<usize>(),
        }
    }

    /// If the term is ω^k or (ω*)^k for k ≥ 1 (nested products over a single
    /// point), returns the direction and exponent.
    pub fn as_power(&self) -> Option<(Direction, u32)> {
        let mut t = self;
        let mut dir = None;
        let mut k = 0;
        while let Term::Prod(b, d) = t {
            if dir.is_some_and(|x| x != *d) {
                return None;
            }
            dir = Some(*d);
            k += 1;
            t = b;
        }
        match (t, dir) {
            (Term::Fin(1), Some(d)) => Some((d, k)),
            _ => None,
        }
    }

    /// If the term is `A·ω* + A·ω` (i.e. A·ζ), returns A.
    pub fn as_zeta_product(&self) -> Option<&Term> {
        match self {
            Term::Cat(parts) if parts.len() == 2 => zeta_pair(&parts[0], &parts[1]),
            _ => None,
        }
    }
}

/// `A·ω*` followed by `A·ω`.
pub(crate) fn zeta_pair<'a>(left: &'a Term, right: &Term) -> Option<&'a Term> {
    match (left, right) {
        (Term::Prod(a, Direction::Reverse), Term::Prod(b, Direction::Forward)) if a == b => Some(a),
        _ => None,
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::text::print_term(self))
    }
}

/// Serialized as the printed text.
impl Serialize for Term {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&crate::text::print_term(self))
    }
}

impl<'de> Deserialize<'de> for Term {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Term, D::Error> {
        let text = String::deserialize(d)?;
        crate::text::parse_term(&text).map_err(serde::de::Error::custom)
    }
}
