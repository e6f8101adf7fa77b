//! Syntactic Hausdorff rank.
//!
//! Level 0 holds the empty order and the point; level α > 0 holds sums over
//! ω, ω*, ζ or a finite index of orders of lower level. The rank computed
//! here follows the shape of the presentation, so it is an upper bound for the
//! rank of the denoted order.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::{Direction, Term};

/// Ranks below ω·2: `Finite(n)` or `OmegaPlus(k)` = ω + k.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RankValue {
    Finite(u64),
    OmegaPlus(u64),
}

impl RankValue {
    pub const OMEGA: RankValue = RankValue::OmegaPlus(0);
    pub const OMEGA_PLUS_ONE: RankValue = RankValue::OmegaPlus(1);

    pub fn succ(self) -> RankValue {
        match self {
            RankValue::Finite(n) => RankValue::Finite(n + 1),
            RankValue::OmegaPlus(k) => RankValue::OmegaPlus(k + 1),
        }
    }
}

impl fmt::Display for RankValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RankValue::Finite(n) => write!(f, "{n}"),
            RankValue::OmegaPlus(0) => f.write_str("w"),
            RankValue::OmegaPlus(k) => write!(f, "w+{k}"),
        }
    }
}

/// Rank of the presentation. A finite chain with two or more points is a
/// finite sum of points and so has rank 1.
pub fn hausdorff_rank(t: &Term) -> RankValue {
    match t {
        Term::Fin(0) | Term::Fin(1) => RankValue::Finite(0),
        Term::Fin(_) => RankValue::Finite(1),
        _ => rank(t),
    }
}

/// Rank of a term occurring as a summand; finite chains split into points.
fn summand_rank(t: &Term) -> RankValue {
    match t {
        Term::Fin(_) => RankValue::Finite(0),
        _ => rank(t),
    }
}

fn rank(t: &Term) -> RankValue {
    match t {
        Term::Fin(_) => hausdorff_rank(t),
        Term::Prod(b, _) => summand_rank(b).succ(),
        Term::Pow(_) => RankValue::OMEGA,
        Term::Cat(parts) => {
            if let [left, right] = parts.as_slice() {
                if is_sum_over(left, Direction::Reverse) && is_sum_over(right, Direction::Forward) {
                    // a single ζ-indexed sum
                    return rank(left).max(rank(right));
                }
            }
            max_succ(parts)
        }
        Term::RepSum { prefix, period, .. } => {
            let blocks: Vec<Term> = prefix.iter().chain(period).cloned().collect();
            max_succ(&blocks)
        }
    }
}

fn max_succ(parts: &[Term]) -> RankValue {
    parts
        .iter()
        .map(summand_rank)
        .max()
        .unwrap_or(RankValue::Finite(0))
        .succ()
}

fn is_sum_over(t: &Term, d: Direction) -> bool {
    match t {
        Term::Prod(_, e) | Term::Pow(e) => *e == d,
        Term::RepSum { index, .. } => *index == d,
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::parse_term;

    fn r(s: &str) -> RankValue {
        hausdorff_rank(&parse_term(s).unwrap())
    }

    #[test]
    fn small_ranks() {
        assert_eq!(r("1"), RankValue::Finite(0));
        assert_eq!(r("0"), RankValue::Finite(0));
        assert_eq!(r("5"), RankValue::Finite(1));
        assert_eq!(r("w"), RankValue::Finite(1));
        assert_eq!(r("w^3.w*"), RankValue::Finite(4));
        assert_eq!(r("z"), RankValue::Finite(1));
        assert_eq!(r("w + 1"), RankValue::Finite(2));
        assert_eq!(r("w.z"), RankValue::Finite(2));
    }

    #[test]
    fn infinite_ranks() {
        assert_eq!(r("w^w"), RankValue::OMEGA);
        assert_eq!(r("w^w.w*"), RankValue::OMEGA_PLUS_ONE);
        assert_eq!(r("w*^w + w^w"), RankValue::OMEGA);
        assert_eq!(r("w^w + 1"), RankValue::OmegaPlus(1));
        assert!(RankValue::Finite(100) < RankValue::OMEGA);
        assert_eq!(RankValue::OMEGA_PLUS_ONE.to_string(), "w+1");
    }

    #[test]
    fn sums_take_block_maximum() {
        assert_eq!(r("sumw[w^2; w, 1]"), RankValue::Finite(3));
        assert_eq!(r("sumw*[; w*] + sumw[; w^2]"), RankValue::Finite(3));
    }
}
