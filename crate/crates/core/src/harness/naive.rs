//! A second decision procedure for ≡ₙ that never builds theories.
//!
//! A ≡ₙ B iff every point of A is matched by a point of B (and back) whose
//! left and right flanks are ≡ₙ₋₁. Points are enumerated literally from the
//! term: every finite chain point, and copies of a repeated block up to
//! 2^(n−1) + 1, past which more copies change nothing at depth n − 1.
//! Exponential, so only for small terms and depths.

use std::collections::HashMap;

use crate::term::{Direction, Term};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NaiveError {
    #[error("the naive game does not enumerate points of ω^ω")]
    Unsupported,
    #[error("depth {0} is beyond the naive game's limit of {MAX_NAIVE_DEPTH}")]
    TooDeep(u32),
}

pub const MAX_NAIVE_DEPTH: u32 = 5;

#[derive(Default)]
pub struct NaiveGame {
    memo: HashMap<(Term, Term, u32), bool>,
}

impl NaiveGame {
    pub fn new() -> NaiveGame {
        NaiveGame::default()
    }

    /// A ≡ₙ B; at n = 0, whether both are empty or both are not.
    pub fn equiv(&mut self, a: &Term, b: &Term, n: u32) -> Result<bool, NaiveError> {
        if n > MAX_NAIVE_DEPTH {
            return Err(NaiveError::TooDeep(n));
        }
        if contains_pow(a) || contains_pow(b) {
            return Err(NaiveError::Unsupported);
        }
        if n == 0 {
            return Ok(a.is_empty_term() == b.is_empty_term());
        }
        Ok(self.game(a, b, n))
    }

    /// l(A, B) if it is below `cap`.
    pub fn optimal_length(&mut self, a: &Term, b: &Term, cap: u32) -> Result<Option<u32>, NaiveError> {
        for n in 0..=cap {
            if !self.equiv(a, b, n)? {
                return Ok(Some(n.saturating_sub(1)));
            }
        }
        Ok(None)
    }

    fn game(&mut self, a: &Term, b: &Term, n: u32) -> bool {
        if n == 0 {
            return true;
        }
        match (a.is_empty_term(), b.is_empty_term()) {
            (true, true) => return true,
            (true, false) | (false, true) => return false,
            _ => {}
        }
        let key = (a.clone(), b.clone(), n);
        if let Some(&w) = self.memo.get(&key) {
            return w;
        }
        let sa = points(a, n);
        let sb = points(b, n);
        let w = self.covers(&sa, &sb, n) && self.covers(&sb, &sa, n);
        self.memo.insert(key, w);
        w
    }

    fn covers(&mut self, xs: &[(Term, Term)], ys: &[(Term, Term)], n: u32) -> bool {
        xs.iter().all(|(l, r)| {
            ys.iter()
                .any(|(l2, r2)| self.game(l, l2, n - 1) && self.game(r, r2, n - 1))
        })
    }
}

fn contains_pow(t: &Term) -> bool {
    match t {
        Term::Fin(_) => false,
        Term::Pow(_) => true,
        Term::Prod(b, _) => contains_pow(b),
        Term::Cat(parts) => parts.iter().any(contains_pow),
        Term::RepSum { prefix, period, .. } => prefix.iter().chain(period).any(contains_pow),
    }
}

fn copies(n: u32) -> u64 {
    (1u64 << (n - 1)) + 1
}

/// (left flank, right flank) for enough points of `t`.
fn points(t: &Term, n: u32) -> Vec<(Term, Term)> {
    match t {
        Term::Fin(k) => (0..*k).map(|i| (Term::Fin(i), Term::Fin(k - 1 - i))).collect(),
        Term::Cat(parts) => {
            let mut out = Vec::new();
            for (i, part) in parts.iter().enumerate() {
                for (l, r) in points(part, n) {
                    out.push((
                        Term::cat(parts[..i].iter().cloned().chain([l])),
                        Term::cat([r].into_iter().chain(parts[i + 1..].iter().cloned())),
                    ));
                }
            }
            out
        }
        Term::Prod(b, Direction::Forward) => {
            let inner = points(b, n);
            let mut out = Vec::new();
            for j in 0..=copies(n) {
                for (l, r) in &inner {
                    out.push((Term::cat([b.times(j), l.clone()]), Term::cat([r.clone(), t.clone()])));
                }
            }
            out
        }
        Term::RepSum {
            index: Direction::Forward,
            prefix,
            period,
        } => {
            let mut out = Vec::new();
            for (i, block) in prefix.iter().enumerate() {
                let rest = Term::rep_sum(Direction::Forward, prefix[i + 1..].to_vec(), period.clone());
                for (l, r) in points(block, n) {
                    out.push((
                        Term::cat(prefix[..i].iter().cloned().chain([l])),
                        Term::cat([r, rest.clone()]),
                    ));
                }
            }
            let cycle = Term::cat(period.iter().cloned());
            for k in 0..=copies(n) {
                for (i, block) in period.iter().enumerate() {
                    let rest = Term::rep_sum(Direction::Forward, period[i + 1..].to_vec(), period.clone());
                    for (l, r) in points(block, n) {
                        let left = prefix
                            .iter()
                            .cloned()
                            .chain([cycle.times(k)])
                            .chain(period[..i].iter().cloned())
                            .chain([l]);
                        out.push((Term::cat(left), Term::cat([r, rest.clone()])));
                    }
                }
            }
            out
        }
        Term::Pow(_) => unreachable!("checked before playing"),
        Term::Prod(_, Direction::Reverse) | Term::RepSum { .. } => points(&t.reverse(), n)
            .into_iter()
            .map(|(l, r)| (r.reverse(), l.reverse()))
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::parse_term;

    fn p(s: &str) -> Term {
        parse_term(s).unwrap()
    }

    #[test]
    fn finite_chains() {
        let mut g = NaiveGame::new();
        assert!(g.equiv(&p("3"), &p("4"), 2).unwrap());
        assert!(!g.equiv(&p("2"), &p("3"), 2).unwrap());
        assert!(!g.equiv(&Term::EMPTY, &p("1"), 0).unwrap());
        assert!(g.equiv(&p("1"), &p("2"), 1).unwrap());
    }

    #[test]
    fn small_infinite_orders() {
        let mut g = NaiveGame::new();
        assert_eq!(g.optimal_length(&p("w"), &p("w*"), 4).unwrap(), Some(1));
        assert_eq!(g.optimal_length(&p("w"), &p("w.2"), 4).unwrap(), Some(2));
        assert_eq!(g.optimal_length(&p("w"), &p("z"), 4).unwrap(), Some(1));
        assert_eq!(g.optimal_length(&p("w"), &p("w + w.w*"), 4).unwrap(), Some(2));
    }

    #[test]
    fn refuses_omega_to_the_omega() {
        let mut g = NaiveGame::new();
        assert_eq!(g.equiv(&p("w^w"), &p("w"), 2), Err(NaiveError::Unsupported));
        assert_eq!(g.equiv(&p("w"), &p("w"), 6), Err(NaiveError::TooDeep(6)));
    }
}
