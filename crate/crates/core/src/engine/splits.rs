//! Point classes of a term: pairs (part left of x, part right of x).

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::{Engine, EngineError, EMPTY};
use crate::term::{CnfOrdinal, Direction, Term};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SplitClass {
    pub left: Term,
    pub right: Term,
    pub label: String,
}

impl SplitClass {
    fn new(left: Term, right: Term, label: String) -> SplitClass {
        SplitClass { left, right, label }
    }

    fn mirror(self) -> SplitClass {
        SplitClass {
            left: self.right.reverse(),
            right: self.left.reverse(),
            label: format!("mirrored {}", self.label),
        }
    }
}

/// How far the copy and block indices run.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Range {
    /// Up to the configured bound.
    Literal,
    /// Until the theory of the left flank repeats.
    UntilRepeat,
}

impl Engine {
    /// Point classes of `t` complete up to (n − 1)-equivalence of both flanks.
    /// Copy and block indices run up to the configured bounds; inner splits of
    /// subterms are taken one per class.
    pub fn splits(&mut self, t: &Term, n: u32) -> Result<Vec<SplitClass>, EngineError> {
        self.check_split_args(t, n)?;
        Ok(self.enumerate(t, n, Range::Literal))
    }

    /// One split per distinct pair of (n − 1)-theories, in scan order.
    pub fn representative_splits(&mut self, t: &Term, n: u32) -> Result<Vec<SplitClass>, EngineError> {
        self.check_split_args(t, n)?;
        Ok(self.reps(t, n))
    }

    fn check_split_args(&self, t: &Term, n: u32) -> Result<(), EngineError> {
        self.check_depth(n)?;
        if n == 0 {
            return Err(EngineError::DepthMismatch(0, 1));
        }
        if t.is_empty_term() {
            return Err(EngineError::EmptyTerm);
        }
        Ok(())
    }

    fn reps(&mut self, t: &Term, n: u32) -> Vec<SplitClass> {
        let all = self.enumerate(t, n, Range::UntilRepeat);
        self.dedup(all, n)
    }

    fn dedup(&mut self, all: Vec<SplitClass>, n: u32) -> Vec<SplitClass> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for s in all {
            if seen.insert(self.split_pair(&s, n)) {
                out.push(s);
            }
        }
        out
    }

    fn enumerate(&mut self, t: &Term, n: u32, range: Range) -> Vec<SplitClass> {
        match t {
            Term::Fin(k) => {
                let k = *k;
                let b = self.cfg.copy_bound(n);
                let idx: Vec<u64> = if k <= 2 * b + 2 {
                    (0..k).collect()
                } else {
                    (0..=b).chain(k - 1 - b..k).collect()
                };
                idx.into_iter()
                    .map(|i| SplitClass::new(Term::Fin(i), Term::Fin(k - 1 - i), format!("point {i}")))
                    .collect()
            }
            Term::Cat(parts) => {
                let mut out = Vec::new();
                for (i, part) in parts.iter().enumerate() {
                    for s in self.reps(part, n) {
                        let left = Term::cat(parts[..i].iter().cloned().chain([s.left]));
                        let right = Term::cat([s.right].into_iter().chain(parts[i + 1..].iter().cloned()));
                        out.push(SplitClass::new(left, right, format!("part {i}: {}", s.label)));
                    }
                }
                out
            }
            Term::Prod(b, Direction::Forward) => {
                let inner = self.reps(b, n);
                let whole = t.clone();
                let mut out = Vec::new();
                for j in self.copy_indices(b, n, range) {
                    let before = b.times(j);
                    for s in &inner {
                        out.push(SplitClass::new(
                            Term::cat([before.clone(), s.left.clone()]),
                            Term::cat([s.right.clone(), whole.clone()]),
                            format!("copy {j}: {}", s.label),
                        ));
                    }
                }
                out
            }
            Term::Pow(Direction::Forward) => self
                .ordinal_representatives(n)
                .into_iter()
                .map(|c| SplitClass::new(c.to_term(), Term::Pow(Direction::Forward), format!("after {c}")))
                .collect(),
            Term::RepSum {
                index: Direction::Forward,
                prefix,
                period,
            } => self.sum_splits(prefix, period, n, range),
            Term::Prod(_, Direction::Reverse)
            | Term::Pow(Direction::Reverse)
            | Term::RepSum {
                index: Direction::Reverse,
                ..
            } => self
                .enumerate(&t.reverse(), n, range)
                .into_iter()
                .map(SplitClass::mirror)
                .collect(),
        }
    }

    /// Copy indices j for `b·ω`.
    fn copy_indices(&mut self, b: &Term, n: u32, range: Range) -> Vec<u64> {
        let bound = self.cfg.copy_bound(n);
        match range {
            Range::Literal => (0..=bound).collect(),
            Range::UntilRepeat => {
                let tb = self.term_theory(b, n - 1);
                let mut seen = HashSet::new();
                let mut cur = EMPTY;
                let mut out = Vec::new();
                for j in 0..=bound {
                    if !seen.insert(cur) {
                        return out;
                    }
                    out.push(j);
                    cur = self.concat(n - 1, cur, tb);
                }
                if !seen.contains(&cur) {
                    self.bound_hits += 1;
                }
                out
            }
        }
    }

    fn sum_splits(&mut self, prefix: &[Term], period: &[Term], n: u32, range: Range) -> Vec<SplitClass> {
        let rest_of_period = |r: usize| Term::rep_sum(Direction::Forward, period[r + 1..].to_vec(), period.to_vec());
        let mut out = Vec::new();
        for (i, block) in prefix.iter().enumerate() {
            let tail = Term::rep_sum(Direction::Forward, prefix[i + 1..].to_vec(), period.to_vec());
            for s in self.reps(block, n) {
                out.push(SplitClass::new(
                    Term::cat(prefix[..i].iter().cloned().chain([s.left])),
                    Term::cat([s.right, tail.clone()]),
                    format!("prefix block {i}: {}", s.label),
                ));
            }
        }
        let head = Term::cat(prefix.iter().cloned());
        let cycle = Term::cat(period.iter().cloned());
        let rounds: Vec<u64> = match range {
            Range::Literal => (0..self.cfg.unroll_bound(n)).collect(),
            Range::UntilRepeat => {
                let bound = self.cfg.unroll_bound(n);
                let th = self.term_theory(&head, n - 1);
                let tc = self.term_theory(&cycle, n - 1);
                let mut seen = HashSet::new();
                let mut cur = th;
                let mut out = Vec::new();
                for k in 0..bound {
                    if !seen.insert(cur) {
                        break;
                    }
                    out.push(k);
                    cur = self.concat(n - 1, cur, tc);
                }
                if out.len() as u64 == bound && !seen.contains(&cur) {
                    self.bound_hits += 1;
                }
                out
            }
        };
        let block_splits: Vec<Vec<SplitClass>> = period.iter().map(|b| self.reps(b, n)).collect();
        for k in rounds {
            let before = Term::cat([head.clone(), cycle.times(k)]);
            for (r, splits) in block_splits.iter().enumerate() {
                for s in splits {
                    out.push(SplitClass::new(
                        Term::cat(
                            [before.clone()]
                                .into_iter()
                                .chain(period[..r].iter().cloned())
                                .chain([s.left.clone()]),
                        ),
                        Term::cat([s.right.clone(), rest_of_period(r)]),
                        format!("round {k} block {r}: {}", s.label),
                    ));
                }
            }
        }
        out
    }

    /// Ordinals below ω^ω, one per (n − 1)-theory, found breadth first.
    fn ordinal_representatives(&mut self, n: u32) -> Vec<CnfOrdinal> {
        let m = n - 1;
        let powers = self.powers(m);
        let mut seen = HashSet::from([EMPTY]);
        let mut out = vec![CnfOrdinal::zero()];
        let mut frontier = vec![(CnfOrdinal::zero(), EMPTY)];
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for (c, th) in &frontier {
                for (e, &p) in powers.iter().enumerate() {
                    let y = self.concat(m, *th, p);
                    if seen.insert(y) {
                        let c2 = c.add(&CnfOrdinal::monomial(e as u32, 1));
                        out.push(c2.clone());
                        next.push((c2, y));
                    }
                }
            }
            frontier = next;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::parse_term;
    use std::collections::BTreeSet;

    fn p(s: &str) -> Term {
        parse_term(s).unwrap()
    }

    #[test]
    fn two_points() {
        let mut e = Engine::default();
        let s = e.splits(&Term::Fin(2), 3).unwrap();
        let pairs: Vec<(Term, Term)> = s.into_iter().map(|c| (c.left, c.right)).collect();
        assert_eq!(pairs, vec![(Term::Fin(0), Term::Fin(1)), (Term::Fin(1), Term::Fin(0))]);
    }

    #[test]
    fn omega_splits_are_finite_initial_segments() {
        let mut e = Engine::default();
        let n = 3;
        let s = e.splits(&Term::omega(), n).unwrap();
        assert_eq!(s.len() as u64, e.config().copy_bound(n) + 1);
        for (j, c) in s.iter().enumerate() {
            assert_eq!(c.left, Term::Fin(j as u64));
            assert_eq!(c.right, Term::omega());
        }
    }

    #[test]
    fn mirrored_product_keeps_the_whole_copy_on_the_left() {
        let mut e = Engine::default();
        let t = p("w.w*");
        for c in e.splits(&t, 3).unwrap() {
            let first = match &c.left {
                Term::Cat(parts) => &parts[0],
                other => other,
            };
            assert_eq!(*first, t, "{}", c.label);
        }
    }

    fn children_match(e: &mut Engine, t: &Term, n: u32) {
        let th = e.theory(t, n).unwrap();
        let expected: BTreeSet<_> = e.child_pairs(th).into_iter().collect();
        let mut got = BTreeSet::new();
        for s in e.representative_splits(t, n).unwrap() {
            got.insert(e.split_pair(&s, n));
        }
        assert_eq!(got, expected, "{t} at {n}");
    }

    #[test]
    fn representative_splits_realise_every_child() {
        let mut e = Engine::default();
        for s in [
            "5",
            "w",
            "w*",
            "z",
            "w^2 + z",
            "w.w*",
            "w^w",
            "w*^w + 1",
            "sumw[1; w, w*]",
            "sumw*[w; 2, w^2]",
            "w^2.w*.w",
        ] {
            for n in 1..=4 {
                children_match(&mut e, &p(s), n);
            }
        }
        assert_eq!(e.bound_hits(), 0);
    }

    #[test]
    fn empty_term_has_no_splits() {
        let mut e = Engine::default();
        assert_eq!(e.splits(&Term::EMPTY, 2), Err(EngineError::EmptyTerm));
    }
}
