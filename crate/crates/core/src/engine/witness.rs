//! Winning plays for player I.
//!
//! A position is a pair of orders that differ at some depth. Player I picks a
//! point whose pair of flank theories has no counterpart on the other side;
//! whatever player II answers, the two left flanks or the two right flanks
//! differ at a smaller depth, and play continues there. The play ends when I
//! moves in a nonempty flank whose counterpart is empty.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::{Engine, EngineError, SplitClass, Theory};
use crate::term::Term;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    A,
    B,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::A => Side::B,
            Side::B => Side::A,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::A => "A",
            Side::B => "B",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Half {
    Left,
    Right,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Move {
    /// Where player I plays.
    pub structure: Side,
    pub split: SplitClass,
    /// Player II's answer in the other structure; `None` when it is empty.
    pub response: Option<SplitClass>,
    /// Moves left in the play, this one included.
    pub remaining: u32,
    /// Flanks in which play continues.
    pub continue_in: Option<Half>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlayTrace {
    pub a: Term,
    pub b: Term,
    /// Move budget the play was asked for.
    pub depth: u32,
    pub moves: Vec<Move>,
}

impl PlayTrace {
    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TraceError {
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error("play uses {used} moves but only {budget} are allowed")]
    TooLong { used: usize, budget: u32 },
    #[error("move {0}: the split does not describe the current order")]
    BadSplit(usize),
    #[error("move {0}: the response does not describe the current order")]
    BadResponse(usize),
    #[error("move {0}: player II could have matched this move")]
    NotWinning(usize),
    #[error("move {0}: the response is missing but the other order is not empty")]
    MissingResponse(usize),
    #[error("move {0}: the play continues after player II is stuck")]
    Continues(usize),
    #[error("the play ends before player II is stuck")]
    Unfinished,
    #[error("the orders differ in emptiness and no move is needed")]
    NothingToPlay,
}

/// Moves player I needs once two orders first differ at depth `d`.
fn need(d: u32) -> u32 {
    d.max(1)
}

impl Engine {
    /// A shortest winning play for player I in the n-move game on `a`, `b`.
    pub fn witness(&mut self, a: &Term, b: &Term, n: u32) -> Result<PlayTrace, EngineError> {
        let Some(k) = self.first_difference(a, b, n)? else {
            return Err(EngineError::Equivalent(n));
        };
        let mut moves = Vec::new();
        if n > 0 {
            self.play(a.clone(), b.clone(), k, &mut moves)?;
        }
        Ok(PlayTrace {
            a: a.clone(),
            b: b.clone(),
            depth: n,
            moves,
        })
    }

    fn play(&mut self, mut x: Term, mut y: Term, mut d: u32, moves: &mut Vec<Move>) -> Result<(), EngineError> {
        loop {
            let m = self.best_move(&x, &y, d)?;
            let step = Move {
                structure: m.side,
                split: m.split.clone(),
                response: m.response.clone(),
                remaining: need(d),
                continue_in: m.next.map(|(h, _)| h),
            };
            moves.push(step);
            let Some((half, nd)) = m.next else {
                return Ok(());
            };
            let response = m.response.expect("continuing play has a response");
            let (mine, theirs) = match half {
                Half::Left => (m.split.left, response.left),
                Half::Right => (m.split.right, response.right),
            };
            (x, y) = match m.side {
                Side::A => (mine, theirs),
                Side::B => (theirs, mine),
            };
            d = nd;
        }
    }

    fn best_move(&mut self, x: &Term, y: &Term, d: u32) -> Result<Chosen, EngineError> {
        if d == 0 {
            let (side, nonempty) = if x.is_empty_term() { (Side::B, y) } else { (Side::A, x) };
            let split = self.representative_splits(nonempty, 1)?.remove(0);
            return Ok(Chosen {
                side,
                split,
                response: None,
                next: None,
                cost: 1,
            });
        }
        let mut best: Option<Chosen> = None;
        for side in [Side::A, Side::B] {
            let (mine, theirs) = match side {
                Side::A => (x, y),
                Side::B => (y, x),
            };
            let target = self.theory(theirs, d)?;
            let answers: Vec<(Theory, Theory)> = self.child_pairs(target);
            let responses = if theirs.is_empty_term() {
                Vec::new()
            } else {
                self.representative_splits(theirs, d)?
            };
            for split in self.representative_splits(mine, d)? {
                let pair = self.split_pair(&split, d);
                if answers.contains(&pair) {
                    continue;
                }
                let candidate = self.worst_response(side, split, &responses, d)?;
                if best.as_ref().is_none_or(|b| candidate.cost < b.cost) {
                    best = Some(candidate);
                }
            }
        }
        Ok(best.expect("differing theories give a winning move"))
    }

    /// Player II's best answer to `split`.
    fn worst_response(
        &mut self,
        side: Side,
        split: SplitClass,
        responses: &[SplitClass],
        d: u32,
    ) -> Result<Chosen, EngineError> {
        let mut chosen = Chosen {
            side,
            split,
            response: None,
            next: None,
            cost: 1,
        };
        for r in responses {
            let fl = self.first_difference(&chosen.split.left, &r.left, d - 1)?;
            let fr = self.first_difference(&chosen.split.right, &r.right, d - 1)?;
            let next = match (fl, fr) {
                (Some(l), Some(r)) if need(r) < need(l) => (Half::Right, r),
                (Some(l), _) => (Half::Left, l),
                (None, Some(r)) => (Half::Right, r),
                (None, None) => unreachable!("answer matches a missing pair"),
            };
            let cost = 1 + need(next.1);
            if chosen.next.is_none() || cost > chosen.cost {
                chosen.cost = cost;
                chosen.response = Some(r.clone());
                chosen.next = Some(next);
            }
        }
        Ok(chosen)
    }

    /// Replays a play and checks that every move of player I is winning and
    /// that player II is stuck at the end.
    pub fn validate_trace(&mut self, trace: &PlayTrace) -> Result<(), TraceError> {
        if trace.moves.len() > trace.depth as usize {
            return Err(TraceError::TooLong {
                used: trace.moves.len(),
                budget: trace.depth,
            });
        }
        if trace.moves.is_empty() {
            return if trace.depth == 0 && trace.a.is_empty_term() != trace.b.is_empty_term() {
                Ok(())
            } else {
                Err(TraceError::Unfinished)
            };
        }
        let mut x = trace.a.clone();
        let mut y = trace.b.clone();
        for (i, mv) in trace.moves.iter().enumerate() {
            let m = (trace.moves.len() - i) as u32;
            let (mine, theirs) = match mv.structure {
                Side::A => (&x, &y),
                Side::B => (&y, &x),
            };
            if !self.describes(mine, &mv.split, m)? {
                return Err(TraceError::BadSplit(i));
            }
            let pair = self.split_pair(&mv.split, m);
            let target = self.theory(theirs, m)?;
            if self.child_pairs(target).contains(&pair) {
                return Err(TraceError::NotWinning(i));
            }
            let Some(resp) = &mv.response else {
                if !theirs.is_empty_term() {
                    return Err(TraceError::MissingResponse(i));
                }
                if i + 1 != trace.moves.len() {
                    return Err(TraceError::Continues(i));
                }
                return Ok(());
            };
            if theirs.is_empty_term() || !self.describes(theirs, resp, m)? {
                return Err(TraceError::BadResponse(i));
            }
            let half = mv.continue_in.ok_or(TraceError::Unfinished)?;
            let (p, q) = match half {
                Half::Left => (mv.split.left.clone(), resp.left.clone()),
                Half::Right => (mv.split.right.clone(), resp.right.clone()),
            };
            (x, y) = match mv.structure {
                Side::A => (p, q),
                Side::B => (q, p),
            };
        }
        Err(TraceError::Unfinished)
    }

    /// `split.left + 1 + split.right` is m-equivalent to `t`.
    fn describes(&mut self, t: &Term, split: &SplitClass, m: u32) -> Result<bool, EngineError> {
        let whole = Term::cat([split.left.clone(), Term::ONE, split.right.clone()]);
        self.equiv_n(t, &whole, m)
    }
}

struct Chosen {
    side: Side,
    split: SplitClass,
    response: Option<SplitClass>,
    next: Option<(Half, u32)>,
    cost: u32,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::parse_term;

    fn p(s: &str) -> Term {
        parse_term(s).unwrap()
    }

    #[test]
    fn omega_against_two_copies() {
        let mut e = Engine::default();
        let t = e.witness(&p("w"), &p("w.2"), 3).unwrap();
        assert_eq!(t.len(), 3);
        let first = &t.moves[0];
        assert_eq!(first.structure, Side::B);
        assert_eq!(first.split.left, Term::omega());
        assert_eq!(first.split.right, Term::omega());
        e.validate_trace(&t).unwrap();
    }

    #[test]
    fn equivalent_orders_have_no_witness() {
        let mut e = Engine::default();
        assert_eq!(e.witness(&p("w"), &p("w.2"), 2), Err(EngineError::Equivalent(2)));
    }

    #[test]
    fn empty_against_nonempty() {
        let mut e = Engine::default();
        let t = e.witness(&Term::EMPTY, &p("w"), 3).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t.moves[0].structure, Side::B);
        assert_eq!(t.moves[0].response, None);
        e.validate_trace(&t).unwrap();
    }

    #[test]
    fn plays_are_as_short_as_the_first_difference() {
        let mut e = Engine::default();
        for (a, b) in [
            ("w", "w*"),
            ("3", "4"),
            ("w^2", "w^2.2"),
            ("w.w*", "w*.w"),
            ("w^w", "w^3"),
            ("sumw[1; w]", "sumw[; w*]"),
        ] {
            let (a, b) = (p(a), p(b));
            let k = e.first_difference(&a, &b, 8).unwrap().unwrap();
            let t = e.witness(&a, &b, 8).unwrap();
            assert_eq!(t.len() as u32, k.max(1), "{a} {b}");
            e.validate_trace(&t).unwrap();
        }
    }

    #[test]
    fn tampered_plays_are_rejected() {
        let mut e = Engine::default();
        let mut t = e.witness(&p("w"), &p("w.2"), 3).unwrap();
        t.moves[0].split.left = Term::Fin(2);
        assert!(e.validate_trace(&t).is_err());
        let mut t = e.witness(&p("w"), &p("w.2"), 3).unwrap();
        t.moves.pop();
        assert!(e.validate_trace(&t).is_err());
        let mut t = e.witness(&p("w"), &p("w.2"), 3).unwrap();
        t.depth = 2;
        assert!(matches!(e.validate_trace(&t), Err(TraceError::TooLong { .. })));
    }
}
