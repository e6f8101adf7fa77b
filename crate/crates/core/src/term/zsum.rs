//! Sums of powers of ω and ω*, indexed by ℤ or ω, compared up to translation
//! of the index.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::{Direction, Term};

/// `ω^exp` or `(ω*)^exp`; exponent 0 is a single point and is stored with
/// direction `Forward`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PowerBlock {
    pub dir: Direction,
    pub exp: u32,
}

impl PowerBlock {
    pub fn new(dir: Direction, exp: u32) -> PowerBlock {
        if exp == 0 {
            PowerBlock {
                dir: Direction::Forward,
                exp: 0,
            }
        } else {
            PowerBlock { dir, exp }
        }
    }

    pub fn point() -> PowerBlock {
        PowerBlock::new(Direction::Forward, 0)
    }

    pub fn from_term(t: &Term) -> Option<PowerBlock> {
        if *t == Term::ONE {
            return Some(PowerBlock::point());
        }
        t.as_power().map(|(d, k)| PowerBlock::new(d, k))
    }

    pub fn to_term(self) -> Term {
        Term::power(self.dir, self.exp)
    }

    fn exp_in(self, d: Direction) -> Option<u32> {
        (self.exp == 0 || self.dir == d).then_some(self.exp)
    }
}

impl fmt::Display for PowerBlock {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_term().to_string())
    }
}

/// `x + y` is isomorphic to `x` or to `y`.
pub fn is_redundant_pair(x: PowerBlock, y: PowerBlock) -> bool {
    if let (Some(a), Some(b)) = (x.exp_in(Direction::Forward), y.exp_in(Direction::Forward)) {
        if b >= 1 && a < b {
            return true;
        }
    }
    if let (Some(a), Some(b)) = (x.exp_in(Direction::Reverse), y.exp_in(Direction::Reverse)) {
        if a >= 1 && b < a {
            return true;
        }
    }
    false
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ZSumError {
    #[error("expected an ω*-indexed sum followed by an ω-indexed sum, got {0}")]
    Shape(String),
    #[error("block {0} is not a finite power of w or w*")]
    NotPower(String),
    #[error("adjacent blocks {0} + {1} collapse to one of them")]
    Redundant(String, String),
}

/// A bi-infinite sequence `… u u u w v v v …` of power blocks.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ZSum {
    pub left_period: Vec<PowerBlock>,
    pub middle: Vec<PowerBlock>,
    pub right_period: Vec<PowerBlock>,
}

/// Translation-invariant form of a [`ZSum`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CanonicalZSum {
    /// Purely periodic; the period is the least rotation.
    Periodic(Vec<PowerBlock>),
    /// Anchored at the first position from which the sequence is periodic to
    /// the right.
    Anchored {
        left_period: Vec<PowerBlock>,
        middle: Vec<PowerBlock>,
        right_period: Vec<PowerBlock>,
    },
}

fn blocks_of(list: &[Term]) -> Result<Vec<PowerBlock>, ZSumError> {
    list.iter()
        .map(|t| PowerBlock::from_term(t).ok_or_else(|| ZSumError::NotPower(t.to_string())))
        .collect()
}

impl ZSum {
    /// Reads `sumw*[p1; q1] + sumw[p2; q2]`.
    pub fn from_term(t: &Term) -> Result<ZSum, ZSumError> {
        let shape = || ZSumError::Shape(t.to_string());
        let Term::Cat(parts) = t else {
            return Err(shape());
        };
        let [Term::RepSum {
            index: Direction::Reverse,
            prefix: p1,
            period: q1,
        }, Term::RepSum {
            index: Direction::Forward,
            prefix: p2,
            period: q2,
        }] = parts.as_slice()
        else {
            return Err(shape());
        };
        let mut middle = blocks_of(p1)?;
        middle.extend(blocks_of(p2)?);
        let z = ZSum {
            left_period: blocks_of(q1)?,
            middle,
            right_period: blocks_of(q2)?,
        };
        z.check_non_redundant()?;
        Ok(z)
    }

    pub fn to_term(&self) -> Term {
        let terms = |v: &[PowerBlock]| v.iter().map(|b| b.to_term()).collect::<Vec<_>>();
        Term::cat([
            Term::rep_sum(Direction::Reverse, Vec::new(), terms(&self.left_period)),
            Term::rep_sum(Direction::Forward, terms(&self.middle), terms(&self.right_period)),
        ])
    }

    /// Every adjacent pair, including the wrap-around of each period.
    pub fn check_non_redundant(&self) -> Result<(), ZSumError> {
        let u = &self.left_period;
        let v = &self.right_period;
        let mut seq: Vec<PowerBlock> = Vec::new();
        seq.extend(u.iter().chain(u));
        seq.extend(&self.middle);
        seq.extend(v.iter().chain(v));
        for w in seq.windows(2) {
            if is_redundant_pair(w[0], w[1]) {
                return Err(ZSumError::Redundant(w[0].to_string(), w[1].to_string()));
            }
        }
        Ok(())
    }

    pub fn canonical(&self) -> CanonicalZSum {
        let mut u = primitive_root(&self.left_period);
        let mut w = self.middle.clone();
        let mut v = primitive_root(&self.right_period);
        // Move the start of the right periodic part as far left as possible.
        let limit = u.len() * v.len() + u.len() + v.len();
        let mut steps = 0;
        loop {
            let candidate = w.last().copied().unwrap_or_else(|| *u.last().unwrap());
            if candidate != *v.last().unwrap() {
                break;
            }
            if w.pop().is_none() {
                steps += 1;
                if steps > limit {
                    return CanonicalZSum::Periodic(least_rotation(&v));
                }
                u.rotate_right(1);
            }
            v.rotate_right(1);
        }
        // Then absorb the head of the middle into the left period.
        while let Some(&first) = w.first() {
            if first != u[0] {
                break;
            }
            w.remove(0);
            u.rotate_left(1);
        }
        CanonicalZSum::Anchored {
            left_period: u,
            middle: w,
            right_period: v,
        }
    }
}

/// Whether two ℤ-sums of power blocks differ only by a translation of the
/// index.
pub fn iso_zsum_by_translation(a: &Term, b: &Term) -> Result<bool, ZSumError> {
    Ok(ZSum::from_term(a)?.canonical() == ZSum::from_term(b)?.canonical())
}

/// Shortest `r` with `s = r^k`.
pub fn primitive_root<T: Clone + PartialEq>(s: &[T]) -> Vec<T> {
    let n = s.len();
    for p in 1..=n {
        if n.is_multiple_of(p) && (p..n).all(|i| s[i] == s[i - p]) {
            return s[..p].to_vec();
        }
    }
    s.to_vec()
}

pub fn least_rotation<T: Clone + Ord>(s: &[T]) -> Vec<T> {
    (0..s.len().max(1))
        .map(|i| {
            let mut r = s.to_vec();
            r.rotate_left(i.min(s.len()));
            r
        })
        .min()
        .unwrap_or_default()
}

/// Canonical `(prefix, period)` for the ω-indexed sum `prefix + period·ω`:
/// primitive period, and the prefix shortened as far as the period allows.
pub fn canonical_omega_sum<T: Clone + PartialEq>(prefix: &[T], period: &[T]) -> (Vec<T>, Vec<T>) {
    let mut v = primitive_root(period);
    let mut w = prefix.to_vec();
    while let (Some(x), Some(y)) = (w.last(), v.last()) {
        if x != y {
            break;
        }
        w.pop();
        v.rotate_right(1);
    }
    (w, v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::parse_term;

    fn iso(a: &str, b: &str) -> bool {
        iso_zsum_by_translation(&parse_term(a).unwrap(), &parse_term(b).unwrap()).unwrap()
    }

    #[test]
    fn shift_by_one_block() {
        assert!(iso("sumw*[; w, w*] + sumw[; w, w*]", "sumw*[; w*, w] + sumw[; w*, w]"));
        assert!(iso("sumw*[; w, w*] + sumw[; w, w*]", "sumw*[; w, w*] + sumw[w; w*, w]"));
    }

    #[test]
    fn unique_defect_is_not_a_translation() {
        assert!(!iso(
            "sumw*[; w, w*] + sumw[w^2; w*, w]",
            "sumw*[; w, w*] + sumw[w^3; w*, w]"
        ));
        assert!(iso(
            "sumw*[; w, w*] + sumw[w^2; w*, w]",
            "sumw*[w; w, w*] + sumw[w*, w^2; w*, w]"
        ));
    }

    #[test]
    fn rotated_periods() {
        assert!(iso(
            "sumw*[; w, w*, w^2] + sumw[; w, w*, w^2]",
            "sumw*[; w^2, w, w*] + sumw[; w^2, w, w*]"
        ));
        assert!(!iso(
            "sumw*[; w, w*, w^2, w*] + sumw[; w, w*, w^2, w*]",
            "sumw*[; w, w*, w*, w^2] + sumw[; w, w*, w*, w^2]"
        ));
    }

    #[test]
    fn different_periods_on_each_side() {
        let a = "sumw*[; w*] + sumw[; w, w*]";
        assert!(iso(a, "sumw*[w*; w*] + sumw[w; w*, w]"));
        assert!(iso(a, "sumw*[; w*] + sumw[w*; w, w*]"));
        assert!(!iso(a, "sumw*[; w*] + sumw[; w*^2, w]"));
    }

    #[test]
    fn rejects_bad_shapes() {
        let t = parse_term("sumw[; w]").unwrap();
        assert!(matches!(iso_zsum_by_translation(&t, &t), Err(ZSumError::Shape(_))));
        let t = parse_term("sumw*[; w.w*] + sumw[; w]").unwrap();
        assert!(matches!(iso_zsum_by_translation(&t, &t), Err(ZSumError::NotPower(_))));
        let t = parse_term("sumw*[; w*] + sumw[1; w]").unwrap();
        assert!(matches!(iso_zsum_by_translation(&t, &t), Err(ZSumError::Redundant(..))));
    }

    #[test]
    fn redundancy_rules() {
        let p = PowerBlock::point();
        let w = |k| PowerBlock::new(Direction::Forward, k);
        let ws = |k| PowerBlock::new(Direction::Reverse, k);
        assert!(is_redundant_pair(p, w(1)));
        assert!(is_redundant_pair(w(1), w(2)));
        assert!(!is_redundant_pair(w(2), w(1)));
        assert!(is_redundant_pair(ws(2), ws(1)));
        assert!(is_redundant_pair(ws(1), p));
        assert!(!is_redundant_pair(p, p));
        assert!(!is_redundant_pair(w(1), ws(1)));
        assert!(!is_redundant_pair(w(1), p));
    }

    #[test]
    fn omega_sum_canonical_form() {
        let (w, v) = canonical_omega_sum(&[1, 2, 1, 2], &[1, 2, 1, 2]);
        assert!(w.is_empty());
        assert_eq!(v, vec![1, 2]);
        let (w, v) = canonical_omega_sum(&[3, 2], &[1, 2]);
        assert_eq!((w, v), (vec![3], vec![2, 1]));
    }
}
