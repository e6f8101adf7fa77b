//! Monomials over ω / ω* and ordinals below ω^ω·ω in Cantor normal form.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{Direction, Term, TermError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Exponent {
    Finite(u32),
    /// Exactly ω.
    Omega,
}

/// `M_0^{m_0} · M_1^{m_1} ⋯` with alternating directions, optionally
/// followed by a finite right factor (`tail` copies of the whole product).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Monomial {
    pub factors: Vec<(Direction, Exponent)>,
    pub tail: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MonomialError {
    #[error("monomial needs at least one factor")]
    NoFactors,
    #[error("factor {0} has the same direction as its predecessor")]
    NotAlternating(usize),
    #[error("factor {0} has exponent 0")]
    ZeroExponent(usize),
    #[error("finite tail must be at least 2")]
    SmallTail,
}

impl Monomial {
    pub fn new(factors: Vec<(Direction, Exponent)>, tail: Option<u64>) -> Result<Monomial, MonomialError> {
        if factors.is_empty() {
            return Err(MonomialError::NoFactors);
        }
        for (i, (d, e)) in factors.iter().enumerate() {
            if *e == Exponent::Finite(0) {
                return Err(MonomialError::ZeroExponent(i));
            }
            if i > 0 && factors[i - 1].0 == *d {
                return Err(MonomialError::NotAlternating(i));
            }
        }
        if tail.is_some_and(|k| k < 2) {
            return Err(MonomialError::SmallTail);
        }
        Ok(Monomial { factors, tail })
    }

    /// Alternating finite powers starting in direction `start`.
    pub fn alternating(start: Direction, exps: &[u32]) -> Result<Monomial, MonomialError> {
        let mut d = start;
        let mut factors = Vec::with_capacity(exps.len());
        for &e in exps {
            factors.push((d, Exponent::Finite(e)));
            d = d.flip();
        }
        Monomial::new(factors, None)
    }

    pub fn start(&self) -> Direction {
        self.factors[0].0
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// Finite exponents, or `None` if some exponent is ω.
    pub fn finite_exponents(&self) -> Option<Vec<u32>> {
        self.factors
            .iter()
            .map(|(_, e)| match e {
                Exponent::Finite(k) => Some(*k),
                Exponent::Omega => None,
            })
            .collect()
    }

    pub fn has_infinite_exponent(&self) -> bool {
        self.factors.iter().any(|(_, e)| *e == Exponent::Omega)
    }

    /// The monomial with every direction flipped; denotes the reversed order.
    pub fn reverse(&self) -> Monomial {
        Monomial {
            factors: self.factors.iter().map(|(d, e)| (d.flip(), *e)).collect(),
            tail: self.tail,
        }
    }

    /// Builds the term. An ω exponent is only expressible on the first factor.
    pub fn to_term(&self) -> Result<Term, TermError> {
        let mut acc = Term::ONE;
        for (i, (d, e)) in self.factors.iter().enumerate() {
            match e {
                Exponent::Finite(k) => {
                    for _ in 0..*k {
                        acc = Term::prod(acc, *d);
                    }
                }
                Exponent::Omega if i == 0 => acc = Term::Pow(*d),
                Exponent::Omega => return Err(TermError::InfiniteIndex(acc.to_string())),
            }
        }
        Ok(match self.tail {
            Some(k) => acc.times(k),
            None => acc,
        })
    }

    /// Recognises a product chain over a point or over ω^ω, optionally
    /// repeated a finite number of times.
    pub fn from_term(t: &Term) -> Option<Monomial> {
        if let Term::Cat(parts) = t {
            let first = &parts[0];
            if parts.iter().any(|p| p != first) {
                return None;
            }
            let m = Monomial::from_term(first)?;
            if m.tail.is_some() {
                return None;
            }
            return Some(Monomial {
                tail: Some(parts.len() as u64),
                ..m
            });
        }
        let mut dirs = Vec::new();
        let mut cur = t;
        while let Term::Prod(b, d) = cur {
            dirs.push(*d);
            cur = b;
        }
        dirs.reverse();
        let mut factors: Vec<(Direction, Exponent)> = Vec::new();
        match cur {
            Term::Fin(1) => {}
            Term::Pow(d) => factors.push((*d, Exponent::Omega)),
            _ => return None,
        }
        for d in dirs {
            match factors.last_mut() {
                Some((ld, Exponent::Finite(k))) if *ld == d => *k += 1,
                Some((ld, Exponent::Omega)) if *ld == d => {}
                _ => factors.push((d, Exponent::Finite(1))),
            }
        }
        if factors.is_empty() {
            return None;
        }
        Some(Monomial { factors, tail: None })
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (d, e)) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str(".")?;
            }
            f.write_str(match d {
                Direction::Forward => "w",
                Direction::Reverse => "w*",
            })?;
            match e {
                Exponent::Finite(1) => {}
                Exponent::Finite(k) => write!(f, "^{k}")?,
                Exponent::Omega => f.write_str("^w")?,
            }
        }
        if let Some(k) = self.tail {
            write!(f, ".{k}")?;
        }
        Ok(())
    }
}

/// `Σ ω^exp · coeff` with strictly decreasing exponents; empty is 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct CnfOrdinal(pub Vec<(u32, u64)>);

impl CnfOrdinal {
    pub fn zero() -> CnfOrdinal {
        CnfOrdinal(Vec::new())
    }

    pub fn finite(k: u64) -> CnfOrdinal {
        if k == 0 {
            CnfOrdinal::zero()
        } else {
            CnfOrdinal(vec![(0, k)])
        }
    }

    /// ω^e · c
    pub fn monomial(e: u32, c: u64) -> CnfOrdinal {
        if c == 0 {
            CnfOrdinal::zero()
        } else {
            CnfOrdinal(vec![(e, c)])
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_valid(&self) -> bool {
        self.0.iter().all(|&(_, c)| c >= 1) && self.0.windows(2).all(|w| w[0].0 > w[1].0)
    }

    pub fn lead_exponent(&self) -> Option<u32> {
        self.0.first().map(|&(e, _)| e)
    }

    /// Number of summands ω^{m_i} when written without coefficients.
    pub fn summand_count(&self) -> u64 {
        self.0.iter().map(|&(_, c)| c).sum()
    }

    pub fn add(&self, other: &CnfOrdinal) -> CnfOrdinal {
        let Some(lead) = other.lead_exponent() else {
            return self.clone();
        };
        let mut out: Vec<(u32, u64)> = self.0.iter().copied().filter(|&(e, _)| e >= lead).collect();
        let mut rest = other.0.iter().copied();
        if let Some(last) = out.last_mut() {
            if last.0 == lead {
                last.1 += other.0[0].1;
                rest.next();
            }
        }
        out.extend(rest);
        CnfOrdinal(out)
    }

    /// `self · ω`; zero stays zero.
    pub fn times_omega(&self) -> CnfOrdinal {
        match self.lead_exponent() {
            None => CnfOrdinal::zero(),
            Some(e) => CnfOrdinal(vec![(e + 1, 1)]),
        }
    }

    pub fn to_term(&self) -> Term {
        Term::cat(self.0.iter().map(|&(e, c)| Term::power(Direction::Forward, e).times(c)))
    }
}

impl PartialOrd for CnfOrdinal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for CnfOrdinal {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.0.iter().zip(&other.0) {
            let o = a.0.cmp(&b.0).then(a.1.cmp(&b.1));
            if o != Ordering::Equal {
                return o;
            }
        }
        self.0.len().cmp(&other.0.len())
    }
}

impl fmt::Display for CnfOrdinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("0");
        }
        f.write_str(&self.to_term().to_string())
    }
}

/// `ω^ω · head + tail`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct OrdinalForm {
    pub head: u64,
    pub tail: CnfOrdinal,
}

impl OrdinalForm {
    pub fn new(head: u64, tail: CnfOrdinal) -> OrdinalForm {
        OrdinalForm { head, tail }
    }

    pub fn add(&self, other: &OrdinalForm) -> OrdinalForm {
        if other.head > 0 {
            OrdinalForm::new(self.head + other.head, other.tail.clone())
        } else {
            OrdinalForm::new(self.head, self.tail.add(&other.tail))
        }
    }

    pub fn is_zero(&self) -> bool {
        self.head == 0 && self.tail.is_zero()
    }

    /// The ordinal denoted by a term, if it is a well-order below ω^{ω+1}.
    pub fn from_term(t: &Term) -> Option<OrdinalForm> {
        match t {
            Term::Fin(k) => Some(OrdinalForm::new(0, CnfOrdinal::finite(*k))),
            Term::Pow(Direction::Forward) => Some(OrdinalForm::new(1, CnfOrdinal::zero())),
            Term::Pow(Direction::Reverse) => None,
            Term::Prod(b, Direction::Forward) => {
                let base = OrdinalForm::from_term(b)?;
                times_omega(&base)
            }
            Term::Prod(_, Direction::Reverse) => None,
            Term::Cat(parts) => parts.iter().try_fold(OrdinalForm::default(), |acc, p| {
                Some(acc.add(&OrdinalForm::from_term(p)?))
            }),
            Term::RepSum {
                index: Direction::Forward,
                prefix,
                period,
            } => {
                let sum = |list: &[Term]| {
                    list.iter().try_fold(OrdinalForm::default(), |acc, p| {
                        Some(acc.add(&OrdinalForm::from_term(p)?))
                    })
                };
                let pre = sum(prefix)?;
                let per = sum(period)?;
                Some(pre.add(&times_omega(&per)?))
            }
            Term::RepSum { .. } => None,
        }
    }

    pub fn to_term(&self) -> Term {
        Term::cat([Term::Pow(Direction::Forward).times(self.head), self.tail.to_term()])
    }
}

fn times_omega(a: &OrdinalForm) -> Option<OrdinalForm> {
    if a.head > 0 {
        None
    } else {
        Some(OrdinalForm::new(0, a.tail.times_omega()))
    }
}

impl fmt::Display for OrdinalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        f.write_str(&self.to_term().to_string())
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
    fn monomial_round_trip() {
        let m = Monomial::alternating(Direction::Forward, &[2, 1, 3]).unwrap();
        let t = m.to_term().unwrap();
        assert_eq!(t, p("w^2.w*.w^3"));
        assert_eq!(Monomial::from_term(&t), Some(m.clone()));
        assert_eq!(m.to_string(), "w^2.w*.w^3");
    }

    #[test]
    fn monomial_with_tail_and_omega() {
        let m = Monomial::new(
            vec![
                (Direction::Forward, Exponent::Omega),
                (Direction::Reverse, Exponent::Finite(1)),
            ],
            Some(3),
        )
        .unwrap();
        let t = m.to_term().unwrap();
        assert_eq!(t, p("w^w.w*.3"));
        assert_eq!(Monomial::from_term(&t), Some(m));
    }

    #[test]
    fn monomial_validation() {
        assert_eq!(
            Monomial::new(
                vec![
                    (Direction::Forward, Exponent::Finite(1)),
                    (Direction::Forward, Exponent::Finite(1))
                ],
                None
            ),
            Err(MonomialError::NotAlternating(1))
        );
        assert!(Monomial::alternating(Direction::Forward, &[0]).is_err());
        assert!(Monomial::from_term(&p("w + 1")).is_none());
        assert!(Monomial::from_term(&Term::ONE).is_none());
    }

    #[test]
    fn cnf_addition_absorbs_smaller_terms() {
        let a = CnfOrdinal(vec![(2, 1), (0, 3)]);
        let b = CnfOrdinal(vec![(1, 2)]);
        assert_eq!(a.add(&b), CnfOrdinal(vec![(2, 1), (1, 2)]));
        assert_eq!(b.add(&b), CnfOrdinal(vec![(1, 4)]));
        assert!(a > b);
        assert_eq!(a.summand_count(), 4);
    }

    #[test]
    fn ordinal_of_terms() {
        let f = OrdinalForm::from_term(&p("w^w.2 + w^2 + 3")).unwrap();
        assert_eq!(f, OrdinalForm::new(2, CnfOrdinal(vec![(2, 1), (0, 3)])));
        let g = OrdinalForm::from_term(&p("3 + w")).unwrap();
        assert_eq!(g, OrdinalForm::new(0, CnfOrdinal(vec![(1, 1)])));
        let h = OrdinalForm::from_term(&p("sumw[1; w, 2]")).unwrap();
        assert_eq!(h, OrdinalForm::new(0, CnfOrdinal(vec![(2, 1)])));
        assert!(OrdinalForm::from_term(&p("w*")).is_none());
        assert!(OrdinalForm::from_term(&p("w^w.w")).is_none());
        assert_eq!(OrdinalForm::from_term(&f.to_term()), Some(f));
    }
}
