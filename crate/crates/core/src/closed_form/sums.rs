use std::collections::BTreeSet;

use super::{predict_monomial, Relation, Source, Verdict};
use crate::term::{canonical_omega_sum, is_redundant_pair, Direction, Monomial, OrdinalForm, PowerBlock, Term};

/// l(A₁ + A₂, B₁ + B₂) for monomials where A₁, B₁ start in one direction and
/// A₂, B₂ in the other. Usually the smaller of the two component lengths;
/// when the first parts start with ω* a table of exceptional shapes gives 2
/// or 3 instead.
pub fn predict_two_term_sum(a1: &Monomial, a2: &Monomial, b1: &Monomial, b2: &Monomial) -> Verdict {
    let all = [a1, a2, b1, b2];
    if all.iter().any(|m| m.tail.is_some() || m.has_infinite_exponent()) {
        return Verdict::out_of_scope("two-term sums need plain monomials with finite exponents");
    }
    if a1.start() != b1.start() || a2.start() != b2.start() || a1.start() == a2.start() {
        return Verdict::out_of_scope("the first parts must start alike and opposite to the second parts");
    }
    if a1.start() == Direction::Reverse {
        if let Some(v) = exceptional(a1, a2, b1, b2) {
            return v;
        }
    }
    let first = component(a1, b1);
    let second = component(a2, b2);
    match (first, second) {
        (Some(x), Some(y)) => match (x, y) {
            (None, None) => Verdict::equivalent(Source::TwoTermSum, "both components are equivalent"),
            (Some(l), None) | (None, Some(l)) => Verdict::length(l, Source::TwoTermSum, "one component is equivalent"),
            (Some(l1), Some(l2)) => Verdict::length(
                l1.min(l2),
                Source::TwoTermSum,
                format!("components have lengths {l1} and {l2}"),
            ),
        },
        _ => Verdict::out_of_scope("a component has no exact length"),
    }
}

/// `Some(None)`: equivalent; `Some(Some(l))`: length l; `None`: unknown.
fn component(x: &Monomial, y: &Monomial) -> Option<Option<u32>> {
    match predict_monomial(x, y).relation {
        Relation::EquivalentElementarily => Some(None),
        Relation::OptimalLength(l) => Some(Some(l)),
        _ => None,
    }
}

fn exceptional(a1: &Monomial, a2: &Monomial, b1: &Monomial, b2: &Monomial) -> Option<Verdict> {
    let (s, t, u, v) = (a1.len(), a2.len(), b1.len(), b2.len());
    let first = |m: &Monomial| m.finite_exponents().expect("finite")[0];
    let (m0, n0, p0, q0) = (first(a1), first(a2), first(b1), first(b2));
    let rows: [(bool, u32, &str); 10] = [
        (
            s == 1 && u == 1 && t >= 2 && v >= 2 && m0.min(p0) == 1 && m0 != p0,
            3,
            "single first factors of different exponents",
        ),
        (
            t == 1 && v == 1 && s >= 2 && u >= 2 && n0.min(q0) == 1 && n0 != q0,
            3,
            "single second factors of different exponents",
        ),
        (
            s == 1 && u >= 2 && (t >= 2 || (t == 1 && m0 >= 2)),
            3,
            "one first part has a single factor",
        ),
        (
            u == 1 && s >= 2 && (v >= 2 || (v == 1 && p0 >= 2)),
            3,
            "one first part has a single factor",
        ),
        (
            t == 1 && v >= 2 && (s >= 2 || (s == 1 && n0 >= 2)),
            3,
            "one second part has a single factor",
        ),
        (
            v == 1 && t >= 2 && (u >= 2 || (u == 1 && q0 >= 2)),
            3,
            "one second part has a single factor",
        ),
        (
            s == 1 && u >= 2 && t == 1 && m0 == 1,
            2,
            "single first and second factor against a longer first part",
        ),
        (
            u == 1 && s >= 2 && v == 1 && p0 == 1,
            2,
            "single first and second factor against a longer first part",
        ),
        (
            t == 1 && v >= 2 && s == 1 && n0 == 1,
            2,
            "single first and second factor against a longer second part",
        ),
        (
            v == 1 && t >= 2 && u == 1 && q0 == 1,
            2,
            "single first and second factor against a longer second part",
        ),
    ];
    let hits: Vec<(u32, &str)> = rows.iter().filter(|r| r.0).map(|r| (r.1, r.2)).collect();
    let (l, why) = *hits.first()?;
    if hits.iter().any(|h| h.0 != l) {
        return Some(Verdict::out_of_scope(
            "exceptional shapes with different lengths overlap",
        ));
    }
    Some(Verdict::length(l, Source::TwoTermSumException, why))
}

/// The ω-sum Σ M_n where M_n is ω* + ω + (n + 2) for n in `x` and ω* + ω
/// otherwise.
pub fn discrete_block_family(x: &[u32]) -> Term {
    let x: BTreeSet<u32> = x.iter().copied().collect();
    let prefix = match x.last() {
        Some(&top) => (0..=top).map(|n| block(x.contains(&n).then_some(n))).collect(),
        None => Vec::new(),
    };
    Term::rep_sum(Direction::Forward, prefix, vec![Term::zeta()])
}

fn block(marked: Option<u32>) -> Term {
    let extra = marked.map_or(Term::EMPTY, |n| Term::fin(u64::from(n) + 2));
    Term::cat([Term::omega_star(), Term::omega(), extra])
}

/// The index set of a term built by [`discrete_block_family`].
pub fn recognise_discrete_block_family(t: &Term) -> Option<Vec<u32>> {
    let Term::RepSum {
        index: Direction::Forward,
        prefix,
        period,
    } = t
    else {
        return None;
    };
    let unit = [Term::omega_star(), Term::omega()];
    if period.as_slice() != unit && period.as_slice() != [Term::cat(unit.clone())] {
        return None;
    }
    let mut x = Vec::new();
    for (n, b) in prefix.iter().enumerate() {
        let n = u32::try_from(n).ok()?;
        if *b == block(Some(n)) {
            x.push(n);
        } else if *b != block(None) {
            return None;
        }
    }
    Some(x)
}

/// An ω-indexed sum of powers ω^k and (ω*)^k with k ≥ 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecialSum {
    pub prefix: Vec<PowerBlock>,
    pub period: Vec<PowerBlock>,
}

impl SpecialSum {
    pub fn from_term(t: &Term) -> Option<SpecialSum> {
        let Term::RepSum {
            index: Direction::Forward,
            prefix,
            period,
        } = t
        else {
            return None;
        };
        let blocks = |v: &[Term]| -> Option<Vec<PowerBlock>> {
            v.iter()
                .map(|b| PowerBlock::from_term(b).filter(|p| p.exp >= 1))
                .collect()
        };
        Some(SpecialSum {
            prefix: blocks(prefix)?,
            period: blocks(period)?,
        })
    }

    /// The first `prefix + 3·period` blocks, enough to see every window of
    /// three consecutive blocks.
    fn unrolled(&self) -> Vec<PowerBlock> {
        let mut v = self.prefix.clone();
        for _ in 0..3 {
            v.extend_from_slice(&self.period);
        }
        v
    }

    /// No two consecutive blocks add up to one of them.
    pub fn is_non_redundant(&self) -> bool {
        self.unrolled().windows(2).all(|w| !is_redundant_pair(w[0], w[1]))
    }

    /// No run ω, ω*, ω^m and no run (ω*)^m, ω, ω*.
    pub fn avoids_collapsing_runs(&self) -> bool {
        let w = PowerBlock::new(Direction::Forward, 1);
        let ws = PowerBlock::new(Direction::Reverse, 1);
        self.unrolled().windows(3).all(|r| {
            let fwd = r[0] == w && r[1] == ws && r[2].dir == Direction::Forward;
            let rev = r[0].dir == Direction::Reverse && r[1] == w && r[2] == ws;
            !fwd && !rev
        })
    }

    pub fn canonical(&self) -> (Vec<PowerBlock>, Vec<PowerBlock>) {
        canonical_omega_sum(&self.prefix, &self.period)
    }
}

/// Sums of powers: ω^k + (ω*)^l + ω^m against ω^n, an ordinal against
/// β + ω^m + γ* or β + (ω*)^m + γ*, the [`discrete_block_family`], and
/// special ω-sums. Each shape is also tried with both orders reversed.
pub fn predict_special_sum(a: &Term, b: &Term) -> Verdict {
    let (ra, rb) = (a.reverse(), b.reverse());
    let oriented = [(a, b), (b, a), (&ra, &rb), (&rb, &ra)];
    let shapes: [fn(&Term, &Term) -> Option<Verdict>; 4] = [
        alternating_collapse,
        discrete_family,
        ordinal_against_reversed_tail,
        special_omega_sums,
    ];
    for shape in shapes {
        for (x, y) in oriented {
            if let Some(v) = shape(x, y) {
                return v;
            }
        }
    }
    Verdict::out_of_scope("no closed form covers this pair")
}

/// ω^k + (ω*)^l + ω^m against ω^n.
fn alternating_collapse(a: &Term, b: &Term) -> Option<Verdict> {
    let Term::Cat(parts) = a else { return None };
    let [x, y, z] = parts.as_slice() else { return None };
    let (Direction::Forward, k) = x.as_power()? else {
        return None;
    };
    let (Direction::Reverse, l) = y.as_power()? else {
        return None;
    };
    let (Direction::Forward, m) = z.as_power()? else {
        return None;
    };
    let (Direction::Forward, n) = b.as_power()? else {
        return None;
    };
    if k == 1 && l == 1 && m == n {
        return Some(Verdict::equivalent(
            Source::AlternatingCollapse,
            "ω + ω* + ω^m collapses to ω^m",
        ));
    }
    let mut bounds = Vec::new();
    if m != n {
        bounds.push((2 * m.min(n) + 2, "the last exponents differ"));
    }
    if l > 1 {
        bounds.push((3, "the middle exponent exceeds 1"));
    }
    if l == 1 && m == n && k > 1 {
        bounds.push((6, "the first exponent exceeds 1"));
    }
    let &(b, why) = bounds.iter().min_by_key(|x| x.0)?;
    Some(Verdict::at_most(Some(b), Source::AlternatingCollapse, why))
}

fn discrete_family(a: &Term, b: &Term) -> Option<Verdict> {
    let x: BTreeSet<u32> = recognise_discrete_block_family(a)?.into_iter().collect();
    let y: BTreeSet<u32> = recognise_discrete_block_family(b)?.into_iter().collect();
    let Some(&d) = x.symmetric_difference(&y).min() else {
        return Some(Verdict::equivalent(Source::DiscreteBlockFamily, "same index set"));
    };
    Some(Verdict::at_most(
        Some(d + 4),
        Source::DiscreteBlockFamily,
        format!("index sets first differ at {d}"),
    ))
}

/// An ordinal α against β + ω^m + γ* with γ infinite, or against
/// β + (ω*)^m + γ* with β infinite (m ≥ 2, β and γ ordinals).
fn ordinal_against_reversed_tail(a: &Term, b: &Term) -> Option<Verdict> {
    OrdinalForm::from_term(a)?;
    let Term::Cat(parts) = b else { return None };
    let infinite = |o: &OrdinalForm| o.head > 0 || o.tail.lead_exponent().is_some_and(|e| e >= 1);
    for (i, p) in parts.iter().enumerate() {
        let Some((dir, m)) = p.as_power() else { continue };
        if m < 2 {
            continue;
        }
        let Some(beta) = OrdinalForm::from_term(&Term::cat(parts[..i].iter().cloned())) else {
            continue;
        };
        let Some(gamma) = OrdinalForm::from_term(&Term::cat(parts[i + 1..].iter().cloned()).reverse()) else {
            continue;
        };
        let hit = match dir {
            Direction::Forward => infinite(&gamma),
            Direction::Reverse => infinite(&beta),
        };
        if hit {
            return Some(Verdict::at_most(
                Some(4),
                Source::OrdinalAgainstReversedTail,
                format!("block {i} is a power of exponent {m} between an ordinal and a reversed ordinal"),
            ));
        }
    }
    None
}

fn special_omega_sums(a: &Term, b: &Term) -> Option<Verdict> {
    let x = SpecialSum::from_term(a)?;
    let y = SpecialSum::from_term(b)?;
    for s in [&x, &y] {
        if !s.is_non_redundant() || !s.avoids_collapsing_runs() {
            return None;
        }
    }
    Some(if x.canonical() == y.canonical() {
        Verdict::equivalent(Source::SpecialOmegaSum, "same block sequence")
    } else {
        Verdict::at_most(
            None,
            Source::SpecialOmegaSum,
            "different block sequences; the engine finds the depth",
        )
    })
}
