use super::{Source, Verdict};
use crate::term::{Exponent, Monomial};

/// Cuts a monomial after its first ω exponent: the next factor, if any, is
/// kept with exponent 1 and everything after it is dropped. The result is
/// elementarily equivalent to the input. Finite monomials are unchanged.
pub fn simple_form(m: &Monomial) -> Monomial {
    let Some(i) = m.factors.iter().position(|(_, e)| *e == Exponent::Omega) else {
        return m.clone();
    };
    let mut factors = m.factors[..=i].to_vec();
    if let Some((d, _)) = m.factors.get(i + 1) {
        factors.push((*d, Exponent::Finite(1)));
    }
    Monomial { factors, tail: m.tail }
}

/// l(A, B) for two monomials.
pub fn predict_monomial(a: &Monomial, b: &Monomial) -> Verdict {
    if a == b {
        return Verdict::equivalent(Source::IdenticalMonomials, "identical monomials");
    }
    if a.has_infinite_exponent() || b.has_infinite_exponent() {
        let (sa, sb) = (simple_form(a), simple_form(b));
        if sa == sb {
            return Verdict::equivalent(Source::OmegaExponentSimpleForm, format!("both reduce to {sa}"));
        }
        return Verdict::out_of_scope(format!("ω exponents with different simple forms {sa} and {sb}"));
    }
    if a.tail.is_some() || b.tail.is_some() {
        return Verdict::out_of_scope("finite multiples of different monomials");
    }
    let (Some(x), Some(y)) = (a.finite_exponents(), b.finite_exponents()) else {
        unreachable!("exponents are finite here");
    };
    if a.start() != b.start() {
        let l = if x.len() == 1 || y.len() == 1 { 1 } else { 2 };
        return Verdict::length(
            l,
            Source::OppositeStartMonomials,
            "first factors point in opposite directions",
        );
    }
    if x.len() == y.len() {
        equal_length(&x, &y)
    } else if x.len() < y.len() {
        unequal_length(&x, &y)
    } else {
        unequal_length(&y, &x)
    }
}

fn equal_length(m: &[u32], n: &[u32]) -> Verdict {
    let s = m.len();
    let t = (0..s).find(|&i| m[i] != n[i]).expect("different exponent lists");
    let base = 2 * (m[..t].iter().sum::<u32>() + m[t].min(n[t]));
    let extra = if t + 1 == s {
        0
    } else if t + 2 == s {
        1
    } else {
        2
    };
    Verdict::length(
        base + extra,
        Source::EqualLengthMonomials,
        format!("{s} factors each, first difference at factor {t}"),
    )
}

/// `m` has fewer factors than `n`.
fn unequal_length(m: &[u32], n: &[u32]) -> Verdict {
    let s = m.len();
    let u = (0..s).find(|&i| m[i] != n[i]).unwrap_or(s);
    let sum = |k: usize| m[..k].iter().sum::<u32>();
    let l = if u + 1 >= s {
        2 * sum(s - 1) + 1
    } else if u + 2 == s {
        if m[u] < n[u] {
            2 * (sum(u) + m[u]) + 1
        } else {
            2 * (sum(u) + n[u]) + 2
        }
    } else {
        2 * (sum(u) + m[u].min(n[u])) + 2
    };
    Verdict::length(
        l,
        Source::UnequalLengthMonomials,
        format!("{s} against {} factors, first difference at factor {u}", n.len()),
    )
}
