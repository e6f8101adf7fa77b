use std::cmp::Ordering;

use super::{Source, Verdict};
use crate::term::{CnfOrdinal, OrdinalForm};

/// Ordinals below ω^{ω+1}.
///
/// Equivalence holds iff the parts below ω^ω agree and the ω^ω parts are
/// both zero or both nonzero. ω^n against ω^n·β (β > 1) has length 2n.
/// Below ω^ω the larger ordinal α = ω^{m₀} + … (k summands) gives ≢_{2m₀+k}.
pub fn predict_ordinal(a: &OrdinalForm, b: &OrdinalForm) -> Verdict {
    if a.tail == b.tail && (a.head > 0) == (b.head > 0) {
        return Verdict::equivalent(
            Source::OrdinalClassification,
            "same part below ω^ω and the ω^ω parts are both zero or both nonzero",
        );
    }
    if let Some(n) = power_against_multiple(a, b).or_else(|| power_against_multiple(b, a)) {
        return Verdict::length(
            2 * n,
            Source::PowerTimesOrdinal,
            format!("ω^{n} against a proper multiple"),
        );
    }
    if a.head == 0 && b.head == 0 {
        let big = match cnf_cmp(&a.tail, &b.tail) {
            Ordering::Less => &b.tail,
            _ => &a.tail,
        };
        let m0 = big.lead_exponent().unwrap_or(0);
        let k = big.summand_count();
        let bound = u64::from(2 * m0) + k;
        return match u32::try_from(bound) {
            Ok(bound) => Verdict::at_most(
                Some(bound),
                Source::OrdinalNormalFormBound,
                format!("larger ordinal has leading exponent {m0} and {k} summands"),
            ),
            Err(_) => Verdict::at_most(None, Source::OrdinalClassification, "summand count overflows"),
        };
    }
    Verdict::at_most(
        None,
        Source::OrdinalClassification,
        "the parts below ω^ω differ or one ω^ω part is zero",
    )
}

/// `Some(n)` if `a` is ω^n (n ≥ 1) and `b` is ω^n·β with β > 1.
fn power_against_multiple(a: &OrdinalForm, b: &OrdinalForm) -> Option<u32> {
    if a.head != 0 {
        return None;
    }
    let [(n, 1)] = a.tail.0.as_slice() else { return None };
    let n = *n;
    if n == 0 || b == a || b.is_zero() {
        return None;
    }
    b.tail.0.iter().all(|&(e, _)| e >= n).then_some(n)
}

fn cnf_cmp(a: &CnfOrdinal, b: &CnfOrdinal) -> Ordering {
    for (x, y) in a.0.iter().zip(&b.0) {
        let c = x.0.cmp(&y.0).then(x.1.cmp(&y.1));
        if c != Ordering::Equal {
            return c;
        }
    }
    a.0.len().cmp(&b.0.len())
}
