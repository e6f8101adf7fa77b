//! Brute-force EF games on finite chains.

use std::collections::HashMap;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FiniteOracleError {
    #[error("chain sizes must be at most {max}, got {k} and {l}")]
    TooLarge { k: u64, l: u64, max: u64 },
    #[error("at most {max} moves are supported, got {n}")]
    TooDeep { n: u32, max: u32 },
}

pub const MAX_CHAIN: u64 = 20;
pub const MAX_MOVES: u32 = 5;

/// Whether player II wins the n-move game on chains of k and l points. With
/// no moves, whether both chains are empty or both are not.
///
/// Plays the game literally: a position is the list of chosen pairs, and
/// only the gaps between chosen points matter, so positions are memoised
/// by their sorted gap pairs.
pub fn finite_oracle(k: u64, l: u64, n: u32) -> Result<bool, FiniteOracleError> {
    if k > MAX_CHAIN || l > MAX_CHAIN {
        return Err(FiniteOracleError::TooLarge { k, l, max: MAX_CHAIN });
    }
    if n > MAX_MOVES {
        return Err(FiniteOracleError::TooDeep { n, max: MAX_MOVES });
    }
    if n == 0 {
        return Ok((k == 0) == (l == 0));
    }
    let mut memo = HashMap::new();
    Ok(duplicator_wins(vec![(k, l)], n, &mut memo))
}

type Gaps = Vec<(u64, u64)>;

fn duplicator_wins(mut gaps: Gaps, n: u32, memo: &mut HashMap<(Gaps, u32), bool>) -> bool {
    // a gap empty on one side only is already lost once a move lands there,
    // and an empty pair of gaps plays no role
    gaps.retain(|&(a, b)| a > 0 || b > 0);
    gaps.sort_unstable();
    if n == 0 {
        return true;
    }
    if gaps.iter().any(|&(a, b)| (a == 0) != (b == 0)) {
        return false;
    }
    if let Some(&w) = memo.get(&(gaps.clone(), n)) {
        return w;
    }
    let mut win = true;
    'spoiler: for g in 0..gaps.len() {
        let (a, b) = gaps[g];
        for flip in [false, true] {
            let (mine, theirs) = if flip { (b, a) } else { (a, b) };
            for x in 0..mine {
                let answered = (0..theirs).any(|y| {
                    let (l, r) = if flip {
                        ((y, x), (theirs - 1 - y, mine - 1 - x))
                    } else {
                        ((x, y), (mine - 1 - x, theirs - 1 - y))
                    };
                    let mut next = gaps.clone();
                    next.swap_remove(g);
                    next.push(l);
                    next.push(r);
                    duplicator_wins(next, n - 1, memo)
                });
                if !answered {
                    win = false;
                    break 'spoiler;
                }
            }
        }
    }
    memo.insert((gaps, n), win);
    win
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn saturates_at_two_to_the_n_minus_one() {
        for n in 0..=4u32 {
            let sat = (1u64 << n) - 1;
            for k in 0..=12 {
                for l in 0..=12 {
                    let expected = if n == 0 {
                        (k == 0) == (l == 0)
                    } else {
                        k == l || (k >= sat && l >= sat)
                    };
                    assert_eq!(finite_oracle(k, l, n).unwrap(), expected, "{k} {l} {n}");
                }
            }
        }
    }

    #[test]
    fn limits() {
        assert!(finite_oracle(21, 3, 2).is_err());
        assert!(finite_oracle(3, 3, 6).is_err());
        assert!(!finite_oracle(20, 19, 5).unwrap());
        assert!(finite_oracle(20, 20, 5).unwrap());
    }
}
