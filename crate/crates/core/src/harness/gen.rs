//! Seeded random terms for the property suites.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::term::{Direction, Term};

fn dir(rng: &mut ChaCha8Rng) -> Direction {
    if rng.gen_bool(0.5) {
        Direction::Forward
    } else {
        Direction::Reverse
    }
}

/// Small building blocks: short chains, ω, ω*, ζ and squares.
pub fn random_atom(rng: &mut ChaCha8Rng) -> Term {
    match rng.gen_range(0..6) {
        0 => Term::fin(rng.gen_range(1..=4)),
        1 => Term::omega(),
        2 => Term::omega_star(),
        3 => Term::zeta(),
        4 => Term::power(dir(rng), 2),
        _ => Term::prod(Term::prod(Term::ONE, Direction::Forward), Direction::Reverse),
    }
}

/// A random term with at most `depth` levels of sums and products.
pub fn random_term(rng: &mut ChaCha8Rng, depth: u32) -> Term {
    if depth == 0 {
        return random_atom(rng);
    }
    match rng.gen_range(0..10) {
        0..=3 => random_atom(rng),
        4..=6 => {
            let k = rng.gen_range(2..=3);
            Term::cat((0..k).map(|_| random_term(rng, depth - 1)))
        }
        7..=8 => {
            let base = random_term(rng, depth.min(2) - 1);
            Term::prod(base, dir(rng))
        }
        _ => {
            let prefix = (0..rng.gen_range(0..=1)).map(|_| random_atom(rng)).collect();
            let period = (0..rng.gen_range(1..=2)).map(|_| random_atom(rng)).collect();
            Term::rep_sum(dir(rng), prefix, period)
        }
    }
}

/// A random term containing a pattern that normalisation rewrites.
pub fn random_normalizable(rng: &mut ChaCha8Rng) -> Term {
    let x = random_term(rng, 1);
    let d = dir(rng);
    let core = match rng.gen_range(0..7) {
        0 => Term::prod(Term::fin(rng.gen_range(2..=4)), d),
        1 => Term::prod(Term::Pow(d), d),
        2 => Term::prod(Term::prod(Term::Pow(d), d.flip()), dir(rng)),
        3 => Term::prod(
            Term::cat([
                Term::prod(x.clone(), Direction::Reverse),
                Term::prod(x.clone(), Direction::Forward),
            ]),
            d,
        ),
        4 => Term::cat([x.clone(), Term::omega(), Term::zeta()]),
        5 => Term::cat([Term::fin(rng.gen_range(1..=3)), Term::omega(), x.clone()]),
        _ => {
            let m = rng.gen_range(1..=2);
            Term::cat([Term::omega(), Term::omega_star(), Term::power(Direction::Forward, m)])
        }
    };
    let mut parts = vec![core];
    if rng.gen_bool(0.5) {
        parts.push(random_atom(rng));
    }
    if rng.gen_bool(0.3) {
        parts.insert(0, random_atom(rng));
    }
    parts.shuffle(rng);
    Term::cat(parts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn deterministic_and_valid() {
        let mut r1 = ChaCha8Rng::seed_from_u64(7);
        let mut r2 = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let a = random_term(&mut r1, 3);
            assert_eq!(a, random_term(&mut r2, 3));
            a.validate().unwrap();
            let b = random_normalizable(&mut r1);
            assert_eq!(b, random_normalizable(&mut r2));
            b.validate().unwrap();
        }
    }
}
