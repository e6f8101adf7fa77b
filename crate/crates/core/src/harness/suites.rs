//! Named validation suites.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::classify::compositions_up_to;
use super::gen::{random_atom, random_normalizable, random_term};
use super::{finite_oracle, NaiveGame};
use crate::closed_form::{
    discrete_block_family, predict, predict_monomial, predict_special_sum, predict_two_term_sum, Relation, Verdict,
};
use crate::engine::{BoundsConfig, Engine, EngineError, PlayTrace, Scale};
use crate::term::{normalize, Direction, Monomial, Term};
use crate::text::print_term;

/// Suites comparing a closed form with the engine over a grid of inputs.
pub const GRID_SUITES: &[&str] = &[
    "power-multiples",
    "opposite-starts",
    "equal-lengths",
    "unequal-lengths",
    "two-term-sums",
    "alternating-collapse",
    "discrete-blocks",
    "special-sums",
];

/// Suites checking laws of ≡ₙ on seeded random inputs.
pub const PROPERTY_SUITES: &[&str] = &[
    "monotonicity",
    "equivalence-laws",
    "reversal-duality",
    "congruence",
    "normalization",
    "saturation",
    "finite-oracle",
    "naive-game",
];

/// Runs every property suite as one report.
pub const ALL_PROPERTIES: &str = "properties";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub inputs: String,
    pub expected: String,
    pub got: String,
    pub witness: Option<PlayTrace>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub cases_run: usize,
    /// Cases whose prediction was out of scope or beyond the depth budget.
    pub skipped: usize,
    pub failures: Vec<Failure>,
    /// Exact engine values recorded next to bounds that are not claimed
    /// to be tight.
    pub notes: Vec<String>,
    pub wall_time: f64,
}

impl SuiteReport {
    fn new(suite: &str, seed: u64) -> SuiteReport {
        SuiteReport {
            suite: suite.to_string(),
            seed,
            cases_run: 0,
            skipped: 0,
            failures: Vec::new(),
            notes: Vec::new(),
            wall_time: 0.0,
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn fail(&mut self, inputs: String, expected: String, got: String, witness: Option<PlayTrace>) {
        self.failures.push(Failure {
            inputs,
            expected,
            got,
            witness,
        });
    }

    fn absorb(&mut self, other: SuiteReport) {
        self.cases_run += other.cases_run;
        self.skipped += other.skipped;
        self.failures.extend(other.failures);
        self.notes
            .extend(other.notes.into_iter().map(|n| format!("{}: {n}", other.suite)));
    }

    /// The report with its timing zeroed, for comparing runs.
    pub fn without_timing(&self) -> SuiteReport {
        SuiteReport {
            wall_time: 0.0,
            ..self.clone()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CaseBudget {
    /// Largest exponent sum of a monomial in the grids.
    pub max_exp_sum: u32,
    /// Deepest game the engine is asked about.
    pub max_depth: u32,
    /// Random cases per property suite.
    pub cases: usize,
    pub seed: u64,
    pub bound_scale: Scale,
}

impl Default for CaseBudget {
    fn default() -> CaseBudget {
        CaseBudget {
            max_exp_sum: 3,
            max_depth: 7,
            cases: 1000,
            seed: 0x5eed,
            bound_scale: Scale::ONE,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HarnessError {
    #[error("unknown suite '{0}'")]
    UnknownSuite(String),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error("index sets are limited to 0..=8, got {0}")]
    FamilyGuard(u32),
}

/// The ω-sum whose n-th block is ω* + ω + (n + 2) for n in `x` and ω* + ω
/// otherwise, for `x` ⊆ {0, …, 8}.
pub fn build_discrete_block_family(x: &[u32]) -> Result<Term, HarnessError> {
    if let Some(&bad) = x.iter().find(|&&n| n > 8) {
        return Err(HarnessError::FamilyGuard(bad));
    }
    Ok(discrete_block_family(x))
}

pub fn cross_validate(suite: &str, budget: &CaseBudget) -> Result<SuiteReport, HarnessError> {
    let start = Instant::now();
    let mut report = if suite == ALL_PROPERTIES {
        let mut all = SuiteReport::new(suite, budget.seed);
        for s in PROPERTY_SUITES {
            all.absorb(run_one(s, budget)?);
        }
        all
    } else {
        run_one(suite, budget)?
    };
    report.failures.sort_by(|a, b| a.inputs.cmp(&b.inputs));
    report.wall_time = start.elapsed().as_secs_f64();
    Ok(report)
}

fn run_one(suite: &str, budget: &CaseBudget) -> Result<SuiteReport, HarnessError> {
    let mut ck = Checker::new(suite, budget);
    match suite {
        "power-multiples" => ck.power_multiples()?,
        "opposite-starts" => ck.monomial_grid(Grid::OppositeStarts)?,
        "equal-lengths" => ck.monomial_grid(Grid::EqualLengths)?,
        "unequal-lengths" => ck.monomial_grid(Grid::UnequalLengths)?,
        "two-term-sums" => ck.two_term_sums()?,
        "alternating-collapse" => ck.alternating_collapse()?,
        "discrete-blocks" => ck.discrete_blocks()?,
        "special-sums" => ck.special_sums()?,
        "monotonicity" => ck.monotonicity()?,
        "equivalence-laws" => ck.equivalence_laws()?,
        "reversal-duality" => ck.reversal_duality()?,
        "congruence" => ck.congruence()?,
        "normalization" => ck.normalization()?,
        "saturation" => ck.saturation()?,
        "finite-oracle" => ck.finite_oracle()?,
        "naive-game" => ck.naive_game()?,
        other => return Err(HarnessError::UnknownSuite(other.to_string())),
    }
    Ok(ck.report)
}

#[derive(Clone, Copy)]
enum Grid {
    OppositeStarts,
    EqualLengths,
    UnequalLengths,
}

struct Checker {
    engine: Engine,
    cap: u32,
    rng: ChaCha8Rng,
    cases: usize,
    max_exp_sum: u32,
    scale: Scale,
    report: SuiteReport,
}

fn pair(a: &Term, b: &Term) -> String {
    format!("{} | {}", print_term(a), print_term(b))
}

fn monomials(start: Direction, max_exp_sum: u32) -> Vec<Monomial> {
    compositions_up_to(max_exp_sum)
        .into_iter()
        .map(|e| Monomial::alternating(start, &e).expect("positive exponents"))
        .collect()
}

fn mono_term(m: &Monomial) -> Term {
    m.to_term().expect("finite exponents")
}

impl Checker {
    fn new(suite: &str, budget: &CaseBudget) -> Checker {
        let cap = budget.max_depth.min(crate::engine::DEFAULT_DEPTH_CAP);
        Checker {
            engine: Engine::new(BoundsConfig::scaled(budget.bound_scale)),
            cap,
            rng: ChaCha8Rng::seed_from_u64(budget.seed),
            cases: budget.cases,
            max_exp_sum: budget.max_exp_sum,
            scale: budget.bound_scale,
            report: SuiteReport::new(suite, budget.seed),
        }
    }

    fn describe_engine(&mut self, a: &Term, b: &Term) -> Result<String, EngineError> {
        Ok(match self.engine.first_difference(a, b, self.cap)? {
            Some(k) => format!("l = {}", k.saturating_sub(1)),
            None => format!("≡ up to depth {}", self.cap),
        })
    }

    fn witness_for(&mut self, a: &Term, b: &Term) -> Result<Option<PlayTrace>, EngineError> {
        match self.engine.first_difference(a, b, self.cap)? {
            Some(k) => Ok(Some(self.engine.witness(a, b, k.max(1))?)),
            None => Ok(None),
        }
    }

    /// Compares a prediction with the engine within the depth budget.
    fn check(&mut self, a: &Term, b: &Term, v: &Verdict) -> Result<(), EngineError> {
        let ok = match v.relation {
            Relation::OutOfScope(_) => {
                self.report.skipped += 1;
                return Ok(());
            }
            Relation::OptimalLength(l) if l < self.cap => self.engine.first_difference(a, b, l + 1)? == Some(l + 1),
            Relation::OptimalLength(_) | Relation::EquivalentElementarily => {
                self.engine.first_difference(a, b, self.cap)?.is_none()
            }
            Relation::InequivalentAtMost(Some(k)) if k <= self.cap => !self.engine.equiv_n(a, b, k)?,
            Relation::InequivalentAtMost(Some(_)) => {
                self.report.skipped += 1;
                return Ok(());
            }
            Relation::InequivalentAtMost(None) => self.engine.first_difference(a, b, self.cap)?.is_some(),
        };
        self.report.cases_run += 1;
        if !ok {
            let got = self.describe_engine(a, b)?;
            let witness = self.witness_for(a, b)?;
            self.report
                .fail(pair(a, b), format!("{} [{}]", v.relation, v.source), got, witness);
        }
        Ok(())
    }

    fn property(&mut self, inputs: impl FnOnce() -> String, ok: bool, expected: &str) {
        self.report.cases_run += 1;
        if !ok {
            self.report
                .fail(inputs(), expected.to_string(), "violated".to_string(), None);
        }
    }

    fn power_multiples(&mut self) -> Result<(), EngineError> {
        for n in 1..=self.max_exp_sum.min(3) {
            let a = Term::power(Direction::Forward, n);
            for b in [a.times(2), a.times(3), Term::power(Direction::Forward, n + 1)] {
                let v = predict(&a, &b);
                self.check(&a, &b, &v)?;
            }
        }
        Ok(())
    }

    fn monomial_grid(&mut self, grid: Grid) -> Result<(), EngineError> {
        let s = self.max_exp_sum;
        let fwd = monomials(Direction::Forward, s);
        let mut pairs = Vec::new();
        match grid {
            Grid::OppositeStarts => {
                for x in &fwd {
                    for y in monomials(Direction::Reverse, s) {
                        pairs.push((x.clone(), y));
                    }
                }
            }
            Grid::EqualLengths | Grid::UnequalLengths => {
                for start in [Direction::Forward, Direction::Reverse] {
                    let ms = monomials(start, s);
                    for (i, x) in ms.iter().enumerate() {
                        for y in &ms[i + 1..] {
                            let keep = match grid {
                                Grid::EqualLengths => x.len() == y.len(),
                                _ => {
                                    let (p, q) = if x.len() < y.len() { (x, y) } else { (y, x) };
                                    p.len() < q.len() && p.len() <= 2 && q.len() <= 3
                                }
                            };
                            if keep {
                                pairs.push((x.clone(), y.clone()));
                            }
                        }
                    }
                }
            }
        }
        for (x, y) in pairs {
            let v = predict_monomial(&x, &y);
            self.check(&mono_term(&x), &mono_term(&y), &v)?;
        }
        Ok(())
    }

    fn two_term_sums(&mut self) -> Result<(), EngineError> {
        let s = self.max_exp_sum.min(2);
        for first in [Direction::Reverse, Direction::Forward] {
            let ms = monomials(first, s);
            let ns = monomials(first.flip(), s);
            for a1 in &ms {
                for b1 in &ms {
                    for a2 in &ns {
                        for b2 in &ns {
                            let v = predict_two_term_sum(a1, a2, b1, b2);
                            let a = Term::cat([mono_term(a1), mono_term(a2)]);
                            let b = Term::cat([mono_term(b1), mono_term(b2)]);
                            self.check(&a, &b, &v)?;
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn alternating_collapse(&mut self) -> Result<(), EngineError> {
        let f = |d, k| Term::power(d, k);
        for k in 1..=2 {
            for l in 1..=2 {
                for m in 1..=2 {
                    for n in 1..=2 {
                        let a = Term::cat([
                            f(Direction::Forward, k),
                            f(Direction::Reverse, l),
                            f(Direction::Forward, m),
                        ]);
                        let b = f(Direction::Forward, n);
                        let v = predict_special_sum(&a, &b);
                        self.check(&a, &b, &v)?;
                        if let Relation::InequivalentAtMost(Some(bound)) = v.relation {
                            let exact = self.describe_engine(&a, &b)?;
                            self.report
                                .notes
                                .push(format!("{}: bound ≢_{bound}, engine {exact}", pair(&a, &b)));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn discrete_blocks(&mut self) -> Result<(), EngineError> {
        let sets: Vec<Vec<u32>> = (0..8u32)
            .map(|mask| (0..3).filter(|i| mask & (1 << i) != 0).collect())
            .collect();
        for (i, x) in sets.iter().enumerate() {
            for y in &sets[i + 1..] {
                let (a, b) = (discrete_block_family(x), discrete_block_family(y));
                let v = predict(&a, &b);
                self.check(&a, &b, &v)?;
            }
        }
        Ok(())
    }

    fn special_sums(&mut self) -> Result<(), EngineError> {
        for (a, b) in special_sum_pairs() {
            let v = predict(&a, &b);
            self.check(&a, &b, &v)?;
        }
        Ok(())
    }

    fn monotonicity(&mut self) -> Result<(), EngineError> {
        let top = self.cap.min(5);
        for _ in 0..self.cases {
            let a = random_term(&mut self.rng, 2);
            let b = random_term(&mut self.rng, 2);
            let fd = self.engine.first_difference(&a, &b, top)?;
            let mut ok = true;
            for m in 0..=top {
                ok &= self.engine.equiv_n(&a, &b, m)? == fd.is_none_or(|k| m < k);
            }
            self.property(|| pair(&a, &b), ok, "≡ at a depth implies ≡ at every smaller depth");
        }
        Ok(())
    }

    fn equivalence_laws(&mut self) -> Result<(), EngineError> {
        let pool: Vec<Term> = (0..12).map(|_| random_term(&mut self.rng, 1)).collect();
        for _ in 0..self.cases {
            let n = self.rng.gen_range(1..=3);
            let [a, b, c] = [0; 3].map(|_| pool[self.rng.gen_range(0..pool.len())].clone());
            let e = &mut self.engine;
            let (ab, ba, bc, ac) = (
                e.equiv_n(&a, &b, n)?,
                e.equiv_n(&b, &a, n)?,
                e.equiv_n(&b, &c, n)?,
                e.equiv_n(&a, &c, n)?,
            );
            let ok = e.equiv_n(&a, &a, n)? && ab == ba && (!(ab && bc) || ac);
            self.property(
                || format!("{} | {} | {} at {n}", print_term(&a), print_term(&b), print_term(&c)),
                ok,
                "reflexive, symmetric and transitive",
            );
        }
        Ok(())
    }

    fn reversal_duality(&mut self) -> Result<(), EngineError> {
        for _ in 0..self.cases {
            let n = self.rng.gen_range(0..=self.cap.min(4));
            let a = random_term(&mut self.rng, 2);
            let b = random_term(&mut self.rng, 2);
            let ok = self.engine.equiv_n(&a, &b, n)? == self.engine.equiv_n(&a.reverse(), &b.reverse(), n)?;
            self.property(|| format!("{} at {n}", pair(&a, &b)), ok, "A ≡ₙ B iff A* ≡ₙ B*");
        }
        Ok(())
    }

    fn congruence(&mut self) -> Result<(), EngineError> {
        let pool: Vec<Term> = (0..40).map(|_| random_term(&mut self.rng, 1)).collect();
        for _ in 0..self.cases {
            let n = self.rng.gen_range(1..=self.cap.min(3));
            let a = pool[self.rng.gen_range(0..pool.len())].clone();
            let b = pool[self.rng.gen_range(0..pool.len())].clone();
            let a2 = self.partner(&pool, &a, n)?;
            let b2 = self.partner(&pool, &b, n)?;
            let d = if self.rng.gen_bool(0.5) {
                Direction::Forward
            } else {
                Direction::Reverse
            };
            let e = &mut self.engine;
            let ok = e.equiv_n(
                &Term::cat([a.clone(), b.clone()]),
                &Term::cat([a2.clone(), b2.clone()]),
                n,
            )? && e.equiv_n(&Term::prod(a.clone(), d), &Term::prod(a2.clone(), d), n)?;
            self.property(
                || {
                    format!(
                        "{} ≡ {} and {} ≡ {} at {n}",
                        print_term(&a),
                        print_term(&a2),
                        print_term(&b),
                        print_term(&b2)
                    )
                },
                ok,
                "sums and products of ≡ₙ orders are ≡ₙ",
            );
        }
        Ok(())
    }

    /// A random pool member n-equivalent to `t` (possibly `t` itself).
    fn partner(&mut self, pool: &[Term], t: &Term, n: u32) -> Result<Term, EngineError> {
        let mut same = Vec::new();
        for p in pool {
            if self.engine.equiv_n(p, t, n)? {
                same.push(p);
            }
        }
        Ok(same[self.rng.gen_range(0..same.len())].clone())
    }

    fn normalization(&mut self) -> Result<(), EngineError> {
        for _ in 0..self.cases {
            let n = self.rng.gen_range(1..=self.cap.min(6));
            let t = if self.rng.gen_bool(0.7) {
                random_normalizable(&mut self.rng)
            } else {
                random_term(&mut self.rng, 2)
            };
            let nt = normalize(&t);
            let ok = self.engine.equiv_n(&t, &nt, n)?;
            self.property(|| format!("{} at {n}", pair(&t, &nt)), ok, "normalize preserves ≡ₙ");
        }
        Ok(())
    }

    fn saturation(&mut self) -> Result<(), EngineError> {
        let doubled = Scale::new(self.scale.num * 2, self.scale.den).expect("nonzero scale");
        let mut wide = Engine::new(BoundsConfig::scaled(doubled));
        let top = self.cap.min(5);
        for _ in 0..self.cases {
            let a = random_term(&mut self.rng, 2);
            let b = if self.rng.gen_bool(0.3) {
                normalize(&a)
            } else {
                random_term(&mut self.rng, 2)
            };
            let x = self.engine.first_difference(&a, &b, top)?;
            let y = wide.first_difference(&a, &b, top)?;
            self.property(|| pair(&a, &b), x == y, "doubling the bounds changes no verdict");
        }
        if self.engine.bound_hits() > 0 {
            self.report
                .notes
                .push(format!("{} enumerations reached a bound", self.engine.bound_hits()));
        }
        Ok(())
    }

    fn finite_oracle(&mut self) -> Result<(), EngineError> {
        for _ in 0..self.cases {
            let k = self.rng.gen_range(0..=12);
            let l = self.rng.gen_range(0..=12);
            let n = self.rng.gen_range(0..=self.cap.min(4));
            let oracle = finite_oracle(k, l, n).expect("within the oracle's limits");
            let engine = self.engine.equiv_n(&Term::fin(k), &Term::fin(l), n)?;
            self.property(
                || format!("{k} | {l} at {n}"),
                oracle == engine,
                "engine agrees with brute force",
            );
        }
        Ok(())
    }

    fn naive_game(&mut self) -> Result<(), EngineError> {
        let mut naive = NaiveGame::new();
        for _ in 0..self.cases {
            let n = self.rng.gen_range(1..=self.cap.min(3));
            let a = small_term(&mut self.rng);
            let b = small_term(&mut self.rng);
            let slow = naive.equiv(&a, &b, n).expect("no ω^ω in small terms");
            let fast = self.engine.equiv_n(&a, &b, n)?;
            self.property(
                || format!("{} at {n}", pair(&a, &b)),
                slow == fast,
                "engine agrees with the naive game",
            );
        }
        Ok(())
    }
}

/// A sum of one or two atoms, optionally repeated ω or ω* times.
fn small_term(rng: &mut ChaCha8Rng) -> Term {
    let k = rng.gen_range(1..=2);
    let t = Term::cat((0..k).map(|_| random_atom(rng)));
    match rng.gen_range(0..4) {
        0 => Term::prod(t, Direction::Forward),
        1 => Term::prod(t, Direction::Reverse),
        _ => t,
    }
}

/// Pairs of ω-sums of powers with no redundant neighbours and no collapsing
/// runs: each sum against every other, and against a different description
/// of itself.
pub fn special_sum_pairs() -> Vec<(Term, Term)> {
    let w = |k| Term::power(Direction::Forward, k);
    let s = |k| Term::power(Direction::Reverse, k);
    let sum = |prefix: Vec<Term>, period: Vec<Term>| Term::rep_sum(Direction::Forward, prefix, period);
    let canon = [
        sum(vec![], vec![s(1)]),
        sum(vec![], vec![w(1)]),
        sum(vec![w(1)], vec![s(1)]),
        sum(vec![], vec![s(2), w(1)]),
        sum(vec![], vec![w(2), s(1)]),
        sum(vec![], vec![s(1), w(2)]),
        sum(vec![w(1)], vec![s(2), w(1)]),
    ];
    let restated = vec![
        (0, sum(vec![s(1), s(1)], vec![s(1)])),
        (3, sum(vec![], vec![s(2), w(1), s(2), w(1)])),
        (5, sum(vec![s(1)], vec![w(2), s(1)])),
    ];
    let mut out = Vec::new();
    for (i, a) in canon.iter().enumerate() {
        for b in &canon[i + 1..] {
            out.push((a.clone(), b.clone()));
        }
    }
    for (i, b) in restated {
        out.push((canon[i].clone(), b));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(seed: u64) -> CaseBudget {
        CaseBudget {
            max_exp_sum: 2,
            max_depth: 5,
            cases: 30,
            seed,
            bound_scale: Scale::ONE,
        }
    }

    #[test]
    fn unknown_suite() {
        assert_eq!(
            cross_validate("nope", &small(1)).unwrap_err(),
            HarnessError::UnknownSuite("nope".into())
        );
    }

    #[test]
    fn small_grids_pass() {
        for s in ["power-multiples", "opposite-starts", "equal-lengths", "unequal-lengths"] {
            let r = cross_validate(s, &small(1)).unwrap();
            assert!(r.passed(), "{s}: {:?}", r.failures);
            assert!(r.cases_run > 0, "{s}");
        }
    }

    #[test]
    fn properties_are_deterministic() {
        let a = cross_validate(ALL_PROPERTIES, &small(9)).unwrap();
        let b = cross_validate(ALL_PROPERTIES, &small(9)).unwrap();
        assert!(a.passed(), "{:?}", a.failures);
        assert_eq!(a.cases_run, 30 * PROPERTY_SUITES.len());
        assert_eq!(
            serde_json::to_string(&a.without_timing()).unwrap(),
            serde_json::to_string(&b.without_timing()).unwrap()
        );
    }

    #[test]
    fn family_guard() {
        assert_eq!(build_discrete_block_family(&[9]), Err(HarnessError::FamilyGuard(9)));
        assert!(build_discrete_block_family(&[0, 8]).is_ok());
    }

    #[test]
    fn special_pairs_are_in_scope() {
        let pairs = special_sum_pairs();
        assert!(pairs.len() >= 20);
        for (a, b) in pairs {
            assert!(!predict(&a, &b).is_out_of_scope(), "{a} {b}");
        }
    }
}
