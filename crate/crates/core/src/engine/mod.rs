//! Decides n-move equivalence by computing depth-n theories.
//!
//! The theory of an order at depth 0 records whether it is empty. At depth
//! n ≥ 1 it is the set of pairs (theory of the part left of x, theory of the
//! part right of x) over all points x, both at depth n − 1; depth-0
//! components are erased inside pairs since zero moves see nothing. Two
//! orders are n-equivalent exactly when their depth-n theories coincide.
//!
//! Theories are hash-consed per depth, so equality is id equality. Sums,
//! reversal and ω-products act directly on theories, which makes the
//! computation compositional over the term structure.

mod bounds;
mod serial;
mod splits;
mod witness;

pub use bounds::{BoundFn, BoundsConfig, Scale, ScaleParseError};
pub use serial::{memo_key, parse_memo_key, MemoEntry, SerialError, TheoryView};
pub use splits::SplitClass;
pub use witness::{Half, Move, PlayTrace, Side, TraceError};

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::sync::{Arc, Mutex, MutexGuard};

use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::term::{Direction, Term};

use splits::SplitClass as Split;

pub const DEFAULT_DEPTH_CAP: u32 = 8;

/// A theory handle, valid for the engine that produced it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Theory {
    pub depth: u32,
    id: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EngineError {
    #[error("depth {requested} exceeds the depth cap {cap}")]
    DepthCap { requested: u32, cap: u32 },
    #[error("the empty order has no points")]
    EmptyTerm,
    #[error("the orders are {0}-equivalent, so there is no winning play for player I")]
    Equivalent(u32),
    #[error("theory belongs to a different depth ({0} vs {1})")]
    DepthMismatch(u32, u32),
}

/// Result of [`Engine::optimal_length`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Length {
    /// l(A, B): equivalent at this depth, not at the next.
    Exact(u32),
    /// Equivalent at every depth up to and including the cap.
    EquivalentUpTo(u32),
}

impl fmt::Display for Length {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Length::Exact(n) => write!(f, "{n}"),
            Length::EquivalentUpTo(n) => write!(f, "equivalent up to {n}"),
        }
    }
}

type Pairs = Arc<[(u32, u32)]>;

#[derive(Default)]
struct Level {
    nodes: Vec<Pairs>,
    index: FxHashMap<Pairs, u32>,
    concat: FxHashMap<(u32, u32), u32>,
    rev: FxHashMap<u32, u32>,
    omega: FxHashMap<u32, u32>,
    proj: FxHashMap<u32, u32>,
    pow: Option<u32>,
    ordinals: Option<Arc<[u32]>>,
    powers: Option<Arc<[u32]>>,
}

const EMPTY: u32 = 0;

/// Memoised theory computation.
pub struct Engine {
    cfg: BoundsConfig,
    depth_cap: u32,
    levels: Vec<Level>,
    memo: HashMap<(Term, u32), u32>,
    bound_hits: u64,
}

impl Default for Engine {
    fn default() -> Self {
        Engine::new(BoundsConfig::default())
    }
}

impl Engine {
    pub fn new(cfg: BoundsConfig) -> Engine {
        Engine::with_depth_cap(cfg, DEFAULT_DEPTH_CAP)
    }

    pub fn with_depth_cap(cfg: BoundsConfig, depth_cap: u32) -> Engine {
        let mut e = Engine {
            cfg,
            depth_cap,
            levels: Vec::new(),
            memo: HashMap::new(),
            bound_hits: 0,
        };
        e.level(0);
        e
    }

    pub fn config(&self) -> &BoundsConfig {
        &self.cfg
    }

    pub fn depth_cap(&self) -> u32 {
        self.depth_cap
    }

    /// Number of enumerations that reached a configured cap before their
    /// theory sequence repeated.
    pub fn bound_hits(&self) -> u64 {
        self.bound_hits
    }

    /// Number of distinct theories interned at each depth.
    pub fn theory_counts(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.nodes.len()).collect()
    }

    fn check_depth(&self, n: u32) -> Result<(), EngineError> {
        if n > self.depth_cap {
            Err(EngineError::DepthCap {
                requested: n,
                cap: self.depth_cap,
            })
        } else {
            Ok(())
        }
    }

    fn level(&mut self, d: u32) -> &mut Level {
        while self.levels.len() <= d as usize {
            let depth = self.levels.len();
            let mut lvl = Level::default();
            let empty: Pairs = Arc::new([]);
            lvl.nodes.push(empty.clone());
            lvl.index.insert(empty, EMPTY);
            if depth == 0 {
                let point: Pairs = Arc::new([(0, 0)]);
                lvl.nodes.push(point.clone());
                lvl.index.insert(point, 1);
            }
            self.levels.push(lvl);
        }
        &mut self.levels[d as usize]
    }

    fn children(&self, d: u32, x: u32) -> &[(u32, u32)] {
        &self.levels[d as usize].nodes[x as usize]
    }

    fn kids(&self, d: u32, x: u32) -> Pairs {
        self.levels[d as usize].nodes[x as usize].clone()
    }

    fn intern(&mut self, d: u32, mut pairs: Vec<(u32, u32)>) -> u32 {
        debug_assert!(d >= 1);
        let pairs: Pairs = if d == 1 {
            if pairs.is_empty() {
                Arc::new([])
            } else {
                Arc::new([(0, 0)])
            }
        } else {
            let mut keys: Vec<u64> = pairs
                .drain(..)
                .map(|(l, r)| (u64::from(l) << 32) | u64::from(r))
                .collect();
            keys.sort_unstable();
            keys.dedup();
            keys.into_iter().map(|k| ((k >> 32) as u32, k as u32)).collect()
        };
        let lvl = self.level(d);
        if let Some(&id) = lvl.index.get(&pairs) {
            return id;
        }
        let id = lvl.nodes.len() as u32;
        lvl.nodes.push(pairs.clone());
        lvl.index.insert(pairs, id);
        id
    }

    fn nonempty(d: u32) -> Option<u32> {
        (d == 0).then_some(1)
    }

    /// Theory of a single point.
    fn point(&mut self, d: u32) -> u32 {
        if let Some(p) = Engine::nonempty(d) {
            return p;
        }
        self.intern(d, vec![(EMPTY, EMPTY)])
    }

    /// Depth d → d − 1.
    fn proj(&mut self, d: u32, x: u32) -> u32 {
        debug_assert!(d >= 1);
        if x == EMPTY {
            return EMPTY;
        }
        if d == 1 {
            return 1;
        }
        if let Some(&r) = self.levels[d as usize].proj.get(&x) {
            return r;
        }
        let kids = self.kids(d, x);
        let mut out = Vec::new();
        for &(l, r) in kids.iter() {
            let pl = self.proj(d - 1, l);
            let pr = self.proj(d - 1, r);
            out.push((pl, pr));
        }
        let res = self.intern(d - 1, out);
        self.level(d).proj.insert(x, res);
        res
    }

    /// Theory of A + B.
    fn concat(&mut self, d: u32, a: u32, b: u32) -> u32 {
        if a == EMPTY {
            return b;
        }
        if b == EMPTY {
            return a;
        }
        if d == 0 {
            return 1;
        }
        if let Some(&r) = self.levels[d as usize].concat.get(&(a, b)) {
            return r;
        }
        let pa = self.proj(d, a);
        let pb = self.proj(d, b);
        let ka = self.kids(d, a);
        let kb = self.kids(d, b);
        let mut out = Vec::new();
        for &(l, r) in ka.iter() {
            let r2 = self.concat(d - 1, r, pb);
            out.push((l, r2));
        }
        for &(l, r) in kb.iter() {
            let l2 = self.concat(d - 1, pa, l);
            out.push((l2, r));
        }
        let res = self.intern(d, out);
        self.level(d).concat.insert((a, b), res);
        res
    }

    /// Theory of the reversed order.
    fn rev(&mut self, d: u32, x: u32) -> u32 {
        if d == 0 || x == EMPTY {
            return x;
        }
        if let Some(&r) = self.levels[d as usize].rev.get(&x) {
            return r;
        }
        let kids = self.kids(d, x);
        let mut out = Vec::new();
        for &(l, r) in kids.iter() {
            let rl = self.rev(d - 1, l);
            let rr = self.rev(d - 1, r);
            out.push((rr, rl));
        }
        let res = self.intern(d, out);
        self.level(d).rev.insert(x, res);
        res
    }

    /// Theories of A·j for j = 0, 1, 2, … up to the first repeat, capped.
    fn multiples(&mut self, d: u32, a: u32, cap: u64) -> Vec<u32> {
        let mut out = vec![EMPTY];
        let mut seen = HashSet::from([EMPTY]);
        let mut cur = EMPTY;
        loop {
            cur = self.concat(d, cur, a);
            if !seen.insert(cur) {
                return out;
            }
            if out.len() as u64 > cap {
                self.bound_hits += 1;
                return out;
            }
            out.push(cur);
        }
    }

    /// Theory of A·ω.
    fn omega(&mut self, d: u32, a: u32) -> u32 {
        if d == 0 || a == EMPTY {
            return a;
        }
        if let Some(&r) = self.levels[d as usize].omega.get(&a) {
            return r;
        }
        let pa = self.proj(d, a);
        let wa = self.omega(d - 1, pa);
        let cap = self.cfg.copy_bound(d);
        let prefixes = self.multiples(d - 1, pa, cap);
        let kids = self.kids(d, a);
        let mut rights = Vec::with_capacity(kids.len());
        for &(_, r) in kids.iter() {
            rights.push(self.concat(d - 1, r, wa));
        }
        let mut out = Vec::new();
        for &p in &prefixes {
            for (&(l, _), &r) in kids.iter().zip(&rights) {
                let l2 = self.concat(d - 1, p, l);
                out.push((l2, r));
            }
        }
        let res = self.intern(d, out);
        self.level(d).omega.insert(a, res);
        res
    }

    fn omega_star(&mut self, d: u32, a: u32) -> u32 {
        let r = self.rev(d, a);
        let w = self.omega(d, r);
        self.rev(d, w)
    }

    /// Theories of ω^e for e = 0, 1, … up to the first repeat, capped.
    fn powers(&mut self, m: u32) -> Arc<[u32]> {
        if let Some(p) = &self.level(m).powers {
            return p.clone();
        }
        let cap = self.cfg.cnf_exp_bound(m + 1);
        let mut cur = self.point(m);
        let mut seen = HashSet::from([cur]);
        let mut out = vec![cur];
        loop {
            cur = self.omega(m, cur);
            if !seen.insert(cur) {
                break;
            }
            if out.len() as u64 > cap {
                self.bound_hits += 1;
                break;
            }
            out.push(cur);
        }
        let out: Arc<[u32]> = out.into();
        self.level(m).powers = Some(out.clone());
        out
    }

    /// Theories at depth m of all ordinals below ω^ω.
    fn ordinals(&mut self, m: u32) -> Arc<[u32]> {
        if let Some(o) = &self.level(m).ordinals {
            return o.clone();
        }
        let powers = self.powers(m);
        let cap = (self.cfg.cnf_exp_bound(m + 1) + 1).saturating_mul(self.cfg.cnf_coeff_bound(m + 1));
        let mut all: BTreeSet<u32> = BTreeSet::from([EMPTY]);
        let mut frontier = vec![EMPTY];
        let mut rounds = 0u64;
        while !frontier.is_empty() {
            if rounds >= cap {
                self.bound_hits += 1;
                break;
            }
            rounds += 1;
            let mut next = Vec::new();
            for &x in &frontier {
                for &p in powers.iter() {
                    let y = self.concat(m, x, p);
                    if all.insert(y) {
                        next.push(y);
                    }
                }
            }
            frontier = next;
        }
        let out: Arc<[u32]> = all.into_iter().collect::<Vec<_>>().into();
        self.level(m).ordinals = Some(out.clone());
        out
    }

    /// Theory of ω^ω.
    fn pow(&mut self, d: u32) -> u32 {
        if d == 0 {
            return 1;
        }
        if let Some(p) = self.level(d).pow {
            return p;
        }
        let ords = self.ordinals(d - 1);
        let tail = self.pow(d - 1);
        let out: Vec<(u32, u32)> = ords.iter().map(|&o| (o, tail)).collect();
        let res = self.intern(d, out);
        self.level(d).pow = Some(res);
        res
    }

    fn fin(&mut self, d: u32, k: u64) -> u32 {
        let point = self.point(d);
        let mut cur = EMPTY;
        for _ in 0..k {
            let next = self.concat(d, cur, point);
            if next == cur {
                break;
            }
            cur = next;
        }
        cur
    }

    fn cat_theory(&mut self, parts: &[Term], d: u32) -> u32 {
        let mut acc = EMPTY;
        for p in parts {
            let t = self.term_theory(p, d);
            acc = self.concat(d, acc, t);
        }
        acc
    }

    fn term_theory(&mut self, t: &Term, d: u32) -> u32 {
        if d == 0 {
            return if t.is_empty_term() { EMPTY } else { 1 };
        }
        if let Some(&id) = self.memo.get(&(t.clone(), d)) {
            return id;
        }
        let id = match t {
            Term::Fin(k) => self.fin(d, *k),
            Term::Prod(b, Direction::Forward) => {
                let x = self.term_theory(b, d);
                self.omega(d, x)
            }
            Term::Prod(b, Direction::Reverse) => {
                let x = self.term_theory(b, d);
                self.omega_star(d, x)
            }
            Term::Pow(Direction::Forward) => self.pow(d),
            Term::Pow(Direction::Reverse) => {
                let p = self.pow(d);
                self.rev(d, p)
            }
            Term::Cat(parts) => self.cat_theory(parts, d),
            Term::RepSum {
                index: Direction::Forward,
                prefix,
                period,
            } => {
                let p = self.cat_theory(prefix, d);
                let q = self.cat_theory(period, d);
                let w = self.omega(d, q);
                self.concat(d, p, w)
            }
            Term::RepSum {
                index: Direction::Reverse,
                prefix,
                period,
            } => {
                let p = self.cat_theory(prefix, d);
                let q = self.cat_theory(period, d);
                let w = self.omega_star(d, q);
                self.concat(d, w, p)
            }
        };
        self.memo.insert((t.clone(), d), id);
        id
    }

    /// Depth-n theory of a term.
    pub fn theory(&mut self, t: &Term, n: u32) -> Result<Theory, EngineError> {
        self.check_depth(n)?;
        let id = self.term_theory(t, n);
        Ok(Theory { depth: n, id })
    }

    /// `a ≡ₙ b`.
    pub fn equiv_n(&mut self, a: &Term, b: &Term, n: u32) -> Result<bool, EngineError> {
        Ok(self.theory(a, n)? == self.theory(b, n)?)
    }

    /// Least depth ≤ `upto` at which the theories differ.
    pub fn first_difference(&mut self, a: &Term, b: &Term, upto: u32) -> Result<Option<u32>, EngineError> {
        self.check_depth(upto)?;
        for n in 0..=upto {
            if !self.equiv_n(a, b, n)? {
                return Ok(Some(n));
            }
        }
        Ok(None)
    }

    /// l(a, b) if it is below `cap`. The empty order against a nonempty one
    /// is reported as 0.
    pub fn optimal_length(&mut self, a: &Term, b: &Term, cap: u32) -> Result<Length, EngineError> {
        Ok(match self.first_difference(a, b, cap)? {
            Some(n) => Length::Exact(n.saturating_sub(1)),
            None => Length::EquivalentUpTo(cap),
        })
    }

    /// Child pairs of a theory (empty for depth 0).
    pub fn child_pairs(&self, th: Theory) -> Vec<(Theory, Theory)> {
        if th.depth == 0 {
            return Vec::new();
        }
        self.children(th.depth, th.id)
            .iter()
            .map(|&(l, r)| {
                (
                    Theory {
                        depth: th.depth - 1,
                        id: l,
                    },
                    Theory {
                        depth: th.depth - 1,
                        id: r,
                    },
                )
            })
            .collect()
    }

    pub fn is_empty_theory(&self, th: Theory) -> bool {
        th.id == EMPTY
    }

    /// Projects a theory to a smaller depth.
    pub fn project(&mut self, th: Theory, to: u32) -> Result<Theory, EngineError> {
        if to > th.depth {
            return Err(EngineError::DepthMismatch(to, th.depth));
        }
        let mut id = th.id;
        for d in (to + 1..=th.depth).rev() {
            id = self.proj(d, id);
        }
        Ok(Theory { depth: to, id })
    }

    /// Theory of the sum of two orders given by their theories.
    pub fn concat_theories(&mut self, a: Theory, b: Theory) -> Result<Theory, EngineError> {
        if a.depth != b.depth {
            return Err(EngineError::DepthMismatch(a.depth, b.depth));
        }
        Ok(Theory {
            depth: a.depth,
            id: self.concat(a.depth, a.id, b.id),
        })
    }

    pub fn reverse_theory(&mut self, a: Theory) -> Theory {
        Theory {
            depth: a.depth,
            id: self.rev(a.depth, a.id),
        }
    }

    /// Theory of `A·ω` (`Forward`) or `A·ω*` (`Reverse`).
    pub fn product_theory(&mut self, a: Theory, dir: Direction) -> Theory {
        let id = match dir {
            Direction::Forward => self.omega(a.depth, a.id),
            Direction::Reverse => self.omega_star(a.depth, a.id),
        };
        Theory { depth: a.depth, id }
    }

    /// Flank theories of a split at depth d − 1, erased when d = 1.
    pub(crate) fn split_pair(&mut self, s: &Split, d: u32) -> (Theory, Theory) {
        let (l, r) = if d == 1 {
            (EMPTY, EMPTY)
        } else {
            (self.term_theory(&s.left, d - 1), self.term_theory(&s.right, d - 1))
        };
        (Theory { depth: d - 1, id: l }, Theory { depth: d - 1, id: r })
    }

    fn memo_entries(&self) -> impl Iterator<Item = (&Term, u32, u32)> {
        self.memo.iter().map(|((t, d), id)| (t, *d, *id))
    }

    fn insert_memo(&mut self, t: Term, th: Theory) {
        self.memo.insert((t, th.depth), th.id);
    }
}

/// An [`Engine`] behind a mutex, for sharing between threads.
#[derive(Clone)]
pub struct SharedEngine(Arc<Mutex<Engine>>);

impl SharedEngine {
    pub fn new(engine: Engine) -> SharedEngine {
        SharedEngine(Arc::new(Mutex::new(engine)))
    }

    pub fn lock(&self) -> MutexGuard<'_, Engine> {
        self.0.lock().unwrap_or_else(|e| e.into_inner())
    }

    pub fn equiv_n(&self, a: &Term, b: &Term, n: u32) -> Result<bool, EngineError> {
        self.lock().equiv_n(a, b, n)
    }

    pub fn optimal_length(&self, a: &Term, b: &Term, cap: u32) -> Result<Length, EngineError> {
        self.lock().optimal_length(a, b, cap)
    }
}
