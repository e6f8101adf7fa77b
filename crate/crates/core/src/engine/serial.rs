//! Engine-independent forms of theories: digests and a compact text encoding.
//!
//! A theory is written as its DAG of nodes, children first, each node as
//! `depth:l,r l,r …` with local indices, nodes separated by `;`. The last
//! node is the root. Node 0 at every depth is implicit and means the empty
//! order; node 1 at depth 0 is the point.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{Engine, Theory, EMPTY};
use crate::term::Term;
use crate::text::{parse_term, print_term};

/// A theory as plain data.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoryView {
    pub depth: u32,
    pub empty: bool,
    pub children: Vec<(TheoryView, TheoryView)>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SerialError {
    #[error("malformed theory encoding: {0}")]
    Malformed(String),
    #[error("theory encoding refers to node {0} before defining it")]
    Forward(usize),
    #[error("memo key '{0}' is not of the form depth:term")]
    Key(String),
    #[error("theory does not match digest for '{0}'")]
    DigestMismatch(String),
}

/// One memo line: `depth:term`, digest, and the encoded theory when known.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MemoEntry {
    pub key: String,
    pub digest: String,
    pub theory: Option<String>,
}

impl Engine {
    /// Nested view of a theory. Sizes grow quickly with depth.
    pub fn view(&self, th: Theory) -> TheoryView {
        let mut memo = HashMap::new();
        self.view_rec(th.depth, th.id, &mut memo)
    }

    fn view_rec(&self, d: u32, id: u32, memo: &mut HashMap<(u32, u32), TheoryView>) -> TheoryView {
        if let Some(v) = memo.get(&(d, id)) {
            return v.clone();
        }
        let children = if d == 0 {
            Vec::new()
        } else {
            self.children(d, id)
                .iter()
                .map(|&(l, r)| (self.view_rec(d - 1, l, memo), self.view_rec(d - 1, r, memo)))
                .collect()
        };
        let v = TheoryView {
            depth: d,
            empty: id == EMPTY,
            children,
        };
        memo.insert((d, id), v.clone());
        v
    }

    /// SHA-256 of the theory's structure, as lowercase hex. Equal theories
    /// have equal digests in every engine.
    pub fn digest(&self, th: Theory) -> String {
        let mut memo = HashMap::new();
        hex::encode(self.digest_rec(th.depth, th.id, &mut memo))
    }

    fn digest_rec(&self, d: u32, id: u32, memo: &mut HashMap<(u32, u32), [u8; 32]>) -> [u8; 32] {
        if let Some(h) = memo.get(&(d, id)) {
            return *h;
        }
        let mut hasher = Sha256::new();
        hasher.update(d.to_be_bytes());
        if d == 0 {
            hasher.update([u8::from(id != EMPTY)]);
        } else {
            let mut kids: Vec<([u8; 32], [u8; 32])> = self
                .children(d, id)
                .iter()
                .map(|&(l, r)| (self.digest_rec(d - 1, l, memo), self.digest_rec(d - 1, r, memo)))
                .collect();
            kids.sort();
            hasher.update((kids.len() as u64).to_be_bytes());
            for (l, r) in kids {
                hasher.update(l);
                hasher.update(r);
            }
        }
        let h: [u8; 32] = hasher.finalize().into();
        memo.insert((d, id), h);
        h
    }

    /// Text encoding of a theory.
    pub fn export_theory(&self, th: Theory) -> String {
        let mut local: HashMap<(u32, u32), usize> = HashMap::new();
        let mut lines: Vec<String> = Vec::new();
        self.export_rec(th.depth, th.id, &mut local, &mut lines);
        if lines.is_empty() {
            // empty or the depth-0 point: a childless root line
            lines.push(format!("{}:{}", th.depth, if th.id == EMPTY { "-" } else { "+" }));
        }
        lines.join(";")
    }

    /// Local index of a node: 0 is empty, 1 is the depth-0 point, defined
    /// nodes count from 2.
    fn export_rec(&self, d: u32, id: u32, local: &mut HashMap<(u32, u32), usize>, lines: &mut Vec<String>) -> usize {
        if id == EMPTY {
            return 0;
        }
        if d == 0 {
            return 1;
        }
        if let Some(&i) = local.get(&(d, id)) {
            return i;
        }
        let pairs: Vec<String> = self
            .children(d, id)
            .iter()
            .map(|&(l, r)| {
                let l = self.export_rec(d - 1, l, local, lines);
                let r = self.export_rec(d - 1, r, local, lines);
                format!("{l},{r}")
            })
            .collect();
        lines.push(format!("{d}:{}", pairs.join(" ")));
        let i = lines.len() + 1;
        local.insert((d, id), i);
        i
    }

    /// Reads an encoding produced by [`Engine::export_theory`].
    pub fn import_theory(&mut self, text: &str) -> Result<Theory, SerialError> {
        let bad = |m: &str| SerialError::Malformed(m.to_string());
        let mut nodes: Vec<(u32, u32)> = Vec::new();
        let mut last = None;
        for line in text.split(';') {
            let (d, body) = line.trim().split_once(':').ok_or_else(|| bad(line))?;
            let d: u32 = d.parse().map_err(|_| bad(line))?;
            if d > self.depth_cap {
                return Err(bad("depth beyond the engine cap"));
            }
            if body == "-" || body == "+" {
                if d != 0 && body == "+" {
                    return Err(bad(line));
                }
                last = Some(Theory {
                    depth: d,
                    id: if body == "+" { 1 } else { EMPTY },
                });
                continue;
            }
            if d == 0 {
                return Err(bad(line));
            }
            let mut pairs = BTreeSet::new();
            for pair in body.split_whitespace() {
                let (l, r) = pair.split_once(',').ok_or_else(|| bad(pair))?;
                let l = self.resolve(&nodes, d - 1, l)?;
                let r = self.resolve(&nodes, d - 1, r)?;
                pairs.insert((l, r));
            }
            if pairs.is_empty() {
                return Err(bad(line));
            }
            let id = self.intern(d, pairs.into_iter().collect());
            nodes.push((d, id));
            last = Some(Theory { depth: d, id });
        }
        last.ok_or_else(|| bad("no nodes"))
    }

    fn resolve(&self, nodes: &[(u32, u32)], d: u32, s: &str) -> Result<u32, SerialError> {
        let i: usize = s.parse().map_err(|_| SerialError::Malformed(s.to_string()))?;
        match i {
            0 => Ok(EMPTY),
            1 if d == 0 => Ok(1),
            1 => Err(SerialError::Malformed(format!("point reference at depth {d}"))),
            _ => {
                let &(nd, id) = nodes.get(i - 2).ok_or(SerialError::Forward(i))?;
                if nd != d {
                    return Err(SerialError::Malformed(format!("node {i} has depth {nd}, expected {d}")));
                }
                Ok(if d == 0 { id.min(1) } else { id })
            }
        }
    }

    /// All memoised term theories, sorted by key.
    pub fn export_memo(&self, with_theories: bool) -> Vec<MemoEntry> {
        let mut out: Vec<MemoEntry> = self
            .memo_entries()
            .map(|(t, d, id)| {
                let th = Theory { depth: d, id };
                MemoEntry {
                    key: memo_key(t, d),
                    digest: self.digest(th),
                    theory: with_theories.then(|| self.export_theory(th)),
                }
            })
            .collect();
        out.sort_by(|a, b| a.key.cmp(&b.key));
        out
    }

    /// Loads entries that carry a theory; entries with only a digest are
    /// skipped. Returns the number loaded.
    pub fn import_memo(&mut self, entries: &[MemoEntry]) -> Result<usize, SerialError> {
        let mut loaded = 0;
        for e in entries {
            let Some(text) = &e.theory else { continue };
            let (t, d) = parse_memo_key(&e.key)?;
            if d > self.depth_cap {
                continue;
            }
            let th = self.import_theory(text)?;
            if th.depth != d || self.digest(th) != e.digest {
                return Err(SerialError::DigestMismatch(e.key.clone()));
            }
            self.insert_memo(t, th);
            loaded += 1;
        }
        Ok(loaded)
    }
}

pub fn memo_key(t: &Term, n: u32) -> String {
    format!("{n}:{}", print_term(t))
}

pub fn parse_memo_key(key: &str) -> Result<(Term, u32), SerialError> {
    let err = || SerialError::Key(key.to_string());
    let (d, t) = key.split_once(':').ok_or_else(err)?;
    let d: u32 = d.parse().map_err(|_| err())?;
    let t = parse_term(t).map_err(|_| err())?;
    Ok((t, d))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Term {
        parse_term(s).unwrap()
    }

    #[test]
    fn digests_agree_across_engines() {
        let mut e1 = Engine::default();
        let mut e2 = Engine::default();
        e2.theory(&p("w^3 + z"), 4).unwrap();
        for s in ["w", "w^2 + 1", "0", "3", "w^w"] {
            for d in 0..=4 {
                let a = e1.theory(&p(s), d).unwrap();
                let b = e2.theory(&p(s), d).unwrap();
                assert_eq!(e1.digest(a), e2.digest(b));
            }
        }
        let a = e1.theory(&p("w"), 3).unwrap();
        let b = e1.theory(&p("w.2"), 3).unwrap();
        assert_ne!(e1.digest(a), e1.digest(b));
    }

    #[test]
    fn theories_round_trip_between_engines() {
        let mut e1 = Engine::default();
        let mut e2 = Engine::default();
        for s in ["0", "1", "w", "w.w* + 2", "sumw[1; w*, w]", "w^w"] {
            for d in 0..=4 {
                let a = e1.theory(&p(s), d).unwrap();
                let text = e1.export_theory(a);
                let b = e2.import_theory(&text).unwrap();
                assert_eq!(b, e2.theory(&p(s), d).unwrap(), "{s} {d} {text}");
            }
        }
    }

    #[test]
    fn memo_round_trip() {
        let mut e1 = Engine::default();
        e1.theory(&p("w^2 + z"), 3).unwrap();
        let entries = e1.export_memo(true);
        assert!(!entries.is_empty());
        let mut e2 = Engine::default();
        assert_eq!(e2.import_memo(&entries).unwrap(), entries.len());
        let mut tampered = entries.clone();
        tampered[0].digest = "00".into();
        assert!(Engine::default().import_memo(&tampered).is_err());
    }

    #[test]
    fn rejects_bad_encodings() {
        let mut e = Engine::default();
        assert!(e.import_theory("").is_err());
        assert!(e.import_theory("2:5,0").is_err());
        assert!(e.import_theory("x").is_err());
    }
}
