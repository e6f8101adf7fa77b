//! On-disk memo of term theories.
//!
//! The first line is `scatter-ef-cache v1 <bounds-digest>`; every further
//! line is `key<TAB>digest` or `key<TAB>digest<TAB>theory`.

use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use crate::engine::{Engine, MemoEntry};

pub const CACHE_VERSION: u32 = 1;
const MAGIC: &str = "scatter-ef-cache";
/// Theories whose encoding is longer than this are stored as digests only.
pub const MAX_INLINE_THEORY: usize = 1 << 16;

#[derive(Debug, thiserror::Error)]
pub enum CacheError {
    #[error("cache file {path}: {source}")]
    Io { path: PathBuf, source: io::Error },
}

#[derive(Debug, Clone)]
pub struct CacheStore {
    pub path: PathBuf,
    pub version: u32,
    pub bounds_digest: String,
    pub entries: BTreeMap<String, MemoEntry>,
    /// Problems found while reading; the offending content was skipped.
    pub warnings: Vec<String>,
    /// The file exists but was written for other bounds or another version.
    pub foreign: bool,
}

impl CacheStore {
    /// Reads the store at `path`, or starts an empty one if there is none.
    /// Content written for other bounds or another version is ignored.
    pub fn open(path: impl AsRef<Path>, bounds_digest: &str) -> Result<CacheStore, CacheError> {
        let path = path.as_ref().to_path_buf();
        let mut store = CacheStore {
            path: path.clone(),
            version: CACHE_VERSION,
            bounds_digest: bounds_digest.to_string(),
            entries: BTreeMap::new(),
            warnings: Vec::new(),
            foreign: false,
        };
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(store),
            Err(source) => return Err(CacheError::Io { path, source }),
        };
        let mut lines = text.lines();
        let header: Vec<&str> = lines.next().unwrap_or("").split_whitespace().collect();
        match header.as_slice() {
            [MAGIC, "v1", digest] if *digest == bounds_digest => {}
            [MAGIC, "v1", digest] => {
                store.warnings.push(format!(
                    "cache was written with bounds {digest}, current bounds are {bounds_digest}; ignoring it"
                ));
                store.foreign = true;
                return Ok(store);
            }
            [MAGIC, version, ..] => {
                store
                    .warnings
                    .push(format!("unknown cache version {version}; ignoring it"));
                store.foreign = true;
                return Ok(store);
            }
            _ => {
                store
                    .warnings
                    .push("missing cache header; ignoring the file".to_string());
                store.foreign = true;
                return Ok(store);
            }
        }
        for (i, line) in lines.enumerate() {
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            let entry = match fields.as_slice() {
                [key, digest] => MemoEntry {
                    key: key.to_string(),
                    digest: digest.to_string(),
                    theory: None,
                },
                [key, digest, theory] => MemoEntry {
                    key: key.to_string(),
                    digest: digest.to_string(),
                    theory: Some(theory.to_string()),
                },
                _ => {
                    store.warnings.push(format!("line {}: corrupt record skipped", i + 2));
                    continue;
                }
            };
            store.entries.entry(entry.key.clone()).or_insert(entry);
        }
        Ok(store)
    }

    /// Loads every entry with a theory into the engine; entries that fail to
    /// decode or whose digest does not match are skipped with a warning.
    pub fn load_into(&mut self, engine: &mut Engine) -> usize {
        let mut loaded = 0;
        for e in self.entries.values() {
            if e.theory.is_none() {
                continue;
            }
            match engine.import_memo(std::slice::from_ref(e)) {
                Ok(k) => loaded += k,
                Err(err) => self.warnings.push(format!("{}: {err}", e.key)),
            }
        }
        loaded
    }

    /// Adds the engine's memo; existing keys are kept as they are.
    pub fn record(&mut self, engine: &Engine) -> usize {
        let mut added = 0;
        for mut e in engine.export_memo(true) {
            if self.entries.contains_key(&e.key) {
                continue;
            }
            if e.theory.as_ref().is_some_and(|t| t.len() > MAX_INLINE_THEORY) {
                e.theory = None;
            }
            self.entries.insert(e.key.clone(), e);
            added += 1;
        }
        added
    }

    pub fn save(&self) -> Result<(), CacheError> {
        let io_err = |source| CacheError::Io {
            path: self.path.clone(),
            source,
        };
        let tmp = self.path.with_extension("tmp");
        let mut f = io::BufWriter::new(fs::File::create(&tmp).map_err(io_err)?);
        writeln!(f, "{MAGIC} v{} {}", self.version, self.bounds_digest).map_err(io_err)?;
        for e in self.entries.values() {
            match &e.theory {
                Some(t) => writeln!(f, "{}\t{}\t{}", e.key, e.digest, t),
                None => writeln!(f, "{}\t{}", e.key, e.digest),
            }
            .map_err(io_err)?;
        }
        f.into_inner()
            .map_err(|e| io_err(e.into_error()))?
            .sync_all()
            .map_err(io_err)?;
        fs::rename(&tmp, &self.path).map_err(io_err)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::parse_term;

    #[test]
    fn round_trip_gives_the_same_verdicts_and_digests() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("memo.cache");
        let mut e1 = Engine::default();
        let digest = e1.config().digest();
        let (a, b) = (parse_term("w^2 + z").unwrap(), parse_term("w^2").unwrap());
        let l1 = e1.optimal_length(&a, &b, 5).unwrap();
        let mut store = CacheStore::open(&path, &digest).unwrap();
        assert!(store.record(&e1) > 0);
        store.save().unwrap();

        let mut store = CacheStore::open(&path, &digest).unwrap();
        assert!(store.warnings.is_empty(), "{:?}", store.warnings);
        let mut e2 = Engine::default();
        assert!(store.load_into(&mut e2) > 0);
        assert_eq!(e2.optimal_length(&a, &b, 5).unwrap(), l1);
        let th1 = e1.theory(&a, 4).unwrap();
        let th2 = e2.theory(&a, 4).unwrap();
        assert_eq!(e1.digest(th1), e2.digest(th2));
    }

    #[test]
    fn foreign_and_corrupt_content_is_skipped() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("memo.cache");
        fs::write(&path, "scatter-ef-cache v1 other\n1:w\tabc\n").unwrap();
        let s = CacheStore::open(&path, "mine").unwrap();
        assert!(s.entries.is_empty());
        assert_eq!(s.warnings.len(), 1);
        assert!(s.foreign);

        fs::write(&path, "scatter-ef-cache v9 mine\n").unwrap();
        assert!(CacheStore::open(&path, "mine").unwrap().warnings[0].contains("version"));

        fs::write(&path, "scatter-ef-cache v1 mine\nbroken\n1:w\tabc\n").unwrap();
        let mut s = CacheStore::open(&path, "mine").unwrap();
        assert_eq!(s.entries.len(), 1);
        assert_eq!(s.warnings.len(), 1);
        assert_eq!(s.load_into(&mut Engine::default()), 0);
    }
}
