//! On-disk cache of canonical-basis columns, one JSON-lines file per `(e, n)`.
//!
//! The first line is a header carrying the SHA-256 of everything after it.
//! Files are replaced atomically (write to a temporary sibling, then rename).
//! A file whose checksum or layout is wrong is reported and recomputed.

use std::collections::BTreeMap;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use fockpath_core::{partitions_of, CanonicalBasis, FockVector, Partition};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::json::{fock_terms_from_json, fock_terms_to_json, partition_from_json, partition_to_json};

pub const ENV_VAR: &str = "FOCKPATH_CACHE";
const FORMAT: &str = "fockpath-oracle";
const VERSION: u64 = 1;

#[derive(Debug, thiserror::Error)]
pub enum CacheError {
    #[error("cache I/O error on {path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("checksum mismatch in {0}")]
    Checksum(PathBuf),
    #[error("malformed cache file {path}: {msg}")]
    Format { path: PathBuf, msg: String },
    #[error("oracle failed: {0}")]
    Oracle(#[from] fockpath_core::Error),
}

/// What `fill` did.
#[derive(Debug)]
pub enum CacheStatus {
    Hit,
    Miss,
    /// The file was unusable; it has been recomputed and rewritten.
    Recomputed(CacheError),
}

pub type Columns = BTreeMap<Partition, FockVector>;

#[derive(Debug, Clone)]
pub struct OracleCache {
    dir: PathBuf,
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> CacheError + '_ {
    move |source| CacheError::Io { path: path.to_path_buf(), source }
}

impl OracleCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        OracleCache { dir: dir.into() }
    }

    /// Explicit directory if given, else `$FOCKPATH_CACHE`, else no cache.
    pub fn resolve(explicit: Option<&Path>) -> Option<Self> {
        explicit
            .map(Path::to_path_buf)
            .or_else(|| std::env::var_os(ENV_VAR).filter(|s| !s.is_empty()).map(PathBuf::from))
            .map(OracleCache::new)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path(&self, e: usize, n: usize) -> PathBuf {
        self.dir.join(format!("e{e}_n{n}.jsonl"))
    }

    /// `Ok(None)` when the file does not exist.
    pub fn read(&self, e: usize, n: usize) -> Result<Option<Columns>, CacheError> {
        let path = self.path(e, n);
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(err) if err.kind() == io::ErrorKind::NotFound => return Ok(None),
            Err(err) => return Err(io_err(&path)(err)),
        };
        let bad = |msg: String| CacheError::Format { path: path.clone(), msg };
        let (head, body) = text.split_once('\n').ok_or_else(|| bad("missing header".into()))?;
        let head: Value = serde_json::from_str(head).map_err(|e| bad(format!("header: {e}")))?;
        let sum = head["sha256"].as_str().ok_or_else(|| bad("header lacks sha256".into()))?;
        if hex::encode(Sha256::digest(body.as_bytes())) != sum {
            return Err(CacheError::Checksum(path));
        }
        if head["format"] != FORMAT || head["version"] != VERSION || head["e"] != e || head["n"] != n {
            return Err(bad(format!("header {head} does not describe e={e}, n={n}")));
        }
        let mut cols = Columns::new();
        for line in body.lines().filter(|l| !l.is_empty()) {
            let v: Value = serde_json::from_str(line).map_err(|e| bad(e.to_string()))?;
            let mu = partition_from_json(&v["mu"]).map_err(|e| bad(e.to_string()))?;
            let terms = fock_terms_from_json(&v["g"]).map_err(|e| bad(e.to_string()))?;
            cols.insert(mu, FockVector::from_terms(terms));
        }
        Ok(Some(cols))
    }

    pub fn write(&self, e: usize, n: usize, cols: &Columns) -> Result<(), CacheError> {
        fs::create_dir_all(&self.dir).map_err(io_err(&self.dir))?;
        let mut body = String::new();
        for (mu, g) in cols {
            let line = json!({ "mu": partition_to_json(mu), "g": fock_terms_to_json(g.terms().rev()) });
            body.push_str(&line.to_string());
            body.push('\n');
        }
        let head = json!({
            "format": FORMAT,
            "version": VERSION,
            "e": e,
            "n": n,
            "sha256": hex::encode(Sha256::digest(body.as_bytes())),
        });
        let path = self.path(e, n);
        let tmp = self.dir.join(format!(".e{e}_n{n}.jsonl.{}.tmp", std::process::id()));
        fs::write(&tmp, format!("{head}\n{body}")).map_err(io_err(&tmp))?;
        fs::rename(&tmp, &path).map_err(io_err(&path))
    }

    /// Loads every e-regular column of size `n` into `cb`, computing and
    /// storing them on a miss or an unusable file.
    pub fn fill(&self, cb: &mut CanonicalBasis, n: usize) -> Result<CacheStatus, CacheError> {
        let e = cb.e();
        let status = match self.read(e, n) {
            Ok(Some(cols)) => {
                for (mu, g) in cols {
                    cb.preload(mu, g);
                }
                return Ok(CacheStatus::Hit);
            }
            Ok(None) => CacheStatus::Miss,
            Err(err @ (CacheError::Checksum(_) | CacheError::Format { .. })) => CacheStatus::Recomputed(err),
            Err(err) => return Err(err),
        };
        let cols = compute_columns(cb, n)?;
        self.write(e, n, &cols)?;
        Ok(status)
    }
}

pub fn compute_columns(cb: &mut CanonicalBasis, n: usize) -> Result<Columns, CacheError> {
    let e = cb.e();
    let mut cols = Columns::new();
    for mu in partitions_of(n).into_iter().filter(|m| m.is_e_regular(e)) {
        let g = cb.get(&mu)?;
        cols.insert(mu, g);
    }
    Ok(cols)
}

/// Fills `cb` for every size up to `max_n`, reporting unusable files on stderr.
pub fn warm(cache: Option<&OracleCache>, cb: &mut CanonicalBasis, max_n: usize) -> Result<(), CacheError> {
    let Some(cache) = cache else { return Ok(()) };
    for n in 0..=max_n {
        if let CacheStatus::Recomputed(err) = cache.fill(cb, n)? {
            eprintln!("warning: {err}; recomputed {}", cache.path(cb.e(), n).display());
        }
    }
    Ok(())
}
